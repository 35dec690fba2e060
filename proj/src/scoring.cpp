// Copyright 2026 The ganmm-diar Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ganmm/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ganmm/common.hpp"

namespace ganmm {

namespace {

std::int64_t to_ms(double seconds) { return std::llround(seconds * 1000.0); }

struct MsTurn {
  std::int64_t start;
  std::int64_t end;
  int speaker;
};

struct Atom {
  std::int64_t start;
  std::int64_t end;
  std::vector<int> ref;  // distinct reference speaker ids
  std::vector<int> hyp;  // distinct hypothesis speaker ids
  bool scored;
};

std::vector<MsTurn> to_ms_turns(const std::vector<Turn> &turns,
                                std::vector<std::string> &names) {
  std::map<std::string, int> ids;
  for (const auto &n : names) ids.emplace(n, static_cast<int>(ids.size()));
  std::vector<MsTurn> out;
  for (const auto &t : turns) {
    if (!(t.duration > 0.0)) throw std::invalid_argument("turn duration <= 0");
    auto [it, inserted] = ids.emplace(t.speaker, static_cast<int>(names.size()));
    if (inserted) names.push_back(t.speaker);
    const std::int64_t s = to_ms(t.start);
    const std::int64_t e = to_ms(t.end());
    if (e > s) out.push_back({s, e, it->second});
  }
  return out;
}

struct Segmentation {
  std::vector<std::string> ref_names;
  std::vector<std::string> hyp_names;
  std::vector<Atom> atoms;
  std::int64_t span_ms = 0;
};

void collect_speakers(const std::vector<MsTurn> &turns, std::int64_t a,
                      std::int64_t b, std::vector<int> &out) {
  out.clear();
  for (const auto &t : turns)
    if (t.start <= a && t.end >= b) out.push_back(t.speaker);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

Segmentation segment(const std::vector<Turn> &reference,
                     const std::vector<Turn> &hypothesis,
                     const DerOptions &options) {
  if (options.collar < 0.0) throw std::invalid_argument("collar must be >= 0");
  Segmentation seg;
  const auto ref = to_ms_turns(reference, seg.ref_names);
  const auto hyp = to_ms_turns(hypothesis, seg.hyp_names);
  const std::int64_t collar = to_ms(options.collar);

  std::vector<std::int64_t> cuts;
  std::vector<std::pair<std::int64_t, std::int64_t>> zones;
  for (const auto &t : ref) {
    seg.span_ms = std::max(seg.span_ms, t.end);
    for (std::int64_t b : {t.start, t.end}) {
      cuts.push_back(b);
      if (collar > 0) {
        zones.emplace_back(b - collar, b + collar);
        cuts.push_back(std::max<std::int64_t>(0, b - collar));
        cuts.push_back(b + collar);
      }
    }
  }
  for (const auto &t : hyp) {
    cuts.push_back(t.start);
    cuts.push_back(t.end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Atom atom{cuts[i], cuts[i + 1], {}, {}, true};
    collect_speakers(ref, atom.start, atom.end, atom.ref);
    collect_speakers(hyp, atom.start, atom.end, atom.hyp);
    if (atom.ref.empty() && atom.hyp.empty()) continue;
    const std::int64_t mid2 = atom.start + atom.end;
    for (const auto &[lo, hi] : zones)
      if (2 * lo <= mid2 && mid2 <= 2 * hi) {
        atom.scored = false;
        break;
      }
    if (!options.score_overlap && atom.ref.size() > 1) atom.scored = false;
    seg.atoms.push_back(std::move(atom));
  }
  return seg;
}

std::vector<std::vector<std::int64_t>> overlap_matrix(const Segmentation &seg) {
  std::vector<std::vector<std::int64_t>> w(
      seg.hyp_names.size(), std::vector<std::int64_t>(seg.ref_names.size(), 0));
  for (const auto &a : seg.atoms) {
    if (!a.scored) continue;
    const std::int64_t d = a.end - a.start;
    for (int h : a.hyp)
      for (int r : a.ref)
        w[static_cast<std::size_t>(h)][static_cast<std::size_t>(r)] += d;
  }
  return w;
}

// mapping[h] = reference id or -1; keeps only pairs with positive overlap.
std::vector<int> optimal_mapping(const Segmentation &seg) {
  const auto w = overlap_matrix(seg);
  std::vector<int> map = hungarian_max(w);
  for (std::size_t h = 0; h < map.size(); ++h)
    if (map[h] >= 0 && w[h][static_cast<std::size_t>(map[h])] == 0) map[h] = -1;
  return map;
}

std::size_t correct_in(const Atom &a, const std::vector<int> &map) {
  std::size_t correct = 0;
  for (int h : a.hyp) {
    const int r = map[static_cast<std::size_t>(h)];
    if (r >= 0 && std::binary_search(a.ref.begin(), a.ref.end(), r)) ++correct;
  }
  return correct;
}

std::string format_percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * x);
  return buf;
}

}  // namespace

std::vector<int> hungarian_max(
    const std::vector<std::vector<std::int64_t>> &w) {
  const std::size_t rows = w.size();
  const std::size_t cols = rows ? w[0].size() : 0;
  const std::size_t n = std::max(rows, cols);
  std::vector<int> result(rows, -1);
  if (n == 0 || cols == 0) return result;

  // Minimise -w on the zero-padded square matrix (1-based potentials).
  auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
    if (i < rows && j < cols) return -w[i][j];
    return 0;
  };
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::int64_t delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] >= 1 && p[j] <= rows && j <= cols)
      result[p[j] - 1] = static_cast<int>(j - 1);
  return result;
}

OverlapTable speaker_overlap(const std::vector<Turn> &reference,
                             const std::vector<Turn> &hypothesis,
                             const DerOptions &options) {
  const Segmentation seg = segment(reference, hypothesis, options);
  return {seg.hyp_names, seg.ref_names, overlap_matrix(seg)};
}

DerReport compute_der(const std::vector<Turn> &reference,
                      const std::vector<Turn> &hypothesis,
                      const DerOptions &options) {
  const Segmentation seg = segment(reference, hypothesis, options);
  const std::vector<int> map = optimal_mapping(seg);

  DerReport rep;
  rep.span_ms = seg.span_ms;
  for (const auto &a : seg.atoms) {
    if (!a.scored) continue;
    const std::int64_t d = a.end - a.start;
    const auto nr = static_cast<std::int64_t>(a.ref.size());
    const auto nh = static_cast<std::int64_t>(a.hyp.size());
    const auto correct = static_cast<std::int64_t>(correct_in(a, map));
    rep.scored_ms += d * nr;
    rep.miss_ms += d * std::max<std::int64_t>(0, nr - nh);
    rep.false_alarm_ms += d * std::max<std::int64_t>(0, nh - nr);
    rep.confusion_ms += d * (std::min(nr, nh) - correct);
  }
  if (rep.scored_ms == 0)
    throw AlgorithmError("no scorable reference speech after exclusions");
  rep.der = static_cast<double>(rep.miss_ms + rep.false_alarm_ms +
                                rep.confusion_ms) /
            static_cast<double>(rep.scored_ms);
  for (std::size_t h = 0; h < map.size(); ++h)
    if (map[h] >= 0)
      rep.mapping.emplace(seg.hyp_names[h],
                          seg.ref_names[static_cast<std::size_t>(map[h])]);
  return rep;
}

std::int64_t mapped_overlap_ms(
    const OverlapTable &table,
    const std::map<std::string, std::string> &mapping) {
  std::int64_t total = 0;
  for (const auto &[h, r] : mapping) {
    const auto hi = std::find(table.hyp_speakers.begin(),
                              table.hyp_speakers.end(), h);
    const auto ri = std::find(table.ref_speakers.begin(),
                              table.ref_speakers.end(), r);
    if (hi == table.hyp_speakers.end() || ri == table.ref_speakers.end())
      continue;
    total += table.ms[static_cast<std::size_t>(hi - table.hyp_speakers.begin())]
                     [static_cast<std::size_t>(ri - table.ref_speakers.begin())];
  }
  return total;
}

std::map<std::string, std::string> brute_force_mapping(
    const std::vector<Turn> &reference, const std::vector<Turn> &hypothesis,
    const DerOptions &options) {
  const OverlapTable t = speaker_overlap(reference, hypothesis, options);
  const std::size_t nh = t.hyp_speakers.size();
  const std::size_t nr = t.ref_speakers.size();
  if (nh > 8 || nr > 8)
    throw std::invalid_argument("brute_force_mapping: at most 8 speakers");

  // Enumerate injective maps of the smaller side into the larger one.
  const bool rows_small = nh <= nr;
  const std::size_t small = rows_small ? nh : nr;
  const std::size_t large = rows_small ? nr : nh;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = -1;
  std::vector<std::size_t> best_perm;
  do {
    std::int64_t score = 0;
    for (std::size_t s = 0; s < small; ++s)
      score += rows_small ? t.ms[s][perm[s]] : t.ms[perm[s]][s];
    if (score > best) {
      best = score;
      best_perm.assign(perm.begin(), perm.begin() + static_cast<long>(small));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::map<std::string, std::string> mapping;
  for (std::size_t s = 0; s < small; ++s) {
    const std::size_t h = rows_small ? s : best_perm[s];
    const std::size_t r = rows_small ? best_perm[s] : s;
    if (t.ms[h][r] > 0) mapping.emplace(t.hyp_speakers[h], t.ref_speakers[r]);
  }
  return mapping;
}

double minority_speaker_error(const std::vector<Turn> &reference,
                              const std::vector<Turn> &hypothesis,
                              double threshold, double session_span,
                              const DerOptions &options) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("threshold must lie in (0, 1)");
  if (!(session_span > 0.0))
    throw std::invalid_argument("session span must be positive");
  const Segmentation seg = segment(reference, hypothesis, options);
  const std::vector<int> map = optimal_mapping(seg);

  // Total speech per reference speaker, counting overlapping turns once.
  std::vector<std::int64_t> talk(seg.ref_names.size(), 0);
  for (const auto &a : seg.atoms)
    for (int r : a.ref) talk[static_cast<std::size_t>(r)] += a.end - a.start;
  const double limit = threshold * session_span * 1000.0;

  std::int64_t err = 0;
  for (const auto &a : seg.atoms) {
    if (!a.scored || a.hyp.empty()) continue;
    for (int r : a.ref) {
      if (static_cast<double>(talk[static_cast<std::size_t>(r)]) >= limit)
        continue;
      const bool hit = std::any_of(a.hyp.begin(), a.hyp.end(), [&](int h) {
        return map[static_cast<std::size_t>(h)] == r;
      });
      if (!hit) err += a.end - a.start;
    }
  }
  return static_cast<double>(err) / (session_span * 1000.0);
}

AggregateReport aggregate_reports(const std::vector<SessionScore> &scores) {
  AggregateReport agg;
  agg.sessions = static_cast<int>(scores.size());
  const double inf = std::numeric_limits<double>::infinity();
  agg.buckets = {{"<10 min", 0, 10},         {"10-20 min", 10, 20},
                 {"20-30 min", 20, 30},      {"30-40 min", 30, 40},
                 {"40-50 min", 40, 50},      {"50-60 min", 50, 60},
                 {">=60 min", 60, inf}};
  if (scores.empty()) return agg;
  for (const auto &s : scores) agg.mean_der += s.report.der;
  agg.mean_der /= static_cast<double>(scores.size());
  for (const auto &s : scores)
    agg.std_der += (s.report.der - agg.mean_der) * (s.report.der - agg.mean_der);
  agg.std_der = std::sqrt(agg.std_der / static_cast<double>(scores.size()));

  for (const auto &s : scores) {
    const double minutes = s.report.span() / 60.0;
    for (auto &b : agg.buckets)
      if (minutes >= b.min_minutes && minutes < b.max_minutes) {
        ++b.sessions;
        b.mean_der += s.report.der;
        break;
      }
  }
  for (auto &b : agg.buckets)
    if (b.sessions > 0) b.mean_der /= b.sessions;
  return agg;
}

std::string format_report(const DerReport &r, const DerOptions &options) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "DER %s  (miss %.3f s, false alarm %.3f s, confusion %.3f s, "
                "scored speech %.3f s)\n",
                format_percent(r.der).c_str(), r.miss(), r.false_alarm(),
                r.confusion(), r.total_ref_speech());
  out << buf;
  for (const auto &[h, ref] : r.mapping) out << "  " << h << " -> " << ref << '\n';
  out << "der=" << format_percent(r.der) << '\n';
  std::snprintf(buf, sizeof buf,
                "miss=%.3f\nfalse_alarm=%.3f\nconfusion=%.3f\nscored=%.3f\n"
                "collar=%.3f\nscore_overlap=%d\n",
                r.miss(), r.false_alarm(), r.confusion(), r.total_ref_speech(),
                options.collar, options.score_overlap ? 1 : 0);
  out << buf;
  return out.str();
}

}  // namespace ganmm
