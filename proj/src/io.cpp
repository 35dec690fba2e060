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

#include "ganmm/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace ganmm {

namespace {

constexpr double kTimeEps = 1e-9;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool to_double(std::string_view tok, double *out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), *out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

template <typename F>
void for_each_line(const std::string &text, F f) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    f(lineno, std::string_view(line));
  }
}

}  // namespace

Matrix EmbeddingStream::as_matrix() const {
  Matrix m(static_cast<Index>(segments.size()), dim);
  for (std::size_t i = 0; i < segments.size(); ++i)
    m.row(static_cast<Index>(i)) = segments[i].vector.transpose();
  return m;
}

void validate_regions(const std::vector<SpeechRegion> &regions) {
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto &r = regions[i];
    if (!(r.end > r.start))
      throw std::invalid_argument("speech region " + std::to_string(i) +
                                  " has non-positive length");
    if (i > 0 && r.start < regions[i - 1].end - kTimeEps)
      throw std::invalid_argument("speech region " + std::to_string(i) +
                                  " overlaps or precedes its predecessor");
  }
}

std::vector<Window> uniform_segments(const std::vector<SpeechRegion> &regions,
                                     double win, double hop) {
  if (!(win > 0.0)) throw std::invalid_argument("window length must be > 0");
  if (!(hop > 0.0) || hop > win)
    throw std::invalid_argument("hop must satisfy 0 < hop <= window");
  validate_regions(regions);

  std::vector<Window> out;
  for (const auto &r : regions) {
    if (r.duration() < win - kTimeEps) {
      out.push_back({r.start, r.end});
      continue;
    }
    for (long i = 0;; ++i) {
      const double s = r.start + static_cast<double>(i) * hop;
      if (s + win > r.end + kTimeEps) break;
      out.push_back({s, s + win});
    }
  }
  return out;
}

EmbeddingStream parse_embeddings(const std::string &text,
                                 const std::string &source) {
  EmbeddingStream stream;
  stream.session_id = std::filesystem::path(source).stem().string();
  bool have_dim = false;

  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    auto toks = split_ws(line);
    if (toks.empty()) return;
    if (toks[0].front() == '#') {
      if (toks[0] == "#dim") {
        double d = 0;
        if (toks.size() != 2 || !to_double(toks[1], &d) || d < 1 ||
            d != std::floor(d))
          throw ParseError(source, lineno, "malformed #dim header");
        stream.dim = static_cast<int>(d);
        have_dim = true;
      } else if (toks[0] == "#session" && toks.size() == 2) {
        stream.session_id = std::string(toks[1]);
      }
      return;
    }
    if (!have_dim)
      throw ParseError(source, lineno, "segment line before #dim header");
    if (toks.size() != static_cast<std::size_t>(stream.dim) + 2)
      throw ParseError(source, lineno,
                       "dimension mismatch: expected " +
                           std::to_string(stream.dim) + " values, found " +
                           std::to_string(static_cast<long>(toks.size()) - 2));
    SegmentEmbedding seg;
    seg.vector.resize(stream.dim);
    double vals[2];
    for (std::size_t k = 0; k < toks.size(); ++k) {
      double v = 0;
      if (!to_double(toks[k], &v))
        throw ParseError(source, lineno,
                         "non-numeric field '" + std::string(toks[k]) + "'");
      if (!std::isfinite(v))
        throw ParseError(source, lineno, "non-finite value");
      if (k < 2)
        vals[k] = v;
      else
        seg.vector[static_cast<Index>(k - 2)] = v;
    }
    seg.start = vals[0];
    seg.end = vals[1];
    if (!(seg.end > seg.start))
      throw ParseError(source, lineno, "segment end must exceed start");
    if (!stream.segments.empty() && seg.start < stream.segments.back().start)
      throw ParseError(source, lineno, "unsorted timestamps");
    stream.segments.push_back(std::move(seg));
  });

  if (!have_dim) throw ParseError(source, 0, "missing #dim header");
  if (stream.segments.empty()) throw ParseError(source, 0, "no segments");
  return stream;
}

EmbeddingStream load_embeddings(const std::string &path) {
  return parse_embeddings(read_file(path), path);
}

void write_embeddings(const EmbeddingStream &stream, const std::string &path) {
  auto out = open_out(path);
  out << "#dim " << stream.dim << '\n';
  if (!stream.session_id.empty()) out << "#session " << stream.session_id << '\n';
  out << std::setprecision(17);
  for (const auto &seg : stream.segments) {
    out << seg.start << ' ' << seg.end;
    for (Index k = 0; k < seg.vector.size(); ++k) out << ' ' << seg.vector[k];
    out << '\n';
  }
}

std::vector<SpeechRegion> parse_sad(const std::string &text,
                                    const std::string &source) {
  std::vector<SpeechRegion> regions;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') return;
    SpeechRegion r;
    if (toks.size() != 2 || !to_double(toks[0], &r.start) ||
        !to_double(toks[1], &r.end))
      throw ParseError(source, lineno, "expected 'start end'");
    if (!(r.end > r.start))
      throw ParseError(source, lineno, "region end must exceed start");
    if (!regions.empty() && r.start < regions.back().end - kTimeEps)
      throw ParseError(source, lineno, "regions must be sorted and disjoint");
    regions.push_back(r);
  });
  return regions;
}

std::vector<SpeechRegion> load_sad(const std::string &path) {
  return parse_sad(read_file(path), path);
}

void write_sad(const std::vector<SpeechRegion> &regions,
               const std::string &path) {
  auto out = open_out(path);
  out << std::setprecision(17);
  for (const auto &r : regions) out << r.start << ' ' << r.end << '\n';
}

std::vector<Turn> parse_rttm(const std::string &text,
                             const std::string &source) {
  std::vector<Turn> turns;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    auto toks = split_ws(line);
    if (toks.empty() || toks[0] != "SPEAKER") return;
    Turn t;
    if (toks.size() < 8 || !to_double(toks[3], &t.start) ||
        !to_double(toks[4], &t.duration))
      throw ParseError(source, lineno, "malformed SPEAKER line");
    if (!(t.duration > 0.0))
      throw ParseError(source, lineno, "turn duration must be positive");
    t.speaker = std::string(toks[7]);
    turns.push_back(std::move(t));
  });
  return turns;
}

std::vector<Turn> load_rttm(const std::string &path) {
  return parse_rttm(read_file(path), path);
}

std::string format_rttm(const std::vector<Turn> &turns,
                        const std::string &session_id) {
  const std::string file = session_id.empty() ? "session" : session_id;
  std::string out;
  char buf[64];
  for (const auto &t : turns) {
    out += "SPEAKER ";
    out += file;
    std::snprintf(buf, sizeof buf, " 1 %.3f %.3f <NA> <NA> ", t.start,
                  t.duration);
    out += buf;
    out += t.speaker;
    out += " <NA> <NA>\n";
  }
  return out;
}

void write_rttm(const std::vector<Turn> &turns, const std::string &session_id,
                const std::string &path) {
  auto out = open_out(path);
  out << format_rttm(turns, session_id);
}

std::string rttm_session_id(const std::string &path) {
  std::string id;
  for_each_line(read_file(path), [&](std::size_t, std::string_view line) {
    auto toks = split_ws(line);
    if (id.empty() && toks.size() >= 2 && toks[0] == "SPEAKER")
      id = std::string(toks[1]);
  });
  return id;
}

}  // namespace ganmm
