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


#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "ganmm/io.hpp"

using namespace ganmm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("ganmm_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t parse_error_line(const std::string &text) {
  try {
    parse_embeddings(text, "t.emb");
  } catch (const ParseError &e) {
    return e.line();
  }
  return 0;
}

std::string parse_error_text(const std::string &text) {
  try {
    parse_embeddings(text, "t.emb");
  } catch (const ParseError &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("uniform segments on one region") {
  const auto w = uniform_segments({{0.0, 3.0}}, 1.5, 0.5);
  const std::vector<Window> expect{{0.0, 1.5}, {0.5, 2.0}, {1.0, 2.5}, {1.5, 3.0}};
  CHECK(w == expect);
}

TEST_CASE("short region yields a single full window") {
  const auto w = uniform_segments({{0.0, 1.0}}, 1.5, 0.5);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == Window{0.0, 1.0});
}

TEST_CASE("two regions enumerate independently") {
  // [0,2]: starts 0, 0.5 (1.0 + 1.5 > 2). [5,6.5]: exactly one window.
  const auto w = uniform_segments({{0.0, 2.0}, {5.0, 6.5}}, 1.5, 0.5);
  const std::vector<Window> expect{{0.0, 1.5}, {0.5, 2.0}, {5.0, 6.5}};
  CHECK(w == expect);
}

TEST_CASE("empty region list gives no windows") {
  CHECK(uniform_segments({}, 1.5, 0.5).empty());
}

TEST_CASE("window lengths and overlaps") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(0.2, 9.0), gap(0.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<SpeechRegion> regions;
    double t = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double s = t + gap(rng);
      regions.push_back({s, s + len(rng)});
      t = regions.back().end;
    }
    const auto w = uniform_segments(regions, 1.5, 0.5);
    for (const auto &r : regions) {
      int short_count = 0;
      const Window *prev = nullptr;
      for (const auto &x : w) {
        if (x.start < r.start - 1e-12 || x.end > r.end + 1e-12) continue;
        if (std::abs((x.end - x.start) - 1.5) > 1e-9) ++short_count;
        if (prev) CHECK(prev->end - x.start == doctest::Approx(1.0).epsilon(1e-9));
        prev = &x;
      }
      CHECK(short_count <= 1);
    }
  }
}

TEST_CASE("bad window parameters and overlapping regions throw") {
  CHECK_THROWS_AS(uniform_segments({{0.0, 3.0}}, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(uniform_segments({{0.0, 3.0}}, 1.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_segments({{0.0, 3.0}, {2.0, 4.0}}, 1.5, 0.5),
                  std::invalid_argument);
}

TEST_CASE("well formed embeddings file") {
  const std::string text =
      "#dim 4\n"
      "0.0 1.5 1 2 3 4\n"
      "0.5 2.0 -1 0.5 2e-3 7\n"
      "1.0 2.5 0 0 0 1\n";
  const auto s = parse_embeddings(text, "sess.emb");
  CHECK(s.size() == 3);
  CHECK(s.dim == 4);
  CHECK(s.session_id == "sess");
  CHECK(s.segments[1].vector[2] == 2e-3);
  CHECK(s.as_matrix().rows() == 3);
}

TEST_CASE("session header overrides the file name") {
  const auto s = parse_embeddings("#dim 1\n#session meeting7\n0 1 5\n", "x.emb");
  CHECK(s.session_id == "meeting7");
}

TEST_CASE("embedding parse errors are distinct and carry line numbers") {
  const std::string head = "#dim 4\n0.0 1.5 1 2 3 4\n";
  CHECK(parse_error_line(head + "0.5 2.0 1 2 3\n") == 3);
  CHECK(parse_error_text(head + "0.5 2.0 1 2 3\n").find("dimension mismatch") !=
        std::string::npos);
  CHECK(parse_error_line(head + "0.5 2.0 1 x 3 4\n") == 3);
  CHECK(parse_error_text(head + "0.5 2.0 1 x 3 4\n").find("non-numeric") !=
        std::string::npos);
  CHECK(parse_error_line(head + "\n-1.0 0.5 1 2 3 4\n") == 4);
  CHECK(parse_error_text(head + "-1.0 0.5 1 2 3 4\n").find("unsorted") !=
        std::string::npos);
  CHECK(parse_error_text(head + "0.5 2.0 1 nan 3 4\n").find("non-finite") !=
        std::string::npos);
  CHECK(parse_error_text(head + "0.5 0.5 1 2 3 4\n").find("end must exceed") !=
        std::string::npos);
  CHECK(parse_error_text("0 1 2\n").find("before #dim") != std::string::npos);
  CHECK(parse_error_text("#dim 2\n").find("no segments") != std::string::npos);
  CHECK(parse_error_text("").find("missing #dim") != std::string::npos);
}

TEST_CASE("embeddings round trip bit for bit") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  EmbeddingStream s;
  s.session_id = "rt";
  s.dim = 5;
  for (int i = 0; i < 20; ++i) {
    SegmentEmbedding seg{0.5 * i, 0.5 * i + 1.5, Vector(5)};
    for (int k = 0; k < 5; ++k) seg.vector[k] = g(rng) * 1e3;
    s.segments.push_back(seg);
  }
  const auto dir = scratch_dir("emb");
  write_embeddings(s, (dir / "rt.emb").string());
  const auto back = load_embeddings((dir / "rt.emb").string());
  CHECK(back.session_id == "rt");
  REQUIRE(back.size() == s.size());
  CHECK(back.as_matrix() == s.as_matrix());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.segments[i].start == s.segments[i].start);
    CHECK(back.segments[i].end == s.segments[i].end);
  }
}

TEST_CASE("missing file is reported") {
  CHECK_THROWS(load_embeddings("/nonexistent/never.emb"));
  CHECK_THROWS(load_sad("/nonexistent/never.sad"));
  CHECK_THROWS(load_rttm("/nonexistent/never.rttm"));
}

TEST_CASE("rttm field mapping") {
  const auto t = parse_rttm("SPEAKER s1 1 0.000 2.500 <NA> <NA> spkA <NA> <NA>\n", "x");
  REQUIRE(t.size() == 1);
  CHECK(t[0].start == 0.0);
  CHECK(t[0].duration == 2.5);
  CHECK(t[0].speaker == "spkA");
}

TEST_CASE("rttm skips non speaker lines") {
  const std::string text =
      ";; comment\n"
      "SPKR-INFO s1 1 <NA> <NA> <NA> unknown spkA <NA> <NA>\n"
      "SPEAKER s1 1 0.000 2.500 <NA> <NA> spkA <NA> <NA>\n"
      "LEXEME s1 1 0.5 0.2 hello lex spkA <NA> <NA>\n"
      "\n"
      "SPEAKER s1 1 2.500 1.000 <NA> <NA> spkB <NA> <NA>\n";
  const auto t = parse_rttm(text, "x");
  REQUIRE(t.size() == 2);
  CHECK(t[1].speaker == "spkB");
}

TEST_CASE("malformed rttm lines carry line numbers") {
  const std::string good = "SPEAKER s1 1 0.000 2.500 <NA> <NA> spkA <NA> <NA>\n";
  try {
    parse_rttm(good + "SPEAKER s1 1 abc 2.5 <NA> <NA> spkA <NA> <NA>\n", "x");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_rttm("SPEAKER s1 1 0.0\n", "x"), ParseError);
  CHECK_THROWS_AS(parse_rttm("SPEAKER s1 1 0.0 0.0 <NA> <NA> a <NA> <NA>\n", "x"),
                  ParseError);
}

TEST_CASE("rttm round trip of five turns") {
  const std::vector<Turn> turns{{0.0, 1.25, "A"}, {1.25, 2.0, "B"}, {3.5, 0.75, "A"},
                                {4.25, 3.125, "C"}, {8.0, 1.0, "B"}};
  const auto dir = scratch_dir("rttm");
  const std::string path = (dir / "sess.rttm").string();
  write_rttm(turns, "sess", path);
  const auto back = load_rttm(path);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(back[i].start == doctest::Approx(turns[i].start).epsilon(1e-12));
    CHECK(back[i].duration == doctest::Approx(turns[i].duration).epsilon(1e-12));
    CHECK(back[i].speaker == turns[i].speaker);
  }
  CHECK(rttm_session_id(path) == "sess");
}

TEST_CASE("sad round trip and validation") {
  const std::vector<SpeechRegion> regions{{0.0, 2.5}, {3.0, 7.25}, {9.5, 10.0}};
  const auto dir = scratch_dir("sad");
  write_sad(regions, (dir / "a.sad").string());
  const auto back = load_sad((dir / "a.sad").string());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].start == regions[i].start);
    CHECK(back[i].end == regions[i].end);
  }
  CHECK_THROWS_AS(parse_sad("0 1\n0.5 2\n", "x"), ParseError);
  CHECK_THROWS_AS(parse_sad("2 1\n", "x"), ParseError);
  CHECK_THROWS_AS(parse_sad("0 1 2\n", "x"), ParseError);
}

}  // TEST_SUITE
