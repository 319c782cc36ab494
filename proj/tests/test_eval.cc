// tests/test_eval.cc
// Copyright 2026  The latrescore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "latrescore/error.h"
#include "latrescore/eval.h"
#include "latrescore/lattice_io.h"
#include "test_util.h"

namespace latrescore {
namespace {

using testing::letters;
using testing::test_data;

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("alignment counts match the independent oracle") {
  std::ifstream in(test_data("wer_pairs.tsv"));
  std::string line;
  std::vector<RefHypPair> pairs;
  WerCounts expected_total;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto f = split_tabs(line);
    REQUIRE(f.size() == 5);
    const WordSeq ref = split_words(f[0]);
    const WordSeq hyp = split_words(f[1]);
    const WerCounts expected{std::stol(f[2]), std::stol(f[3]), std::stol(f[4]),
                             static_cast<long>(ref.size())};
    CAPTURE(line);
    CHECK(wer(ref, hyp) == expected);
    pairs.emplace_back(ref, hyp);
    expected_total += expected;
    ++rows;
  }
  CHECK(rows == 300);
  CHECK(corpus_wer(pairs) == expected_total);
}

TEST_CASE("simple alignments") {
  CHECK(wer({"a", "b", "c"}, {"a", "b", "c"}).errors() == 0);
  CHECK(wer({"a", "b", "c"}, {}) == WerCounts{0, 3, 0, 3});
  CHECK(wer({"a"}, {"b", "a", "c"}) == WerCounts{0, 0, 2, 1});
  CHECK(wer({"a", "b"}, {"a", "x"}) == WerCounts{1, 0, 0, 2});
  CHECK(wer({"a", "b"}, {"a", "x"}).wer() == 0.5);
  CHECK_THROWS_AS(wer({}, {"a"}), Error);
}

TEST_CASE("relative reduction") {
  CHECK(relative_reduction(9.0, 6.8) == doctest::Approx(24.444).epsilon(1e-4));
  CHECK(relative_reduction(7.7, 5.9) == doctest::Approx(23.377).epsilon(1e-4));
  CHECK(relative_reduction(10.0, 10.0) == 0.0);
  CHECK(relative_reduction(10.0, 12.0) == -20.0);
  CHECK_THROWS_AS(relative_reduction(0.0, 1.0), Error);
}

TEST_CASE("oracle WER over candidates") {
  const WordSeq ref = {"a", "b", "c"};
  const std::vector<WordSeq> cands = {{"x", "y"}, {"a", "c"}, {"a", "b", "d"}};
  CHECK(oracle_wer(cands, ref).errors() == 1);
  CHECK_THROWS_AS(oracle_wer(std::vector<WordSeq>{}, ref), Error);
}

TEST_CASE("lattice oracle WER equals the best enumerated path") {
  const WordSeq vocab = letters(4);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Lattice l = synth_lattice(seed, 9, 3, vocab);
    if (seed % 3 == 0) {
      Arc &arc = l.arcs[seed % l.arcs.size()];
      arc.word = std::string(kEpsilon);
      arc.lm = 0.0;
    }
    const WordSeq ref = {vocab[seed % 4], vocab[(seed + 1) % 4], "a", "d", "b"};
    long best = 1 << 30;
    for (const Path &p : enumerate_paths(l, 100000))
      best = std::min(best, wer(ref, p.words).errors());
    const WerCounts got = lattice_oracle_wer(l, ref);
    CHECK(got.errors() == best);
    CHECK(got.reference_length == 5);
  }
}

TEST_CASE("report formatting") {
  CHECK(format_percent(0.1764705) == "17.6");
  CHECK(format_percent(0.0) == "0.0");
  std::ostringstream out;
  const ReportRow rows[] = {{2, "iterative", "rich", "yes", 0.125, std::nullopt}};
  const std::string notes[] = {"hello"};
  write_report_tsv(out, rows, notes);
  CHECK(out.str() ==
        "# hello\n"
        "iteration\tmethod\tsearch_setting\tcontext\tdev_wer\teval_wer\n"
        "2\titerative\trich\tyes\t12.5\t-\n");
}

}  // TEST_SUITE
}  // namespace latrescore
