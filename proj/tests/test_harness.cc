// tests/test_harness.cc
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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "latrescore/error.h"
#include "latrescore/eval.h"
#include "latrescore/harness.h"
#include "latrescore/lattice_io.h"
#include "test_util.h"

namespace latrescore {
namespace {

using testing::TempDir;

WorldConfig small() {
  WorldConfig c;
  c.ensemble_size = 4;
  c.vocab_size = 10;
  c.sessions = 2;
  c.utterances_per_session = 6;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("worlds are deterministic in the seed") {
  const SyntheticWorld a = build_world(5, small());
  const SyntheticWorld b = build_world(5, small());
  const SyntheticWorld c = build_world(6, small());
  REQUIRE(a.sessions.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(a.sessions[s].lattices == b.sessions[s].lattices);
    CHECK(a.sessions[s].references == b.sessions[s].references);
  }
  CHECK(a.transition == b.transition);
  CHECK_FALSE(a.sessions[0].lattices == c.sessions[0].lattices);
  CHECK(write_arpa(*a.tables[3]) == write_arpa(*b.tables[3]));
}

TEST_CASE("the truth is a path of every lattice") {
  const SyntheticWorld w = build_world(11, small());
  for (const LatticeSession &s : w.sessions) {
    CHECK(s.session_id.rfind("world11-s", 0) == 0);
    REQUIRE(s.lattices.size() == 6);
    for (std::size_t j = 0; j < s.lattices.size(); ++j) {
      CHECK(validate(s.lattices[j]).ok());
      CHECK(s.references[j].size() >= 4);
      CHECK(s.references[j].size() <= 9);
      CHECK(lattice_oracle_wer(s.lattices[j], s.references[j]).errors() == 0);
    }
  }
}

TEST_CASE("the true chain and its stationary distribution") {
  const SyntheticWorld w = build_world(2, small());
  const std::size_t v = w.vocab.size();
  double total = 0.0;
  for (double p : w.stationary) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t b = 0; b < v; ++b) {
    double next = 0.0;
    for (std::size_t a = 0; a < v; ++a) next += w.stationary[a] * w.transition[a][b];
    CHECK(next == doctest::Approx(w.stationary[b]).epsilon(1e-10));
  }
  for (const auto &row : w.transition) {
    double s = 0.0;
    for (double p : row) s += p;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ensemble members alternate direction and are normalised") {
  const SyntheticWorld w = build_world(3, small());
  REQUIRE(w.ensemble.size() == 4);
  const char *names[] = {"F1", "B1", "F2", "B2"};
  for (std::size_t e = 0; e < 4; ++e) {
    CHECK(w.ensemble[e]->name() == names[e]);
    CHECK(w.ensemble[e]->direction() == (e % 2 ? Direction::kBackward : Direction::kForward));
    const NgramTable &t = *w.tables[e];
    for (const std::string &prev : w.vocab) {
      const TokenId h[] = {*t.find_word(prev)};
      double s = 0.0;
      for (const std::string &next : w.vocab) s += std::exp(t.logprob(h, *t.find_word(next)));
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  const IterationSchedule sched = w.schedule(3, true);
  REQUIRE(sched.steps.size() == 3);
  CHECK(sched.steps[1].mode == ContextMode::kBackward);
  CHECK_THROWS_AS(w.schedule(5, true), Error);
  CHECK_THROWS_AS(w.schedule(0, false), Error);
}

TEST_CASE("a world written to disk loads back") {
  TempDir dir;
  const SyntheticWorld w = build_world(4, small());
  write_world(w, dir.path());
  for (const LatticeSession &s : w.sessions) {
    const LatticeSession back = load_session(dir / (s.session_id + ".jsonl"));
    CHECK(back.references == s.references);
    REQUIRE(back.lattices.size() == s.lattices.size());
    for (std::size_t j = 0; j < s.lattices.size(); ++j)
      CHECK(isomorphic(back.lattices[j], parse_slf(write_slf(s.lattices[j]))));
  }
  const NgramTable f1 = parse_arpa(read_file(dir / "lm/F1.arpa"));
  CHECK(f1.order() == 2);
}

TEST_CASE("curve layout and averaging") {
  const SyntheticWorld w = build_world(9, small());
  const std::vector<CurvePoint> curve = replay_fig3(w, 3, 20);
  REQUIRE(curve.size() == 12);
  int lattice = 0, nbest = 0, context = 0;
  for (const CurvePoint &p : curve) {
    lattice += p.search == "lattice";
    nbest += p.search == "20-best";
    context += p.context;
    CHECK(p.wer >= 0.0);
    CHECK(p.iteration >= 1);
    CHECK(p.iteration <= 3);
  }
  CHECK(lattice == 6);
  CHECK(nbest == 6);
  CHECK(context == 6);

  const auto mean = average_curves({curve, curve});
  for (std::size_t i = 0; i < curve.size(); ++i) CHECK(mean[i].wer == curve[i].wer);
  std::vector<CurvePoint> shifted = curve;
  shifted[0].iteration = 7;
  CHECK_THROWS_AS(average_curves({curve, shifted}), Error);
  CHECK(average_curves({}).empty());

  std::ostringstream out;
  write_curves_tsv(out, {{2, "lattice", true, 0.125}});
  CHECK(out.str() == "iteration\tsearch\tcontext\twer\n2\tlattice\tyes\t12.50\n");
}

TEST_CASE("configuration checks") {
  WorldConfig c = small();
  c.ensemble_size = 1;
  CHECK_THROWS_AS(build_world(1, c), Error);
  c = small();
  c.vocab_size = 3;
  CHECK_THROWS_AS(build_world(1, c), Error);
  c = small();
  c.max_words = 2;
  CHECK_THROWS_AS(build_world(1, c), Error);
  c = small();
  c.skip_prob = 1.5;
  CHECK_THROWS_AS(build_world(1, c), Error);
  const SyntheticWorld w = build_world(1, 2, 6, 3);
  CHECK(w.ensemble.size() == 2);
  CHECK(w.vocab.size() == 6);
  CHECK(w.sessions[0].lattices.size() == 3);
}

}  // TEST_SUITE
}  // namespace latrescore
