// tests/test_pushforward.cc
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
#include <map>
#include <set>

#include "brute_force.h"
#include "doctest.h"
#include "latrescore/error.h"
#include "latrescore/mock_scorer.h"
#include "latrescore/pushforward.h"
#include "test_util.h"

namespace latrescore {
namespace {

using testing::brute_force_best;
using testing::brute_force_rescore;
using testing::chain;
using testing::letters;

Lattice with_skip() {
  // 0 -a-> 1 -b-> 2 -c-> 3, plus 1 -!NULL-> 2
  Lattice l = chain({"a", "b", "c"});
  l.arcs.push_back({3, 1, 2, "!NULL", -0.4, 0.0});
  return l;
}

}  // namespace

TEST_SUITE("pushforward") {

TEST_CASE("interpolation weights follow 1/(1+i)") {
  CHECK(interpolation_weight(1) == 0.5);
  CHECK(interpolation_weight(2) == doctest::Approx(1.0 / 3.0));
  CHECK(interpolation_weight(7) == 0.125);
  CHECK_THROWS_AS(interpolation_weight(0), Error);
}

TEST_CASE("arc refinement and extension") {
  CHECK(refine_arc_lm(-2.0, -4.0, 0.5) == -3.0);
  CHECK(refine_arc_lm(-2.0, -4.0, 0.25) == -2.5);
  CHECK(extend(-10.0, -1.0, -3.0, 2.0) == -17.0);
  CHECK(extend(0.0, 0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("merge key length") {
  CHECK(merge_key_length(0) == 0);
  CHECK(merge_key_length(1) == 0);
  CHECK(merge_key_length(5) == 4);
  CHECK(merge_key_length(kUnbounded) == kUnbounded);
}

TEST_CASE("parameter checks") {
  CHECK_NOTHROW(RescoreParams::rich(1.0).check());
  CHECK_THROWS_AS((RescoreParams{0.0, 0.5, 5, 10}).check(), Error);
  CHECK_THROWS_AS((RescoreParams{1.0, 1.0, 5, 10}).check(), Error);
  CHECK_THROWS_AS((RescoreParams{1.0, 0.0, 5, 10}).check(), Error);
  CHECK_THROWS_AS((RescoreParams{1.0, 0.5, -1, 10}).check(), Error);
  CHECK_THROWS_AS((RescoreParams{1.0, 0.5, 5, 0}).check(), Error);
  const RescoreParams fast = RescoreParams::fast(2.0);
  CHECK(fast.ngram_approx == 0);
  CHECK(fast.beam_k == 1);
  CHECK(fast.alpha == 2.0);
}

TEST_CASE("single path refines every arc") {
  const WordSeq words = {"b", "a", "c", "a"};
  const Lattice l = chain(words);
  MockScorer mock(4, letters(3));
  const RescoredLattice out = rescore_lattice(l, mock, RescoreParams::rich(1.0), mock.init_state());
  REQUIRE(out.lattice.arcs.size() == l.arcs.size());
  ScorerState state = mock.init_state();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const ScoredStep step = mock.advance(state, words[i]);
    state = step.state;
    const Arc &arc = out.lattice.arcs[i];
    CHECK(arc.word == words[i]);
    CHECK(arc.acoustic == l.arcs[i].acoustic);
    CHECK(arc.lm == 0.5 * l.arcs[i].lm + 0.5 * step.logprob);
    CHECK(out.source_arc[i] == static_cast<ArcId>(i));
    CHECK(out.origin_arc[i] == static_cast<ArcId>(i));
  }
}

TEST_CASE("epsilon arcs keep lm 0 and do not advance the scorer") {
  MockScorer mock(8, letters(3));
  const RescoredLattice out =
      rescore_lattice(with_skip(), mock, RescoreParams::exhaustive(1.0), mock.init_state());
  CHECK(validate(out.lattice).ok());
  const double b_after_a = mock.advance(mock.advance(mock.init_state(), "a").state, "c").logprob;
  bool saw_skip = false;
  for (const Arc &arc : out.lattice.arcs) {
    if (is_epsilon(arc.word)) {
      CHECK(arc.lm == 0.0);
      saw_skip = true;
    }
  }
  CHECK(saw_skip);
  // "a c" via the skip: c is scored right after a.
  bool found = false;
  for (const Arc &arc : out.lattice.arcs)
    if (arc.word == "c" && arc.lm == 0.5 * with_skip().arcs[2].lm + 0.5 * b_after_a) found = true;
  CHECK(found);
}

TEST_CASE("exhaustive search equals path enumeration") {
  const WordSeq vocab = letters(5);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const Lattice l = synth_lattice(seed, 3 + seed % 8, 1 + seed % 4, vocab);
    MockScorer mock(seed + 100, vocab);
    const double alpha = 0.5 + 0.25 * (seed % 4);
    const RescoredLattice out =
        rescore_lattice(l, mock, RescoreParams::exhaustive(alpha), mock.init_state());
    CHECK(validate(out.lattice).ok());
    double score = 0.0;
    const Path best = best_path(out.lattice, alpha, &score);
    const auto oracle = brute_force_rescore(l, mock, mock.init_state(), alpha, 0.5);
    CHECK(std::abs(score - oracle.score) <= 1e-9);
    CHECK(best.words == oracle.words);
    // Every enumerated path of the output is a scored path of the input.
    CHECK(enumerate_paths(out.lattice, 1'000'000).size() == oracle.paths);
  }
}

TEST_CASE("fast setting keeps the topology and acoustic scores") {
  const WordSeq vocab = letters(6);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Lattice l = synth_lattice(seed, 10, 3, vocab);
    MockScorer mock(seed, vocab);
    const RescoredLattice out = rescore_lattice(l, mock, RescoreParams::fast(1.0), mock.init_state());
    CHECK(isomorphic(out.lattice, l, /*compare_lm=*/false));
    CHECK(out.lattice.arcs.size() == l.arcs.size());
    std::set<ArcId> sources(out.source_arc.begin(), out.source_arc.end());
    CHECK(sources.size() == l.arcs.size());
  }
}

TEST_CASE("beam caps survivors per node and the trace is consistent") {
  const WordSeq vocab = letters(4);
  const Lattice l = synth_lattice(77, 12, 4, vocab);
  MockScorer mock(1, vocab);
  for (int k : {1, 2, 3, 7}) {
    CAPTURE(k);
    SearchTrace trace;
    const RescoreParams params{1.0, 0.5, 3, k};
    const RescoredLattice out = rescore_lattice(l, mock, params, mock.init_state(), &trace);
    CHECK(validate(out.lattice).ok());
    std::map<NodeId, int> per_node;
    std::map<NodeId, std::set<WordSeq>> keys;
    for (const auto &h : trace.hypotheses) {
      ++per_node[h.node];
      CHECK(h.merge_key.size() <= 2);
      CHECK(keys[h.node].insert(h.merge_key).second);
    }
    for (const auto &[node, count] : per_node) CHECK(count <= k);
    REQUIRE_FALSE(trace.final_hypotheses.empty());
    for (std::size_t i = 1; i < trace.final_hypotheses.size(); ++i)
      CHECK(trace.hypotheses[trace.final_hypotheses[i - 1]].score >=
            trace.hypotheses[trace.final_hypotheses[i]].score);
    // The best final survivor is the best path of the output.
    double score = 0.0;
    best_path(out.lattice, 1.0, &score);
    CHECK(score == doctest::Approx(trace.hypotheses[trace.final_hypotheses[0]].score).epsilon(1e-12));
    // Predecessor chains reach the begin node.
    for (int f : trace.final_hypotheses) {
      int h = f;
      while (trace.hypotheses[h].predecessor >= 0) h = trace.hypotheses[h].predecessor;
      CHECK(trace.hypotheses[h].node == l.begin);
    }
  }
}

TEST_CASE("surviving end hypotheses share one end node") {
  const WordSeq vocab = letters(4);
  const Lattice l = synth_lattice(5, 8, 3, vocab);
  MockScorer mock(2, vocab);
  const RescoredLattice out =
      rescore_lattice(l, mock, RescoreParams::exhaustive(1.0), mock.init_state());
  int sinks = 0;
  for (const Node &n : out.lattice.nodes) {
    bool has_out = false;
    for (const Arc &a : out.lattice.arcs) has_out = has_out || a.from == n.id;
    sinks += has_out ? 0 : 1;
  }
  CHECK(sinks == 1);
  CHECK(out.node_origin[out.lattice.end].source_node == l.end);
}

TEST_CASE("provenance maps back to the consumed and first-pass lattices") {
  const WordSeq vocab = letters(4);
  const Lattice l = synth_lattice(9, 9, 3, vocab);
  MockScorer m1(1, vocab), m2(2, vocab);
  const RescoredLattice first = rescore_lattice(l, m1, RescoreParams::rich(1.0), m1.init_state());
  const RescoredLattice second =
      rescore_lattice(first, m2, RescoreParams::rich(1.0), m2.init_state());
  REQUIRE(second.source_arc.size() == second.lattice.arcs.size());
  for (std::size_t i = 0; i < second.lattice.arcs.size(); ++i) {
    const Arc &arc = second.lattice.arcs[i];
    const Arc &consumed = first.lattice.arcs[second.source_arc[i]];
    const Arc &original = l.arcs[second.origin_arc[i]];
    CHECK(arc.word == consumed.word);
    CHECK(arc.word == original.word);
    CHECK(arc.acoustic == original.acoustic);
    CHECK(second.origin_arc[i] == first.origin_arc[second.source_arc[i]]);
  }
  for (std::size_t v = 0; v < second.lattice.nodes.size(); ++v)
    CHECK(second.node_origin[v].source_node < static_cast<NodeId>(first.lattice.nodes.size()));
}

TEST_CASE("full merge with one survivor is Viterbi rescoring on the input graph") {
  const WordSeq vocab = letters(3);
  const Lattice l = synth_lattice(12, 7, 2, vocab);
  const UnigramScorer uni = UnigramScorer::uniform(vocab);
  // A context-free scorer makes the fast setting exact.
  const RescoredLattice out = rescore_lattice(l, uni, RescoreParams::fast(1.0), uni.init_state());
  double score = 0.0;
  best_path(out.lattice, 1.0, &score);
  const auto oracle = brute_force_rescore(l, uni, uni.init_state(), 1.0, 0.5);
  CHECK(std::abs(score - oracle.score) <= 1e-9);
}

TEST_CASE("best_path agrees with enumeration and breaks ties by words") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Lattice l = synth_lattice(seed, 9, 3, letters(5));
    double score = 0.0;
    const Path p = best_path(l, 1.3, &score);
    const auto oracle = brute_force_best(l, 1.3);
    CHECK(score == doctest::Approx(oracle.score).epsilon(1e-12));
    CHECK(p.words == oracle.words);
    CHECK(path_score(l, p, 1.3) == doctest::Approx(score).epsilon(1e-12));
  }
  Lattice tie;
  tie.nodes = {{0, {}}, {1, {}}};
  tie.arcs = {{0, 0, 1, "zeta", -1.0, -1.0}, {1, 0, 1, "alpha", -1.0, -1.0}};
  tie.begin = 0;
  tie.end = 1;
  CHECK(best_path(tie, 1.0).words == WordSeq{"alpha"});
}

TEST_CASE("invalid input is rejected") {
  Lattice l = chain({"a", "b"});
  l.arcs[0].acoustic = std::nan("");
  MockScorer mock(1, letters(2));
  CHECK_THROWS_AS(rescore_lattice(l, mock, RescoreParams::rich(1.0), mock.init_state()), Error);
  RescoredLattice r = as_rescored(chain({"a", "b"}));
  r.source_arc.pop_back();
  CHECK_THROWS_AS(rescore_lattice(r, mock, RescoreParams::rich(1.0), mock.init_state()), Error);
}

}  // TEST_SUITE
}  // namespace latrescore
