// tests/test_scoring.cc
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
#include <fstream>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "latrescore/error.h"
#include "latrescore/lattice_io.h"
#include "latrescore/mock_scorer.h"
#include "latrescore/ngram.h"
#include "latrescore/scoring.h"
#include "test_util.h"

namespace latrescore {
namespace {

using testing::letters;
using testing::test_data;

std::shared_ptr<const NgramTable> toy3() {
  static const auto table =
      std::make_shared<const NgramTable>(parse_arpa(read_file(test_data("lm/toy3.arpa"))));
  return table;
}

struct Query {
  WordSeq history;
  std::string word;
  double logprob;
};

std::vector<Query> toy3_queries() {
  std::ifstream in(test_data("lm/toy3_queries.tsv"));
  std::vector<Query> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 + 1);
    out.push_back({split_words(line.substr(0, t1)), line.substr(t1 + 1, t2 - t1 - 1),
                   std::stod(line.substr(t2 + 1))});
  }
  return out;
}

double sum_exp(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += std::exp(x);
  return s;
}

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("n-gram table matches the independent back-off oracle") {
  const auto table = toy3();
  const std::vector<Query> queries = toy3_queries();
  REQUIRE(queries.size() == 336);
  for (const Query &q : queries) {
    std::vector<TokenId> history;
    for (const std::string &w : q.history) history.push_back(*table->find_word(w));
    CAPTURE(join_words(q.history));
    CAPTURE(q.word);
    CHECK(std::abs(table->logprob(history, *table->find_word(q.word)) - q.logprob) <= 1e-9);
  }
}

TEST_CASE("n-gram scorer follows the table through its state") {
  NgramScorer scorer(toy3(), "tri");
  for (const Query &q : toy3_queries()) {
    if (q.history.empty() || q.history.front() != "<s>" || q.word == "<s>") continue;
    ScorerState state = scorer.sentence_start_state();
    for (std::size_t i = 1; i < q.history.size(); ++i)
      state = scorer.advance(state, q.history[i]).state;
    CHECK(std::abs(scorer.advance(state, q.word).logprob - q.logprob) <= 1e-9);
  }
}

TEST_CASE("perplexity matches the independent script") {
  NgramScorer scorer(toy3(), "tri");
  std::vector<WordSeq> corpus;
  {
    std::ifstream in(test_data("lm/toy3_test.txt"));
    std::string line;
    while (std::getline(in, line))
      if (!split_words(line).empty()) corpus.push_back(split_words(line));
  }
  std::ifstream in(test_data("lm/toy3_ppl.tsv"));
  int eos = 0;
  double expected = 0.0;
  int rows = 0;
  while (in >> eos >> expected) {
    CAPTURE(eos);
    const double got = perplexity(scorer, corpus, eos != 0);
    CHECK(std::abs(got - expected) <= 1e-6 * expected);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("perplexity of trivial models") {
  const UnigramScorer uniform = UnigramScorer::uniform(letters(4));
  const std::vector<WordSeq> corpus = {{"a", "b"}, {"d"}, {"c", "c", "a"}};
  CHECK(perplexity(uniform, corpus) == doctest::Approx(4.0).epsilon(1e-12));
  const UnigramScorer certain("certain", {{"w", 0.0}}, -10.0);
  CHECK(perplexity(certain, std::vector<WordSeq>{{"w"}}) == 1.0);
  CHECK_THROWS_AS(perplexity(uniform, std::vector<WordSeq>{}), Error);
  CHECK_THROWS_AS(perplexity(uniform, std::vector<WordSeq>{{}}), Error);
}

TEST_CASE("unigram scorer flags improper tables") {
  CHECK(UnigramScorer::uniform(letters(3)).proper());
  CHECK_FALSE(UnigramScorer("u", {{"a", -0.1}, {"b", -0.1}}, -5.0).proper());
  const UnigramScorer u("u", {{"a", std::log(0.25)}, {"b", std::log(0.75)}}, -7.0);
  CHECK(u.advance(u.init_state(), "zzz").logprob == -7.0);
}

TEST_CASE("n-gram scorer maps unknown words to <unk>") {
  NgramScorer scorer(toy3(), "tri");
  const ScorerState s = scorer.sentence_start_state();
  const ScoredStep oov = scorer.advance(s, "xylophone");
  const ScoredStep unk = scorer.advance(s, "<unk>");
  CHECK(oov.logprob == unk.logprob);
  CHECK(oov.state == unk.state);
}

TEST_CASE("n-gram scorer needs <unk>") {
  auto table = std::make_shared<NgramTable>(1);
  const TokenId a[] = {table->intern("a")};
  table->add(a, {std::log(1.0), {}});
  CHECK_THROWS_AS(NgramScorer(table, "bad"), Error);
}

TEST_CASE("score_sequence is a left fold of advance") {
  NgramScorer scorer(toy3(), "tri");
  const WordSeq a = {"the", "cat", "sat"};
  const WordSeq b = {"on", "the", "mat"};
  WordSeq ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const SequenceScore first = score_sequence(scorer, a, scorer.init_state());
  const SequenceScore second = score_sequence(scorer, b, first.state);
  const SequenceScore whole = score_sequence(scorer, ab, scorer.init_state());
  CHECK(whole.logprob == first.logprob + second.logprob);
  CHECK(whole.state == second.state);

  double folded = 0.0;
  ScorerState state = scorer.init_state();
  for (const std::string &w : ab) {
    ScoredStep step = scorer.advance(state, w);
    folded += step.logprob;
    state = step.state;
  }
  CHECK(folded == whole.logprob);
}

TEST_CASE("epsilon words do not move the scorer") {
  MockScorer mock(3, letters(5));
  const WordSeq with = {"a", "!NULL", "b"};
  const WordSeq without = {"a", "b"};
  const SequenceScore x = score_sequence(mock, with, mock.init_state());
  const SequenceScore y = score_sequence(mock, without, mock.init_state());
  CHECK(x.logprob == y.logprob);
  CHECK(x.state == y.state);
}

TEST_CASE("mock scorer distributions are normalised") {
  const WordSeq vocab = letters(6);
  MockScorer mock(11, vocab);
  ScorerState state = mock.init_state();
  for (int step = 0; step < 30; ++step) {
    const std::vector<double> dist = mock.distribution(state);
    CHECK(std::abs(sum_exp(dist) - 1.0) <= 1e-9);
    for (std::size_t i = 0; i < vocab.size(); ++i)
      CHECK(mock.advance(state, vocab[i]).logprob == dist[i]);
    state = mock.advance(state, vocab[(step * 7) % vocab.size()]).state;
  }
}

TEST_CASE("mock scorer is pure and history-keyed") {
  const WordSeq vocab = letters(5);
  MockScorer mock(5, vocab);
  MockScorer twin(5, vocab);
  const WordSeq history = {"a", "c", "b"};
  const SequenceScore one = score_sequence(mock, history, mock.init_state());
  const SequenceScore two = score_sequence(twin, history, twin.init_state());
  CHECK(one.state == two.state);
  CHECK(one.logprob == two.logprob);
  CHECK(mock.distribution(one.state) == twin.distribution(two.state));
  const ScoredStep p = mock.advance(one.state, "d");
  const ScoredStep q = mock.advance(one.state, "d");
  CHECK(p.logprob == q.logprob);
  CHECK(p.state == q.state);
}

TEST_CASE("mock seeds give different rankings") {
  const WordSeq vocab = letters(6);
  MockScorer x(1, vocab);
  MockScorer y(2, vocab);
  int differing = 0;
  for (int probe = 0; probe < 100; ++probe) {
    WordSeq history;
    for (int k = 0; k < probe % 5; ++k) history.push_back(vocab[(probe * 3 + k) % vocab.size()]);
    const auto dx = x.distribution(score_sequence(x, history, x.init_state()).state);
    const auto dy = y.distribution(score_sequence(y, history, y.init_state()).state);
    auto order = [](const std::vector<double> &d) {
      std::vector<std::size_t> idx(d.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return d[a] > d[b]; });
      return idx;
    };
    if (order(dx) != order(dy)) ++differing;
  }
  CHECK(differing >= 1);
}

TEST_CASE("a backward mock is the forward mock under a different label") {
  const WordSeq vocab = letters(4);
  MockScorer fwd(9, vocab);
  MockScorer bwd(9, vocab, {"bwd", Direction::kBackward, ContextKind::unbounded(), 3.0});
  const WordSeq words = {"d", "a", "a", "c"};
  CHECK(score_sequence(fwd, words, fwd.init_state()).logprob ==
        score_sequence(bwd, words, bwd.init_state()).logprob);
  CHECK(bwd.direction() == Direction::kBackward);
  CHECK(parse_direction("backward") == Direction::kBackward);
  CHECK(to_string(Direction::kForward) == "forward");
  CHECK_THROWS_AS(parse_direction("sideways"), Error);
}

}  // TEST_SUITE
}  // namespace latrescore
