// src/scoring.cc
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

#include "latrescore/scoring.h"

#include <cmath>

#include "latrescore/error.h"

namespace latrescore {

std::string_view to_string(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

Direction parse_direction(std::string_view s) {
  if (s == "forward") return Direction::kForward;
  if (s == "backward") return Direction::kBackward;
  throw Error("unknown direction '" + std::string(s) + "'");
}

SequenceScore score_sequence(const SequenceScorer &scorer, std::span<const std::string> words,
                             const ScorerState &start) {
  SequenceScore result{0.0, start};
  for (const std::string &word : words) {
    if (is_epsilon(word)) continue;
    ScoredStep step = scorer.advance(result.state, word);
    result.logprob += step.logprob;
    result.state = std::move(step.state);
  }
  return result;
}

double perplexity(const SequenceScorer &scorer, std::span<const WordSeq> corpus,
                  bool score_eos) {
  if (corpus.empty()) throw Error("perplexity: empty corpus");
  double total = 0.0;
  std::size_t tokens = 0;
  for (const WordSeq &sentence : corpus) {
    ScorerState start = score_eos ? scorer.sentence_start_state() : scorer.init_state();
    SequenceScore s = score_sequence(scorer, sentence, start);
    total += s.logprob;
    for (const std::string &w : sentence) tokens += is_epsilon(w) ? 0 : 1;
    if (score_eos) {
      total += scorer.advance(s.state, kSentenceEnd).logprob;
      ++tokens;
    }
  }
  if (tokens == 0) throw Error("perplexity: no scored tokens");
  return std::exp(-total / static_cast<double>(tokens));
}

UnigramScorer::UnigramScorer(std::string name,
                             std::unordered_map<std::string, double> logprobs,
                             double oov_logprob, Direction direction)
    : name_(std::move(name)),
      logprobs_(std::move(logprobs)),
      oov_logprob_(oov_logprob),
      direction_(direction) {
  double mass = 0.0;
  for (const auto &[word, lp] : logprobs_) {
    if (!std::isfinite(lp)) throw Error("unigram scorer: non-finite score for " + word);
    mass += std::exp(lp);
  }
  proper_ = std::abs(mass - 1.0) < 1e-9;
}

UnigramScorer UnigramScorer::uniform(const WordSeq &vocab, Direction direction) {
  if (vocab.empty()) throw Error("uniform scorer: empty vocabulary");
  std::unordered_map<std::string, double> table;
  for (const std::string &w : vocab) table[w] = 0.0;
  const double lp = -std::log(static_cast<double>(table.size()));
  for (auto &[w, v] : table) v = lp;
  return UnigramScorer("uniform", std::move(table), lp, direction);
}

ScoredStep UnigramScorer::advance(const ScorerState &state, std::string_view word) const {
  auto it = logprobs_.find(std::string(word));
  return {state, it == logprobs_.end() ? oov_logprob_ : it->second};
}

}  // namespace latrescore
