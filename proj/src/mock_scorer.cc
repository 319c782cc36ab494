// src/mock_scorer.cc
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

#include "latrescore/mock_scorer.h"

#include <algorithm>
#include <cmath>

#include "latrescore/error.h"

namespace latrescore {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MockScorer::MockScorer(std::uint64_t seed, const WordSeq &vocab)
    : MockScorer(seed, vocab, Options{}) {}

MockScorer::MockScorer(std::uint64_t seed, const WordSeq &vocab, Options options)
    : seed_(seed), options_(std::move(options)) {
  if (vocab.empty()) throw Error("mock scorer: empty vocabulary");
  for (const std::string &w : vocab) {
    if (is_epsilon(w)) continue;
    if (index_.emplace(w, vocab_.size()).second) vocab_.push_back(w);
  }
  if (index_.emplace(std::string(kUnknown), vocab_.size()).second)
    vocab_.emplace_back(kUnknown);
  unk_ = index_.at(std::string(kUnknown));
  for (const std::string &w : vocab_) word_hash_.push_back(fnv1a(w));
}

ScorerState MockScorer::init_state() const {
  return {mix64(seed_ ^ 0x5eedf00dULL), {}};
}

std::size_t MockScorer::word_index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? unk_ : it->second;
}

std::vector<double> MockScorer::distribution(const ScorerState &state) const {
  std::vector<double> logits(vocab_.size());
  const std::uint64_t ctx = mix64(seed_ ^ mix64(state.key));
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    const double u = static_cast<double>(mix64(ctx ^ word_hash_[v]) >> 11) * 0x1.0p-53;
    logits[v] = options_.sharpness * (2.0 * u - 1.0);
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - top);
  const double norm = top + std::log(sum);
  for (double &x : logits) x -= norm;
  return logits;
}

ScoredStep MockScorer::advance(const ScorerState &state, std::string_view word) const {
  const std::size_t w = word_index(word);
  ScoredStep step;
  step.logprob = distribution(state)[w];
  step.state.key = mix64(state.key * 0x100000001b3ULL ^ word_hash_[w]);
  return step;
}

}  // namespace latrescore
