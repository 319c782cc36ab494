// include/latrescore/mock_scorer.h
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

#ifndef LATRESCORE_MOCK_SCORER_H_
#define LATRESCORE_MOCK_SCORER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latrescore/scoring.h"

namespace latrescore {

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a(std::string_view s);
/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic stand-in for a neural LM with unbounded context.
///
/// The state is a digest of the whole word history. The next-word
/// distribution is a softmax over the vocabulary of logits
/// sharpness * (2u - 1), where u in [0,1) comes from hashing
/// (seed, history digest, word). Words outside the vocabulary are scored
/// and remembered as "<unk>", which is always part of the vocabulary.
class MockScorer : public SequenceScorer {
 public:
  struct Options {
    std::string name = "mock";
    Direction direction = Direction::kForward;
    ContextKind context = ContextKind::unbounded();
    double sharpness = 3.0;
  };

  MockScorer(std::uint64_t seed, const WordSeq &vocab);
  MockScorer(std::uint64_t seed, const WordSeq &vocab, Options options);

  const std::string &name() const override { return options_.name; }
  Direction direction() const override { return options_.direction; }
  ContextKind context_kind() const override { return options_.context; }
  ScorerState init_state() const override;
  ScoredStep advance(const ScorerState &state, std::string_view word) const override;

  const WordSeq &vocab() const { return vocab_; }
  /// Log-probabilities over vocab(), in vocab() order.
  std::vector<double> distribution(const ScorerState &state) const;

 private:
  std::size_t word_index(std::string_view word) const;

  std::uint64_t seed_;
  WordSeq vocab_;
  std::vector<std::uint64_t> word_hash_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t unk_;
  Options options_;
};

}  // namespace latrescore

#endif  // LATRESCORE_MOCK_SCORER_H_
