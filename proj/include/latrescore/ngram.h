// include/latrescore/ngram.h
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

#ifndef LATRESCORE_NGRAM_H_
#define LATRESCORE_NGRAM_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latrescore/scoring.h"

namespace latrescore {

using TokenId = std::int32_t;

struct NgramEntry {
  double logprob = 0.0;           // natural log
  std::optional<double> backoff;  // natural log; absent means 0
};

/// Back-off n-gram model. N-grams of each order keep their insertion order
/// so that a table read from disk can be written back unchanged.
class NgramTable {
 public:
  explicit NgramTable(int order);

  int order() const { return order_; }

  TokenId intern(std::string_view word);
  std::optional<TokenId> find_word(std::string_view word) const;
  const std::string &word(TokenId id) const { return words_[id]; }
  std::size_t vocab_size() const { return words_.size(); }

  /// Adds (or overwrites) the entry for `ngram`; its order is ngram.size().
  void add(std::span<const TokenId> ngram, const NgramEntry &entry);
  const NgramEntry *find(std::span<const TokenId> ngram) const;

  /// N-grams of order `n` (1-based) in insertion order.
  const std::vector<std::vector<TokenId>> &ngrams(int n) const { return keys_[n - 1]; }

  /// Throws Error if some n-gram (n >= 2) lacks its (n-1)-word context at the
  /// lower order.
  void check_consistency() const;

  /// Natural-log probability of `word` after `history` (oldest first) with
  /// standard back-off. `word` must be in the vocabulary.
  double logprob(std::span<const TokenId> history, TokenId word) const;

 private:
  static std::string key(std::span<const TokenId> ngram);

  int order_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId> word_ids_;
  std::vector<std::unordered_map<std::string, NgramEntry>> entries_;
  std::vector<std::vector<std::vector<TokenId>>> keys_;
};

/// SequenceScorer over an NgramTable. The state holds the last order-1
/// token ids. Words outside the vocabulary are scored and remembered as
/// "<unk>"; the constructor throws if the table has no "<unk>".
class NgramScorer : public SequenceScorer {
 public:
  NgramScorer(std::shared_ptr<const NgramTable> table, std::string name,
              Direction direction = Direction::kForward,
              ContextKind context = ContextKind::unbounded());

  const std::string &name() const override { return name_; }
  Direction direction() const override { return direction_; }
  ContextKind context_kind() const override { return context_; }
  ScorerState init_state() const override { return {}; }
  ScorerState sentence_start_state() const override;
  ScoredStep advance(const ScorerState &state, std::string_view word) const override;

  const NgramTable &table() const { return *table_; }

 private:
  std::shared_ptr<const NgramTable> table_;
  std::string name_;
  Direction direction_;
  ContextKind context_;
  TokenId unk_;
};

}  // namespace latrescore

#endif  // LATRESCORE_NGRAM_H_
