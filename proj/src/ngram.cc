// src/ngram.cc
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

#include "latrescore/ngram.h"

#include <algorithm>
#include <cstring>

#include "latrescore/error.h"

namespace latrescore {

NgramTable::NgramTable(int order) : order_(order) {
  if (order < 1) throw Error("n-gram order must be >= 1");
  entries_.resize(order);
  keys_.resize(order);
}

TokenId NgramTable::intern(std::string_view word) {
  auto [it, inserted] =
      word_ids_.emplace(std::string(word), static_cast<TokenId>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

std::optional<TokenId> NgramTable::find_word(std::string_view word) const {
  auto it = word_ids_.find(std::string(word));
  if (it == word_ids_.end()) return std::nullopt;
  return it->second;
}

std::string NgramTable::key(std::span<const TokenId> ngram) {
  std::string k(ngram.size() * sizeof(TokenId), '\0');
  if (!ngram.empty()) std::memcpy(k.data(), ngram.data(), k.size());
  return k;
}

void NgramTable::add(std::span<const TokenId> ngram, const NgramEntry &entry) {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_)
    throw Error("n-gram of order " + std::to_string(ngram.size()) +
                " does not fit a model of order " + std::to_string(order_));
  auto &table = entries_[ngram.size() - 1];
  auto [it, inserted] = table.emplace(key(ngram), entry);
  if (inserted)
    keys_[ngram.size() - 1].emplace_back(ngram.begin(), ngram.end());
  else
    it->second = entry;
}

const NgramEntry *NgramTable::find(std::span<const TokenId> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return nullptr;
  const auto &table = entries_[ngram.size() - 1];
  auto it = table.find(key(ngram));
  return it == table.end() ? nullptr : &it->second;
}

void NgramTable::check_consistency() const {
  for (int n = 2; n <= order_; ++n) {
    for (const auto &ngram : keys_[n - 1]) {
      std::span<const TokenId> context(ngram.data(), ngram.size() - 1);
      if (!find(context)) {
        std::string text;
        for (TokenId t : ngram) text += (text.empty() ? "" : " ") + words_[t];
        throw Error("n-gram '" + text + "' has no lower-order context entry");
      }
    }
  }
}

double NgramTable::logprob(std::span<const TokenId> history, TokenId word) const {
  if (static_cast<int>(history.size()) > order_ - 1)
    history = history.subspan(history.size() - (order_ - 1));
  std::vector<TokenId> query(history.begin(), history.end());
  query.push_back(word);
  double backoff = 0.0;
  for (std::size_t start = 0; start < query.size(); ++start) {
    std::span<const TokenId> ngram(query.data() + start, query.size() - start);
    if (const NgramEntry *e = find(ngram)) return backoff + e->logprob;
    std::span<const TokenId> context = ngram.first(ngram.size() - 1);
    if (const NgramEntry *c = find(context); c && c->backoff) backoff += *c->backoff;
  }
  throw Error("word '" + words_.at(word) + "' has no unigram entry");
}

NgramScorer::NgramScorer(std::shared_ptr<const NgramTable> table, std::string name,
                         Direction direction, ContextKind context)
    : table_(std::move(table)),
      name_(std::move(name)),
      direction_(direction),
      context_(context) {
  if (!table_) throw Error("n-gram scorer: null table");
  auto unk = table_->find_word(kUnknown);
  if (!unk || !table_->find(std::span<const TokenId>(&*unk, 1)))
    throw Error("n-gram scorer '" + name_ + "': model has no <unk> unigram");
  unk_ = *unk;
}

ScorerState NgramScorer::sentence_start_state() const {
  ScorerState state;
  if (auto bos = table_->find_word(kSentenceStart); bos && table_->order() > 1)
    state.tokens.push_back(*bos);
  return state;
}

ScoredStep NgramScorer::advance(const ScorerState &state, std::string_view word) const {
  TokenId id = unk_;
  if (auto found = table_->find_word(word);
      found && table_->find(std::span<const TokenId>(&*found, 1)))
    id = *found;
  ScoredStep step;
  step.logprob = table_->logprob(state.tokens, id);
  const std::size_t keep = static_cast<std::size_t>(table_->order() - 1);
  std::vector<TokenId> &next = step.state.tokens;
  next.reserve(keep);
  const auto &hist = state.tokens;
  std::size_t from = hist.size() + 1 > keep ? hist.size() + 1 - keep : 0;
  for (std::size_t i = from; i < hist.size(); ++i) next.push_back(hist[i]);
  if (keep > 0) next.push_back(id);
  return step;
}

}  // namespace latrescore
