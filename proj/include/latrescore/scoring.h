// include/latrescore/scoring.h
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

#ifndef LATRESCORE_SCORING_H_
#define LATRESCORE_SCORING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latrescore/lattice.h"

namespace latrescore {

enum class Direction { kForward, kBackward };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// How many previous utterances a scorer can usefully take as context.
/// Recurrent-style scorers are unbounded; attention-style ones keep a window.
struct ContextKind {
  std::optional<int> window;

  static ContextKind unbounded() { return {}; }
  static ContextKind bounded(int utterances) { return {utterances}; }
  bool is_bounded() const { return window.has_value(); }

  friend bool operator==(const ContextKind &, const ContextKind &) = default;
};

/// Opaque scoring context. Scorers use whichever half they need: `key` for
/// digests and server-side ids, `tokens` for explicit n-gram histories.
struct ScorerState {
  std::uint64_t key = 0;
  std::vector<std::int32_t> tokens;

  friend bool operator==(const ScorerState &, const ScorerState &) = default;
};

struct ScoredStep {
  ScorerState state;
  double logprob = 0.0;  // natural log
};

/// Incremental word scorer. Implementations are immutable after
/// construction and advance() is a pure function of (state, word), so a
/// scorer can be shared between threads.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;

  virtual const std::string &name() const = 0;
  virtual Direction direction() const = 0;
  virtual ContextKind context_kind() const { return ContextKind::unbounded(); }
  /// False for test doubles whose scores are not a normalised distribution.
  virtual bool proper() const { return true; }

  /// Empty-context state.
  virtual ScorerState init_state() const = 0;
  /// State at a sentence start, used only when sentence boundaries are
  /// scored. Defaults to init_state().
  virtual ScorerState sentence_start_state() const { return init_state(); }
  /// `word` is never the epsilon label.
  virtual ScoredStep advance(const ScorerState &state, std::string_view word) const = 0;

  /// Hint that states handed out so far are no longer needed.
  virtual void end_utterance() const {}

  /// False if the scorer must not be driven by several passes at once.
  virtual bool concurrent() const { return true; }
};

struct SequenceScore {
  double logprob = 0.0;
  ScorerState state;
};

/// Left fold of advance() over `words` (epsilons skipped).
SequenceScore score_sequence(const SequenceScorer &scorer, std::span<const std::string> words,
                             const ScorerState &start);

/// Per-word perplexity. Each sentence is scored on its own from
/// init_state(); with `score_eos` it starts from sentence_start_state() and
/// "</s>" is scored and counted as a token.
double perplexity(const SequenceScorer &scorer, std::span<const WordSeq> corpus,
                  bool score_eos = false);

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknown = "<unk>";

/// Context-free scorer backed by a word -> log-prob table. Unlisted words
/// get `oov_logprob`. Reports proper() only if the table sums to 1.
class UnigramScorer : public SequenceScorer {
 public:
  UnigramScorer(std::string name, std::unordered_map<std::string, double> logprobs,
                double oov_logprob, Direction direction = Direction::kForward);

  /// Uniform distribution over `vocab`.
  static UnigramScorer uniform(const WordSeq &vocab,
                               Direction direction = Direction::kForward);

  const std::string &name() const override { return name_; }
  Direction direction() const override { return direction_; }
  bool proper() const override { return proper_; }
  ScorerState init_state() const override { return {}; }
  ScoredStep advance(const ScorerState &state, std::string_view word) const override;

 private:
  std::string name_;
  std::unordered_map<std::string, double> logprobs_;
  double oov_logprob_;
  Direction direction_;
  bool proper_;
};

}  // namespace latrescore

#endif  // LATRESCORE_SCORING_H_
