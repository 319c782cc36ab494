// include/latrescore/context.h
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

#ifndef LATRESCORE_CONTEXT_H_
#define LATRESCORE_CONTEXT_H_

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "latrescore/lattice_io.h"
#include "latrescore/pushforward.h"
#include "latrescore/scoring.h"

namespace latrescore {

enum class ContextMode { kNone, kForward, kBackward };

std::string_view to_string(ContextMode mode);
ContextMode parse_context_mode(std::string_view s);

/// Carry-over setting for one rescoring pass. `window` counts utterances;
/// unset means keep everything (still capped by a bounded scorer's own
/// window).
struct ContextPolicy {
  ContextMode mode = ContextMode::kNone;
  std::optional<int> window;

  void check() const;
};

/// Mode that carries context in `scorer`'s reading direction.
ContextMode carry_mode(const SequenceScorer &scorer);

/// Best hypotheses of already-rescored utterances, most recent last, in the
/// scorer's reading direction (reversed word order for backward passes).
class SessionContext {
 public:
  explicit SessionContext(std::optional<int> window = std::nullopt);

  void push(WordSeq words);
  const std::deque<WordSeq> &entries() const { return entries_; }
  std::optional<int> window() const { return window_; }

 private:
  std::optional<int> window_;
  std::deque<WordSeq> entries_;
};

/// Effective window: the tighter of the policy's and the scorer's.
std::optional<int> effective_window(const SequenceScorer &scorer, const ContextPolicy &policy);

/// init_state() advanced over every context entry in order.
ScorerState context_state(const SequenceScorer &scorer, const SessionContext &context);

/// Called before each utterance of a carry-over pass with the utterance's
/// position in the session and the context it is about to be given.
using ContextObserver = std::function<void(std::size_t, const SessionContext &)>;

/// Rescores every lattice of a session with one scorer.
///
/// Backward scorers work on reversed lattices and the results are flipped
/// back. With carry-over, utterances are visited in the scorer's direction
/// and each starts from the state reached by feeding the best hypotheses of
/// the utterances before it (in visiting order). Results come back in
/// session order.
std::vector<RescoredLattice> rescore_session(const std::vector<RescoredLattice> &lattices,
                                             const SequenceScorer &scorer,
                                             const RescoreParams &params,
                                             const ContextPolicy &policy,
                                             const ContextObserver &observer = {});

std::vector<RescoredLattice> rescore_session(const LatticeSession &session,
                                             const SequenceScorer &scorer,
                                             const RescoreParams &params,
                                             const ContextPolicy &policy,
                                             const ContextObserver &observer = {});

/// Single-lattice pass honouring the scorer's direction.
RescoredLattice rescore_directed(const RescoredLattice &lattice, const SequenceScorer &scorer,
                                 const RescoreParams &params, const ScorerState &init);

/// 1-best words of each lattice under `alpha`.
std::vector<WordSeq> best_words(const std::vector<RescoredLattice> &lattices, double alpha);

}  // namespace latrescore

#endif  // LATRESCORE_CONTEXT_H_
