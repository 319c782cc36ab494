// src/context.cc
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

#include "latrescore/context.h"

#include <algorithm>

#include "latrescore/error.h"

namespace latrescore {

std::string_view to_string(ContextMode mode) {
  switch (mode) {
    case ContextMode::kNone: return "none";
    case ContextMode::kForward: return "forward";
    case ContextMode::kBackward: return "backward";
  }
  return "none";
}

ContextMode parse_context_mode(std::string_view s) {
  if (s == "none") return ContextMode::kNone;
  if (s == "forward") return ContextMode::kForward;
  if (s == "backward") return ContextMode::kBackward;
  throw Error("unknown context mode '" + std::string(s) + "'");
}

void ContextPolicy::check() const {
  if (window && *window < 1) throw Error("context window J must be >= 1");
}

ContextMode carry_mode(const SequenceScorer &scorer) {
  return scorer.direction() == Direction::kForward ? ContextMode::kForward
                                                   : ContextMode::kBackward;
}

SessionContext::SessionContext(std::optional<int> window) : window_(window) {
  if (window_ && *window_ < 1) throw Error("context window J must be >= 1");
}

void SessionContext::push(WordSeq words) {
  entries_.push_back(std::move(words));
  if (window_)
    while (entries_.size() > static_cast<std::size_t>(*window_)) entries_.pop_front();
}

std::optional<int> effective_window(const SequenceScorer &scorer, const ContextPolicy &policy) {
  std::optional<int> own = scorer.context_kind().window;
  if (own && policy.window) return std::min(*own, *policy.window);
  return own ? own : policy.window;
}

ScorerState context_state(const SequenceScorer &scorer, const SessionContext &context) {
  ScorerState state = scorer.init_state();
  for (const WordSeq &entry : context.entries())
    state = score_sequence(scorer, entry, state).state;
  return state;
}

RescoredLattice rescore_directed(const RescoredLattice &lattice, const SequenceScorer &scorer,
                                 const RescoreParams &params, const ScorerState &init) {
  if (scorer.direction() == Direction::kForward)
    return rescore_lattice(lattice, scorer, params, init);
  return reverse(rescore_lattice(reverse(lattice), scorer, params, init));
}

std::vector<RescoredLattice> rescore_session(const std::vector<RescoredLattice> &lattices,
                                             const SequenceScorer &scorer,
                                             const RescoreParams &params,
                                             const ContextPolicy &policy,
                                             const ContextObserver &observer) {
  policy.check();
  params.check();
  const bool backward = scorer.direction() == Direction::kBackward;
  if (policy.mode != ContextMode::kNone && policy.mode != carry_mode(scorer))
    throw Error("context mode '" + std::string(to_string(policy.mode)) +
                "' does not match the direction of scorer '" + scorer.name() + "'");

  const std::size_t n = lattices.size();
  std::vector<RescoredLattice> out(n);
  if (policy.mode == ContextMode::kNone) {
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = rescore_directed(lattices[j], scorer, params, scorer.init_state());
      scorer.end_utterance();
    }
    return out;
  }

  SessionContext context(effective_window(scorer, policy));
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t j = backward ? n - 1 - step : step;
    if (observer) observer(j, context);
    const ScorerState init = context_state(scorer, context);
    // Work in the scorer's reading direction so the 1-best is chosen on the
    // lattice exactly as it was searched.
    RescoredLattice directed =
        rescore_lattice(backward ? reverse(lattices[j]) : lattices[j], scorer, params, init);
    context.push(best_path(directed.lattice, params.alpha).words);
    out[j] = backward ? reverse(directed) : std::move(directed);
    scorer.end_utterance();
  }
  return out;
}

std::vector<RescoredLattice> rescore_session(const LatticeSession &session,
                                             const SequenceScorer &scorer,
                                             const RescoreParams &params,
                                             const ContextPolicy &policy,
                                             const ContextObserver &observer) {
  std::vector<RescoredLattice> inputs;
  inputs.reserve(session.lattices.size());
  for (const Lattice &l : session.lattices) inputs.push_back(as_rescored(l));
  return rescore_session(inputs, scorer, params, policy, observer);
}

std::vector<WordSeq> best_words(const std::vector<RescoredLattice> &lattices, double alpha) {
  std::vector<WordSeq> words;
  words.reserve(lattices.size());
  for (const RescoredLattice &r : lattices) words.push_back(best_path(r.lattice, alpha).words);
  return words;
}

}  // namespace latrescore
