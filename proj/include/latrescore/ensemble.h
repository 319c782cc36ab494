// include/latrescore/ensemble.h
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

// Combining several scorers over a lattice session.
//
// Iterative: pass i rescores the lattices produced by pass i-1 with scorer i
// and beta(i) = 1/(1+i), so after I passes every arc carries the plain mean
// of the first-pass score and the I model scores (when the topology is
// kept).
//
// Simultaneous: every scorer rescores the first-pass lattices on its own
// with the same beta, and the results are merged with equal weight. Nodes
// are aligned by (first-pass node, merge key) and arcs by (first-pass arc,
// start node, end node) in the merged graph.

#ifndef LATRESCORE_ENSEMBLE_H_
#define LATRESCORE_ENSEMBLE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latrescore/context.h"
#include "latrescore/eval.h"
#include "latrescore/lattice_io.h"
#include "latrescore/pushforward.h"

namespace latrescore {

struct ScheduleStep {
  const SequenceScorer *scorer = nullptr;  // not owned
  ContextMode mode = ContextMode::kNone;
};

struct IterationSchedule {
  std::vector<ScheduleStep> steps;

  /// Throws Error when empty, when a step has no scorer, or when a
  /// carry-over mode disagrees with the scorer's direction.
  void check() const;

  /// One step per scorer; with `carry` each step carries context in its
  /// scorer's direction.
  static IterationSchedule of(std::span<const SequenceScorer *const> scorers, bool carry);
};

struct IterationResult {
  int iteration = 0;
  double beta = 0.0;
  std::string scorer;
  ContextMode mode = ContextMode::kNone;
  std::vector<RescoredLattice> lattices;
  std::vector<WordSeq> best;
  std::optional<WerCounts> wer;  // when every utterance has a reference
};

using IterationTrace = std::vector<IterationResult>;

/// Corpus WER of `hyps` against the session references, or nullopt when a
/// reference is missing.
std::optional<WerCounts> session_wer(const LatticeSession &session,
                                     const std::vector<WordSeq> &hyps);

/// Iterative lattice regeneration. `params.beta` is ignored; pass i uses
/// interpolation_weight(i). Only `policy.window` is read, the mode comes
/// from each step.
IterationTrace run_iterative(const LatticeSession &session, const IterationSchedule &schedule,
                             const RescoreParams &params, const ContextPolicy &policy);

/// Equal-weight merge of lattices rescored from the same first-pass
/// lattice. Nodes are the union of (first-pass node, merge key); arcs the
/// union over (first-pass arc, merged start node, merged end node) with the
/// mean refined score of the lattices that contain them.
RescoredLattice combine_lattices(std::span<const RescoredLattice *const> lattices);

/// Simultaneous combination with `params.beta` for every scorer.
std::vector<RescoredLattice> combine_simultaneous(const LatticeSession &session,
                                                  const IterationSchedule &schedule,
                                                  const RescoreParams &params,
                                                  const ContextPolicy &policy);

/// Iterative vs simultaneous, rich vs fast search, with and without
/// carry-over, as a results table.
struct ComparisonReport {
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
};

ComparisonReport compare_methods(std::span<const LatticeSession> dev,
                                 std::span<const LatticeSession> eval,
                                 std::span<const SequenceScorer *const> scorers, double alpha,
                                 const ContextPolicy &policy);

}  // namespace latrescore

#endif  // LATRESCORE_ENSEMBLE_H_
