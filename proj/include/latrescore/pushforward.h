// include/latrescore/pushforward.h
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

// Push-forward lattice rescoring.
//
// Partial hypotheses are pushed through the lattice in topological order.
// Extending a hypothesis over an arc w refines the arc's language score with
// the rescoring model,
//
//   refined = (1 - beta) * lm(w) + beta * log P_resc(w | history)
//   score'  = score + acoustic(w) + alpha * refined
//
// and the hypotheses reaching a node are merged when their last n-1 words
// agree (Viterbi: the best one survives), then capped at k per node. Every
// surviving (node, recent words) pair becomes a node of the output lattice,
// so the rescored lattice may be larger than its input.

#ifndef LATRESCORE_PUSHFORWARD_H_
#define LATRESCORE_PUSHFORWARD_H_

#include <limits>
#include <vector>

#include "latrescore/lattice.h"
#include "latrescore/scoring.h"

namespace latrescore {

/// Sentinel for "no limit" in RescoreParams::ngram_approx and beam_k.
inline constexpr int kUnbounded = std::numeric_limits<int>::max();

struct RescoreParams {
  double alpha = 1.0;    // LM weight against the acoustic score, > 0
  double beta = 0.5;     // interpolation weight, in (0, 1)
  int ngram_approx = 5;  // n of the n-gram merge; 0 merges everything
  int beam_k = 10;       // hypotheses kept per node, >= 1

  /// Throws Error when a field is out of range.
  void check() const;

  /// 5-gram approximation, k = 10.
  static RescoreParams rich(double alpha);
  /// 0-gram approximation, k = 1: the lattice topology is kept.
  static RescoreParams fast(double alpha);
  static RescoreParams exhaustive(double alpha);
};

/// Words compared when merging: max(0, n - 1), or unbounded.
int merge_key_length(int ngram_approx);

/// beta(i) = 1 / (1 + i) for iteration i >= 1.
double interpolation_weight(int iteration);

/// (1 - beta) * prev_lm + beta * resc
double refine_arc_lm(double prev_lm, double resc, double beta);

/// prev_score + acoustic + alpha * refined_lm
double extend(double prev_score, double acoustic, double refined_lm, double alpha);

/// Identity of a rescored node in terms of the lattice it was built from.
struct NodeOrigin {
  NodeId source_node = 0;
  WordSeq merge_key;

  friend bool operator==(const NodeOrigin &, const NodeOrigin &) = default;
  friend auto operator<=>(const NodeOrigin &, const NodeOrigin &) = default;
};

/// Output of a rescoring pass. The per-node and per-arc vectors run
/// parallel to lattice.nodes and lattice.arcs.
struct RescoredLattice {
  Lattice lattice;
  std::vector<NodeOrigin> node_origin;  // relative to the consumed lattice
  std::vector<ArcId> source_arc;        // arc id in the consumed lattice
  std::vector<ArcId> origin_arc;        // arc id in the first-pass lattice

  friend bool operator==(const RescoredLattice &, const RescoredLattice &) = default;
};

/// Wraps a first-pass lattice so it can be fed to rescore_lattice(): every
/// node is its own origin with an empty key, every arc its own source.
RescoredLattice as_rescored(const Lattice &lattice);

/// The same lattice with every arc flipped; provenance is kept.
RescoredLattice reverse(const RescoredLattice &rescored);

/// Everything the search kept, for checking its bookkeeping.
struct SearchTrace {
  struct Hypothesis {
    NodeId node = 0;       // node of the consumed lattice
    double score = 0.0;
    WordSeq merge_key;
    int predecessor = -1;  // index into `hypotheses`, -1 at the begin node
    ArcId arc = -1;        // arc of the consumed lattice
    double refined_lm = 0.0;
  };
  std::vector<Hypothesis> hypotheses;  // survivors only
  std::vector<int> final_hypotheses;   // survivors at the end node, best first
};

/// One push-forward pass. `input` must be valid; the scorer is applied in
/// the lattice's own arc direction (callers reverse for backward scorers).
/// Throws Error on an invalid lattice; scorer errors propagate.
RescoredLattice rescore_lattice(const RescoredLattice &input, const SequenceScorer &scorer,
                                const RescoreParams &params, const ScorerState &init,
                                SearchTrace *trace = nullptr);

RescoredLattice rescore_lattice(const Lattice &input, const SequenceScorer &scorer,
                                const RescoreParams &params, const ScorerState &init,
                                SearchTrace *trace = nullptr);

/// Begin-to-end path maximising the sum of acoustic + alpha * lm, ties
/// going to the lexicographically smaller word sequence. `score` receives
/// the maximum.
Path best_path(const Lattice &lattice, double alpha, double *score = nullptr);

/// Path score summed arc by arc in path order with extend().
double path_score(const Lattice &lattice, const Path &path, double alpha);

}  // namespace latrescore

#endif  // LATRESCORE_PUSHFORWARD_H_
