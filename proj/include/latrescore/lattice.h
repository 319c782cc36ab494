// include/latrescore/lattice.h
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

#ifndef LATRESCORE_LATTICE_H_
#define LATRESCORE_LATTICE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace latrescore {

using NodeId = std::int32_t;
using ArcId = std::int32_t;
using WordSeq = std::vector<std::string>;

/// Word label of epsilon arcs. They carry no language score and never
/// advance a scorer.
inline constexpr std::string_view kEpsilon = "!NULL";

inline bool is_epsilon(std::string_view word) { return word == kEpsilon; }

struct Node {
  NodeId id = 0;
  std::optional<double> time;  // seconds; metadata only

  friend bool operator==(const Node &, const Node &) = default;
};

/// A word hypothesis between two word boundaries. Scores are natural logs.
struct Arc {
  ArcId id = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::string word;
  double acoustic = 0.0;
  double lm = 0.0;

  friend bool operator==(const Arc &, const Arc &) = default;
};

/// Word lattice: a DAG with a single begin and a single end node.
/// Immutable once built; share freely between readers.
struct Lattice {
  std::string utterance_id;
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  NodeId begin = 0;
  NodeId end = 0;

  friend bool operator==(const Lattice &, const Lattice &) = default;
};

/// Dense adjacency view of a lattice. Node and arc positions index into
/// `Lattice::nodes` / `Lattice::arcs`; out/in lists are sorted by arc id.
class LatticeIndex {
 public:
  explicit LatticeIndex(const Lattice &lattice);

  std::size_t num_nodes() const { return out_.size(); }
  /// Position of node `id`, or -1 if absent.
  int node_pos(NodeId id) const;
  const std::vector<int> &out_arcs(int node_pos) const { return out_[node_pos]; }
  const std::vector<int> &in_arcs(int node_pos) const { return in_[node_pos]; }
  int from_pos(int arc_pos) const { return from_[arc_pos]; }
  int to_pos(int arc_pos) const { return to_[arc_pos]; }

 private:
  std::unordered_map<NodeId, int> pos_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> from_, to_;
};

/// A complete begin-to-end path.
struct Path {
  std::vector<ArcId> arcs;
  WordSeq words;  // epsilons dropped
  double acoustic_total = 0.0;
  double lm_total = 0.0;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every structural problem; never throws.
ValidationReport validate(const Lattice &lattice);

/// Nodes in topological order, begin first and end last. Ready nodes are
/// released smallest id first. Throws Error("not a DAG") on a cycle.
std::vector<NodeId> topo_order(const Lattice &lattice);

/// Flips every arc and swaps begin/end. Node and arc ids are kept, so
/// reverse(reverse(l)) == l.
Lattice reverse(const Lattice &lattice);

/// Brute-force path listing, for test oracles on small lattices. Throws
/// Error("oracle blowup") once more than `max_paths` paths exist.
std::vector<Path> enumerate_paths(const Lattice &lattice, std::size_t max_paths);

/// Deterministic random lattice.
///
/// Nodes are 0..nodes-1 with begin 0 and end nodes-1. Node i gets an arc to
/// i+1 plus up to branching-1 further arcs to a node in (i, i+3]. Words are
/// uniform over `vocab`; acoustic = -5u and lm = ln(0.05 + 0.95u) with u
/// uniform in [0,1), drawn from mt19937_64(seed) as (x >> 11) * 2^-53 so the
/// stream is identical on every platform. Node i has time 0.01 * i.
Lattice synth_lattice(std::uint64_t seed, int nodes, int branching,
                      const WordSeq &vocab);

/// Adds an epsilon super-begin (super-end) when more than one node has
/// in-degree (out-degree) 0, then sets begin/end. Used for SLF input.
Lattice normalize_endpoints(Lattice lattice);

/// Drops nodes (and their arcs) that are not on any begin-to-end path.
Lattice trim(const Lattice &lattice);

/// Relabels nodes 0..N-1 in topological order and arcs 0..M-1 in
/// (from, to, old id) order. Returns the old-id lists for both.
struct Renumbering {
  std::vector<NodeId> old_node;
  std::vector<ArcId> old_arc;
};
Lattice renumber(const Lattice &lattice, Renumbering *map = nullptr);

/// Label-preserving isomorphism test: arcs must match on word and acoustic
/// score (and lm score when `compare_lm`). Exact backtracking; intended for
/// test-sized lattices.
bool isomorphic(const Lattice &a, const Lattice &b, bool compare_lm = true);

}  // namespace latrescore

#endif  // LATRESCORE_LATTICE_H_
