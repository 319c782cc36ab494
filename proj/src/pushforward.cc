// src/pushforward.cc
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

#include "latrescore/pushforward.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>

#include "latrescore/error.h"

namespace latrescore {

void RescoreParams::check() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("alpha must be > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0, 1)");
  if (ngram_approx < 0) throw Error("n-gram approximation must be >= 0");
  if (beam_k < 1) throw Error("beam k must be >= 1");
}

RescoreParams RescoreParams::rich(double alpha) { return {alpha, 0.5, 5, 10}; }
RescoreParams RescoreParams::fast(double alpha) { return {alpha, 0.5, 0, 1}; }
RescoreParams RescoreParams::exhaustive(double alpha) {
  return {alpha, 0.5, kUnbounded, kUnbounded};
}

int merge_key_length(int ngram_approx) {
  if (ngram_approx == kUnbounded) return kUnbounded;
  return std::max(0, ngram_approx - 1);
}

double interpolation_weight(int iteration) {
  if (iteration < 1) throw Error("iteration index must be >= 1");
  return 1.0 / (1.0 + iteration);
}

double refine_arc_lm(double prev_lm, double resc, double beta) {
  return (1.0 - beta) * prev_lm + beta * resc;
}

double extend(double prev_score, double acoustic, double refined_lm, double alpha) {
  return prev_score + acoustic + alpha * refined_lm;
}

RescoredLattice as_rescored(const Lattice &lattice) {
  RescoredLattice r;
  r.lattice = lattice;
  for (const Node &n : lattice.nodes) r.node_origin.push_back({n.id, {}});
  for (const Arc &a : lattice.arcs) {
    r.source_arc.push_back(a.id);
    r.origin_arc.push_back(a.id);
  }
  return r;
}

RescoredLattice reverse(const RescoredLattice &rescored) {
  RescoredLattice r = rescored;
  r.lattice = reverse(rescored.lattice);
  return r;
}

namespace {

struct Candidate {
  double score;
  WordSeq key;
  ScorerState state;
  int predecessor;  // survivor index
  int arc_pos;      // position in the consumed lattice's arc vector
  double refined;
};

struct Survivor {
  int node_pos;
  double score;
  WordSeq key;
  ScorerState state;
  int out_node;
  int predecessor;
  int arc_pos;
  double refined;
};

struct OutArc {
  int from, to;
  int arc_pos;
  double refined;
};

}  // namespace

RescoredLattice rescore_lattice(const RescoredLattice &input, const SequenceScorer &scorer,
                                const RescoreParams &params, const ScorerState &init,
                                SearchTrace *trace) {
  params.check();
  const Lattice &lat = input.lattice;
  if (ValidationReport report = validate(lat); !report.ok())
    throw Error("rescore_lattice: invalid lattice: " + report.violations.front());
  if (input.source_arc.size() != lat.arcs.size() || input.origin_arc.size() != lat.arcs.size() ||
      input.node_origin.size() != lat.nodes.size())
    throw Error("rescore_lattice: provenance vectors do not match the lattice");

  const LatticeIndex index(lat);
  const std::vector<NodeId> topo = topo_order(lat);
  const int key_len = merge_key_length(params.ngram_approx);
  const std::size_t beam = static_cast<std::size_t>(params.beam_k);

  std::vector<std::vector<Candidate>> incoming(index.num_nodes());
  std::vector<Survivor> survivors;
  std::vector<int> out_node_pos;  // output node -> consumed node position
  std::vector<WordSeq> out_node_key;
  std::vector<OutArc> out_arcs;
  std::vector<int> final_survivors;

  for (NodeId v : topo) {
    const int vp = index.node_pos(v);
    const bool is_end = v == lat.end;
    std::vector<Candidate> cands;
    if (v == lat.begin)
      cands.push_back({0.0, {}, init, -1, -1, 0.0});
    else
      cands = std::move(incoming[vp]);

    // Viterbi merge on the key; the first candidate wins exact ties.
    std::map<WordSeq, int> winner;
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
      auto [it, inserted] = winner.emplace(cands[i].key, i);
      if (!inserted && cands[i].score > cands[it->second].score) it->second = i;
    }
    std::vector<int> ranked;
    ranked.reserve(winner.size());
    for (const auto &[key, i] : winner) ranked.push_back(i);
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
      return cands[a].score > cands[b].score;
    });
    if (ranked.size() > beam) ranked.resize(beam);

    std::map<WordSeq, int> kept;  // key -> survivor index
    int shared_end_node = -1;
    for (int i : ranked) {
      Candidate &c = cands[i];
      int out_node;
      if (is_end && shared_end_node >= 0) {
        out_node = shared_end_node;
      } else {
        out_node = static_cast<int>(out_node_pos.size());
        out_node_pos.push_back(vp);
        out_node_key.push_back(is_end ? WordSeq{} : c.key);
        if (is_end) shared_end_node = out_node;
      }
      kept.emplace(c.key, static_cast<int>(survivors.size()));
      if (is_end) final_survivors.push_back(static_cast<int>(survivors.size()));
      survivors.push_back({vp, c.score, c.key, c.state, out_node, c.predecessor, c.arc_pos,
                           c.refined});
    }

    // Every extension landing on a kept key becomes an output arc, including
    // the ones that lost the merge.
    for (const Candidate &c : cands) {
      if (c.predecessor < 0) continue;
      auto it = kept.find(c.key);
      if (it == kept.end()) continue;
      out_arcs.push_back({survivors[c.predecessor].out_node, survivors[it->second].out_node,
                          c.arc_pos, c.refined});
    }

    if (is_end) continue;
    const std::size_t first = survivors.size() - ranked.size();
    for (std::size_t s = first; s < survivors.size(); ++s) {
      for (int a : index.out_arcs(vp)) {
        const Arc &arc = lat.arcs[a];
        const Survivor &h = survivors[s];
        Candidate c;
        c.predecessor = static_cast<int>(s);
        c.arc_pos = a;
        if (is_epsilon(arc.word)) {
          c.refined = 0.0;
          c.state = h.state;
          c.key = h.key;
        } else {
          ScoredStep step = scorer.advance(h.state, arc.word);
          c.refined = refine_arc_lm(arc.lm, step.logprob, params.beta);
          c.state = std::move(step.state);
          if (key_len > 0) {
            c.key = h.key;
            c.key.push_back(arc.word);
            if (static_cast<int>(c.key.size()) > key_len) c.key.erase(c.key.begin());
          }
        }
        c.score = extend(h.score, arc.acoustic, c.refined, params.alpha);
        incoming[index.to_pos(a)].push_back(std::move(c));
      }
    }
  }

  // Drop output nodes that cannot reach the end (their extensions were all
  // pruned downstream), then number what is left densely in creation order,
  // which is already topological.
  const int num_out = static_cast<int>(out_node_pos.size());
  const int end_out = survivors[final_survivors.front()].out_node;
  std::vector<std::vector<int>> in_of(num_out);
  for (int a = 0; a < static_cast<int>(out_arcs.size()); ++a) in_of[out_arcs[a].to].push_back(a);
  std::vector<char> live(num_out, 0);
  std::vector<int> stack{end_out};
  live[end_out] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int a : in_of[v])
      if (!live[out_arcs[a].from]) {
        live[out_arcs[a].from] = 1;
        stack.push_back(out_arcs[a].from);
      }
  }

  RescoredLattice out;
  out.lattice.utterance_id = lat.utterance_id;
  std::vector<int> new_id(num_out, -1);
  for (int v = 0; v < num_out; ++v) {
    if (!live[v]) continue;
    new_id[v] = static_cast<int>(out.lattice.nodes.size());
    const Node &src = lat.nodes[out_node_pos[v]];
    out.lattice.nodes.push_back({new_id[v], src.time});
    out.node_origin.push_back({src.id, out_node_key[v]});
  }
  out.lattice.begin = new_id[0];
  out.lattice.end = new_id[end_out];
  for (const OutArc &oa : out_arcs) {
    if (!live[oa.from] || !live[oa.to]) continue;
    const Arc &src = lat.arcs[oa.arc_pos];
    Arc arc;
    arc.id = static_cast<ArcId>(out.lattice.arcs.size());
    arc.from = new_id[oa.from];
    arc.to = new_id[oa.to];
    arc.word = src.word;
    arc.acoustic = src.acoustic;
    arc.lm = oa.refined;
    out.lattice.arcs.push_back(std::move(arc));
    out.source_arc.push_back(src.id);
    out.origin_arc.push_back(input.origin_arc[oa.arc_pos]);
  }

  if (trace) {
    trace->hypotheses.clear();
    trace->final_hypotheses = final_survivors;
    for (const Survivor &s : survivors)
      trace->hypotheses.push_back({lat.nodes[s.node_pos].id, s.score, s.key, s.predecessor,
                                   s.arc_pos >= 0 ? lat.arcs[s.arc_pos].id : -1, s.refined});
  }
  return out;
}

RescoredLattice rescore_lattice(const Lattice &input, const SequenceScorer &scorer,
                                const RescoreParams &params, const ScorerState &init,
                                SearchTrace *trace) {
  return rescore_lattice(as_rescored(input), scorer, params, init, trace);
}

Path best_path(const Lattice &lattice, double alpha, double *score) {
  struct Best {
    double score;
    WordSeq words;
    std::vector<int> arcs;  // positions
  };
  const LatticeIndex index(lattice);
  std::vector<std::optional<Best>> best(index.num_nodes());
  const int begin = index.node_pos(lattice.begin);
  if (begin < 0) throw Error("best_path: begin node missing");
  best[begin] = Best{0.0, {}, {}};
  for (NodeId v : topo_order(lattice)) {
    const int vp = index.node_pos(v);
    if (!best[vp]) continue;
    for (int a : index.out_arcs(vp)) {
      const Arc &arc = lattice.arcs[a];
      const double s = extend(best[vp]->score, arc.acoustic, arc.lm, alpha);
      const int to = index.to_pos(a);
      WordSeq words = best[vp]->words;
      if (!is_epsilon(arc.word)) words.push_back(arc.word);
      if (!best[to] || s > best[to]->score || (s == best[to]->score && words < best[to]->words)) {
        std::vector<int> arcs = best[vp]->arcs;
        arcs.push_back(a);
        best[to] = Best{s, std::move(words), std::move(arcs)};
      }
    }
  }
  const int end = index.node_pos(lattice.end);
  if (end < 0 || !best[end]) throw Error("best_path: end node unreachable");
  Path path;
  path.words = best[end]->words;
  for (int a : best[end]->arcs) {
    const Arc &arc = lattice.arcs[a];
    path.arcs.push_back(arc.id);
    path.acoustic_total += arc.acoustic;
    path.lm_total += arc.lm;
  }
  if (score) *score = best[end]->score;
  return path;
}

double path_score(const Lattice &lattice, const Path &path, double alpha) {
  std::unordered_map<ArcId, const Arc *> by_id;
  for (const Arc &a : lattice.arcs) by_id[a.id] = &a;
  double s = 0.0;
  for (ArcId id : path.arcs) {
    const Arc &arc = *by_id.at(id);
    s = extend(s, arc.acoustic, arc.lm, alpha);
  }
  return s;
}

}  // namespace latrescore
