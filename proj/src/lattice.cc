// src/lattice.cc
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

#include "latrescore/lattice.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "latrescore/error.h"

namespace latrescore {

LatticeIndex::LatticeIndex(const Lattice &lattice) {
  pos_.reserve(lattice.nodes.size());
  for (std::size_t i = 0; i < lattice.nodes.size(); ++i)
    pos_.emplace(lattice.nodes[i].id, static_cast<int>(i));
  out_.resize(lattice.nodes.size());
  in_.resize(lattice.nodes.size());
  from_.resize(lattice.arcs.size());
  to_.resize(lattice.arcs.size());

  std::vector<int> by_id(lattice.arcs.size());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::stable_sort(by_id.begin(), by_id.end(), [&](int a, int b) {
    return lattice.arcs[a].id < lattice.arcs[b].id;
  });
  for (int a : by_id) {
    const Arc &arc = lattice.arcs[a];
    from_[a] = node_pos(arc.from);
    to_[a] = node_pos(arc.to);
    if (from_[a] >= 0) out_[from_[a]].push_back(a);
    if (to_[a] >= 0) in_[to_[a]].push_back(a);
  }
}

int LatticeIndex::node_pos(NodeId id) const {
  auto it = pos_.find(id);
  return it == pos_.end() ? -1 : it->second;
}

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

// Kahn's algorithm over node positions, smallest node id released first.
// Returns fewer than num_nodes() positions when a cycle exists.
std::vector<int> kahn(const Lattice &lattice, const LatticeIndex &index) {
  const std::size_t n = index.num_nodes();
  std::vector<int> indegree(n, 0);
  for (std::size_t a = 0; a < lattice.arcs.size(); ++a)
    if (index.from_pos(a) >= 0 && index.to_pos(a) >= 0) ++indegree[index.to_pos(a)];

  using Item = std::pair<NodeId, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.emplace(lattice.nodes[v].id, static_cast<int>(v));

  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top().second;
    ready.pop();
    order.push_back(v);
    for (int a : index.out_arcs(v)) {
      int to = index.to_pos(a);
      if (to >= 0 && --indegree[to] == 0) ready.emplace(lattice.nodes[to].id, to);
    }
  }
  return order;
}

// Marks nodes reachable from `start` following out arcs (forward) or in arcs.
std::vector<char> reach(const LatticeIndex &index, int start, bool forward) {
  std::vector<char> seen(index.num_nodes(), 0);
  if (start < 0) return seen;
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    const auto &arcs = forward ? index.out_arcs(v) : index.in_arcs(v);
    for (int a : arcs) {
      int w = forward ? index.to_pos(a) : index.from_pos(a);
      if (w >= 0 && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

double unit_uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ValidationReport validate(const Lattice &lattice) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  std::set<NodeId> node_ids;
  for (const Node &node : lattice.nodes) {
    if (!node_ids.insert(node.id).second)
      fail("duplicate node id " + std::to_string(node.id));
    if (node.time && !(std::isfinite(*node.time) && *node.time >= 0.0))
      fail("node " + std::to_string(node.id) + ": invalid time");
  }
  std::set<ArcId> arc_ids;
  bool dangling = false;
  for (const Arc &arc : lattice.arcs) {
    const std::string tag = "arc " + std::to_string(arc.id) + ": ";
    if (!arc_ids.insert(arc.id).second) fail("duplicate arc id " + std::to_string(arc.id));
    if (!node_ids.count(arc.from) || !node_ids.count(arc.to)) {
      fail(tag + "dangling endpoint");
      dangling = true;
    }
    if (arc.word.empty() || has_whitespace(arc.word)) fail(tag + "invalid word");
    if (!std::isfinite(arc.acoustic) || !std::isfinite(arc.lm))
      fail(tag + "non-finite score");
    if (is_epsilon(arc.word) && arc.lm != 0.0) fail(tag + "epsilon arc with lm score");
  }

  const bool has_begin = node_ids.count(lattice.begin) > 0;
  const bool has_end = node_ids.count(lattice.end) > 0;
  if (!has_begin) fail("begin node missing");
  if (!has_end) fail("end node missing");
  if (has_begin && has_end && lattice.begin == lattice.end)
    fail("begin node equals end node");

  LatticeIndex index(lattice);
  if (kahn(lattice, index).size() != index.num_nodes()) fail("cycle detected");

  for (std::size_t v = 0; v < index.num_nodes(); ++v) {
    const NodeId id = lattice.nodes[v].id;
    const bool no_in = index.in_arcs(v).empty();
    const bool no_out = index.out_arcs(v).empty();
    if (id == lattice.begin && !no_in) fail("begin node has incoming arcs");
    if (id == lattice.end && !no_out) fail("end node has outgoing arcs");
    if (id != lattice.begin && no_in)
      fail("node " + std::to_string(id) + ": extra begin node (in-degree 0)");
    if (id != lattice.end && no_out)
      fail("node " + std::to_string(id) + ": extra end node (out-degree 0)");
  }

  if (has_begin && has_end && !dangling) {
    auto from_begin = reach(index, index.node_pos(lattice.begin), true);
    auto to_end = reach(index, index.node_pos(lattice.end), false);
    for (std::size_t v = 0; v < index.num_nodes(); ++v)
      if (!from_begin[v] || !to_end[v])
        fail("node " + std::to_string(lattice.nodes[v].id) +
             ": not on a begin-end path");
  }
  return report;
}

std::vector<NodeId> topo_order(const Lattice &lattice) {
  LatticeIndex index(lattice);
  std::vector<int> order = kahn(lattice, index);
  if (order.size() != index.num_nodes()) throw Error("not a DAG");
  std::vector<NodeId> ids;
  ids.reserve(order.size());
  for (int v : order) ids.push_back(lattice.nodes[v].id);
  return ids;
}

Lattice reverse(const Lattice &lattice) {
  Lattice out = lattice;
  for (Arc &arc : out.arcs) std::swap(arc.from, arc.to);
  std::swap(out.begin, out.end);
  return out;
}

std::vector<Path> enumerate_paths(const Lattice &lattice, std::size_t max_paths) {
  LatticeIndex index(lattice);
  if (kahn(lattice, index).size() != index.num_nodes()) throw Error("not a DAG");
  const int begin = index.node_pos(lattice.begin);
  const int end = index.node_pos(lattice.end);
  std::vector<Path> paths;
  if (begin < 0 || end < 0) return paths;

  std::vector<int> stack;  // arc positions on the current prefix
  std::function<void(int)> walk = [&](int v) {
    if (v == end) {
      if (paths.size() == max_paths) throw Error("oracle blowup");
      Path path;
      for (int a : stack) {
        const Arc &arc = lattice.arcs[a];
        path.arcs.push_back(arc.id);
        if (!is_epsilon(arc.word)) path.words.push_back(arc.word);
        path.acoustic_total += arc.acoustic;
        path.lm_total += arc.lm;
      }
      paths.push_back(std::move(path));
      return;
    }
    for (int a : index.out_arcs(v)) {
      stack.push_back(a);
      walk(index.to_pos(a));
      stack.pop_back();
    }
  };
  walk(begin);
  return paths;
}

Lattice synth_lattice(std::uint64_t seed, int nodes, int branching,
                      const WordSeq &vocab) {
  if (vocab.empty()) throw Error("synth_lattice: empty vocabulary");
  if (nodes < 2) throw Error("synth_lattice: need at least 2 nodes");
  if (branching < 1) throw Error("synth_lattice: branching must be >= 1");

  std::mt19937_64 rng(seed);
  Lattice lattice;
  lattice.utterance_id = "synth-" + std::to_string(seed);
  for (int i = 0; i < nodes; ++i) lattice.nodes.push_back({i, 0.01 * i});
  lattice.begin = 0;
  lattice.end = nodes - 1;

  ArcId next_id = 0;
  auto pick_word = [&]() -> const std::string & {
    auto w = static_cast<std::size_t>(unit_uniform(rng) * vocab.size());
    return vocab[std::min(w, vocab.size() - 1)];
  };
  auto add_arc = [&](int from, int to, const std::string &word) {
    Arc arc;
    arc.id = next_id++;
    arc.from = from;
    arc.to = to;
    arc.word = word;
    arc.acoustic = -5.0 * unit_uniform(rng);
    arc.lm = std::log(0.05 + 0.95 * unit_uniform(rng));
    lattice.arcs.push_back(std::move(arc));
  };
  for (int i = 0; i + 1 < nodes; ++i) {
    add_arc(i, i + 1, pick_word());
    const int span = std::min(3, nodes - 1 - i);
    for (int b = 1; b < branching; ++b) {
      const std::string &word = pick_word();
      int to = i + 1 + std::min(static_cast<int>(unit_uniform(rng) * span), span - 1);
      add_arc(i, to, word);
    }
  }
  return lattice;
}

Lattice normalize_endpoints(Lattice lattice) {
  LatticeIndex index(lattice);
  std::vector<NodeId> sources, sinks;
  NodeId max_node = -1;
  ArcId max_arc = -1;
  for (std::size_t v = 0; v < index.num_nodes(); ++v) {
    max_node = std::max(max_node, lattice.nodes[v].id);
    if (index.in_arcs(v).empty()) sources.push_back(lattice.nodes[v].id);
    if (index.out_arcs(v).empty()) sinks.push_back(lattice.nodes[v].id);
  }
  for (const Arc &arc : lattice.arcs) max_arc = std::max(max_arc, arc.id);

  auto eps = [&](NodeId from, NodeId to) {
    Arc arc;
    arc.id = ++max_arc;
    arc.from = from;
    arc.to = to;
    arc.word = std::string(kEpsilon);
    lattice.arcs.push_back(std::move(arc));
  };
  if (sources.size() == 1) {
    lattice.begin = sources.front();
  } else if (sources.size() > 1) {
    lattice.begin = ++max_node;
    lattice.nodes.push_back({lattice.begin, std::nullopt});
    for (NodeId s : sources) eps(lattice.begin, s);
  }
  if (sinks.size() == 1) {
    lattice.end = sinks.front();
  } else if (sinks.size() > 1) {
    lattice.end = ++max_node;
    lattice.nodes.push_back({lattice.end, std::nullopt});
    for (NodeId s : sinks) eps(s, lattice.end);
  }
  return lattice;
}

Lattice trim(const Lattice &lattice) {
  LatticeIndex index(lattice);
  auto fwd = reach(index, index.node_pos(lattice.begin), true);
  auto bwd = reach(index, index.node_pos(lattice.end), false);
  Lattice out;
  out.utterance_id = lattice.utterance_id;
  out.begin = lattice.begin;
  out.end = lattice.end;
  for (std::size_t v = 0; v < index.num_nodes(); ++v)
    if (fwd[v] && bwd[v]) out.nodes.push_back(lattice.nodes[v]);
  for (std::size_t a = 0; a < lattice.arcs.size(); ++a) {
    int f = index.from_pos(a), t = index.to_pos(a);
    if (f >= 0 && t >= 0 && fwd[f] && bwd[f] && fwd[t] && bwd[t])
      out.arcs.push_back(lattice.arcs[a]);
  }
  return out;
}

Lattice renumber(const Lattice &lattice, Renumbering *map) {
  std::vector<NodeId> order = topo_order(lattice);
  std::unordered_map<NodeId, NodeId> new_id;
  for (std::size_t i = 0; i < order.size(); ++i)
    new_id[order[i]] = static_cast<NodeId>(i);
  std::unordered_map<NodeId, const Node *> by_id;
  for (const Node &node : lattice.nodes) by_id[node.id] = &node;

  Lattice out;
  out.utterance_id = lattice.utterance_id;
  out.begin = new_id.at(lattice.begin);
  out.end = new_id.at(lattice.end);
  for (std::size_t i = 0; i < order.size(); ++i)
    out.nodes.push_back({static_cast<NodeId>(i), by_id.at(order[i])->time});

  std::vector<int> arc_order(lattice.arcs.size());
  std::iota(arc_order.begin(), arc_order.end(), 0);
  auto key = [&](int a) {
    const Arc &arc = lattice.arcs[a];
    return std::make_tuple(new_id.at(arc.from), new_id.at(arc.to), arc.id);
  };
  std::sort(arc_order.begin(), arc_order.end(),
            [&](int a, int b) { return key(a) < key(b); });
  if (map) {
    map->old_node = order;
    map->old_arc.clear();
  }
  for (std::size_t i = 0; i < arc_order.size(); ++i) {
    Arc arc = lattice.arcs[arc_order[i]];
    if (map) map->old_arc.push_back(arc.id);
    arc.id = static_cast<ArcId>(i);
    arc.from = new_id.at(arc.from);
    arc.to = new_id.at(arc.to);
    out.arcs.push_back(std::move(arc));
  }
  return out;
}

namespace {

using Label = std::tuple<std::string, double, double>;

Label arc_label(const Arc &arc, bool compare_lm) {
  return {arc.word, arc.acoustic, compare_lm ? arc.lm : 0.0};
}

std::string hexf(double x) {
  std::ostringstream os;
  os << std::hexfloat << x;
  return os.str();
}

// Weisfeiler-Lehman style colouring computed jointly for both lattices so
// colours are comparable across them.
std::vector<std::vector<int>> joint_colours(const Lattice *const lats[2],
                                            const LatticeIndex *const idx[2],
                                            bool compare_lm) {
  std::vector<std::vector<int>> colour(2);
  for (int g = 0; g < 2; ++g) {
    colour[g].assign(idx[g]->num_nodes(), 0);
    for (std::size_t v = 0; v < idx[g]->num_nodes(); ++v) {
      NodeId id = lats[g]->nodes[v].id;
      colour[g][v] = (id == lats[g]->begin ? 1 : 0) + (id == lats[g]->end ? 2 : 0);
    }
  }
  const std::size_t rounds = std::max(idx[0]->num_nodes(), idx[1]->num_nodes()) + 1;
  for (std::size_t round = 0; round < rounds; ++round) {
    std::map<std::string, int> palette;
    std::vector<std::vector<std::string>> sig(2);
    for (int g = 0; g < 2; ++g) {
      for (std::size_t v = 0; v < idx[g]->num_nodes(); ++v) {
        std::vector<std::string> outs, ins;
        for (int a : idx[g]->out_arcs(v)) {
          auto [w, ac, lm] = arc_label(lats[g]->arcs[a], compare_lm);
          outs.push_back(w + "|" + hexf(ac) + "|" + hexf(lm) + "|" +
                         std::to_string(colour[g][idx[g]->to_pos(a)]));
        }
        for (int a : idx[g]->in_arcs(v)) {
          auto [w, ac, lm] = arc_label(lats[g]->arcs[a], compare_lm);
          ins.push_back(w + "|" + hexf(ac) + "|" + hexf(lm) + "|" +
                        std::to_string(colour[g][idx[g]->from_pos(a)]));
        }
        std::sort(outs.begin(), outs.end());
        std::sort(ins.begin(), ins.end());
        std::string s = std::to_string(colour[g][v]) + "#";
        for (auto &o : outs) s += o + ";";
        s += "#";
        for (auto &i : ins) s += i + ";";
        sig[g].push_back(std::move(s));
      }
    }
    for (int g = 0; g < 2; ++g)
      for (auto &s : sig[g]) palette.emplace(s, 0);
    int next = 0;
    for (auto &[s, c] : palette) c = next++;
    bool changed = false;
    std::size_t before = 0, after = palette.size();
    {
      std::set<int> distinct;
      for (int g = 0; g < 2; ++g)
        for (int c : colour[g]) distinct.insert(c);
      before = distinct.size();
    }
    for (int g = 0; g < 2; ++g)
      for (std::size_t v = 0; v < idx[g]->num_nodes(); ++v)
        colour[g][v] = palette.at(sig[g][v]);
    changed = after != before;
    if (!changed && round > 0) break;
  }
  return colour;
}

}  // namespace

bool isomorphic(const Lattice &a, const Lattice &b, bool compare_lm) {
  if (a.nodes.size() != b.nodes.size() || a.arcs.size() != b.arcs.size()) return false;
  LatticeIndex ia(a), ib(b);
  if (kahn(a, ia).size() != ia.num_nodes() || kahn(b, ib).size() != ib.num_nodes())
    return false;
  const Lattice *lats[2] = {&a, &b};
  const LatticeIndex *idx[2] = {&ia, &ib};
  auto colour = joint_colours(lats, idx, compare_lm);
  {
    auto ca = colour[0], cb = colour[1];
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;
  }

  std::vector<int> order = kahn(a, ia);
  std::vector<int> map_ab(ia.num_nodes(), -1);
  std::vector<char> used(ib.num_nodes(), 0);

  // Arc labels between two mapped nodes must agree as multisets.
  auto labels_between = [&](const Lattice &l, const LatticeIndex &ix, int from, int to) {
    std::vector<Label> out;
    for (int arc : ix.out_arcs(from))
      if (ix.to_pos(arc) == to) out.push_back(arc_label(l.arcs[arc], compare_lm));
    std::sort(out.begin(), out.end());
    return out;
  };

  std::function<bool(std::size_t)> assign = [&](std::size_t k) -> bool {
    if (k == order.size()) return true;
    const int v = order[k];
    for (std::size_t w = 0; w < ib.num_nodes(); ++w) {
      if (used[w] || colour[1][w] != colour[0][v]) continue;
      bool ok = true;
      std::set<int> preds;
      for (int arc : ia.in_arcs(v)) preds.insert(ia.from_pos(arc));
      for (int u : preds) {
        if (labels_between(a, ia, u, v) !=
            labels_between(b, ib, map_ab[u], static_cast<int>(w))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      map_ab[v] = static_cast<int>(w);
      used[w] = 1;
      if (assign(k + 1)) return true;
      map_ab[v] = -1;
      used[w] = 0;
    }
    return false;
  };
  if (!assign(0)) return false;
  return b.nodes[map_ab[ia.node_pos(a.begin)]].id == b.begin &&
         b.nodes[map_ab[ia.node_pos(a.end)]].id == b.end;
}

}  // namespace latrescore
