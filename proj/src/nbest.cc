// src/nbest.cc
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

#include "latrescore/nbest.h"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "latrescore/error.h"
#include "latrescore/lattice_io.h"
#include "latrescore/pushforward.h"

namespace latrescore {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Upper bound on queue pops per requested hypothesis, for lattices where
// many paths spell the same words.
constexpr std::size_t kPopsPerEntry = 2000;

struct Partial {
  double f;       // g + exact completion score
  double g;
  int node;       // position in the lattice index
  int back;       // index into the arena
  std::size_t seq;

  bool operator<(const Partial &o) const {
    if (f != o.f) return f < o.f;
    return seq > o.seq;  // earlier pushes first among equals
  }
};

bool better(const NBestEntry &a, const NBestEntry &b) {
  if (a.combined != b.combined) return a.combined > b.combined;
  return a.words < b.words;
}

}  // namespace

void sort_nbest(NBestList &list) {
  std::stable_sort(list.entries.begin(), list.entries.end(), better);
}

NBestList extract_nbest(const Lattice &lattice, int n, double alpha) {
  if (n < 1) throw Error("extract_nbest: n must be >= 1");
  if (const ValidationReport report = validate(lattice); !report.ok())
    throw Error("extract_nbest: invalid lattice: " + report.violations.front());
  const LatticeIndex index(lattice);
  const std::vector<NodeId> order = topo_order(lattice);

  std::vector<double> h(index.num_nodes(), kNegInf);
  const int end = index.node_pos(lattice.end);
  h[end] = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = index.node_pos(*it);
    for (int a : index.out_arcs(v)) {
      const Arc &arc = lattice.arcs[a];
      const double to = h[index.to_pos(a)];
      if (to == kNegInf) continue;
      h[v] = std::max(h[v], arc.acoustic + alpha * arc.lm + to);
    }
  }

  NBestList list;
  list.utterance_id = lattice.utterance_id;
  const int begin = index.node_pos(lattice.begin);
  if (h[begin] == kNegInf) return list;

  struct Link {
    int back;
    int arc;
  };
  std::vector<Link> arena;
  std::priority_queue<Partial> queue;
  std::size_t seq = 0;
  queue.push({h[begin], 0.0, begin, -1, seq++});
  std::set<WordSeq> seen;
  const std::size_t max_pops = kPopsPerEntry * static_cast<std::size_t>(n);

  for (std::size_t pops = 0; !queue.empty() && pops < max_pops; ++pops) {
    if (list.entries.size() >= static_cast<std::size_t>(n) &&
        queue.top().f < list.entries.back().combined)
      break;
    const Partial top = queue.top();
    queue.pop();
    if (top.node == end) {
      std::vector<int> arcs;
      for (int b = top.back; b >= 0; b = arena[b].back) arcs.push_back(arena[b].arc);
      std::reverse(arcs.begin(), arcs.end());
      NBestEntry entry;
      for (int a : arcs) {
        const Arc &arc = lattice.arcs[a];
        if (!is_epsilon(arc.word)) entry.words.push_back(arc.word);
        entry.acoustic += arc.acoustic;
        entry.lm += arc.lm;
      }
      entry.combined = entry.acoustic + alpha * entry.lm;
      if (seen.insert(entry.words).second) list.entries.push_back(std::move(entry));
      continue;
    }
    for (int a : index.out_arcs(top.node)) {
      const int to = index.to_pos(a);
      if (h[to] == kNegInf) continue;
      const Arc &arc = lattice.arcs[a];
      const double g = top.g + arc.acoustic + alpha * arc.lm;
      arena.push_back({top.back, a});
      queue.push({g + h[to], g, to, static_cast<int>(arena.size()) - 1, seq++});
    }
  }
  sort_nbest(list);
  if (list.entries.size() > static_cast<std::size_t>(n)) list.entries.resize(n);
  return list;
}

std::string_view to_string(CombinationMode mode) {
  return mode == CombinationMode::kIterative ? "iterative" : "simultaneous";
}

CombinationMode parse_combination_mode(std::string_view s) {
  if (s == "iterative") return CombinationMode::kIterative;
  if (s == "simultaneous") return CombinationMode::kSimultaneous;
  throw Error("unknown combination mode '" + std::string(s) + "'");
}

namespace {

WordSeq directed(const WordSeq &words, bool backward) {
  if (!backward) return words;
  return WordSeq(words.rbegin(), words.rend());
}

// scores[j][h]: full-sequence log-prob of hypothesis h of list j.
std::vector<std::vector<double>> step_scores(const std::vector<NBestList> &lists,
                                             const ScheduleStep &step, double alpha,
                                             std::optional<int> window) {
  const SequenceScorer &scorer = *step.scorer;
  const bool backward = scorer.direction() == Direction::kBackward;
  const std::size_t n = lists.size();
  std::vector<std::vector<double>> scores(n);

  if (step.mode == ContextMode::kNone) {
    for (std::size_t j = 0; j < n; ++j) {
      for (const NBestEntry &e : lists[j].entries)
        scores[j].push_back(score_sequence(scorer, directed(e.words, backward),
                                           scorer.init_state())
                                .logprob);
      scorer.end_utterance();
    }
    return scores;
  }

  SessionContext context(effective_window(scorer, {step.mode, window}));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = backward ? n - 1 - k : k;
    const ScorerState init = context_state(scorer, context);
    const NBestEntry *best = nullptr;
    double best_score = kNegInf;
    for (const NBestEntry &e : lists[j].entries) {
      const double s = score_sequence(scorer, directed(e.words, backward), init).logprob;
      scores[j].push_back(s);
      const double ranked = e.acoustic + alpha * refine_arc_lm(e.lm, s, 0.5);
      if (!best || ranked > best_score || (ranked == best_score && e.words < best->words)) {
        best = &e;
        best_score = ranked;
      }
    }
    if (best) context.push(directed(best->words, backward));
    scorer.end_utterance();
  }
  return scores;
}

}  // namespace

std::vector<NBestList> rescore_nbest_session(const std::vector<NBestList> &lists,
                                             const IterationSchedule &schedule,
                                             const NBestRescoreOptions &options) {
  schedule.check();
  if (!(options.alpha > 0.0)) throw Error("alpha must be > 0");
  if (options.window && *options.window < 1) throw Error("context window J must be >= 1");
  const std::size_t steps = schedule.steps.size();
  const double beta = options.beta.value_or(static_cast<double>(steps) / (steps + 1));
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0, 1)");

  std::vector<std::vector<std::vector<double>>> scores;
  for (const ScheduleStep &step : schedule.steps)
    scores.push_back(step_scores(lists, step, options.alpha, options.window));

  std::vector<NBestList> out = lists;
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t h = 0; h < out[j].entries.size(); ++h) {
      NBestEntry &e = out[j].entries[h];
      const double lm0 = e.lm;
      if (options.mode == CombinationMode::kIterative) {
        double lm = lm0;
        for (std::size_t s = 0; s < steps; ++s)
          lm = refine_arc_lm(lm, scores[s][j][h], interpolation_weight(static_cast<int>(s) + 1));
        e.lm = lm;
      } else {
        double sum = 0.0;
        for (std::size_t s = 0; s < steps; ++s) sum += refine_arc_lm(lm0, scores[s][j][h], beta);
        e.lm = sum / static_cast<double>(steps);
      }
      e.combined = e.acoustic + options.alpha * e.lm;
    }
    sort_nbest(out[j]);
  }
  return out;
}

namespace {

std::string fixed6(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "'", line);
  return value;
}

}  // namespace

std::string write_nbest(const std::vector<NBestList> &lists) {
  std::string out;
  for (const NBestList &list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const NBestEntry &e = list.entries[r];
      out += list.utterance_id + " " + std::to_string(r + 1) + " " + fixed6(e.acoustic) + " " +
             fixed6(e.lm) + " " + fixed6(e.combined);
      for (const std::string &w : e.words) out += " " + w;
      out += "\n";
    }
  }
  return out;
}

std::vector<NBestList> parse_nbest(std::string_view text) {
  std::vector<NBestList> lists;
  std::map<std::string, std::size_t, std::less<>> position;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos) stop = text.size();
    const std::string_view line = text.substr(start, stop - start);
    start = stop + 1;
    ++line_no;
    WordSeq fields = split_words(line);
    if (fields.empty() || fields.front().starts_with("#")) continue;
    if (fields.size() < 5) throw ParseError("expected at least 5 fields", line_no);

    auto [it, inserted] = position.emplace(fields[0], lists.size());
    if (inserted) lists.push_back({fields[0], {}});
    NBestList &list = lists[it->second];

    int rank = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), rank);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
      throw ParseError("bad rank '" + fields[1] + "'", line_no);
    if (rank != static_cast<int>(list.entries.size()) + 1)
      throw ParseError("rank " + fields[1] + " out of sequence for " + fields[0], line_no);

    NBestEntry e;
    e.acoustic = parse_double(fields[2], line_no);
    e.lm = parse_double(fields[3], line_no);
    e.combined = parse_double(fields[4], line_no);
    e.words.assign(fields.begin() + 5, fields.end());
    list.entries.push_back(std::move(e));
  }
  return lists;
}

}  // namespace latrescore
