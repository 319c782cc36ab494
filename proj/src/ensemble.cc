// src/ensemble.cc
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

#include "latrescore/ensemble.h"

#include <map>
#include <sstream>
#include <tuple>

#include "latrescore/error.h"
#include "latrescore/parallel.h"

namespace latrescore {

void IterationSchedule::check() const {
  if (steps.empty()) throw Error("schedule is empty");
  for (const ScheduleStep &step : steps) {
    if (!step.scorer) throw Error("schedule step without a scorer");
    if (step.mode != ContextMode::kNone && step.mode != carry_mode(*step.scorer))
      throw Error("scorer '" + step.scorer->name() + "' is " +
                  std::string(to_string(step.scorer->direction())) +
                  " but its step carries context " + std::string(to_string(step.mode)));
  }
}

IterationSchedule IterationSchedule::of(std::span<const SequenceScorer *const> scorers,
                                        bool carry) {
  IterationSchedule schedule;
  for (const SequenceScorer *s : scorers)
    schedule.steps.push_back({s, carry && s ? carry_mode(*s) : ContextMode::kNone});
  return schedule;
}

std::optional<WerCounts> session_wer(const LatticeSession &session,
                                     const std::vector<WordSeq> &hyps) {
  if (session.references.size() != hyps.size()) return std::nullopt;
  WerCounts total;
  for (std::size_t j = 0; j < hyps.size(); ++j) {
    if (session.references[j].empty()) return std::nullopt;
    total += wer(session.references[j], hyps[j]);
  }
  return total;
}

IterationTrace run_iterative(const LatticeSession &session, const IterationSchedule &schedule,
                             const RescoreParams &params, const ContextPolicy &policy) {
  schedule.check();
  params.check();
  policy.check();
  std::vector<RescoredLattice> current;
  for (const Lattice &l : session.lattices) current.push_back(as_rescored(l));

  IterationTrace trace;
  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    const ScheduleStep &step = schedule.steps[s];
    const int i = static_cast<int>(s) + 1;
    RescoreParams p = params;
    p.beta = interpolation_weight(i);
    current = rescore_session(current, *step.scorer, p, {step.mode, policy.window});

    IterationResult result;
    result.iteration = i;
    result.beta = p.beta;
    result.scorer = step.scorer->name();
    result.mode = step.mode;
    result.best = best_words(current, params.alpha);
    result.wer = session_wer(session, result.best);
    result.lattices = current;
    trace.push_back(std::move(result));
  }
  return trace;
}

RescoredLattice combine_lattices(std::span<const RescoredLattice *const> lattices) {
  if (lattices.empty()) throw Error("combine_lattices: nothing to combine");

  Lattice merged;
  merged.utterance_id = lattices.front()->lattice.utterance_id;
  std::vector<NodeOrigin> origins;
  std::map<NodeOrigin, NodeId> node_of;

  struct ArcSum {
    std::size_t arc;  // position in merged.arcs
    double lm_sum = 0.0;
    int count = 0;
  };
  std::map<std::tuple<ArcId, NodeId, NodeId>, ArcSum> arc_of;
  std::vector<ArcId> source, origin;

  for (const RescoredLattice *r : lattices) {
    const Lattice &l = r->lattice;
    std::map<NodeId, NodeId> local;  // this lattice's node id -> merged id
    for (std::size_t v = 0; v < l.nodes.size(); ++v) {
      const NodeOrigin &o = r->node_origin[v];
      auto [it, inserted] = node_of.emplace(o, static_cast<NodeId>(merged.nodes.size()));
      if (inserted) {
        merged.nodes.push_back({it->second, l.nodes[v].time});
        origins.push_back(o);
      }
      local[l.nodes[v].id] = it->second;
    }
    const NodeId begin = local.at(l.begin), end = local.at(l.end);
    if (r == lattices.front()) {
      merged.begin = begin;
      merged.end = end;
    } else if (begin != merged.begin || end != merged.end) {
      throw Error("combine_lattices: lattices disagree on begin/end nodes");
    }

    for (std::size_t a = 0; a < l.arcs.size(); ++a) {
      const Arc &arc = l.arcs[a];
      const NodeId from = local.at(arc.from), to = local.at(arc.to);
      auto [it, inserted] =
          arc_of.emplace(std::tuple(r->source_arc[a], from, to), ArcSum{merged.arcs.size()});
      if (inserted) {
        Arc copy = arc;
        copy.id = static_cast<ArcId>(merged.arcs.size());
        copy.from = from;
        copy.to = to;
        merged.arcs.push_back(std::move(copy));
        source.push_back(r->source_arc[a]);
        origin.push_back(r->origin_arc[a]);
      } else {
        const Arc &seen = merged.arcs[it->second.arc];
        if (seen.word != arc.word || seen.acoustic != arc.acoustic)
          throw Error("combine_lattices: arcs with the same provenance disagree");
      }
      it->second.lm_sum += arc.lm;
      ++it->second.count;
    }
  }
  for (const auto &[key, sum] : arc_of) merged.arcs[sum.arc].lm = sum.lm_sum / sum.count;

  Renumbering map;
  RescoredLattice out;
  out.lattice = renumber(merged, &map);
  for (NodeId old : map.old_node) out.node_origin.push_back(origins[old]);
  for (ArcId old : map.old_arc) {
    out.source_arc.push_back(source[old]);
    out.origin_arc.push_back(origin[old]);
  }
  return out;
}

std::vector<RescoredLattice> combine_simultaneous(const LatticeSession &session,
                                                  const IterationSchedule &schedule,
                                                  const RescoreParams &params,
                                                  const ContextPolicy &policy) {
  schedule.check();
  params.check();
  policy.check();
  std::vector<std::vector<RescoredLattice>> passes;
  for (const ScheduleStep &step : schedule.steps)
    passes.push_back(rescore_session(session, *step.scorer, params, {step.mode, policy.window}));

  std::vector<RescoredLattice> combined;
  for (std::size_t j = 0; j < session.lattices.size(); ++j) {
    std::vector<const RescoredLattice *> parts;
    for (const auto &pass : passes) parts.push_back(&pass[j]);
    combined.push_back(combine_lattices(parts));
  }
  return combined;
}

namespace {

std::optional<double> pooled_wer(std::span<const LatticeSession> sessions,
                                 const std::vector<std::vector<WordSeq>> &hyps) {
  if (sessions.empty()) return std::nullopt;
  WerCounts total;
  for (std::size_t s = 0; s < sessions.size(); ++s) {
    auto w = session_wer(sessions[s], hyps[s]);
    if (!w) return std::nullopt;
    total += *w;
  }
  return total.wer();
}

}  // namespace

ComparisonReport compare_methods(std::span<const LatticeSession> dev,
                                 std::span<const LatticeSession> eval,
                                 std::span<const SequenceScorer *const> scorers, double alpha,
                                 const ContextPolicy &policy) {
  if (scorers.empty()) throw Error("compare_methods: no scorers");
  ComparisonReport report;
  const int iterations = static_cast<int>(scorers.size());
  {
    std::ostringstream note;
    note << "simultaneous combination weights the first-pass LM score by 1-beta = 0.5; "
         << "iterative combination weights it by 1/(I+1) = 1/" << iterations + 1;
    report.notes.push_back(note.str());
  }

  struct Setting {
    const char *name;
    RescoreParams params;
  };
  const Setting settings[] = {{"rich", RescoreParams::rich(alpha)},
                              {"fast", RescoreParams::fast(alpha)}};
  for (const Setting &setting : settings) {
    for (bool carry : {false, true}) {
      const IterationSchedule schedule = IterationSchedule::of(scorers, carry);
      for (const char *method : {"iterative", "simultaneous"}) {
        const bool iterative = std::string_view(method) == "iterative";
        auto hyps_for = [&](std::span<const LatticeSession> sessions) {
          std::vector<std::vector<WordSeq>> hyps;
          if (iterative) {
            for (const IterationTrace &t :
                 par::run_iterative(sessions, schedule, setting.params, policy))
              hyps.push_back(t.back().best);
          } else {
            for (const auto &combined :
                 par::combine_simultaneous(sessions, schedule, setting.params, policy))
              hyps.push_back(best_words(combined, alpha));
          }
          return hyps;
        };
        ReportRow row;
        row.iteration = iterations;
        row.method = method;
        row.search_setting = setting.name;
        row.context = carry ? "yes" : "no";
        row.dev_wer = pooled_wer(dev, hyps_for(dev));
        row.eval_wer = pooled_wer(eval, hyps_for(eval));
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

}  // namespace latrescore
