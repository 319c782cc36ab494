// src/parallel.cc
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

#include "latrescore/parallel.h"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace latrescore::par {

namespace {

// Runs body(i) for i in [0, n), in parallel when `parallel` is set.
template <typename Body>
void for_each_index(std::size_t n, bool parallel, Body &&body) {
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

bool all_concurrent(const IterationSchedule &schedule) {
  for (const ScheduleStep &step : schedule.steps)
    if (step.scorer && !step.scorer->concurrent()) return false;
  return true;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<RescoredLattice> rescore_independent(const std::vector<RescoredLattice> &lattices,
                                                 const SequenceScorer &scorer,
                                                 const RescoreParams &params) {
  if (!scorer.concurrent()) return rescore_session(lattices, scorer, params, {});
  params.check();
  std::vector<RescoredLattice> out(lattices.size());
  for_each_index(lattices.size(), true, [&](std::size_t j) {
    out[j] = rescore_directed(lattices[j], scorer, params, scorer.init_state());
  });
  scorer.end_utterance();
  return out;
}

std::vector<IterationTrace> run_iterative(std::span<const LatticeSession> sessions,
                                          const IterationSchedule &schedule,
                                          const RescoreParams &params,
                                          const ContextPolicy &policy) {
  schedule.check();
  std::vector<IterationTrace> out(sessions.size());
  for_each_index(sessions.size(), all_concurrent(schedule), [&](std::size_t s) {
    out[s] = latrescore::run_iterative(sessions[s], schedule, params, policy);
  });
  return out;
}

std::vector<std::vector<RescoredLattice>> combine_simultaneous(
    std::span<const LatticeSession> sessions, const IterationSchedule &schedule,
    const RescoreParams &params, const ContextPolicy &policy) {
  schedule.check();
  params.check();
  policy.check();
  const bool parallel = all_concurrent(schedule);
  const std::size_t steps = schedule.steps.size();

  // passes[s][k]: pass of step k over session s.
  std::vector<std::vector<std::vector<RescoredLattice>>> passes(
      sessions.size(), std::vector<std::vector<RescoredLattice>>(steps));
  for_each_index(sessions.size() * steps, parallel, [&](std::size_t task) {
    const std::size_t s = task / steps, k = task % steps;
    const ScheduleStep &step = schedule.steps[k];
    passes[s][k] =
        rescore_session(sessions[s], *step.scorer, params, {step.mode, policy.window});
  });

  std::vector<std::vector<RescoredLattice>> out(sessions.size());
  for (std::size_t s = 0; s < sessions.size(); ++s)
    out[s].resize(sessions[s].lattices.size());
  std::vector<std::pair<std::size_t, std::size_t>> units;
  for (std::size_t s = 0; s < sessions.size(); ++s)
    for (std::size_t j = 0; j < sessions[s].lattices.size(); ++j) units.emplace_back(s, j);
  for_each_index(units.size(), true, [&](std::size_t u) {
    const auto [s, j] = units[u];
    std::vector<const RescoredLattice *> parts;
    for (std::size_t k = 0; k < steps; ++k) parts.push_back(&passes[s][k][j]);
    out[s][j] = combine_lattices(parts);
  });
  return out;
}

std::vector<NBestList> extract_nbest(std::span<const Lattice> lattices, int n, double alpha) {
  std::vector<NBestList> out(lattices.size());
  for_each_index(lattices.size(), true, [&](std::size_t j) {
    out[j] = latrescore::extract_nbest(lattices[j], n, alpha);
  });
  return out;
}

std::vector<std::vector<CurvePoint>> replay_worlds(std::span<const std::uint64_t> seeds,
                                                   const WorldConfig &config, int iterations,
                                                   int nbest) {
  std::vector<std::vector<CurvePoint>> out(seeds.size());
  for_each_index(seeds.size(), true, [&](std::size_t w) {
    out[w] = replay_fig3(build_world(seeds[w], config), iterations, nbest);
  });
  return out;
}

}  // namespace latrescore::par
