// include/latrescore/parallel.h
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

// OpenMP drivers over independent units of work. Each function returns
// exactly what the corresponding serial loop returns; work is only spread
// over threads when every scorer involved reports concurrent(). The first
// exception thrown by any worker is rethrown on the calling thread.

#ifndef LATRESCORE_PARALLEL_H_
#define LATRESCORE_PARALLEL_H_

#include <span>
#include <vector>

#include "latrescore/ensemble.h"
#include "latrescore/harness.h"
#include "latrescore/nbest.h"

namespace latrescore::par {

/// Threads OpenMP would use for a parallel region (1 without OpenMP).
int max_threads();

/// rescore_session() with ContextMode::kNone.
std::vector<RescoredLattice> rescore_independent(const std::vector<RescoredLattice> &lattices,
                                                 const SequenceScorer &scorer,
                                                 const RescoreParams &params);

/// run_iterative() for each session.
std::vector<IterationTrace> run_iterative(std::span<const LatticeSession> sessions,
                                          const IterationSchedule &schedule,
                                          const RescoreParams &params,
                                          const ContextPolicy &policy);

/// combine_simultaneous() for each session; the per-scorer passes run
/// concurrently as well.
std::vector<std::vector<RescoredLattice>> combine_simultaneous(
    std::span<const LatticeSession> sessions, const IterationSchedule &schedule,
    const RescoreParams &params, const ContextPolicy &policy);

/// extract_nbest() for each lattice.
std::vector<NBestList> extract_nbest(std::span<const Lattice> lattices, int n, double alpha);

/// build_world() and replay_fig3() for each seed.
std::vector<std::vector<CurvePoint>> replay_worlds(std::span<const std::uint64_t> seeds,
                                                   const WorldConfig &config, int iterations,
                                                   int nbest = 100);

}  // namespace latrescore::par

#endif  // LATRESCORE_PARALLEL_H_
