// bench/bench_rescore.cc
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

// Serial loops against the OpenMP drivers on synthetic lattices.

#include <benchmark/benchmark.h>

#include <vector>

#include "latrescore/context.h"
#include "latrescore/ensemble.h"
#include "latrescore/harness.h"
#include "latrescore/mock_scorer.h"
#include "latrescore/nbest.h"
#include "latrescore/parallel.h"

namespace {

using namespace latrescore;

WordSeq bench_vocab() {
  WordSeq v;
  for (char c = 'a'; c <= 'p'; ++c) v.emplace_back(1, c);
  return v;
}

std::vector<Lattice> bench_lattices(int count, int nodes) {
  std::vector<Lattice> out;
  for (int i = 0; i < count; ++i) out.push_back(synth_lattice(7000 + i, nodes, 3, bench_vocab()));
  return out;
}

std::vector<RescoredLattice> wrap(const std::vector<Lattice> &lattices) {
  std::vector<RescoredLattice> out;
  for (const Lattice &l : lattices) out.push_back(as_rescored(l));
  return out;
}

std::vector<LatticeSession> bench_sessions(int count) {
  std::vector<LatticeSession> out;
  for (int s = 0; s < count; ++s) {
    LatticeSession session;
    session.session_id = "bench" + std::to_string(s);
    for (int j = 0; j < 8; ++j) {
      session.lattices.push_back(synth_lattice(9000 + 100 * s + j, 24, 3, bench_vocab()));
      session.references.emplace_back();
    }
    out.push_back(std::move(session));
  }
  return out;
}

void BM_RescoreSerial(benchmark::State &state) {
  const auto lattices = wrap(bench_lattices(64, static_cast<int>(state.range(0))));
  const MockScorer scorer(11, bench_vocab());
  const RescoreParams params = RescoreParams::rich(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(rescore_session(lattices, scorer, params, ContextPolicy{}));
}
BENCHMARK(BM_RescoreSerial)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_RescoreParallel(benchmark::State &state) {
  const auto lattices = wrap(bench_lattices(64, static_cast<int>(state.range(0))));
  const MockScorer scorer(11, bench_vocab());
  const RescoreParams params = RescoreParams::rich(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(par::rescore_independent(lattices, scorer, params));
  state.counters["threads"] = par::max_threads();
}
BENCHMARK(BM_RescoreParallel)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

struct Scorers {
  MockScorer f{21, bench_vocab(), {"F1", Direction::kForward}};
  MockScorer b{22, bench_vocab(), {"B1", Direction::kBackward}};
  std::vector<const SequenceScorer *> all{&f, &b};
};

void BM_IterativeSerial(benchmark::State &state) {
  const auto sessions = bench_sessions(8);
  const Scorers s;
  const IterationSchedule schedule = IterationSchedule::of(s.all, true);
  const RescoreParams params = RescoreParams::rich(1.0);
  for (auto _ : state)
    for (const LatticeSession &session : sessions)
      benchmark::DoNotOptimize(run_iterative(session, schedule, params, ContextPolicy{}));
}
BENCHMARK(BM_IterativeSerial)->Unit(benchmark::kMillisecond);

void BM_IterativeParallel(benchmark::State &state) {
  const auto sessions = bench_sessions(8);
  const Scorers s;
  const IterationSchedule schedule = IterationSchedule::of(s.all, true);
  const RescoreParams params = RescoreParams::rich(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(par::run_iterative(sessions, schedule, params, ContextPolicy{}));
}
BENCHMARK(BM_IterativeParallel)->Unit(benchmark::kMillisecond);

void BM_NBestSerial(benchmark::State &state) {
  const auto lattices = bench_lattices(64, 40);
  for (auto _ : state)
    for (const Lattice &l : lattices) benchmark::DoNotOptimize(extract_nbest(l, 100, 1.0));
}
BENCHMARK(BM_NBestSerial)->Unit(benchmark::kMillisecond);

void BM_NBestParallel(benchmark::State &state) {
  const auto lattices = bench_lattices(64, 40);
  for (auto _ : state) benchmark::DoNotOptimize(par::extract_nbest(lattices, 100, 1.0));
}
BENCHMARK(BM_NBestParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
