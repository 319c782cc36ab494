// include/latrescore/harness.h
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

// Synthetic worlds for end-to-end experiments.
//
// The "true" language is a first-order Markov chain over a small
// vocabulary. A session is one long walk of the chain cut into utterances,
// so words at the end of one utterance predict the start of the next. Each
// utterance becomes a confusion-network lattice holding the true word and a
// few distractors per slot, with noisy acoustic scores and the stationary
// unigram as first-pass LM score.
//
// The ensemble consists of E bigram models whose log-probabilities are the
// truth plus independent Gaussian noise, alternating forward and backward
// (F1 B1 F2 B2 ...). Averaging more of them moves the combined score
// towards the true chain.

#ifndef LATRESCORE_HARNESS_H_
#define LATRESCORE_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "latrescore/ensemble.h"
#include "latrescore/lattice_io.h"
#include "latrescore/ngram.h"

namespace latrescore {

struct WorldConfig {
  int ensemble_size = 8;
  int vocab_size = 20;
  int sessions = 2;
  int utterances_per_session = 20;
  int min_words = 4;
  int max_words = 9;
  int alternatives = 3;       // distractor words per slot
  double skip_prob = 0.05;    // chance of an epsilon arc over a slot
  double sharpness = 2.0;     // spread of the true transition logits
  double perturbation = 1.0;  // std-dev of ensemble log-prob noise
  double acoustic_base = 5.0;
  double acoustic_margin = 0.5;
  double acoustic_noise = 0.7;
  double alpha = 1.0;

  /// Throws Error on out-of-range settings (E >= 2, vocab >= 4, ...).
  void check() const;
};

struct SyntheticWorld {
  std::uint64_t seed = 0;
  WorldConfig config;
  WordSeq vocab;
  std::vector<std::vector<double>> transition;  // true P(next | prev)
  std::vector<double> stationary;
  std::vector<std::shared_ptr<const NgramTable>> tables;  // one per ensemble member
  std::vector<std::unique_ptr<SequenceScorer>> ensemble;  // F1 B1 F2 B2 ...
  std::vector<LatticeSession> sessions;

  std::vector<const SequenceScorer *> scorers() const;
  /// The first `iterations` ensemble members, with or without carry-over.
  IterationSchedule schedule(int iterations, bool carry) const;
};

/// Deterministic in (seed, config).
SyntheticWorld build_world(std::uint64_t seed, const WorldConfig &config);
SyntheticWorld build_world(std::uint64_t seed, int ensemble_size, int vocab_size,
                           int utterances_per_session);

/// Writes `dir/<session>.jsonl` manifests with `dir/lat/<utt>.slf` lattices
/// and `dir/lm/<name>.arpa` for each ensemble member.
void write_world(const SyntheticWorld &world, const std::filesystem::path &dir);

struct CurvePoint {
  int iteration = 0;
  std::string search;  // "lattice" or "100-best" style label
  bool context = false;
  double wer = 0.0;    // pooled over the world's sessions
};

/// WER after iterations 1..I of iterative combination, for lattice and
/// N-best rescoring, each with and without carry-over. Lattice rescoring
/// uses the rich search setting.
std::vector<CurvePoint> replay_fig3(const SyntheticWorld &world, int iterations,
                                    int nbest = 100);

/// Point-wise mean over worlds of curves with the same layout.
std::vector<CurvePoint> average_curves(const std::vector<std::vector<CurvePoint>> &per_world);

/// Columns: iteration, search, context, wer (percent, 2 decimals).
void write_curves_tsv(std::ostream &out, const std::vector<CurvePoint> &points);

}  // namespace latrescore

#endif  // LATRESCORE_HARNESS_H_
