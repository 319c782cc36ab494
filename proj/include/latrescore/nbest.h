// include/latrescore/nbest.h
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

#ifndef LATRESCORE_NBEST_H_
#define LATRESCORE_NBEST_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latrescore/context.h"
#include "latrescore/ensemble.h"
#include "latrescore/lattice.h"

namespace latrescore {

struct NBestEntry {
  WordSeq words;  // no epsilons
  double acoustic = 0.0;
  double lm = 0.0;
  double combined = 0.0;  // acoustic + alpha * lm

  friend bool operator==(const NBestEntry &, const NBestEntry &) = default;
};

struct NBestList {
  std::string utterance_id;
  std::vector<NBestEntry> entries;  // best first

  friend bool operator==(const NBestList &, const NBestList &) = default;
};

/// Up to `n` distinct word sequences of `lattice` in decreasing order of
/// acoustic + alpha * lm. When two paths spell the same words only the
/// better one is listed. Equal scores are ordered by word sequence.
NBestList extract_nbest(const Lattice &lattice, int n, double alpha);

/// Sorts by combined score, best first, ties by word sequence.
void sort_nbest(NBestList &list);

enum class CombinationMode { kIterative, kSimultaneous };

std::string_view to_string(CombinationMode mode);
CombinationMode parse_combination_mode(std::string_view s);

struct NBestRescoreOptions {
  double alpha = 1.0;
  CombinationMode mode = CombinationMode::kIterative;
  /// Simultaneous mode only; defaults to I/(I+1) for I scorers, which makes
  /// both modes give the same scores.
  std::optional<double> beta;
  /// Cap on carried-over utterances (tightened by each scorer's own).
  std::optional<int> window;
};

/// Rescores the lists of one session with every scorer of `schedule`.
///
/// Each hypothesis gets one full-sequence score per scorer. Iterative mode
/// folds them in with beta(i) = 1/(1+i); simultaneous mode averages
/// (1-beta) * lm + beta * score over scorers. A step with a carry-over mode
/// scores hypotheses after the 1-best words of the preceding utterances (in
/// its reading direction), where that 1-best is picked by the step's own
/// scorer at beta = 0.5.
std::vector<NBestList> rescore_nbest_session(const std::vector<NBestList> &lists,
                                             const IterationSchedule &schedule,
                                             const NBestRescoreOptions &options);

/// One line per hypothesis: `utt rank acoustic lm combined word...`, ranks
/// from 1, scores with six decimals.
std::string write_nbest(const std::vector<NBestList> &lists);

/// Inverse of write_nbest(); lists appear in order of first mention.
/// Throws ParseError on malformed lines.
std::vector<NBestList> parse_nbest(std::string_view text);

}  // namespace latrescore

#endif  // LATRESCORE_NBEST_H_
