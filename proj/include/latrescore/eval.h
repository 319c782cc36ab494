// include/latrescore/eval.h
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

#ifndef LATRESCORE_EVAL_H_
#define LATRESCORE_EVAL_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latrescore/lattice.h"

namespace latrescore {

struct WerCounts {
  long substitutions = 0;
  long deletions = 0;
  long insertions = 0;
  long reference_length = 0;

  long errors() const { return substitutions + deletions + insertions; }
  /// errors / reference_length; 0 for an empty tally.
  double wer() const;

  WerCounts &operator+=(const WerCounts &other);
  friend bool operator==(const WerCounts &, const WerCounts &) = default;
};

/// Unit-cost Levenshtein alignment. Among minimal alignments the traceback
/// prefers a substitution (or match) over an insertion/deletion pair.
/// Throws Error for an empty reference.
WerCounts wer(const WordSeq &reference, const WordSeq &hypothesis);

using RefHypPair = std::pair<WordSeq, WordSeq>;

/// Summed counts over all pairs.
WerCounts corpus_wer(std::span<const RefHypPair> pairs);

/// 100 * (baseline - current) / baseline. Throws Error if baseline <= 0.
double relative_reduction(double baseline_wer, double new_wer);

/// Counts of the best candidate; the first one wins ties. Throws Error on
/// an empty candidate list.
WerCounts oracle_wer(std::span<const WordSeq> candidates, const WordSeq &reference);

/// Oracle over every path of a lattice, by dynamic programming on
/// (node, reference position).
WerCounts lattice_oracle_wer(const Lattice &lattice, const WordSeq &reference);

/// `100 * value` with one decimal, e.g. 0.0683 -> "6.8".
std::string format_percent(double fraction);

/// One line of a results table: dev/eval WER for one configuration.
struct ReportRow {
  int iteration = 0;
  std::string method;
  std::string search_setting;
  std::string context;
  std::optional<double> dev_wer;   // fractions
  std::optional<double> eval_wer;
};

/// TSV with header `iteration method search_setting context dev_wer
/// eval_wer`; WERs as percentages with one decimal, "-" when absent. Lines
/// in `notes` are written first as `# ` comments.
void write_report_tsv(std::ostream &out, std::span<const ReportRow> rows,
                      std::span<const std::string> notes = {});

}  // namespace latrescore

#endif  // LATRESCORE_EVAL_H_
