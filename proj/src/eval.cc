// src/eval.cc
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

#include "latrescore/eval.h"

#include <algorithm>
#include <charconv>
#include <optional>

#include "latrescore/error.h"

namespace latrescore {

double WerCounts::wer() const {
  return reference_length == 0 ? 0.0
                               : static_cast<double>(errors()) /
                                     static_cast<double>(reference_length);
}

WerCounts &WerCounts::operator+=(const WerCounts &other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  reference_length += other.reference_length;
  return *this;
}

WerCounts wer(const WordSeq &reference, const WordSeq &hypothesis) {
  if (reference.empty()) throw Error("wer: empty reference");
  const std::size_t r = reference.size(), h = hypothesis.size();
  std::vector<std::vector<long>> d(r + 1, std::vector<long>(h + 1, 0));
  for (std::size_t i = 0; i <= r; ++i) d[i][0] = static_cast<long>(i);
  for (std::size_t j = 0; j <= h; ++j) d[0][j] = static_cast<long>(j);
  for (std::size_t i = 1; i <= r; ++i)
    for (std::size_t j = 1; j <= h; ++j) {
      long sub = d[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }

  WerCounts counts;
  counts.reference_length = static_cast<long>(r);
  std::size_t i = r, j = h;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (d[i][j] == d[i - 1][j - 1] + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

WerCounts corpus_wer(std::span<const RefHypPair> pairs) {
  WerCounts total;
  for (const auto &[ref, hyp] : pairs) total += wer(ref, hyp);
  return total;
}

double relative_reduction(double baseline_wer, double new_wer) {
  if (!(baseline_wer > 0.0)) throw Error("relative_reduction: baseline must be > 0");
  return 100.0 * (baseline_wer - new_wer) / baseline_wer;
}

WerCounts oracle_wer(std::span<const WordSeq> candidates, const WordSeq &reference) {
  if (candidates.empty()) throw Error("oracle_wer: no candidates");
  WerCounts best = wer(reference, candidates.front());
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    WerCounts c = wer(reference, candidates[i]);
    if (c.errors() < best.errors()) best = c;
  }
  return best;
}

WerCounts lattice_oracle_wer(const Lattice &lattice, const WordSeq &reference) {
  if (reference.empty()) throw Error("wer: empty reference");
  const std::size_t r = reference.size();
  const LatticeIndex index(lattice);
  using Cell = std::optional<WerCounts>;
  std::vector<std::vector<Cell>> table(index.num_nodes(), std::vector<Cell>(r + 1));
  auto relax = [](Cell &cell, WerCounts c) {
    if (!cell || c.errors() < cell->errors()) cell = c;
  };
  const int begin = index.node_pos(lattice.begin);
  table[begin][0] = WerCounts{0, 0, 0, static_cast<long>(r)};
  for (NodeId v : topo_order(lattice)) {
    const int vp = index.node_pos(v);
    auto &row = table[vp];
    for (std::size_t i = 0; i < r; ++i)
      if (row[i]) {
        WerCounts c = *row[i];
        ++c.deletions;
        relax(row[i + 1], c);
      }
    for (int a : index.out_arcs(vp)) {
      const Arc &arc = lattice.arcs[a];
      auto &next = table[index.to_pos(a)];
      for (std::size_t i = 0; i <= r; ++i) {
        if (!row[i]) continue;
        if (is_epsilon(arc.word)) {
          relax(next[i], *row[i]);
          continue;
        }
        if (i < r) {
          WerCounts c = *row[i];
          if (arc.word != reference[i]) ++c.substitutions;
          relax(next[i + 1], c);
        }
        WerCounts c = *row[i];
        ++c.insertions;
        relax(next[i], c);
      }
    }
  }
  const Cell &result = table[index.node_pos(lattice.end)][r];
  if (!result) throw Error("lattice_oracle_wer: end node unreachable");
  return *result;
}

std::string format_percent(double fraction) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, 100.0 * fraction, std::chars_format::fixed, 1);
  return std::string(buf, ptr);
}

void write_report_tsv(std::ostream &out, std::span<const ReportRow> rows,
                      std::span<const std::string> notes) {
  for (const std::string &note : notes) out << "# " << note << "\n";
  out << "iteration\tmethod\tsearch_setting\tcontext\tdev_wer\teval_wer\n";
  for (const ReportRow &row : rows) {
    out << row.iteration << '\t' << row.method << '\t' << row.search_setting << '\t'
        << row.context << '\t' << (row.dev_wer ? format_percent(*row.dev_wer) : "-") << '\t'
        << (row.eval_wer ? format_percent(*row.eval_wer) : "-") << '\n';
  }
}

}  // namespace latrescore
