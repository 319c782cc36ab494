// tests/nbest_oracle.h
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

#ifndef LATRESCORE_TESTS_NBEST_ORACLE_H_
#define LATRESCORE_TESTS_NBEST_ORACLE_H_

#include <algorithm>
#include <map>

#include "latrescore/nbest.h"

namespace latrescore::testing {

/// Top-n distinct word sequences by enumeration: each sequence scored by its
/// best path, ordered by score then words.
inline NBestList enumerated_nbest(const Lattice &lattice, int n, double alpha) {
  std::map<WordSeq, NBestEntry> best;
  for (const Path &p : enumerate_paths(lattice, 1'000'000)) {
    NBestEntry e{p.words, p.acoustic_total, p.lm_total, p.acoustic_total + alpha * p.lm_total};
    auto [it, inserted] = best.emplace(p.words, e);
    if (!inserted && e.combined > it->second.combined) it->second = e;
  }
  NBestList list;
  list.utterance_id = lattice.utterance_id;
  for (auto &[words, e] : best) list.entries.push_back(e);
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const NBestEntry &a, const NBestEntry &b) {
                     if (a.combined != b.combined) return a.combined > b.combined;
                     return a.words < b.words;
                   });
  if (list.entries.size() > static_cast<std::size_t>(n)) list.entries.resize(n);
  return list;
}

}  // namespace latrescore::testing

#endif  // LATRESCORE_TESTS_NBEST_ORACLE_H_
