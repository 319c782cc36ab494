// include/latrescore/lattice_io.h
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

#ifndef LATRESCORE_LATTICE_IO_H_
#define LATRESCORE_LATTICE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "latrescore/lattice.h"
#include "latrescore/ngram.h"

namespace latrescore {

// SLF subset. One record per line, fields are key=value pairs:
//
//   VERSION=1.0
//   UTTERANCE=<id>
//   N=<node count> L=<arc count>
//   I=<node id> [t=<time>]
//   J=<arc id> S=<from id> E=<to id> W=<word> a=<acoustic> l=<lm>
//
// Scores are natural logs. Unknown keys are skipped with a warning; blank
// lines and lines starting with '#' are ignored.

/// Parses SLF text into a validated lattice. Several start/final nodes are
/// joined by epsilon arcs to a new super node. Throws ParseError (with a line
/// number) on malformed input or a count mismatch, Error if the result is
/// not a valid lattice.
Lattice parse_slf(std::string_view text);

/// Canonical SLF: nodes then arcs in ascending id order, scores and times
/// with 6 fractional digits.
std::string write_slf(const Lattice &lattice);

/// Parses an ARPA back-off model. log10 values on disk become natural logs.
NgramTable parse_arpa(std::string_view text);

/// Writes `table` in ARPA format: log10 values with 6 fractional digits,
/// n-grams in table order, back-off column only where one was read.
std::string write_arpa(const NgramTable &table);

/// The lattices of one long recording, in utterance order.
struct LatticeSession {
  std::string session_id;
  std::vector<Lattice> lattices;
  std::vector<WordSeq> references;  // may hold empty entries
};

/// Reads a JSON-Lines manifest, one `{"id", "lattice", "ref"}` object per
/// line. Lattice paths are relative to the manifest's directory. The
/// session id is the manifest file stem. Errors name the 1-based entry.
LatticeSession load_session(const std::filesystem::path &manifest);

std::string read_file(const std::filesystem::path &path);
/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

WordSeq split_words(std::string_view text);
std::string join_words(const WordSeq &words);

}  // namespace latrescore

#endif  // LATRESCORE_LATTICE_IO_H_
