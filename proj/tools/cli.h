// tools/cli.h
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

#ifndef LATRESCORE_TOOLS_CLI_H_
#define LATRESCORE_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "latrescore/scoring.h"

namespace latrescore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Builds a scorer from a command-line spec:
///   arpa:forward:PATH, arpa:backward:PATH
///   mock:forward:SEED, mock:backward:SEED  (vocabulary from `vocab`)
///   cmd:SHELL-COMMAND                      (external scorer over pipes)
///   tcp:HOST:PORT                          (external scorer over TCP)
std::unique_ptr<SequenceScorer> make_scorer(const std::string &spec, const WordSeq &vocab);

/// One entry of the "scorers" list of a run configuration.
struct ScorerDecl {
  std::string name;
  std::string kind;  // arpa, mock or external
  std::string direction = "forward";
  std::string path;  // arpa
  std::uint64_t seed = 0;  // mock
  std::string command;     // external over pipes
  std::string host;        // external over TCP
  int port = 0;
  std::optional<int> window;  // bounded context of the scorer itself
};

/// JSON run configuration. Command-line flags override its fields.
///
///   {"scorers": [{"name": "F1", "kind": "arpa", "path": "lm/F1.arpa",
///                 "direction": "forward"}, ...],
///    "schedule": ["F1", "B1"],
///    "alpha": 1.0, "beta": 0.5, "ngram": 5, "beam": 10,
///    "context": "carry", "window": 1,
///    "session": "dev.jsonl", "out": "rescored"}
///
/// Relative paths are resolved against the directory of the file.
struct RunConfig {
  std::vector<ScorerDecl> scorers;
  std::vector<std::string> schedule;  // empty: every scorer in order
  std::optional<double> alpha;
  std::optional<double> beta;
  int ngram = 5;
  int beam = 10;
  std::string context = "none";
  int window = 1;
  std::string session;
  std::string out;

  /// Throws Error on unknown scorer names or out-of-range values.
  void check() const;
};

RunConfig load_run_config(const std::filesystem::path &path);

std::unique_ptr<SequenceScorer> make_scorer(const ScorerDecl &decl, const WordSeq &vocab);

/// Runs the `rescorer` command line. Normal output goes to `out`,
/// diagnostics to `err`; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace latrescore::cli

#endif  // LATRESCORE_TOOLS_CLI_H_
