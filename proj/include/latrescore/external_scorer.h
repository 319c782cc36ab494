// include/latrescore/external_scorer.h
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

// Client side of the line protocol used to plug out-of-process language
// models into rescoring:
//
//   -> HELLO v1                  <- OK <scorer-name> <forward|backward>
//   -> RESET                     <- OK <state-id>
//   -> SCORE <state-id> <word>   <- OK <new-state-id> <logprob>
//   -> RELEASE <state-id>        <- OK
//   any failure                  <- ERR <message>
//
// Lines are UTF-8 terminated by '\n'. State ids are decimal integers owned by
// the server; log-probs are natural logs printed with %.9g.

#ifndef LATRESCORE_EXTERNAL_SCORER_H_
#define LATRESCORE_EXTERNAL_SCORER_H_

#include <sys/types.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latrescore/scoring.h"

namespace latrescore {

/// Bidirectional newline-delimited text stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// Sends `line` followed by '\n'.
  virtual void write_line(std::string_view line) = 0;
  /// Next line without its terminator. Throws TransportError at end of stream.
  virtual std::string read_line() = 0;
};

/// Shared buffering for file-descriptor backed channels.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd);
  ~FdChannel() override;
  FdChannel(const FdChannel &) = delete;
  FdChannel &operator=(const FdChannel &) = delete;

  void write_line(std::string_view line) override;
  std::string read_line() override;

 protected:
  void close_fds();

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

/// Runs `command` through /bin/sh and talks to its stdin/stdout.
class ProcessChannel : public FdChannel {
 public:
  static std::unique_ptr<ProcessChannel> spawn(const std::string &command);
  ~ProcessChannel() override;

 private:
  ProcessChannel(int read_fd, int write_fd, pid_t pid);
  pid_t pid_;
};

/// TCP client connection.
class TcpChannel : public FdChannel {
 public:
  static std::unique_ptr<TcpChannel> connect(const std::string &host, int port);

 private:
  explicit TcpChannel(int fd);
};

/// SequenceScorer that forwards every query to a protocol server.
///
/// Responses are memoised per (state id, word) so advance() stays a pure
/// function even though the server mints a fresh id per request. Requests
/// on one connection are serialised.
class ExternalScorer : public SequenceScorer {
 public:
  /// Performs the HELLO handshake; throws TransportError on a bad reply.
  explicit ExternalScorer(std::unique_ptr<LineChannel> channel,
                          ContextKind context = ContextKind::unbounded());

  const std::string &name() const override { return name_; }
  Direction direction() const override { return direction_; }
  ContextKind context_kind() const override { return context_; }
  ScorerState init_state() const override;
  ScoredStep advance(const ScorerState &state, std::string_view word) const override;
  /// Releases every state minted so far and clears the memo table.
  void end_utterance() const override;
  bool concurrent() const override { return false; }

  void release(const ScorerState &state) const;
  std::size_t live_states() const;

 private:
  std::vector<std::string> request(const std::string &line) const;

  std::unique_ptr<LineChannel> channel_;
  ContextKind context_;
  std::string name_;
  Direction direction_ = Direction::kForward;

  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, ScoredStep> memo_;
  mutable std::set<std::uint64_t> live_;
};

}  // namespace latrescore

#endif  // LATRESCORE_EXTERNAL_SCORER_H_
