// src/external_scorer.cc
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

#include "latrescore/external_scorer.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <csignal>
#include <cstring>

#include "latrescore/error.h"

namespace latrescore {

FdChannel::FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

FdChannel::~FdChannel() { close_fds(); }

void FdChannel::close_fds() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  read_fd_ = write_fd_ = -1;
}

void FdChannel::write_line(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(write_fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

std::string FdChannel::read_line() {
  for (;;) {
    if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      return line;
    }
    char chunk[4096];
    ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) throw TransportError("connection closed");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ProcessChannel::ProcessChannel(int read_fd, int write_fd, pid_t pid)
    : FdChannel(read_fd, write_fd), pid_(pid) {}

ProcessChannel::~ProcessChannel() {
  close_fds();  // the child sees EOF on stdin
  if (pid_ > 0) {
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
}

std::unique_ptr<ProcessChannel> ProcessChannel::spawn(const std::string &command) {
  std::signal(SIGPIPE, SIG_IGN);
  int to_child[2], from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) throw TransportError("pipe failed");
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError("pipe failed");
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw TransportError("fork failed");
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::unique_ptr<ProcessChannel>(
      new ProcessChannel(from_child[0], to_child[1], pid));
}

TcpChannel::TcpChannel(int fd) : FdChannel(fd, fd) {}

std::unique_ptr<TcpChannel> TcpChannel::connect(const std::string &host, int port) {
  std::signal(SIGPIPE, SIG_IGN);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *found = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0)
    throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  int fd = -1;
  for (addrinfo *ai = found; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) throw TransportError("cannot connect to " + host + ":" + service);
  return std::unique_ptr<TcpChannel>(new TcpChannel(fd));
}

namespace {

std::vector<std::string> split_spaces(const std::string &line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t j = line.find(' ', i);
    if (j == std::string::npos) j = line.size();
    out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::uint64_t parse_id(const std::string &s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw TransportError("bad state id '" + s + "'");
  return v;
}

double parse_logprob(const std::string &s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
    throw TransportError("bad log-prob '" + s + "'");
  return v;
}

}  // namespace

ExternalScorer::ExternalScorer(std::unique_ptr<LineChannel> channel, ContextKind context)
    : channel_(std::move(channel)), context_(context) {
  if (!channel_) throw TransportError("null channel");
  auto reply = request("HELLO v1");
  if (reply.size() != 3) throw TransportError("bad HELLO reply");
  name_ = reply[1];
  if (reply[2] == "forward")
    direction_ = Direction::kForward;
  else if (reply[2] == "backward")
    direction_ = Direction::kBackward;
  else
    throw TransportError("bad direction in HELLO reply: " + reply[2]);
}

std::vector<std::string> ExternalScorer::request(const std::string &line) const {
  channel_->write_line(line);
  std::string reply = channel_->read_line();
  if (reply.rfind("ERR", 0) == 0 && (reply.size() == 3 || reply[3] == ' '))
    throw TransportError("server error: " + (reply.size() > 4 ? reply.substr(4) : ""));
  auto fields = split_spaces(reply);
  if (fields.empty() || fields[0] != "OK")
    throw TransportError("malformed reply to '" + line + "': '" + reply + "'");
  return fields;
}

ScorerState ExternalScorer::init_state() const {
  std::lock_guard lock(mutex_);
  auto reply = request("RESET");
  if (reply.size() != 2) throw TransportError("bad RESET reply");
  ScorerState state{parse_id(reply[1]), {}};
  live_.insert(state.key);
  return state;
}

ScoredStep ExternalScorer::advance(const ScorerState &state, std::string_view word) const {
  if (word.empty() || word.find_first_of(" \t\r\n") != std::string_view::npos)
    throw TransportError("word contains whitespace");
  std::string memo_key = std::to_string(state.key);
  memo_key.push_back(' ');
  memo_key.append(word);
  std::lock_guard lock(mutex_);
  if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;
  auto reply = request("SCORE " + memo_key);
  if (reply.size() != 3) throw TransportError("bad SCORE reply");
  ScoredStep step{{parse_id(reply[1]), {}}, parse_logprob(reply[2])};
  live_.insert(step.state.key);
  memo_.emplace(std::move(memo_key), step);
  return step;
}

void ExternalScorer::release(const ScorerState &state) const {
  std::lock_guard lock(mutex_);
  auto reply = request("RELEASE " + std::to_string(state.key));
  if (reply.size() != 1) throw TransportError("bad RELEASE reply");
  live_.erase(state.key);
  const std::string prefix = std::to_string(state.key) + " ";
  std::erase_if(memo_, [&](const auto &kv) {
    return kv.first.rfind(prefix, 0) == 0 || kv.second.state.key == state.key;
  });
}

void ExternalScorer::end_utterance() const {
  std::lock_guard lock(mutex_);
  for (std::uint64_t id : live_) {
    auto reply = request("RELEASE " + std::to_string(id));
    if (reply.size() != 1) throw TransportError("bad RELEASE reply");
  }
  live_.clear();
  memo_.clear();
}

std::size_t ExternalScorer::live_states() const {
  std::lock_guard lock(mutex_);
  return live_.size();
}

}  // namespace latrescore
