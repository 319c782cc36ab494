// src/lattice_io.cc
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

#include "latrescore/lattice_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "latrescore/error.h"

namespace latrescore {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no, std::string_view what) {
  T value{};
  const char *first = s.data();
  const char *last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last)
    throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'", line_no);
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value))
      throw ParseError("non-finite " + std::string(what), line_no);
  }
  return value;
}

std::string fixed6(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    lines.push_back(text.substr(i, j - i));
    if (j == text.size()) break;
    i = j + 1;
  }
  return lines;
}

}  // namespace

Lattice parse_slf(std::string_view text) {
  Lattice lattice;
  std::optional<std::size_t> declared_nodes, declared_arcs;
  std::size_t header_line = 0;
  std::set<NodeId> node_ids;
  std::set<ArcId> arc_ids;

  const auto lines = split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    auto fields = split_fields(lines[k]);
    if (fields.empty() || fields.front().front() == '#') continue;

    std::vector<std::pair<std::string_view, std::string_view>> kv;
    for (std::string_view f : fields) {
      auto eq = f.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw ParseError("expected key=value, got '" + std::string(f) + "'", line_no);
      kv.emplace_back(f.substr(0, eq), f.substr(eq + 1));
    }
    auto warn_unknown = [&](std::string_view key) {
      spdlog::warn("SLF line {}: ignoring unknown field '{}'", line_no, key);
    };
    const std::string_view kind = kv.front().first;

    if (kind == "VERSION") {
      for (std::size_t i = 1; i < kv.size(); ++i) warn_unknown(kv[i].first);
    } else if (kind == "UTTERANCE") {
      lattice.utterance_id = std::string(kv.front().second);
      for (std::size_t i = 1; i < kv.size(); ++i) warn_unknown(kv[i].first);
    } else if (kind == "N" || kind == "L") {
      for (auto [key, value] : kv) {
        if (key == "N")
          declared_nodes = parse_number<std::size_t>(value, line_no, "node count");
        else if (key == "L")
          declared_arcs = parse_number<std::size_t>(value, line_no, "arc count");
        else
          warn_unknown(key);
      }
      header_line = line_no;
    } else if (kind == "I") {
      Node node;
      node.id = parse_number<NodeId>(kv.front().second, line_no, "node id");
      for (std::size_t i = 1; i < kv.size(); ++i) {
        if (kv[i].first == "t") {
          node.time = parse_number<double>(kv[i].second, line_no, "time");
          if (*node.time < 0.0) throw ParseError("negative time", line_no);
        } else {
          warn_unknown(kv[i].first);
        }
      }
      if (!node_ids.insert(node.id).second)
        throw ParseError("duplicate node id " + std::to_string(node.id), line_no);
      lattice.nodes.push_back(node);
    } else if (kind == "J") {
      Arc arc;
      arc.id = parse_number<ArcId>(kv.front().second, line_no, "arc id");
      bool has_s = false, has_e = false, has_w = false;
      for (std::size_t i = 1; i < kv.size(); ++i) {
        auto [key, value] = kv[i];
        if (key == "S") {
          arc.from = parse_number<NodeId>(value, line_no, "start node");
          has_s = true;
        } else if (key == "E") {
          arc.to = parse_number<NodeId>(value, line_no, "end node");
          has_e = true;
        } else if (key == "W") {
          if (value.empty()) throw ParseError("empty word", line_no);
          arc.word = std::string(value);
          has_w = true;
        } else if (key == "a") {
          arc.acoustic = parse_number<double>(value, line_no, "acoustic score");
        } else if (key == "l") {
          arc.lm = parse_number<double>(value, line_no, "language score");
        } else {
          warn_unknown(key);
        }
      }
      if (!has_s || !has_e || !has_w) throw ParseError("arc needs S=, E= and W=", line_no);
      if (!arc_ids.insert(arc.id).second)
        throw ParseError("duplicate arc id " + std::to_string(arc.id), line_no);
      lattice.arcs.push_back(std::move(arc));
    } else {
      spdlog::warn("SLF line {}: ignoring record '{}'", line_no, kind);
    }
  }

  if (!declared_nodes || !declared_arcs) throw ParseError("missing N= / L= header", 0);
  if (*declared_nodes != lattice.nodes.size())
    throw ParseError("node count mismatch: N=" + std::to_string(*declared_nodes) + " but " +
                         std::to_string(lattice.nodes.size()) + " node lines",
                     header_line);
  if (*declared_arcs != lattice.arcs.size())
    throw ParseError("arc count mismatch: L=" + std::to_string(*declared_arcs) + " but " +
                         std::to_string(lattice.arcs.size()) + " arc lines",
                     header_line);

  std::sort(lattice.nodes.begin(), lattice.nodes.end(),
            [](const Node &a, const Node &b) { return a.id < b.id; });
  std::sort(lattice.arcs.begin(), lattice.arcs.end(),
            [](const Arc &a, const Arc &b) { return a.id < b.id; });
  lattice = normalize_endpoints(std::move(lattice));
  ValidationReport report = validate(lattice);
  if (!report.ok()) throw Error("invalid lattice: " + report.violations.front());
  return lattice;
}

std::string write_slf(const Lattice &lattice) {
  std::vector<const Node *> nodes;
  for (const Node &n : lattice.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](auto *a, auto *b) { return a->id < b->id; });
  std::vector<const Arc *> arcs;
  for (const Arc &a : lattice.arcs) arcs.push_back(&a);
  std::sort(arcs.begin(), arcs.end(), [](auto *a, auto *b) { return a->id < b->id; });

  std::string out;
  out += "VERSION=1.0\n";
  out += "UTTERANCE=" + lattice.utterance_id + "\n";
  out += "N=" + std::to_string(nodes.size()) + " L=" + std::to_string(arcs.size()) + "\n";
  for (const Node *n : nodes) {
    out += "I=" + std::to_string(n->id);
    if (n->time) out += " t=" + fixed6(*n->time);
    out += "\n";
  }
  for (const Arc *a : arcs) {
    out += "J=" + std::to_string(a->id) + " S=" + std::to_string(a->from) +
           " E=" + std::to_string(a->to) + " W=" + a->word + " a=" + fixed6(a->acoustic) +
           " l=" + fixed6(a->lm) + "\n";
  }
  return out;
}

NgramTable parse_arpa(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t k = 0;
  auto trimmed = [&](std::size_t i) {
    std::string_view s = lines[i];
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    return s;
  };
  while (k < lines.size() && trimmed(k) != "\\data\\") ++k;
  if (k == lines.size()) throw ParseError("missing \\data\\ section", 0);
  ++k;

  std::map<int, std::size_t> declared;
  for (; k < lines.size(); ++k) {
    std::string_view s = trimmed(k);
    if (s.empty()) continue;
    if (s.rfind("ngram ", 0) != 0) break;
    std::string_view rest = s.substr(6);
    auto eq = rest.find('=');
    if (eq == std::string_view::npos) throw ParseError("bad ngram count line", k + 1);
    int n = parse_number<int>(rest.substr(0, eq), k + 1, "order");
    declared[n] = parse_number<std::size_t>(rest.substr(eq + 1), k + 1, "n-gram count");
  }
  if (declared.empty()) throw ParseError("no ngram counts in \\data\\ section", k + 1);
  const int order = declared.rbegin()->first;
  for (int n = 1; n <= order; ++n)
    if (!declared.count(n)) throw ParseError("missing count for order " + std::to_string(n), 0);

  NgramTable table(order);
  std::map<int, std::size_t> seen;
  int section = 0;
  std::size_t section_line = 0;
  auto close_section = [&]() {
    if (section > 0 && seen[section] != declared[section])
      throw ParseError("section count mismatch for " + std::to_string(section) +
                           "-grams: declared " + std::to_string(declared[section]) +
                           ", found " + std::to_string(seen[section]),
                       section_line);
  };
  bool ended = false;
  std::vector<TokenId> ids;
  for (; k < lines.size(); ++k) {
    std::string_view s = trimmed(k);
    if (s.empty()) continue;
    if (s == "\\end\\") {
      close_section();
      ended = true;
      break;
    }
    if (s.front() == '\\') {
      close_section();
      if (s.size() < 9 || s.substr(s.size() - 7) != "-grams:")
        throw ParseError("bad section header '" + std::string(s) + "'", k + 1);
      section = parse_number<int>(s.substr(1, s.size() - 8), k + 1, "section order");
      if (section < 1 || section > order)
        throw ParseError("section order out of range", k + 1);
      section_line = k + 1;
      continue;
    }
    if (section == 0) throw ParseError("n-gram outside a section", k + 1);
    auto fields = split_fields(s);
    const std::size_t n = static_cast<std::size_t>(section);
    if (fields.size() != n + 1 && fields.size() != n + 2)
      throw ParseError("expected " + std::to_string(n) + " words", k + 1);
    NgramEntry entry;
    entry.logprob = parse_number<double>(fields[0], k + 1, "log-probability") *
                    std::numbers::ln10;
    if (fields.size() == n + 2)
      entry.backoff = parse_number<double>(fields[n + 1], k + 1, "back-off weight") *
                      std::numbers::ln10;
    ids.clear();
    for (std::size_t i = 1; i <= n; ++i) ids.push_back(table.intern(fields[i]));
    table.add(ids, entry);
    ++seen[section];
  }
  if (!ended) throw ParseError("missing \\end\\", 0);
  table.check_consistency();
  return table;
}

std::string write_arpa(const NgramTable &table) {
  std::string out = "\\data\\\n";
  for (int n = 1; n <= table.order(); ++n)
    out += "ngram " + std::to_string(n) + "=" + std::to_string(table.ngrams(n).size()) + "\n";
  for (int n = 1; n <= table.order(); ++n) {
    out += "\n\\" + std::to_string(n) + "-grams:\n";
    for (const auto &ngram : table.ngrams(n)) {
      const NgramEntry *e = table.find(ngram);
      out += fixed6(e->logprob / std::numbers::ln10);
      out += '\t';
      for (std::size_t i = 0; i < ngram.size(); ++i) {
        if (i) out += ' ';
        out += table.word(ngram[i]);
      }
      if (e->backoff) out += "\t" + fixed6(*e->backoff / std::numbers::ln10);
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

WordSeq split_words(std::string_view text) {
  WordSeq words;
  for (std::string_view f : split_fields(text)) words.emplace_back(f);
  return words;
}

std::string join_words(const WordSeq &words) {
  std::string out;
  for (const std::string &w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": file not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

LatticeSession load_session(const std::filesystem::path &manifest) {
  const std::string text = read_file(manifest);
  LatticeSession session;
  session.session_id = manifest.stem().string();
  const std::filesystem::path base = manifest.parent_path();
  std::size_t entry = 0;
  for (std::string_view line : split_lines(text)) {
    if (split_fields(line).empty()) continue;
    ++entry;
    const std::string tag = "entry " + std::to_string(entry) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw Error(tag + "bad JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("lattice") || !j["lattice"].is_string())
      throw Error(tag + "missing \"lattice\"");
    std::filesystem::path path = j["lattice"].get<std::string>();
    if (path.is_relative()) path = base / path;
    if (!std::filesystem::is_regular_file(path)) throw Error(tag + "file not found");
    Lattice lattice;
    try {
      lattice = parse_slf(read_file(path));
    } catch (const Error &e) {
      throw Error(tag + e.what());
    }
    if (j.contains("id") && j["id"].is_string()) lattice.utterance_id = j["id"].get<std::string>();
    session.references.push_back(
        j.contains("ref") && j["ref"].is_string() ? split_words(j["ref"].get<std::string>())
                                                  : WordSeq{});
    session.lattices.push_back(std::move(lattice));
  }
  if (session.lattices.empty()) throw Error("empty session");
  return session;
}

}  // namespace latrescore
