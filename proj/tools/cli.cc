// tools/cli.cc
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

#include "cli.h"

#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "latrescore/ensemble.h"
#include "latrescore/error.h"
#include "latrescore/eval.h"
#include "latrescore/external_scorer.h"
#include "latrescore/harness.h"
#include "latrescore/lattice_io.h"
#include "latrescore/logging.h"
#include "latrescore/mock_scorer.h"
#include "latrescore/nbest.h"
#include "latrescore/ngram.h"
#include "latrescore/parallel.h"

namespace latrescore::cli {

namespace {

std::vector<std::string> split_on(const std::string &s, char sep, std::size_t max_parts) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (parts.size() + 1 < max_parts) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) break;
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  parts.push_back(s.substr(start));
  return parts;
}

// Short form used by --lm:
//   arpa:DIR:PATH  mock:DIR:SEED  cmd:SHELL-COMMAND  tcp:HOST:PORT
ScorerDecl parse_scorer_spec(const std::string &spec, std::size_t index) {
  const auto parts = split_on(spec, ':', 3);
  ScorerDecl d;
  d.name = "lm" + std::to_string(index + 1);
  const std::string &kind = parts.front();
  if ((kind == "arpa" || kind == "mock") && parts.size() == 3) {
    d.kind = kind;
    d.direction = parts[1];
    if (kind == "arpa") {
      d.path = parts[2];
      d.name = std::filesystem::path(d.path).stem().string();
    } else {
      d.seed = std::stoull(parts[2]);
    }
  } else if (kind == "cmd" && spec.size() > 4) {
    d.kind = "external";
    d.command = spec.substr(4);
  } else if (kind == "tcp" && parts.size() == 3) {
    d.kind = "external";
    d.host = parts[1];
    d.port = std::stoi(parts[2]);
  } else {
    throw Error("bad scorer spec '" + spec + "'");
  }
  return d;
}

// Lines of `utt word word ...`.
std::vector<std::pair<std::string, WordSeq>> read_transcripts(const std::string &path) {
  std::vector<std::pair<std::string, WordSeq>> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    WordSeq fields = split_words(line);
    if (fields.empty()) continue;
    std::string id = fields.front();
    fields.erase(fields.begin());
    out.emplace_back(std::move(id), std::move(fields));
  }
  return out;
}

std::string format_transcripts(const std::vector<std::string> &ids,
                               const std::vector<WordSeq> &words) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i];
    if (!words[i].empty()) out += " " + join_words(words[i]);
    out += "\n";
  }
  return out;
}

WordSeq session_vocab(const std::vector<LatticeSession> &sessions) {
  std::set<std::string> words;
  for (const LatticeSession &s : sessions)
    for (const Lattice &l : s.lattices)
      for (const Arc &a : l.arcs)
        if (!is_epsilon(a.word)) words.insert(a.word);
  return WordSeq(words.begin(), words.end());
}

std::string format_wer(const WerCounts &c) {
  std::ostringstream s;
  s << "WER " << format_percent(c.wer()) << " [S=" << c.substitutions << " D=" << c.deletions
    << " I=" << c.insertions << " N=" << c.reference_length << "]";
  return s.str();
}

struct Scorers {
  std::vector<std::unique_ptr<SequenceScorer>> owned;
  std::vector<const SequenceScorer *> schedule;  // in schedule order
};

Scorers load_scorers(const RunConfig &config, const WordSeq &vocab) {
  config.check();
  Scorers s;
  std::map<std::string, const SequenceScorer *> by_name;
  for (const ScorerDecl &d : config.scorers) {
    s.owned.push_back(make_scorer(d, vocab));
    by_name[d.name] = s.owned.back().get();
  }
  if (config.schedule.empty()) {
    for (const auto &p : s.owned) s.schedule.push_back(p.get());
  } else {
    for (const std::string &name : config.schedule) s.schedule.push_back(by_name.at(name));
  }
  return s;
}

RescoreParams search_params(const RunConfig &config) {
  RescoreParams p;
  p.alpha = *config.alpha;
  p.ngram_approx = config.ngram < 0 ? kUnbounded : config.ngram;
  p.beam_k = config.beam < 0 ? kUnbounded : config.beam;
  if (config.beta) p.beta = *config.beta;
  p.check();
  return p;
}

std::string setting_label(const RunConfig &config) {
  if (config.ngram == 5 && config.beam == 10) return "rich";
  if (config.ngram == 0 && config.beam == 1) return "fast";
  return "n=" + std::to_string(config.ngram) + ",k=" + std::to_string(config.beam);
}

void write_outputs(const std::filesystem::path &dir, const std::vector<RescoredLattice> &final,
                   double alpha, const std::vector<ReportRow> &rows,
                   const std::vector<std::string> &notes) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> ids;
  for (const RescoredLattice &r : final) {
    ids.push_back(r.lattice.utterance_id);
    write_file_atomic(dir / (r.lattice.utterance_id + ".slf"), write_slf(r.lattice));
  }
  write_file_atomic(dir / "best.txt", format_transcripts(ids, best_words(final, alpha)));
  std::ostringstream tsv;
  write_report_tsv(tsv, rows, notes);
  write_file_atomic(dir / "report.tsv", tsv.str());
}

// Settings shared by the model-driven subcommands.
struct ModelFlags {
  std::string config_path;
  std::vector<std::string> lms;
  std::optional<double> alpha, beta;
  std::optional<int> ngram, beam, window;
  std::optional<std::string> setting, context, session, out;

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    for (std::size_t i = 0; i < lms.size(); ++i) {
      ScorerDecl d = parse_scorer_spec(lms[i], c.scorers.size());
      c.scorers.push_back(d);
      if (!c.schedule.empty()) c.schedule.push_back(d.name);
    }
    if (setting) {
      c.ngram = *setting == "fast" ? 0 : *setting == "exhaustive" ? -1 : 5;
      c.beam = *setting == "fast" ? 1 : *setting == "exhaustive" ? -1 : 10;
    }
    if (alpha) c.alpha = alpha;
    if (beta) c.beta = beta;
    if (ngram) c.ngram = *ngram;
    if (beam) c.beam = *beam;
    if (context) c.context = *context;
    if (window) c.window = *window;
    if (session) c.session = *session;
    if (out) c.out = *out;
    if (!c.alpha) throw Error("alpha is required (--alpha or \"alpha\" in the config)");
    c.check();
    return c;
  }
};

void add_model_flags(CLI::App *sub, ModelFlags &f, bool io) {
  sub->add_option("--config", f.config_path, "JSON run configuration");
  sub->add_option("--lm", f.lms, "Extra scorer: arpa:DIR:PATH, mock:DIR:SEED, cmd:..., tcp:H:P");
  sub->add_option("--alpha", f.alpha, "Language score scale (required here or in the config)");
  sub->add_option("--beta", f.beta, "Interpolation weight for simultaneous combination");
  sub->add_option("--setting", f.setting, "Search setting preset")
      ->check(CLI::IsMember({"rich", "fast", "exhaustive"}));
  sub->add_option("--ngram", f.ngram, "n-gram approximation (-1: unbounded)");
  sub->add_option("--beam", f.beam, "Hypotheses kept per node (-1: unbounded)");
  sub->add_option("--context", f.context, "Carry 1-best context across utterances")
      ->check(CLI::IsMember({"none", "carry"}));
  sub->add_option("--window", f.window, "Maximum carried utterances J")
      ->check(CLI::PositiveNumber);
  if (io) {
    sub->add_option("--session", f.session, "Session manifest (JSON lines)");
    sub->add_option("--out", f.out, "Output location");
  }
}

const std::string &need(const std::string &value, const char *what) {
  if (value.empty()) throw Error(std::string(what) + " is required");
  return value;
}

void cmd_rescore(const RunConfig &c, bool simultaneous, std::ostream &out) {
  const LatticeSession session = load_session(need(c.session, "session"));
  Scorers scorers = load_scorers(c, session_vocab({session}));
  const RescoreParams params = search_params(c);
  const bool carry = c.context == "carry";
  const IterationSchedule schedule = IterationSchedule::of(scorers.schedule, carry);
  const ContextPolicy policy{ContextMode::kNone, c.window};

  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  std::vector<RescoredLattice> final;
  if (!simultaneous) {
    if (c.beta) spdlog::warn("beta is ignored by iterative combination");
    IterationTrace trace = run_iterative(session, schedule, params, policy);
    for (const IterationResult &r : trace) {
      rows.push_back({r.iteration, "iterative", setting_label(c), carry ? "yes" : "no",
                      std::nullopt, r.wer ? std::optional(r.wer->wer()) : std::nullopt});
      out << "iteration " << r.iteration << " " << r.scorer;
      if (r.wer) out << " " << format_wer(*r.wer);
      out << "\n";
    }
    final = std::move(trace.back().lattices);
  } else {
    final = combine_simultaneous(session, schedule, params, policy);
    auto w = session_wer(session, best_words(final, params.alpha));
    rows.push_back({static_cast<int>(schedule.steps.size()), "simultaneous", setting_label(c),
                    carry ? "yes" : "no", std::nullopt,
                    w ? std::optional(w->wer()) : std::nullopt});
    notes.push_back("beta = " + std::to_string(params.beta));
    out << "combined " << schedule.steps.size() << " scorers";
    if (w) out << " " << format_wer(*w);
    out << "\n";
  }
  write_outputs(need(c.out, "out"), final, params.alpha, rows, notes);
}

struct Plain {
  std::string session, out, nbest_file, ref, hyp, text, method = "iterative";
  std::vector<std::string> dev, eval;
  double alpha = 0.0;
  int n = 100;
  bool eos = false;
  std::optional<int> synthetic;
  std::optional<std::uint64_t> world;
  std::uint64_t seed = 1;
  int nodes = 10, branching = 3, vocab_size = 20, ensemble = 8, utterances = 20, worlds = 20,
      iterations = 8;
};

void cmd_nbest_extract(const Plain &o, std::ostream &out) {
  const LatticeSession session = load_session(o.session);
  if (!(o.alpha > 0.0)) throw Error("alpha must be > 0");
  std::vector<NBestList> lists = par::extract_nbest(session.lattices, o.n, o.alpha);
  write_file_atomic(o.out, write_nbest(lists));
  std::size_t total = 0;
  for (const NBestList &l : lists) total += l.entries.size();
  out << lists.size() << " lists, " << total << " hypotheses\n";
}

void cmd_nbest_rescore(const RunConfig &c, const Plain &o, std::ostream &out) {
  const std::vector<NBestList> lists = parse_nbest(read_file(o.nbest_file));
  std::set<std::string> words;
  for (const NBestList &l : lists)
    for (const NBestEntry &e : l.entries) words.insert(e.words.begin(), e.words.end());
  Scorers scorers = load_scorers(c, WordSeq(words.begin(), words.end()));
  NBestRescoreOptions options;
  options.alpha = *c.alpha;
  options.mode = parse_combination_mode(o.method);
  options.beta = c.beta;
  options.window = c.window;
  const auto rescored = rescore_nbest_session(
      lists, IterationSchedule::of(scorers.schedule, c.context == "carry"), options);
  write_file_atomic(need(c.out, "out"), write_nbest(rescored));
  out << rescored.size() << " lists rescored (" << to_string(options.mode) << ")\n";
}

void cmd_wer(const Plain &o, std::ostream &out) {
  const auto refs = read_transcripts(o.ref);
  std::map<std::string, WordSeq> hyps;
  for (auto &[id, words] : read_transcripts(o.hyp)) hyps[id] = std::move(words);
  WerCounts total;
  for (const auto &[id, ref] : refs) {
    auto it = hyps.find(id);
    total += wer(ref, it == hyps.end() ? WordSeq{} : it->second);
  }
  out << format_wer(total) << "\n";
}

void cmd_oracle_wer(const Plain &o, std::ostream &out) {
  const LatticeSession session = load_session(o.session);
  WerCounts lattice_total;
  for (std::size_t j = 0; j < session.lattices.size(); ++j) {
    if (session.references[j].empty())
      throw Error("utterance '" + session.lattices[j].utterance_id + "' has no reference");
    lattice_total += lattice_oracle_wer(session.lattices[j], session.references[j]);
  }
  out << "lattice oracle " << format_wer(lattice_total) << "\n";
  if (o.nbest_file.empty()) return;
  const std::vector<NBestList> lists = parse_nbest(read_file(o.nbest_file));
  std::map<std::string, const NBestList *> by_id;
  for (const NBestList &l : lists) by_id[l.utterance_id] = &l;
  WerCounts nbest_total;
  for (std::size_t j = 0; j < session.lattices.size(); ++j) {
    std::vector<WordSeq> candidates;
    if (auto it = by_id.find(session.lattices[j].utterance_id); it != by_id.end())
      for (const NBestEntry &e : it->second->entries) candidates.push_back(e.words);
    if (candidates.empty()) candidates.emplace_back();
    nbest_total += oracle_wer(candidates, session.references[j]);
  }
  out << "n-best oracle " << format_wer(nbest_total) << "\n";
}

void cmd_perplexity(const RunConfig &c, const Plain &o, std::ostream &out) {
  std::vector<WordSeq> corpus;
  std::istringstream in(read_file(o.text));
  std::string line;
  std::set<std::string> words;
  while (std::getline(in, line)) {
    WordSeq w = split_words(line);
    if (w.empty()) continue;
    words.insert(w.begin(), w.end());
    corpus.push_back(std::move(w));
  }
  Scorers scorers = load_scorers(c, WordSeq(words.begin(), words.end()));
  out << std::setprecision(12);
  for (const SequenceScorer *s : scorers.schedule)
    out << s->name() << "\tperplexity\t" << perplexity(*s, corpus, o.eos) << "\n";
}

void cmd_gen_lattices(const Plain &o, std::ostream &out) {
  const std::filesystem::path dir = o.out;
  if (o.world) {
    WorldConfig config;
    config.ensemble_size = o.ensemble;
    config.vocab_size = o.vocab_size;
    config.utterances_per_session = o.utterances;
    const SyntheticWorld world = build_world(*o.world, config);
    write_world(world, dir);
    out << "world " << *o.world << ": " << world.sessions.size() << " sessions, "
        << world.ensemble.size() << " models\n";
    return;
  }
  const int count = o.synthetic.value_or(10);
  WordSeq vocab;
  for (int w = 0; w < o.vocab_size; ++w) vocab.push_back("w" + std::to_string(w));
  std::string manifest;
  for (int i = 0; i < count; ++i) {
    const Lattice lat =
        synth_lattice(o.seed + static_cast<std::uint64_t>(i), o.nodes, o.branching, vocab);
    const std::string rel = "lat/" + lat.utterance_id + ".slf";
    std::filesystem::create_directories(dir / "lat");
    write_file_atomic(dir / rel, write_slf(lat));
    manifest += nlohmann::json{{"id", lat.utterance_id}, {"lattice", rel}}.dump() + "\n";
  }
  write_file_atomic(dir / "session.jsonl", manifest);
  out << count << " lattices\n";
}

void cmd_compare(const RunConfig &c, const Plain &o, std::ostream &out) {
  std::vector<LatticeSession> dev, eval;
  for (const std::string &m : o.dev) dev.push_back(load_session(m));
  for (const std::string &m : o.eval) eval.push_back(load_session(m));
  if (eval.empty() && !c.session.empty()) eval.push_back(load_session(c.session));
  if (eval.empty()) throw Error("compare needs --eval or a session");
  std::vector<LatticeSession> all = dev;
  all.insert(all.end(), eval.begin(), eval.end());
  Scorers scorers = load_scorers(c, session_vocab(all));
  const ComparisonReport report =
      compare_methods(dev, eval, scorers.schedule, *c.alpha, {ContextMode::kNone, c.window});
  std::ostringstream tsv;
  write_report_tsv(tsv, report.rows, report.notes);
  if (c.out.empty()) {
    out << tsv.str();
  } else {
    write_file_atomic(c.out, tsv.str());
  }
}

void cmd_fig3(const Plain &o, std::ostream &out) {
  std::vector<std::uint64_t> seeds;
  for (int w = 0; w < o.worlds; ++w) seeds.push_back(o.seed + static_cast<std::uint64_t>(w));
  WorldConfig config;
  config.ensemble_size = o.ensemble;
  config.vocab_size = o.vocab_size;
  config.utterances_per_session = o.utterances;
  const auto curves = average_curves(par::replay_worlds(seeds, config, o.iterations, o.n));
  std::ostringstream tsv;
  write_curves_tsv(tsv, curves);
  if (o.out.empty()) {
    out << tsv.str();
  } else {
    write_file_atomic(o.out, tsv.str());
  }
}

template <typename T>
std::optional<T> opt_field(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

void RunConfig::check() const {
  std::set<std::string> names;
  for (const ScorerDecl &d : scorers) {
    if (d.name.empty()) throw Error("scorer without a name");
    if (!names.insert(d.name).second) throw Error("duplicate scorer name '" + d.name + "'");
  }
  for (const std::string &s : schedule)
    if (!names.count(s)) throw Error("schedule names unknown scorer '" + s + "'");
  if (scorers.empty()) throw Error("no scorers configured");
  if (alpha && !(*alpha > 0.0)) throw Error("alpha must be > 0");
  if (beta && !(*beta > 0.0 && *beta < 1.0)) throw Error("beta must lie in (0, 1)");
  if (ngram < -1) throw Error("ngram must be >= 0 (or -1 for unbounded)");
  if (beam == 0 || beam < -1) throw Error("beam must be >= 1 (or -1 for unbounded)");
  if (context != "none" && context != "carry") throw Error("context must be none or carry");
  if (window < 1) throw Error("window J must be >= 1");
}

RunConfig load_run_config(const std::filesystem::path &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception &e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string &p) {
    if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (base / p).string();
  };
  RunConfig c;
  try {
    for (const auto &s : j.value("scorers", nlohmann::json::array())) {
      ScorerDecl d;
      d.name = s.at("name").get<std::string>();
      d.kind = s.at("kind").get<std::string>();
      d.direction = s.value("direction", "forward");
      d.path = resolve(s.value("path", ""));
      d.seed = s.value("seed", std::uint64_t{0});
      d.command = s.value("command", "");
      d.host = s.value("host", "");
      d.port = s.value("port", 0);
      d.window = opt_field<int>(s, "window");
      c.scorers.push_back(std::move(d));
    }
    c.schedule = j.value("schedule", std::vector<std::string>{});
    c.alpha = opt_field<double>(j, "alpha");
    c.beta = opt_field<double>(j, "beta");
    c.ngram = j.value("ngram", c.ngram);
    c.beam = j.value("beam", c.beam);
    c.context = j.value("context", c.context);
    c.window = j.value("window", c.window);
    c.session = resolve(j.value("session", ""));
    c.out = resolve(j.value("out", ""));
  } catch (const nlohmann::json::exception &e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  return c;
}

std::unique_ptr<SequenceScorer> make_scorer(const ScorerDecl &d, const WordSeq &vocab) {
  const Direction dir = parse_direction(d.direction);
  const ContextKind context = d.window ? ContextKind::bounded(*d.window) : ContextKind::unbounded();
  if (d.kind == "arpa") {
    auto table = std::make_shared<const NgramTable>(parse_arpa(read_file(d.path)));
    return std::make_unique<NgramScorer>(table, d.name, dir, context);
  }
  if (d.kind == "mock") {
    MockScorer::Options options;
    options.name = d.name;
    options.direction = dir;
    options.context = context;
    return std::make_unique<MockScorer>(d.seed, vocab, options);
  }
  if (d.kind == "external") {
    std::unique_ptr<LineChannel> channel;
    if (!d.command.empty())
      channel = ProcessChannel::spawn(d.command);
    else
      channel = TcpChannel::connect(d.host, d.port);
    return std::make_unique<ExternalScorer>(std::move(channel), context);
  }
  throw Error("scorer '" + d.name + "': unknown kind '" + d.kind + "'");
}

std::unique_ptr<SequenceScorer> make_scorer(const std::string &spec, const WordSeq &vocab) {
  return make_scorer(parse_scorer_spec(spec, 0), vocab);
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  init_logging();
  CLI::App app{"Lattice and N-best rescoring with language model ensembles", "rescorer"};
  app.require_subcommand(1);

  ModelFlags m;
  Plain o;

  CLI::App *rescore = app.add_subcommand("rescore", "Iterative rescoring of a lattice session");
  add_model_flags(rescore, m, true);
  CLI::App *combine = app.add_subcommand("combine", "Simultaneous rescoring and combination");
  add_model_flags(combine, m, true);

  CLI::App *nbx = app.add_subcommand("nbest-extract", "Write N-best lists of a session");
  nbx->add_option("--session", o.session, "Session manifest")->required();
  nbx->add_option("-n,--n", o.n, "List size")->check(CLI::PositiveNumber);
  nbx->add_option("--alpha", o.alpha, "Language score scale")->required();
  nbx->add_option("--out", o.out, "Output N-best file")->required();

  CLI::App *nbr = app.add_subcommand("nbest-rescore", "Rescore N-best lists");
  add_model_flags(nbr, m, false);
  nbr->add_option("--nbest", o.nbest_file, "N-best file")->required();
  nbr->add_option("--method", o.method, "Combination method")
      ->check(CLI::IsMember({"iterative", "simultaneous"}));
  nbr->add_option("--out", m.out, "Output N-best file");

  CLI::App *werc = app.add_subcommand("wer", "Word error rate of transcripts");
  werc->add_option("--ref", o.ref, "Reference transcripts")->required();
  werc->add_option("--hyp", o.hyp, "Hypothesis transcripts")->required();

  CLI::App *oracle = app.add_subcommand("oracle-wer", "Oracle WER of lattices and N-best lists");
  oracle->add_option("--session", o.session, "Session manifest")->required();
  oracle->add_option("--nbest", o.nbest_file, "N-best file");

  CLI::App *ppl = app.add_subcommand("perplexity", "Perplexity of a text under each scorer");
  ppl->add_option("--config", m.config_path, "JSON run configuration");
  ppl->add_option("--lm", m.lms, "Scorer spec");
  ppl->add_option("--text", o.text, "One sentence per line")->required();
  ppl->add_flag("--eos", o.eos, "Score sentence ends");

  CLI::App *gen = app.add_subcommand("gen-lattices", "Write synthetic lattices or a world");
  gen->add_option("--out", o.out, "Output directory")->required();
  auto *synthetic = gen->add_option("--synthetic", o.synthetic, "Number of random lattices");
  gen->add_option("--world", o.world, "Seed of a synthetic world")->excludes(synthetic);
  gen->add_option("--seed", o.seed, "First seed for random lattices");
  gen->add_option("--nodes", o.nodes, "Nodes per random lattice");
  gen->add_option("--branching", o.branching, "Out-arcs per node");
  gen->add_option("--vocab-size", o.vocab_size, "Vocabulary size");
  gen->add_option("--ensemble", o.ensemble, "Models in a world");
  gen->add_option("--utterances", o.utterances, "Utterances per world session");

  CLI::App *cmp = app.add_subcommand("compare", "Iterative vs simultaneous, rich vs fast");
  add_model_flags(cmp, m, true);
  cmp->add_option("--dev", o.dev, "Development session manifests");
  cmp->add_option("--eval", o.eval, "Evaluation session manifests");

  CLI::App *fig = app.add_subcommand("fig3", "WER-vs-iteration curves on synthetic worlds");
  fig->add_option("--seed", o.seed, "First world seed");
  fig->add_option("--worlds", o.worlds, "Number of worlds")->check(CLI::PositiveNumber);
  fig->add_option("--iterations", o.iterations, "Iterations (at most the ensemble size)");
  fig->add_option("--ensemble", o.ensemble, "Models per world");
  fig->add_option("--vocab-size", o.vocab_size, "Vocabulary size");
  fig->add_option("--utterances", o.utterances, "Utterances per session");
  fig->add_option("-n,--n", o.n, "N-best size")->check(CLI::PositiveNumber);
  fig->add_option("--out", o.out, "Curve TSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*rescore) cmd_rescore(m.resolve(), false, out);
    else if (*combine) cmd_rescore(m.resolve(), true, out);
    else if (*nbx) cmd_nbest_extract(o, out);
    else if (*nbr) cmd_nbest_rescore(m.resolve(), o, out);
    else if (*werc) cmd_wer(o, out);
    else if (*oracle) cmd_oracle_wer(o, out);
    else if (*ppl) {
      RunConfig c = m.config_path.empty() ? RunConfig{} : load_run_config(m.config_path);
      for (const std::string &spec : m.lms)
        c.scorers.push_back(parse_scorer_spec(spec, c.scorers.size()));
      c.check();
      cmd_perplexity(c, o, out);
    }
    else if (*gen) cmd_gen_lattices(o, out);
    else if (*cmp) cmd_compare(m.resolve(), o, out);
    else if (*fig) cmd_fig3(o, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace latrescore::cli
