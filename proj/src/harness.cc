// src/harness.cc
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

#include "latrescore/harness.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "latrescore/error.h"
#include "latrescore/nbest.h"

namespace latrescore {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  std::size_t below(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  }

  // Box-Muller, one value per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> softmax(std::vector<double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double &x : logits) sum += (x = std::exp(x - top));
  for (double &x : logits) x /= sum;
  return logits;
}

std::vector<double> stationary_of(const std::vector<std::vector<double>> &p) {
  const std::size_t v = p.size();
  std::vector<double> pi(v, 1.0 / static_cast<double>(v)), next(v);
  for (int it = 0; it < 100000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < v; ++a)
      for (std::size_t b = 0; b < v; ++b) next[b] += pi[a] * p[a][b];
    double diff = 0.0;
    for (std::size_t a = 0; a < v; ++a) diff = std::max(diff, std::abs(next[a] - pi[a]));
    pi.swap(next);
    if (diff < 1e-15) break;
  }
  return pi;
}

// Perturbs log-probabilities with N(0, sigma) noise and renormalises.
std::vector<double> perturbed_logprobs(const std::vector<double> &probs, double sigma, Rng &rng) {
  std::vector<double> logits;
  for (double p : probs) logits.push_back(std::log(p) + sigma * rng.normal());
  std::vector<double> q = softmax(std::move(logits));
  for (double &x : q) x = std::log(x);
  return q;
}

constexpr double kUnkLogprob = -13.815510557964274;  // ln(1e-6)

std::shared_ptr<const NgramTable> make_table(const WordSeq &vocab,
                                             const std::vector<double> &unigram,
                                             const std::vector<std::vector<double>> &bigram) {
  auto table = std::make_shared<NgramTable>(2);
  std::vector<TokenId> ids;
  for (const std::string &w : vocab) ids.push_back(table->intern(w));
  const TokenId unk = table->intern(kUnknown);
  table->add(std::span<const TokenId>(&unk, 1), {kUnkLogprob, std::nullopt});
  for (std::size_t a = 0; a < vocab.size(); ++a)
    table->add(std::span<const TokenId>(&ids[a], 1), {unigram[a], 0.0});
  for (std::size_t a = 0; a < vocab.size(); ++a)
    for (std::size_t b = 0; b < vocab.size(); ++b) {
      const TokenId key[2] = {ids[a], ids[b]};
      table->add(key, {bigram[a][b], std::nullopt});
    }
  table->check_consistency();
  return table;
}

Lattice make_lattice(const std::string &id, const std::vector<std::size_t> &truth,
                     const SyntheticWorld &world, Rng &rng) {
  const WorldConfig &c = world.config;
  const std::size_t v = world.vocab.size();
  Lattice lat;
  lat.utterance_id = id;
  for (std::size_t i = 0; i <= truth.size(); ++i)
    lat.nodes.push_back({static_cast<NodeId>(i), 0.1 * static_cast<double>(i)});
  lat.begin = 0;
  lat.end = static_cast<NodeId>(truth.size());

  for (std::size_t i = 0; i < truth.size(); ++i) {
    struct Choice {
      std::string word;
      double acoustic, lm;
    };
    std::vector<Choice> slot;
    slot.push_back({world.vocab[truth[i]], -c.acoustic_base + c.acoustic_noise * rng.normal(),
                    std::log(world.stationary[truth[i]])});
    std::vector<std::size_t> others;
    for (std::size_t w = 0; w < v; ++w)
      if (w != truth[i]) others.push_back(w);
    for (int k = 0; k < c.alternatives && !others.empty(); ++k) {
      const std::size_t pick = rng.below(others.size());
      const std::size_t w = others[pick];
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(pick));
      slot.push_back({world.vocab[w],
                      -c.acoustic_base - c.acoustic_margin + c.acoustic_noise * rng.normal(),
                      std::log(world.stationary[w])});
    }
    if (rng.uniform() < c.skip_prob)
      slot.push_back({std::string(kEpsilon),
                      -c.acoustic_base - 8.0 + c.acoustic_noise * rng.normal(), 0.0});
    for (std::size_t k = slot.size(); k > 1; --k) std::swap(slot[k - 1], slot[rng.below(k)]);
    for (const Choice &choice : slot) {
      Arc arc;
      arc.id = static_cast<ArcId>(lat.arcs.size());
      arc.from = static_cast<NodeId>(i);
      arc.to = static_cast<NodeId>(i + 1);
      arc.word = choice.word;
      arc.acoustic = choice.acoustic;
      arc.lm = choice.lm;
      lat.arcs.push_back(std::move(arc));
    }
  }
  return lat;
}

}  // namespace

void WorldConfig::check() const {
  if (ensemble_size < 2) throw Error("world: ensemble size E must be >= 2");
  if (vocab_size < 4) throw Error("world: vocabulary size must be >= 4");
  if (sessions < 1 || utterances_per_session < 1) throw Error("world: empty sessions");
  if (min_words < 1 || max_words < min_words) throw Error("world: bad utterance length range");
  if (alternatives < 0 || skip_prob < 0.0 || skip_prob > 1.0) throw Error("world: bad noise");
  if (!(alpha > 0.0)) throw Error("world: alpha must be > 0");
}

std::vector<const SequenceScorer *> SyntheticWorld::scorers() const {
  std::vector<const SequenceScorer *> out;
  for (const auto &s : ensemble) out.push_back(s.get());
  return out;
}

IterationSchedule SyntheticWorld::schedule(int iterations, bool carry) const {
  if (iterations < 1 || iterations > static_cast<int>(ensemble.size()))
    throw Error("world: iterations must lie in [1, E]");
  std::vector<const SequenceScorer *> all = scorers();
  all.resize(static_cast<std::size_t>(iterations));
  return IterationSchedule::of(all, carry);
}

SyntheticWorld build_world(std::uint64_t seed, const WorldConfig &config) {
  config.check();
  SyntheticWorld world;
  world.seed = seed;
  world.config = config;
  Rng rng(seed);
  const std::size_t v = static_cast<std::size_t>(config.vocab_size);

  for (std::size_t w = 0; w < v; ++w) world.vocab.push_back("w" + std::to_string(w));
  for (std::size_t a = 0; a < v; ++a) {
    std::vector<double> logits;
    for (std::size_t b = 0; b < v; ++b) logits.push_back(config.sharpness * rng.normal());
    world.transition.push_back(softmax(std::move(logits)));
  }
  world.stationary = stationary_of(world.transition);

  // Time-reversed chain: Q(a | b) = pi(a) P(b | a) / pi(b).
  std::vector<std::vector<double>> reversed(v, std::vector<double>(v));
  for (std::size_t b = 0; b < v; ++b)
    for (std::size_t a = 0; a < v; ++a)
      reversed[b][a] = world.stationary[a] * world.transition[a][b] / world.stationary[b];

  for (int e = 0; e < config.ensemble_size; ++e) {
    const bool backward = e % 2 == 1;
    const auto &chain = backward ? reversed : world.transition;
    std::vector<double> unigram = perturbed_logprobs(world.stationary, config.perturbation, rng);
    std::vector<std::vector<double>> bigram;
    for (std::size_t a = 0; a < v; ++a)
      bigram.push_back(perturbed_logprobs(chain[a], config.perturbation, rng));
    auto table = make_table(world.vocab, unigram, bigram);
    const std::string name = (backward ? "B" : "F") + std::to_string(e / 2 + 1);
    world.tables.push_back(table);
    world.ensemble.push_back(std::make_unique<NgramScorer>(
        table, name, backward ? Direction::kBackward : Direction::kForward));
  }

  auto sample = [&](const std::vector<double> &dist) {
    double u = rng.uniform(), acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
      if ((acc += dist[i]) > u) return i;
    return dist.size() - 1;
  };

  for (int s = 0; s < config.sessions; ++s) {
    LatticeSession session;
    session.session_id = "world" + std::to_string(seed) + "-s" + std::to_string(s);
    std::size_t word = sample(world.stationary);
    for (int u = 0; u < config.utterances_per_session; ++u) {
      const int len = config.min_words +
                      static_cast<int>(rng.below(
                          static_cast<std::size_t>(config.max_words - config.min_words + 1)));
      std::vector<std::size_t> truth;
      for (int i = 0; i < len; ++i) {
        truth.push_back(word);
        word = sample(world.transition[word]);
      }
      char id[64];
      std::snprintf(id, sizeof id, "%s-u%03d", session.session_id.c_str(), u);
      session.lattices.push_back(make_lattice(id, truth, world, rng));
      WordSeq ref;
      for (std::size_t w : truth) ref.push_back(world.vocab[w]);
      session.references.push_back(std::move(ref));
    }
    world.sessions.push_back(std::move(session));
  }
  return world;
}

SyntheticWorld build_world(std::uint64_t seed, int ensemble_size, int vocab_size,
                           int utterances_per_session) {
  WorldConfig config;
  config.ensemble_size = ensemble_size;
  config.vocab_size = vocab_size;
  config.utterances_per_session = utterances_per_session;
  return build_world(seed, config);
}

void write_world(const SyntheticWorld &world, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir / "lat");
  std::filesystem::create_directories(dir / "lm");
  for (const LatticeSession &session : world.sessions) {
    std::string manifest;
    for (std::size_t j = 0; j < session.lattices.size(); ++j) {
      const Lattice &lat = session.lattices[j];
      const std::string rel = "lat/" + lat.utterance_id + ".slf";
      write_file_atomic(dir / rel, write_slf(lat));
      nlohmann::json entry = {{"id", lat.utterance_id},
                              {"lattice", rel},
                              {"ref", join_words(session.references[j])}};
      manifest += entry.dump() + "\n";
    }
    write_file_atomic(dir / (session.session_id + ".jsonl"), manifest);
  }
  for (std::size_t e = 0; e < world.ensemble.size(); ++e)
    write_file_atomic(dir / "lm" / (world.ensemble[e]->name() + ".arpa"),
                      write_arpa(*world.tables[e]));
}

std::vector<CurvePoint> replay_fig3(const SyntheticWorld &world, int iterations, int nbest) {
  const RescoreParams params = RescoreParams::rich(world.config.alpha);
  const std::string nbest_label = std::to_string(nbest) + "-best";
  std::vector<CurvePoint> points;

  std::vector<std::vector<NBestList>> lists;
  for (const LatticeSession &session : world.sessions) {
    std::vector<NBestList> per_session;
    for (const Lattice &lat : session.lattices)
      per_session.push_back(extract_nbest(lat, nbest, world.config.alpha));
    lists.push_back(std::move(per_session));
  }

  for (bool carry : {false, true}) {
    const IterationSchedule full = world.schedule(iterations, carry);
    std::vector<WerCounts> lattice_wer(static_cast<std::size_t>(iterations));
    for (const LatticeSession &session : world.sessions) {
      const IterationTrace trace = run_iterative(session, full, params, {});
      for (int i = 0; i < iterations; ++i) lattice_wer[i] += trace[i].wer.value();
    }
    for (int i = 0; i < iterations; ++i)
      points.push_back({i + 1, "lattice", carry, lattice_wer[i].wer()});

    for (int i = 1; i <= iterations; ++i) {
      NBestRescoreOptions options;
      options.alpha = world.config.alpha;
      options.mode = CombinationMode::kIterative;
      WerCounts total;
      for (std::size_t s = 0; s < world.sessions.size(); ++s) {
        const auto rescored = rescore_nbest_session(lists[s], world.schedule(i, carry), options);
        std::vector<WordSeq> best;
        for (const NBestList &l : rescored)
          best.push_back(l.entries.empty() ? WordSeq{} : l.entries.front().words);
        total += session_wer(world.sessions[s], best).value();
      }
      points.push_back({i, nbest_label, carry, total.wer()});
    }
  }
  return points;
}

std::vector<CurvePoint> average_curves(const std::vector<std::vector<CurvePoint>> &per_world) {
  if (per_world.empty()) return {};
  std::vector<CurvePoint> mean = per_world.front();
  for (CurvePoint &p : mean) p.wer = 0.0;
  for (const auto &curve : per_world) {
    if (curve.size() != mean.size()) throw Error("average_curves: layouts differ");
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i].iteration != mean[i].iteration || curve[i].search != mean[i].search ||
          curve[i].context != mean[i].context)
        throw Error("average_curves: layouts differ");
      mean[i].wer += curve[i].wer;
    }
  }
  for (CurvePoint &p : mean) p.wer /= static_cast<double>(per_world.size());
  return mean;
}

void write_curves_tsv(std::ostream &out, const std::vector<CurvePoint> &points) {
  out << "iteration\tsearch\tcontext\twer\n";
  for (const CurvePoint &p : points) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, 100.0 * p.wer,
                                   std::chars_format::fixed, 2);
    out << p.iteration << '\t' << p.search << '\t' << (p.context ? "yes" : "no") << '\t'
        << std::string(buf, ptr) << '\n';
  }
}

}  // namespace latrescore
