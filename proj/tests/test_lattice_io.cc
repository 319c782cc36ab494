// tests/test_lattice_io.cc
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

#include <cmath>
#include <fstream>

#include "doctest.h"
#include "latrescore/error.h"
#include "latrescore/lattice_io.h"
#include "latrescore/ngram.h"
#include "test_util.h"

namespace latrescore {
namespace {

using testing::TempDir;
using testing::test_data;
using testing::toy_data;

const char *kSmallSlf =
    "VERSION=1.0\n"
    "UTTERANCE=u\n"
    "N=3 L=2\n"
    "I=0 t=0.00\n"
    "I=1 t=0.10\n"
    "I=2 t=0.20\n"
    "J=0 S=0 E=1 W=hello a=-1.5 l=-2.25\n"
    "J=1 S=1 E=2 W=world a=-3.0 l=-0.5\n";

const char *kSmallArpa =
    "\\data\\\n"
    "ngram 1=3\n"
    "ngram 2=1\n"
    "\n"
    "\\1-grams:\n"
    "-1.0\t<unk>\n"
    "-0.5\ta\t-0.25\n"
    "-0.75\tb\n"
    "\n"
    "\\2-grams:\n"
    "-0.1\ta b\n"
    "\n"
    "\\end\\\n";

}  // namespace

TEST_SUITE("lattice_io") {

TEST_CASE("corpus files survive parse and write unchanged") {
  int slf = 0, arpa = 0;
  for (int i = 0; i < 25; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "rt%02d", i);
    CAPTURE(name);
    const std::string slf_text = read_file(test_data("roundtrip") / (std::string(name) + ".slf"));
    const Lattice lat = parse_slf(slf_text);
    CHECK(write_slf(lat) == slf_text);
    CHECK(parse_slf(write_slf(lat)) == lat);
    ++slf;

    const std::string arpa_text =
        read_file(test_data("roundtrip") / (std::string(name) + ".arpa"));
    CHECK(write_arpa(parse_arpa(arpa_text)) == arpa_text);
    ++arpa;
  }
  CHECK(slf + arpa == 50);
}

TEST_CASE("SLF fields are read as documented") {
  const Lattice l = parse_slf(kSmallSlf);
  CHECK(l.utterance_id == "u");
  REQUIRE(l.nodes.size() == 3);
  REQUIRE(l.arcs.size() == 2);
  CHECK(l.begin == 0);
  CHECK(l.end == 2);
  CHECK(l.nodes[1].time == doctest::Approx(0.1));
  CHECK(l.arcs[0].word == "hello");
  CHECK(l.arcs[0].acoustic == -1.5);
  CHECK(l.arcs[0].lm == -2.25);
  const Lattice again = parse_slf(write_slf(l));
  CHECK(isomorphic(again, l));
}

TEST_CASE("SLF writer rounds scores to six digits") {
  Lattice l = parse_slf(kSmallSlf);
  l.arcs[0].acoustic = -1.23456789;
  const Lattice back = parse_slf(write_slf(l));
  CHECK(back.arcs[0].acoustic == -1.234568);
}

TEST_CASE("SLF errors") {
  CHECK_THROWS_AS(parse_slf("VERSION=1.0\nN=2 L=1\nI=0\nI=1\nJ=0 S=0 E=1 W=a a=x l=0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_slf("N=3 L=1\nI=0\nI=1\nJ=0 S=0 E=1 W=a a=0 l=0\n"), ParseError);
  CHECK_THROWS_AS(parse_slf("N=2 L=1\nI=0\nI=1\nJ=0 S=0 W=a a=0 l=0\n"), ParseError);
  CHECK_THROWS_AS(parse_slf("I=0\nI=1\nJ=0 S=0 E=1 W=a\n"), ParseError);
  {
    // Two sinks are joined by epsilon arcs into a fresh end node.
    const Lattice two = parse_slf("N=3 L=2\nI=0\nI=1\nI=2\nJ=0 S=0 E=1 W=a\nJ=1 S=0 E=2 W=b\n");
    CHECK(validate(two).ok());
    CHECK(two.nodes.size() == 4);
    CHECK(two.end == 3);
    CHECK(enumerate_paths(two, 10).size() == 2);
  }
  try {
    parse_slf("N=2 L=1\nI=0\nI=1\nJ=0 S=0 E=1 W=a a=oops\n");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("ARPA scores are converted from log10") {
  const NgramTable t = parse_arpa(kSmallArpa);
  CHECK(t.order() == 2);
  const TokenId a = *t.find_word("a");
  const TokenId b = *t.find_word("b");
  const TokenId ab[] = {a, b};
  const NgramEntry *e = t.find(ab);
  REQUIRE(e != nullptr);
  CHECK(e->logprob == doctest::Approx(-0.1 * std::log(10.0)).epsilon(1e-12));
  const TokenId just_a[] = {a};
  REQUIRE(t.find(just_a)->backoff.has_value());
  CHECK(*t.find(just_a)->backoff == doctest::Approx(-0.25 * std::log(10.0)).epsilon(1e-12));
  CHECK(write_arpa(t).find("\\2-grams:") != std::string::npos);
}

TEST_CASE("ARPA errors") {
  std::string bad_count = kSmallArpa;
  bad_count.replace(bad_count.find("ngram 2=1"), 9, "ngram 2=2");
  CHECK_THROWS_AS(parse_arpa(bad_count), ParseError);

  std::string bad_score = kSmallArpa;
  bad_score.replace(bad_score.find("-0.75"), 5, "abc");
  CHECK_THROWS_AS(parse_arpa(bad_score), ParseError);

  std::string no_end = kSmallArpa;
  no_end.erase(no_end.find("\\end\\"));
  CHECK_THROWS_AS(parse_arpa(no_end), ParseError);

  CHECK_THROWS_AS(parse_arpa("ngram 1=1\n"), ParseError);
}

TEST_CASE("load_session reads a manifest relative to its directory") {
  const LatticeSession s = load_session(toy_data("toy.jsonl"));
  CHECK(s.session_id == "toy");
  REQUIRE(s.lattices.size() == 3);
  CHECK(s.lattices[1].utterance_id == "utt2");
  REQUIRE(s.references.size() == 3);
  CHECK(s.references[0] == WordSeq{"the", "cat", "sat", "on", "the", "mat"});
}

TEST_CASE("load_session errors name the offending line") {
  TempDir dir;
  write_file_atomic(dir / "a.jsonl", "{\"id\": \"u\", \"lattice\": \"missing.slf\"}\n");
  CHECK_THROWS_AS(load_session(dir / "a.jsonl"), Error);
  write_file_atomic(dir / "b.jsonl", "{not json\n");
  CHECK_THROWS_AS(load_session(dir / "b.jsonl"), Error);
  write_file_atomic(dir / "c.jsonl", "\n");
  CHECK_THROWS_AS(load_session(dir / "c.jsonl"), Error);
  CHECK_THROWS_AS(load_session(dir / "nope.jsonl"), Error);
}

TEST_CASE("write_file_atomic replaces content") {
  TempDir dir;
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  CHECK(read_file(dir / "f.txt") == "two");
}

TEST_CASE("word splitting") {
  CHECK(split_words("  a\tb  c\n") == WordSeq{"a", "b", "c"});
  CHECK(split_words("").empty());
  CHECK(join_words({"a", "b"}) == "a b");
}

}  // TEST_SUITE
}  // namespace latrescore
