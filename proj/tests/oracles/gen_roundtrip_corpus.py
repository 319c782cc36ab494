#!/usr/bin/env python3
# tests/oracles/gen_roundtrip_corpus.py
# Copyright 2026  The latrescore Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.
"""Writes 25 SLF lattices and 25 ARPA models in canonical layout.

The files exercise optional node times, epsilon arcs, -99 probabilities,
entries with and without back-off weights and orders 1 to 4. A reader and
writer pair is expected to reproduce every file byte for byte.
"""

import random
import sys
from pathlib import Path

WORDS = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf",
         "hotel", "india", "juliet", "<unk>", "!NULL"]


def slf(rng, index):
    n = rng.randint(2, 14)
    timed = rng.random() < 0.6
    lines = ["VERSION=1.0", "UTTERANCE=rt-%03d" % index]
    arcs = []
    for i in range(n - 1):
        arcs.append((i, i + 1))
        for _ in range(rng.randint(0, 2)):
            arcs.append((i, rng.randint(i + 1, min(n - 1, i + 4))))
    rng.shuffle(arcs)
    lines.append("N=%d L=%d" % (n, len(arcs)))
    t = 0.0
    for i in range(n):
        if timed:
            lines.append("I=%d t=%.6f" % (i, t))
            t += rng.randint(1, 40) / 100.0
        else:
            lines.append("I=%d" % i)
    for j, (s, e) in enumerate(arcs):
        word = rng.choice(WORDS)
        a, l = -rng.uniform(0, 400), -rng.uniform(0, 20)
        if word == "!NULL":
            l = 0.0
        lines.append("J=%d S=%d E=%d W=%s a=%.6f l=%.6f" % (j, s, e, word, a, l))
    return "\n".join(lines) + "\n"


def arpa(rng):
    order = rng.randint(1, 4)
    vocab = ["<s>", "</s>", "<unk>"] + rng.sample(WORDS[:10], rng.randint(2, 10))
    grams = [[(w,) for w in vocab]]
    for n in range(2, order + 1):
        lower = grams[-1]
        found = set()
        for _ in range(rng.randint(1, 30)):
            ctx = rng.choice(lower)
            found.add(ctx + (rng.choice(vocab[1:]),))
        grams.append(sorted(found))
    lines = ["\\data\\"]
    for n, gs in enumerate(grams, 1):
        lines.append("ngram %d=%d" % (n, len(gs)))
    for n, gs in enumerate(grams, 1):
        lines.append("")
        lines.append("\\%d-grams:" % n)
        for g in gs:
            p = -99.0 if g == ("<s>",) else -rng.uniform(0, 6)
            line = "%.6f\t%s" % (p, " ".join(g))
            if n < order and rng.random() < 0.8:
                line += "\t%.6f" % -rng.uniform(0, 2)
            lines.append(line)
    lines.append("")
    lines.append("\\end\\")
    return "\n".join(lines) + "\n"


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(4242)
    for i in range(25):
        (out / ("rt%02d.slf" % i)).write_text(slf(rng, i))
    for i in range(25):
        (out / ("rt%02d.arpa" % i)).write_text(arpa(rng))


if __name__ == "__main__":
    main()
