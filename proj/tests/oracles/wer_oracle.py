#!/usr/bin/env python3
# tests/oracles/wer_oracle.py
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
"""Reference word alignments for the WER tests.

Aligns random reference/hypothesis pairs with a memoised recursive edit
distance and recovers S/D/I by walking back from the end, preferring a
match or substitution, then a deletion, then an insertion.

Writes ref<TAB>hyp<TAB>S<TAB>D<TAB>I to argv[1].
"""

import random
import sys
from functools import lru_cache

VOCAB = ["a", "b", "c", "d", "e", "f"]


def align(ref, hyp):
    @lru_cache(maxsize=None)
    def dist(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(dist(i - 1, j - 1) + (ref[i - 1] != hyp[j - 1]),
                   dist(i - 1, j) + 1,
                   dist(i, j - 1) + 1)

    s = d = ins = 0
    i, j = len(ref), len(hyp)
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dist(i, j) == dist(i - 1, j - 1) + (ref[i - 1] != hyp[j - 1]):
            s += ref[i - 1] != hyp[j - 1]
            i, j = i - 1, j - 1
        elif i > 0 and dist(i, j) == dist(i - 1, j) + 1:
            d += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    assert s + d + ins == dist(len(ref), len(hyp))
    return s, d, ins


def main():
    rng = random.Random(20260415)
    rows = []
    for _ in range(300):
        ref = [rng.choice(VOCAB) for _ in range(rng.randint(1, 12))]
        hyp = [rng.choice(VOCAB) for _ in range(rng.randint(0, 12))]
        rows.append((ref, hyp) + align(tuple(ref), tuple(hyp)))
    with open(sys.argv[1], "w") as f:
        for ref, hyp, s, d, i in rows:
            f.write("%s\t%s\t%d\t%d\t%d\n" % (" ".join(ref), " ".join(hyp), s, d, i))


if __name__ == "__main__":
    main()
