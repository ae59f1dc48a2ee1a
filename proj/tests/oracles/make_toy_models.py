# Copyright 2026 The Orthoprobe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Builds the toy unigram model in tests/testdata/toy.

unigram50.tsv is a 50-piece model over the letters a, b, c (plus "x",
which only appears inside multi-character pieces) with scores that are
multiples of 1/8, so every segmentation score is exact in binary floating
point. unigram50.model is the same model as a SentencePiece ModelProto.

    PROTOCOL_BUFFERS_PYTHON_IMPLEMENTATION=python python3 tests/oracles/make_toy_models.py
"""

import itertools
import os
import random

from transformers.utils import sentencepiece_model_pb2 as pb

ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
TOY = os.path.join(ROOT, "tests", "testdata", "toy")
B = "▁"


def pieces():
    r = random.Random(7)
    out = [("<unk>", 0.0), ("<s>", 0.0), ("</s>", 0.0), (B, -3.0)]
    rest = list("abc") + ["".join(p) for p in itertools.product("abc", repeat=2)]
    rest += [B + c for c in "abc"] + [B + "ab", B + "ca", B + "bca", B + "x"]
    rest += ["ax", "xb", "cxc", "abca", "bcab", "cabc", "aabb", "abcab"]
    triples = ["".join(p) for p in itertools.product("abc", repeat=3)]
    r.shuffle(triples)
    rest += triples[:50 - len(out) - len(rest)]
    for p in rest:
        out.append((p, -r.randint(8, 96) / 8))
    assert len(out) == 50 and len({p for p, _ in out}) == 50
    return out


def main():
    model = pieces()
    with open(os.path.join(TOY, "unigram50.tsv"), "w", encoding="utf-8") as f:
        for p, s in model:
            f.write(f"{p}\t{s}\n")
    m = pb.ModelProto()
    for piece, score in model:
        p = m.pieces.add()
        p.piece, p.score = piece, score
        p.type = 2 if piece == "<unk>" else (3 if piece.startswith("<") else 1)
    m.trainer_spec.model_type = 1
    m.trainer_spec.vocab_size = len(model)
    m.normalizer_spec.name = "identity"
    with open(os.path.join(TOY, "unigram50.model"), "wb") as f:
        f.write(m.SerializeToString())


if __name__ == "__main__":
    main()
