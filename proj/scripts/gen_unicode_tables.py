#!/usr/bin/env python3
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
"""Regenerates core/src/unicode_tables.inc from Python's unicodedata."""

import sys
import unicodedata

MAX_CP = 0x110000


def ranges(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        if pred(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def cat(cp):
    return unicodedata.category(chr(cp))


TABLES = {
    "kLetterRanges": lambda cp: cat(cp).startswith("L"),
    "kNumberRanges": lambda cp: cat(cp).startswith("N"),
    "kPunctuationRanges": lambda cp: cat(cp).startswith("P"),
    "kControlRanges": lambda cp: cat(cp) in ("Cc", "Cf"),
    # Same set as Python's str.isspace() and the regex module's \s.
    "kWhitespaceRanges": lambda cp: chr(cp).isspace(),
}


def main():
    lines = [
        "// Generated by scripts/gen_unicode_tables.py (Unicode %s). Do not edit."
        % unicodedata.unidata_version,
        "",
    ]
    for name, pred in TABLES.items():
        rs = ranges(pred)
        lines.append("constexpr CodepointRange %s[] = {" % name)
        for lo, hi in rs:
            lines.append("    {0x%04X, 0x%04X}," % (lo, hi))
        lines.append("};")
        lines.append("")
    sys.stdout.write("\n".join(lines))


if __name__ == "__main__":
    main()
