#!/usr/bin/env python3
"""Writes the example matrices to tools/fixtures as MatrixFile JSON.

Entries are evaluated exactly (mpmath at 50 digits) and written with 17
significant digits. Run from anywhere; output lands next to this script.
"""

import json
import pathlib

from mpmath import mp, mpf, sqrt

mp.dps = 50

s2, s3, s5, s6 = sqrt(2), sqrt(3), sqrt(5), sqrt(6)

MATRICES = {
    "ex1": [
        [(3 - s6 + s3 - s2) / 6, (s6 + 2 * s3 - 2 * s2) / 6, (3 + s6 - s3 + s2) / 6],
        [1 / (3 * s2), 2 / (3 * s2), -1 / (3 * s2)],
        [(3 - s6 + s3 + s2) / 6, (s6 + 2 * s3 + 2 * s2) / 6, (3 + s6 - s3 - s2) / 6],
    ],
    "ex2": [
        [mpf(0), mpf(4) / 3, mpf(-1) / 3],
        [mpf(-1) / 3, mpf(1), mpf(-1) / 3],
        [mpf(-2) / 3, mpf(-2) / 3, mpf(0)],
    ],
    "ex3": [
        [(16 + 4 * s5) / 15, (2 + 8 * s5) / 15, (10 - 8 * s5) / 15],
        [(-8 + 3 * s5) / 15, (-1 + 6 * s5) / 15, (-5 - 6 * s5) / 15],
        [s5 / 3, 2 * s5 / 3, -2 * s5 / 3],
    ],
    "ex4a": [[1, 2, 3], [0, 0, 1], [0, 0, 0]],
    "ex4b": [[1, 2, 3], [0, 0, 0], [0, 0, 0]],
}


def materialize(x):
    return float(format(float(mpf(x)), ".17g"))


def main():
    out_dir = pathlib.Path(__file__).resolve().parent / "fixtures"
    out_dir.mkdir(exist_ok=True)
    for name, rows in MATRICES.items():
        doc = {
            "name": name,
            "n": len(rows),
            "entries": [[[materialize(x), 0.0] for x in row] for row in rows],
        }
        (out_dir / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
