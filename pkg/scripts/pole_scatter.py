#!/usr/bin/env python3
"""Chart denominator zeros for six sample triples of contrasting shape.

For each triple the search rectangle spans Re in [-1, a_crit + 1] and
Im in [0, 60]; one CSV of zero locations per triple lands in the output
directory, named zeros_<c>.csv after the triple's largest entry.
"""

import argparse
import pathlib
import sys

from wamlab.arith import factor
from wamlab.cli import main as wamlab_main
from wamlab.critical import critical_abscissa

SAMPLE_TRIPLES = [
    (1, 1484374, 1484375),
    (1960, 59049, 61009),
    (78, 9765547, 9765625),
    (4782969, 41354375, 46137344),
    (537824, 134906067, 135443891),
    (13573088, 349609375, 363182463),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--imax", type=float, default=60.0, help="top of the search window")
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for a, b, c in SAMPLE_TRIPLES:
        n = a * b * c
        a_crit = critical_abscissa(factor(n)).a_crit
        out = outdir / f"zeros_{c}.csv"
        code = wamlab_main([
            "zeros", str(n),
            "--re", f"-1:{a_crit + 1.0}",
            "--im", f"0:{args.imax}",
            "--out", str(out),
        ])
        if code != 0:
            raise SystemExit(code)
        print(f"{out}  (a_crit {a_crit:.4f})", file=sys.stderr)


if __name__ == "__main__":
    main()
