#!/usr/bin/env python3
"""Pairwise bracket table for a level family of colour-coded sign vectors.

Builds one member per level with multiplicities n * k0^(m-l) so every
member has the same length, then prints the mutual bracket against the
per-pair bound. Everything exact; the table cells are Fractions.
"""

import argparse
from fractions import Fraction

from unclab.resolutions import (build_rademacher, choose_multiplicities,
                                mutual_bracket, rademacher_bound,
                                ris_condition)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k0", type=int, default=2)
    ap.add_argument("--m", type=int, default=3, help="number of levels")
    ap.add_argument("--n", type=int, default=1, help="top-level multiplicity")
    ap.add_argument("--ns", type=str, default=None,
                    help="comma-separated colour multiplicities; greedy if omitted")
    args = ap.parse_args()

    ns = (tuple(int(x) for x in args.ns.split(","))
          if args.ns else choose_multiplicities(args.k0))
    print(f"k0={args.k0} ns={ns} ris_condition={ris_condition(args.k0, ns)}")

    mults = [args.n * args.k0 ** (args.m - l) for l in range(1, args.m + 1)]
    family = [build_rademacher(args.k0, ns, mults[l - 1], l)
              for l in range(1, args.m + 1)]
    labels = [f"R(n={mults[l - 1]},l={l})" for l in range(1, args.m + 1)]
    print("lengths:", [len(r) for r in family])
    print()

    width = max(len(s) for s in labels) + 2
    header = " " * width + "".join(f"{lab:>{width}}" for lab in labels)
    print(header)
    for i, r in enumerate(family):
        row = f"{labels[i]:>{width}}"
        for s in family:
            row += f"{str(mutual_bracket(r, s)):>{width}}"
        print(row)
    print()
    print("bounds (same-level on the diagonal):")
    for i in range(args.m):
        row = f"{labels[i]:>{width}}"
        for j in range(args.m):
            row += f"{str(rademacher_bound(args.k0, ns, i + 1, j + 1)):>{width}}"
        print(row)

    worst = max(mutual_bracket(family[i], family[j]) /
                rademacher_bound(args.k0, ns, i + 1, j + 1)
                for i in range(args.m) for j in range(args.m))
    print(f"\nworst bracket/bound ratio: {worst} ({float(worst):.4f})")
    assert worst <= 1


if __name__ == "__main__":
    main()
