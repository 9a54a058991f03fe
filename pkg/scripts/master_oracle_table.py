#!/usr/bin/env python3
"""Compare the nearly-Kähler second-variation formula with finite differences of area."""
import argparse

from nklab import catalog
from nklab.variation import (NKSecondVariation, VariationFamily, area_second_difference,
                             second_variation_general)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--entry", default="halfsphere-lag")
    ap.add_argument("--nodes", type=int, default=64)
    args = ap.parse_args(argv)
    e = catalog.get(args.entry)
    sv = NKSecondVariation(e.patch, e.lagrangian, args.nodes)
    print(f"{'field':28s} {'nk formula':>14s} {'general':>14s} {'finite diff':>14s} {'rel err':>9s}")
    for f in e.fields:
        fam = VariationFamily(e.patch, f)
        nk = sv(f)
        gen = second_variation_general(fam, nodes=args.nodes)
        fd = area_second_difference(fam, nodes=args.nodes)
        scale = max(abs(fd), sv.mass(sv.parts(f)))
        print(f"{f.name:28s} {nk:14.8f} {gen:14.8f} {fd:14.8f} {abs(nk - fd) / scale:9.1e}")


if __name__ == "__main__":
    main()
