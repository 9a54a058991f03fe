#!/usr/bin/env python3
"""Torsion residuals of the cone G2 structure as the difference step shrinks."""
import argparse

import numpy as np

from nklab import cone


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=6)
    ap.add_argument("--levels", type=int, default=6)
    args = ap.parse_args(argv)
    keys = ("d_phi", "d_psi", "phi_primitive", "psi_primitive")
    print(f"{'h':>9s} " + " ".join(f"{k:>14s}" for k in keys))
    prev = None
    for j in range(args.levels):
        h = 1e-2 / 2 ** j
        r = cone.torsion_free_check(np.random.default_rng(args.seed), args.samples, h)
        print(f"{h:9.2e} " + " ".join(f"{r[k]:14.3e}" for k in keys))
        if prev is not None:
            print(f"{'ratio':>9s} " + " ".join(f"{prev[k] / r[k]:14.2f}" for k in keys))
        prev = r
    print("flat agreement:", cone.flat_agreement(np.random.default_rng(args.seed)))


if __name__ == "__main__":
    main()
