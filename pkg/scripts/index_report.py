#!/usr/bin/env python3
"""Maslov decomposition and negative eigenvalue counts on nested admissible bases."""
import argparse
import json

from nklab import catalog
from nklab.index import IndexConfig, admissible_basis, negative_count, quadratic_form_matrix, verify_index_bound
from nklab.maslov import maslov_decomposition
from nklab.variation import NKSecondVariation


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--entry", default="halfsphere-lag")
    ap.add_argument("--nodes", type=int, default=32)
    ap.add_argument("--max-degree", type=int, default=2)
    ap.add_argument("--samples", type=int, default=256)
    args = ap.parse_args(argv)
    e = catalog.get(args.entry)
    m = maslov_decomposition(e.patch, e.lagrangian, n=args.samples, steps=64)
    print("maslov:", json.dumps({k: m[k] for k in ("tangent", "normal", "total", "additive", "calibration_sign")}))
    sv = NKSecondVariation(e.patch, e.lagrangian, args.nodes)
    basis = None
    for d in range(args.max_degree + 1):
        basis = admissible_basis(sv, d)
        neg, ev = negative_count(*quadratic_form_matrix(sv, basis))
        print(f"degree {d}: basis {len(basis):3d}  negative {neg}  lowest eigenvalues {ev[:4].round(6).tolist()}")
    cfg = IndexConfig(degree=args.max_degree, nodes=args.nodes, maslov_samples=args.samples)
    r = verify_index_bound(e, cfg, basis=basis, sv=sv)
    print(f"verdict: {r.verdict}  kernel dim {r.kernel_dimension}  Riemann-Roch index {r.riemann_roch_index}")


if __name__ == "__main__":
    main()
