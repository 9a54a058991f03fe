#!/usr/bin/env python3
"""Holomorphic and associative-cone verdicts for every catalog entry."""
from nklab import catalog, cone


def main():
    print(f"{'entry':26s} {'expected':>9s} {'assoc':>6s} {'holo':>6s} {'max 1-|phi|':>12s} {'max J-defect':>12s}")
    for cid in catalog.ids():
        e = catalog.get(cid)
        v = cone.equivalence_verdict(e.patch)
        print(f"{cid:26s} {str(e.holomorphic):>9s} {str(v['associative']):>6s} {str(v['holomorphic']):>6s} "
              f"{v['max_associativity']:12.2e} {v['max_holomorphic_defect']:12.2e}")


if __name__ == "__main__":
    main()
