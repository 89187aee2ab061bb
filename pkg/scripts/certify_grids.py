"""Exhaustive grid and punctured-grid certificates with node counts and timings."""

import argparse
import time

from gridfree.construct import ConstructionParams, build
from gridfree.ff import field_of_order
from gridfree.patterns import PatternSpec, exhaustive_certify

CONIC = [(3, q) for q in (5, 7, 9, 11, 13, 17, 19, 23, 25)] + [(4, q) for q in (7, 9, 11, 13)] + [(5, 11)]
PARALLEL = [(3, q) for q in (5, 7, 9, 11)] + [(4, 7), (4, 9), (5, 7)]


def report(label, h, spec, transverse_only=False):
    start = time.perf_counter()
    cert = exhaustive_certify(h, spec, transverse_only=transverse_only)
    secs = time.perf_counter() - start
    print(f"{label:<22} {spec.kind:<9} t={spec.t}  {cert.status:<16} found={len(cert.found):<5} "
          f"excluded={len(cert.excluded):<5} nodes={cert.nodes:<9} {secs:7.2f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="only the smallest instances")
    args = ap.parse_args()
    conic = CONIC[:3] if args.quick else CONIC
    parallel = PARALLEL[:2] if args.quick else PARALLEL
    for r, q in conic:
        h = build(ConstructionParams(r, field_of_order(q)))
        report(f"conic r={r} q={q}", h, PatternSpec.grid(r))
        report(f"conic r={r} q={q}", h, PatternSpec.wicket(r))
    for r, q in parallel:
        h = build(ConstructionParams(r, field_of_order(q), "parallel"))
        for t in range(0, r - 1):
            report(f"parallel r={r} q={q}", h, PatternSpec.punctured(r, t=t), transverse_only=True)


if __name__ == "__main__":
    main()
