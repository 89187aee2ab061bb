"""Pass rates of the rank-equality checks at and just past their degree budgets."""

import argparse

import numpy as np

from gridfree import cb
from gridfree.ff import field_of_order


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'r':>2} {'q':>3}  {'d':>2}  pass-rate")
    for r in (3, 4):
        for q in (7, 11, 13, 25):
            F = field_of_order(q)
            families = [cb.random_transverse_family(F, r, rng)[2] for _ in range(args.trials)]
            for d in range(1, 2 * r - 1):
                ok = sum(cb.cb_check(X, d, falsify=True).passed for X in families)
                tag = "  (past budget)" if d > 2 * r - 3 else ""
                print(f"{r:>2} {q:>3}  {d:>2}  {ok}/{args.trials}{tag}")
    print()
    print("degree budget r=4, t=2 over GF(11)")
    F = field_of_order(11)
    for d in (3, 4, 5, 6):
        hits = 0
        for _ in range(args.trials):
            X = cb.random_transverse_family(F, 4, rng)[2]
            keep = sorted(rng.choice(16, size=14, replace=False).tolist())
            hits += not cb.degree_budget_check(X, [X[i] for i in keep], d, falsify=True).passed
        print(f"  d={d}: witness found in {hits}/{args.trials}")


if __name__ == "__main__":
    main()
