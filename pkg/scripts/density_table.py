"""Print |E|/n^2 against its limit for the conic and parallel models."""

import argparse

from gridfree.pipeline import Cell, format_table, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--q", type=int, nargs="+", default=[5, 7, 9, 11, 13, 25, 27, 49, 81, 125])
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    cells = [Cell(m, r, q) for m in ("hrq", "parallel") for r in args.r for q in args.q]
    rows = sweep(cells, ("verify",), workers=args.workers)
    print(format_table([row for row in rows if row.error is None], timings=False), end="")
    skipped = [f"{row.cell.model}(r={row.cell.r}, q={row.cell.q})" for row in rows if row.error]
    if skipped:
        print("skipped:", ", ".join(skipped))


if __name__ == "__main__":
    main()
