"""Verification reports and parameter sweeps behind the command line."""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field as dfield
from fractions import Fraction
from typing import Any, Sequence

from .construct import ConstructionParams, build, expected_counts
from .errors import ChecksFailed, GridFreeError
from .ff import make_field, prime_power
from .hyper import LinearHypergraph, bound_check, check_linear, load, nonuniform_edges
from .patterns import PatternSpec, exhaustive_certify

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    subcommand: str
    flags: dict[str, Any] = dfield(default_factory=dict)
    seed: int = 0
    out_dir: str = "."
    format: str = "json"

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    model: str
    r: int
    n: int
    edges: int
    checks: list[Check]
    expected_edges: int | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [f"{c.name}: {c.detail}" for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "r": self.r,
            "n": self.n,
            "edges": self.edges,
            "expected_edges": self.expected_edges,
            "ok": self.ok,
            "checks": [asdict(c) for c in self.checks],
        }


def _layer_checks(h: LinearHypergraph) -> list[Check]:
    tags = [v.tag for v in h.vertices]
    out = []
    if h.model == "hrq":
        a_pts = {v.payload for v in h.vertices if v.tag.startswith("A-layer")}
        b_pts = {v.payload for v in h.vertices if v.tag == "B-conic"}
        both = a_pts & b_pts
        out.append(Check("A and B disjoint", not both, f"shared points {sorted(both)[:3]}" if both else ""))
        bad = [i for i, e in enumerate(h.edges) if sum(tags[v] == "B-conic" for v in e) != 1]
        out.append(Check("one conic vertex per edge", not bad, f"edges {bad[:5]}" if bad else ""))
    else:
        bad = [i for i, e in enumerate(h.edges) if len({tags[v] for v in e}) != h.r]
        out.append(Check("one vertex per layer", not bad, f"edges {bad[:5]}" if bad else ""))
    return out


def verify_hypergraph(h: LinearHypergraph) -> VerifyReport:
    checks = []
    bad = nonuniform_edges(h)
    checks.append(Check("uniformity", not bad, f"edges {bad[:5]} are not {h.r}-sets" if bad else ""))
    lin = check_linear(h)
    checks.append(Check(
        "linearity", lin.ok,
        "" if lin.ok else f"pair {lin.pair} lies in edges {lin.first_edge} and {lin.second_edge}",
    ))
    try:
        rep = bound_check(h)
        checks.append(Check("pair-count bound", True, f"{rep.edges} <= {rep.bound}"))
    except GridFreeError as exc:
        checks.append(Check("pair-count bound", False, str(exc)))
    expected = None
    if h.model in ("hrq", "parallel", "fr") and h.field is not None:
        n_exp, expected = expected_counts(h.model, h.r, h.field.q)
        checks.append(Check("vertex count", h.n == n_exp, f"{h.n} vs {n_exp}"))
        checks.append(Check("edge count", len(h.edges) == expected, f"{len(h.edges)} vs {expected}"))
        checks.extend(_layer_checks(h))
    return VerifyReport(h.model, h.r, h.n, len(h.edges), checks, expected)


def verify(path) -> VerifyReport:
    """Load, audit, and raise ChecksFailed if anything is off."""
    rep = verify_hypergraph(load(path))
    if not rep.ok:
        raise ChecksFailed(rep)
    return rep


# --- sweeps ----------------------------------------------------------------

CHECKS = ("verify", "grid")


@dataclass(frozen=True)
class Cell:
    model: str
    r: int
    q: int


@dataclass
class SweepRow:
    cell: Cell
    n: int | None = None
    edges: int | None = None
    checks: dict[str, str] = dfield(default_factory=dict)
    error: str | None = None
    seconds: float = 0.0

    @property
    def density(self) -> Fraction | None:
        return Fraction(self.edges, self.n * self.n) if self.n else None

    @property
    def target(self) -> Fraction:
        r = self.cell.r
        return Fraction(1, 2 * r * r) if self.cell.model == "hrq" else Fraction(1, r * r)

    def to_json(self, timings: bool = False) -> dict:
        d = self.density
        out = {
            "model": self.cell.model,
            "r": self.cell.r,
            "q": self.cell.q,
            "n": self.n,
            "edges": self.edges,
            "density": float(d) if d is not None else None,
            "density_exact": f"{d.numerator}/{d.denominator}" if d is not None else None,
            "target": f"{self.target.numerator}/{self.target.denominator}",
            "checks": self.checks,
            "error": self.error,
        }
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def run_cell(cell: Cell, checks: Sequence[str] = ("verify",), budget: int | None = None) -> SweepRow:
    row = SweepRow(cell)
    start = time.perf_counter()
    try:
        p, k = prime_power(cell.q)
        h = build(ConstructionParams(cell.r, make_field(p, k), cell.model))
        row.n, row.edges = h.n, len(h.edges)
        if "verify" in checks:
            rep = verify_hypergraph(h)
            row.checks["verify"] = "pass" if rep.ok else "; ".join(rep.failures)
        if "grid" in checks:
            cert = exhaustive_certify(h, PatternSpec.grid(cell.r), budget=budget)
            row.checks["grid"] = cert.status
    except GridFreeError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    row.seconds = time.perf_counter() - start
    log.info("cell %s r=%d q=%d done in %.2fs", cell.model, cell.r, cell.q, row.seconds)
    return row


def sweep(cells: Sequence[Cell], checks: Sequence[str] = ("verify",), workers: int = 1,
          budget: int | None = None) -> list[SweepRow]:
    """Rows come back in cell order whatever the worker count."""
    if workers <= 1:
        return [run_cell(c, checks, budget) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: run_cell(c, checks, budget), cells))


def format_table(rows: Sequence[SweepRow], timings: bool = True) -> str:
    head = ["model", "r", "q", "n", "|E|", "|E|/n^2", "target", "ratio", "checks"]
    if timings:
        head.append("s")
    lines = [head]
    for row in rows:
        d = row.density
        cells = [row.cell.model, str(row.cell.r), str(row.cell.q), str(row.n or "-"), str(row.edges or "-")]
        if d is None:
            cells += ["-", str(row.target), "-", row.error or ""]
        else:
            checks = ",".join(f"{k}={v}" for k, v in sorted(row.checks.items()))
            cells += [f"{float(d):.5f}", str(row.target), f"{float(d / row.target):.4f}", checks]
        if timings:
            cells.append(f"{row.seconds:.2f}")
        lines.append(cells)
    widths = [max(len(l[i]) for l in lines) for i in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(l, widths)).rstrip() for l in lines) + "\n"


def summarize(rows: Sequence[SweepRow]) -> Counter:
    return Counter("error" if r.error else "ok" for r in rows)
