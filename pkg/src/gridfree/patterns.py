"""Search for grids, punctured grids and wickets inside linear hypergraphs.

A configuration is a set of ``n_rows`` pairwise-disjoint row edges and
``n_cols`` pairwise-disjoint column edges where each row meets each
column in one vertex, except at the ``t`` hole positions where they are
disjoint.  In a linear hypergraph a row and a column share at most one
vertex, and the private filler vertices of a punctured grid are forced
by counting, so only the intersection pattern has to be searched.

Whenever ``t <= n_rows - 2`` at least two rows meet every column.  The
search fixes those two rows first (the two least-indexed full rows, which
breaks the row symmetry), reads the candidate columns off the pair index
as the edges through one vertex of each, and then looks up the remaining
rows through pairs of column vertices.  Larger ``t`` falls back to a plain
row-set enumeration.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field as dfield, replace
from itertools import permutations
from math import comb
from typing import Iterator

from .errors import InstanceTooLarge, NoGeometry
from .geom import intersect
from .hyper import LinearHypergraph

log = logging.getLogger(__name__)

KINDS = ("grid", "punctured", "wicket")
DEFAULT_BUDGET = 10**8
MAX_ESTIMATE = 10**10
PROGRESS_EVERY = 10**6


def default_budget() -> int:
    return int(os.environ.get("GRIDFREE_MAX_NODES", DEFAULT_BUDGET))


@dataclass(frozen=True)
class PatternSpec:
    """A forbidden configuration.

    ``holes`` are 0-based ``(row, col)`` positions.  For ``punctured`` a
    ``holes`` of None means the whole family of hole sets of size ``t``.
    """

    kind: str
    r: int
    holes: frozenset | None = frozenset()
    t: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.r < 2:
            raise ValueError("pattern size must be at least 2")
        if self.kind != "punctured":
            if self.holes or self.t:
                raise ValueError(f"{self.kind} patterns have no holes")
            object.__setattr__(self, "holes", frozenset())
            return
        if self.holes is not None:
            holes = frozenset((int(i), int(j)) for i, j in self.holes)
            if any(not (0 <= i < self.r and 0 <= j < self.r) for i, j in holes):
                raise ValueError(f"holes {sorted(holes)} outside the {self.r}x{self.r} array")
            object.__setattr__(self, "holes", holes)
            object.__setattr__(self, "t", len(holes))
        elif not 0 <= self.t <= self.r * self.r:
            raise ValueError(f"hole count {self.t} out of range")

    @classmethod
    def grid(cls, r: int) -> "PatternSpec":
        return cls("grid", r)

    @classmethod
    def wicket(cls, r: int = 3) -> "PatternSpec":
        return cls("wicket", r)

    @classmethod
    def punctured(cls, r: int, holes=None, t: int | None = None) -> "PatternSpec":
        if holes is None and t is None:
            raise ValueError("give either holes or t")
        return cls("punctured", r, None if holes is None else frozenset(holes), t or 0)

    @property
    def n_rows(self) -> int:
        return self.r

    @property
    def n_cols(self) -> int:
        return self.r - 1 if self.kind == "wicket" else self.r

    @property
    def family(self) -> bool:
        return self.holes is None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "r": self.r,
            "t": self.t,
            "holes": None if self.holes is None else sorted(list(h) for h in self.holes),
        }


@dataclass
class Embedding:
    row_edges: tuple[int, ...]
    col_edges: tuple[int, ...]
    cross_vertices: dict[tuple[int, int], int]
    filler_vertices: dict[tuple[int, int], tuple[int, int]]
    transverse: bool | None = None
    holes_off_vertex_set: bool | None = None

    @property
    def holes(self) -> frozenset:
        return frozenset(self.filler_vertices)

    def key(self):
        rows, cols = frozenset(self.row_edges), frozenset(self.col_edges)
        if len(self.row_edges) == len(self.col_edges):
            return frozenset((rows, cols))
        return (rows, cols)

    def to_json(self) -> dict:
        return {
            "rows": list(self.row_edges),
            "cols": list(self.col_edges),
            "cross": [[i, j, v] for (i, j), v in sorted(self.cross_vertices.items())],
            "fillers": [[i, j, a, b] for (i, j), (a, b) in sorted(self.filler_vertices.items())],
            "transverse": self.transverse,
            "holes_off_vertex_set": self.holes_off_vertex_set,
        }


def edge_key(h: LinearHypergraph, e: Embedding):
    """Like ``Embedding.key`` but by edge contents, comparable across hypergraphs."""
    rows = frozenset(h.edges[i] for i in e.row_edges)
    cols = frozenset(h.edges[j] for j in e.col_edges)
    return frozenset((rows, cols)) if len(e.row_edges) == len(e.col_edges) else (rows, cols)


@dataclass
class BudgetExhausted:
    nodes: int


@dataclass
class Certificate:
    pattern: PatternSpec
    nodes: int
    complete: bool
    transverse_only: bool
    found: list[Embedding] = dfield(default_factory=list)
    excluded: list[Embedding] = dfield(default_factory=list)

    @property
    def status(self) -> str:
        if not self.complete:
            return "budget-exhausted"
        return "found" if self.found else "absent"

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern.to_json(),
            "nodes": self.nodes,
            "complete": self.complete,
            "transverse_only": self.transverse_only,
            "status": self.status,
            "found": [e.to_json() for e in self.found],
            "excluded": [e.to_json() for e in self.excluded],
        }


class _OutOfBudget(Exception):
    pass


class _Searcher:
    def __init__(self, h: LinearHypergraph, spec: PatternSpec, budget: int):
        self.sets = [frozenset(e) for e in h.edges]
        self.pair = h.pair_index
        self.nr, self.nc, self.t = spec.n_rows, spec.n_cols, spec.t
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        if self.nodes % PROGRESS_EVERY == 0:
            log.info("search: %d nodes", self.nodes)

    @property
    def paired(self) -> bool:
        return self.t <= self.nr - 2

    def estimate(self) -> int:
        E = len(self.sets)
        if self.paired:
            return E * E * self.nr**self.nr
        return comb(E, self.nr) * E

    def configurations(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        if self.paired:
            yield from self._paired()
        else:
            yield from self._generic()

    def _disjoint(self, cands, k: int, used=frozenset(), zeros=None, total=None):
        """Increasing k-tuples of pairwise disjoint edges from ``cands``.

        With ``zeros`` given, the zero counts of the chosen edges must sum to ``total``.
        """
        sets = self.sets
        chosen: list[int] = []

        def rec(start, used, zsum):
            if len(chosen) == k:
                if zeros is None or zsum == total:
                    yield tuple(chosen)
                return
            for i in range(start, len(cands) - (k - len(chosen)) + 1):
                e = cands[i]
                z = 0 if zeros is None else zeros[i]
                if zeros is not None and zsum + z > total:
                    continue
                s = sets[e]
                if not used.isdisjoint(s):
                    continue
                self.tick()
                chosen.append(e)
                yield from rec(i + 1, used | s, zsum + z)
                chosen.pop()

        yield from rec(0, used, 0)

    def _paired(self):
        sets, pair, nc, t = self.sets, self.pair, self.nc, self.t
        E = len(sets)
        for a in range(E):
            self.tick()
            Ra = sets[a]
            for b in range(a + 1, E):
                Rb = sets[b]
                if not Ra.isdisjoint(Rb):
                    continue
                self.tick()
                cand = set()
                for u in Ra:
                    for w in Rb:
                        e = pair.get((u, w) if u < w else (w, u))
                        if e is not None:
                            cand.add(e)
                if len(cand) < nc:
                    continue
                base = Ra | Rb
                for cols in self._disjoint(sorted(cand), nc):
                    rest, zeros = self._rest_rows(a, b, base, cols)
                    for more in self._disjoint(rest, self.nr - 2, base, zeros, t):
                        yield (a, b) + more, cols

    def _rest_rows(self, a: int, b: int, base: frozenset, cols: tuple[int, ...]):
        sets, pair, nc, t = self.sets, self.pair, self.nc, self.t
        col_of = {}
        for j, c in enumerate(cols):
            for v in sets[c]:
                col_of[v] = j
        skip = {a, b, *cols}
        if nc - t >= 2:
            # every remaining row meets two columns off the first two rows
            off = [[v for v in sets[c] if v not in base] for c in cols]
            cands = set()
            for j in range(nc):
                for j2 in range(j + 1, nc):
                    for x in off[j]:
                        for y in off[j2]:
                            e = pair.get((x, y) if x < y else (y, x))
                            if e is not None:
                                cands.add(e)
            cands -= skip
        else:
            cands = set(range(len(sets))) - skip
        rest, zeros = [], []
        for e in sorted(cands):
            s = sets[e]
            if not s.isdisjoint(base):
                continue
            z = nc - len({col_of[v] for v in s if v in col_of})
            # a and b are the two least-indexed full rows
            if z > t or (z == 0 and e < b):
                continue
            rest.append(e)
            zeros.append(z)
        return rest, zeros

    def _generic(self):
        sets, nr, t = self.sets, self.nr, self.t
        E = len(sets)
        for rows in self._disjoint(list(range(E)), nr):
            row_of = {}
            for i, e in enumerate(rows):
                for v in sets[e]:
                    row_of[v] = i
            cands, zeros = [], []
            rowset = set(rows)
            for e in range(E):
                if e in rowset:
                    continue
                z = nr - len({row_of[v] for v in sets[e] if v in row_of})
                if z <= t:
                    cands.append(e)
                    zeros.append(z)
            for cols in self._disjoint(cands, self.nc, frozenset(), zeros, t):
                yield rows, cols


def _zero_cells(h: LinearHypergraph, rows, cols) -> set[tuple[int, int]]:
    return {
        (i, j)
        for i, R in enumerate(rows)
        for j, C in enumerate(cols)
        if set(h.edges[R]).isdisjoint(h.edges[C])
    }


def _align(rows, cols, zeros, holes, nr, nc):
    """Reorder rows/cols (and transpose if square) so the empty cells are exactly ``holes``."""
    target = [frozenset(i for i in range(nr) if (i, j) in holes) for j in range(nc)]
    options = [(rows, cols, zeros)]
    if nr == nc:
        options.append((cols, rows, {(j, i) for i, j in zeros}))
    for R, C, Z in options:
        for perm in permutations(range(nr)):
            sig = [frozenset(i for i in range(nr) if (perm[i], j) in Z) for j in range(nc)]
            assign, used = [], set()
            for want in target:
                j = next((j for j in range(nc) if j not in used and sig[j] == want), None)
                if j is None:
                    break
                used.add(j)
                assign.append(j)
            else:
                return tuple(R[perm[i]] for i in range(nr)), tuple(C[j] for j in assign)
    return None


def _embedding(h: LinearHypergraph, rows, cols) -> Embedding:
    rsets = [set(h.edges[R]) for R in rows]
    csets = [set(h.edges[C]) for C in cols]
    cross = {}
    for i, rs in enumerate(rsets):
        for j, cs in enumerate(csets):
            common = rs & cs
            if common:
                (cross[(i, j)],) = common
    holes = [(i, j) for i in range(len(rows)) for j in range(len(cols)) if (i, j) not in cross]
    in_cols = set().union(*csets)
    in_rows = set().union(*rsets)
    # spare vertices are handed to the holes of their row (column) in order
    a_of, b_of = {}, {}
    for i, rs in enumerate(rsets):
        a_of.update(zip([c for c in holes if c[0] == i], sorted(rs - in_cols)))
    for j, cs in enumerate(csets):
        b_of.update(zip([c for c in holes if c[1] == j], sorted(cs - in_rows)))
    fillers = {c: (a_of[c], b_of[c]) for c in holes}
    return Embedding(tuple(rows), tuple(cols), cross, fillers)


def _materialize(h: LinearHypergraph, spec: PatternSpec, rows, cols) -> Embedding | None:
    if spec.kind == "punctured" and spec.holes is not None:
        aligned = _align(rows, cols, _zero_cells(h, rows, cols), spec.holes, spec.n_rows, spec.n_cols)
        if aligned is None:
            return None
        rows, cols = aligned
    emb = _embedding(h, rows, cols)
    problems = validate_embedding(h, emb, spec)
    if problems:
        raise AssertionError(f"search produced an invalid embedding: {problems}")
    return emb


def _searcher(h: LinearHypergraph, spec: PatternSpec, budget: int | None) -> _Searcher:
    if budget is None:
        budget = default_budget()
    if budget <= 0:
        raise ValueError("budget must be positive")
    return _Searcher(h, spec, budget)


def find_embedding(h: LinearHypergraph, spec: PatternSpec, budget: int | None = None):
    """First embedding in search order, None if there is none, or BudgetExhausted."""
    s = _searcher(h, spec, budget)
    try:
        for rows, cols in s.configurations():
            emb = _materialize(h, spec, rows, cols)
            if emb is not None:
                return emb
    except _OutOfBudget:
        return BudgetExhausted(s.nodes)
    return None


def enumerate_embeddings(h: LinearHypergraph, spec: PatternSpec, budget: int | None = None):
    """Distinct embeddings, nodes explored, and whether the search ran to completion."""
    s = _searcher(h, spec, budget)
    seen, out = set(), []
    try:
        for rows, cols in s.configurations():
            emb = _materialize(h, spec, rows, cols)
            if emb is None or emb.key() in seen:
                continue
            seen.add(emb.key())
            out.append(emb)
    except _OutOfBudget:
        return out, s.nodes, False
    return out, s.nodes, True


@dataclass(frozen=True)
class Classification:
    transverse: bool
    holes_off_vertex_set: bool


def classify_embedding(h: LinearHypergraph, e: Embedding) -> Classification:
    """Transversality of the supporting lines and whether every hole point lies off the vertex set."""
    if not h.has_geometry:
        raise NoGeometry(f"{h.model} hypergraph carries no supporting lines")
    rl = [h.lines[i] for i in e.row_edges]
    cl = [h.lines[j] for j in e.col_edges]
    pts = {(i, j): intersect(a, b) for i, a in enumerate(rl) for j, b in enumerate(cl)}
    transverse = len(set(pts.values())) == len(pts)
    off = all(pts[c].at_infinity or h.vertex_at(pts[c].affine()) is None for c in e.holes)
    return Classification(transverse, off)


def exhaustive_certify(
    h: LinearHypergraph,
    spec: PatternSpec,
    transverse_only: bool = False,
    budget: int | None = None,
    max_estimate: int = MAX_ESTIMATE,
) -> Certificate:
    """Enumerate every embedding; with ``transverse_only``, non-transverse or
    on-vertex-hole copies go to ``excluded`` instead of ``found``."""
    s = _Searcher(h, spec, 1)
    if s.estimate() > max_estimate:
        raise InstanceTooLarge(f"estimated search tree {s.estimate()} exceeds {max_estimate}")
    if transverse_only and not h.has_geometry:
        raise NoGeometry(f"{h.model} hypergraph carries no supporting lines")
    embs, nodes, complete = enumerate_embeddings(h, spec, budget)
    cert = Certificate(spec, nodes, complete, transverse_only)
    for emb in embs:
        if h.has_geometry:
            c = classify_embedding(h, emb)
            emb = replace(emb, transverse=c.transverse, holes_off_vertex_set=c.holes_off_vertex_set)
        if transverse_only and not (emb.transverse and emb.holes_off_vertex_set):
            cert.excluded.append(emb)
        else:
            cert.found.append(emb)
    return cert


def validate_embedding(h: LinearHypergraph, e: Embedding, spec: PatternSpec | None = None) -> list[str]:
    """Re-derive every incidence of ``e`` from the edge list; return the problems found."""
    problems = []
    rows = [set(h.edges[i]) for i in e.row_edges]
    cols = [set(h.edges[j]) for j in e.col_edges]
    nr, nc = len(rows), len(cols)
    if spec is not None:
        if (nr, nc) != (spec.n_rows, spec.n_cols):
            problems.append(f"shape {nr}x{nc} != {spec.n_rows}x{spec.n_cols}")
        if spec.holes is not None and e.holes != spec.holes:
            problems.append(f"holes {sorted(e.holes)} != {sorted(spec.holes)}")
        if spec.holes is None and len(e.holes) != spec.t:
            problems.append(f"{len(e.holes)} holes, expected {spec.t}")
    ids = list(e.row_edges) + list(e.col_edges)
    if len(set(ids)) != len(ids):
        problems.append("edges repeated")
    for group, name in ((rows, "rows"), (cols, "cols")):
        for x in range(len(group)):
            for y in range(x + 1, len(group)):
                if group[x] & group[y]:
                    problems.append(f"{name} {x} and {y} intersect")
    for i in range(nr):
        for j in range(nc):
            common = rows[i] & cols[j]
            if (i, j) in e.filler_vertices:
                if common:
                    problems.append(f"hole ({i},{j}) has common vertices {sorted(common)}")
                if (i, j) in e.cross_vertices:
                    problems.append(f"({i},{j}) is both hole and cross")
            elif common != {e.cross_vertices.get((i, j))}:
                problems.append(f"cell ({i},{j}): row/col share {sorted(common)}, recorded {e.cross_vertices.get((i, j))}")
    cross = list(e.cross_vertices.values())
    if len(set(cross)) != len(cross):
        problems.append("cross vertices not distinct")
    all_cols = set().union(*cols) if cols else set()
    all_rows = set().union(*rows) if rows else set()
    fill = []
    for (i, j), (a, b) in e.filler_vertices.items():
        if a not in rows[i] or a in all_cols:
            problems.append(f"filler a at ({i},{j}) is not private to row {i}")
        if b not in cols[j] or b in all_rows:
            problems.append(f"filler b at ({i},{j}) is not private to column {j}")
        fill += [a, b]
    if len(set(fill)) != len(fill) or set(fill) & set(cross):
        problems.append("filler vertices collide")
    return problems
