"""Linear hypergraphs with a pair index, plus JSON persistence.

The pair index maps each unordered vertex pair ``(u, v)`` with ``u < v``
to the single edge containing it.  Linearity is enforced when edges are
added and can be re-audited from the edge list alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable

from .errors import BoundViolated, LinearityViolation, NotUniform, ParseError
from .ff import Field, element_from_json, make_field
from .geom import AffinePoint, Line, line_from_json, point_from_json


@dataclass(frozen=True)
class Vertex:
    id: int
    tag: str
    payload: Any = None  # AffinePoint, (fiber index, FieldElement), or None

    def payload_json(self):
        if isinstance(self.payload, AffinePoint):
            return self.payload.to_json()
        if isinstance(self.payload, tuple):
            i, y = self.payload
            return [i, y.to_json()]
        return self.payload


def pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class LinearHypergraph:
    """An r-uniform hypergraph whose edges are sorted vertex-id tuples."""

    def __init__(self, r: int, field: Field | None = None, model: str = "custom", params: dict | None = None):
        self.r = r
        self.field = field
        self.model = model
        self.params = dict(params or {})
        self.vertices: list[Vertex] = []
        self.edges: list[tuple[int, ...]] = []
        self.lines: list[Line | None] = []
        self.pair_index: dict[tuple[int, int], int] = {}
        self._points: dict[AffinePoint, int] = {}
        self._incidence: list[list[int]] | None = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def meta(self) -> dict:
        F = self.field
        return {
            "model": self.model,
            "r": self.r,
            "p": F.p if F else None,
            "k": F.k if F else None,
            "modulus": list(F.modulus) if F else None,
            "params": self.params,
        }

    def add_vertex(self, tag: str, payload=None) -> int:
        vid = len(self.vertices)
        self.vertices.append(Vertex(vid, tag, payload))
        if isinstance(payload, AffinePoint):
            self._points[payload] = vid
        return vid

    def add_edge(self, ids: Iterable[int], line: Line | None = None, check: bool = True) -> int:
        """Append an edge.  With ``check=False`` violations are stored for later audit."""
        edge = tuple(sorted(ids))
        idx = len(self.edges)
        pairs = list(combinations(edge, 2))
        if check:
            if len(edge) != self.r or len(set(edge)) != self.r:
                raise NotUniform(f"edge {edge} does not have {self.r} distinct vertices")
            for pr in pairs:
                if pr in self.pair_index:
                    raise LinearityViolation(pr, self.pair_index[pr])
        for pr in pairs:
            self.pair_index.setdefault(pr, idx)
        self.edges.append(edge)
        self.lines.append(line)
        self._incidence = None
        return idx

    @property
    def has_geometry(self) -> bool:
        return bool(self.lines) and all(l is not None for l in self.lines)

    def vertex_at(self, pt: AffinePoint) -> int | None:
        return self._points.get(pt)

    def incidence(self) -> list[list[int]]:
        """Edge indices through each vertex."""
        if self._incidence is None:
            inc: list[list[int]] = [[] for _ in self.vertices]
            for i, e in enumerate(self.edges):
                for v in e:
                    inc[v].append(i)
            self._incidence = inc
        return self._incidence

    def __eq__(self, other):
        if not isinstance(other, LinearHypergraph):
            return NotImplemented
        return (
            self.meta == other.meta
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.lines == other.lines
        )

    def __repr__(self):
        return f"<LinearHypergraph {self.model} r={self.r} n={self.n} |E|={len(self.edges)}>"


@dataclass
class LinearityReport:
    ok: bool
    pair: tuple[int, int] | None = None
    first_edge: int | None = None
    second_edge: int | None = None

    def __bool__(self):
        return self.ok


def check_linear(h: LinearHypergraph) -> LinearityReport:
    """Rebuild the pair map from the edge list and report the first shared pair."""
    seen: dict[tuple[int, int], int] = {}
    for i, e in enumerate(h.edges):
        for pr in combinations(sorted(set(e)), 2):
            if pr in seen:
                return LinearityReport(False, pr, seen[pr], i)
            seen[pr] = i
    if seen != h.pair_index:
        # stale index without a shared pair; name any differing key
        bad = next(iter(set(seen.items()) ^ set(h.pair_index.items())))
        return LinearityReport(False, bad[0], h.pair_index.get(bad[0]), seen.get(bad[0]))
    return LinearityReport(True)


def nonuniform_edges(h: LinearHypergraph) -> list[int]:
    return [i for i, e in enumerate(h.edges) if len(set(e)) != h.r or len(e) != h.r]


@dataclass
class BoundReport:
    edges: int
    bound: Fraction
    n: int
    r: int

    @property
    def tight(self) -> bool:
        return self.edges == self.bound


def bound_check(h: LinearHypergraph) -> BoundReport:
    """Pair-count bound |E| <= n(n-1) / (r(r-1)) for linear hypergraphs."""
    n, r = h.n, h.r
    bound = Fraction(n * (n - 1), r * (r - 1))
    rep = BoundReport(len(h.edges), bound, n, r)
    if rep.edges > bound:
        raise BoundViolated(f"{rep.edges} edges exceed pair-count bound {bound}")
    return rep


def degree_profile(h: LinearHypergraph) -> dict[int, int]:
    deg = {v.id: 0 for v in h.vertices}
    for e in h.edges:
        for v in e:
            deg[v] += 1
    return deg


# --- JSON -----------------------------------------------------------------

def to_document(h: LinearHypergraph) -> dict:
    doc = {
        "meta": h.meta,
        "vertices": [{"id": v.id, "tag": v.tag, "payload": v.payload_json()} for v in h.vertices],
        "edges": [list(e) for e in h.edges],
    }
    if h.has_geometry:
        doc["lines"] = [l.to_json() for l in h.lines]
    return doc


def dump_json(doc: dict) -> str:
    """Deterministic JSON text shared by every artifact writer."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def dumps(h: LinearHypergraph, run_config: dict | None = None) -> str:
    doc = to_document(h)
    if run_config is not None:
        doc["run_config"] = run_config
    return dump_json(doc)


def from_document(doc: dict) -> LinearHypergraph:
    try:
        meta = doc["meta"]
        F = make_field(meta["p"], meta["k"], meta["modulus"]) if meta.get("p") is not None else None
        h = LinearHypergraph(int(meta["r"]), F, meta.get("model", "custom"), meta.get("params") or {})
        for i, v in enumerate(doc["vertices"]):
            if v["id"] != i:
                raise ParseError(f"vertex ids must be dense and ordered, got {v['id']} at {i}")
            h.add_vertex(v["tag"], _payload_from_json(F, v["tag"], v.get("payload")))
        lines = doc.get("lines")
        if lines is not None and len(lines) != len(doc["edges"]):
            raise ParseError("lines and edges differ in length")
        for i, e in enumerate(doc["edges"]):
            if any(not 0 <= int(x) < h.n for x in e):
                raise ParseError(f"edge {i} references an unknown vertex")
            line = line_from_json(F, lines[i]) if lines is not None else None
            h.add_edge([int(x) for x in e], line, check=False)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed hypergraph document: {exc}") from exc
    return h


def _payload_from_json(F: Field | None, tag: str, data):
    if data is None or F is None:
        return data
    if tag.startswith("fiber"):
        return (int(data[0]), element_from_json(F, data[1]))
    return point_from_json(F, data)


def loads(text: str) -> LinearHypergraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    return from_document(doc)


def save(h: LinearHypergraph, path, run_config: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(h, run_config))


def load(path) -> LinearHypergraph:
    with open(path) as fh:
        return loads(fh.read())
