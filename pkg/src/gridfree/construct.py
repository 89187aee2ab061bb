"""The three hypergraph families: conic model, parallel-layer model, partite line model."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonPrimeForFR, NotEnoughNonsquares, TooManyLayers
from .ff import Field, FieldElement, nonsquares
from .geom import (
    HORIZONTAL,
    AffinePoint,
    Line,
    ProjPoint,
    direction,
    enumerate_lines,
    intersect,
    parabola_meet,
)
from .hyper import LinearHypergraph

MODELS = ("hrq", "parallel", "fr")
TIE_RULES = ("min-x", "max-x")


@dataclass(frozen=True)
class ConstructionParams:
    r: int
    field: Field
    model: str = "hrq"
    alphas: tuple[FieldElement, ...] | None = None
    tie_rule: str = "min-x"
    parallel_direction: str | ProjPoint = HORIZONTAL

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.r < 3:
            raise ValueError("uniformity r must be at least 3")
        if self.tie_rule not in TIE_RULES:
            raise ValueError(f"tie rule must be one of {TIE_RULES}")
        if self.alphas is not None:
            object.__setattr__(self, "alphas", tuple(self.field(a) for a in self.alphas))


def expected_counts(model: str, r: int, q: int) -> tuple[int, int]:
    """(|V|, |E|) that each family must have."""
    if model == "hrq":
        return r * q, (q * q + 2 * q - 1) // 2
    return r * q, q * q


def _sorted_edges(edges):
    return sorted(edges, key=lambda item: item[0])


def build_hrq(params: ConstructionParams) -> LinearHypergraph:
    """Horizontal nonsquare layers plus the parabola; one edge per nonhorizontal line meeting it."""
    F, r = params.field, params.r
    if params.alphas is None:
        alphas = nonsquares(F, r - 1)
    else:
        alphas = list(params.alphas)
        if len(alphas) > (F.q - 1) // 2:
            raise NotEnoughNonsquares(f"{F} has only {(F.q - 1) // 2} nonsquares")
        if len(alphas) != r - 1 or len(set(alphas)) != r - 1:
            raise ValueError(f"need {r - 1} distinct alphas, got {alphas}")
        if any(a.is_square() for a in alphas):
            raise ValueError("every alpha must be a nonsquare")

    h = LinearHypergraph(r, F, "hrq", {
        "alphas": [a.to_json() for a in alphas],
        "tie_rule": params.tie_rule,
    })
    elems = list(F.elements())
    for t, alpha in enumerate(alphas, 1):
        for x in elems:
            h.add_vertex(f"A-layer({t})", AffinePoint(x, alpha))
    for x in elems:
        h.add_vertex("B-conic", AffinePoint(x, x * x))

    edges = []
    for line in enumerate_lines(F, HORIZONTAL):
        meet = parabola_meet(line)
        if not meet:
            continue
        conic_pt = meet[0] if params.tie_rule == "min-x" else meet[-1]
        ids = [h.vertex_at(line.at_y(alpha)) for alpha in alphas]
        ids.append(h.vertex_at(conic_pt))
        edges.append((tuple(sorted(ids)), line))
    for ids, line in _sorted_edges(edges):
        h.add_edge(ids, line)
    return h


def _layer_lines(F: Field, dirn: ProjPoint, r: int) -> list[Line]:
    # a x + b y = s for the r least offsets s
    base = Line.normalized(-dirn.Y, dirn.X, F.zero)
    offsets = list(F.elements())[:r]
    return [Line(base.a, base.b, -s) for s in offsets]


def _points_on(line: Line) -> list[AffinePoint]:
    F = line.field
    if line.is_vertical:
        return sorted(line.at_y(y) for y in F.elements())
    return sorted(line.at_x(x) for x in F.elements())


def build_parallel(params: ConstructionParams) -> LinearHypergraph:
    """r parallel layers; one edge per line not parallel to them, containing all r crossings."""
    F, r = params.field, params.r
    if r > F.q:
        raise TooManyLayers(f"need r <= q distinct parallel lines, got r={r}, q={F.q}")
    dirn = params.parallel_direction
    if isinstance(dirn, str):
        dname = dirn
        dirn = direction(F, dirn)
    else:
        dname = dirn.to_json()
    layers = _layer_lines(F, dirn, r)
    h = LinearHypergraph(r, F, "parallel", {
        "direction": dname,
        "layers": [l.to_json() for l in layers],
    })
    for i, layer in enumerate(layers, 1):
        for pt in _points_on(layer):
            h.add_vertex(f"layer({i})", pt)

    edges = []
    for line in enumerate_lines(F, dirn):
        ids = [h.vertex_at(intersect(line, layer).affine()) for layer in layers]
        edges.append((tuple(sorted(ids)), line))
    for ids, line in _sorted_edges(edges):
        h.add_edge(ids, line)
    return h


def build_fr_model(params: ConstructionParams) -> LinearHypergraph:
    """The partite line model on [r] x Z_q with edges A(y, m)."""
    F, r = params.field, params.r
    if F.k != 1:
        raise NonPrimeForFR(f"the partite line model needs a prime q, got q={F.q}")
    q = F.q
    if r > q:
        # fiber differences 1..r-1 must be invertible mod q
        raise TooManyLayers(f"need r <= q for the partite line model, got r={r}, q={q}")
    h = LinearHypergraph(r, F, "fr", {})
    for i in range(1, r + 1):
        for y in range(q):
            h.add_vertex(f"fiber({i})", (i, F(y)))
    edges = []
    for y in range(q):
        for m in range(q):
            ids = [(i - 1) * q + (y + (i - 1) * m) % q for i in range(1, r + 1)]
            edges.append((tuple(sorted(ids)), None))
    for ids, _ in _sorted_edges(edges):
        h.add_edge(ids)
    return h


def build(params: ConstructionParams) -> LinearHypergraph:
    return {"hrq": build_hrq, "parallel": build_parallel, "fr": build_fr_model}[params.model](params)
