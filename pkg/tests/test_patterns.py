from itertools import combinations, permutations

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gridfree.construct import ConstructionParams, build
from gridfree.errors import InstanceTooLarge, LinearityViolation, NoGeometry
from gridfree.ff import make_field
from gridfree.geom import intersect
from gridfree.hyper import LinearHypergraph
from gridfree.patterns import (
    BudgetExhausted,
    Embedding,
    PatternSpec,
    classify_embedding,
    edge_key,
    enumerate_embeddings,
    exhaustive_certify,
    find_embedding,
    validate_embedding,
)


def model(name, r, p, k=1):
    return build(ConstructionParams(r, make_field(p, k), name))


# --- naive oracle ------------------------------------------------------------

def naive_configs(h, spec):
    """Every unordered (rows, cols) pair; checks all set intersections directly."""
    E = [set(e) for e in h.edges]
    nr, nc = spec.n_rows, spec.n_cols
    found = set()

    def disjoint(group):
        return all(not (E[a] & E[b]) for a, b in combinations(group, 2))

    for rows in combinations(range(len(E)), nr):
        if not disjoint(rows):
            continue
        rest = [e for e in range(len(E)) if e not in rows]
        for cols in combinations(rest, nc):
            if not disjoint(cols):
                continue
            zeros = {(i, j) for i, a in enumerate(rows) for j, b in enumerate(cols) if not E[a] & E[b]}
            if spec.kind != "punctured":
                ok = not zeros
            elif spec.holes is None:
                ok = len(zeros) == spec.t
            else:
                ok = aligns(zeros, spec.holes, nr, nc)
            if ok:
                key = frozenset((frozenset(rows), frozenset(cols))) if nr == nc else (frozenset(rows), frozenset(cols))
                found.add(key)
    return found


def aligns(zeros, holes, nr, nc):
    options = [zeros] + ([{(j, i) for i, j in zeros}] if nr == nc else [])
    for Z in options:
        for pr in permutations(range(nr)):
            for pc in permutations(range(nc)):
                if {(pr[i], pc[j]) for i, j in Z} == set(holes):
                    return True
    return False


@st.composite
def small_linear(draw, r=3):
    n = draw(st.integers(7, 12))
    h = LinearHypergraph(r)
    for _ in range(n):
        h.add_vertex("v")
    if draw(st.booleans()) and n >= 9:
        # plant a grid on vertices 0..8 (rows 0-2, 3-5, 6-8)
        for i in range(3):
            h.add_edge([3 * i, 3 * i + 1, 3 * i + 2])
        for j in range(3):
            h.add_edge([j, 3 + j, 6 + j])
    for _ in range(draw(st.integers(0, 12 - len(h.edges)))):
        e = draw(st.lists(st.integers(0, n - 1), min_size=r, max_size=r, unique=True))
        try:
            h.add_edge(e)
        except LinearityViolation:
            pass
    return h


SPECS = [PatternSpec.grid(3), PatternSpec.wicket(3), PatternSpec.punctured(3, t=1), PatternSpec.punctured(3, t=2),
         PatternSpec.punctured(3, t=4)]
HOLE_SPECS = [PatternSpec.punctured(3, holes=[(0, 0)]), PatternSpec.punctured(3, holes=[(0, 0), (1, 1)]),
              PatternSpec.punctured(3, holes=[(0, 0), (0, 1)]), PatternSpec.punctured(3, holes=[(0, 0), (1, 1), (2, 2)])]


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_linear(), st.sampled_from(SPECS))
def test_search_matches_naive_oracle(h, spec):
    embs, _, complete = enumerate_embeddings(h, spec)
    assert complete
    assert {e.key() for e in embs} == naive_configs(h, spec)
    first = find_embedding(h, spec)
    assert (first is None) == (not embs)
    for e in embs:
        assert validate_embedding(h, e, spec) == []


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_linear(), st.sampled_from(HOLE_SPECS))
def test_explicit_holes_match_naive_oracle(h, spec):
    embs, _, _ = enumerate_embeddings(h, spec)
    assert {e.key() for e in embs} == naive_configs(h, spec)
    for e in embs:
        assert e.holes == spec.holes


@settings(max_examples=30, deadline=None)
@given(small_linear(), st.data())
def test_edge_deletion_never_creates_copies(h, data):
    if not h.edges:
        return
    drop = data.draw(st.integers(0, len(h.edges) - 1))
    g = LinearHypergraph(h.r)
    for _ in h.vertices:
        g.add_vertex("v")
    for i, e in enumerate(h.edges):
        if i != drop:
            g.add_edge(e)
    spec = data.draw(st.sampled_from(SPECS))
    before = {edge_key(h, e) for e in enumerate_embeddings(h, spec)[0]}
    after = {edge_key(g, e) for e in enumerate_embeddings(g, spec)[0]}
    assert after <= before


# --- model instances ---------------------------------------------------------

def test_hrq_3_5_has_no_grid():
    h = model("hrq", 3, 5)
    assert find_embedding(h, PatternSpec.grid(3)) is None
    cert = exhaustive_certify(h, PatternSpec.grid(3))
    assert cert.status == "absent" and cert.complete


def test_readding_an_edge_changes_nothing():
    h = model("hrq", 3, 5)
    g = LinearHypergraph(3, h.field, h.model, h.params)
    for v in h.vertices:
        g.add_vertex(v.tag, v.payload)
    order = list(range(1, len(h.edges))) + [0]
    for i in order:
        g.add_edge(h.edges[i], h.lines[i])
    assert find_embedding(g, PatternSpec.grid(3)) is None


@pytest.mark.parametrize("q", [7, 11])
def test_fr_contains_grid(q):
    h = model("fr", 3, q)
    e = find_embedding(h, PatternSpec.grid(3))
    assert isinstance(e, Embedding)
    assert validate_embedding(h, e, PatternSpec.grid(3)) == []


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_hrq_contains_wickets(q):
    p, k = (3, 2) if q == 9 else (q, 1)
    h = model("hrq", 3, p, k)
    e = find_embedding(h, PatternSpec.wicket(3))
    assert e is not None and validate_embedding(h, e, PatternSpec.wicket(3)) == []


def test_budget_exhaustion_is_reported():
    h = model("hrq", 3, 7)
    assert isinstance(find_embedding(h, PatternSpec.grid(3), budget=10), BudgetExhausted)
    cert = exhaustive_certify(h, PatternSpec.grid(3), budget=10)
    assert cert.status == "budget-exhausted" and not cert.complete


def test_env_budget(monkeypatch):
    monkeypatch.setenv("GRIDFREE_MAX_NODES", "5")
    assert isinstance(find_embedding(model("hrq", 3, 7), PatternSpec.grid(3)), BudgetExhausted)


def test_instance_too_large_guard():
    with pytest.raises(InstanceTooLarge):
        exhaustive_certify(model("hrq", 3, 7), PatternSpec.grid(3), max_estimate=10)


def test_transverse_only_needs_geometry():
    with pytest.raises(NoGeometry):
        exhaustive_certify(model("fr", 3, 5), PatternSpec.grid(3), transverse_only=True)


@pytest.mark.parametrize("p,k", [(5, 1), (7, 1), (3, 2)])
def test_parallel_transverse_p31_absent(p, k):
    cert = exhaustive_certify(model("parallel", 3, p, k), PatternSpec.punctured(3, t=1), transverse_only=True)
    assert cert.complete and cert.found == []


def test_validator_catches_tampering():
    h = model("fr", 3, 7)
    e = find_embedding(h, PatternSpec.grid(3))
    bad = Embedding(e.row_edges, e.col_edges, {**e.cross_vertices, (0, 0): e.cross_vertices[(1, 1)]}, {})
    assert validate_embedding(h, bad)
    swapped = Embedding(e.row_edges[:2] + e.col_edges[:1], e.col_edges, e.cross_vertices, {})
    assert validate_embedding(h, swapped)
    assert validate_embedding(h, e, PatternSpec.wicket(3))


def test_punctured_fillers_are_private():
    h = model("hrq", 3, 7)
    emb = find_embedding(h, PatternSpec.punctured(3, t=3))
    assert emb is not None
    assert len(emb.filler_vertices) == 3
    used = list(emb.cross_vertices.values()) + [v for ab in emb.filler_vertices.values() for v in ab]
    assert len(used) == len(set(used)) == 9 + 3
    for (i, j), (a, b) in emb.filler_vertices.items():
        assert a in h.edges[emb.row_edges[i]] and b in h.edges[emb.col_edges[j]]


def _by_line(h):
    return {l: i for i, l in enumerate(h.lines)}


def test_classification_parallel_rows_and_column_share_infinity():
    h = model("parallel", 3, 5)
    idx = _by_line(h)
    verts = [l for l in h.lines if l.is_vertical]
    other = [l for l in h.lines if not l.is_vertical]
    # two vertical rows and a vertical column: the column meets both rows at (0:1:0)
    rows = (idx[verts[0]], idx[verts[1]], idx[other[0]])
    cols = (idx[verts[2]], idx[other[1]], idx[other[2]])
    e = Embedding(rows, cols, {}, {})
    assert classify_embedding(h, e).transverse is False


def test_parallel_columns_alone_keep_transversality():
    h = model("parallel", 3, 5)
    emb = [e for e in exhaustive_certify(h, PatternSpec.grid(3)).found if e.transverse]
    assert emb
    for e in emb:
        pts = [intersect(h.lines[a], h.lines[b]) for a in e.row_edges for b in e.col_edges]
        assert len(set(pts)) == 9


def test_classification_hole_on_unchosen_conic_point():
    h = model("hrq", 3, 7)
    tags = [v.tag for v in h.vertices]
    for a, la in enumerate(h.lines):
        for b, lb in enumerate(h.lines):
            if a >= b or set(h.edges[a]) & set(h.edges[b]):
                continue
            x = intersect(la, lb)
            if x.at_infinity:
                continue
            v = h.vertex_at(x.affine())
            if v is not None and tags[v] == "B-conic":
                e = Embedding((a,), (b,), {}, {(0, 0): (h.edges[a][0], h.edges[b][0])})
                c = classify_embedding(h, e)
                assert c.transverse and c.holes_off_vertex_set is False
                return
    pytest.fail("no disjoint edge pair meeting on the parabola")


def test_pattern_spec_validation():
    with pytest.raises(ValueError):
        PatternSpec("triangle", 3)
    with pytest.raises(ValueError):
        PatternSpec.punctured(3, holes=[(3, 0)])
    with pytest.raises(ValueError):
        PatternSpec("grid", 3, frozenset({(0, 0)}))
    assert PatternSpec.wicket(3).n_cols == 2
    assert PatternSpec.punctured(3, holes=[(0, 1)]).t == 1


def test_embedding_json():
    h = model("fr", 3, 7)
    e = find_embedding(h, PatternSpec.grid(3))
    d = e.to_json()
    assert len(d["cross"]) == 9 and d["fillers"] == []
