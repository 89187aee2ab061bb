import json

import pytest
from hypothesis import given, settings, strategies as st

from gridfree.construct import ConstructionParams, build
from gridfree.errors import BoundViolated, LinearityViolation, NotUniform, ParseError
from gridfree.ff import make_field
from gridfree.hyper import (
    LinearHypergraph,
    bound_check,
    check_linear,
    degree_profile,
    dumps,
    load,
    loads,
    nonuniform_edges,
    save,
)


def bare(r, n):
    h = LinearHypergraph(r)
    for _ in range(n):
        h.add_vertex("v")
    return h


def test_add_edge_sequence():
    h = bare(3, 6)
    h.add_edge([0, 1, 2])
    assert len(h.edges) == 1 and len(h.pair_index) == 3
    with pytest.raises(LinearityViolation) as exc:
        h.add_edge([0, 1, 5])
    assert exc.value.pair == (0, 1)
    h.add_edge([0, 3, 4])
    assert len(h.edges) == 2


def test_non_uniform_rejected():
    h = bare(3, 4)
    with pytest.raises(NotUniform):
        h.add_edge([0, 1])
    with pytest.raises(NotUniform):
        h.add_edge([0, 0, 1])


def test_check_linear_cases():
    assert check_linear(build(ConstructionParams(3, make_field(5))))
    h = bare(3, 5)
    h.add_edge([0, 1, 2])
    h.add_edge([0, 1, 3], check=False)
    rep = check_linear(h)
    assert not rep and rep.pair == (0, 1) and (rep.first_edge, rep.second_edge) == (0, 1)
    assert check_linear(LinearHypergraph(3))


def test_bound_check():
    rep = bound_check(build(ConstructionParams(3, make_field(5))))
    assert rep.edges == 17 and rep.bound == 35
    h = bare(3, 3)
    h.add_edge([0, 1, 2])
    assert bound_check(h).tight
    h.add_edge([0, 1, 2], check=False)
    with pytest.raises(BoundViolated):
        bound_check(h)


def test_nonuniform_audit():
    h = bare(3, 4)
    h.add_edge([0, 1], check=False)
    assert nonuniform_edges(h) == [0]


@pytest.mark.parametrize("model,r,p,k", [("hrq", 3, 5, 1), ("hrq", 3, 3, 2), ("parallel", 4, 7, 1), ("fr", 3, 7, 1)])
def test_roundtrip(model, r, p, k, tmp_path):
    h = build(ConstructionParams(r, make_field(p, k), model))
    assert loads(dumps(h)) == h
    save(h, tmp_path / "h.json")
    assert load(tmp_path / "h.json") == h
    assert dumps(load(tmp_path / "h.json")) == dumps(h)


def test_document_shape():
    doc = json.loads(dumps(build(ConstructionParams(3, make_field(5))), {"seed": 0}))
    assert set(doc) == {"meta", "vertices", "edges", "lines", "run_config"}
    assert set(doc["meta"]) == {"model", "r", "p", "k", "modulus", "params"}
    assert doc["edges"] == sorted(doc["edges"])
    assert all(e == sorted(e) for e in doc["edges"])


@pytest.mark.parametrize("text", ["not json", "{}", '{"meta": {"r": 3}, "vertices": [], "edges": [[0, 1, 2]]}',
                                  '{"meta": {"r": 3}, "vertices": [{"id": 1, "tag": "v"}], "edges": []}'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        loads(text)


def test_parse_keeps_violations_for_audit():
    h = bare(3, 4)
    h.add_edge([0, 1, 2])
    h.add_edge([0, 1, 3], check=False)
    back = loads(dumps(h))
    assert not check_linear(back)


@pytest.mark.parametrize("model,r,q", [("hrq", 3, 7), ("hrq", 5, 11), ("parallel", 3, 5), ("fr", 4, 7)])
def test_degree_sum(model, r, q):
    h = build(ConstructionParams(r, make_field(q), model))
    assert sum(degree_profile(h).values()) == r * len(h.edges)


@st.composite
def linear_hypergraphs(draw, r=3, n=9):
    h = bare(r, n)
    for _ in range(draw(st.integers(0, 12))):
        e = draw(st.lists(st.integers(0, n - 1), min_size=r, max_size=r, unique=True))
        try:
            h.add_edge(e)
        except LinearityViolation:
            pass
    return h


@settings(max_examples=200)
@given(linear_hypergraphs())
def test_construction_time_check_matches_audit(h):
    assert check_linear(h)
    assert loads(dumps(h)) == h
