import pytest
from hypothesis import given

from conftest import HIVE_ROWS, HIVE_TYPE, SMALL_TWO
from lrsum.dual_flow import (
    EdgeKey,
    Face,
    Flow,
    Label,
    build_dual_graph,
    canonical_flow,
    check_flow,
    flow_from_json,
    flow_to_filling,
    junction_diversions,
    unit_routes,
)
from lrsum.errors import InvalidInput
from lrsum.hive import Hive, filling_to_hive, hive_to_filling
from lrsum.lr_filling import zero_filling
from strategies import fillings

SMALL_HIVE = Hive(((0,), (2, 3), (3, 5, 6)))


def test_small_capacities():
    g = build_dual_graph(SMALL_HIVE)
    coords = {face: g.coordinates(face) for face in g.faces}
    assert coords == {
        Face("U", 1, 0): (2, 1, 3),
        Face("U", 2, 0): (1, 2, 3),
        Face("D", 2, 0): (2, 1, 3),
        Face("U", 2, 1): (2, 1, 3),
    }


def test_single_face():
    g = build_dual_graph(Hive(((0,), (2, 3))))
    assert g.faces == [Face("U", 1, 0)]
    assert g.coordinates(Face("U", 1, 0)) == (2, 1, 3)


def test_stub_capacities_give_type(example_hive):
    g = build_dual_graph(example_hive)
    for cls, parts in zip(("mu", "nu", "lambda"), HIVE_TYPE):
        assert tuple(e.capacity for e in g.stubs(cls)) == parts


def test_graph_rejects_invalid_hive():
    rows = [list(r) for r in HIVE_ROWS]
    rows[2][1] = 35
    with pytest.raises(InvalidInput):
        build_dual_graph(Hive(rows))


def test_small_canonical_flow():
    fl = canonical_flow(SMALL_TWO)
    assert fl.amount(EdgeKey("nu", 2, 1), Label.content(1)) == 2
    assert fl.load(EdgeKey("lambda", 1, 1)) == {Label.mu(1): 2, Label.content(1): 1}
    assert fl.load(EdgeKey("lambda", 2, 2)) == {Label.mu(2): 1, Label.content(1): 1, Label.content(2): 1}
    assert sorted(junction_diversions(fl)) == [(1, 1, 1), (1, 2, 1), (2, 2, 1)]
    assert check_flow(fl.graph, fl).ok


def test_zero_filling_flow_is_mu_only():
    f = zero_filling((4, 2, 1))
    fl = canonical_flow(f)
    assert all(lab.is_mu for load in fl.loads.values() for lab in load)
    assert [fl.total(e.key) for e in fl.graph.stubs("lambda")] == [4, 2, 1]
    assert flow_to_filling(fl) == f


def test_example_flow_out_of_lambda_stubs(example_hive):
    fl = canonical_flow(hive_to_filling(example_hive))
    ones = [fl.amount(e.key, Label.content(1)) for e in fl.graph.stubs("lambda")]
    assert ones == [8, 0, 2, 1, 1]


def test_example_flow_gives_back_k(example_hive):
    f = flow_to_filling(canonical_flow(hive_to_filling(example_hive)))
    assert f.kij(2, 4) == 2
    assert filling_to_hive(f) == example_hive


def test_moved_unit_breaks_conservation_at_both_ends():
    fl = canonical_flow(SMALL_TWO)
    key = EdgeKey("mu", 2, 1)
    assert fl.amount(key, Label.mu(2)) == 1
    loads = dict(fl.loads)
    loads[key] = {**loads[key], Label.mu(2): 0, Label.content(2): 1}
    bad = Flow(fl.graph, loads)
    report = check_flow(bad.graph, bad)
    failing = {(f.i, f.j) for f in report.failures if f.condition == "conservation"}
    e = fl.graph.edges[key]
    assert failing == {(e.tail.p, e.tail.q), (e.head.p, e.head.q)}
    with pytest.raises(InvalidInput):
        flow_to_filling(bad)


def test_capacity_and_saturation_failures():
    fl = canonical_flow(SMALL_TWO)
    key = EdgeKey("lambda", 1, 1)
    over = Flow(fl.graph, {**fl.loads, key: {**fl.load(key), Label.mu(1): 3}})
    assert "capacity" in check_flow(over.graph, over).conditions()
    under = Flow(fl.graph, {**fl.loads, key: {Label.mu(1): 2}})
    assert "saturation" in check_flow(under.graph, under).conditions()


def test_routing_on_spine_and_left_stub():
    fl = canonical_flow(SMALL_TWO)
    key = EdgeKey("nu", 2, 2)
    stray = Flow(fl.graph, {**fl.loads, key: {Label.content(1): 1}})
    assert "routing" in check_flow(stray.graph, stray).conditions()


def test_flow_json_round_trip():
    fl = canonical_flow(SMALL_TWO)
    items = fl.to_json()
    assert flow_from_json(fl.graph, items) == fl
    assert {item.get("stub") for item in items} >= {"mu1", "mu2", "nu1", "nu2", "lambda1", "lambda2"}
    with pytest.raises(InvalidInput):
        flow_from_json(fl.graph, [{"edge": "nowhere", "loads": {}}])


@given(fillings(rmax=4, top=6))
def test_canonical_flow_properties(f):
    fl = canonical_flow(f)
    g = fl.graph
    assert check_flow(g, fl).ok
    assert all(fl.total(key) == e.capacity for key, e in g.edges.items())
    assert sorted(junction_diversions(fl)) == sorted((c, p, f.kij(c, p)) for p in range(1, f.r + 1) for c in range(1, p + 1))
    assert [fl.total(e.key) for e in g.stubs("mu")] == list(f.mu)
    assert [fl.total(e.key) for e in g.stubs("nu")] == list(f.nu)
    assert [fl.total(e.key) for e in g.stubs("lambda")] == list(f.lam)
    assert flow_to_filling(fl) == f


@given(fillings(rmax=4, top=6))
def test_edge_capacities_from_k(f):
    # Spine and row capacities written directly in terms of the filling.
    g = build_dual_graph(filling_to_hive(f))
    for p in range(1, f.r + 1):
        for q in range(1, p + 1):
            A = sum(f.kij(q, j) for j in range(q, p + 1))
            B = A - f.kij(q, p)
            C = f.mu[p - 1] + sum(f.kij(i, p) for i in range(1, q + 1))
            E = f.mu[p - 1] + sum(f.kij(i, p) for i in range(1, q)) + A
            assert g.edges[EdgeKey("nu", p, q)].capacity == A
            if p > q:
                assert g.edges[EdgeKey("nu", p - 1, q)].capacity == B
                assert g.edges[EdgeKey("mu", p, q)].capacity == C
            assert g.edges[EdgeKey("lambda", p, q)].capacity == E
            assert g.edges[EdgeKey("mu", p, q - 1)].capacity == C - f.kij(q, p)


@given(fillings(rmax=4, top=6))
def test_dual_graph_balance(f):
    g = build_dual_graph(filling_to_hive(f))
    for face in g.faces:
        m, n, l = g.coordinates(face)
        assert m + n == l
        assert sum(e.capacity for e in g.in_edges(face)) == sum(e.capacity for e in g.out_edges(face))


@given(fillings(rmax=4, top=6))
def test_unit_routes_rebuild_the_flow(f):
    fl = canonical_flow(f)
    counted: dict = {}
    for _, label, route in unit_routes(f):
        for key in route:
            counted.setdefault(key, {}).setdefault(label, 0)
            counted[key][label] += 1
    assert counted == fl.loads
