"""Weighted dual graph of a hive and labeled flows on it.

Faces of the hive triangulation are the dual vertices:

* ``Up(p, q)``   = triangle (p-1, q), (p, q), (p, q+1)       for 0 <= q < p
* ``Down(p, q)`` = triangle (p-1, q), (p-1, q+1), (p, q+1)   for 0 <= q < p-1

Each hive edge is a dual edge (or a boundary stub) keyed by the edge it
crosses:

* ``("mu", p, q)``     crosses (p-1, q)-(p, q);       Down(p, q-1) -> Up(p, q)
* ``("nu", p, c)``     crosses (p, c-1)-(p, c);       Down(p+1, c-1) -> Up(p, c-1)
* ``("lambda", p, c)`` crosses (p-1, c-1)-(p, c);     Up(p, c-1) -> Down(p, c-1)

Stubs: ``("mu", p, 0)`` enters on the left, ``("nu", r, c)`` from the
bottom, ``("lambda", p, p)`` leaves on the right. Row p is the strip of
faces between hive rows p-1 and p; spine c is the column of faces
Up(., c-1), Down(., c-1). Spine c meets row p at the junction Down(p, c-1)
(or, for p = c, at the right stub of row c).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .errors import InvalidInput
from .hive import Hive, filling_to_hive, hive_type, require_valid_hive
from .lr_filling import LRFilling, require_valid
from .partition import Partition
from .report import ValidationReport

CLASSES = ("mu", "nu", "lambda")


class Face(NamedTuple):
    kind: str  # "U" or "D"
    p: int
    q: int

    def __str__(self) -> str:
        return f"{self.kind}({self.p},{self.q})"


class EdgeKey(NamedTuple):
    cls: str
    p: int
    c: int

    def __str__(self) -> str:
        return f"{self.cls}({self.p},{self.c})"


@dataclass(frozen=True, order=True)
class Label:
    """A flow strand: ``Label.mu(p)`` carries mu_p, ``Label.content(c)`` carries the c's."""

    kind: int  # 0 = mu strand, 1 = content
    index: int

    @classmethod
    def mu(cls, p: int) -> "Label":
        return cls(0, p)

    @classmethod
    def content(cls, c: int) -> "Label":
        return cls(1, c)

    @property
    def is_mu(self) -> bool:
        return self.kind == 0

    def __str__(self) -> str:
        return f"mu{self.index}" if self.is_mu else f"c{self.index}"

    def __repr__(self) -> str:
        return f"Label.{'mu' if self.is_mu else 'content'}({self.index})"

    @classmethod
    def parse(cls, text: str) -> "Label":
        if text.startswith("mu"):
            return cls.mu(int(text[2:]))
        if text.startswith("c"):
            return cls.content(int(text[1:]))
        raise InvalidInput(f"unknown flow label {text!r}")


@dataclass(frozen=True)
class DualEdge:
    key: EdgeKey
    tail: Face | None
    head: Face | None
    capacity: int

    @property
    def cls(self) -> str:
        return self.key.cls

    @property
    def is_stub(self) -> bool:
        return self.tail is None or self.head is None


def faces(r: int) -> list[Face]:
    out = []
    for p in range(1, r + 1):
        for q in range(p):
            out.append(Face("U", p, q))
            if q < p - 1:
                out.append(Face("D", p, q))
    return out


def edge_keys(r: int) -> list[EdgeKey]:
    keys = []
    for p in range(1, r + 1):
        for q in range(p):
            keys.append(EdgeKey("mu", p, q))
        for c in range(1, p + 1):
            keys.append(EdgeKey("nu", p, c))
            keys.append(EdgeKey("lambda", p, c))
    return keys


def _endpoints(key: EdgeKey, r: int) -> tuple[Face | None, Face | None]:
    cls, p, c = key
    if cls == "mu":
        return (None if c == 0 else Face("D", p, c - 1)), Face("U", p, c)
    if cls == "nu":
        return (None if p == r else Face("D", p + 1, c - 1)), Face("U", p, c - 1)
    return Face("U", p, c - 1), (None if c == p else Face("D", p, c - 1))


def _hive_capacity(key: EdgeKey, h) -> int:
    cls, p, c = key
    if cls == "mu":
        return h[p][c] - h[p - 1][c]
    if cls == "nu":
        return h[p][c] - h[p][c - 1]
    return h[p][c] - h[p - 1][c - 1]


def face_edges(face: Face) -> dict[str, EdgeKey]:
    """The one edge of each class incident to a face."""
    kind, p, q = face
    if kind == "U":
        return {"mu": EdgeKey("mu", p, q), "nu": EdgeKey("nu", p, q + 1), "lambda": EdgeKey("lambda", p, q + 1)}
    return {"mu": EdgeKey("mu", p, q + 1), "nu": EdgeKey("nu", p - 1, q + 1), "lambda": EdgeKey("lambda", p, q + 1)}


@dataclass(frozen=True)
class WeightedDualGraph:
    r: int
    edges: dict[EdgeKey, DualEdge]
    type: tuple[Partition, Partition, Partition]

    @property
    def faces(self) -> list[Face]:
        return faces(self.r)

    def in_edges(self, face: Face) -> list[DualEdge]:
        return [self.edges[k] for k in face_edges(face).values() if self.edges[k].head == face]

    def out_edges(self, face: Face) -> list[DualEdge]:
        return [self.edges[k] for k in face_edges(face).values() if self.edges[k].tail == face]

    def coordinates(self, face: Face) -> tuple[int, int, int]:
        """(mu, nu, lambda) capacities of the face's three edges."""
        e = face_edges(face)
        return tuple(self.edges[e[cls]].capacity for cls in CLASSES)

    def stubs(self, cls: str) -> list[DualEdge]:
        """Boundary stubs of one class, ordered by part index."""
        r = self.r
        if cls == "mu":
            keys = [EdgeKey("mu", p, 0) for p in range(1, r + 1)]
        elif cls == "nu":
            keys = [EdgeKey("nu", r, c) for c in range(1, r + 1)]
        else:
            keys = [EdgeKey("lambda", p, p) for p in range(1, r + 1)]
        return [self.edges[k] for k in keys]


def build_dual_graph(H: Hive) -> WeightedDualGraph:
    require_valid_hive(H)
    r = H.r
    edges = {}
    for key in edge_keys(r):
        tail, head = _endpoints(key, r)
        edges[key] = DualEdge(key, tail, head, _hive_capacity(key, H.h))
    return WeightedDualGraph(r, edges, hive_type(H))


@dataclass(frozen=True)
class Flow:
    """Sparse labeled flow: per dual edge, the nonzero amount carried by each label."""

    graph: WeightedDualGraph
    loads: dict[EdgeKey, dict[Label, int]] = field(default_factory=dict)

    def load(self, key: EdgeKey) -> dict[Label, int]:
        return self.loads.get(key, {})

    def amount(self, key: EdgeKey, label: Label) -> int:
        return self.loads.get(key, {}).get(label, 0)

    def total(self, key: EdgeKey) -> int:
        return sum(self.load(key).values())

    def to_json(self) -> list[dict]:
        out = []
        for key in edge_keys(self.graph.r):
            e = self.graph.edges[key]
            item = {"edge": str(key), "class": key.cls, "capacity": e.capacity}
            if e.is_stub:
                item["face_a"] = str(e.head if e.tail is None else e.tail)
                item["stub"] = stub_name(key)
                item["direction"] = "in" if e.tail is None else "out"
            else:
                item["face_a"], item["face_b"] = str(e.tail), str(e.head)
            item["loads"] = {str(lab): amt for lab, amt in sorted(self.load(key).items())}
            out.append(item)
        return out


def stub_name(key: EdgeKey) -> str:
    return f"{key.cls}{key.c if key.cls == 'nu' else key.p}"


def _clean(loads: dict[EdgeKey, dict[Label, int]]) -> dict[EdgeKey, dict[Label, int]]:
    return {k: {lab: a for lab, a in sorted(v.items()) if a != 0} for k, v in loads.items() if any(v.values())}


def canonical_flow(f: LRFilling) -> Flow:
    """Row p carries mu_p left to right; the c's climb spine c and k_{cp} of them turn into row p."""
    require_valid(f)
    g = build_dual_graph(filling_to_hive(f))
    r = f.r

    def spine_amount(p, c):
        return sum(f.kij(c, j) for j in range(1, p + 1))

    loads: dict[EdgeKey, dict[Label, int]] = {}
    for p in range(1, r + 1):
        row_base = {Label.mu(p): f.mu[p - 1]}
        for q in range(p):
            load = dict(row_base)
            for i in range(1, q + 1):
                load[Label.content(i)] = f.kij(i, p)
            loads[EdgeKey("mu", p, q)] = load
        for c in range(1, p + 1):
            loads[EdgeKey("nu", p, c)] = {Label.content(c): spine_amount(p, c)}
            load = dict(row_base)
            for i in range(1, c):
                load[Label.content(i)] = f.kij(i, p)
            load[Label.content(c)] = spine_amount(p, c)
            loads[EdgeKey("lambda", p, c)] = load
    return Flow(g, _clean(loads))


def unit_route(r: int, row: int, label: Label) -> list[EdgeKey]:
    """Edges crossed by one unit of the canonical flow that ends in ``row``.

    A mu unit runs along its row from the left stub; a unit of content c
    climbs spine c from the bottom stub, turns at the junction with the
    row and runs along the row to the right stub.
    """
    route = []
    start = 0 if label.is_mu else label.index
    if not label.is_mu:
        c = label.index
        for t in range(r, row - 1, -1):
            route += [EdgeKey("nu", t, c), EdgeKey("lambda", t, c)]
    for q in range(start, row):
        route += [EdgeKey("mu", row, q), EdgeKey("lambda", row, q + 1)]
    return route


def unit_routes(f: LRFilling) -> Iterator[tuple[int, Label, list[EdgeKey]]]:
    """One (row, label, route) per box of the filling, inner boxes included."""
    require_valid(f)
    for p in range(1, f.r + 1):
        for _ in range(f.mu[p - 1]):
            yield p, Label.mu(p), unit_route(f.r, p, Label.mu(p))
        for c in range(1, p + 1):
            for _ in range(f.kij(c, p)):
                yield p, Label.content(c), unit_route(f.r, p, Label.content(c))


def check_flow(g: WeightedDualGraph, fl: Flow) -> ValidationReport:
    """Capacity, saturation, per-label conservation and canonical routing.

    Routing: left stub p admits only mu strand p, bottom stub c only
    content c, and every nu-class edge of spine c carries only content c.
    Together with saturation and conservation these pin the flow down to
    the canonical one.
    """
    report = ValidationReport()
    unknown = set(fl.loads) - set(g.edges)
    for key in sorted(unknown):
        report.add_structural("edge", f"flow references unknown edge {key}")
    for key, e in g.edges.items():
        load = fl.load(key)
        if any(a < 0 for a in load.values()):
            report.add("negative", key.p, key.c, str(key))
        total = sum(load.values())
        if total > e.capacity:
            report.add("capacity", key.p, key.c, f"{key}: {total} > {e.capacity}")
        elif total < e.capacity:
            report.add("saturation", key.p, key.c, f"{key}: {total} < {e.capacity}")
        if key.cls == "nu":
            stray = [lab for lab in load if lab != Label.content(key.c)]
            if stray:
                report.add("routing", key.p, key.c, f"{key} carries {', '.join(map(str, stray))} off its spine")
        if e.tail is None and key.cls == "mu":
            stray = [lab for lab in load if lab != Label.mu(key.p)]
            if stray:
                report.add("routing", key.p, key.c, f"left stub {key.p} admits {', '.join(map(str, stray))}")
    for face in g.faces:
        balance: dict[Label, int] = defaultdict(int)
        for e in g.in_edges(face):
            for lab, a in fl.load(e.key).items():
                balance[lab] += a
        for e in g.out_edges(face):
            for lab, a in fl.load(e.key).items():
                balance[lab] -= a
        for lab, b in sorted(balance.items()):
            if b != 0:
                report.add("conservation", face.p, face.q, f"{face}: {lab} off by {b}")
    return report


def junction_diversions(fl: Flow) -> Iterator[tuple[int, int, int]]:
    """Yield (c, p, amount) for every spine/row junction: the c's that turn into row p."""
    r = fl.graph.r
    for c in range(1, r + 1):
        for p in range(c, r + 1):
            below = fl.amount(EdgeKey("nu", p, c), Label.content(c))
            above = fl.amount(EdgeKey("nu", p - 1, c), Label.content(c)) if p > c else 0
            yield c, p, below - above


def flow_to_filling(fl: Flow) -> LRFilling:
    report = check_flow(fl.graph, fl)
    if not report.ok:
        raise InvalidInput(f"flow is not canonical: {report.summary()}")
    g = fl.graph
    mu = Partition(tuple(fl.total(e.key) for e in g.stubs("mu")))
    nu = Partition(tuple(fl.total(e.key) for e in g.stubs("nu")))
    lam = Partition(tuple(fl.total(e.key) for e in g.stubs("lambda")))
    k = [[0] * p for p in range(1, g.r + 1)]
    for c, p, amount in junction_diversions(fl):
        k[p - 1][c - 1] = amount
    f = LRFilling(mu, nu, lam, tuple(tuple(row) for row in k))
    require_valid(f)
    return f


def flow_from_json(g: WeightedDualGraph, items: list[dict]) -> Flow:
    by_name = {str(k): k for k in g.edges}
    loads = {}
    try:
        for item in items:
            key = by_name[item["edge"]]
            loads[key] = {Label.parse(lab): int(a) for lab, a in item["loads"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed flow JSON: {exc}") from exc
    return Flow(g, _clean(loads))
