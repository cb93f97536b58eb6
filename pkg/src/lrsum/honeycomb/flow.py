"""Labeled flows on honeycombs, overlay flows, and replay of a summation trace.

A honeycomb flow is kept as a bag of unit paths, one per box of the
filling (inner boxes included). A unit enters on a mu or nu boundary ray,
follows honeycomb segments and leaves on a lambda ray. Flow directions
are fixed: along mu lines (0, -1), along nu lines (1, 0), along lambda
lines (1, -1), so x - y grows strictly along every path.

Paths are refined against a cut set: every vertex and crossing point of
the arrangement lies on a path as an explicit point, so two paths that
meet share a listed point and the load on each atomic piece can be read
off directly.

A unit's label comes from the ray it enters on; the lambda ray it leaves
on fixes the row of the box it stands for. Exchanging two units at a
common point swaps their tails and so swaps their labels between rows.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from ..dual_flow import Label, build_dual_graph, unit_routes
from ..errors import InvalidInput, InvariantError, TraceMismatch
from ..hive import filling_to_hive
from ..lr_filling import INNER, LRFilling, filling_to_grid, require_valid
from ..report import ValidationReport
from ..summation import COLUMN_STRICT, MU_SWITCH, REORDER, Step, StepTrace, initial_grid, relabel_contents
from .geometry import (
    RAY_DIRECTION,
    Honeycomb,
    HoneyPoint,
    Piece,
    atomize,
    constant_of,
    honeycomb_from_filling,
    overlay,
    param_of,
    piece_endpoints,
    z,
)

Cell = tuple[int, int]

TYPE1 = "Type1"
TYPE2 = "Type2"

def cut_set(h: Honeycomb) -> frozenset[HoneyPoint]:
    """Every finite endpoint of an atomic piece of ``h``."""
    pts = set()
    for piece, _ in atomize(h).pieces:
        for end in piece_endpoints(piece):
            if end is not None:
                pts.add(end)
    return frozenset(pts)


def class_between(a: HoneyPoint, b: HoneyPoint) -> str:
    if a[0] == b[0]:
        return "mu"
    if a[1] == b[1]:
        return "nu"
    if z(a) == z(b):
        return "lambda"
    raise InvalidInput(f"{a} and {b} lie on no common honeycomb line")


def _between(a: HoneyPoint, b: HoneyPoint, cuts: Iterable[HoneyPoint]) -> list[HoneyPoint]:
    cls = class_between(a, b)
    const, ta, tb = constant_of(cls, a), param_of(cls, a), param_of(cls, b)
    lo, hi = min(ta, tb), max(ta, tb)
    pts = [k for k in cuts if constant_of(cls, k) == const and lo < param_of(cls, k) < hi]
    pts.sort(key=lambda k: param_of(cls, k), reverse=tb < ta)
    return pts


def _out_along_ray(cls: str, a: HoneyPoint, cuts: Iterable[HoneyPoint]) -> list[HoneyPoint]:
    """Cut points beyond ``a`` on the boundary ray of class ``cls``, nearest first."""
    const, t0 = constant_of(cls, a), param_of(cls, a)
    step = param_of(cls, RAY_DIRECTION[cls])
    pts = [k for k in cuts if constant_of(cls, k) == const and (param_of(cls, k) - t0) * step > 0]
    pts.sort(key=lambda k: abs(param_of(cls, k) - t0))
    return pts


def refine(start: str, points: list[HoneyPoint], cuts: Iterable[HoneyPoint]) -> tuple[HoneyPoint, ...]:
    """Insert every cut point the path passes through, including those on its two rays."""
    cuts = list(cuts)
    out = [points[0]]
    for pt in points[1:]:
        if pt != out[-1]:
            out += _between(out[-1], pt, cuts) + [pt]
    head = list(reversed(_out_along_ray(start, out[0], cuts)))
    tail = _out_along_ray("lambda", out[-1], cuts)
    return tuple(head + out + tail)


@dataclass(frozen=True)
class UnitPath:
    """One unit of flow: entry class, and the points it visits in order."""

    label: Label
    start: str
    points: tuple[HoneyPoint, ...]

    @property
    def end(self) -> int:
        """Constant coordinate of the lambda ray the unit leaves on."""
        return z(self.points[-1])

    def pieces(self) -> list[Piece]:
        a = self.points[0]
        t = param_of(self.start, a)
        first = (self.start, constant_of(self.start, a), t, None) if self.start == "mu" else (self.start, constant_of(self.start, a), None, t)
        out = [first]
        for p, q in zip(self.points, self.points[1:]):
            cls = class_between(p, q)
            tp, tq = param_of(cls, p), param_of(cls, q)
            out.append((cls, constant_of(cls, p), min(tp, tq), max(tp, tq)))
        last = self.points[-1]
        out.append(("lambda", z(last), last[0], None))
        return out

    def turns(self, i: int) -> tuple[str, str]:
        """Classes of the piece arriving at point ``i`` and of the piece leaving it."""
        came = self.start if i == 0 else class_between(self.points[i - 1], self.points[i])
        went = "lambda" if i == len(self.points) - 1 else class_between(self.points[i], self.points[i + 1])
        return came, went

    def refined(self, cuts: Iterable[HoneyPoint]) -> "UnitPath":
        return UnitPath(self.label, self.start, refine(self.start, list(self.points), cuts))

    def to_json(self) -> dict:
        return {"label": str(self.label), "start": self.start, "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class HoneyFlow:
    """Unit paths on a honeycomb, with the grid cell each unit stands for.

    ``mu_parts`` and ``nu_parts`` give the boundary part carried by each
    strand label, which is what identifies a strand inside the honeycomb.
    """

    honeycomb: Honeycomb
    units: tuple[UnitPath, ...]
    cells: tuple[Cell, ...]
    cuts: frozenset[HoneyPoint]
    mu_parts: dict[int, int] = field(default_factory=dict)
    nu_parts: dict[int, int] = field(default_factory=dict)

    def loads(self, by_ray: bool = False) -> dict[Piece, Counter]:
        """Per atomic piece, how many units of each label cross it.

        With ``by_ray`` labels are replaced by the boundary ray they come
        from, so strands entering on the same ray are not told apart.
        """
        out: dict[Piece, Counter] = defaultdict(Counter)
        for u in self.units:
            key = self.ray_of(u.label) if by_ray else u.label
            for piece in u.pieces():
                out[piece][key] += 1
        return dict(out)

    def ray_of(self, label: Label) -> tuple[str, int]:
        if label.is_mu:
            return ("mu", self.mu_parts[label.index])
        return ("nu", self.nu_parts[label.index])

    def unit_at(self, cell: Cell) -> UnitPath:
        try:
            return self.units[self.cells.index(cell)]
        except ValueError:
            raise TraceMismatch(f"no flow unit stands for cell {cell}") from None

    def refined(self, cuts: Iterable[HoneyPoint]) -> "HoneyFlow":
        cuts = frozenset(cuts) | self.cuts
        return HoneyFlow(self.honeycomb, tuple(u.refined(cuts) for u in self.units), self.cells, cuts, self.mu_parts, self.nu_parts)

    def to_json(self) -> dict:
        return {
            "units": [dict(u.to_json(), cell=list(c)) for u, c in zip(self.units, self.cells)],
            "loads": [
                {"piece": _piece_json(p), "loads": {str(lab): n for lab, n in sorted(c.items())}}
                for p, c in sorted(self.loads().items(), key=lambda item: _piece_order(item[0]))
            ],
        }


def _piece_order(piece: Piece):
    cls, const, lo, hi = piece
    big = float("inf")
    return (cls, const, -big if lo is None else lo, big if hi is None else hi)


def _piece_json(piece: Piece) -> dict:
    cls, const, lo, hi = piece
    return {"class": cls, "constant": const, "from": lo, "to": hi}


def _unit_paths(f: LRFilling, cuts: frozenset[HoneyPoint]) -> dict[tuple[int, Label], list[UnitPath]]:
    g = build_dual_graph(filling_to_hive(f))
    pool: dict[tuple[int, Label], list[UnitPath]] = defaultdict(list)
    for row, label, route in unit_routes(f):
        heads = [g.edges[key].head for key in route]
        points = [g.coordinates(face)[:2] for face in heads if face is not None]
        start = route[0].cls
        pool[(row, label)].append(UnitPath(label, start, refine(start, points, cuts)))
    return pool


def units_from_filling(f: LRFilling, cuts: Iterable[HoneyPoint], relabel=None) -> dict[Cell, UnitPath]:
    """The canonical flow of ``f`` as one unit path per grid cell.

    Row j's inner boxes are mu strand j; a box holding c is a unit of
    content c. ``relabel`` renames labels (used when overlaying).
    """
    cuts = frozenset(cuts)
    pool = _unit_paths(f, cuts)
    out = {}
    for j, row in enumerate(filling_to_grid(f).rows, start=1):
        for c, v in enumerate(row, start=1):
            label = Label.mu(j) if v == INNER else Label.content(v)
            u = pool[(j, label)].pop()
            if relabel is not None:
                u = UnitPath(relabel(label), u.start, u.points)
            out[(j, c)] = u
    return out


def _flow(h: Honeycomb, cells: dict[Cell, UnitPath], cuts, mu_parts, nu_parts) -> HoneyFlow:
    order = sorted(cells)
    return HoneyFlow(h, tuple(cells[c] for c in order), tuple(order), frozenset(cuts), dict(mu_parts), dict(nu_parts))


def canonical_honeycomb_flow(f: LRFilling, cuts: Iterable[HoneyPoint] = ()) -> HoneyFlow:
    """Canonical flow of ``f`` carried over to its honeycomb."""
    require_valid(f)
    h = honeycomb_from_filling(f)
    cuts = cut_set(h) | frozenset(cuts)
    cells = units_from_filling(f, cuts)
    mu_parts = {p: f.mu.part(p - 1) for p in range(1, f.r + 1)}
    nu_parts = {c: f.nu.part(c - 1) for c in range(1, f.r + 1)}
    return _flow(h, cells, cuts, mu_parts, nu_parts)


def overlay_flow(f1: LRFilling, f2: LRFilling) -> tuple[Honeycomb, HoneyFlow]:
    """Overlay of the two honeycombs carrying the union of their canonical flows.

    Contents are renamed by the summation relabeling. Mu strands are
    renamed by rank of their part, earlier merged rows first among equal
    parts, matching the rows of the direct sum. Units are keyed by their
    cell in the merged grid before normalizing.
    """
    require_valid(f1)
    require_valid(f2)
    h = overlay(honeycomb_from_filling(f1), honeycomb_from_filling(f2))
    cuts = cut_set(h)
    labels = relabel_contents(f1, f2)
    sources = (f1, f2)
    parts = {(src, j): sources[src].mu.part(j - 1) for src, j in labels.rows}
    ranked = sorted(range(len(labels.rows)), key=lambda t: (-parts[labels.rows[t]], t))
    mu_rank = {labels.rows[t]: rank for rank, t in enumerate(ranked, start=1)}
    cells = {}
    nu_parts = {}
    for src, f in enumerate(sources):
        names = labels.source_map(src)
        for i, new in enumerate(names, start=1):
            nu_parts[new] = f.nu.part(i - 1)

        def rename(label, src=src, names=names):
            return Label.mu(mu_rank[(src, label.index)]) if label.is_mu else Label.content(names[label.index - 1])

        for (j, c), u in units_from_filling(f, cuts, rename).items():
            cells[(labels.merged_row(src, j), c)] = u
    mu_parts = {rank: parts[row] for row, rank in mu_rank.items()}
    return h, _flow(h, cells, cuts, mu_parts, nu_parts)


def flows_equal(a: HoneyFlow, b: HoneyFlow, by_ray: bool = True) -> bool:
    """Equal loads on every atomic piece, after refining both on a common cut set.

    By default strands are compared by the boundary ray they enter on:
    units entering on one ray cannot be told apart in the honeycomb.
    """
    cuts = a.cuts | b.cuts
    return a.refined(cuts).loads(by_ray) == b.refined(cuts).loads(by_ray)


def check_honeycomb_flow(fl: HoneyFlow) -> ValidationReport:
    """Capacity, conservation and boundary checks for a flow on a honeycomb.

    Each atomic piece must carry exactly its constant coordinate times its
    multiplicity; each label must balance at every point; mu rays carry
    mu strands of their own part and nu rays contents of their own part.
    """
    report = ValidationReport()
    pieces = atomize(fl.honeycomb).as_counter()
    loads = fl.refined(cut_set(fl.honeycomb)).loads()
    for piece in sorted(set(pieces) | set(loads), key=_piece_order):
        cls, const, lo, hi = piece
        carried = sum(loads.get(piece, Counter()).values())
        cap = const * pieces.get(piece, 0)
        if carried != cap:
            kind = "capacity" if carried > cap else "saturation"
            report.add(kind, const, lo if lo is not None else hi, f"{cls} piece {piece}: {carried} vs {cap}")
        for label, n in loads.get(piece, Counter()).items():
            if n < 0:
                report.add("negative", const, 0, f"{piece} {label}")
        entering = (cls == "mu" and hi is None) or (cls == "nu" and lo is None)
        if entering:
            for label in loads.get(piece, Counter()):
                if label.is_mu != (cls == "mu") or fl.ray_of(label)[1] != const:
                    report.add("routing", const, 0, f"{cls} ray {const} admits {label}")
    balance: dict[HoneyPoint, Counter] = defaultdict(Counter)
    for u in fl.units:
        for p, q in zip(u.points, u.points[1:]):
            if q[0] - q[1] <= p[0] - p[1]:
                report.add("direction", p[0], p[1], f"{u.label} runs against the flow from {p} to {q}")
    for piece, counts in loads.items():
        start, end = piece_endpoints(piece)
        cls = piece[0]
        # Flow runs toward smaller y on mu lines and larger x otherwise.
        tail, head = (end, start) if cls == "mu" else (start, end)
        for label, n in counts.items():
            if tail is not None:
                balance[tail][label] -= n
            if head is not None:
                balance[head][label] += n
    for pt in sorted(balance):
        for label, b in sorted(balance[pt].items()):
            if b:
                report.add("conservation", pt[0], pt[1], f"{pt}: {label} off by {b}")
    return report


@dataclass(frozen=True)
class Crossing:
    kind: str
    location: HoneyPoint
    labels: tuple[Label, ...]


def scan_key(pt: HoneyPoint) -> tuple[int, int]:
    """Top to bottom, then east to west, in the drawing plane.

    The drawing puts (x, y) at x*(0, 1) + y*(-sqrt(3)/2, -1/2): height
    x - y/2 and horizontal position -sqrt(3)/2 * y.
    """
    return (-(2 * pt[0] - pt[1]), pt[1])


def _passages(fl: HoneyFlow) -> dict[HoneyPoint, Counter]:
    out: dict[HoneyPoint, Counter] = defaultdict(Counter)
    for u in fl.units:
        key = fl.ray_of(u.label)
        for i, pt in enumerate(u.points):
            out[pt][(u.turns(i), key, u.end)] += 1
    return out


def detect_noncanonical(fl: HoneyFlow, reference: HoneyFlow) -> list[Crossing]:
    """Points where ``fl`` routes units differently from the canonical ``reference``.

    At each point the units passing through are compared by (arriving
    class, leaving class, entry ray, exit ray). A difference involving a
    mu strand or a mu segment is a mu switch (Type 2); any other is a
    content crossing (Type 1). Results run top to bottom, east to west.
    """
    cuts = fl.cuts | reference.cuts
    mine, theirs = _passages(fl.refined(cuts)), _passages(reference.refined(cuts))
    labels_at: dict[HoneyPoint, set] = defaultdict(set)
    for u in fl.refined(cuts).units:
        for pt in u.points:
            labels_at[pt].add(u.label)
    out = []
    for pt in sorted(set(mine) | set(theirs), key=scan_key):
        if mine.get(pt, Counter()) == theirs.get(pt, Counter()):
            continue
        delta = (mine.get(pt, Counter()) - theirs.get(pt, Counter())) + (theirs.get(pt, Counter()) - mine.get(pt, Counter()))
        mu_involved = any(ray[0] == "mu" or "mu" in turns for turns, ray, _ in delta)
        out.append(Crossing(TYPE2 if mu_involved else TYPE1, pt, tuple(sorted(labels_at.get(pt, ())))))
    return out


# -- trace replay --------------------------------------------------------------


def _exchange(cells: dict[Cell, UnitPath], x: Cell, y: Cell) -> None:
    """Swap the tails of the units at ``x`` and ``y`` at their first common point."""
    u, v = cells[x], cells[y]
    shared = set(v.points)
    meet = next((p for p in u.points if p in shared), None)
    if meet is None:
        raise TraceMismatch(f"units at {x} and {y} share no point of the honeycomb")
    iu, iv = u.points.index(meet), v.points.index(meet)
    cells[x] = UnitPath(v.label, v.start, v.points[:iv] + u.points[iu:])
    cells[y] = UnitPath(u.label, u.start, u.points[:iu] + v.points[iv:])


def _inner_count(cells: dict[Cell, UnitPath], row: int) -> int:
    return sum(1 for (j, _), u in cells.items() if j == row and u.label.is_mu)


def _column_strict(cells: dict[Cell, UnitPath], upper: Cell, lower: Cell) -> None:
    """Move the larger label down and the smaller up.

    When the upper row has more inner boxes than the lower one, the lower
    unit first trades with the upper row's mu strand, then the two
    contents trade, and the mu unit is put back at its cell.
    """
    j = upper[0]
    mu_cell = (j, 1)
    mu = cells.get(mu_cell)
    if mu is None or not mu.label.is_mu or mu_cell == upper or _inner_count(cells, j) <= _inner_count(cells, j + 1):
        _exchange(cells, upper, lower)
        return
    _exchange(cells, mu_cell, lower)
    _exchange(cells, lower, upper)
    cells[mu_cell], cells[upper] = cells[upper], cells[mu_cell]


def _expect(cells: dict[Cell, UnitPath], strand: Iterable[Cell], label: Label | None, step: Step) -> None:
    for cell in strand:
        if cell not in cells:
            raise TraceMismatch(f"{step.kind} step names cell {cell}, which carries no flow")
        found = cells[cell].label
        ok = found.is_mu if label is None else found == label
        if not ok:
            want = "a mu strand" if label is None else str(label)
            raise TraceMismatch(f"{step.kind} step expects {want} at {cell}, flow has {found}")


def replay_trace_on_flow(fl: HoneyFlow, trace: StepTrace | Iterable[Step]) -> HoneyFlow:
    """Apply every step of a summation trace to an overlay flow.

    The flow must be keyed like ``overlay_flow`` keys it: by cell of the
    merged grid before normalizing. Before each step the units named by
    the step must carry the labels the step expects.
    """
    cells = dict(zip(fl.cells, fl.units))
    for step in trace:
        if step.kind == MU_SWITCH:
            _expect(cells, step.strand_a, None, step)
            for x, y in zip(step.strand_a, step.strand_b):
                _exchange(cells, x, y)
            continue
        small, big = (Label.content(v) for v in step.labels)
        _expect(cells, step.strand_a, small, step)
        _expect(cells, step.strand_b, big, step)
        if len(step.strand_a) != len(step.strand_b):
            raise TraceMismatch(f"{step.kind} step swaps strands of different lengths")
        for x, y in zip(step.strand_a, step.strand_b):
            if step.kind == REORDER:
                cells[x], cells[y] = cells[y], cells[x]
            elif step.kind == COLUMN_STRICT:
                upper, lower = (x, y) if x[0] < y[0] else (y, x)
                _column_strict(cells, upper, lower)
            else:
                _exchange(cells, x, y)
    _settle_crossings(cells)
    return _flow(fl.honeycomb, cells, fl.cuts, fl.mu_parts, fl.nu_parts)


def _swap_middles(u: UnitPath, v: UnitPath, pt: HoneyPoint) -> tuple[UnitPath, UnitPath]:
    """Trade the stretches of ``u`` and ``v`` from ``pt`` to where they meet again."""
    iu, iv = u.points.index(pt), v.points.index(pt)
    later = {q: k for k, q in enumerate(v.points) if k > iv}
    ju = next((k for k in range(iu + 1, len(u.points)) if u.points[k] in later), None)
    if ju is None:
        # Same exit ray: the tails are interchangeable.
        return UnitPath(u.label, u.start, u.points[:iu] + v.points[iv:]), UnitPath(v.label, v.start, v.points[:iv] + u.points[iu:])
    jv = later[u.points[ju]]
    return (
        UnitPath(u.label, u.start, u.points[:iu] + v.points[iv:jv] + u.points[ju:]),
        UnitPath(v.label, v.start, v.points[:iv] + u.points[iu:ju] + v.points[jv:]),
    )


def _next_crossing(cells: dict[Cell, UnitPath]):
    """First point, top to bottom, where content i runs straight along a lambda
    line across content j > i running straight along a nu line, the two units
    meeting again further on."""
    through: dict[HoneyPoint, list[tuple[str, Cell]]] = defaultdict(list)
    for cell in sorted(cells):
        u = cells[cell]
        if u.label.is_mu:
            continue
        for i, pt in enumerate(u.points):
            came, went = u.turns(i)
            if came == went and came != "mu":
                through[pt].append((came, cell))
    for pt in sorted(through, key=scan_key):
        along = [c for cls, c in through[pt] if cls == "lambda"]
        across = [c for cls, c in through[pt] if cls == "nu"]
        for x in along:
            for y in across:
                u, v = cells[x], cells[y]
                if u.label.index >= v.label.index:
                    continue
                rest = set(v.points[v.points.index(pt) + 1 :])
                if u.end == v.end or any(q in rest for q in u.points[u.points.index(pt) + 1 :]):
                    return pt, x, y
    return None


def _settle_crossings(cells: dict[Cell, UnitPath]) -> None:
    """Put the smaller content on the nu route wherever two contents cross and meet again.

    Such a crossing never occurs in a canonical flow; it is the content
    exchange in the lambda and nu directions, made on units the trace does
    not name because their rows are not affected.
    """
    limit = len(cells) ** 2 + 1
    for _ in range(limit):
        found = _next_crossing(cells)
        if found is None:
            return
        pt, x, y = found
        cells[x], cells[y] = _swap_middles(cells[x], cells[y], pt)
    raise InvariantError("content crossings did not settle")


def merged_grid_cells(f1: LRFilling, f2: LRFilling) -> list[Cell]:
    """Cells of the merged grid before normalizing, the keys used by ``overlay_flow``."""
    g = initial_grid(f1, f2, relabel_contents(f1, f2))
    return [(j, c) for j, row in enumerate(g.rows, start=1) for c in range(1, len(row) + 1)]
