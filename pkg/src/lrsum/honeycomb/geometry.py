"""Honeycombs as exact integer diagrams in the plane x + y = z.

A point is stored as (x, y); z = x + y is implied. Segments lie on one of
three line families:

* ``mu``:     x constant, running in the y direction
* ``nu``:     y constant, running in the x direction
* ``lambda``: z constant, running in the (1, -1) direction

Boundary rays point in fixed directions: mu rays (0, 1), nu rays (-1, 0),
lambda rays (1, -1). All line intersections are integer points, so every
comparison here is exact.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable

from ..dual_flow import CLASSES, EdgeKey, WeightedDualGraph, build_dual_graph, face_edges
from ..errors import InvalidInput
from ..hive import filling_to_hive
from ..lr_filling import LRFilling, require_valid
from ..partition import Partition, direct_sum

HoneyPoint = tuple[int, int]

RAY_DIRECTION = {"mu": (0, 1), "nu": (-1, 0), "lambda": (1, -1)}


def z(pt: HoneyPoint) -> int:
    return pt[0] + pt[1]


def constant_of(cls: str, pt: HoneyPoint) -> int:
    """The coordinate that stays fixed along a line of class ``cls`` through ``pt``."""
    if cls == "mu":
        return pt[0]
    if cls == "nu":
        return pt[1]
    return pt[0] + pt[1]


def param_of(cls: str, pt: HoneyPoint) -> int:
    """Position of ``pt`` along its line: y for mu lines, x otherwise."""
    return pt[1] if cls == "mu" else pt[0]


def point_on(cls: str, const: int, t: int) -> HoneyPoint:
    if cls == "mu":
        return (const, t)
    if cls == "nu":
        return (t, const)
    return (t, const - t)


@dataclass(frozen=True)
class Segment:
    """A finite segment ``a``-``b`` or, when ``b`` is None, a boundary ray from ``a``.

    ``source`` tells overlaid honeycombs apart; ``edge`` names the dual
    edge the segment came from, when there is one.
    """

    cls: str
    a: HoneyPoint
    b: HoneyPoint | None = None
    mult: int = 1
    source: int = 0
    edge: EdgeKey | None = None

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise InvalidInput(f"unknown segment class {self.cls!r}")
        if self.b is not None and constant_of(self.cls, self.a) != constant_of(self.cls, self.b):
            raise InvalidInput(f"{self.cls} segment {self.a}-{self.b} has no constant coordinate")

    @property
    def is_ray(self) -> bool:
        return self.b is None

    @property
    def constant(self) -> int:
        """Capacity of the segment: its fixed coordinate."""
        return constant_of(self.cls, self.a)

    def interval(self) -> tuple[int | None, int | None]:
        """Parameter range along the line; None marks an infinite end."""
        ta = param_of(self.cls, self.a)
        if self.b is None:
            step = param_of(self.cls, RAY_DIRECTION[self.cls])
            return (ta, None) if step > 0 else (None, ta)
        tb = param_of(self.cls, self.b)
        return (min(ta, tb), max(ta, tb))

    def is_degenerate(self) -> bool:
        return self.b is not None and self.a == self.b

    def to_json(self) -> dict:
        out = {"a": list(self.a)}
        if self.b is None:
            out["ray"] = list(RAY_DIRECTION[self.cls])
        else:
            out["b"] = list(self.b)
        out["class"] = self.cls
        out["mult"] = self.mult
        return out


@dataclass(frozen=True)
class Honeycomb:
    vertices: tuple[HoneyPoint, ...] = ()
    segments: tuple[Segment, ...] = ()

    def rays(self, cls: str | None = None) -> list[Segment]:
        return [s for s in self.segments if s.is_ray and (cls is None or s.cls == cls)]

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "segments": [s.to_json() for s in self.segments],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Honeycomb":
        try:
            vertices = tuple((int(x), int(y)) for x, y in data["vertices"])
            segments = []
            for item in data["segments"]:
                klass = item["class"]
                a = tuple(int(v) for v in item["a"])
                if "ray" in item:
                    if tuple(item["ray"]) != RAY_DIRECTION.get(klass):
                        raise InvalidInput(f"{klass} ray must point {RAY_DIRECTION.get(klass)}")
                    b = None
                else:
                    b = tuple(int(v) for v in item["b"])
                segments.append(Segment(klass, a, b, int(item.get("mult", 1))))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed honeycomb JSON: {exc}") from exc
        return cls(vertices, tuple(segments))


EMPTY_HONEYCOMB = Honeycomb()


def honeycomb_from_graph(g: WeightedDualGraph) -> Honeycomb:
    """Plot each dual vertex at (mu, nu) of its incident capacities and join adjacent ones."""
    coords = {face: g.coordinates(face)[:2] for face in g.faces}
    segments = []
    for key, e in g.edges.items():
        if e.is_stub:
            face = e.head if e.tail is None else e.tail
            segments.append(Segment(key.cls, coords[face], None, edge=key))
        else:
            segments.append(Segment(key.cls, coords[e.tail], coords[e.head], edge=key))
    return Honeycomb(tuple(coords[f] for f in g.faces), tuple(segments))


def honeycomb_from_filling(f: LRFilling) -> Honeycomb:
    require_valid(f)
    return honeycomb_from_graph(build_dual_graph(filling_to_hive(f)))


def honeycomb_type(h: Honeycomb) -> tuple[Partition, Partition, Partition]:
    """Sorted constant coordinates of the boundary rays, per class."""
    out = []
    for cls in CLASSES:
        rays = h.rays(cls)
        parts: list[int] = []
        for s in rays:
            if s.mult < 0:
                raise InvalidInput("negative multiplicity on a boundary ray")
            parts += [s.constant] * s.mult
        if any(p < 0 for p in parts):
            raise InvalidInput(f"{cls} ray with negative coordinate")
        out.append(Partition.from_parts(parts))
    mu, nu, lam = out
    if not (len(mu) == len(nu) == len(lam)):
        raise InvalidInput(f"boundary ray counts differ: {len(mu)}, {len(nu)}, {len(lam)}")
    return mu, nu, lam


def overlay(h1: Honeycomb, h2: Honeycomb) -> Honeycomb:
    """Superpose two honeycombs; segments of ``h2`` keep their identity via ``source``."""
    offset = 1 + max((s.source for s in h1.segments), default=0)
    moved = tuple(replace(s, source=s.source + offset) for s in h2.segments)
    return Honeycomb(h1.vertices + h2.vertices, h1.segments + moved)


def overlay_type(h1: Honeycomb, h2: Honeycomb) -> tuple[Partition, Partition, Partition]:
    t1, t2 = honeycomb_type(h1), honeycomb_type(h2)
    return tuple(direct_sum(a, b) for a, b in zip(t1, t2))


# -- atomization ------------------------------------------------------------

Piece = tuple[str, int, int | None, int | None]  # (class, constant, t_start, t_end)


@dataclass(frozen=True)
class AtomicSegmentSet:
    """Multiset of atomic pieces: maximal segments cut at every vertex and crossing."""

    pieces: tuple[tuple[Piece, int], ...] = field(default_factory=tuple)

    def as_counter(self) -> Counter:
        return Counter(dict(self.pieces))

    def __len__(self) -> int:
        return sum(m for _, m in self.pieces)


def _inside(t: int, lo: int | None, hi: int | None, strict: bool = True) -> bool:
    if strict:
        return (lo is None or lo < t) and (hi is None or t < hi)
    return (lo is None or lo <= t) and (hi is None or t <= hi)


def _intersection(s1: Segment, s2: Segment) -> HoneyPoint | None:
    """Crossing point of the lines of two segments of different classes, if it lies on both."""
    if s1.cls == s2.cls:
        return None
    lines = {s1.cls: s1.constant, s2.cls: s2.constant}
    if "mu" in lines and "nu" in lines:
        pt = (lines["mu"], lines["nu"])
    elif "mu" in lines:
        pt = (lines["mu"], lines["lambda"] - lines["mu"])
    else:
        pt = (lines["lambda"] - lines["nu"], lines["nu"])
    for s in (s1, s2):
        lo, hi = s.interval()
        if not _inside(param_of(s.cls, pt), lo, hi, strict=False):
            return None
    return pt


def cut_points(segments: Iterable[Segment]) -> dict[int, set[HoneyPoint]]:
    """For each segment index, the points strictly inside it where it must be cut."""
    segs = [s for s in segments if not s.is_degenerate()]
    vertices = set()
    for s in segs:
        vertices.add(s.a)
        if s.b is not None:
            vertices.add(s.b)
    cuts: dict[int, set[HoneyPoint]] = {}
    for idx, s in enumerate(segs):
        lo, hi = s.interval()
        pts = set()
        for v in vertices:
            if constant_of(s.cls, v) == s.constant and _inside(param_of(s.cls, v), lo, hi):
                pts.add(v)
        for other in segs:
            pt = _intersection(s, other)
            if pt is not None and _inside(param_of(s.cls, pt), lo, hi):
                pts.add(pt)
        cuts[idx] = pts
    return cuts


def split_segment(s: Segment, cuts: set[HoneyPoint]) -> list[Piece]:
    lo, hi = s.interval()
    ts = sorted(param_of(s.cls, p) for p in cuts)
    bounds = [lo] + ts + [hi]
    return [(s.cls, s.constant, bounds[t], bounds[t + 1]) for t in range(len(bounds) - 1)]


def atomize(h: Honeycomb) -> AtomicSegmentSet:
    segs = [s for s in h.segments if not s.is_degenerate()]
    cuts = cut_points(segs)
    counter: Counter = Counter()
    for idx, s in enumerate(segs):
        for piece in split_segment(s, cuts[idx]):
            counter[piece] += s.mult
    return AtomicSegmentSet(tuple(sorted(((p, m) for p, m in counter.items() if m), key=_piece_sort_key)))


def _piece_sort_key(item):
    (cls, const, lo, hi), _ = item
    big = float("inf")
    return (cls, const, -big if lo is None else lo, big if hi is None else hi)


def honeycombs_equal(h1: Honeycomb, h2: Honeycomb) -> bool:
    return atomize(h1) == atomize(h2)


def piece_endpoints(piece: Piece) -> tuple[HoneyPoint | None, HoneyPoint | None]:
    cls, const, lo, hi = piece
    return (None if lo is None else point_on(cls, const, lo)), (None if hi is None else point_on(cls, const, hi))


def coincident_adjacent_faces(g: WeightedDualGraph) -> list[tuple[EdgeKey, HoneyPoint]]:
    """Dual edges of zero capacity-difference, i.e. adjacent faces plotted at the same point."""
    out = []
    for key, e in g.edges.items():
        if e.is_stub:
            continue
        a, b = g.coordinates(e.tail)[:2], g.coordinates(e.head)[:2]
        if a == b:
            out.append((key, a))
    return out


def transverse_crossings(h: Honeycomb) -> list[HoneyPoint]:
    """Points where exactly two lines pass straight through and nothing else meets.

    Looks at the non-degenerate segment ends and interiors at each point:
    a transverse crossing has two classes, each arriving from both
    sides, with equal multiplicity on both sides of each line.
    """
    segs = [s for s in h.segments if not s.is_degenerate()]
    cuts = cut_points(segs)
    arms: dict[HoneyPoint, Counter] = {}
    for idx, s in enumerate(segs):
        for piece in split_segment(s, cuts[idx]):
            start, end = piece_endpoints(piece)
            cls = piece[0]
            if start is not None:
                arms.setdefault(start, Counter())[(cls, +1)] += s.mult
            if end is not None:
                arms.setdefault(end, Counter())[(cls, -1)] += s.mult
    out = []
    for pt, c in arms.items():
        classes = {cls for cls, _ in c}
        if len(classes) == 2 and all(c[(cls, 1)] == c[(cls, -1)] > 0 for cls in classes):
            out.append(pt)
    return sorted(out)
