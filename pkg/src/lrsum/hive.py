"""Integer hives, their rhombus inequalities and the bijection with LR fillings.

A hive of size r is stored as rows ``h[p]`` for p = 0..r, row p holding
``h[p][0..p]``; p grows downward and q to the right, as in the usual
triangular picture. The three boundary sides give the type: left side
differences are mu, bottom differences nu, right side differences lambda.

Every rhombus is a pair of unit triangles sharing an edge. The rhombus
inequality says the two obtuse corners sum to at least the two acute
corners. Families are named after the direction the upper acute corner
points:

* right:    h[p][q] + h[p+1][q+1] >= h[p][q+1] + h[p+1][q]
* vertical: h[p][q] + h[p][q+1]   >= h[p-1][q] + h[p+1][q+1]
* left:     h[p][q] + h[p+1][q]   >= h[p][q-1] + h[p+1][q+1]
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidInput
from .lr_filling import LRFilling, require_valid
from .partition import Partition, pad_common, weight
from .report import ValidationReport

Point = tuple[int, int]


@dataclass(frozen=True)
class Hive:
    h: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(tuple(int(v) for v in row) for row in self.h))

    @property
    def r(self) -> int:
        return len(self.h) - 1

    def __getitem__(self, pq: Point) -> int:
        p, q = pq
        return self.h[p][q]

    def to_json(self) -> dict:
        return {"h": [list(row) for row in self.h]}

    @classmethod
    def from_json(cls, data: dict) -> "Hive":
        try:
            return cls(tuple(tuple(row) for row in data["h"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed hive JSON: {exc}") from exc


@dataclass(frozen=True)
class Rhombus:
    family: str
    obtuse: tuple[Point, Point]
    acute: tuple[Point, Point]

    @property
    def anchor(self) -> Point:
        return self.obtuse[0]

    def slack(self, value) -> int:
        (a, b), (c, d) = self.obtuse, self.acute
        return value(a) + value(b) - value(c) - value(d)


def rhombi(r: int) -> list[Rhombus]:
    """Every rhombus of a size-r hive, i.e. those whose four corners exist."""

    def exists(pt):
        p, q = pt
        return 0 <= q <= p <= r

    out = []
    for p in range(r + 1):
        for q in range(p + 1):
            candidates = [
                Rhombus("right", ((p, q), (p + 1, q + 1)), ((p, q + 1), (p + 1, q))),
                Rhombus("vertical", ((p, q), (p, q + 1)), ((p - 1, q), (p + 1, q + 1))),
                Rhombus("left", ((p, q), (p + 1, q)), ((p, q - 1), (p + 1, q + 1))),
            ]
            for rh in candidates:
                if all(exists(pt) for pt in rh.obtuse + rh.acute):
                    out.append(rh)
    return out


def _check_shape(H: Hive, report: ValidationReport) -> bool:
    if len(H.h) == 0 or any(len(row) != p + 1 for p, row in enumerate(H.h)):
        report.add_structural("shape", f"rows must have lengths 1..r+1, got {[len(row) for row in H.h]}")
        return False
    return True


def validate_hive(H: Hive) -> ValidationReport:
    report = ValidationReport()
    if not _check_shape(H, report):
        return report
    if H.h[0][0] != 0:
        report.add("normalization", 0, 0, f"h00 = {H.h[0][0]}")
    for rh in rhombi(H.r):
        if rh.slack(H.__getitem__) < 0:
            p, q = rh.anchor
            report.add(rh.family, p, q)
    return report


def require_valid_hive(H: Hive) -> None:
    report = validate_hive(H)
    if not report.ok:
        raise InvalidInput(f"not a hive: {report.summary()}")


def hive_type(H: Hive) -> tuple[Partition, Partition, Partition]:
    require_valid_hive(H)
    r = H.r
    mu = tuple(H.h[i][0] - H.h[i - 1][0] for i in range(1, r + 1))
    nu = tuple(H.h[r][i] - H.h[r][i - 1] for i in range(1, r + 1))
    lam = tuple(H.h[i][i] - H.h[i - 1][i - 1] for i in range(1, r + 1))
    mu, nu, lam = Partition(mu), Partition(nu), Partition(lam)
    assert weight(mu) + weight(nu) == weight(lam)
    return mu, nu, lam


def filling_to_hive(f: LRFilling) -> Hive:
    """h_pq = mu_1 + ... + mu_p + (number of labels <= q in rows 1..p)."""
    require_valid(f)
    r = f.r
    rows = []
    for p in range(r + 1):
        base = sum(f.mu[:p])
        rows.append(tuple(base + sum(f.kij(i, j) for i in range(1, q + 1) for j in range(1, p + 1)) for q in range(p + 1)))
    return Hive(tuple(rows))


def hive_to_filling(H: Hive) -> LRFilling:
    """Inverse of :func:`filling_to_hive`: k_ij are right-rhombus differences, k_jj = h_jj - h_{j,j-1}."""
    mu, nu, lam = hive_type(H)
    h = H.h
    k = []
    for j in range(1, H.r + 1):
        row = [(h[j - 1][i - 1] + h[j][i]) - (h[j - 1][i] + h[j][i - 1]) for i in range(1, j)]
        row.append(h[j][j] - h[j][j - 1])
        k.append(tuple(row))
    f = LRFilling(mu, nu, lam, tuple(k))
    require_valid(f)
    return f


def boundary_hive_entries(mu, nu, lam) -> dict[Point, int]:
    """The hive entries forced by a type: the three sides of the triangle."""
    mu, nu, lam = pad_common(mu, nu, lam)
    r = len(lam)
    fixed: dict[Point, int] = {}
    for p in range(r + 1):
        fixed[(p, 0)] = sum(mu[:p])
        fixed[(p, p)] = sum(lam[:p])
    for q in range(r + 1):
        fixed[(r, q)] = sum(mu) + sum(nu[:q])
    return fixed


def _iter_hives(mu, nu, lam) -> Iterator[dict[Point, int]]:
    mu, nu, lam = pad_common(mu, nu, lam)
    r = len(lam)
    if weight(mu) + weight(nu) != weight(lam):
        return
    fixed = boundary_hive_entries(mu, nu, lam)
    interior = [(p, q) for p in range(2, r) for q in range(1, p)]
    order = {pt: t for t, pt in enumerate(interior)}

    # Each rhombus is checked once, when its last interior corner is assigned.
    by_last: dict[Point, list[Rhombus]] = {pt: [] for pt in interior}
    values = dict(fixed)
    for rh in rhombi(r):
        corners = [pt for pt in rh.obtuse + rh.acute if pt in order]
        if not corners:
            if rh.slack(values.__getitem__) < 0:
                return
            continue
        by_last[max(corners, key=order.__getitem__)].append(rh)

    def bounds(pt):
        lo, hi = None, None
        for rh in by_last[pt]:
            sign = 1 if pt in rh.obtuse else -1
            # slack = sign * v + rest >= 0
            values[pt] = 0
            rest = rh.slack(values.__getitem__)
            if sign == 1:
                lo = -rest if lo is None else max(lo, -rest)
            else:
                hi = rest if hi is None else min(hi, rest)
        del values[pt]
        return lo, hi

    def rec(t):
        if t == len(interior):
            yield values
            return
        pt = interior[t]
        lo, hi = bounds(pt)
        if lo is None or hi is None:
            raise AssertionError(f"hive entry {pt} is not bounded by earlier entries")
        for v in range(lo, hi + 1):
            values[pt] = v
            yield from rec(t + 1)
        values.pop(pt, None)

    yield from rec(0)


def enumerate_hives(mu, nu, lam) -> list[Hive]:
    mu, nu, lam = pad_common(mu, nu, lam)
    r = len(lam)
    return [Hive(tuple(tuple(vals[(p, q)] for q in range(p + 1)) for p in range(r + 1))) for vals in _iter_hives(mu, nu, lam)]


def count_hives(mu, nu, lam) -> int:
    """Number of integer hives with the given boundary, by backtracking over interior entries."""
    return sum(1 for _ in _iter_hives(mu, nu, lam))


def hive_from_rows(rows: Sequence[Sequence[int]]) -> Hive:
    return Hive(tuple(tuple(row) for row in rows))
