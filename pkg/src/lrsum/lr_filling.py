"""Littlewood-Richardson fillings stored as triangular count matrices.

``k[j-1][i-1]`` is the number of labels ``i`` in row ``j`` (``1 <= i <= j``).
Rows and labels are 1-based in the public helpers, matching the usual
notation k_{ij}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import InvalidInput
from .partition import Partition, pad_common, weight
from .report import ValidationReport

INNER = 0


@dataclass(frozen=True)
class LRFilling:
    mu: Partition
    nu: Partition
    lam: Partition
    k: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mu, nu, lam = pad_common(self.mu, self.nu, self.lam)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "k", tuple(tuple(int(v) for v in row) for row in self.k))

    @property
    def r(self) -> int:
        return len(self.lam)

    def kij(self, i: int, j: int) -> int:
        """Number of ``i``'s in row ``j`` (1-based); zero outside the triangle."""
        if not (1 <= i <= j <= len(self.k)):
            return 0
        return self.k[j - 1][i - 1]

    @property
    def type(self) -> tuple[Partition, Partition, Partition]:
        return self.mu, self.nu, self.lam

    def partial_row(self, i: int, j: int) -> int:
        """lambda^{(i)}_j = mu_j + k_{1j} + ... + k_{ij}."""
        return self.mu.part(j - 1) + sum(self.kij(s, j) for s in range(1, i + 1))

    def to_json(self) -> dict:
        return {
            "mu": list(self.mu),
            "nu": list(self.nu),
            "lambda": list(self.lam),
            "k": [list(row) for row in self.k],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LRFilling":
        try:
            return cls(
                Partition(tuple(data["mu"])),
                Partition(tuple(data["nu"])),
                Partition(tuple(data["lambda"])),
                tuple(tuple(row) for row in data["k"]),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed filling JSON: {exc}") from exc


def zero_filling(lam: Partition | Sequence[int]) -> LRFilling:
    """The empty-content filling of type (lam, 0; lam)."""
    lam = Partition(tuple(lam))
    r = len(lam)
    return LRFilling(lam, Partition((0,) * r), lam, tuple((0,) * j for j in range(1, r + 1)))


def empty_filling() -> LRFilling:
    """The filling of size 0; the identity for summation."""
    return LRFilling(Partition(), Partition(), Partition(), ())


def validate_lr(f: LRFilling) -> ValidationReport:
    """Check LR1 (row and content sums), LR2 (column strictness) and LR3 (word condition)."""
    report = ValidationReport()
    r = f.r
    if len(f.k) != r or any(len(row) != j for j, row in enumerate(f.k, start=1)):
        report.add_structural("shape", f"k must have rows of lengths 1..{r}, got {[len(row) for row in f.k]}")
        return report
    for j, row in enumerate(f.k, start=1):
        for i, v in enumerate(row, start=1):
            if v < 0:
                report.add("nonnegative", i, j)

    for j in range(1, r + 1):
        if f.partial_row(j, j) != f.lam[j - 1]:
            report.add("LR1-row", None, j, f"mu_j + sum_s k_sj = {f.partial_row(j, j)} != {f.lam[j - 1]}")
    for i in range(1, r + 1):
        total = sum(f.kij(i, s) for s in range(i, r + 1))
        if total != f.nu[i - 1]:
            report.add("LR1-content", i, None, f"{total} != {f.nu[i - 1]}")

    for j in range(2, r + 1):
        for i in range(1, j + 1):
            if f.partial_row(i, j) > f.partial_row(i - 1, j - 1):
                report.add("LR2", i, j)

    for i in range(1, r):
        for j in range(i, r):
            upper = sum(f.kij(i + 1, s) for s in range(i + 1, j + 2))
            lower = sum(f.kij(i, s) for s in range(i, j + 1))
            if upper > lower:
                report.add("LR3", i, j)
    return report


def require_valid(f: LRFilling) -> None:
    report = validate_lr(f)
    if not report.ok:
        raise InvalidInput(f"not a Littlewood-Richardson filling: {report.summary()}")


@dataclass(frozen=True)
class TableauGrid:
    """Rows of cells; ``0`` marks an inner (unfilled) box, positive ints are labels."""

    rows: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))

    @property
    def row_lengths(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.rows)

    def inner_lengths(self) -> tuple[int, ...]:
        return tuple(sum(1 for c in row if c == INNER) for row in self.rows)

    def content(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for row in self.rows:
            for c in row:
                if c != INNER:
                    counts[c] = counts.get(c, 0) + 1
        return counts

    def __str__(self) -> str:
        def cell(c):
            return "_" if c == INNER else str(c) if c < 10 else f"<{c}>"

        return " / ".join("".join(cell(c) for c in row) for row in self.rows)


def filling_to_grid(f: LRFilling) -> TableauGrid:
    require_valid(f)
    rows = []
    for j in range(1, f.r + 1):
        row = [INNER] * f.mu[j - 1]
        for i in range(1, j + 1):
            row += [i] * f.kij(i, j)
        rows.append(tuple(row))
    return TableauGrid(tuple(rows), f.r)


def grid_to_filling(g: TableauGrid, mu, nu, lam) -> LRFilling:
    """Count labels per row. Does not check LR conditions; the caller validates."""
    mu, nu, lam = pad_common(mu, nu, lam)
    r = len(lam)
    if len(g.rows) != r:
        raise InvalidInput(f"grid has {len(g.rows)} rows, expected {r}")
    k = []
    for j, row in enumerate(g.rows, start=1):
        if len(row) != lam[j - 1]:
            raise InvalidInput(f"row {j} has length {len(row)}, expected {lam[j - 1]}")
        inner = 0
        while inner < len(row) and row[inner] == INNER:
            inner += 1
        if inner != mu[j - 1] or INNER in row[inner:]:
            raise InvalidInput(f"row {j} does not start with exactly {mu[j - 1]} inner cells")
        counts = [0] * j
        for c in row[inner:]:
            if c > j:
                raise InvalidInput(f"label {c} in row {j} exceeds the row bound")
            counts[c - 1] += 1
        k.append(tuple(counts))
    f = LRFilling(mu, nu, lam, tuple(k))
    for i in range(1, r + 1):
        total = sum(f.kij(i, s) for s in range(1, r + 1))
        if total != nu[i - 1]:
            raise InvalidInput(f"grid has {total} labels {i}, content requires {nu[i - 1]}")
    return f


def _row_choices(j, mu, nu, lam, cum, prev_partials):
    """Yield (row_k, row_partials, new_cum) for every admissible row ``j``.

    ``cum[i-1]`` counts label i in rows < j and ``prev_partials[i]`` is
    lambda^{(i)}_{j-1}. Bounds per entry: content (LR1), column
    strictness against the previous row (LR2) and the word condition
    against label i-1 through row j-1 (LR3).
    """
    r = len(lam)
    target = lam[j - 1] - mu[j - 1]
    if target < 0:
        return
    row = [0] * j

    def rec(i, used, partial):
        choices = [target - used] if i == j else range(0, target - used + 1)
        for v in choices:
            if v < 0 or cum[i - 1] + v > nu[i - 1]:
                break
            new_partial = partial + v
            if j >= 2 and new_partial > prev_partials[i - 1]:
                break
            if i >= 2 and cum[i - 1] + v > cum[i - 2]:
                break
            row[i - 1] = v
            if i == j:
                yield tuple(row)
            else:
                yield from rec(i + 1, used + v, new_partial)

    for row_k in rec(1, 0, mu[j - 1]):
        partials = [mu[j - 1]]
        for v in row_k:
            partials.append(partials[-1] + v)
        new_cum = tuple(cum[i] + (row_k[i] if i < j else 0) for i in range(r))
        yield row_k, tuple(partials), new_cum


def _search(mu, nu, lam) -> Iterator[tuple[tuple[int, ...], ...]]:
    r = len(lam)
    if weight(mu) + weight(nu) != weight(lam):
        return
    acc: list[tuple[int, ...]] = []

    def rec(j, cum, prev_partials):
        if j > r:
            if cum == tuple(nu):
                yield tuple(acc)
            return
        for row_k, partials, new_cum in list(_row_choices(j, mu, nu, lam, cum, prev_partials)):
            acc.append(row_k)
            yield from rec(j + 1, new_cum, partials)
            acc.pop()

    yield from rec(1, (0,) * r, ())


def enumerate_fillings(mu, nu, lam) -> list[LRFilling]:
    """All of LR(mu, nu; lam), lexicographic in k read row by row."""
    mu, nu, lam = pad_common(mu, nu, lam)
    return [LRFilling(mu, nu, lam, k) for k in _search(mu, nu, lam)]


def count_fillings(mu, nu, lam) -> int:
    """|LR(mu, nu; lam)| by memoized backtracking over rows."""
    mu, nu, lam = pad_common(mu, nu, lam)
    r = len(lam)
    if weight(mu) + weight(nu) != weight(lam):
        return 0

    @lru_cache(maxsize=None)
    def rec(j, cum, prev_partials):
        if j > r:
            return 1 if cum == tuple(nu) else 0
        return sum(rec(j + 1, new_cum, partials) for _, partials, new_cum in _row_choices(j, mu, nu, lam, cum, prev_partials))

    return rec(1, (0,) * r, ())
