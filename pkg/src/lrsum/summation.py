"""Sum of two LR fillings into a filling of the direct-sum type.

Cells are addressed as 1-based (row, column) pairs. Reading order walks
rows top to bottom and each row right to left; a cell is weakly
north-east of another iff it comes no later in reading order.

Pipeline: relabel contents, merge rows by length, push inner boxes to the
top of each column, fix labels that are too large for their row (top row
first, largest label first), then repeatedly fix the first bad box (word
or column-strict), and finally sort each row.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidInput, InvariantError
from .lr_filling import INNER, LRFilling, TableauGrid, filling_to_grid, grid_to_filling, require_valid, validate_lr
from .partition import Partition, direct_sum

log = logging.getLogger(__name__)

Cell = tuple[int, int]

ROW_BOUND = "RowBound"
WORD = "Word"
COLUMN_STRICT = "ColumnStrict"
REORDER = "Reorder"
MU_SWITCH = "MuSwitch"

ROW_BOUND_PHASE = "RowBoundPhase"
GENERAL_PHASE = "GeneralPhase"

STEP_CAP_FACTOR = 16


@dataclass(frozen=True)
class LabelMap:
    """Merged labels for each source: ``first[i-1]`` is the new name of label i of the first filling.

    ``rows`` lists, for every merged row, the (source, source row) it
    came from; source 0 is the first filling.
    """

    first: tuple[int, ...]
    second: tuple[int, ...]
    rows: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.first) + len(self.second)

    def source_map(self, source: int) -> tuple[int, ...]:
        return self.first if source == 0 else self.second

    def merged_row(self, source: int, row: int) -> int:
        return self.rows.index((source, row)) + 1


@dataclass(frozen=True)
class Violation:
    kind: str
    location: Cell
    labels: tuple[int, int]
    partner: Cell | None = None


@dataclass(frozen=True)
class Step:
    """One swap. Cells of ``strand_a`` held ``labels[0]`` and now hold ``labels[1]``; ``strand_b`` the reverse.

    A ``MuSwitch`` step instead exchanges the first cells of two adjacent
    rows so that the longer inner prefix moves up; there ``labels`` holds
    the inner counts (upper, lower) before the switch.
    """

    kind: str
    strand_a: tuple[Cell, ...]
    strand_b: tuple[Cell, ...]
    labels: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "strand_a": [list(c) for c in self.strand_a],
            "strand_b": [list(c) for c in self.strand_b],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Step":
        try:
            return cls(
                data["kind"],
                tuple(tuple(c) for c in data["strand_a"]),
                tuple(tuple(c) for c in data["strand_b"]),
                tuple(data["labels"]),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed trace step: {exc}") from exc


@dataclass
class StepTrace:
    """Every step taken, with the merged grid before normalizing and the final sorted grid."""

    steps: list[Step] = field(default_factory=list)
    initial: TableauGrid | None = None
    final: TableauGrid | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]

    @classmethod
    def from_json(cls, items: list[dict]) -> "StepTrace":
        return cls([Step.from_json(item) for item in items])

    def replay(self, g: TableauGrid | None = None) -> TableauGrid:
        """Apply every step to ``g`` (default: the recorded start) and sort the rows."""
        g = self.initial if g is None else g
        if g is None:
            raise InvalidInput("trace has no starting grid")
        for step in self.steps:
            g = apply_step(g, step)
        return finalize_rows(g)


# -- relabeling and merging -------------------------------------------------


def _merge(a: Sequence, b: Sequence, a_first) -> list[tuple[int, int]]:
    """Stable two-way merge; yields (source, index) with source 0 for ``a``."""
    out, i, j = [], 0, 0
    while i < len(a) or j < len(b):
        if j == len(b) or (i < len(a) and a_first(a[i], b[j])):
            out.append((0, i))
            i += 1
        else:
            out.append((1, j))
            j += 1
    return out


def _labels_from_order(order: list[tuple[int, int]], r1: int, r2: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    first, second = [0] * r1, [0] * r2
    for new, (src, idx) in enumerate(order, start=1):
        (first if src == 0 else second)[idx] = new
    return tuple(first), tuple(second)


def merge_row_order(f1: LRFilling, f2: LRFilling) -> list[tuple[int, int]]:
    """Rows by weakly decreasing length; among equal lengths the first filling's rows go first."""
    g1, g2 = filling_to_grid(f1).rows, filling_to_grid(f2).rows
    return [(src, idx + 1) for src, idx in _merge(g1, g2, lambda a, b: len(a) >= len(b))]


def relabel_contents(f1: LRFilling, f2: LRFilling) -> LabelMap:
    """Merge the parts of both contents in decreasing order to name labels 1..n.

    For equal parts the smaller label goes to the content that starts in
    the higher merged row (the highest row holding one of its boxes);
    remaining ties go to the first filling.
    """
    require_valid(f1)
    require_valid(f2)
    rows = merge_row_order(f1, f2)
    position = {row: t for t, row in enumerate(rows, start=1)}

    def key(f, src):
        out = []
        for i in range(1, f.r + 1):
            hits = [position[(src, j)] for j in range(i, f.r + 1) if f.kij(i, j) > 0]
            out.append((f.nu.part(i - 1), min(hits) if hits else None))
        return out

    def a_first(a, b):
        if a[0] != b[0]:
            return a[0] > b[0]
        if a[1] is None or b[1] is None:
            return True
        return a[1] <= b[1]

    first, second = _labels_from_order(_merge(key(f1, 0), key(f2, 1), a_first), f1.r, f2.r)
    return LabelMap(first, second, tuple(rows))


def initial_grid(f1: LRFilling, f2: LRFilling, labels: LabelMap) -> TableauGrid:
    """Relabel both grids and stack their rows in merged order, cells untouched within rows."""
    sources = (filling_to_grid(f1).rows, filling_to_grid(f2).rows)
    rows = []
    for src, j in labels.rows:
        relabel = labels.source_map(src)
        rows.append(tuple(INNER if c == INNER else relabel[c - 1] for c in sources[src][j - 1]))
    return TableauGrid(tuple(rows), labels.n)


def normalize_inner(g: TableauGrid) -> TableauGrid:
    """Within each column, move inner boxes above labeled ones, keeping label order."""
    rows = [list(row) for row in g.rows]
    width = max((len(row) for row in rows), default=0)
    for c in range(width):
        members = [j for j, row in enumerate(rows) if c < len(row)]
        column = [rows[j][c] for j in members]
        column = [v for v in column if v == INNER] + [v for v in column if v != INNER]
        for j, v in zip(members, column):
            rows[j][c] = v
    return TableauGrid(tuple(tuple(row) for row in rows), g.n)


def normalize_steps(g: TableauGrid) -> tuple[TableauGrid, list[Step]]:
    """Same result as ``normalize_inner``, reached by switching row prefixes.

    Whenever a row has fewer inner boxes than the row below it, the first
    ``md`` cells of the two rows trade places, ``md`` being the lower
    count. Repeats until inner counts decrease down the grid.
    """
    rows = [list(row) for row in g.rows]
    steps = []
    inner = [sum(1 for v in row if v == INNER) for row in rows]
    changed = True
    while changed:
        changed = False
        for t in range(len(rows) - 1):
            m, md = inner[t], inner[t + 1]
            if md <= m:
                continue
            rows[t][:md], rows[t + 1][:md] = rows[t + 1][:md], rows[t][:md]
            inner[t], inner[t + 1] = md, sum(1 for v in rows[t + 1] if v == INNER)
            lower = tuple((t + 2, c) for c in range(1, md + 1))
            upper = tuple((t + 1, c) for c in range(1, md + 1))
            steps.append(Step(MU_SWITCH, lower, upper, (m, md)))
            changed = True
    return TableauGrid(tuple(tuple(row) for row in rows), g.n), steps


# -- violations --------------------------------------------------------------


def reading_order(g: TableauGrid) -> list[Cell]:
    return [(j, c) for j, row in enumerate(g.rows, start=1) for c in range(len(row), 0, -1)]


def _at(g: TableauGrid, cell: Cell) -> int:
    j, c = cell
    return g.rows[j - 1][c - 1]


def _below(g: TableauGrid, cell: Cell) -> int | None:
    j, c = cell
    if j < len(g.rows) and c <= len(g.rows[j]):
        return g.rows[j][c - 1]
    return None


def _clashes(g: TableauGrid, cell: Cell, a: int) -> tuple[int, int]:
    """How badly label ``a`` would sit at ``cell``: (equal neighbours, column-order breaks)."""
    j, c = cell
    up = g.rows[j - 2][c - 1] if j >= 2 else INNER
    down = _below(g, cell)
    down = INNER if down is None else down
    equal = (up == a) + (down == a)
    broken = (up != INNER and up >= a) + (down != INNER and down <= a)
    return equal, broken


def _smaller_in_row(g: TableauGrid, j: int, a: int) -> Cell | None:
    """A cell of row j holding a label below ``a`` that can take ``a`` with the fewest clashes.

    Among equally good cells the largest label wins, then the rightmost.
    """
    cells = [(j, c) for c, v in enumerate(g.rows[j - 1], start=1) if v != INNER and v < a]
    if not cells:
        return None
    return min(cells, key=lambda cell: (_clashes(g, cell, a), -_at(g, cell), -cell[1]))


def next_violation(g: TableauGrid, phase: str) -> Violation | None:
    if phase == ROW_BOUND_PHASE:
        for j, row in enumerate(g.rows, start=1):
            too_big = [v for v in row if v > j]
            if too_big:
                v = max(too_big)
                c = max(c for c, x in enumerate(row, start=1) if x == v)
                return Violation(ROW_BOUND, (j, c), (j, v))
        return None
    if phase != GENERAL_PHASE:
        raise ValueError(f"unknown phase {phase!r}")

    seen: dict[int, int] = {}
    finished_rows: dict[int, int] = {}  # label -> count in rows above the current one
    current_row = 0
    for cell in reading_order(g):
        j = cell[0]
        if j != current_row:
            finished_rows = dict(seen)
            current_row = j
        a = _at(g, cell)
        if a == INNER:
            continue
        b = _below(g, cell)
        if b is not None and b != INNER and b <= a:
            # Equal labels stacked: trade with a smaller label elsewhere in the lower
            # row, or failing that rearrange the upper row, or reach further down.
            kind, partner = COLUMN_STRICT, (j + 1, cell[1]) if b < a else _smaller_in_row(g, j + 1, a)
            if partner is None:
                kind, partner = REORDER, _smaller_in_row(g, j, a)
            for lower in range(j + 2, len(g.rows) + 1):
                if partner is not None:
                    break
                kind, partner = COLUMN_STRICT, _smaller_in_row(g, lower, a)
            if partner is None:
                raise InvariantError(f"label {a} sits above an equal label at {cell} with nothing smaller to trade")
            return Violation(kind, cell, (_at(g, partner), a), partner)
        seen[a] = seen.get(a, 0) + 1
        if a >= 2 and seen[a] > finished_rows.get(a - 1, 0):
            return Violation(WORD, cell, (a - 1, a))
    return None


def _strand_swap(g: TableauGrid, v: Violation) -> tuple[tuple[Cell, ...], tuple[Cell, ...]]:
    small, big = v.labels
    order = reading_order(g)
    if v.kind == ROW_BOUND:
        row = v.location[0]
        start = next(t for t, cell in enumerate(order) if cell[0] == row)
    else:
        row = None
        start = order.index(v.location)
    smalls: list[Cell] = []
    bigs: list[Cell] = []
    for cell in order[start:]:
        a = _at(g, cell)
        if a == big:
            bigs.append(cell)
        elif a == small and (row is None or cell[0] > row):
            smalls.append(cell)
            if len(smalls) == len(bigs):
                return tuple(smalls), tuple(bigs)
    raise InvariantError(f"no pivot for {v.kind} violation of {big} over {small} at {v.location} in {g}")


def resolve_violation(g: TableauGrid, v: Violation) -> tuple[TableauGrid, Step]:
    rows = [list(row) for row in g.rows]
    if v.kind in (COLUMN_STRICT, REORDER):
        (j, c), (pj, pc) = v.location, v.partner
        lower, upper = v.labels
        rows[j - 1][c - 1], rows[pj - 1][pc - 1] = lower, upper
        step = Step(v.kind, (v.partner,), (v.location,), (lower, upper))
    else:
        smalls, bigs = _strand_swap(g, v)
        small, big = v.labels
        for j, c in smalls:
            rows[j - 1][c - 1] = big
        for j, c in bigs:
            rows[j - 1][c - 1] = small
        step = Step(v.kind, smalls, bigs, (small, big))
    return TableauGrid(tuple(tuple(row) for row in rows), g.n), step


def apply_step(g: TableauGrid, step: Step) -> TableauGrid:
    """Replay a recorded swap on a grid."""
    rows = [list(row) for row in g.rows]
    if step.kind == MU_SWITCH:
        for (j, c), (pj, pc) in zip(step.strand_a, step.strand_b):
            if rows[j - 1][c - 1] != INNER:
                raise InvalidInput(f"mu switch expects an inner box at {(j, c)}")
            rows[j - 1][c - 1], rows[pj - 1][pc - 1] = rows[pj - 1][pc - 1], rows[j - 1][c - 1]
        return TableauGrid(tuple(tuple(row) for row in rows), g.n)
    small, big = step.labels
    for cells, expect, put in ((step.strand_a, small, big), (step.strand_b, big, small)):
        for j, c in cells:
            if rows[j - 1][c - 1] != expect:
                raise InvalidInput(f"step expects {expect} at {(j, c)}, found {rows[j - 1][c - 1]}")
            rows[j - 1][c - 1] = put
    return TableauGrid(tuple(tuple(row) for row in rows), g.n)


def finalize_rows(g: TableauGrid) -> TableauGrid:
    rows = []
    for row in g.rows:
        inner = [c for c in row if c == INNER]
        rows.append(tuple(inner + sorted(c for c in row if c != INNER)))
    return TableauGrid(tuple(rows), g.n)


# -- driver ------------------------------------------------------------------


def summed_type(f1: LRFilling, f2: LRFilling) -> tuple[Partition, Partition, Partition]:
    return direct_sum(f1.mu, f2.mu), direct_sum(f1.nu, f2.nu), direct_sum(f1.lam, f2.lam)


def step_cap(f1: LRFilling, f2: LRFilling, factor: int = STEP_CAP_FACTOR) -> int:
    n = f1.r + f2.r
    return factor * max(n, 1) * max(sum(f1.lam) + sum(f2.lam), 1)


def sum_fillings(f1: LRFilling, f2: LRFilling, cap_factor: int = STEP_CAP_FACTOR) -> tuple[LRFilling, StepTrace]:
    labels = relabel_contents(f1, f2)
    mu, nu, lam = summed_type(f1, f2)
    start = initial_grid(f1, f2, labels)
    g, switches = normalize_steps(start)
    if g != normalize_inner(start):
        raise InvariantError("row-prefix switching disagrees with the column sort")
    if g.inner_lengths() != mu.parts or g.row_lengths != lam.parts:
        raise InvariantError(f"merged grid {g} does not have shape {lam}/{mu}")
    trace = StepTrace(switches, initial=start)
    cap = step_cap(f1, f2, cap_factor) + len(switches)
    for phase in (ROW_BOUND_PHASE, GENERAL_PHASE):
        while (v := next_violation(g, phase)) is not None:
            if len(trace.steps) >= cap:
                raise InvariantError(f"step cap {cap} exceeded")
            g, step = resolve_violation(g, v)
            log.debug("%s %s -> %s", phase, step, g)
            trace.steps.append(step)
    g = finalize_rows(g)
    trace.final = g
    out = grid_to_filling(g, mu, nu, lam)
    report = validate_lr(out)
    if not report.ok:
        raise InvariantError(f"summed filling is not LR: {report.summary()}")
    return out, trace
