"""Partitions with an explicit length, direct sums and skew shapes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInput


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing sequence of nonnegative integers.

    Trailing zeros are kept: ``Partition((2, 1, 0))`` has length 3 and is
    not equal to ``Partition((2, 1))``.
    """

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 0 for p in parts):
            raise InvalidInput(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidInput(f"parts are not weakly decreasing: {parts}")

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        """Build the unique partition with the given multiset of parts."""
        return cls(tuple(sorted((int(p) for p in parts), reverse=True)))

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, t):
        return self.parts[t]

    def part(self, t: int) -> int:
        """0-based part access that reads zero past the end."""
        return self.parts[t] if t < len(self.parts) else 0

    def padded(self, length: int) -> "Partition":
        if length < len(self.parts):
            raise InvalidInput(f"cannot pad {self.parts} down to length {length}")
        return Partition(self.parts + (0,) * (length - len(self.parts)))

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def as_partition(a: Partition | Sequence[int]) -> Partition:
    return a if isinstance(a, Partition) else Partition(tuple(a))


def direct_sum(a: Partition | Sequence[int], b: Partition | Sequence[int]) -> Partition:
    """Sort the parts of ``a`` and ``b`` together; the length is the sum of lengths."""
    a, b = as_partition(a), as_partition(b)
    return Partition.from_parts(a.parts + b.parts)


def contains(outer: Partition | Sequence[int], inner: Partition | Sequence[int]) -> bool:
    """True iff the diagram of ``inner`` fits inside the diagram of ``outer``."""
    outer, inner = as_partition(outer), as_partition(inner)
    size = max(len(outer), len(inner))
    return all(inner.part(t) <= outer.part(t) for t in range(size))


def weight(a: Partition | Sequence[int]) -> int:
    return sum(as_partition(a).parts)


def pad_common(*partitions: Partition | Sequence[int]) -> tuple[Partition, ...]:
    """Zero-pad all partitions to the longest length among them."""
    ps = [as_partition(p) for p in partitions]
    size = max((len(p) for p in ps), default=0)
    return tuple(p.padded(size) for p in ps)


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition

    def __post_init__(self):
        outer, inner = pad_common(self.outer, self.inner)
        if not contains(outer, inner):
            raise InvalidInput(f"{inner} is not contained in {outer}")
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)

    @property
    def r(self) -> int:
        return len(self.outer)

    def row_sizes(self) -> tuple[int, ...]:
        return tuple(o - i for o, i in zip(self.outer, self.inner))

    def size(self) -> int:
        return weight(self.outer) - weight(self.inner)
