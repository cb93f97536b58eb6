from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Failure:
    """One violated condition, e.g. ``Failure("LR2", 2, 3)`` or ``Failure("right", 2, 1)``."""

    condition: str
    i: int | None = None
    j: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        where = "" if self.i is None else f" at ({self.i},{self.j})" if self.j is not None else f" at {self.i}"
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.condition}{where}{tail}"


@dataclass
class ValidationReport:
    """Outcome of a validity check.

    ``structural`` holds shape problems (the object could not be checked
    at all); ``failures`` holds violations of the defining conditions.
    """

    failures: list[Failure] = field(default_factory=list)
    structural: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.structural

    def __bool__(self) -> bool:
        return self.ok

    def conditions(self) -> set[str]:
        return {f.condition for f in self.failures + self.structural}

    def add(self, condition: str, i: int | None = None, j: int | None = None, detail: str = "") -> None:
        self.failures.append(Failure(condition, i, j, detail))

    def add_structural(self, condition: str, detail: str = "") -> None:
        self.structural.append(Failure(condition, detail=detail))

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(f) for f in self.structural + self.failures)
