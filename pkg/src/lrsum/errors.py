"""Exception types shared across the package."""


class LRSumError(Exception):
    """Base class for all errors raised by lrsum."""


class InvalidInput(LRSumError, ValueError):
    """An input object (partition, filling, hive, flow, JSON file) is malformed or invalid."""


class ShapeError(InvalidInput):
    """A triangular array does not have the shape its size requires."""


class InvariantError(LRSumError, RuntimeError):
    """An internal invariant failed: the algorithm reached a state it should never reach."""


class TraceMismatch(LRSumError, ValueError):
    """A step trace refers to flow that is not present on the honeycomb."""
