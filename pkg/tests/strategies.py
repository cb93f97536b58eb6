import random

from hypothesis import strategies as st

from oracles import random_filling


def fillings(rmax: int = 3, top: int = 5):
    """LR fillings drawn through a seeded generator, so every draw is a valid filling."""
    return st.integers(min_value=0, max_value=2**32 - 1).map(lambda seed: random_filling(random.Random(seed), rmax, top))


def partitions(max_len: int = 5, top: int = 9):
    return st.lists(st.integers(min_value=0, max_value=top), max_size=max_len).map(lambda xs: tuple(sorted(xs, reverse=True)))
