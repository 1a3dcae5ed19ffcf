import random
from fractions import Fraction
from pathlib import Path

import pytest

from unclab.resolutions import Resolution

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


def rand_resolution(rng: random.Random, max_len: int = 6, max_k: int = 4,
                    k: int | None = None) -> Resolution:
    if k is None:
        k = rng.randint(1, max_k)
    n = rng.randint(1, max_len)
    pattern = tuple(rng.randint(1, k) for _ in range(n))
    alpha = tuple(Fraction(rng.randint(1, 8), rng.randint(1, 8))
                  for _ in range(n))
    return Resolution(k, pattern, alpha)


def rand_sparse(rng: random.Random, dim: int, denom: int = 8,
                allow_zero: bool = False):
    from unclab.norms import SparseVector
    while True:
        entries = [(i, Fraction(rng.randint(-denom, denom), denom))
                   for i in range(1, dim + 1)]
        v = SparseVector.from_pairs([(i, x) for i, x in entries if x != 0])
        if allow_zero or not v.is_zero():
            return v
