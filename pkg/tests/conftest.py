import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def random_distinct_rationals(rng: random.Random, n: int, spread: int = 50, den: int = 6):
    out = []
    seen = set()
    while len(out) < n:
        v = Fraction(rng.randint(-spread, spread), rng.randint(1, den))
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


@pytest.fixture
def rng():
    return random.Random(20261015)


def random_gp_points(rng: random.Random, d: int, m: int, spread: int = 12):
    """``m`` integer points in Q^d with no ``d`` of them linearly dependent,
    grown by rejection using the oracle rank."""
    from itertools import combinations

    from oracles import fraction_rank

    pts: list = []
    while len(pts) < m:
        p = tuple(rng.randint(-spread, spread) for _ in range(d))
        if p in pts or not any(p):
            continue
        if d > 1 and any(fraction_rank(list(c) + [p]) < d for c in combinations(pts, d - 1)):
            continue
        pts.append(p)
    return pts
