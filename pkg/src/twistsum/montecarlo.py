"""Seeded Monte Carlo over uniform random permutations.

Samples are drawn in fixed-size chunks; chunk ``c`` gets its own generator
seeded from ``SeedSequence(seed, spawn_key=(c,))``.  Workers only decide who
computes which chunk, so the merged frequency table (and every number
derived from it) does not depend on the worker count.

All reported probabilities are floating point approximations; the value
table itself is exact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ZeroSamples
from .lattice import LatticeCode
from .parallel import pmap
from .scalar import format_scalar
from .support import as_tuple

CHUNK = 1 << 16
_INT64_SAFE = 2**62


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed % 2**64, spawn_key=(chunk,)))


def _schedule(samples: int, chunk: int = CHUNK) -> list[int]:
    full, rem = divmod(samples, chunk)
    return [chunk] * full + ([rem] if rem else [])


def sample_permutations(n: int, samples: int, seed: int, chunk: int = CHUNK) -> np.ndarray:
    """``samples x n`` array of uniform permutations (rows), reproducible."""
    if samples < 1:
        raise ZeroSamples("need at least one sample")
    out = [_chunk_perms(n, cnt, seed, c) for c, cnt in enumerate(_schedule(samples, chunk))]
    return np.concatenate(out)


def _chunk_perms(n: int, count: int, seed: int, c: int) -> np.ndarray:
    base = np.broadcast_to(np.arange(n, dtype=np.int64), (count, n))
    # Generator.permuted shuffles each row independently (Fisher-Yates)
    return _rng(seed, c).permuted(base, axis=1)


def _chunk_table(args) -> dict:
    keys, n, count, seed, c = args
    perms = _chunk_perms(n, count, seed, c)
    if keys.dtype == object:
        sums = [sum(int(keys[i, p[i]]) for i in range(n)) for p in perms]
        return dict(Counter(sums))
    sums = keys[np.arange(n)[None, :], perms].sum(axis=1)
    vals, counts = np.unique(sums, return_counts=True)
    return {int(v): int(k) for v, k in zip(vals, counts)}


@dataclass(frozen=True)
class McReport:
    n: int
    samples: int
    distinct_observed: int
    mode_estimate: float
    mode_value: object
    mode_hits: int
    seed: int
    reference_curve: float
    frequencies: tuple  # (value, count) pairs, ascending value

    @property
    def curve_ratio(self) -> Optional[float]:
        if self.reference_curve == 0:
            return None
        return self.mode_estimate / self.reference_curve

    def to_json(self, with_table: bool = False) -> dict:
        out = {
            "n": self.n,
            "samples": self.samples,
            "distinct_observed": self.distinct_observed,
            "mode_estimate": self.mode_estimate,
            "mode_value": format_scalar(self.mode_value),
            "mode_hits": self.mode_hits,
            "seed": self.seed,
            "reference_curve": self.reference_curve,
            "curve_ratio": self.curve_ratio,
        }
        if with_table:
            out["frequencies"] = [[format_scalar(v), c] for v, c in self.frequencies]
        return out


def sample_sums(a, b, samples: int, seed: int = 0, workers: int = 1) -> McReport:
    """Estimate the distribution of ``S(a, b; pi)`` for uniform ``pi``."""
    if samples < 1:
        raise ZeroSamples("need at least one sample")
    a, b = as_tuple(a), as_tuple(b)
    n = a.n
    prods = [[a[i] * b[j] for j in range(n)] for i in range(n)]
    code = LatticeCode.for_values([p for row in prods for p in row])
    int_keys = [[code.encode(p) for p in row] for row in prods]
    worst = sum(max(abs(k) for k in row) for row in int_keys)
    keys = np.array(int_keys, dtype=np.int64 if worst < _INT64_SAFE else object)
    tasks = [(keys, n, cnt, seed, c) for c, cnt in enumerate(_schedule(samples))]
    table: Counter = Counter()
    for part in pmap(_chunk_table, tasks, workers):
        table.update(part)
    ordered = sorted(table)
    mode_key = min(ordered, key=lambda k: (-table[k], k))
    curve = n ** -2.5 * math.log(n)
    return McReport(
        n=n,
        samples=samples,
        distinct_observed=len(ordered),
        mode_estimate=table[mode_key] / samples,
        mode_value=code.decode(mode_key),
        mode_hits=table[mode_key],
        seed=seed,
        reference_curve=curve,
        frequencies=tuple((code.decode(k), table[k]) for k in ordered),
    )
