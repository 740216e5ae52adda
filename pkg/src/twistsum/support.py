"""Ground truth for twisted dot products.

``S(a, b; pi) = sum_i a[i] * b[pi[i]]``.  Permutations are 0-based sequences
with ``pi[i]`` the image of ``i``.  Everything here is exact; the enumeration
routines are the oracles every certificate is checked against.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DuplicateEntries,
    IndexOutOfRange,
    LengthMismatch,
    MalformedNumber,
    NotAPermutation,
    OverlappingPairs,
    TooLarge,
)
from .lattice import LatticeCode
from .parallel import pmap
from .scalar import (
    GaussianRational,
    Scalar,
    format_scalar,
    parse_scalar,
    scalar_sort_key,
    zero_like,
)

DEFAULT_CAP_N = 12
DEFAULT_CAP_M = 26
DEFAULT_VALUES_LIMIT = 100_000


@dataclass(frozen=True)
class TupleInput:
    """An n-tuple of pairwise distinct exact scalars."""

    entries: tuple
    kind: str = "rational"

    def __post_init__(self):
        entries = tuple(self.entries)
        if self.kind == "gaussian":
            entries = tuple(GaussianRational.coerce(e) for e in entries)
        elif self.kind == "rational":
            if any(isinstance(e, GaussianRational) for e in entries):
                raise MalformedNumber("gaussian entry in a rational tuple")
            entries = tuple(Fraction(e) for e in entries)
        else:
            raise MalformedNumber(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "entries", entries)
        if len(set(entries)) != len(entries):
            seen = set()
            for i, e in enumerate(entries):
                if e in seen:
                    raise DuplicateEntries(f"entry {i} ({e}) repeats an earlier entry")
                seen.add(e)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @classmethod
    def parse(cls, items: Iterable[Any], kind: str = "rational") -> "TupleInput":
        return cls(tuple(parse_scalar(x, kind) for x in items), kind)

    def to_json(self) -> list:
        return [format_scalar(e) for e in self.entries]


def as_tuple(x: Any) -> TupleInput:
    if isinstance(x, TupleInput):
        return x
    x = tuple(x)
    kind = "gaussian" if any(isinstance(e, GaussianRational) for e in x) else "rational"
    return TupleInput(x, kind)


def _check_lengths(a: TupleInput, b: TupleInput) -> int:
    if a.n != b.n:
        raise LengthMismatch(f"len(a)={a.n} but len(b)={b.n}")
    return a.n


def check_permutation(pi: Sequence[int], n: int) -> tuple:
    pi = tuple(pi)
    if len(pi) != n or sorted(pi) != list(range(n)):
        raise NotAPermutation(f"{list(pi)} is not a permutation of range({n})")
    return pi


def twisted_sum(a, b, pi: Sequence[int]) -> Scalar:
    a, b = as_tuple(a), as_tuple(b)
    n = _check_lengths(a, b)
    pi = check_permutation(pi, n)
    total = zero_like("gaussian" if "gaussian" in (a.kind, b.kind) else "rational")
    for i in range(n):
        total = total + a[i] * b[pi[i]]
    return total


def check_disjoint_pairs(pairs: Iterable[Sequence[int]], n: int) -> list[tuple[int, int]]:
    out = []
    used: set[int] = set()
    for pair in pairs:
        j, k = (int(v) for v in pair)
        for v in (j, k):
            if not 0 <= v < n:
                raise IndexOutOfRange(f"index {v} outside range({n})")
        if j == k or j in used or k in used:
            raise OverlappingPairs(f"pair {(j, k)} overlaps an earlier pair")
        used.update((j, k))
        out.append((j, k))
    return out


def product_of_transpositions(n: int, pairs: Iterable[Sequence[int]]) -> list[int]:
    """The permutation swapping each (disjoint) pair and fixing the rest."""
    pi = list(range(n))
    for j, k in check_disjoint_pairs(pairs, n):
        pi[j], pi[k] = pi[k], pi[j]
    return pi


def sum_after_transpositions(a, b, pairs) -> Scalar:
    """``S_0 - sum (a_k - a_j)(b_k - b_j)`` over disjoint transpositions."""
    a, b = as_tuple(a), as_tuple(b)
    n = _check_lengths(a, b)
    pairs = check_disjoint_pairs(pairs, n)
    total = twisted_sum(a, b, range(n))
    for j, k in pairs:
        total = total - (a[k] - a[j]) * (b[k] - b[j])
    return total


@dataclass(frozen=True)
class SupportSummary:
    count: int
    min_value: Scalar
    max_value: Scalar
    mode_value: Scalar
    mode_count: int
    total_permutations: int
    values: Optional[tuple] = None
    multiplicities: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {
            "count": self.count,
            "min_value": format_scalar(self.min_value),
            "max_value": format_scalar(self.max_value),
            "mode_value": format_scalar(self.mode_value),
            "mode_count": self.mode_count,
            "total_permutations": self.total_permutations,
        }
        if self.values is not None:
            out["values"] = [format_scalar(v) for v in self.values]
            out["multiplicities"] = list(self.multiplicities)
        return out


def _product_code(a: TupleInput, b: TupleInput):
    n = a.n
    prods = [[a[i] * b[j] for j in range(n)] for i in range(n)]
    flat = [p for row in prods for p in row]
    code = LatticeCode.for_values(flat)
    keys = [[code.encode(p) for p in row] for row in prods]
    return code, keys


def _count_with_first_image(keys: list, first: int) -> dict:
    """Multiplicity table of sums over permutations with ``pi[0] == first``.

    Dynamic programme over the set of used b-indices; positions are filled
    in order, so a mask with popcount c has positions 1..c assigned.
    """
    n = len(keys)
    rest = [j for j in range(n) if j != first]
    level = {0: {keys[0][first]: 1}}
    for pos in range(1, n):
        row = keys[pos]
        nxt: dict = {}
        for mask, sums in level.items():
            for t, j in enumerate(rest):
                bit = 1 << t
                if mask & bit:
                    continue
                v = row[j]
                d = nxt.setdefault(mask | bit, {})
                for s, c in sums.items():
                    d[s + v] = d.get(s + v, 0) + c
        level = nxt
    (final,) = level.values()
    return final


def support_counter(a, b, cap_n: int = DEFAULT_CAP_N, workers: int = 1):
    """Exact multiplicity of every value of S(a,b;pi) over all n! permutations.

    Returns ``(code, Counter)`` with keys in the lattice encoding.  The work is
    split by the image of position 0; per-worker tables are merged in task
    order.
    """
    a, b = as_tuple(a), as_tuple(b)
    n = _check_lengths(a, b)
    if n > cap_n:
        raise TooLarge(f"n={n} exceeds the exact-enumeration cap {cap_n}")
    if n == 0:
        raise LengthMismatch("empty tuples")
    code, keys = _product_code(a, b)
    parts = pmap(partial(_count_with_first_image, keys), range(n), workers)
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return code, total


def exact_support(
    a,
    b,
    cap_n: int = DEFAULT_CAP_N,
    workers: int = 1,
    values_limit: int = DEFAULT_VALUES_LIMIT,
) -> SupportSummary:
    a, b = as_tuple(a), as_tuple(b)
    code, counter = support_counter(a, b, cap_n, workers)
    keys = sorted(counter)
    mode_key = min(keys, key=lambda k: (-counter[k], k))
    values = mults = None
    if len(keys) <= values_limit:
        values = tuple(code.decode(k) for k in keys)
        mults = tuple(counter[k] for k in keys)
    return SupportSummary(
        count=len(keys),
        min_value=code.decode(keys[0]),
        max_value=code.decode(keys[-1]),
        mode_value=code.decode(mode_key),
        mode_count=counter[mode_key],
        total_permutations=math.factorial(a.n),
        values=values,
        multiplicities=mults,
    )


def exact_mode_mass(a, b, cap_n: int = DEFAULT_CAP_N, workers: int = 1):
    """``(mode_value, mode_count, n!)``; ties go to the smallest value
    (lexicographic (re, im) for Gaussian rationals)."""
    s = exact_support(a, b, cap_n, workers, values_limit=0)
    return s.mode_value, s.mode_count, s.total_permutations


def _subset_sum_keys(keys: Sequence[int]) -> np.ndarray | set:
    lo = sum(k for k in keys if k < 0)
    hi = sum(k for k in keys if k > 0)
    if hi - lo <= 1 << 24:
        bits = 1 << (-lo)
        for k in keys:
            bits = bits | (bits << k) if k >= 0 else bits | (bits >> -k)
        raw = np.frombuffer(bits.to_bytes((bits.bit_length() + 7) // 8, "little"), np.uint8)
        return np.flatnonzero(np.unpackbits(raw, bitorder="little")).astype(object) + lo
    sums = {0}
    for k in keys:
        sums |= {s + k for s in sums}
    return sums


def distinct_subset_sums(values: Sequence[Any], cap_m: int = DEFAULT_CAP_M):
    """Count and sort the distinct sums over all 2^m subsets (empty included).

    Works for rationals, Gaussian rationals (ordered by (re, im)) and
    rational vectors (lexicographic).
    """
    values = list(values)
    if len(values) > cap_m:
        raise TooLarge(f"m={len(values)} exceeds the subset-sum cap {cap_m}")
    code = LatticeCode.for_values(values)
    keys = [code.encode(v) for v in values]
    sums = sorted(int(s) for s in _subset_sum_keys(keys))
    return len(sums), [code.decode(s) for s in sums]


def count_distinct_subset_sums(values: Sequence[Any], cap_m: int = DEFAULT_CAP_M) -> int:
    values = list(values)
    if len(values) > cap_m:
        raise TooLarge(f"m={len(values)} exceeds the subset-sum cap {cap_m}")
    code = LatticeCode.for_values(values)
    return len(_subset_sum_keys([code.encode(v) for v in values]))


def sort_scalars(values: Iterable[Any]) -> list:
    return sorted(values, key=scalar_sort_key)
