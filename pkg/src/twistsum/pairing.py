"""Greedy multi-scale pairing of a sorted real tuple.

Pair number ``p`` (1-based) is the pair ``j < k`` of still-unpaired indices
with exactly ``p - 1`` unpaired indices strictly between them that minimises
``a[k] - a[j]``.  The resulting differences ``x(1), x(2), ...`` are
superadditive and there are at least ``ceil((n - 1) / 3)`` of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DuplicateEntries, MalformedNumber, NonPositiveValue
from .scalar import GaussianRational, format_scalar

PROOF_RULE = "proof"
TEXT_RULE = "text"


@dataclass(frozen=True)
class PairFamily:
    """Pairs ``(j, k)`` index the *sorted* tuple; ``order[r]`` is the original
    index of the r-th smallest entry."""

    pairs: tuple
    order: tuple
    x: tuple
    rule: str = PROOF_RULE

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def r(self) -> int:
        return len(self.pairs)

    def original_pairs(self) -> list[tuple[int, int]]:
        return [(self.order[j], self.order[k]) for j, k in self.pairs]

    def truncate(self, m: int) -> "PairFamily":
        return PairFamily(self.pairs[:m], self.order, self.x[:m], self.rule)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rule": self.rule,
            "pairs": [list(p) for p in self.pairs],
            "original_pairs": [list(p) for p in self.original_pairs()],
            "order": list(self.order),
            "x": [format_scalar(v) for v in self.x],
        }


def check_superadditive(x: Sequence) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check ``x(u+v) >= x(u) + x(v)`` for all ``u + v <= r`` (1-based).

    Returns ``(True, None)`` or ``(False, (u, v))`` for the first violation in
    (u, v) lexicographic order.
    """
    x = [Fraction(v) for v in x]
    for i, v in enumerate(x):
        if v <= 0:
            raise NonPositiveValue(f"x({i + 1}) = {v} is not positive")
    r = len(x)
    for u in range(1, r + 1):
        for v in range(1, r - u + 1):
            if x[u + v - 1] < x[u - 1] + x[v - 1]:
                return False, (u, v)
    return True, None


def sorted_order(values: Sequence) -> list[int]:
    if any(isinstance(v, GaussianRational) and v.im != 0 for v in values):
        raise MalformedNumber("greedy pairing needs real entries")
    vals = [v.re if isinstance(v, GaussianRational) else Fraction(v) for v in values]
    order = sorted(range(len(vals)), key=vals.__getitem__)
    for r in range(1, len(order)):
        if vals[order[r]] == vals[order[r - 1]]:
            raise DuplicateEntries(f"value {vals[order[r]]} occurs more than once")
    return order


def greedy_pairs(a: Sequence, rule: str = PROOF_RULE) -> PairFamily:
    """Run the greedy pairing on the distinct real entries of ``a``.

    ``rule="text"`` is the literal alternative reading in which pair ``p``
    needs ``p - 2`` in-between unpaired indices (the first pair is
    unconstrained).  It is kept only for regression comparison: it does not
    produce superadditive differences in general.
    """
    if rule not in (PROOF_RULE, TEXT_RULE):
        raise ValueError(f"unknown rule {rule!r}")
    entries = list(a)
    order = sorted_order(entries)
    vals = [
        e.re if isinstance(e, GaussianRational) else Fraction(e)
        for e in (entries[i] for i in order)
    ]
    n = len(vals)
    unpaired = list(range(n))
    pairs: list[tuple[int, int]] = []
    x: list[Fraction] = []
    p = 1
    while True:
        gap = p - 1 if rule == PROOF_RULE else max(p - 2, 0)
        best = None
        for i in range(len(unpaired) - gap - 1):
            j, k = unpaired[i], unpaired[i + gap + 1]
            d = vals[k] - vals[j]
            if best is None or d < best[0]:
                best = (d, j, k)
        if best is None:
            break
        d, j, k = best
        pairs.append((j, k))
        x.append(d)
        unpaired.remove(j)
        unpaired.remove(k)
        p += 1

    family = PairFamily(tuple(pairs), tuple(order), tuple(x), rule)
    if rule == PROOF_RULE:
        if len(pairs) < -(-(n - 1) // 3):
            raise AssertionError(f"only {len(pairs)} pairs for n={n}")
        if x:
            ok, bad = check_superadditive(x)
            if not ok:
                raise AssertionError(f"pair differences not superadditive at {bad}")
    return family
