"""Additive integer keys for exact scalars and vectors.

Values are scaled by a common denominator to integer component tuples, then
packed into one Python int with signed mixed-radix digits.  The packing is
additive (key(x) + key(y) == key(x + y)) as long as every component of every
sum stays within the declared bound, and it preserves lexicographic order of
the component tuples.  Hot loops (enumeration, subset sums, sampling) work on
these ints and only decode at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Any, Iterable, Sequence

from .scalar import GaussianRational, RationalVector


def components(x: Any) -> tuple:
    if isinstance(x, GaussianRational):
        return (x.re, x.im)
    if isinstance(x, RationalVector):
        return x.coords
    return (Fraction(x),)


def from_components(comps: Sequence[Fraction], like: str):
    if like == "gaussian":
        return GaussianRational(comps[0], comps[1])
    if like == "vector":
        return RationalVector(tuple(comps))
    return Fraction(comps[0])


def kind_of(x: Any) -> str:
    if isinstance(x, GaussianRational):
        return "gaussian"
    if isinstance(x, RationalVector):
        return "vector"
    return "rational"


class LatticeCode:
    """Pack integer component tuples ``(c0, c1, ..)`` into a single int.

    ``bounds[i]`` bounds ``|c_{i+1}|`` of any value that will ever be encoded
    or produced by summation; the leading component is unbounded.
    """

    def __init__(self, denom: int, bounds: Sequence[int], like: str):
        self.denom = denom
        self.bounds = tuple(int(b) for b in bounds)
        self.bases = tuple(2 * b + 1 for b in self.bounds)
        self.like = like

    @classmethod
    def for_values(cls, values: Iterable[Any]) -> "LatticeCode":
        """Code fitted to ``values``; sums of any sub-multiset stay in range."""
        values = list(values)
        if not values:
            return cls(1, (), "rational")
        like = kind_of(values[0])
        comps = [components(v) for v in values]
        denom = 1
        for cs in comps:
            for c in cs:
                denom = lcm(denom, c.denominator)
        width = len(comps[0])
        scaled = [[int(c * denom) for c in cs] for cs in comps]
        bounds = [sum(abs(s[i]) for s in scaled) for i in range(1, width)]
        return cls(denom, bounds, like)

    def scaled(self, x: Any) -> list[int]:
        out = []
        for c in components(x):
            v = c * self.denom
            if v.denominator != 1:
                raise ValueError("value not representable with this code")
            out.append(int(v))
        return out

    def encode(self, x: Any) -> int:
        cs = self.scaled(x)
        key = cs[0]
        for c, base in zip(cs[1:], self.bases):
            key = key * base + c
        return key

    def decode(self, key: int):
        digits = []
        for bound, base in zip(reversed(self.bounds), reversed(self.bases)):
            r = (key + bound) % base - bound
            digits.append(r)
            key = (key - r) // base
        digits.append(key)
        digits.reverse()
        return from_components([Fraction(d, self.denom) for d in digits], self.like)
