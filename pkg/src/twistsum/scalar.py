"""Exact scalars: rationals, Gaussian rationals and rational vectors.

Rationals are :class:`fractions.Fraction`, which already stores values in
lowest terms with a positive denominator.  Gaussian rationals and vectors are
small immutable wrappers around Fractions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Union

from .errors import DimensionMismatch, MalformedNumber, ZeroDenominator

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class GaussianRational:
    """A complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    @classmethod
    def coerce(cls, x: Any) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        return NotImplemented

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __eq__(self, other: object) -> bool:
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        # agree with hash(Fraction) for real values, since they compare equal
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus ``re**2 + im**2``."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()


Scalar = Union[Fraction, GaussianRational]


@dataclass(frozen=True)
class RationalVector:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        if not self.coords:
            raise DimensionMismatch("vectors must have positive dimension")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other: "RationalVector") -> None:
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "RationalVector":
        return RationalVector(tuple(-x for x in self.coords))

    def scale(self, c) -> "RationalVector":
        return RationalVector(tuple(c * x for x in self.coords))

    def dot(self, other: "RationalVector") -> Fraction:
        self._check(other)
        return sum((x * y for x, y in zip(self.coords, other.coords)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self) -> str:
        return "RationalVector(" + ", ".join(str(c) for c in self.coords) + ")"


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, bool):
        raise MalformedNumber(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedNumber(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise MalformedNumber(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDenominator(f"zero denominator in {text!r}")
    return Fraction(num, den)


def parse_scalar(text: Any, kind: str = "rational") -> Scalar:
    """Parse ``"p/q"``/``"p"`` (kind ``rational``) or ``{"re":..,"im":..}``
    (kind ``gaussian``).  A bare rational is accepted for the gaussian kind
    and read as a real value."""
    if kind == "rational":
        return parse_rational(text)
    if kind == "gaussian":
        if isinstance(text, dict):
            extra = set(text) - {"re", "im"}
            if extra or "re" not in text:
                raise MalformedNumber(f"bad gaussian object: {text!r}")
            return GaussianRational(
                parse_rational(text["re"]), parse_rational(text.get("im", "0"))
            )
        return GaussianRational(parse_rational(text), 0)
    raise MalformedNumber(f"unknown scalar kind {kind!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x: Any) -> Any:
    """Inverse of :func:`parse_scalar`."""
    if isinstance(x, GaussianRational):
        return {"re": format_rational(x.re), "im": format_rational(x.im)}
    if isinstance(x, RationalVector):
        return [format_rational(c) for c in x.coords]
    return format_rational(x)


def parse_vector(items: Iterable[Any]) -> RationalVector:
    if isinstance(items, (str, dict)):
        raise MalformedNumber(f"not a vector: {items!r}")
    return RationalVector(tuple(parse_rational(c) for c in items))


def compare_total(x: Fraction, y: Fraction) -> str:
    """Return ``"less"``, ``"equal"`` or ``"greater"`` by cross-multiplication."""
    x, y = Fraction(x), Fraction(y)
    lhs = x.numerator * y.denominator
    rhs = y.numerator * x.denominator
    if lhs < rhs:
        return "less"
    if lhs > rhs:
        return "greater"
    return "equal"


def scalar_sort_key(x: Any) -> tuple:
    """Deterministic order: numeric for rationals, lexicographic (re, im)
    for Gaussian rationals, lexicographic coordinates for vectors."""
    if isinstance(x, GaussianRational):
        return (x.re, x.im)
    if isinstance(x, RationalVector):
        return x.coords
    return (Fraction(x), Fraction(0))


def real_part(x: Any) -> Fraction:
    return x.re if isinstance(x, GaussianRational) else Fraction(x)


def imag_part(x: Any) -> Fraction:
    return x.im if isinstance(x, GaussianRational) else Fraction(0)


def is_real_multiple(z: Any, w: Any) -> bool:
    """True when ``z = λ w`` for a real λ.  Zero on either side counts as a
    real multiple (degenerate)."""
    z = GaussianRational.coerce(z)
    w = GaussianRational.coerce(w)
    if not z or not w:
        return True
    return (z * w.conjugate()).im == 0


def zero_like(kind: str) -> Scalar:
    return GaussianRational(0, 0) if kind == "gaussian" else Fraction(0)
