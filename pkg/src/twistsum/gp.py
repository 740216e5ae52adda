"""Distinct subset sums of point sets in general position.

A set ``A`` of ``m`` vectors in Q^d is in general position (of order d) when
no d of them are linearly dependent.  The induction removes a well-chosen
point ``w*``, projects the rest onto the complement of ``w*`` and recurses in
one dimension lower, giving

    B(d, m) = B(d, m-1) + B(d-1, ceil((m-1)/2))     for m >= d,
    B(1, m) = r(r+1)/2 + 1                           with r = ceil(m/2),
    B(d, m) = m + 1                                  for m < d.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Optional, Sequence

from .errors import DimensionMismatch, DuplicatePoints, NotValidated, ZeroNormDirection
from .scalar import RationalVector, format_scalar, parse_vector


@dataclass(frozen=True)
class PointSet:
    points: tuple
    d: int
    validated: bool = False

    def __post_init__(self):
        pts = tuple(p if isinstance(p, RationalVector) else RationalVector(tuple(p)) for p in self.points)
        for p in pts:
            if p.dim != self.d:
                raise DimensionMismatch(f"point {p} does not have dimension {self.d}")
        if len(set(pts)) != len(pts):
            raise DuplicatePoints("point set contains repeated points")
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @classmethod
    def parse(cls, obj: dict) -> "PointSet":
        d = int(obj["d"])
        return cls(tuple(parse_vector(p) for p in obj["points"]), d)

    def to_json(self) -> dict:
        return {"d": self.d, "points": [format_scalar(p) for p in self.points]}


def _integer_row(v: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in v:
        den = math.lcm(den, Fraction(c).denominator)
    return [int(Fraction(c) * den) for c in v]


def integer_rank(rows: Sequence[Sequence[Any]]) -> int:
    """Rank of a rational matrix by Bareiss fraction-free elimination."""
    mat = [_integer_row(r) for r in rows]
    if not mat:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                mat[i][j] = (mat[i][j] * p - mat[i][col] * mat[rank][j]) // prev
            mat[i][col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def validate_general_position(A: PointSet, d: Optional[int] = None):
    """``(True, None)`` if no ``d`` points of ``A`` are linearly dependent,
    else ``(False, first_violating_subset)``.  For ``d = 1`` this means no
    zero point."""
    d = A.d if d is None else d
    if d != A.d:
        raise DimensionMismatch(f"point set has dimension {A.d}, not {d}")
    if d == 1:
        for p in A.points:
            if p.is_zero():
                return False, [p]
        return True, None
    for subset in combinations(A.points, d):
        if integer_rank([p.coords for p in subset]) < d:
            return False, list(subset)
    return True, None


def validated(A: PointSet) -> PointSet:
    ok, bad = validate_general_position(A)
    if not ok:
        raise NotValidated(f"not in general position: {bad}")
    return PointSet(A.points, A.d, validated=True)


def direction_key(v: RationalVector) -> tuple:
    """Primitive integer direction, first nonzero coordinate positive.

    Two nonzero vectors are scalar multiples of each other iff their keys
    are equal.
    """
    row = _integer_row(v.coords)
    g = 0
    for c in row:
        g = math.gcd(g, c)
    if g == 0:
        raise ZeroNormDirection("zero vector has no direction")
    row = [c // g for c in row]
    lead = next(c for c in row if c != 0)
    if lead < 0:
        row = [-c for c in row]
    return tuple(row)


def parallel_pair_census(A: PointSet) -> list[list[tuple[int, int]]]:
    """For each ``w`` (by index) the pairs ``{u, v}`` of other points with
    ``v - u`` a scalar multiple of ``w``.  Indices refer to ``A.points``."""
    pts = A.points
    buckets: dict[tuple, list[tuple[int, int]]] = defaultdict(list)
    for i, j in combinations(range(len(pts)), 2):
        buckets[direction_key(pts[j] - pts[i])].append((i, j))
    out = []
    for w, p in enumerate(pts):
        if p.is_zero():
            out.append([])
            continue
        out.append([(i, j) for i, j in buckets.get(direction_key(p), []) if w not in (i, j)])
    return out


def choose_wstar(A: PointSet):
    """Index of a point ``w*`` minimising ``|A_w|`` (first in input order on
    ties) and its pair collection ``A_{w*}``."""
    if not A.validated:
        raise NotValidated("choose_wstar needs a validated point set")
    if not A.m >= A.d >= 2:
        raise ValueError(f"choose_wstar needs m >= d >= 2 (m={A.m}, d={A.d})")
    census = parallel_pair_census(A)
    best = min(range(A.m), key=lambda w: (len(census[w]), w))
    pairs = census[best]
    # pairs are disjoint across w, so the average is at most (m-1)/2
    if 2 * len(pairs) > A.m - 1:
        raise AssertionError(f"|A_w*| = {len(pairs)} exceeds (m-1)/2 for m={A.m}")
    return best, pairs


def hyperplane_basis(w: RationalVector) -> tuple[int, list[tuple[int, int]]]:
    """Integer basis of ``w``-perp from eliminating on the last nonzero
    coordinate ``p``: one vector per free coordinate ``f``, equal to
    ``den * e_f - num * e_p`` where ``w_f / w_p = num / den``.

    Returns ``(p, [(f, den), ...])``; a point ``q`` of the hyperplane has
    coordinate ``q_f / den`` along the vector for ``f``.
    """
    nz = [i for i, c in enumerate(w.coords) if c != 0]
    if not nz:
        raise ZeroNormDirection("cannot project along the zero vector")
    p = nz[-1]
    basis = []
    for f in range(w.dim):
        if f == p:
            continue
        ratio = w.coords[f] / w.coords[p]
        basis.append((f, ratio.denominator))
    return p, basis


def basis_vectors(w: RationalVector) -> list[RationalVector]:
    p, basis = hyperplane_basis(w)
    out = []
    for f, den in basis:
        v = [Fraction(0)] * w.dim
        v[f] = Fraction(den)
        v[p] = -(w.coords[f] / w.coords[p]) * den
        out.append(RationalVector(tuple(v)))
    return out


@dataclass(frozen=True)
class Projection:
    points: PointSet
    basis: list
    collisions: int


def project_complement(A: PointSet, w_index: int, pairs: Optional[Sequence] = None) -> Projection:
    """Project ``A - {w}`` orthogonally onto ``w``-perp, deduplicate, and
    express the result in hyperplane coordinates (dimension ``d - 1``)."""
    w = A.points[w_index]
    ww = w.dot(w)
    if ww == 0:
        raise ZeroNormDirection("projection direction has zero norm")
    _, basis = hyperplane_basis(w)
    seen: dict[RationalVector, None] = {}
    for i, u in enumerate(A.points):
        if i == w_index:
            continue
        q = u - w.scale(u.dot(w) / ww)
        seen.setdefault(RationalVector(tuple(q.coords[f] / den for f, den in basis)), None)
    projected = PointSet(tuple(seen), A.d - 1)
    if pairs is None:
        pairs = parallel_pair_census(A)[w_index]
    if projected.m < A.m - 1 - len(pairs):
        raise AssertionError("projection lost more points than A_w accounts for")
    if A.validated:
        ok, bad = validate_general_position(projected)
        if not ok:
            raise AssertionError(f"projection broke general position: {bad}")
        projected = PointSet(projected.points, projected.d, validated=True)
    return Projection(projected, basis_vectors(w), A.m - 1 - projected.m)


@dataclass(frozen=True)
class GPRecurrenceBound:
    d: int
    m: int
    value: int
    trace: list = field(default_factory=list, compare=False)

    def to_json(self) -> dict:
        return {"d": self.d, "m": self.m, "value": self.value, "trace": self.trace}


def _recurrence_table(d: int, m: int) -> list[list[int]]:
    table = [[0] * (m + 1) for _ in range(d + 1)]
    for k in range(m + 1):
        r = -(-k // 2)
        table[1][k] = r * (r + 1) // 2 + 1
    for dd in range(2, d + 1):
        for k in range(m + 1):
            if k < dd:
                table[dd][k] = k + 1
            else:
                table[dd][k] = table[dd][k - 1] + table[dd - 1][-(-(k - 1) // 2)]
    return table


def gp_recurrence_bound(d: int, m: int) -> GPRecurrenceBound:
    """Evaluate the recurrence lower bound ``B(d, m)``.

    The trace lists every ``(d, m)`` reached, each with its children.
    """
    if d < 1 or m < 0:
        raise ValueError("need d >= 1 and m >= 0")
    table = _recurrence_table(d, m)
    trace = []
    seen = set()
    stack = [(d, m)]
    while stack:
        dd, k = stack.pop()
        if (dd, k) in seen:
            continue
        seen.add((dd, k))
        if dd == 1 or k < dd:
            children = []
        else:
            children = [[dd, k - 1], [dd - 1, -(-(k - 1) // 2)]]
            stack.extend(tuple(c) for c in children)
        trace.append({"d": dd, "m": k, "value": table[dd][k], "children": children})
    trace.sort(key=lambda node: (-node["d"], -node["m"]))
    return GPRecurrenceBound(d, m, table[d][m], trace)


def _same_sign_bound(A: PointSet) -> tuple[int, dict]:
    vals = [p.coords[0] for p in A.points]
    pos = sum(1 for v in vals if v > 0)
    neg = sum(1 for v in vals if v < 0)
    r, sign = (pos, "+") if pos >= neg else (neg, "-")
    bound = r * (r + 1) // 2 + 1
    return bound, {"d": 1, "m": A.m, "same_sign": r, "sign": sign, "bound": bound}


def _constructive(A: PointSet) -> tuple[int, dict]:
    if A.d == 1:
        return _same_sign_bound(A)
    node: dict = {"d": A.d, "m": A.m, "steps": []}
    cur = A
    total = 0
    while cur.m >= cur.d:
        w, pairs = choose_wstar(cur)
        proj = project_complement(cur, w, pairs)
        sub_bound, sub_trace = _constructive(proj.points)
        total += sub_bound
        node["steps"].append(
            {
                "m": cur.m,
                "wstar": format_scalar(cur.points[w]),
                "A_w": len(pairs),
                "projected": proj.points.m,
                "gain": sub_bound,
                "sub": sub_trace,
            }
        )
        rest = tuple(p for i, p in enumerate(cur.points) if i != w)
        cur = PointSet(rest, cur.d, validated=True)
    node["base"] = {"m": cur.m, "bound": cur.m + 1}
    total += cur.m + 1
    node["bound"] = total
    return total, node


def constructive_bound(A: PointSet, d: Optional[int] = None) -> tuple[int, dict]:
    """Lower bound on the distinct subset sums of ``A`` realised by running
    the induction on this concrete set, with a full audit trace."""
    d = A.d if d is None else d
    if d != A.d:
        raise DimensionMismatch(f"point set has dimension {A.d}, not {d}")
    if not A.validated:
        A = validated(A)
    return _constructive(A)
