"""Certificates for Gaussian-rational tuples.

Entries are read as plane points ``(re, im)``.  A line-incidence census
routes each instance: when both tuples have a large collinear subset the
collinear parts are mapped to the real line and handed to the real pipeline;
otherwise index pairs are picked so that the products of differences are
pairwise non-real-multiples, and their distinct subset sums (as vectors in
Q^2) give the certificate.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .errors import (
    CertificateUnavailable,
    DuplicatePoints,
    LengthMismatch,
    NoValidPair,
    NotCollinear,
    TwistSumError,
)
from .gp import PointSet, constructive_bound, gp_recurrence_bound, validate_general_position
from .lattice import LatticeCode
from .scalar import GaussianRational, RationalVector, format_scalar, is_real_multiple, scalar_sort_key
from .support import TupleInput
from .witness import (
    DEFAULT_MAX_FAMILY,
    WitnessCertificate,
    build_certificate,
    certificate_from_family,
)

DEFAULT_MAX_PAIRS = 16


class LineKey(NamedTuple):
    """Line ``{(x, y) : A x + B y = C}`` with coprime integer coefficients
    and the first nonzero of (A, B) positive."""

    A: int
    B: int
    C: int


def _xy(z) -> tuple[Fraction, Fraction]:
    z = GaussianRational.coerce(z)
    return z.re, z.im


def line_through(p, q) -> LineKey:
    (px, py), (qx, qy) = _xy(p), _xy(q)
    A, B = qy - py, px - qx
    if A == 0 and B == 0:
        raise DuplicatePoints("a line needs two distinct points")
    C = A * px + B * py
    den = math.lcm(A.denominator, B.denominator, C.denominator)
    coeffs = [int(v * den) for v in (A, B, C)]
    g = math.gcd(*coeffs)
    coeffs = [c // g for c in coeffs]
    lead = coeffs[0] if coeffs[0] != 0 else coeffs[1]
    if lead < 0:
        coeffs = [-c for c in coeffs]
    return LineKey(*coeffs)


def on_line(key: LineKey, z) -> bool:
    x, y = _xy(z)
    return key.A * x + key.B * y == key.C


@dataclass(frozen=True)
class Case1:
    line: LineKey
    indices: tuple


@dataclass(frozen=True)
class Case2:
    anchors: tuple
    threshold: int


@dataclass(frozen=True)
class BeckReport:
    n: int
    max_collinear: int
    best_line: Optional[LineKey]
    line_count: int
    incidence: tuple
    lines: dict  # LineKey -> sorted tuple of point indices
    case: Union[Case1, Case2, None] = None

    def lines_through(self, i: int) -> list[LineKey]:
        return sorted(k for k, idx in self.lines.items() if i in idx)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "max_collinear": self.max_collinear,
            "best_line": list(self.best_line) if self.best_line else None,
            "line_count": self.line_count,
            "incidence": list(self.incidence),
        }
        if isinstance(self.case, Case1):
            out["case"] = {"kind": "collinear", "line": list(self.case.line), "indices": list(self.case.indices)}
        elif isinstance(self.case, Case2):
            out["case"] = {"kind": "many-lines", "anchors": list(self.case.anchors), "threshold": self.case.threshold}
        return out


def line_stats(points: Sequence) -> BeckReport:
    """Exact census of every line through at least two of the points."""
    pts = [GaussianRational.coerce(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePoints("points must be distinct")
    n = len(pts)
    lines: dict[LineKey, set] = {}
    for i in range(n):
        for j in range(i + 1, n):
            lines.setdefault(line_through(pts[i], pts[j]), set()).update((i, j))
    frozen = {k: tuple(sorted(v)) for k, v in sorted(lines.items())}
    incidence = [0] * n
    for idx in frozen.values():
        for i in idx:
            incidence[i] += 1
    best = None
    max_col = min(n, 1)
    for key, idx in frozen.items():
        if len(idx) > max_col or best is None:
            best, max_col = key, max(len(idx), max_col)
    return BeckReport(n, max_col, best, len(frozen), tuple(incidence), frozen)


def beck_dichotomy(points: Sequence, tau: int) -> BeckReport:
    """Route a point set: ``Case1`` when some line holds at least ``tau``
    points, else ``Case2`` with the anchors (points on at least the
    rounded-up median number of lines, in index order)."""
    if tau < 2:
        raise ValueError("tau must be at least 2")
    rep = line_stats(points)
    if rep.best_line is not None and rep.max_collinear >= tau:
        case: Union[Case1, Case2] = Case1(rep.best_line, rep.lines[rep.best_line])
    else:
        thr = math.ceil(statistics.median(rep.incidence)) if rep.n else 0
        case = Case2(tuple(i for i in range(rep.n) if rep.incidence[i] >= thr), thr)
    return BeckReport(rep.n, rep.max_collinear, rep.best_line, rep.line_count, rep.incidence, rep.lines, case)


def _primitive_direction(d: GaussianRational) -> GaussianRational:
    den = math.lcm(d.re.denominator, d.im.denominator)
    x, y = int(d.re * den), int(d.im * den)
    g = math.gcd(x, y)
    x, y = x // g, y // g
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return GaussianRational(x, y)


def normalize_collinear_to_real(t: Sequence, idx: Sequence[int]):
    """``(alpha, beta, t')`` with ``t' = alpha * t + beta`` real on ``idx``.

    ``alpha`` is the conjugate of the line's primitive integer direction
    (sign-normalised), so already-real lines give ``alpha = 1``; ``beta`` only
    removes the remaining constant imaginary offset.
    """
    pts = [GaussianRational.coerce(z) for z in t]
    idx = list(idx)
    if not idx:
        raise NotCollinear("empty index set")
    p = pts[idx[0]]
    if len(idx) == 1:
        alpha = GaussianRational(1, 0)
    else:
        key = line_through(p, pts[idx[1]])
        for i in idx[2:]:
            if not on_line(key, pts[i]):
                raise NotCollinear(f"entry {i} is off the line through entries {idx[0]}, {idx[1]}")
        alpha = _primitive_direction(pts[idx[1]] - p).conjugate()
    beta = GaussianRational(0, -(alpha * p).im)
    out = tuple(alpha * z + beta for z in pts)
    return alpha, beta, out


def _anchor_order(rep: BeckReport, eligible: Sequence[int]) -> list[int]:
    eligible = sorted(eligible)
    rest = sorted((i for i in range(rep.n) if i not in set(eligible)), key=lambda i: (-rep.incidence[i], i))
    return eligible + rest


def b_pair_order(b: Sequence) -> list[int]:
    """Indices of ``b`` sorted by (re, im); consecutive entries form the
    b-pairs (b_0, b_1), (b_2, b_3), ..."""
    return sorted(range(len(b)), key=lambda i: scalar_sort_key(GaussianRational.coerce(b[i])))


@dataclass(frozen=True)
class PairSelection:
    pairs: tuple  # (j, k) a-indices
    b_pairs: tuple  # (lo, hi) b-indices
    products: tuple


def case2_select_pairs(a: Sequence, b: Sequence, target: Optional[int] = None, max_pairs: int = DEFAULT_MAX_PAIRS) -> PairSelection:
    """Pick disjoint a-index pairs whose products of differences with the
    consecutive b-pairs are pairwise non-real-multiples.

    With ``target=None`` as many pairs as possible are taken (up to
    ``max_pairs`` and ``len(b) // 2``); otherwise failing to reach ``target``
    raises :class:`NoValidPair`.
    """
    a = [GaussianRational.coerce(z) for z in a]
    b = [GaussianRational.coerce(z) for z in b]
    if len(a) != len(b):
        raise LengthMismatch(f"len(a)={len(a)} but len(b)={len(b)}")
    border = b_pair_order(b)
    available = len(b) // 2
    if target is not None and target > available:
        raise NoValidPair(f"b has only {available} disjoint pairs, {target} requested")
    goal = min(available, max_pairs) if target is None else target
    rep = beck_dichotomy(a, max(2, len(a) + 1))  # threshold above n: always the many-lines view
    order = _anchor_order(rep, rep.case.anchors)
    used: set[int] = set()
    pairs, b_pairs, products = [], [], []
    while len(pairs) < goal:
        s = len(pairs)
        lo, hi = border[2 * s], border[2 * s + 1]
        bdiff = b[hi] - b[lo]
        chosen = None
        for j in order:
            if j in used:
                continue
            for key in rep.lines_through(j):
                free = [k for k in rep.lines[key] if k != j and k not in used]
                if not free:
                    continue
                k = free[0]
                prod = (a[k] - a[j]) * bdiff
                if any(is_real_multiple(prod, q) for q in products):
                    continue
                chosen = (j, k, prod)
                break
            if chosen:
                break
        if chosen is None:
            if target is not None:
                raise NoValidPair(f"no admissible pair after {s} pairs (target {target})")
            break
        j, k, prod = chosen
        used.update((j, k))
        pairs.append((j, k))
        b_pairs.append((lo, hi))
        products.append(prod)
    for x in range(len(products)):
        for y in range(x):
            if is_real_multiple(products[x], products[y]):
                raise AssertionError("selected products are real multiples")
    return PairSelection(tuple(pairs), tuple(b_pairs), tuple(products))


def _fill_relabeling(n: int, fixed: dict[int, int]) -> list[int]:
    sigma: list[Optional[int]] = [None] * n
    for pos, bi in fixed.items():
        sigma[pos] = bi
    rest = iter(j for j in range(n) if j not in set(fixed.values()))
    for pos in range(n):
        if sigma[pos] is None:
            sigma[pos] = next(rest)
    return sigma  # type: ignore[return-value]


def distinct_sum_family(products: Sequence) -> list[list[int]]:
    """One subset per distinct subset sum (the lowest mask attaining it),
    ordered by the sum's (re, im) order."""
    code = LatticeCode.for_values(list(products))
    keys = [code.encode(p) for p in products]
    m = len(keys)
    sums = [0] * (1 << m)
    first: dict[int, int] = {0: 0}
    for mask in range(1, 1 << m):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + keys[low.bit_length() - 1]
        first.setdefault(sums[mask], mask)
    return [[i for i in range(m) if mask >> i & 1] for _, mask in sorted(first.items())]


def _case2_certificate(a: TupleInput, b: TupleInput, max_pairs: int, workers: int, meta: dict) -> WitnessCertificate:
    sel = case2_select_pairs(a.entries, b.entries, max_pairs=max_pairs)
    if not sel.pairs:
        raise NoValidPair("no pairs selected")
    vectors = PointSet(tuple(RationalVector((z.re, z.im)) for z in sel.products), 2)
    ok, bad = validate_general_position(vectors)
    if not ok:
        raise AssertionError(f"products not in general position: {bad}")
    family = distinct_sum_family(sel.products)
    m = len(sel.pairs)
    fixed = {}
    for (j, k), (lo, hi) in zip(sel.pairs, sel.b_pairs):
        fixed[j], fixed[k] = lo, hi
    sigma = _fill_relabeling(a.n, fixed)
    meta = dict(meta)
    meta.update(
        {
            "m": m,
            "subset_sums": len(family),
            "constructive_bound": constructive_bound(vectors)[0] if m >= 2 else len(family),
            "recurrence_bound": gp_recurrence_bound(2, m).value,
        }
    )
    return certificate_from_family(a, b, sigma, sel.pairs, sel.products, family, workers, meta)


def _case1_certificate(a: TupleInput, b: TupleInput, ia: Sequence[int], jb: Sequence[int], workers: int, max_family: int, meta: dict) -> WitnessCertificate:
    k = min(len(ia), len(jb))
    if k < 2:
        raise CertificateUnavailable("collinear subsets too small")
    ia, jb = sorted(ia)[:k], sorted(jb)[:k]
    _, _, a_norm = normalize_collinear_to_real(a.entries, ia)
    _, _, b_norm = normalize_collinear_to_real(b.entries, jb)
    sub = build_certificate([a_norm[i].re for i in ia], [b_norm[j].re for j in jb], max_family=max_family)
    sigma = _fill_relabeling(a.n, {ia[p]: jb[sub.relabeling[p]] for p in range(k)})
    trans = [(ia[j], ia[kk]) for j, kk in sub.transpositions]
    s = [(a[K] - a[J]) * (b[sigma[K]] - b[sigma[J]]) for J, K in trans]
    meta = dict(meta)
    meta.update({"m": len(trans), "collinear_size": k})
    return certificate_from_family(a, b, sigma, trans, s, sub.family, workers, meta)


def _invert(sigma: Sequence[int]) -> list[int]:
    inv = [0] * len(sigma)
    for pos, v in enumerate(sigma):
        inv[v] = pos
    return inv


def complex_certificate(
    a,
    b,
    tau: Optional[int] = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    workers: int = 1,
    max_family: int = DEFAULT_MAX_FAMILY,
) -> WitnessCertificate:
    a = a if isinstance(a, TupleInput) and a.kind == "gaussian" else TupleInput(tuple(a), "gaussian")
    b = b if isinstance(b, TupleInput) and b.kind == "gaussian" else TupleInput(tuple(b), "gaussian")
    n = a.n
    if b.n != n:
        raise LengthMismatch(f"len(a)={n} but len(b)={b.n}")
    if n < 2:
        raise CertificateUnavailable("a certificate needs n >= 2")
    if tau is None:
        tau = max(4, math.ceil(n / 4))
    tau_eff = max(2, min(tau, n))
    ra, rb = beck_dichotomy(a.entries, tau_eff), beck_dichotomy(b.entries, tau_eff)

    def case1():
        return _case1_certificate(
            a, b, ra.lines.get(ra.best_line, ()), rb.lines.get(rb.best_line, ()), workers, max_family,
            {"route": "collinear", "tau": tau_eff},
        )

    def case2():
        if isinstance(ra.case, Case2) or isinstance(rb.case, Case1):
            return _case2_certificate(a, b, max_pairs, workers, {"route": "many-lines", "tau": tau_eff, "pairs_on": "a"})
        swapped = _case2_certificate(b, a, max_pairs, workers, {})
        sigma = swapped.relabeling
        trans = [(sigma[j], sigma[k]) for j, k in swapped.transpositions]
        meta = dict(swapped.meta, route="many-lines", tau=tau_eff, pairs_on="b")
        return certificate_from_family(a, b, _invert(sigma), trans, swapped.s, swapped.family, workers, meta)

    both_collinear = isinstance(ra.case, Case1) and isinstance(rb.case, Case1)
    routes = [case1, case2] if both_collinear else [case2, case1]
    errors = []
    for route in routes:
        try:
            cert = route()
        except (NoValidPair, CertificateUnavailable) as exc:
            errors.append(str(exc))
            continue
        if cert.claimed_count >= 2:
            return cert
    raise CertificateUnavailable("; ".join(errors) or "no route produced a certificate")
