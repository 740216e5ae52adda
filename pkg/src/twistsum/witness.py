"""Lower-bound certificates for the real case.

The pipeline: greedy pairs on ``a`` and on ``b``; a relabelling of ``b`` that
lines the i-th b-pair up with the i-th a-pair; the products
``s(i) = x(i) * y(i)``; a recursive family of subsets of ``range(m)`` with
pairwise distinct s-sums; and finally one permutation per family member.
Swapping the positions of pair ``i`` lowers the twisted sum by exactly
``s(i)``, so distinct subset sums give distinct twisted sums.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    CertificateUnavailable,
    DistinctnessViolation,
    EmptyFamily,
    LengthMismatch,
    NonPositiveValue,
    TooLarge,
)
from .lattice import LatticeCode
from .pairing import PairFamily, check_superadditive, greedy_pairs, sorted_order
from .parallel import pmap
from .scalar import format_scalar, parse_scalar
from .support import (
    TupleInput,
    as_tuple,
    check_disjoint_pairs,
    check_permutation,
    twisted_sum,
)

DEFAULT_MAX_FAMILY = 1_000_000


def align_b(a_pairs: PairFamily, b_pairs: PairFamily, n: int) -> list[int]:
    """Relabelling ``sigma`` (``sigma[pos]`` = b-index placed at ``pos``).

    For ``i < m = min(r_a, r_b)`` the smaller and larger b-entries of b-pair
    ``i`` go to the positions of the smaller and larger a-entries of a-pair
    ``i``, so each pair's product of differences is ``x(i) * y(i) > 0``.
    Everything else is filled in ascending index order.
    """
    m = min(a_pairs.r, b_pairs.r)
    if m == 0:
        raise EmptyFamily("cannot align an empty pair family")
    if a_pairs.n != n or b_pairs.n != n:
        raise LengthMismatch("pair families built for a different n")
    sigma: list[Optional[int]] = [None] * n
    used_b = set()
    for (ja, ka), (jb, kb) in zip(a_pairs.original_pairs()[:m], b_pairs.original_pairs()[:m]):
        sigma[ja], sigma[ka] = jb, kb
        used_b.update((jb, kb))
    rest = iter(j for j in range(n) if j not in used_b)
    for pos in range(n):
        if sigma[pos] is None:
            sigma[pos] = next(rest)
    return sigma  # type: ignore[return-value]


def _check_positive(s: Sequence) -> list[Fraction]:
    out = [Fraction(v) for v in s]
    for i, v in enumerate(out):
        if v <= 0:
            raise NonPositiveValue(f"s[{i}] = {v} is not positive")
    return out


def empirical_t(s: Sequence) -> int:
    """Largest ``t`` in ``[0, m-1]`` with ``s(1) + .. + s(t) < s(m)``."""
    s = _check_positive(s)
    if not s:
        raise EmptyFamily("empirical_t needs at least one value")
    target = s[-1]
    total = Fraction(0)
    t = 0
    for v in s[:-1]:
        total += v
        if total >= target:
            break
        t += 1
    return t


def t_chain(s: Sequence) -> list[int]:
    """``[t(1), .., t(m)]`` for every prefix of ``s`` in one pass."""
    s = _check_positive(s)
    prefix = [Fraction(0)]
    for v in s:
        prefix.append(prefix[-1] + v)
    chain = []
    for k in range(1, len(s) + 1):
        # prefix is strictly increasing, so bisect finds the last prefix < s(k)
        t = bisect.bisect_left(prefix, s[k - 1]) - 1
        chain.append(min(t, k - 1))
    return chain


def family_sizes(chain: Sequence[int]) -> list[int]:
    """``[|F(0)|, .., |F(m)|]`` from the recurrence ``|F(k)| = |F(k-1)| + |F(t(k))|``."""
    sizes = [1]
    for k, t in enumerate(chain, start=1):
        sizes.append(sizes[k - 1] + sizes[t])
    return sizes


class WitnessFamily:
    """The recursive family ``F(m)``.

    ``F(0) = {{}}`` and ``F(k) = F(k-1) + {range(k) - T : T in F(t(k))}``.
    Members are kept implicitly and indexed in increasing order of their
    s-sum; the first ``|F(k)|`` members are exactly ``F(k)``.  Subsets use
    0-based indices into ``s``.
    """

    def __init__(self, s: Sequence):
        self.s = tuple(_check_positive(s))
        self.chain = tuple(t_chain(self.s)) if self.s else ()
        self.sizes = tuple(family_sizes(self.chain))

    @property
    def m(self) -> int:
        return len(self.s)

    def __len__(self) -> int:
        return self.sizes[-1]

    def member(self, idx: int) -> list[int]:
        if not 0 <= idx < len(self):
            raise IndexError(idx)
        k = self.m
        flips = []
        while k > 0:
            if idx < self.sizes[k - 1]:
                k -= 1
                continue
            t = self.chain[k - 1]
            flips.append(k)
            idx = self.sizes[t] - 1 - (idx - self.sizes[k - 1])
            k = t
        members: set[int] = set()
        for k in reversed(flips):
            members = set(range(k)) - members
        return sorted(members)

    def members(self) -> Iterator[list[int]]:
        for idx in range(len(self)):
            yield self.member(idx)

    def scaled_sums(self, max_size: int = 50_000_000):
        """Every member's s-sum times the common denominator, ascending.

        Returns ``(array, denom)``; the array is int64 when the totals fit and
        an object array of Python ints otherwise.
        """
        if len(self) > max_size:
            raise TooLarge(f"family of size {len(self)} exceeds {max_size}")
        denom = 1
        for v in self.s:
            denom = math.lcm(denom, v.denominator)
        ints = [int(v * denom) for v in self.s]
        total = sum(ints)
        dtype = np.int64 if total < 2**62 else object
        out = np.zeros(len(self), dtype=dtype)
        running = 0
        for k in range(1, self.m + 1):
            running += ints[k - 1]
            t = self.chain[k - 1]
            lo, hi = self.sizes[k - 1], self.sizes[k]
            out[lo:hi] = running - out[: self.sizes[t]][::-1]
        return out, denom

    def sums(self) -> list[Fraction]:
        arr, denom = self.scaled_sums()
        return [Fraction(int(v), denom) for v in arr]

    def check_distinct(self, max_size: int = 50_000_000) -> bool:
        arr, _ = self.scaled_sums(max_size)
        if len(arr) < 2:
            return True
        return bool(np.all(arr[1:] > arr[:-1]))


def witness_family(s: Sequence, verify: bool = True) -> WitnessFamily:
    fam = WitnessFamily(s)
    if verify and not fam.check_distinct():
        raise DistinctnessViolation("family sums are not pairwise distinct")
    return fam


@dataclass
class WitnessCertificate:
    """Permutations ``relabeling o prod_{i in T} (j_i k_i)`` for ``T`` in
    ``family``, with their exact twisted sums."""

    relabeling: list
    transpositions: list
    s: list
    family: list
    sums: list
    claimed_count: int
    meta: dict = field(default_factory=dict)

    def permutation(self, member: Sequence[int]) -> list[int]:
        n = len(self.relabeling)
        tau = list(range(n))
        for i in member:
            j, k = self.transpositions[i]
            tau[j], tau[k] = tau[k], tau[j]
        return [self.relabeling[tau[p]] for p in range(n)]

    def permutations(self) -> list[list[int]]:
        return [self.permutation(T) for T in self.family]

    def to_json(self) -> dict:
        out = {
            "relabeling": list(self.relabeling),
            "transpositions": [list(p) for p in self.transpositions],
            "s": [format_scalar(v) for v in self.s],
            "family": [list(T) for T in self.family],
            "sums": [format_scalar(v) for v in self.sums],
            "claimed_count": self.claimed_count,
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, obj: dict, kind: str = "rational") -> "WitnessCertificate":
        return cls(
            relabeling=[int(v) for v in obj["relabeling"]],
            transpositions=[tuple(int(v) for v in p) for p in obj["transpositions"]],
            s=[parse_scalar(v, kind) for v in obj["s"]],
            family=[[int(v) for v in T] for T in obj["family"]],
            sums=[parse_scalar(v, kind) for v in obj["sums"]],
            claimed_count=int(obj["claimed_count"]),
            meta=dict(obj.get("meta", {})),
        )


def _sum_chunk(args):
    keys, perms = args
    n = len(keys)
    return [sum(keys[i][p[i]] for i in range(n)) for p in perms]


def twisted_sums_many(a: TupleInput, b: TupleInput, perms: Sequence[Sequence[int]], workers: int = 1) -> list:
    """Exact ``S(a, b; pi)`` for many permutations via integer keys."""
    n = a.n
    prods = [[a[i] * b[j] for j in range(n)] for i in range(n)]
    code = LatticeCode.for_values([p for row in prods for p in row])
    keys = [[code.encode(p) for p in row] for row in prods]
    perms = [list(p) for p in perms]
    chunk = max(1, -(-len(perms) // max(1, workers)))
    parts = pmap(_sum_chunk, [(keys, perms[i : i + chunk]) for i in range(0, len(perms), chunk)], workers)
    return [code.decode(v) for part in parts for v in part]


def certificate_from_family(
    a: TupleInput,
    b: TupleInput,
    relabeling: Sequence[int],
    transpositions: Sequence[tuple[int, int]],
    s: Sequence,
    family: Sequence[Sequence[int]],
    workers: int = 1,
    meta: Optional[dict] = None,
) -> WitnessCertificate:
    cert = WitnessCertificate(
        relabeling=list(relabeling),
        transpositions=[tuple(p) for p in transpositions],
        s=list(s),
        family=[list(T) for T in family],
        sums=[],
        claimed_count=len(family),
        meta=dict(meta or {}),
    )
    cert.sums = twisted_sums_many(a, b, cert.permutations(), workers)
    if len(set(cert.sums)) != len(cert.sums):
        raise DistinctnessViolation("certificate sums are not pairwise distinct")
    return cert


def build_certificate(a, b, max_family: int = DEFAULT_MAX_FAMILY, workers: int = 1) -> WitnessCertificate:
    a, b = as_tuple(a), as_tuple(b)
    if a.n != b.n:
        raise LengthMismatch(f"len(a)={a.n} but len(b)={b.n}")
    if a.n < 2:
        raise CertificateUnavailable("a certificate needs n >= 2")
    pa, pb = greedy_pairs(a.entries), greedy_pairs(b.entries)
    m = min(pa.r, pb.r)
    pa, pb = pa.truncate(m), pb.truncate(m)
    sigma = align_b(pa, pb, a.n)
    s = [x * y for x, y in zip(pa.x, pb.x)]
    fam = witness_family(s)
    if len(fam) > max_family:
        raise TooLarge(f"witness family of size {len(fam)} exceeds {max_family}")
    return certificate_from_family(
        a, b, sigma, pa.original_pairs(), s, list(fam.members()), workers,
        meta={"route": "real", "m": m, "t_chain": list(fam.chain)},
    )


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(a, b, cert: WitnessCertificate) -> Verdict:
    """Re-evaluate every listed permutation from scratch.

    Uses only :func:`twisted_sum`; nothing about how the certificate was
    built is trusted.
    """
    try:
        a, b = as_tuple(a), as_tuple(b)
        n = a.n
        if b.n != n:
            return Verdict(False, "LengthMismatch")
        check_permutation(cert.relabeling, n)
        check_disjoint_pairs(cert.transpositions, n)
    except Exception as exc:  # any structural defect is a failed verdict
        return Verdict(False, "Malformed", str(exc))
    if not (cert.claimed_count == len(cert.family) == len(cert.sums)):
        return Verdict(False, "CountMismatch")
    r = len(cert.transpositions)
    seen = set()
    for idx, (member, recorded) in enumerate(zip(cert.family, cert.sums)):
        if any(not 0 <= i < r for i in member) or len(set(member)) != len(member):
            return Verdict(False, "Malformed", f"family member {idx}")
        value = twisted_sum(a, b, cert.permutation(member))
        if value != recorded:
            return Verdict(False, "SumMismatch", f"family member {idx}")
        if value in seen:
            return Verdict(False, "DuplicateSum", f"family member {idx}")
        seen.add(value)
    return Verdict(True)


def bubble_walk_bound(a, b) -> list[tuple[list[int], Any]]:
    """``1 + n(n-1)/2`` permutations with strictly decreasing twisted sums.

    Start from both tuples sorted ascending and bubble ``b`` into descending
    order by adjacent swaps; every swap strictly lowers the sum.
    """
    a, b = as_tuple(a), as_tuple(b)
    n = a.n
    if b.n != n:
        raise LengthMismatch(f"len(a)={n} but len(b)={b.n}")
    oa, ob = sorted_order(a.entries), sorted_order(b.entries)
    cur = list(range(n))  # cur[r]: rank of the b-entry at the r-th smallest a

    def perm() -> list[int]:
        pi = [0] * n
        for r in range(n):
            pi[oa[r]] = ob[cur[r]]
        return pi

    walk = [perm()]
    for sweep in range(n - 1):
        for i in range(n - 1 - sweep):
            if cur[i] < cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                walk.append(perm())
    out = [(pi, twisted_sum(a, b, pi)) for pi in walk]
    for (_, hi), (_, lo) in zip(out, out[1:]):
        if not lo < hi:
            raise AssertionError("bubble walk sums not strictly decreasing")
    return out


def _fib(i: int) -> int:
    x, y = 1, 2
    for _ in range(i - 1):
        x, y = y, x + y
    return x


# x(i), y(i) for i >= 1; every pair is superadditive (checked on use)
GENERATORS: dict[str, tuple[Callable[[int], Any], Callable[[int], Any]]] = {
    "squares": (lambda i: i, lambda i: i),
    "linear-quadratic": (lambda i: i, lambda i: i * i),
    "linear-exponential": (lambda i: i, lambda i: 2 ** (i - 1)),
    "linear-fibonacci": (lambda i: i, _fib),
}


def generator_products(name: str, m: int) -> list[Fraction]:
    fx, fy = GENERATORS[name]
    xs = [Fraction(fx(i)) for i in range(1, m + 1)]
    ys = [Fraction(fy(i)) for i in range(1, m + 1)]
    for seq in (xs, ys):
        ok, bad = check_superadditive(seq)
        if not ok:
            raise AssertionError(f"generator {name!r} not superadditive at {bad}")
    return [x * y for x, y in zip(xs, ys)]


@dataclass(frozen=True)
class TExplorationReport:
    m: int
    t_empirical: int
    t_predicted: float
    ratio: float
    family_size: int
    growth: float  # |F(m)| / m^3, approximate

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t_empirical": self.t_empirical,
            "t_predicted": self.t_predicted,
            "ratio": self.ratio,
            "family_size": self.family_size,
            "growth": self.growth,
        }


def explore_t_asymptotics(generator: str, m_values: Sequence[int]) -> list[TExplorationReport]:
    """Empirical ``t(m)`` against ``(3 m^2)^(1/3)``, plus family growth."""
    if not m_values:
        return []
    s = generator_products(generator, max(m_values))
    chain = t_chain(s)
    sizes = family_sizes(chain)
    out = []
    for m in m_values:
        t = chain[m - 1]
        pred = (3 * m * m) ** (1 / 3)
        out.append(TExplorationReport(m, t, pred, t / pred, sizes[m], sizes[m] / m**3))
    return out
