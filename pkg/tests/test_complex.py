import random
from fractions import Fraction

import pytest

from oracles import naive_support_counter, naive_twisted
from twistsum.complex_case import (
    Case1,
    Case2,
    beck_dichotomy,
    case2_select_pairs,
    complex_certificate,
    line_stats,
    line_through,
    normalize_collinear_to_real,
)
from twistsum.errors import CertificateUnavailable, DuplicatePoints, NoValidPair, NotCollinear
from twistsum.scalar import GaussianRational as G
from twistsum.witness import build_certificate, verify_certificate

I = G(0, 1)


def pts(*xy):
    return [G(x, y) for x, y in xy]


def random_gaussians(rng, n, spread=6, den=3):
    out = []
    while len(out) < n:
        z = G(Fraction(rng.randint(-spread, spread), rng.randint(1, den)), Fraction(rng.randint(-spread, spread), rng.randint(1, den)))
        if z not in out:
            out.append(z)
    return out


def im_cross(z, w):
    return (z * w.conjugate()).im


class TestLineStats:
    def test_examples(self):
        r = line_stats(pts((0, 0), (1, 0), (2, 0), (0, 1)))
        assert (r.max_collinear, r.line_count) == (3, 4)
        r = line_stats(pts((0, 0), (1, 1)))
        assert (r.max_collinear, r.line_count) == (2, 1)
        r = line_stats(pts((0, 0), (1, 0), (2, 0)))
        assert (r.max_collinear, r.line_count) == (3, 1)

    def test_duplicates(self):
        with pytest.raises(DuplicatePoints):
            line_stats(pts((0, 0), (0, 0)))

    def test_key_canonical(self):
        k = line_through(G(0, 0), G(1, 0))
        assert k == line_through(G(Fraction(7, 2), 0), G(-3, 0))
        assert k.A == 0 and k.B == 1 and k.C == 0
        k = line_through(G(Fraction(1, 2), 0), G(0, Fraction(1, 3)))
        assert (k.A, k.B, k.C) == (2, 3, 1)

    def test_keys_permutation_invariant(self):
        rng = random.Random(4)
        for _ in range(20):
            p = random_gaussians(rng, 8, spread=3, den=1)
            q = p[:]
            rng.shuffle(q)
            assert set(line_stats(p).lines) == set(line_stats(q).lines)

    def test_bounds_and_incidence(self):
        rng = random.Random(6)
        for _ in range(20):
            p = random_gaussians(rng, 9, spread=2, den=1)
            r = line_stats(p)
            n = len(p)
            assert r.max_collinear <= n and r.line_count <= n * (n - 1) // 2
            # each point is joined to the other n-1 points by its lines
            for i in range(n):
                assert sum(len(r.lines[k]) - 1 for k in r.lines_through(i)) == n - 1


class TestDichotomy:
    def test_examples(self):
        assert isinstance(beck_dichotomy(pts((0, 0), (1, 1), (2, 2), (3, 3)), 3).case, Case1)
        assert isinstance(beck_dichotomy(pts((0, 0), (1, 0), (0, 1), (1, 1)), 3).case, Case2)
        rng = random.Random(1)
        for n in range(2, 8):
            assert isinstance(beck_dichotomy(random_gaussians(rng, n), 2).case, Case1)

    def test_case1_indices_on_line(self):
        r = beck_dichotomy(pts((0, 0), (5, 1), (1, 1), (2, 2), (3, 3)), 3)
        assert r.case.indices == (0, 2, 3, 4)


class TestNormalize:
    def test_examples(self):
        alpha, beta, t = normalize_collinear_to_real([I, 2 * I, 3 * I], [0, 1, 2])
        assert alpha == -I and beta == 0
        assert list(t) == [1, 2, 3]
        alpha, beta, t = normalize_collinear_to_real([G(1), G(2), G(5)], [0, 1, 2])
        assert alpha == 1 and beta == 0

    def test_spot_invariance(self):
        assert len(naive_support_counter([1, 2], [3, 5])) == len(naive_support_counter([3, 5], [3, 5])) == 2

    def test_not_collinear(self):
        with pytest.raises(NotCollinear):
            normalize_collinear_to_real(pts((0, 0), (1, 0), (0, 1)), [0, 1, 2])

    def test_random_lines(self):
        rng = random.Random(12)
        for _ in range(30):
            base = G(rng.randint(-5, 5), rng.randint(-5, 5))
            step = G(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), rng.randint(1, 4))
            t = [base + step * k for k in rng.sample(range(-6, 7), 4)] + random_gaussians(rng, 2, spread=9)
            if len(set(t)) < len(t):
                continue
            alpha, beta, out = normalize_collinear_to_real(t, [0, 1, 2, 3])
            assert all(out[i].im == 0 for i in range(4))
            assert all(out[i] == alpha * t[i] + beta for i in range(len(t)))
            b = random_gaussians(rng, len(t))
            assert len(naive_support_counter(out, b)) == len(naive_support_counter(t, b))


class TestCase2:
    def test_worked_example(self):
        sel = case2_select_pairs([G(0), G(1), I, 2 * I], [0, 1, 2, 3], target=2)
        assert sel.pairs == ((0, 1), (2, 3))
        assert sel.products == (1, I)

    def test_target_one(self):
        rng = random.Random(3)
        for n in range(2, 7):
            sel = case2_select_pairs(random_gaussians(rng, n), random_gaussians(rng, n), target=1)
            assert len(sel.pairs) == 1
        assert case2_select_pairs([G(5), G(7)], [G(1), G(2)], target=1).pairs == ((0, 1),)

    def test_all_real(self):
        with pytest.raises(NoValidPair):
            case2_select_pairs([G(v) for v in (1, 2, 3, 4)], [G(v) for v in (1, 2, 3, 4)], target=2)

    def test_products_pairwise_non_real(self):
        rng = random.Random(21)
        for _ in range(40):
            n = rng.randint(2, 12)
            a, b = random_gaussians(rng, n), random_gaussians(rng, n)
            sel = case2_select_pairs(a, b)
            used = [i for p in sel.pairs for i in p]
            assert len(set(used)) == len(used)
            for (j, k), (lo, hi), z in zip(sel.pairs, sel.b_pairs, sel.products):
                assert z == (a[k] - a[j]) * (b[hi] - b[lo])
            for x, z in enumerate(sel.products):
                for w in sel.products[:x]:
                    assert im_cross(z, w) != 0


class TestCertificate:
    def test_worked_example(self):
        a, b = [G(0), G(1), I, 2 * I], [G(v) for v in (0, 1, 2, 3)]
        c = complex_certificate(a, b)
        assert c.meta["route"] == "many-lines"
        assert c.claimed_count == 4
        assert verify_certificate(a, b, c)
        sums = {naive_twisted(a, b, pi) for pi in c.permutations()}
        assert len(sums) == 4 and sums <= set(naive_support_counter(a, b))

    def test_real_equivalence(self):
        rng = random.Random(31)
        for _ in range(15):
            n = rng.randint(2, 9)
            a = rng.sample(range(-20, 20), n)
            b = rng.sample(range(-20, 20), n)
            c = complex_certificate([G(v) for v in a], [G(v) for v in b])
            assert c.meta["route"] == "collinear"
            assert c.claimed_count == build_certificate(a, b).claimed_count

    def test_n2(self):
        c = complex_certificate([G(0), I], [G(1), G(3, 1)])
        assert c.claimed_count == 2

    def test_n1(self):
        with pytest.raises(CertificateUnavailable):
            complex_certificate([G(1)], [G(2)])

    def test_soundness_random(self):
        rng = random.Random(41)
        for _ in range(30):
            n = rng.randint(2, 6)
            a, b = random_gaussians(rng, n), random_gaussians(rng, n)
            c = complex_certificate(a, b)
            assert verify_certificate(a, b, c)
            assert c.claimed_count <= len(naive_support_counter(a, b))
