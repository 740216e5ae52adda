import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_distinct_rationals
from oracles import naive_support_counter, naive_twisted
from twistsum.errors import EmptyFamily, NonPositiveValue, TooLarge
from twistsum.pairing import PairFamily, greedy_pairs
from twistsum.witness import (
    GENERATORS,
    WitnessCertificate,
    align_b,
    bubble_walk_bound,
    build_certificate,
    empirical_t,
    explore_t_asymptotics,
    generator_products,
    verify_certificate,
    witness_family,
)

SQUARES = [i * i for i in range(1, 1001)]


def fam(pairs, n, x):
    return PairFamily(tuple(pairs), tuple(range(n)), tuple(Fraction(v) for v in x))


class TestAlign:
    def test_identity(self):
        assert align_b(fam([(0, 1)], 2, [1]), fam([(0, 1)], 2, [1]), 2) == [0, 1]

    def test_offset_pairs(self):
        # 1-based a-pair (1,3), b-pair (2,4)
        sigma = align_b(fam([(0, 2)], 4, [2]), fam([(1, 3)], 4, [2]), 4)
        assert sigma[0] == 1 and sigma[2] == 3
        assert sigma == [1, 0, 3, 2]
        a, b = [1, 2, 3, 4], [1, 2, 3, 4]
        assert (a[2] - a[0]) * (b[sigma[2]] - b[sigma[0]]) > 0

    def test_descending_b_orientation(self):
        a = [Fraction(v) for v in (1, 2, 3, 4, 5)]
        b = [Fraction(v) for v in (50, 40, 30, 20, 10)]
        pa, pb = greedy_pairs(a), greedy_pairs(b)
        sigma = align_b(pa, pb, 5)
        for (J, K), x, y in zip(pa.original_pairs(), pa.x, pb.x):
            prod = (a[K] - a[J]) * (b[sigma[K]] - b[sigma[J]])
            assert prod == x * y > 0

    def test_truncates_to_shorter(self):
        sigma = align_b(fam([(0, 1), (2, 4)], 7, [1, 2]), fam([(5, 6)], 7, [1]), 7)
        assert sigma[0] == 5 and sigma[1] == 6
        assert sorted(sigma) == list(range(7))

    def test_empty(self):
        with pytest.raises(EmptyFamily):
            align_b(fam([], 1, []), fam([], 1, []), 1)


class TestEmpiricalT:
    def test_examples(self):
        assert empirical_t([1]) == 0
        assert empirical_t([1, 4, 9]) == 2
        assert empirical_t(SQUARES[:100]) == 30

    def test_closed_form_oracle(self):
        def sq(t):
            return t * (t + 1) * (2 * t + 1) // 6

        for m in (2, 10, 77, 100, 500, 1000):
            t = max(t for t in range(m) if sq(t) < m * m)
            assert empirical_t(SQUARES[:m]) == t

    def test_nonpositive(self):
        with pytest.raises(NonPositiveValue):
            empirical_t([1, -2])


class TestWitnessFamily:
    def test_m1(self):
        f = witness_family([Fraction(5, 3)])
        assert list(f.members()) == [[], [0]]

    def test_squares_three(self):
        f = witness_family([1, 4, 9])
        assert len(f) == 8
        assert f.sums() == [0, 1, 4, 5, 9, 10, 13, 14]
        assert f.chain == (0, 1, 2)

    def test_squares_ten(self):
        f = witness_family(SQUARES[:10])
        assert len(f) == 144
        assert f.chain[1:] == (1, 2, 3, 3, 4, 4, 5, 5, 6)

    def test_members_evaluate_to_sums(self):
        rng = random.Random(3)
        for m in (1, 5, 20, 50):
            s = [Fraction(rng.randint(1, 40), rng.randint(1, 5)) for _ in range(m)]
            f = witness_family(s)
            members = list(f.members())
            direct = [sum((s[i] for i in T), Fraction(0)) for T in members]
            assert direct == f.sums()
            assert len(set(map(tuple, members))) == len(members)
            assert len(set(direct)) == len(direct)

    def test_recurrence_and_growth(self):
        f = witness_family(SQUARES[:200])
        for k in range(1, 201):
            assert f.sizes[k] == f.sizes[k - 1] + f.sizes[f.chain[k - 1]]
            assert f.sizes[k] >= 2 * k

    def test_growth_tripwire(self):
        base = 0.144
        for m in (10, 50, 100, 500):
            f = witness_family(SQUARES[:m], verify=False)
            assert len(f) / m**3 > base - 0.05

    def test_object_dtype_for_huge_values(self):
        s = [Fraction(10**18 * (i + 1)) for i in range(6)]
        arr, denom = witness_family(s).scaled_sums()
        assert arr.dtype == object and denom == 1

    def test_size_guard(self):
        with pytest.raises(TooLarge):
            witness_family(SQUARES[:100], verify=False).scaled_sums(max_size=1000)


class TestCertificate:
    def test_small_examples(self):
        c = build_certificate([1, 2, 3], [1, 2, 3])
        assert c.claimed_count == 2
        assert c.claimed_count <= len(naive_support_counter([1, 2, 3], [1, 2, 3]))
        c = build_certificate([1, 2], [1, 2])
        assert c.claimed_count == 2 == len(naive_support_counter([1, 2], [1, 2]))

    def test_one_to_ten(self):
        c = build_certificate(range(1, 11), range(1, 11))
        assert c.s == [1, 4, 9]
        assert c.claimed_count == 8
        assert verify_certificate(range(1, 11), range(1, 11), c)

    def test_sums_match_permutations(self, rng):
        a = random_distinct_rationals(rng, 12)
        b = random_distinct_rationals(rng, 12)
        c = build_certificate(a, b)
        for T, pi, v in zip(c.family, c.permutations(), c.sums):
            assert naive_twisted(a, b, pi) == v
        base = naive_twisted(a, b, c.relabeling)
        for T, v in zip(c.family, c.sums):
            assert v == base - sum((c.s[i] for i in T), Fraction(0))

    def test_verify_rejects_tampering(self):
        a = b = list(range(1, 11))
        c = build_certificate(a, b)
        bad = WitnessCertificate(**{**c.__dict__, "sums": list(c.sums)})
        bad.sums[3] += 1
        v = verify_certificate(a, b, bad)
        assert not v and v.reason == "SumMismatch"

        dup = WitnessCertificate(**{**c.__dict__})
        dup.family = c.family + [c.family[2]]
        dup.sums = c.sums + [c.sums[2]]
        dup.claimed_count = c.claimed_count + 1
        v = verify_certificate(a, b, dup)
        assert not v and v.reason == "DuplicateSum"

        short = WitnessCertificate(**{**c.__dict__, "claimed_count": c.claimed_count + 1})
        assert verify_certificate(a, b, short).reason == "CountMismatch"

        broken = WitnessCertificate(**{**c.__dict__, "relabeling": [0] * 10})
        assert verify_certificate(a, b, broken).reason == "Malformed"

    def test_json_round_trip(self):
        a = [Fraction(1, 2), Fraction(-3), Fraction(7, 3), Fraction(5), Fraction(2)]
        c = build_certificate(a, a[::-1])
        back = WitnessCertificate.from_json(c.to_json())
        assert back.to_json() == c.to_json()
        assert verify_certificate(a, a[::-1], back)

    def test_family_cap(self):
        with pytest.raises(TooLarge):
            build_certificate(range(1, 61), range(1, 61), max_family=10)


class TestBubbleWalk:
    def test_one_two_three(self):
        walk = bubble_walk_bound([1, 2, 3], [1, 2, 3])
        assert [v for _, v in walk] == [14, 13, 11, 10]

    def test_n2(self):
        assert len(bubble_walk_bound([3, 1], [2, 9])) == 2

    def test_random(self, rng):
        for _ in range(30):
            n = rng.randint(1, 9)
            a = random_distinct_rationals(rng, n)
            b = random_distinct_rationals(rng, n)
            walk = bubble_walk_bound(a, b)
            sums = [naive_twisted(a, b, pi) for pi, _ in walk]
            assert len(walk) == 1 + n * (n - 1) // 2
            assert all(x > y for x, y in zip(sums, sums[1:]))


class TestExplore:
    def test_squares(self):
        r100, r1 = explore_t_asymptotics("squares", [100, 1])
        assert r100.t_empirical == 30
        assert r100.t_predicted == pytest.approx(31.07, abs=0.01)
        assert r1.t_empirical == 0

    @pytest.mark.parametrize("name", sorted(GENERATORS))
    def test_generators_valid(self, name):
        s = generator_products(name, 40)
        assert all(x < y for x, y in zip(s, s[1:]))
        reps = explore_t_asymptotics(name, [10, 40])
        assert all(0 <= r.t_empirical < r.m for r in reps)
