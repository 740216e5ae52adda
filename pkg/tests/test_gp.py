from fractions import Fraction
from itertools import combinations
import random

import pytest

from conftest import random_gp_points
from oracles import fraction_rank, vec_subset_sums
from twistsum.errors import DimensionMismatch, DuplicatePoints, NotValidated, ZeroNormDirection
from twistsum.gp import (
    PointSet,
    choose_wstar,
    constructive_bound,
    gp_recurrence_bound,
    integer_rank,
    parallel_pair_census,
    project_complement,
    validate_general_position,
    validated,
)
from twistsum.scalar import RationalVector

F = Fraction
EXAMPLE = [(1, 0), (0, 1), (1, 1), (1, 2)]


def ps(points, d=None):
    d = len(points[0]) if d is None else d
    return PointSet(tuple(RationalVector(tuple(F(c) for c in p)) for p in points), d)


def test_validate_examples():
    assert validate_general_position(ps([(1, 0), (0, 1), (1, 1)]), 2) == (True, None)
    ok, bad = validate_general_position(ps([(1, 0), (2, 0), (0, 1)]), 2)
    assert not ok
    assert [tuple(p.coords) for p in bad] == [(1, 0), (2, 0)]
    assert validate_general_position(ps([(3,), (-1,), (2,)]), 1)[0]
    assert not validate_general_position(ps([(3,), (0,)]), 1)[0]


def test_pointset_errors():
    with pytest.raises(DuplicatePoints):
        ps([(1, 2), (1, 2)])
    with pytest.raises(DimensionMismatch):
        PointSet((RationalVector((F(1),)),), 2)
    with pytest.raises(DimensionMismatch):
        validate_general_position(ps(EXAMPLE), 3)


def test_bareiss_matches_oracle_rank():
    rng = random.Random(11)
    for _ in range(300):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        if rng.random() < 0.3 and r > 1:
            rows[-1] = [x + 2 * y for x, y in zip(rows[0], rows[1 % r])]
        assert integer_rank(rows) == fraction_rank(rows)


def test_choose_wstar_examples():
    with pytest.raises(NotValidated):
        choose_wstar(ps(EXAMPLE))
    w, pairs = choose_wstar(validated(ps(EXAMPLE)))
    assert w == 3 and pairs == []
    assert choose_wstar(validated(ps([(1, 0), (0, 1)]))) == (0, [])
    # (1,1)-(0,1) is parallel to (1,0) and (1,1)-(1,0) to (0,1); only (1,1) is free
    assert choose_wstar(validated(ps([(1, 0), (0, 1), (1, 1)]))) == (2, [])


def test_census_against_definition():
    rng = random.Random(5)
    for d in (2, 3):
        pts = random_gp_points(rng, d, 9, spread=3)
        census = parallel_pair_census(ps(pts))
        for w, p in enumerate(pts):
            expect = []
            for i, j in combinations(range(len(pts)), 2):
                if w in (i, j):
                    continue
                diff = [x - y for x, y in zip(pts[j], pts[i])]
                if fraction_rank([diff, list(p)]) == 1:
                    expect.append((i, j))
            assert census[w] == expect


def test_project_examples():
    proj = project_complement(validated(ps(EXAMPLE)), 3)
    assert sorted(p.coords[0] for p in proj.points) == [F(-1, 5), F(1, 5), F(2, 5)]
    assert [tuple(v.coords) for v in proj.basis] == [(2, -1)]
    assert proj.collisions == 0

    proj = project_complement(validated(ps([(1, 0), (0, 1)])), 0)
    assert [p.coords for p in proj.points] == [(F(1),)]
    assert [tuple(v.coords) for v in proj.basis] == [(0, 1)]


def test_project_collision():
    # (1,1) and (3,2) differ by (2,1), which is the projection direction
    A = ps([(2, 1), (1, 1), (3, 2), (0, 1)])
    proj = project_complement(A, 0)
    assert proj.points.m == 2 and proj.collisions == 1
    assert len(parallel_pair_census(A)[0]) == 1


def test_project_zero_direction():
    with pytest.raises(ZeroNormDirection):
        project_complement(ps([(0, 0), (1, 0)]), 0)


def test_projection_is_orthogonal():
    rng = random.Random(8)
    pts = random_gp_points(rng, 3, 8)
    A = validated(ps(pts))
    w, pairs = choose_wstar(A)
    proj = project_complement(A, w, pairs)
    wv = A.points[w]
    for v in proj.basis:
        assert v.dot(wv) == 0
    # reconstruct each projected point and compare with the direct formula
    rebuilt = set()
    for q in proj.points:
        acc = RationalVector((F(0),) * 3)
        for c, v in zip(q.coords, proj.basis):
            acc = acc + v.scale(c)
        rebuilt.add(acc)
    direct = {u - wv.scale(u.dot(wv) / wv.dot(wv)) for i, u in enumerate(A.points) if i != w}
    assert rebuilt == direct


def test_recurrence_examples():
    assert gp_recurrence_bound(1, 3).value == 4
    assert gp_recurrence_bound(2, 2).value == 4
    assert gp_recurrence_bound(2, 3).value == 6
    assert len(vec_subset_sums([(1, 0), (0, 1), (1, 1)])) == 7
    assert gp_recurrence_bound(3, 0).value == 1
    assert gp_recurrence_bound(3, 2).value == 3


def test_recurrence_trace_and_range():
    b = gp_recurrence_bound(3, 12)
    nodes = {(t["d"], t["m"]): t for t in b.trace}
    assert nodes[(3, 12)]["value"] == b.value
    for t in b.trace:
        assert 1 <= t["value"] <= 2 ** t["m"]
        if t["children"]:
            assert t["value"] == sum(nodes[tuple(c)]["value"] for c in t["children"])


def test_constructive_examples():
    bound, trace = constructive_bound(ps(EXAMPLE), 2)
    assert bound >= gp_recurrence_bound(2, 4).value
    assert len(vec_subset_sums(EXAMPLE)) >= bound
    bound, trace = constructive_bound(ps([(3,), (-1,), (2,)]), 1)
    assert bound == 4 and trace["same_sign"] == 2
    assert len(vec_subset_sums([(3,), (-1,), (2,)])) == 7
    bound, trace = constructive_bound(ps([(1, 0), (0, 1)]), 2)
    assert len(trace["steps"]) == 1
    assert bound <= len(vec_subset_sums([(1, 0), (0, 1)]))


def test_d1_equality_at_initial_segment():
    for r in range(1, 13):
        pts = [(i,) for i in range(1, r + 1)]
        assert len(vec_subset_sums(pts)) == r * (r + 1) // 2 + 1
        assert constructive_bound(ps(pts), 1)[0] == r * (r + 1) // 2 + 1


def test_d1_same_sign_lower_bound():
    rng = random.Random(2)
    for _ in range(40):
        r = rng.randint(1, 9)
        vals = rng.sample(range(1, 60), r)
        sign = rng.choice((1, -1))
        assert len(vec_subset_sums([(sign * F(v, 3),) for v in vals])) >= r * (r + 1) // 2 + 1


@pytest.mark.parametrize("d", [1, 2, 3])
def test_inequality_chain(d):
    rng = random.Random(100 + d)
    for _ in range(8):
        m = rng.randint(d, 11)
        pts = random_gp_points(rng, d, m)
        bound, _ = constructive_bound(ps(pts), d)
        assert len(vec_subset_sums(pts)) >= bound >= gp_recurrence_bound(d, m).value


def test_wstar_bound_on_every_step():
    rng = random.Random(9)
    pts = random_gp_points(rng, 3, 12, spread=4)
    _, trace = constructive_bound(ps(pts), 3)

    def walk(node):
        for step in node.get("steps", []):
            assert 2 * step["A_w"] <= step["m"] - 1
            assert step["projected"] >= step["m"] - 1 - step["A_w"]
            walk(step["sub"])

    walk(trace)
