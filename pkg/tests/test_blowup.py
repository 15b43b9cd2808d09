"""Blow-up transforms pi_1, pi_2 and the exponent-level predicate tables."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from skewdyn import (
    BiPoly,
    SkewProduct,
    UniPoly,
    blowup_pi1,
    blowup_pi2,
    check_blowup_tables,
    classify,
    monomial_skew,
)
from skewdyn.blowup import pi1_conjugacy_residual


def _skew(delta, support):
    return SkewProduct(UniPoly({delta: 1.0}), BiPoly({pt: 1.0 for pt in support}))


def test_pi1_exponent_arithmetic_example():
    f = _skew(2, [(0, 4), (2, 1), (3, 0)])
    res = blowup_pi1(f, 1)
    got = {old: int(new[0]) for old, new in res.exponent_map.items()}
    assert got == {(0, 4): 2, (2, 1): 1, (3, 0): 1}
    assert res.gamma_tilde == 1  # at the dominant vertex (3, 0)
    assert res.superattracting_at_origin
    assert res.degenerates_axis


def test_pi1_at_integer_alpha():
    # delta > d with integer alpha: gamma~ = 0, dominant becomes (0, d)
    f = _skew(3, [(0, 4), (1, 2)])  # alpha = 1, d = 2
    res = blowup_pi1(f, 1)
    assert res.gamma_tilde == 0
    assert (0, 2) in res.transformed.q.support
    assert res.superattracting_at_origin  # d = 2 >= 2
    assert not res.degenerates_axis


def test_pi1_monomial_single_term():
    f0 = monomial_skew(3, 2, 2)
    res = blowup_pi1(f0, 1)
    assert res.transformed.q.support == ((1, 2),)
    assert res.gamma_tilde == 1


def test_pi1_rejects_nonholomorphic_weight():
    f = _skew(3, [(0, 4), (1, 2)])  # alpha = 1
    with pytest.raises(ValueError):
        blowup_pi1(f, 2)  # l > alpha makes gamma~ < 0


def test_pi1_rejects_nonmonomial_p():
    f = SkewProduct(UniPoly({2: 1.0, 3: 0.5}), BiPoly({(1, 2): 1.0}))
    with pytest.raises(ValueError):
        blowup_pi1(f, 1)


def test_pi1_conjugacy_random_points():
    rng = random.Random(12)
    for f, l in [
        (_skew(2, [(0, 4), (2, 1), (3, 0)]), 1),
        (_skew(3, [(0, 4), (1, 2)]), 1),
        (monomial_skew(2, 1, 3), 2),
    ]:
        for _ in range(100):
            z = cmath.rect(rng.uniform(0.02, 0.2), rng.uniform(0, 2 * math.pi))
            c = cmath.rect(rng.uniform(0.02, 0.2), rng.uniform(0, 2 * math.pi))
            assert pi1_conjugacy_residual(f, l, z, c) < 1e-10


def test_pi2_height_collapse_example():
    f = _skew(4, [(1, 3), (2, 2)])
    res = blowup_pi2(f, 1, dominant=(1, 3))
    heights = {int(jt) for (_, jt) in res.exponent_map.values()}
    assert heights == {4}
    assert res.d_tilde == 4
    # first component normal form t^(delta - gamma/l) w^((delta - d~)/l)
    assert res.first_component_exponents == (Fraction(3), Fraction(0))


def test_pi2_single_vertex():
    f0 = monomial_skew(4, 2, 1)
    res = blowup_pi2(f0, 1, dominant=(2, 1))
    assert res.d_tilde == 3  # 1*2 + 1 <= delta
    assert {tuple(map(int, v)) for v in res.exponent_map.values()} == {(2, 3)}


def test_pi2_shape_violation():
    f = _skew(2, [(0, 4), (2, 1), (3, 0)])  # Case 2 shape, not Case 3
    with pytest.raises(ValueError):
        blowup_pi2(f, 1)


def test_pi2_after_pi1_matches_affine_composition():
    rng = random.Random(44)
    # sampled Case 4 supports: pi_2 o pi_1 exponents equal the direct map
    f = _skew(3, [(0, 5), (1, 2), (3, 1)])
    c = classify(f)
    l1, l2 = c.l1, c.l2
    assert (l1, l1 + l2) == (Fraction(1, 3), 2)
    # use integer weights inside the rectangle: l_(1) = 1 = alpha needs care;
    # take l_(1) = 1 (= alpha, allowed since d >= 2) and l_(2) = 1
    res1 = blowup_pi1(f, 1)
    res2 = blowup_pi2(res1.transformed, 1, dominant=(0, 2))
    for (i, j) in f.q.support:
        it = i + 1 * j - 1 * 3          # A_1 with l_(1) = 1
        jt = 1 * it + j                 # A_2 with l_(2)^-1 = 1
        assert (it, j) in res1.transformed.q.support
        assert res2.exponent_map[(it, j)] == (Fraction(it), Fraction(jt))
    del rng


def test_tables_delta_le_d_always_sa_and_deg():
    f = _skew(2, [(0, 5), (1, 3)])  # delta = 2 <= d = 3
    c = classify(f)
    for l in (Fraction(1, 3), Fraction(1), Fraction(7, 2)):
        flags = check_blowup_tables(f, c, l)
        assert flags == {"holomorphic": True, "superattracting": True,
                         "degenerates": True}


def test_tables_at_alpha():
    # delta > d, (n1, m1) != (0, delta), l = alpha: SA iff d >= 2, not Deg
    f = _skew(3, [(0, 4), (1, 2)])
    c = classify(f)
    flags = check_blowup_tables(f, c, c.alpha)
    assert flags["superattracting"] and not flags["degenerates"]
    f1 = _skew(3, [(0, 4), (1, 1)])  # d = 1 at the dominant vertex (1, 1)
    c1 = classify(f1)
    assert c1.d == 1
    flags1 = check_blowup_tables(f1, c1, c1.alpha)
    assert not flags1["superattracting"]


def test_tables_special_case_first_vertex():
    # (n1, m1) = (0, delta), 0 < l < alpha: SA without Deg
    f = _skew(2, [(0, 2), (3, 1)])
    c = classify(f)
    term = next(t for t in c.terms if t.vertex != (0, 2))
    alpha = term.alpha
    for k in (1, 2):
        l = alpha * Fraction(k, 3)
        flags = check_blowup_tables(f, c, l)
        assert flags["superattracting"]
        assert not flags["degenerates"]


def test_tables_agree_with_pi1_for_integer_weights():
    rng = random.Random(77)
    grid = [(i, j) for i in range(7) for j in range(7) if i + j >= 2]
    checked = 0
    for _ in range(300):
        support = rng.sample(grid, rng.randint(1, 6))
        delta = rng.randint(2, 6)
        f = _skew(delta, support)
        c = classify(f)
        l = rng.randint(1, 4)
        flags = check_blowup_tables(f, c, Fraction(l))
        if not flags["holomorphic"]:
            with pytest.raises(ValueError):
                blowup_pi1(f, l, dominant=c.primary.vertex)
            continue
        res = blowup_pi1(f, l, dominant=c.primary.vertex)
        assert res.superattracting_at_origin == flags["superattracting"]
        assert res.degenerates_axis == flags["degenerates"]
        checked += 1
    assert checked > 100
