"""Weighted blow-ups pi_1(z, c) = (z, z^l c) and pi_2(t, w) = (t w^(1/l), w).

Conjugating f by pi_1 (integer weight l) maps each q-exponent

    (i, j)  ->  (i~, j),   i~ = i + l j - l delta,

so the dominant exponent becomes gamma~ = gamma + l d - l delta; the
transform is holomorphic iff every i~ >= 0.  Conjugating by pi_2
(integer inverse weight) maps (i, j) -> (i, j~) with j~ = i/l + j; its
first component is only a monomial-times-unit normal form

    t^(delta - gamma/l) w^((delta - d~)/l) (1 + zeta),   d~ = gamma/l + d,

recorded by exponents.  The transformed map is superattracting at the
origin iff the new support avoids (0,0) and (0,1), and it degenerates the
exceptional axis iff every transformed z-exponent is positive.  Both
predicates are sharp exact-arithmetic facts about exponents, so they are
also offered for rational weights without constructing the transform.

The exact pi_1 transform divides by p(z)^l and is only constructed for
monomial p(z) = a z^delta; for general p use the exponent-level
predicates plus the numerical conjugacy evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import BiPoly, Rational, SkewProduct
from .newton import Classification


@dataclass(frozen=True)
class BlowupResult:
    """Transformed skew product (pi_1) or monomial-times-unit form (pi_2).

    ``transformed_q`` always holds the new second-component support; the
    packaged ``transformed`` skew product exists only when the result
    still has a nilpotent origin (exactly when it is superattracting).
    """

    kind: str  # 'pi1' | 'pi2'
    transformed: Optional[SkewProduct]
    transformed_q: Optional[BiPoly]
    gamma_tilde: Rational
    exponent_map: dict[tuple[int, int], tuple[Rational, Rational]]
    superattracting_at_origin: bool
    degenerates_axis: bool
    # pi_2 normal form of the first component, exponents of t and w:
    first_component_exponents: Optional[tuple[Rational, Rational]] = None
    d_tilde: Optional[Rational] = None


def _predicates(new_support) -> tuple[bool, bool]:
    """(superattracting, degenerates-axis) from a transformed support."""
    pairs = set(new_support)
    superattracting = (0, 0) not in pairs and (0, 1) not in pairs
    degenerates = min(i for i, _ in pairs) > 0
    return superattracting, degenerates


def _pi1_exponents(f: SkewProduct, l: Fraction, dominant: tuple[int, int]):
    delta = f.delta
    emap: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    for (i, j) in f.q.support:
        emap[(i, j)] = (Fraction(i) + l * j - l * delta, Fraction(j))
    gamma, d = dominant
    gamma_tilde = Fraction(gamma) + l * d - l * delta
    return emap, gamma_tilde


def blowup_pi1(f: SkewProduct, l: int,
               dominant: tuple[int, int] | None = None) -> BlowupResult:
    """Conjugate f by pi_1(z, c) = (z, z^l c) for an integer weight l >= 1.

    Requires monomial p (the transform divides by p(z)^l); raises when a
    transformed exponent would be negative (transform not holomorphic).
    """
    if l < 1 or l != int(l):
        raise ValueError("pi_1 requires an integer weight l >= 1")
    if set(f.p.terms) != {f.delta}:
        raise ValueError(
            "exact pi_1 transform needs monomial p; use check_blowup_tables "
            "and the numeric conjugacy evaluator for general p"
        )
    if dominant is None:
        from .newton import classify

        dominant = classify(f).primary.vertex
    lf = Fraction(l)
    emap, gamma_tilde = _pi1_exponents(f, lf, dominant)
    bad = [old for old, (it, _) in emap.items() if it < 0]
    if bad:
        raise ValueError(f"not holomorphic for l = {l}: negative exponents at {bad}")
    a = f.p.leading_at_zero()
    new_terms = {}
    for (i, j), coeff in f.q.terms.items():
        it, jt = emap[(i, j)]
        new_terms[(int(it), int(jt))] = coeff / a**l
    q_tilde = BiPoly(new_terms)
    sa, deg = _predicates(new_terms)
    try:
        transformed = SkewProduct(f.p, q_tilde)
    except ValueError:
        transformed = None  # new origin is not nilpotent (not SA)
    return BlowupResult(
        kind="pi1",
        transformed=transformed,
        transformed_q=q_tilde,
        gamma_tilde=gamma_tilde,
        exponent_map=emap,
        superattracting_at_origin=sa,
        degenerates_axis=deg,
    )


def blowup_pi2(f1: SkewProduct, l_inv: int,
               dominant: tuple[int, int] | None = None) -> BlowupResult:
    """Conjugate by pi_2(t, w) = (t w^(1/l), w), 1/l = l_inv integer >= 1.

    f1 must be in Case 3 shape for the weight l = 1/l_inv: with dominant
    vertex (gamma, d), the transformed heights j~ = l_inv i + j must all
    be >= d~ = l_inv gamma + d, and d~ <= delta.  The first component is
    not polynomial; its monomial-times-unit exponents are recorded.
    """
    if l_inv < 1 or l_inv != int(l_inv):
        raise ValueError("pi_2 requires an integer inverse weight >= 1")
    if dominant is None:
        from .newton import classify

        dominant = classify(f1).primary.vertex
    gamma, d = dominant
    delta = f1.delta
    d_tilde = Fraction(l_inv * gamma + d)
    emap: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    for (i, j) in f1.q.support:
        emap[(i, j)] = (Fraction(i), Fraction(l_inv * i + j))
    heights = [jt for (_, jt) in emap.values()]
    if d_tilde > delta or any(jt < d_tilde for jt in heights):
        raise ValueError(
            f"shape violation: f1 is not in Case 3 shape for weight 1/{l_inv}"
        )
    new_pairs = {(int(i), int(jt)) for (i, jt) in emap.values()}
    sa = (0, 0) not in new_pairs and (0, 1) not in new_pairs
    deg = min(i for (i, _) in new_pairs) > 0
    first = (Fraction(delta) - l_inv * gamma, Fraction(l_inv) * (delta - d_tilde))
    q_tilde = BiPoly({
        (int(emap[old][0]), int(emap[old][1])): coeff
        for old, coeff in f1.q.terms.items()
    })
    return BlowupResult(
        kind="pi2",
        transformed=None,
        transformed_q=q_tilde,
        gamma_tilde=Fraction(gamma),
        exponent_map=emap,
        superattracting_at_origin=sa,
        degenerates_axis=deg,
        first_component_exponents=first,
        d_tilde=d_tilde,
    )


def check_blowup_tables(f: SkewProduct, c: Classification, l: Rational
                        ) -> dict[str, bool]:
    """Predicted pi_1 flags from exact exponent inequalities, any rational l.

    Returns {'holomorphic', 'superattracting', 'degenerates'} without
    constructing the transform (so it also serves non-integer weights and
    non-monomial p, which only shift coefficients, not exponents).
    """
    l = Fraction(l)
    if l <= 0:
        raise ValueError("weight must be positive")
    emap, _ = _pi1_exponents(f, l, c.primary.vertex)
    tilde = list(emap.values())
    if any(it < 0 for (it, _) in tilde):
        return {"holomorphic": False, "superattracting": False, "degenerates": False}
    pairs = {(it, jt) for (it, jt) in tilde}
    sa = (Fraction(0), Fraction(0)) not in pairs and (Fraction(0), Fraction(1)) not in pairs
    deg = min(it for (it, _) in tilde) > 0
    return {"holomorphic": True, "superattracting": sa, "degenerates": deg}


def pi1_conjugacy_residual(f: SkewProduct, l: int, z: complex, c: complex) -> float:
    """Relative defect of pi_1^-1 o f o pi_1 against the exact transform.

    Numeric witness that the exponent arithmetic matches the analytic
    conjugacy; needs z != 0 and monomial p.
    """
    res = blowup_pi1(f, l)
    ft = res.transformed
    w = z**l * c
    z1, w1 = f(z, w)
    direct = (z1, w1 / z1**l)
    via = ft(z, c)
    scale = max(abs(direct[0]), abs(direct[1]), 1e-300)
    return max(abs(direct[0] - via[0]), abs(direct[1] - via[1])) / scale
