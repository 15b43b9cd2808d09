"""Green-type escape/attraction-rate functions of a skew product.

Estimated limits, with (z_n, w_n) = f^n(z, w) and lambda = max{delta, d}:

    G_p        = lim delta^-n log|p^n(z)|
    G_z^alpha  = lim d^-n  log|w_n / z_n^alpha|           (delta != d)
    G_z^inf    = lim d^-n  log(|w_n| / |z_n|^(gamma n/d))  (delta == d)
    G_z^alpha+ = lim d^-n  log+|w_n / z_n^alpha|
    G_z        = lim lambda^-n log|w_n|
    G_f        = lim lambda^-n log max(|z_n|, |w_n|)
    G_f^alpha  = lim lambda^-n log max(|z_n^alpha|, |w_n|)

Only magnitudes enter any of these, so orbits are tracked as log
magnitudes.  The complex orbit is iterated exactly while every
non-negligible monomial stays inside the double-precision window; past
that the driver switches to the exact dominant-monomial recursion in log
space, but only after verifying that the dominant term actually dominates
(the neglected correction is folded into the reported residual).  For
integer weights alpha the weighted ratio c_n = w_n / z_n^alpha satisfies
its own polynomial recursion with non-negative z-exponents, which reaches
far deeper than the raw orbit; G_z^alpha and G_z^alpha+ use it when it
applies.

Infinite values are sentinels (math.inf) with a termination tag, never
silent NaNs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .algebra import SkewProduct, UniPoly
from .newton import Classification

DEFAULT_N_MAX = 64
DEFAULT_TOL = 1e-10
ESCAPE_LOG = math.log(1e12)

_WINDOW = 690.0          # |log| range where double products stay representable
_NEGLIGIBLE_GAP = 40.0   # terms this many e-folds below the max are droppable
_TAIL_TOL = 1e-9         # dominance level required to extend in log space

TERM_CONVERGED = "converged"
TERM_ESCAPED = "escaped_with_tail"
TERM_BUDGET = "budget"
TERM_HIT_ZERO = "hit_zero"
TERM_HIT_EZ = "hit_Ez"
TERM_DIV_NEG = "divergent_to_minus_inf"
TERM_DIV_POS = "divergent_to_plus_inf"


@dataclass(frozen=True)
class GreenEstimate:
    """Estimated value with termination diagnostics.

    value is +-math.inf for sentinel outcomes; residual is the last
    increment magnitude plus any folded switch/tail bound.
    """

    value: float
    n_used: int
    termination: str
    residual: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


@dataclass(frozen=True)
class FiberFunctionSample:
    """Grid of estimates over one fiber {z} x rectangle, row-major order."""

    z: complex
    ws: tuple[complex, ...]
    estimates: tuple[GreenEstimate, ...]


def _lmag(x: complex) -> float:
    m = abs(x)
    return math.log(m) if m > 0 else -math.inf


# ---------------------------------------------------------------------------
# orbit drivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _LogStep:
    n: int
    log_z: float
    log_w: float


@dataclass
class _OrbitLogs:
    steps: list[_LogStep]
    reason: str  # 'complete' | 'escaped' | 'range'
    switch_step: Optional[int]
    switch_eta: float
    dominant: tuple[int, int] = (0, 0)  # vertex driving the extension


def _terms_safe(term_logs: list[float]) -> bool:
    """True when a polynomial value computes faithfully in doubles.

    The result magnitude tracks the top term, so the top must sit inside
    the window, and every other term must be representable or negligible
    relative to the top.  -inf terms are exact zeros and never block.
    """
    top = max(term_logs)
    if top == -math.inf:
        return True
    if top > _WINDOW or top < -_WINDOW:
        return False
    return all(t >= -_WINDOW or t <= top - _NEGLIGIBLE_GAP for t in term_logs)


def _safe_exact_step(f: SkewProduct, log_z: float, log_w: float) -> bool:
    """True if evaluating p and q loses no non-negligible monomial."""
    q_logs = [
        (0.0 if i == 0 else i * log_z) + (0.0 if j == 0 else j * log_w)
        for (i, j) in f.q.terms
    ]
    p_logs = [k * log_z for k in f.p.terms]
    return _terms_safe(q_logs) and _terms_safe(p_logs)


def _dominance_eta(f: SkewProduct, gamma: int, d: int,
                   log_z: float, log_w: float) -> float:
    """Bound for |q/(b z^g w^d) - 1| + |p/(a z^delta) - 1| in log form."""
    a = abs(f.p.leading_at_zero())
    b = abs(f.q.terms[(gamma, d)])
    eta = 0.0
    for k, coeff in f.p.terms.items():
        if k != f.delta:
            eta += abs(coeff) / a * math.exp(min((k - f.delta) * log_z, 700.0))
    base = gamma * log_z + d * log_w
    for (i, j), coeff in f.q.terms.items():
        if (i, j) != (gamma, d):
            t = (0.0 if i == 0 else i * log_z) + (0.0 if j == 0 else j * log_w)
            eta += abs(coeff) / b * math.exp(min(t - base, 700.0))
    return eta


def orbit_logs(f: SkewProduct, dominant: tuple[int, int], z: complex, w: complex,
               n_max: int, escape_log: float = ESCAPE_LOG) -> _OrbitLogs:
    """Log-magnitude orbit with validated extension past the float window."""
    gamma, d = dominant
    log_a = _lmag(f.p.leading_at_zero())
    log_b = _lmag(f.q.terms[(gamma, d)])
    delta = f.delta
    z, w = complex(z), complex(w)
    lz, lw = _lmag(z), _lmag(w)
    steps = [_LogStep(0, lz, lw)]
    reason = "complete"
    switch_step: Optional[int] = None
    switch_eta = 0.0
    extended = False
    for n in range(1, n_max + 1):
        if max(lz, lw) > escape_log:
            reason = "escaped"
            break
        if not extended and not _safe_exact_step(f, lz, lw):
            eta = _dominance_eta(f, gamma, d, lz, lw)
            if eta < _TAIL_TOL and lz > -math.inf and lw > -math.inf:
                extended, switch_step, switch_eta = True, n, eta
            else:
                reason = "range"
                break
        if extended:
            lz, lw = log_a + delta * lz, log_b + gamma * lz + d * lw
        else:
            try:
                z, w = f.p(z), f.q(z, w)
            except OverflowError:
                reason = "escaped"
                break
            if not (math.isfinite(abs(z)) and math.isfinite(abs(w))):
                reason = "escaped"
                break
            lz, lw = _lmag(z), _lmag(w)
        steps.append(_LogStep(n, lz, lw))
    return _OrbitLogs(steps, reason, switch_step, switch_eta, dominant)


def _uni_orbit_logs(p: UniPoly, z: complex, n_max: int,
                    escape_log: float = ESCAPE_LOG) -> _OrbitLogs:
    """Log-magnitude orbit of the base polynomial p alone."""
    log_a = _lmag(p.leading_at_zero())
    order = p.order
    z = complex(z)
    lz = _lmag(z)
    steps = [_LogStep(0, lz, 0.0)]
    reason = "complete"
    switch_step: Optional[int] = None
    switch_eta = 0.0
    extended = False
    a = abs(p.leading_at_zero())
    for n in range(1, n_max + 1):
        if lz > escape_log:
            reason = "escaped"
            break
        if not extended and lz > -math.inf and not _terms_safe([k * lz for k in p.terms]):
            eta = sum(abs(c) / a * math.exp(min((k - order) * lz, 700.0))
                      for k, c in p.terms.items() if k != order)
            if eta < _TAIL_TOL:
                extended, switch_step, switch_eta = True, n, eta
            else:
                reason = "range"
                break
        if extended:
            lz = log_a + order * lz
        else:
            try:
                z = p(z)
            except OverflowError:
                reason = "escaped"
                break
            if not math.isfinite(abs(z)):
                reason = "escaped"
                break
            lz = _lmag(z)
        steps.append(_LogStep(n, lz, 0.0))
    return _OrbitLogs(steps, reason, switch_step, switch_eta)


# ---------------------------------------------------------------------------
# weighted-ratio orbit (integer alpha)
# ---------------------------------------------------------------------------

def ratio_transform_exponents(f: SkewProduct, alpha: Fraction
                              ) -> Optional[list[tuple[int, int, complex]]]:
    """Exponents (i~, j) of the weight-alpha ratio recursion, or None.

    The recursion c' = q(z, z^alpha c)/p(z)^alpha has monomials
    (b_ij / a^alpha) z^(i~) c^j with i~ = i + alpha (j - delta); it is
    usable when alpha is an integer and every i~ is >= 0.
    """
    if alpha.denominator != 1:
        return None
    al = int(alpha)
    out = []
    for (i, j), b in f.q.terms.items():
        it = i + al * (j - f.delta)
        if it < 0:
            return None
        out.append((it, j, b))
    return out


_SOFT_TAIL_TOL = 1e-3   # dominance level accepted with the error folded in


@dataclass
class _RatioOrbit:
    log_mags: list[float]      # log|c_n| (-inf for exact zero)
    log_z: list[float]         # log|z_n| alongside
    etas: list[float]          # per-step neglected-term bound (0 exact steps)
    reason: str                # 'complete' | 'escaped' | 'zero' | 'range'

    def fold_bound(self, d: int, upto: int) -> float:
        """Bound on the accumulated value error: sum 2 eta_k d^-k, k <= upto."""
        return sum(2.0 * e / d**k for k, e in enumerate(self.etas[: upto + 1]) if e)


def ratio_orbit(f: SkewProduct, alpha: Fraction, z: complex, w: complex,
                n_max: int, escape_log: float = ESCAPE_LOG) -> Optional[_RatioOrbit]:
    """Orbit of c_n = w_n / z_n^alpha for integer alpha; None if unsupported.

    Tracks the complex log of z_n, so the recursion stays exact long
    after z_n itself leaves the double range.  Once the ratio dives
    toward zero and a single monomial of the recursion provably
    dominates, the magnitude continues by the exact dominant log
    recursion, re-validated at every step.
    """
    terms = ratio_transform_exponents(f, alpha)
    if terms is None or z == 0:
        return None
    al = int(alpha)
    a = f.p.leading_at_zero()
    log_a = cmath.log(a)
    delta = f.delta
    a_pow = a**al
    term_list = [(it, j, b / a_pow, math.log(abs(b / a_pow))) for it, j, b in terms]
    lz = cmath.log(complex(z))
    c = complex(w) * cmath.exp(-al * lz) if al else complex(w)
    log_mags = [_lmag(c)]
    zlogs = [lz.real]
    etas = [0.0]
    reason = "complete"
    extended = False
    dom = None  # (it, j, log|coeff|) of the validated dominant monomial
    lc = log_mags[0]
    for _ in range(n_max):
        if lc > escape_log or lz.real > escape_log:
            reason = "escaped"
            break
        if not extended and lc == -math.inf:
            reason = "zero"
            break
        lzr = lz.real
        # p-tail correction log(p(z)/(a z^delta)); exact 0 once z underflows
        zv = cmath.exp(lz) if lzr > -700.0 else 0j
        ptail = sum((coeff / a) * zv ** (k - delta)
                    for k, coeff in f.p.terms.items() if k != delta)
        corr = cmath.log(1 + ptail)
        tlogs = [
            (it * lzr if it else 0.0) + (j * lc if j else 0.0) + lb
            for it, j, _, lb in term_list
        ]
        if extended or not _terms_safe(tlogs):
            top_idx = max(range(len(tlogs)), key=tlogs.__getitem__)
            top = tlogs[top_idx]
            eta = sum(
                math.exp(t - top)
                for k, t in enumerate(tlogs)
                if k != top_idx and t - top > -80.0
            )
            if eta < _SOFT_TAIL_TOL and top > -math.inf:
                it, j, _, lb = term_list[top_idx]
                dom = (it, j, lb)
                extended = True
            else:
                reason = "range"
                break
            lc = dom[2] + dom[0] * lzr + dom[1] * lc - al * corr.real
            lz = log_a + delta * lz + corr
            step_eta = eta
        else:
            step_eta = 0.0
            try:
                nxt = 0j
                for it, j, coeff, _ in term_list:
                    zfac = cmath.exp(it * lz - al * corr) if it else cmath.exp(-al * corr)
                    nxt += coeff * (c**j) * zfac
            except OverflowError:
                reason = "escaped"
                break
            if not (math.isfinite(nxt.real) and math.isfinite(nxt.imag)):
                reason = "escaped"
                break
            lz = log_a + delta * lz + corr
            c = nxt
            lc = _lmag(c)
        log_mags.append(lc)
        zlogs.append(lz.real)
        etas.append(step_eta)
        if lc == -math.inf:
            reason = "zero"
            break
    return _RatioOrbit(log_mags, zlogs, etas, reason)


# ---------------------------------------------------------------------------
# limit settling
# ---------------------------------------------------------------------------

class _Settler:
    """Incremental limit settling over the partial estimates g_n.

    Converged: two consecutive increments below tol.  Divergent: five
    consecutive same-sign increments that do not decay.  Otherwise budget.
    """

    def __init__(self, tol: float):
        self.tol = tol
        self.gs: list[float] = []
        self.incs: list[float] = []

    def push(self, g: float) -> Optional[GreenEstimate]:
        self.gs.append(g)
        n = len(self.gs) - 1
        if n >= 1:
            self.incs.append(self.gs[-1] - self.gs[-2])
        if (len(self.incs) >= 2 and abs(self.incs[-1]) < self.tol
                and abs(self.incs[-2]) < self.tol):
            return GreenEstimate(g, n, TERM_CONVERGED, abs(self.incs[-1]))
        if len(self.incs) >= 5:
            window = self.incs[-5:]
            if all(abs(i) > max(self.tol, 1e-14) for i in window):
                same_sign = len({math.copysign(1, i) for i in window}) == 1
                decaying = any(
                    abs(window[j + 1]) < 0.9 * abs(window[j]) for j in range(4)
                )
                if same_sign and not decaying:
                    val = math.inf if window[-1] > 0 else -math.inf
                    tag = TERM_DIV_POS if window[-1] > 0 else TERM_DIV_NEG
                    return GreenEstimate(val, n, tag, abs(window[-1]))
        return None

    def finish(self) -> GreenEstimate:
        if not self.gs:
            return GreenEstimate(math.nan, 0, TERM_BUDGET, math.inf)
        n = len(self.gs) - 1
        residual = abs(self.incs[-1]) if self.incs else math.inf
        if self.incs and abs(self.incs[-1]) < self.tol:
            # truncated orbit whose last visible increment already settled
            return GreenEstimate(self.gs[-1], n, TERM_CONVERGED, residual)
        return GreenEstimate(self.gs[-1], n, TERM_BUDGET, residual)


def _fold_residual(est: GreenEstimate, extra: float) -> GreenEstimate:
    if extra <= 0:
        return est
    return GreenEstimate(est.value, est.n_used, est.termination, est.residual + extra)


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

def g_p(p: UniPoly, z: complex, n_max: int = DEFAULT_N_MAX,
        tol: float = DEFAULT_TOL) -> GreenEstimate:
    """G_p(z) = lim delta^-n log|p^n(z)| with delta the order of p at 0."""
    delta = p.order
    logs = _uni_orbit_logs(p, z, n_max)
    settler = _Settler(tol)
    est = None
    for st in logs.steps:
        if st.log_z == -math.inf:
            return GreenEstimate(-math.inf, st.n, TERM_HIT_ZERO, 0.0)
        est = settler.push(st.log_z / delta**st.n)
        if est is not None:
            break
    if est is None:
        est = settler.finish()
        if logs.reason == "escaped" and est.termination == TERM_BUDGET:
            est = GreenEstimate(est.value, est.n_used, TERM_ESCAPED, est.residual)
    if logs.switch_step is not None and logs.switch_step <= est.n_used:
        est = _fold_residual(est, 4 * logs.switch_eta / delta**logs.switch_step)
    return est


def _require_d(c: Classification, minimum: int = 1) -> int:
    if c.d < minimum:
        raise ValueError(f"estimator requires fiber degree d >= {minimum}, got d = {c.d}")
    return c.d


def _plus_tail_constant(d: int, coeff_sum: float) -> float:
    """M with |G+ - d^-n log+|c_n|| <= M d^-n, from the one-step defect.

    log+|c'| - d log+|c| is bounded above by log(sum of coefficient
    magnitudes) and below by -d log(escape radius) until escape, so the
    geometric tail is controlled by M = max(...) * d/(d-1).
    """
    m1 = max(math.log(max(coeff_sum, 1.0)) + 1.0, d * ESCAPE_LOG)
    return m1 * d / (d - 1) if d >= 2 else m1


def _gza_from_ratio(ro: _RatioOrbit, d: int, tol: float, n_max: int,
                    plus: bool, coeff_sum: float = 4.0) -> GreenEstimate:
    settler = _Settler(tol)
    tail_m = _plus_tail_constant(d, coeff_sum) if plus else 0.0
    n = 0
    for n, lr in enumerate(ro.log_mags):
        if lr == -math.inf:
            if plus:
                return GreenEstimate(0.0, n, TERM_HIT_ZERO, 0.0)
            return GreenEstimate(-math.inf, n, TERM_HIT_ZERO, 0.0)
        if lr > ESCAPE_LOG:
            # tail past the escape radius is below 1e-12 of the last term
            return GreenEstimate(lr / d**n, n, TERM_ESCAPED,
                                 3e-12 / d**n + ro.fold_bound(d, n))
        if plus:
            # converged only when the certified tail bound is below tol;
            # increments alone can sit on the spurious log+ = 0 plateau
            bound = tail_m / d**n if d >= 2 else math.inf
            if bound < tol:
                return GreenEstimate(max(lr, 0.0) / d**n, n, TERM_CONVERGED,
                                     bound + ro.fold_bound(d, n))
            settler.push(max(lr, 0.0) / d**n)
        else:
            est = settler.push(lr / d**n)
            if est is not None:
                return _fold_residual(est, ro.fold_bound(d, est.n_used))
    if plus and ro.reason == "range" and d >= 2:
        # the ratio dove below the double range: every later bounce is
        # bounded by shrinking z-powers, so the escape rate is zero
        return GreenEstimate(0.0, n, TERM_CONVERGED,
                             tail_m / d**n + ro.fold_bound(d, n))
    return _fold_residual(settler.finish(), ro.fold_bound(d, n))


def _gza_direct(f: SkewProduct, c: Classification, alpha_frac: Fraction,
                z: complex, w: complex, n_max: int, tol: float,
                plus: bool) -> GreenEstimate:
    alpha = float(alpha_frac)
    d = c.d
    logs = _best_orbit_logs(f, c, z, w, n_max)
    settler = _Settler(tol)
    b = abs(f.q.terms[c.primary.vertex])
    tail_m = _plus_tail_constant(d, sum(abs(v) for v in f.q.terms.values()) / b + 1)
    # Past the switch, log|w_n| and alpha log|z_n| both grow like delta^n
    # and their difference cancels catastrophically; when the extension
    # vertex (g~, d~) sits on the sweep line (g~ = alpha (delta - d~),
    # exact in rationals), the weighted ratio obeys its own exact
    # recursion u' = d~ u + (log|b~| - alpha log|a|).
    g_dom, d_dom = logs.dominant
    on_line = Fraction(g_dom) + alpha_frac * (d_dom - f.delta) == 0
    u_const = (_lmag(f.q.terms[logs.dominant])
               - alpha * _lmag(f.p.leading_at_zero()))
    u_prev: Optional[float] = None
    est = None
    for st in logs.steps:
        if st.log_w == -math.inf:
            if plus:
                return GreenEstimate(0.0, st.n, TERM_HIT_ZERO, 0.0)
            return GreenEstimate(-math.inf, st.n, TERM_HIT_ZERO, 0.0)
        if st.log_z == -math.inf and alpha != 0.0:
            if alpha > 0:
                # weighted ratio blows up along E_z
                return GreenEstimate(math.inf, st.n, TERM_HIT_EZ, math.inf)
            # alpha < 0 (delta < d): the ratio |w z^|alpha|| tends to 0
            if plus:
                return GreenEstimate(0.0, st.n, TERM_HIT_EZ, 0.0)
            return GreenEstimate(-math.inf, st.n, TERM_HIT_EZ, 0.0)
        if (logs.switch_step is not None and st.n >= logs.switch_step
                and on_line and u_prev is not None):
            lr = d_dom * u_prev + u_const
        else:
            lr = st.log_w - (alpha * st.log_z if alpha != 0.0 else 0.0)
        u_prev = lr
        if lr > ESCAPE_LOG:
            return GreenEstimate(lr / d**st.n, st.n, TERM_ESCAPED, 3e-12 / d**st.n)
        if plus:
            bound = tail_m / d**st.n if d >= 2 else math.inf
            if bound < tol:
                return GreenEstimate(max(lr, 0.0) / d**st.n, st.n,
                                     TERM_CONVERGED, bound)
            settler.push(max(lr, 0.0) / d**st.n)
        else:
            est = settler.push(lr / d**st.n)
            if est is not None:
                break
    if est is None:
        if plus and logs.reason == "range" and d >= 2:
            n_last = logs.steps[-1].n
            return GreenEstimate(0.0, n_last, TERM_CONVERGED, tail_m / d**n_last)
        est = settler.finish()
    if logs.switch_step is not None and logs.switch_step <= est.n_used:
        est = _fold_residual(est, 4 * logs.switch_eta / d**logs.switch_step)
    return est


def _ratio_coeff_sum(f: SkewProduct, alpha: Fraction) -> float:
    terms = ratio_transform_exponents(f, alpha)
    a_pow = f.p.leading_at_zero() ** int(alpha)
    return sum(abs(b / a_pow) for _, _, b in terms) + 1.0


def g_z_alpha(f: SkewProduct, c: Classification, z: complex, w: complex,
              n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> GreenEstimate:
    """G_z^alpha with the classification's (possibly redefined) alpha."""
    _require_d(c)
    if c.alpha is None:
        raise ValueError("alpha undefined (gamma > 0, delta == d): use g_z_infty")
    ro = ratio_orbit(f, c.alpha, z, w, n_max)
    if ro is not None:
        return _gza_from_ratio(ro, c.d, tol, n_max, plus=False)
    return _gza_direct(f, c, c.alpha, z, w, n_max, tol, plus=False)


def g_z_alpha_plus(f: SkewProduct, c: Classification, z: complex, w: complex,
                   n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL
                   ) -> GreenEstimate:
    """G_z^{alpha,+} >= 0; zero when the weighted ratio never escapes."""
    _require_d(c)
    if c.alpha is None:
        raise ValueError("alpha undefined (gamma > 0, delta == d)")
    ro = ratio_orbit(f, c.alpha, z, w, n_max)
    if ro is not None:
        return _gza_from_ratio(ro, c.d, tol, n_max, plus=True,
                               coeff_sum=_ratio_coeff_sum(f, c.alpha))
    return _gza_direct(f, c, c.alpha, z, w, n_max, tol, plus=True)


def g_z_infty(f: SkewProduct, c: Classification, z: complex, w: complex,
              n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> GreenEstimate:
    """G_z^infty for delta == d."""
    d = _require_d(c)
    if c.delta != d:
        raise ValueError(f"G_z^infty requires delta == d, got {c.delta} != {d}")
    gamma = c.gamma
    logs = _best_orbit_logs(f, c, z, w, n_max)
    settler = _Settler(tol)
    # cancellation-free extension of u_n = log|w_n| - (gamma n / d) log|z_n|
    # past the switch, valid when the extension uses the primary vertex:
    # u' = d u + log|b| - (gamma/d)(n+1) log|a|
    primary_ext = logs.dominant == c.primary.vertex and c.delta == d
    log_a = _lmag(f.p.leading_at_zero())
    log_b = _lmag(f.q.terms[logs.dominant])
    u_prev: Optional[float] = None
    est = None
    for st in logs.steps:
        if st.log_w == -math.inf and st.log_z == -math.inf:
            return GreenEstimate(math.nan, st.n, TERM_HIT_ZERO, math.inf)
        if st.log_w == -math.inf:
            return GreenEstimate(-math.inf, st.n, TERM_HIT_ZERO, 0.0)
        if st.log_z == -math.inf:
            return GreenEstimate(math.inf, st.n, TERM_HIT_EZ, math.inf)
        if (logs.switch_step is not None and st.n >= logs.switch_step
                and primary_ext and u_prev is not None):
            u = d * u_prev + log_b - (gamma / d) * st.n * log_a
        else:
            u = st.log_w - (gamma / d) * st.n * st.log_z
        u_prev = u
        est = settler.push(u / d**st.n)
        if est is not None:
            break
    if est is None:
        est = settler.finish()
    if logs.switch_step is not None and logs.switch_step <= est.n_used:
        est = _fold_residual(est, 4 * logs.switch_eta / d**logs.switch_step)
    return est


def _series_limit(values: list[float], tol: float) -> GreenEstimate:
    settler = _Settler(tol)
    for g in values:
        est = settler.push(g)
        if est is not None:
            return est
    return settler.finish()


def _best_orbit_logs(f: SkewProduct, c: Classification, z: complex, w: complex,
                     n_max: int, escape_log: float = ESCAPE_LOG) -> _OrbitLogs:
    """Orbit logs extended with whichever dominant term carries furthest.

    A two-dominant-term map has one dominant vertex per wedge; when the
    primary term fails the dominance check, the alternate may still
    extend the orbit past the float window.
    """
    best = orbit_logs(f, c.primary.vertex, z, w, n_max, escape_log)
    if best.reason != "range" or len(c.terms) == 1:
        return best
    for term in c.terms[1:]:
        other = orbit_logs(f, term.vertex, z, w, n_max, escape_log)
        if len(other.steps) > len(best.steps):
            best = other
    return best


def _w_axis_invariant(f: SkewProduct) -> bool:
    return all(j >= 1 for (_, j) in f.q.terms)


def g_z(f: SkewProduct, c: Classification, z: complex, w: complex,
        n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> GreenEstimate:
    """G_z(w) = lim lambda^-n log|w_n|."""
    lam = c.lam
    axis_inv = _w_axis_invariant(f)
    if c.alpha is not None and z != 0:
        # log|w_n| = alpha log|z_n| + log|c_n| exactly; the weighted-ratio
        # orbit reaches far deeper than the raw one while the ratio stays
        # representable (on ratio escape w itself may still decay, so that
        # case falls back to the direct orbit below)
        ro = ratio_orbit(f, c.alpha, z, w, n_max)
        if ro is not None and ro.reason in ("complete", "zero"):
            alpha = float(c.alpha)
            vals = []
            for n, (lcn, lzn) in enumerate(zip(ro.log_mags, ro.log_z)):
                if lcn == -math.inf:
                    if axis_inv:
                        return GreenEstimate(-math.inf, n, TERM_HIT_ZERO, 0.0)
                    break
                lw = alpha * lzn + lcn
                if lw > ESCAPE_LOG:
                    return GreenEstimate(lw / lam**n, n, TERM_ESCAPED,
                                         3e-12 / lam**n + ro.fold_bound(lam, n))
                vals.append(lw / lam**n)
            else:
                est = _series_limit(vals, tol)
                return _fold_residual(est, ro.fold_bound(lam, est.n_used))
    logs = _best_orbit_logs(f, c, z, w, n_max)
    vals = []
    for st in logs.steps:
        if st.log_w == -math.inf:
            if axis_inv:
                return GreenEstimate(-math.inf, st.n, TERM_HIT_ZERO, 0.0)
            continue  # transient zero (j = 0 terms revive w); limit unaffected
        vals.append(st.log_w / lam**st.n)
    est = _series_limit(vals, tol)
    if logs.switch_step is not None and logs.switch_step <= est.n_used:
        est = _fold_residual(est, 4 * logs.switch_eta / lam**logs.switch_step)
    return est


def _max_of_limits(f: SkewProduct, c: Classification, z: complex, w: complex,
                   n_max: int, tol: float, z_scale: float) -> GreenEstimate:
    """lim lambda^-n max(z_scale log|z_n|, log|w_n|) as max of the two limits.

    The raw max sequence can sit on a transient plateau before the two
    branches cross, so each branch is settled on its own and the limits
    are combined (valid whenever both limits exist in [-inf, inf)).
    """
    lam = c.lam
    logs = _best_orbit_logs(f, c, z, w, n_max)
    axis_inv = _w_axis_invariant(f)
    z_vals: list[float] = []
    w_vals: list[float] = []
    z_zero = w_zero = False
    for st in logs.steps:
        if st.log_z == -math.inf and st.log_w == -math.inf:
            return GreenEstimate(-math.inf, st.n, TERM_HIT_ZERO, 0.0)
        if st.log_z == -math.inf:
            z_zero = True  # z stays on the invariant fiber z = 0
        else:
            z_vals.append(st.log_z / lam**st.n)
        if st.log_w == -math.inf:
            if axis_inv:
                w_zero = True
        else:
            w_vals.append(st.log_w / lam**st.n)

    if z_zero and z_scale < 0:
        return GreenEstimate(math.inf, len(logs.steps) - 1, TERM_HIT_EZ, math.inf)
    parts: list[tuple[float, GreenEstimate | None]] = []
    if z_scale == 0.0:
        parts.append((0.0, None))
    elif z_zero:
        parts.append((-math.inf, None))
    else:
        ez = _series_limit(z_vals, tol)
        val = z_scale * ez.value
        if ez.termination in (TERM_DIV_NEG, TERM_DIV_POS):
            val = -math.inf if (ez.value < 0) == (z_scale > 0) else math.inf
        parts.append((val, ez))
    if w_zero:
        parts.append((-math.inf, None))
    else:
        ew = _series_limit(w_vals, tol)
        val = ew.value if ew.termination != TERM_DIV_NEG else -math.inf
        parts.append((val, ew))

    value = max(p[0] for p in parts)
    ests = [p[1] for p in parts if p[1] is not None]
    n_used = max((e.n_used for e in ests), default=len(logs.steps) - 1)
    residual = sum(e.residual for e in ests if math.isfinite(e.residual))
    termination = TERM_CONVERGED
    for e in ests:
        if e.termination == TERM_BUDGET:
            termination = TERM_BUDGET
    if value == math.inf:
        termination = TERM_DIV_POS
    elif value == -math.inf:
        termination = TERM_HIT_ZERO
    est = GreenEstimate(value, n_used, termination, residual)
    if logs.switch_step is not None and logs.switch_step <= n_used:
        est = _fold_residual(est, 4 * logs.switch_eta / lam**logs.switch_step)
    return est


def g_f(f: SkewProduct, c: Classification, z: complex, w: complex,
        n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> GreenEstimate:
    """G_f = lim lambda^-n log max(|z_n|, |w_n|) (max norm)."""
    return _max_of_limits(f, c, z, w, n_max, tol, z_scale=1.0)


def g_f_alpha(f: SkewProduct, c: Classification, z: complex, w: complex,
              n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> GreenEstimate:
    """G_f^alpha = lim lambda^-n log max(|z_n^alpha|, |w_n|), with z^0 = 1."""
    if c.alpha is None:
        raise ValueError("alpha undefined (gamma > 0, delta == d)")
    alpha = float(c.alpha)
    if c.delta == c.d and z != 0:
        # lambda = d: max(a L_z, L_w) = a L_z + log+ of the weighted ratio,
        # so compose the two separately convergent parts.
        ro = ratio_orbit(f, c.alpha, z, w, n_max)
        if ro is not None:
            plus = _gza_from_ratio(ro, c.d, tol, n_max, plus=True,
                                   coeff_sum=_ratio_coeff_sum(f, c.alpha))
            base = g_p(f.p, z, n_max, tol)
            if plus.finite and base.finite:
                term = plus.termination
                if term == TERM_CONVERGED:
                    term = base.termination
                return GreenEstimate(alpha * base.value + plus.value,
                                     max(plus.n_used, base.n_used), term,
                                     plus.residual + abs(alpha) * base.residual)
    return _max_of_limits(f, c, z, w, n_max, tol, z_scale=alpha)


# ---------------------------------------------------------------------------
# functional-equation residuals, sub-mean-value check, fiber preimages
# ---------------------------------------------------------------------------

def functional_residual(f: SkewProduct, c: Classification, kind: str,
                        z: complex, w: complex,
                        n_max: int = DEFAULT_N_MAX,
                        tol: float = DEFAULT_TOL) -> Optional[float]:
    """One-step functional-equation residual, or None on sentinel values.

    kind 'alpha':      |G_z^alpha(f(z,w)) - d G_z^alpha(z,w)|
    kind 'infty':      |G_z^inf(f(z,w)) - (d G_z^inf(z,w) + gamma G_p(z))|
    kind 'alpha_plus': |G_z^{alpha,+}(f(z,w)) - d G_z^{alpha,+}(z,w)|
    """
    z1, w1 = f(z, w)
    d = c.d
    if kind == "alpha":
        here = g_z_alpha(f, c, z, w, n_max, tol)
        there = g_z_alpha(f, c, z1, w1, n_max, tol)
        if not (here.finite and there.finite):
            return None
        return abs(there.value - d * here.value)
    if kind == "infty":
        here = g_z_infty(f, c, z, w, n_max, tol)
        there = g_z_infty(f, c, z1, w1, n_max, tol)
        base = g_p(f.p, z, n_max, tol)
        if not (here.finite and there.finite and base.finite):
            return None
        return abs(there.value - (d * here.value + c.gamma * base.value))
    if kind == "alpha_plus":
        here = g_z_alpha_plus(f, c, z, w, n_max, tol)
        there = g_z_alpha_plus(f, c, z1, w1, n_max, tol)
        if not (here.finite and there.finite):
            return None
        return abs(there.value - d * here.value)
    raise ValueError(f"unknown functional-equation kind {kind!r}")


@dataclass(frozen=True)
class SubmeanResult:
    center_value: float
    circle_average: float
    deficit: float          # center - average; psh surrogate wants <= tol
    conclusive: bool


def submean_check(sampler: Callable[[complex], Optional[float]], center: complex,
                  radius: float, m_points: int = 64) -> SubmeanResult:
    """Sub-mean-value spot check of a function on one complex circle.

    sampler returns the function value at a point of the w-line, or
    None/non-finite for a sentinel; any sentinel makes the check
    inconclusive.
    """
    cv = sampler(center)
    if cv is None or not math.isfinite(cv):
        return SubmeanResult(math.nan, math.nan, math.nan, False)
    total = 0.0
    for k in range(m_points):
        wk = center + radius * cmath.exp(2j * math.pi * k / m_points)
        val = sampler(wk)
        if val is None or not math.isfinite(val):
            return SubmeanResult(cv, math.nan, math.nan, False)
        total += val
    avg = total / m_points
    return SubmeanResult(cv, avg, cv - avg, True)


def fiber_zero_preimages(f: SkewProduct, z: complex, n: int,
                         residual_tol: float = 1e-8) -> list[complex]:
    """All roots of Q_z^n(w) = q_{z_{n-1}} o ... o q_z (w).

    Solved by composed companion-matrix root finding: roots of the last
    fiber map are pulled back one fiber at a time.  Verified against the
    forward composition; nearly coincident roots are merged.
    """
    if not 0 < n <= 6:
        raise ValueError("n must be between 1 and 6")
    zs = [complex(z)]
    for _ in range(n - 1):
        zs.append(f.p(zs[-1]))
    targets = [0j]
    for step in reversed(range(n)):
        fiber = f.q.fiber_poly(zs[step])
        degree = fiber.degree if fiber.terms else 0
        if degree < 1:
            raise ValueError(f"degenerate fiber at step {step} (z = {zs[step]})")
        coeffs = np.zeros(degree + 1, dtype=complex)
        for k, coeff in fiber.terms.items():
            coeffs[degree - k] = coeff
        new_targets: list[complex] = []
        for t in targets:
            shifted = coeffs.copy()
            shifted[-1] -= t
            new_targets.extend(complex(r) for r in np.roots(shifted))
        targets = new_targets
    verified = []
    for root in targets:
        wv = root
        for step in range(n):
            wv = f.q(zs[step], wv)
        if abs(wv) < residual_tol:
            verified.append(root)
    if len(verified) < len(targets):
        raise ValueError(
            f"{len(targets) - len(verified)} roots failed the residual check"
        )
    # merge multiplicity clusters
    merged: list[list[complex]] = []
    for root in sorted(verified, key=lambda r: (r.real, r.imag)):
        for cluster in merged:
            if abs(root - cluster[0]) < 1e-6:
                cluster.append(root)
                break
        else:
            merged.append([root])
    return [sum(cl) / len(cl) for cl in merged]


def fiber_sample(f: SkewProduct, c: Classification, which: str, z: complex,
                 ws: list[complex], n_max: int = DEFAULT_N_MAX,
                 tol: float = DEFAULT_TOL) -> FiberFunctionSample:
    """Evaluate one estimator across a fiber; deterministic input order."""
    fn = ESTIMATORS[which]
    ests = tuple(fn(f, c, z, w, n_max, tol) for w in ws)
    return FiberFunctionSample(z=z, ws=tuple(ws), estimates=ests)


def _gp_adapter(f: SkewProduct, c: Classification, z: complex, w: complex,
                n_max: int, tol: float) -> GreenEstimate:
    return g_p(f.p, z, n_max, tol)


ESTIMATORS: dict[str, Callable] = {
    "Gp": _gp_adapter,
    "Gza": g_z_alpha,
    "Gzi": g_z_infty,
    "Gzap": g_z_alpha_plus,
    "Gz": g_z,
    "Gf": g_f,
    "Gfa": g_f_alpha,
}
