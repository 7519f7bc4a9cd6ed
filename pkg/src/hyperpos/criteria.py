"""Nonnegativity criteria for terminating Saalschuetzian 4F3 and 5F4 series.

Theta_n = 4F3(-n, n+a1, a2, a3; b1, b2, b3; 1)
Omega_n = 5F4(-n, n+a1, a2, a3, a4; b1, b2, b3, b4; 1)

The criterion checkers quantify over every assignment of roles the series
symmetry allows (the upper parameters after n+a1 and all lower ones), so a
report is positive whenever some relabelling meets a criterion.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import DenominatorPole, InvalidParameter, PreconditionViolation, SaalschutzViolation
from .hyperfn import exact_param, pfq_terminating_value, pochhammer
from .regions import tol

POLE_EPS = 1e-8
_MP_BITS = 256


def _saalschutz_ok(lhs: float, rhs: float) -> bool:
    return abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@dataclass(frozen=True)
class Theta4F3Params:
    alpha: tuple
    beta: tuple
    n: int = 1

    def __post_init__(self):
        al = tuple(float(v) for v in self.alpha)
        be = tuple(float(v) for v in self.beta)
        if len(al) != 3 or len(be) != 3:
            raise InvalidParameter("Theta needs three alphas and three betas")
        if not (al[0] > -1 and al[1] > 0 and al[2] > 0):
            raise InvalidParameter(f"need alpha1 > -1 and alpha2, alpha3 > 0, got {al}")
        if not _saalschutz_ok(1 + sum(al), sum(be)):
            raise SaalschutzViolation(f"1 + sum(alpha) = {1 + sum(al)} differs from sum(beta) = {sum(be)}")
        if int(self.n) != self.n or self.n < 0:
            raise InvalidParameter("n must be a non-negative integer")
        object.__setattr__(self, "alpha", al)
        object.__setattr__(self, "beta", be)
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class Omega5F4Params:
    alpha: tuple
    beta: tuple
    n: int = 1

    def __post_init__(self):
        al = tuple(float(v) for v in self.alpha)
        be = tuple(float(v) for v in self.beta)
        if len(al) != 4 or len(be) != 4:
            raise InvalidParameter("Omega needs four alphas and four betas")
        if not (al[0] > -1 and all(v > 0 for v in al[1:])):
            raise InvalidParameter(f"need alpha1 > -1 and alpha2..alpha4 > 0, got {al}")
        if not _saalschutz_ok(1 + sum(al), sum(be)):
            raise SaalschutzViolation(f"1 + sum(alpha) = {1 + sum(al)} differs from sum(beta) = {sum(be)}")
        if int(self.n) != self.n or self.n < 0:
            raise InvalidParameter("n must be a non-negative integer")
        object.__setattr__(self, "alpha", al)
        object.__setattr__(self, "beta", be)
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class CriterionReport:
    satisfied: bool
    which: tuple
    failed_clauses: dict = field(default_factory=dict)
    assignment: dict = field(default_factory=dict)


# ---------------------------------------------------------------- closed forms

def _check_den(x, n, what):
    for j in range(n):
        if abs(x + j) < POLE_EPS:
            raise DenominatorPole(f"{what}: factor {x} + {j} vanishes")


def saalschutz_3f2(k: int, a1: float, a2: float, b1: float, b2: float) -> float:
    """3F2(-k, k+a1, a2; b1, b2; 1) by the Saalschuetz summation."""
    if not _saalschutz_ok(1 + a1 + a2, b1 + b2):
        raise SaalschutzViolation("need 1 + a1 + a2 = b1 + b2")
    _check_den(b1, k, "b1")
    _check_den(b2, k, "b2")
    return pochhammer(b1 - a2, k) * pochhammer(b2 - a2, k) / (pochhammer(b1, k) * pochhammer(b2, k))


def chu_vandermonde(n: int, a: float, c: float) -> float:
    """2F1(-n, a; c; 1) = (c-a)_n / (c)_n."""
    _check_den(c, n, "c")
    return pochhammer(c - a, n) / pochhammer(c, n)


# ---------------------------------------------------------------- direct sums

def theta(params: Theta4F3Params) -> float:
    return theta_value(params).value


def theta_value(params: Theta4F3Params):
    n = params.n
    a1, a2, a3 = params.alpha
    return pfq_terminating_value(n, (-n, exact_param(n, a1), a2, a3), params.beta)


def omega(params: Omega5F4Params) -> float:
    return omega_value(params).value


def omega_value(params: Omega5F4Params):
    n = params.n
    a1, a2, a3, a4 = params.alpha
    return pfq_terminating_value(n, (-n, exact_param(n, a1), a2, a3, a4), params.beta)


# ---------------------------------------------------------------- criteria

def _le(x, y):
    return x <= y + tol(y)


def _theta_clauses(a1, a2, a3, b1, b2, b3):
    return {
        "b3_A1": _le(a2, b3) and _le(b3, 1 + a1),
        "b3_A2": _le(a2, b3) and _le(b3, 2 + a1),
        "underlined": _le(a3, b1) and _le(a3, b2),
        "A4": b1 > 0 and b2 > 0 and all(_le(a3 - 1, v) and _le(v, a3) for v in (b1, b2)),
        "product": _le((1 + a1) * a2 * a3, b1 * b2 * b3),
    }


def _a42(a3, b1, b2, m):
    return b1 > 0 and b2 > 0 and all(_le(a3 - m, v) and _le(v, a3 - m + 1) for v in (b1, b2))


def check_theta_criteria(params: Theta4F3Params, mode: str = "all_n") -> CriterionReport:
    """Lemma-style sufficient conditions for Theta_n >= 0.

    ``mode="all_n"`` covers every n >= 1; ``mode="fixed_n"`` also admits the
    shifted alternates that hold only for the given ``params.n``.

    The alternates for the underlined clause are only paired with the (A1)
    base. Paired with the (A2) base they admit points where Theta_n < 0,
    e.g. alpha = (-0.0675, 1.1925, 1.6142) at n = 3.
    """
    if mode not in ("all_n", "fixed_n"):
        raise InvalidParameter("mode must be 'all_n' or 'fixed_n'")
    a1 = params.alpha[0]
    which = {}
    failed = {}
    for (i2, i3), k3 in itertools.product(((1, 2), (2, 1)), range(3)):
        a2, a3 = params.alpha[i2], params.alpha[i3]
        rest = [j for j in range(3) if j != k3]
        b1, b2, b3 = params.beta[rest[0]], params.beta[rest[1]], params.beta[k3]
        c = _theta_clauses(a1, a2, a3, b1, b2, b3)
        role = ((0, i2, i3), (rest[0], rest[1], k3))
        base_a1 = c["b3_A1"]
        base_a2 = c["b3_A2"] and c["product"]
        cands = {
            "A1": base_a1 and c["underlined"],
            "A2": base_a2 and c["underlined"],
            "A4_ALT": base_a1 and c["A4"],
        }
        if mode == "fixed_n":
            for m in range(2, params.n):
                cands[f"A42_ALT({m})"] = base_a1 and _a42(a3, b1, b2, m)
        for tag, ok in cands.items():
            if ok:
                which.setdefault(tag, role)
        for tag, keys in (("A1", ("b3_A1", "underlined")), ("A2", ("b3_A2", "underlined", "product"))):
            miss = tuple(k for k in keys if not c[k])
            if tag not in failed or len(miss) < len(failed[tag]):
                failed[tag] = miss
    failed = {k: v for k, v in failed.items() if k not in which}
    return CriterionReport(bool(which), tuple(sorted(which)), failed, which)


def _omega_clauses(a1, a2, a3, a4, b1, b2, b3, b4):
    s12, s34 = b1 + b2, b3 + b4
    return {
        "underlined": _le(a3, b1) and _le(a3, b2),
        "A4": b1 > 0 and b2 > 0 and all(_le(a3 - 1, v) and _le(v, a3) for v in (b1, b2)),
        "C1_a4": _le(a4, b3) and _le(a4, b4),
        "C1_sum": _le(a2 + a3, s12) and _le(s12, 1 + a1 + a3),
        "C2_cap": all(_le(v, 1 + a1) for v in (a4, b3, b4)),
        "C2_sum": _le(1 + a1 + a2, s34) and _le(s34, 2 + a1 + a4),
        "C2_product": _le(a2 * a3 * a4, b1 * b2 * (s34 - a1 - 1)),
    }


def check_omega_criteria(params: Omega5F4Params) -> CriterionReport:
    """Sufficient conditions for Omega_n >= 0 for all n >= 1.

    As for Theta_n, the alternate underlined clause rides on the (C1) base
    only; with (C2) it admits negative Omega_n.
    """
    a1 = params.alpha[0]
    which = {}
    failed = {}
    for perm in itertools.permutations((1, 2, 3)):
        a2, a3, a4 = (params.alpha[i] for i in perm)
        for top in itertools.combinations(range(4), 2):
            bottom = tuple(j for j in range(4) if j not in top)
            b1, b2 = (params.beta[j] for j in top)
            b3, b4 = (params.beta[j] for j in bottom)
            c = _omega_clauses(a1, a2, a3, a4, b1, b2, b3, b4)
            role = ((0,) + perm, top + bottom)
            base_c1 = c["C1_a4"] and c["C1_sum"]
            base_c2 = c["C2_cap"] and c["C2_sum"] and c["C2_product"]
            cands = {
                "C1": base_c1 and c["underlined"],
                "C2": base_c2 and c["underlined"],
                "A4_ALT": base_c1 and c["A4"],
            }
            for tag, ok in cands.items():
                if ok:
                    which.setdefault(tag, role)
            for tag, keys in (("C1", ("underlined", "C1_a4", "C1_sum")),
                              ("C2", ("underlined", "C2_cap", "C2_sum", "C2_product"))):
                miss = tuple(k for k in keys if not c[k])
                if tag not in failed or len(miss) < len(failed[tag]):
                    failed[tag] = miss
    failed = {k: v for k, v in failed.items() if k not in which}
    return CriterionReport(bool(which), tuple(sorted(which)), failed, which)


# ---------------------------------------------------------------- decompositions

def _mp_terminating(n, num, den):
    if n == 0:
        return mpfr(1)
    t = mpfr(1)
    s = mpfr(1)
    for k in range(n):
        r = mpfr(k + 1)
        p = mpfr(1)
        for u in num:
            p *= u + k
        for v in den:
            r *= v + k
        t = t * p / r
        s += t
    return s


def _binom(n, k):
    return mpfr(math.comb(n, k))


def whipple_decomposition(params: Theta4F3Params) -> float:
    """Theta_n as the finite sum obtained from Gasper's and Saalschuetz's formulas."""
    n = params.n
    with gmpy2.context(gmpy2.get_context(), precision=_MP_BITS):
        a1, a2, a3 = (mpfr(v) for v in params.alpha)
        b1, b2, b3 = (mpfr(v) for v in params.beta)
        _check_den(float(b3), n, "(beta3)_n")
        total = mpfr(0)
        for k in range(n + 1):
            d1 = k + a1 + a2 - b3
            d2 = 2 * k + 1 + a1 + a2 - b3
            _check_den(float(d1), k, "(k+a1+a2-b3)_k")
            _check_den(float(d2), n - k, "(2k+1+a1+a2-b3)_(n-k)")
            _check_den(float(b1), k, "(beta1)_k")
            _check_den(float(b2), k, "(beta2)_k")
            num = (pochhammer(b1 - a3, k) * pochhammer(b2 - a3, k) * pochhammer(n + a1, k) * pochhammer(a2, k)
                   * pochhammer(k + 1 + a1 - b3, n - k) * pochhammer(b3 - a2, n - k))
            den = pochhammer(d1, k) * pochhammer(b1, k) * pochhammer(b2, k) * pochhammer(d2, n - k)
            total += _binom(n, k) * num / den
        return float(total / pochhammer(b3, n))


def fields_wimp_decomposition(params: Omega5F4Params, delta: float | None = None, sigma: float | None = None,
                              variant: str = "T1") -> float:
    """Omega_n through the two-stage (T1) or single-stage (G3) expansion."""
    n = params.n
    a1, a2, a3, a4 = params.alpha
    b1, b2, b3, b4 = params.beta
    if variant not in ("T1", "G3"):
        raise InvalidParameter("variant must be 'T1' or 'G3'")
    with gmpy2.context(gmpy2.get_context(), precision=_MP_BITS):
        A1, A2, A3, A4 = (mpfr(v) for v in params.alpha)
        B1, B2, B3, B4 = (mpfr(v) for v in params.beta)
        total = mpfr(0)
        if variant == "G3":
            for k in range(n + 1):
                d = k + B1 + B2 - A3 - 1
                for x, m, what in ((d, k, "(k+b1+b2-a3-1)_k"), (B1, k, "(b1)_k"), (B2, k, "(b2)_k"),
                                   (B3, k, "(b3)_k"), (B4, k, "(b4)_k")):
                    _check_den(float(x), m, what)
                coef = (pochhammer(B1 - A3, k) * pochhammer(B2 - A3, k) * pochhammer(n + A1, k)
                        * pochhammer(A2, k) * pochhammer(A4, k))
                coef /= (pochhammer(d, k) * pochhammer(B1, k) * pochhammer(B2, k) * pochhammer(B3, k)
                         * pochhammer(B4, k))
                lower = (2 * k + B1 + B2 - A3, k + B3, k + B4)
                for v in lower:
                    _check_den(float(v), n - k, "W_k denominator")
                w = _mp_terminating(n - k, (-(n - k), n + k + A1, k + A2, k + A4), lower)
                total += _binom(n, k) * coef * w
            return float(total)
        if delta is None:
            delta = a4 - 1.0
        if sigma is None:
            sigma = 1 + delta + a2 + a3 - b1 - b2
        elif not _saalschutz_ok(sigma, 1 + delta + a2 + a3 - b1 - b2):
            raise SaalschutzViolation("sigma must equal 1 + delta + alpha2 + alpha3 - beta1 - beta2")
        D, S = mpfr(delta), mpfr(sigma)
        for k in range(n + 1):
            _check_den(float(k + D), k, "(k+delta)_k")
            _check_den(float(B3), k, "(b3)_k")
            _check_den(float(B4), k, "(b4)_k")
            for v in (S, B1, B2):
                _check_den(float(v), k, "U_k denominator")
            lower_v = (2 * k + D + 1, k + B3, k + B4)
            for v in lower_v:
                _check_den(float(v), n - k, "V_k denominator")
            coef = pochhammer(S, k) * pochhammer(n + A1, k) * pochhammer(A4, k)
            coef /= pochhammer(k + D, k) * pochhammer(B3, k) * pochhammer(B4, k)
            u = _mp_terminating(k, (-k, k + D, A2, A3), (S, B1, B2))
            v = _mp_terminating(n - k, (-(n - k), n + k + A1, k + S, k + A4), lower_v)
            total += _binom(n, k) * coef * u * v
        return float(total)


# ---------------------------------------------------------------- product inequality

def lemma_h_check(alpha, beta) -> bool:
    """prod(beta) >= prod(alpha) for sorted alpha, sum(beta) = sum(alpha), beta in [alpha1, alpha3]."""
    al = tuple(float(v) for v in alpha)
    be = tuple(float(v) for v in beta)
    if len(al) != 3 or len(be) != 3 or not (0 < al[0] <= al[1] <= al[2]):
        raise PreconditionViolation("alpha must be a sorted positive triple")
    if not _saalschutz_ok(sum(be), sum(al)):
        raise PreconditionViolation("sum(beta) must equal sum(alpha)")
    if not all(al[0] - tol(al[0]) <= v <= al[2] + tol(al[2]) for v in be):
        raise PreconditionViolation("each beta must lie in [alpha1, alpha3]")
    pa = al[0] * al[1] * al[2]
    return be[0] * be[1] * be[2] >= pa * (1 - 1e-12)


def lemma_h_grid_minimum(alpha, points: int = 201):
    """Brute-force minimum of x1 x2 (S - x1 - x2) over the admissible square.

    Returns (minimum, argmin) on a points x points grid of [alpha1, alpha3]^2
    restricted to alpha1 + alpha2 <= x1 + x2 <= alpha2 + alpha3.
    """
    al = sorted(float(v) for v in alpha)
    g = np.linspace(al[0], al[2], points)
    x1, x2 = np.meshgrid(g, g, indexing="ij")
    s = x1 + x2
    mask = (s >= al[0] + al[1] - 1e-14) & (s <= al[1] + al[2] + 1e-14)
    f = np.where(mask, x1 * x2 * (sum(al) - s), np.inf)
    i = np.unravel_index(np.argmin(f), f.shape)
    return float(f[i]), (float(x1[i]), float(x2[i]))
