"""Positivity of fractional integrals of Bessel functions.

    I(x) = int_0^x (x - t)^lam t^mu J_alpha(t) dt
         = B(lam + 1, alpha + mu + 1) / (2^alpha Gamma(alpha + 1)) x^(alpha + lam + mu + 1)
           * 2F3((alpha+mu+1)/2, (alpha+mu+2)/2; alpha+1, (alpha+lam+mu+2)/2, (alpha+lam+mu+3)/2; -x^2/4)

for alpha > -1, lam > -1, alpha + mu + 1 > 0.  The module evaluates both
sides, classifies (alpha, lam, mu) by the known sufficient and necessary
conditions, and covers the sine-transform family of Williamson.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import regions as R
from .errors import InvalidParameter, PrecisionLoss, QuadratureFailure
from .hyperfn import SeriesValue, hyp_neg_square, hyp_neg_square_grid, phi_2f3

EXACT = 1e-12


@dataclass(frozen=True)
class FracIntParams:
    alpha: float
    lam: float
    mu: float

    def __post_init__(self):
        for name in ("alpha", "lam", "mu"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParameter(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if not self.alpha > -1:
            raise InvalidParameter("alpha must exceed -1")
        if not self.lam > -1:
            raise InvalidParameter("lambda must exceed -1")
        if not self.alpha + self.mu + 1 > 0:
            raise InvalidParameter("alpha + mu + 1 must be positive")


class FracVerdict(enum.Enum):
    POSITIVE_STRICT = "POSITIVE_STRICT"
    NONNEG_EXCEPTIONAL = "NONNEG_EXCEPTIONAL"
    FAILS = "FAILS"
    OUT_OF_THEOREM = "OUT_OF_THEOREM"


class Source(enum.Enum):
    THM_B_I = "THM_B_I"
    THM_B_II = "THM_B_II"
    NB_NEGATIVE = "NB_NEGATIVE"
    F7_EXCEPTIONAL = "F7_EXCEPTIONAL"
    NONE = "NONE"


@dataclass(frozen=True)
class Validity:
    verdict: FracVerdict
    source: Source
    notes: tuple = ()


@dataclass(frozen=True)
class Mapping:
    a: tuple
    b: tuple
    log_prefactor: float      # log of B(lam+1, alpha+mu+1) / (2^alpha Gamma(alpha+1))
    power: float              # exponent of x in the prefactor
    argument: str = "-x^2/4"

    def prefactor(self, x: float) -> float:
        return math.exp(self.log_prefactor + self.power * math.log(x))


def _params(p) -> FracIntParams:
    return p if isinstance(p, FracIntParams) else FracIntParams(*p)


def map_params(p) -> Mapping:
    p = _params(p)
    al, lam, mu = p.alpha, p.lam, p.mu
    a = ((al + mu + 1) / 2, (al + mu + 2) / 2)
    b = (al + 1, (al + lam + mu + 2) / 2, (al + lam + mu + 3) / 2)
    logpre = special.betaln(lam + 1, al + mu + 1) - al * math.log(2.0) - special.gammaln(al + 1)
    return Mapping(a, b, float(logpre), al + lam + mu + 1)


def fracint_value(p, x: float) -> SeriesValue:
    """The integral through its 2F3 form."""
    x = float(x)
    if not x > 0:
        raise InvalidParameter("x must be positive")
    m = map_params(p)
    sv = phi_2f3(m.a, m.b, 0.5 * x)
    pre = m.prefactor(x)
    err = abs(pre) * sv.abs_error_estimate + 4e-16 * abs(pre * sv.value)
    return SeriesValue(pre * sv.value, err, sv.terms_used, sv.cancellation_digits, sv.tier)


def _bessel_reduced(alpha: float, t):
    """J_alpha(t) / t^alpha, which is entire in t^2."""
    c = math.exp(-alpha * math.log(2.0) - special.gammaln(alpha + 1))
    return c * hyp_neg_square((), (alpha + 1.0,), 0.5 * float(t)).value


def fracint_quadrature(p, x: float, full_output: bool = False):
    """The integral by adaptive quadrature with the endpoint powers as an exact weight.

    With t = x u and J_alpha(t) = t^alpha g(t),

        I(x) = x^(alpha+lam+mu+1) int_0^1 (1 - u)^lam u^(alpha+mu) g(x u) du,

    and the algebraic weight (u^(alpha+mu), (1-u)^lam) is integrated by
    modified Clenshaw-Curtis moments, so no endpoint singularity reaches
    the integrand.  With full_output, also returns the integral of |integrand|
    in the same units, a natural scale for relative comparisons.
    """
    p = _params(p)
    x = float(x)
    if not x > 0:
        raise InvalidParameter("x must be positive")
    al, lam, mu = p.alpha, p.lam, p.mu
    power = al + lam + mu + 1
    xp = math.exp(power * math.log(x))

    def g(u):
        return _bessel_reduced(al, x * u)

    wvar = (al + mu, lam)
    val, _ = _alg_quad(g, wvar, 1e-10)
    if not full_output:
        return xp * val
    absval, _ = _alg_quad(lambda u: abs(g(u)), wvar, 1e-10)
    return xp * val, xp * absval


def _alg_quad(f, wvar, epsabs):
    out = integrate.quad(f, 0.0, 1.0, weight="alg", wvar=wvar, epsabs=epsabs, epsrel=1e-12,
                         limit=400, full_output=1)
    val, err, info = out[0], out[1], out[2]
    if info["neval"] > 10_000:
        raise QuadratureFailure(f"{info['neval']} evaluations exceed the budget")
    if len(out) > 3 and err > max(epsabs, 1e-9 * abs(val)):
        raise QuadratureFailure(str(out[3]))
    return val, err


# ---------------------------------------------------------------- classifiers

def _close(p, q):
    return all(abs(u - v) <= EXACT for u, v in zip(p, q))


_F7 = ((-0.5, 1.0, 0.5), (0.5, 0.0, 0.5))
_F2 = ((0.5, 1.0, -0.5), (1.0, 0.5, 0.5))


def _theorem_b_case(al, lam, mu):
    if lam < -0.5:
        return None
    if -1 < al <= -0.5:
        if -al - 1 < mu <= min(al + 1, lam + al):
            return Source.THM_B_I
    if al >= -0.5:
        if -al - 1 < mu <= min(-al, lam - 0.5):
            return Source.THM_B_II
        if -al <= mu <= min(al + 1, lam + al, lam + 0.5, 2 * lam + 0.5, 0.5 * (lam + al + 0.5)):
            return Source.THM_B_II
    return None


def theorem_b_classify(p) -> Validity:
    """Classify (alpha, lam, mu) for the sign of the integral."""
    p = _params(p)
    t = (p.alpha, p.lam, p.mu)
    if any(_close(t, e) for e in _F7):
        return Validity(FracVerdict.NONNEG_EXCEPTIONAL, Source.F7_EXCEPTIONAL,
                        ("the integral is 2 sqrt(2/pi) sin^2(x/2)",))
    src = _theorem_b_case(*t)
    if src is not None:
        return Validity(FracVerdict.POSITIVE_STRICT, src)
    al, lam, mu = t
    if mu > lam + 0.5 or al + 1 < mu <= lam + 0.5:
        return Validity(FracVerdict.FAILS, Source.NB_NEGATIVE)
    return Validity(FracVerdict.OUT_OF_THEOREM, Source.NONE)


def _lemma_f_case(a, b, c):
    if b < 0.25:
        return None
    if -1 < c <= -0.5 and 0 < a <= min(c + 1, b + c):
        return Source.THM_B_I
    if c >= -0.5:
        if 0 < a <= min(0.5, b + c / 2 - 0.25):
            return Source.THM_B_II
        if 0.5 <= a <= min(c + 1, b + c, b + c / 2 + 0.25, b / 2 + 3 * c / 4 + 0.375, 2 * b + c / 2 - 0.25):
            return Source.THM_B_II
    return None


def lemma_f_classify(a: float, b: float, c: float) -> Validity:
    """Sign of 2F3(a, a + 1/2; c + 1, a + b, a + b + 1/2; -x^2).

    Case sources reuse THM_B_I / THM_B_II for the two cases c <= -1/2 and
    c >= -1/2.  FAILS comes from the general necessary conditions, which here
    read a <= c + 1 and a <= b + c/2 + 1/4.
    """
    a, b, c = float(a), float(b), float(c)
    if not (a > 0 and b > 0 and c > -1):
        raise InvalidParameter("need a > 0, b > 0, c > -1")
    if any(_close((a, b, c), e) for e in _F2):
        return Validity(FracVerdict.NONNEG_EXCEPTIONAL, Source.F7_EXCEPTIONAL)
    src = _lemma_f_case(a, b, c)
    if src is not None:
        return Validity(FracVerdict.POSITIVE_STRICT, src)
    if R.necessity((a, a + 0.5), (c + 1, a + b, a + b + 0.5)) is not R.Necessity.OK:
        return Validity(FracVerdict.FAILS, Source.NB_NEGATIVE)
    return Validity(FracVerdict.OUT_OF_THEOREM, Source.NONE)


def lemma_f_params(p) -> tuple:
    """(a, b, c) of the 2F3 in the reduction of the integral."""
    p = _params(p)
    return ((p.alpha + p.mu + 1) / 2, (p.lam + 1) / 2, p.alpha)


# ---------------------------------------------------------------- special cases

class RegionStatus(enum.Enum):
    INSIDE_STRICT = "INSIDE_STRICT"
    INSIDE_EXCEPTIONAL = "INSIDE_EXCEPTIONAL"
    OUTSIDE = "OUTSIDE"

    def __bool__(self):
        return self is not RegionStatus.OUTSIDE


def _status(inside, point, exceptions):
    if not inside:
        return RegionStatus.OUTSIDE
    if any(_close(point, e) for e in exceptions):
        return RegionStatus.INSIDE_EXCEPTIONAL
    return RegionStatus.INSIDE_STRICT


def special_case_region(kind: str, params) -> RegionStatus:
    """Membership in one of the named one- or two-parameter families.

    S1, S2, S3 take (alpha, lam); S4 takes (alpha, mu) with lam = 1;
    S5c and S5s take the beta-density pair (alpha, beta) of the cosine and
    sine transforms of (1 - t)^(alpha-1) t^(beta-1) on (0, 1).
    INSIDE_EXCEPTIONAL marks points that are nonnegative with zeros.
    """
    u, v = (float(t) for t in params)
    if kind == "S1":
        return _status(u > 0.5 and 0 <= v <= u - 0.5, (u, v), ())
    if kind == "S2":
        if -0.5 <= u <= 0:
            inside = -u - 0.5 < v <= u + 1.5
        else:
            inside = u > 0 and -0.5 <= v <= u + 1.5
        return _status(inside, (u, v), ((-0.5, 1.0),))
    if kind == "S3":
        if abs(u) <= 0.5:
            inside = -u + 0.5 <= v <= u + 1.5
        else:
            inside = u >= 0.5 and u - 0.5 <= v <= u + 1.5
        return _status(inside, (u, v), ((-0.5, 1.0), (0.5, 0.0)))
    if kind == "S4":
        inside = u > -1 and -u - 1 < v <= min(u + 1, 0.5 * (u + 1.5), 1.5)
        return _status(inside, (u, v), ((-0.5, 0.5),))
    if kind == "S5c":
        return _status(u > 1 and 0 < v <= min(1.0, u - 1), (u, v), ((2.0, 1.0),))
    if kind == "S5s":
        inside = u >= 0.5 and (-1 < v <= min(0.0, u - 1) or 0 <= v <= min(2.0, (u + 1) / 2, 2 * u - 1))
        return _status(inside, (u, v), ((1.0, 1.0),))
    raise InvalidParameter(f"unknown special case {kind!r}")


def special_case_params(kind: str, params) -> FracIntParams:
    """The (alpha, lam, mu) triple a special-case point stands for."""
    u, v = (float(t) for t in params)
    if kind == "S1":
        return FracIntParams(u, v, v + 0.5)
    if kind == "S2":
        return FracIntParams(u, v, v - 0.5)
    if kind == "S3":
        return FracIntParams(u, v, 0.5 * (v + u + 0.5))
    if kind == "S4":
        return FracIntParams(u, 1.0, v)
    if kind == "S5c":
        return FracIntParams(-0.5, u - 1, v - 0.5)
    if kind == "S5s":
        return FracIntParams(0.5, u - 1, v - 0.5)
    raise InvalidParameter(f"unknown special case {kind!r}")


# ---------------------------------------------------------------- Williamson's g

class WilliamsonClass(enum.Enum):
    POSITIVE = "POSITIVE"
    SIGN_CHANGES = "SIGN_CHANGES"


def _williamson_1f2(alpha):
    return (2.0,), ((alpha + 3) / 2, (alpha + 4) / 2)


def williamson_g_value(alpha: float, x: float) -> SeriesValue:
    """g_alpha(x) = int_0^1 sin(x t) (1 - t)^(alpha-1) t dt = B(alpha, 3) x 1F2(2; (alpha+3)/2, (alpha+4)/2; -x^2/4)."""
    alpha, x = float(alpha), float(x)
    if not (alpha > 0 and x > 0):
        raise InvalidParameter("need alpha > 0 and x > 0")
    num, den = _williamson_1f2(alpha)
    sv = hyp_neg_square(num, den, 0.5 * x)
    c = special.beta(alpha, 3.0) * x
    return SeriesValue(c * sv.value, c * sv.abs_error_estimate + 4e-16 * abs(c * sv.value),
                       sv.terms_used, sv.cancellation_digits, sv.tier)


def williamson_g(alpha: float, x: float) -> float:
    return williamson_g_value(alpha, x).value


def williamson_analyze(alpha: float) -> WilliamsonClass:
    """POSITIVE for alpha >= 3, SIGN_CHANGES below, from the 1F2 sign classes."""
    alpha = float(alpha)
    if not alpha > 0:
        raise InvalidParameter("alpha must be positive")
    num, den = _williamson_1f2(alpha)
    cls = R.one_f_two_classify(num[0], *den)
    if cls is R.OneF2Class.STRICT_POSITIVE:
        return WilliamsonClass.POSITIVE
    if cls is R.OneF2Class.SIGN_CHANGE:
        return WilliamsonClass.SIGN_CHANGES
    raise AssertionError(f"unexpected class {cls} at alpha = {alpha}")  # pragma: no cover


@dataclass(frozen=True)
class WilliamsonScan:
    alpha: float
    x_max: float
    points: int
    min_value: float
    argmin_x: float
    first_sign_change: float | None


def williamson_scan(alpha: float, x_max: float, points: int) -> WilliamsonScan:
    """Grid scan of g_alpha on (0, x_max]; the sign is that of the 1F2 factor."""
    alpha = float(alpha)
    num, den = _williamson_1f2(alpha)
    xs = x_max * np.arange(1, points + 1) / points
    try:
        vals, errs, _ = hyp_neg_square_grid(num, den, 0.5 * xs, rel_tol=1e-6)
    except PrecisionLoss:
        pairs = [hyp_neg_square(num, den, 0.5 * x) for x in xs]
        vals = np.array([s.value for s in pairs])
        errs = np.array([s.abs_error_estimate for s in pairs])
    g = special.beta(alpha, 3.0) * xs * vals
    k = int(np.argmin(g))
    neg = np.nonzero(vals < -errs)[0]
    first = None
    if neg.size:
        i = int(neg[0])
        lo, hi = (float(xs[i - 1]) if i else 1e-300), float(xs[i])
        while hi - lo > 1e-8:
            mid = 0.5 * (lo + hi)
            if hyp_neg_square(num, den, 0.5 * mid).value < 0:
                hi = mid
            else:
                lo = mid
        first = 0.5 * (lo + hi)
    return WilliamsonScan(alpha, float(x_max), int(points), float(g[k]), float(xs[k]), first)
