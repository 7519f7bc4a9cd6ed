"""Generalized hypergeometric series with adaptive precision.

Evaluation runs through up to three tiers: IEEE double with compensated
summation, double-double, and multiprecision (exact integer ratios summed
in fixed point).  A tier is accepted once its own error estimate is below
``REL_TOL`` relative to the computed value.  ``HYPERPOS_PRECISION`` caps the highest tier tried: ``double``,
``dd`` or ``mp`` (the default).
"""
from __future__ import annotations

import math
import operator
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from gmpy2 import mpz

from . import _kernels as K
from .errors import DegenerateCase, DenominatorPole, InvalidParameter, NonConvergent, PrecisionLoss

REL_TOL = 1e-13
MAX_TERMS = 10_000
OVERFLOW_LOG10 = 280.0
TIERS = ("double", "dd", "mp")
_TOL = {"double": 1e-18, "dd": 1e-34}
_MP_MAX_DIGITS = 4000


@dataclass(frozen=True)
class SeriesValue:
    value: float
    abs_error_estimate: float
    terms_used: int
    cancellation_digits: float
    tier: str = "double"


def exact_param(*parts):
    """An exact sum of doubles as a series parameter: a float, or a (hi, lo) pair."""
    hi, lo = 0.0, 0.0
    for p in parts:
        hi, lo = K.dd_add(hi, lo, float(p), 0.0)
    return hi if lo == 0.0 else (hi, lo)


def _param(u):
    if isinstance(u, (tuple, list)):
        if len(u) != 2:
            raise InvalidParameter(f"a parameter pair must be (hi, lo), got {u!r}")
        return exact_param(*u)
    return float(u)


def _approx(u) -> float:
    return u if isinstance(u, float) else u[0] + u[1]


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameters of pFq(u; v; z).  Each parameter is a float or an exact (hi, lo) pair."""

    numerators: tuple
    denominators: tuple
    z: float

    def __post_init__(self):
        num = tuple(_param(u) for u in self.numerators)
        den = tuple(_param(v) for v in self.denominators)
        for v in tuple(map(_approx, num + den)) + (float(self.z),):
            if not math.isfinite(v):
                raise InvalidParameter("non-finite parameter")
        stops = [-u for u in num if isinstance(u, float) and _is_nonpos_int(u)]
        for v in den:
            # a denominator -m is harmless when the series stops at n <= m
            if isinstance(v, float) and _is_nonpos_int(v) and not (stops and min(stops) <= -v):
                raise InvalidParameter(f"denominator parameter {v} is a non-positive integer")
        object.__setattr__(self, "numerators", num)
        object.__setattr__(self, "denominators", den)
        object.__setattr__(self, "z", float(self.z))


@dataclass(frozen=True)
class AsymptoticValue:
    algebraic_a1_term: float
    algebraic_a2_term: float
    oscillatory_amplitude: float
    phase_offset: float
    chi: float
    x: float

    @property
    def oscillatory_term(self) -> float:
        return self.oscillatory_amplitude * math.cos(2.0 * self.x - self.phase_offset)

    @property
    def total(self) -> float:
        return self.algebraic_a1_term + self.algebraic_a2_term + self.oscillatory_term


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and v == math.floor(v)


def precision_ceiling() -> str:
    tier = os.environ.get("HYPERPOS_PRECISION", "mp").strip().lower()
    if tier not in TIERS:
        raise InvalidParameter(f"HYPERPOS_PRECISION must be one of {TIERS}, got {tier!r}")
    return tier


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n by a product loop."""
    if n < 0 or int(n) != n:
        raise InvalidParameter("pochhammer needs an integer n >= 0")
    p = 1.0
    for k in range(int(n)):
        p *= x + k
    return p


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpos_int(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def _log_gamma_signed(x: float):
    if _is_nonpos_int(x):
        raise DegenerateCase(f"Gamma pole at {x}")
    sign = 1.0 if x > 0 or math.ceil(-x) % 2 == 0 else -1.0
    return math.lgamma(x), sign


# ---------------------------------------------------------------- series plans

class _Plan:
    """Prepared term ratios for one parameter set, shared across arguments."""

    def __init__(self, num, den):
        self.num = num
        self.den = den
        self.p = len(num)
        self.q = len(den)
        stops = [-u for u in num if isinstance(u, float) and _is_nonpos_int(u)]
        self.stop = int(min(stops)) if stops else None
        self._c_hi = np.zeros(0)
        self._c_lo = np.zeros(0)
        self._P = []
        self._Q = []

    def coeffs(self, length):
        if self.stop is not None:
            length = self.stop + 1
        length = min(length, MAX_TERMS)
        if self._c_hi.shape[0] < length:
            self._c_hi, self._c_lo = K.series_coeffs(self.num, self.den, 0, length)
            if self.stop is not None:
                # exact zero even when a denominator -stop makes it 0/0
                self._c_hi[self.stop:] = 0.0
                self._c_lo[self.stop:] = 0.0
        return self._c_hi, self._c_lo

    def int_coeffs(self, length):
        """Exact term ratios c_n = P[n] / Q[n] as integer lists.

        Every parameter is a dyadic rational (a double or an exact pair of
        them), so the ratios are exact and independent of the working
        precision.
        """
        if self.stop is not None:
            length = min(length, self.stop)
        have = len(self._P)
        if have < length:
            # u + n = (m + n 2^e) / 2^e; the powers of two fold into one shift.
            # Denominators and the numerators met before, other than the
            # terminating one, tend to recur (Theta_n for successive n, say),
            # so their products are cached.
            fa, fr = [], []
            for u in self.num:
                d = _dyadic(u)
                shared = _seen(d) and not (isinstance(u, float) and _is_nonpos_int(u))
                (fa if shared else fr).append(d)
            fa = tuple(fa)
            fb = ((1, 0),) + tuple(_dyadic(v) for v in self.den)
            P = _factor_products(fr, have, length, _shared_products(fa, length)[have:length])
            Q = _shared_products(fb, length)[have:length]
            shift = sum(e for _, e in fb) - sum(e for _, e in fa) - sum(e for _, e in fr)
            if shift > 0:
                P = [c << shift for c in P]
            elif shift < 0:
                Q = [c << -shift for c in Q]
            if 0 in Q:
                raise DenominatorPole("a denominator parameter is a non-positive integer")
            self._P.extend(P)
            self._Q.extend(Q)
        return self._P, self._Q

    def initial_length(self, zabs):
        if self.stop is not None:
            return self.stop + 1
        # terms peak near n ~ |z|^(1/(q+1-p)); leave room past the peak
        k = self.q + 1 - self.p
        peak = zabs ** (1.0 / k) if k > 0 else 0.0
        return int(min(MAX_TERMS, 2.5 * peak + 64))


def _dyadic(u):
    """(m, e) with u == m / 2**e exactly; u is a number or a (hi, lo) pair."""
    parts = u if isinstance(u, tuple) else (u,)
    m, e = 0, 0
    for x in parts:
        num, den = x.as_integer_ratio()
        k = den.bit_length() - 1
        if k > e:
            m, e = m << (k - e), k
        m += num << (e - k)
    return m, e


def _factor_products(fr, lo, hi, seed=None):
    """prod_i (m_i + n 2^e_i) for lo <= n < hi, over the pairs (m_i, e_i) in fr."""
    out = seed if seed is not None else [mpz(1)] * (hi - lo)
    for m, e in fr:
        out = list(map(operator.mul, out, range(m + (lo << e), m + (hi << e), 1 << e)))
    return out


_SHARED = {}
_SEEN = set()


def _seen(d) -> bool:
    if d in _SEEN:
        return True
    if len(_SEEN) >= 4096:
        _SEEN.clear()
    _SEEN.add(d)
    return False


def _shared_products(fr: tuple, length: int) -> list:
    got = _SHARED.get(fr)
    if got is None:
        if len(_SHARED) >= 256:
            _SHARED.clear()
        got = _SHARED[fr] = []
    if len(got) < length:
        got.extend(_factor_products(fr, len(got), length))
    return got


@lru_cache(maxsize=512)
def _plan(num: tuple, den: tuple) -> _Plan:
    return _Plan(num, den)


def _check_convergent(plan: _Plan, zabs: float):
    if plan.stop is not None or plan.p <= plan.q:
        return
    if plan.p == plan.q + 1 and zabs < 1.0:
        return
    raise NonConvergent(f"{plan.p}F{plan.q} diverges at |z| = {zabs}")


def _finish(row, c_hi, z_abs, u, tier) -> SeriesValue:
    v_hi, v_lo, n, sabs, snabs, maxpart, last, _ = row
    n = int(n)
    value = float(v_hi + v_lo)
    if last == 0.0:
        trunc = 0.0
    else:
        rho = abs(c_hi[n]) * z_abs if n < c_hi.shape[0] else 1.0
        trunc = last * rho / (1.0 - rho) if rho < 0.5 else 2.0 * last
    err = trunc + u * (3.0 * snabs + 2.0 * sabs) + K.U_DOUBLE * abs(value)
    return SeriesValue(value, float(err), n, _cancellation(maxpart, value), tier)


def _cancellation(maxpart, value):
    if value == 0.0:
        return math.inf
    return max(0.0, math.log10(maxpart / abs(value)))


def _accepted(sv: SeriesValue, rel_tol: float = REL_TOL) -> bool:
    return sv.abs_error_estimate <= rel_tol * abs(sv.value)


def _log10_terms(c_hi, zabs):
    """log10 |t_n| for n = 0..len(c_hi), from the double coefficients."""
    with np.errstate(divide="ignore"):
        steps = np.log10(np.abs(c_hi)) + math.log10(zabs)
    return np.concatenate(([0.0], np.cumsum(steps)))


def _log10_peak(plan: _Plan, zabs: float) -> float:
    """log10 of the largest term, without forming the terms."""
    if zabs == 0.0:
        return 0.0
    c_hi, _ = plan.coeffs(plan.initial_length(zabs))
    return float(np.max(_log10_terms(c_hi, zabs)))


def _bits_for(digits: float) -> int:
    return int(math.ceil((digits * 3.3219280948873626 + 32) / 128.0)) * 128


def _mp_bounds_numpy(plan: _Plan, z_hi, log_u):
    """Stopping index and log10 bounds (max partial sum, rounding, truncation) per argument."""
    zabs = np.abs(z_hi)
    with np.errstate(divide="ignore"):
        lz = np.log10(zabs)
    length = plan.initial_length(float(np.max(zabs)))
    while True:
        c_hi, _ = plan.coeffs(length)
        L = c_hi.shape[0]
        with np.errstate(divide="ignore"):
            cum = np.concatenate(([0.0], np.cumsum(np.log10(np.abs(c_hi)))))
        logs = cum[None, :] + np.arange(L + 1)[None, :] * lz[:, None]
        logs[:, 0] = 0.0
        top = np.argmax(logs, axis=1)
        peak = logs[np.arange(logs.shape[0]), top]
        if plan.stop is not None:
            N = np.full(logs.shape[0], min(plan.stop, L))
            break
        idx = np.arange(L + 1)[None, :]
        small = (logs <= (peak + log_u - 3.0)[:, None]) & (idx >= top[:, None])
        found = small.any(axis=1)
        N = np.where(found, np.argmax(small, axis=1) + 2, L + 1)
        if np.all(N < L):
            break
        if L >= MAX_TERMS:
            raise NonConvergent(f"series not converged after {L} terms")
        length = min(2 * L, MAX_TERMS)
    idx = np.arange(L + 1)[None, :]
    keep = idx <= N[:, None]
    with np.errstate(over="ignore", under="ignore"):
        mags = np.where(keep, 10.0 ** (logs - peak[:, None]), 0.0)
    sgn_c = np.concatenate(([1.0], np.cumprod(np.sign(c_hi))))
    sgn = sgn_c[None, :] * np.where(z_hi[:, None] < 0, (-1.0) ** idx, 1.0)
    maxpart_log = peak + np.log10(np.maximum(np.max(np.abs(np.cumsum(sgn * mags, axis=1)), axis=1), 1e-300))
    sabs = np.sum(mags, axis=1)
    snabs = np.sum(idx * mags, axis=1)
    err_log = log_u + peak + np.log10(3.0 * snabs + 2.0 * sabs)
    if plan.stop is None:
        rows = np.arange(len(N))
        rho = np.abs(c_hi[N]) * zabs
        with np.errstate(divide="ignore"):
            trunc_log = logs[rows, N] + np.where(rho < 0.5, np.log10(rho / (1.0 - np.minimum(rho, 0.5))),
                                                  math.log10(2.0))
    else:
        trunc_log = np.full(len(N), -np.inf)
    return N, maxpart_log, err_log, trunc_log


def _mp_bounds_jit(plan: _Plan, z_hi, log_u):
    zabs = np.abs(z_hi)
    stop = -1 if plan.stop is None else plan.stop
    length = plan.initial_length(float(np.max(zabs)))
    rows = []
    for i in range(z_hi.shape[0]):
        while True:
            c_hi, _ = plan.coeffs(length)
            row = K.mp_bounds(c_hi, float(zabs[i]), bool(z_hi[i] < 0), float(log_u[i]), stop)
            if stop >= 0 or row[0] < c_hi.shape[0]:
                break
            if c_hi.shape[0] >= MAX_TERMS:
                raise NonConvergent(f"series not converged after {c_hi.shape[0]} terms")
            length = min(2 * c_hi.shape[0], MAX_TERMS)
        rows.append(row)
    N, maxpart_log, err_log, trunc_log = (np.array(col) for col in zip(*rows))
    return N.astype(np.int64), maxpart_log, err_log, trunc_log


def _mp_eval_many(plan: _Plan, z_hi, z_lo, digits):
    """Sum at about `digits[i]` significant digits for each argument.

    Term magnitudes, the stopping index and the error bookkeeping come from
    the double coefficients in log space, vectorised over the arguments, so
    the multiprecision part is one integer multiply and floor division per
    term (Horner's rule in fixed point over the exact ratios).
    Returns a list of SeriesValue.
    """
    z_hi = np.atleast_1d(np.asarray(z_hi, dtype=np.float64))
    z_lo = np.atleast_1d(np.asarray(z_lo, dtype=np.float64))
    bits = np.array([_bits_for(d) for d in np.atleast_1d(digits)], dtype=np.int64)
    log_u = (1.0 - bits) * math.log10(2.0)
    bounds = _mp_bounds_jit if K.USE_NUMBA else _mp_bounds_numpy
    N, maxpart_log, err_log, trunc_log = bounds(plan, z_hi, log_u)
    out = []
    P, Q = plan.int_coeffs(int(np.max(N)))
    for i in range(len(N)):
        n_i, b_i = int(N[i]), int(bits[i])
        zn, ze = _dyadic((float(z_hi[i]), float(z_lo[i])))
        zd = 1 << ze
        # fixed point with b_i fractional bits; each floor division is off
        # by less than one unit, well inside the bound carried in err_log
        one = mpz(1) << b_i
        acc = one
        if zn == zd:
            for n in range(n_i - 1, -1, -1):
                acc = one + acc * P[n] // Q[n]
        else:
            for n in range(n_i - 1, -1, -1):
                acc = one + acc * P[n] * zn // (Q[n] * zd)
        try:
            value = int(acc) / int(one)
        except OverflowError:
            value = math.copysign(math.inf, acc)
        err = 10.0 ** err_log[i] + 10.0 ** trunc_log[i] + K.U_DOUBLE * abs(value)
        canc = math.inf if value == 0.0 else max(0.0, float(maxpart_log[i]) - math.log10(abs(value)))
        out.append(SeriesValue(value, float(err), n_i, canc, "mp"))
    return out


def _mp_eval(plan: _Plan, z_hi: float, z_lo: float, digits: float) -> SeriesValue:
    return _mp_eval_many(plan, [z_hi], [z_lo], [digits])[0]


def _fixed_eval(plan: _Plan, z_hi: float, z_lo: float, tier: str) -> SeriesValue:
    length = plan.initial_length(abs(z_hi))
    while True:
        c_hi, c_lo = plan.coeffs(length)
        if tier == "double":
            row = K.sum_double(c_hi, z_hi + z_lo, _TOL["double"])
            u = K.U_DOUBLE
        else:
            row = K.sum_dd(c_hi, c_lo, z_hi, z_lo, _TOL["dd"])
            u = K.U_DD
        if row[7]:
            return _finish(row, c_hi, abs(z_hi), u, tier)
        if c_hi.shape[0] >= MAX_TERMS or plan.stop is not None:
            raise NonConvergent(f"series not converged after {int(row[2])} terms")
        length = min(2 * c_hi.shape[0], MAX_TERMS)


def _evaluate(plan: _Plan, z_hi: float, z_lo: float = 0.0, ceiling: str | None = None,
              rel_tol: float = REL_TOL) -> SeriesValue:
    _check_convergent(plan, abs(z_hi))
    ceiling = ceiling or precision_ceiling()
    if z_hi == 0.0 and z_lo == 0.0:
        return SeriesValue(1.0, 0.0, 1, 0.0, "double")
    peak = _log10_peak(plan, abs(z_hi))
    if peak > OVERFLOW_LOG10:
        # the terms themselves overflow a double; only the mp tier can sum them
        if ceiling != "mp":
            raise PrecisionLoss(f"terms reach 1e{peak:.0f}, beyond the {ceiling} tier")
        return _mp_refine(plan, z_hi, z_lo, peak + 30.0, rel_tol)
    sv = _fixed_eval(plan, z_hi, z_lo, "double")
    if _accepted(sv, rel_tol):
        return sv
    if ceiling == "double":
        raise PrecisionLoss(f"double tier: estimated error {sv.abs_error_estimate:.3g} for value {sv.value:.3g}")
    if ceiling == "mp" and sv.abs_error_estimate * (K.U_DD / K.U_DOUBLE) > rel_tol * (abs(sv.value) + sv.abs_error_estimate):
        # the double pass already shows dd cannot reach rel_tol
        return _mp_refine(plan, z_hi, z_lo, _escalation_digits(sv, K.U_DOUBLE), rel_tol)
    sv = _fixed_eval(plan, z_hi, z_lo, "dd")
    if _accepted(sv, rel_tol):
        return sv
    if ceiling == "dd":
        raise PrecisionLoss(f"dd tier: estimated error {sv.abs_error_estimate:.3g} for value {sv.value:.3g}")
    return _mp_refine(plan, z_hi, z_lo, _escalation_digits(sv), rel_tol)


def _escalation_digits(sv: SeriesValue, u: float = K.U_DD) -> float:
    # the partial-sum magnitudes behind sv's error estimate are reliable even
    # when its value is not; u is the unit roundoff of the tier that made sv
    return math.log10(max(1.0, sv.abs_error_estimate / u)) + 30.0


def _mp_refine_many(plan, z_hi, z_lo, digits, rel_tol=REL_TOL):
    out = _mp_eval_many(plan, z_hi, z_lo, digits)
    redo = [i for i, sv in enumerate(out) if not _accepted(sv, rel_tol)]
    if redo:
        # values near a zero of the function; one more round, then report as is
        more = [min(_MP_MAX_DIGITS, digits[i] + max(40.0, min(out[i].cancellation_digits, _MP_MAX_DIGITS)))
                for i in redo]
        again = _mp_eval_many(plan, np.asarray(z_hi)[redo], np.asarray(z_lo)[redo], more)
        for i, sv in zip(redo, again):
            out[i] = sv
    return out


def _mp_refine(plan, z_hi, z_lo, digits, rel_tol=REL_TOL):
    return _mp_refine_many(plan, [z_hi], [z_lo], [digits], rel_tol)[0]


def _evaluate_batch(plan: _Plan, z_hi, z_lo, ceiling: str | None = None, rel_tol: float = REL_TOL):
    """Vectorised evaluation; returns arrays (value, abs_error, terms, cancellation, tier_index)."""
    z_hi = np.asarray(z_hi, dtype=np.float64)
    z_lo = np.asarray(z_lo, dtype=np.float64)
    ceiling = ceiling or precision_ceiling()
    M = z_hi.shape[0]
    vals = np.empty(M)
    errs = np.empty(M)
    terms = np.empty(M, dtype=np.int64)
    canc = np.empty(M)
    tier_ix = np.zeros(M, dtype=np.int64)
    if M == 0:
        return vals, errs, terms, canc, tier_ix
    zmax = float(np.max(np.abs(z_hi)))
    _check_convergent(plan, zmax)
    if _log10_peak(plan, zmax) > OVERFLOW_LOG10:
        big = np.array([_log10_peak(plan, abs(float(z))) > OVERFLOW_LOG10 for z in z_hi])
        for i in np.nonzero(big)[0]:
            sv = _evaluate(plan, float(z_hi[i]), float(z_lo[i]), ceiling, rel_tol)
            vals[i], errs[i], terms[i], canc[i] = sv.value, sv.abs_error_estimate, sv.terms_used, sv.cancellation_digits
            tier_ix[i] = TIERS.index(sv.tier)
        rest = np.nonzero(~big)[0]
        if rest.size:
            out = _evaluate_batch(plan, z_hi[rest], z_lo[rest], ceiling, rel_tol)
            for arr, part in zip((vals, errs, terms, canc, tier_ix), out):
                arr[rest] = part
        return vals, errs, terms, canc, tier_ix
    length = plan.initial_length(zmax)
    pending = np.arange(M)
    for tier in ("double", "dd"):
        u = K.U_DOUBLE if tier == "double" else K.U_DD
        todo = pending
        rows = np.empty((M, 8))
        while todo.size:
            c_hi, c_lo = plan.coeffs(length)
            if tier == "double":
                out = K.sum_double_batch(c_hi, z_hi[todo] + z_lo[todo], _TOL[tier])
            else:
                out = K.sum_dd_batch(c_hi, c_lo, z_hi[todo], z_lo[todo], _TOL[tier])
            rows[todo] = out
            bad = todo[out[:, 7] == 0.0]
            if bad.size and (c_hi.shape[0] >= MAX_TERMS or plan.stop is not None):
                raise NonConvergent("series not converged within the term cap")
            todo = bad
            length = min(2 * c_hi.shape[0], MAX_TERMS)
        c_hi, _ = plan.coeffs(length)
        still = []
        for i in pending:
            sv = _finish(rows[i], c_hi, abs(z_hi[i]), u, tier)
            vals[i], errs[i], terms[i], canc[i] = sv.value, sv.abs_error_estimate, sv.terms_used, sv.cancellation_digits
            tier_ix[i] = TIERS.index(tier)
            if not _accepted(sv, rel_tol):
                still.append(i)
        pending = np.asarray(still, dtype=np.int64)
        if not pending.size:
            return vals, errs, terms, canc, tier_ix
        if ceiling == tier:
            raise PrecisionLoss(f"{tier} tier insufficient at {pending.size} arguments")
    digits = [_escalation_digits(SeriesValue(vals[i], errs[i], int(terms[i]), canc[i], "dd")) for i in pending]
    for i, sv in zip(pending, _mp_refine_many(plan, z_hi[pending], z_lo[pending], digits, rel_tol)):
        vals[i], errs[i], terms[i], canc[i] = sv.value, sv.abs_error_estimate, sv.terms_used, sv.cancellation_digits
        tier_ix[i] = 2
    return vals, errs, terms, canc, tier_ix


# ---------------------------------------------------------------- public API

def pfq(spec: HypergeometricSpec, precision: str | None = None) -> SeriesValue:
    """Sum pFq(u; v; z) with precision escalation."""
    plan = _plan(spec.numerators, spec.denominators)
    return _evaluate(plan, spec.z, 0.0, precision)


def pfq_terminating_value(n: int, numerators, denominators, precision: str | None = None) -> SeriesValue:
    """Terminating series at unit argument; the leading numerator must be -n.

    Shifted parameters such as n + a lose their exactness when rounded to a
    double, and the sum can amplify that by its cancellation; pass them as
    ``exact_param(n, a)`` to keep them exact.
    """
    if int(n) != n or n < 0:
        raise InvalidParameter("n must be a non-negative integer")
    for v in denominators:
        v = _approx(_param(v))
        if _is_nonpos_int(v) and -v < n:
            raise DenominatorPole(f"denominator parameter {v} is hit by the first {n} terms")
    spec = HypergeometricSpec(tuple(numerators), tuple(denominators), 1.0)
    if not spec.numerators or spec.numerators[0] != -n:
        raise InvalidParameter(f"leading numerator must be {-n}")
    if n == 0:
        return SeriesValue(1.0, 0.0, 0, 0.0, "double")
    return _evaluate(_plan(spec.numerators, spec.denominators), 1.0, 0.0, precision)


def pfq_terminating(n: int, numerators, denominators) -> float:
    return pfq_terminating_value(n, numerators, denominators).value


def _neg_square(x: float):
    h, l = K.two_prod(float(x), float(x))
    return -h, -l


def _check_pair(a):
    a = tuple(float(v) for v in a)
    if len(a) != 2 or not all(math.isfinite(v) and v > 0 for v in a):
        raise InvalidParameter(f"a must be two positive reals, got {a}")
    return a


def _check_triple(b):
    b = tuple(float(v) for v in b)
    if len(b) != 3 or not all(math.isfinite(v) and v > 0 for v in b):
        raise InvalidParameter(f"b must be three positive reals, got {b}")
    return b


def phi_2f3(a, b, x: float) -> SeriesValue:
    """Phi(x) = 2F3(a1, a2; b1, b2, b3; -x^2)."""
    a = _check_pair(a)
    b = _check_triple(b)
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise InvalidParameter("x must be a finite non-negative real")
    z_hi, z_lo = _neg_square(x)
    return _evaluate(_plan(a, b), z_hi, z_lo)


def phi_2f3_grid(a, b, xs, rel_tol: float = REL_TOL):
    """Phi on an array of arguments; returns (values, abs_errors, tier_index).

    `rel_tol` is the accuracy a tier must reach before it is accepted; a
    scan that only needs signs can pass something much looser than the default.
    """
    a = _check_pair(a)
    b = _check_triple(b)
    xs = np.asarray(xs, dtype=np.float64)
    z_hi, z_lo = K.two_prod(xs, xs)
    vals, errs, _, _, tiers = _evaluate_batch(_plan(a, b), -z_hi, -z_lo, rel_tol=rel_tol)
    return vals, errs, tiers


def hyp_neg_square(numerators, denominators, x: float) -> SeriesValue:
    """pFq(u; v; -x^2) with the square formed exactly."""
    num = tuple(float(u) for u in numerators)
    den = tuple(float(v) for v in denominators)
    HypergeometricSpec(num, den, 0.0)
    z_hi, z_lo = _neg_square(x)
    return _evaluate(_plan(num, den), z_hi, z_lo)


def hyp_neg_square_grid(numerators, denominators, xs, rel_tol: float = REL_TOL):
    """pFq(u; v; -x^2) on an array; returns (values, abs_errors, tier_index)."""
    num = tuple(float(u) for u in numerators)
    den = tuple(float(v) for v in denominators)
    HypergeometricSpec(num, den, 0.0)
    xs = np.asarray(xs, dtype=np.float64)
    z_hi, z_lo = K.two_prod(xs, xs)
    vals, errs, _, _, tiers = _evaluate_batch(_plan(num, den), -z_hi, -z_lo, rel_tol=rel_tol)
    return vals, errs, tiers


# ---------------------------------------------------------------- Bessel J

def _bessel_series(nu: float, x: float):
    sv = hyp_neg_square((), (nu + 1.0,), 0.5 * x)
    if x == 0.0:
        pre = 1.0 if nu == 0 else 0.0
    else:
        pre = (0.5 * x) ** nu * rgamma(nu + 1.0)
    return pre * sv.value, abs(pre) * sv.abs_error_estimate + K.U_DOUBLE * abs(pre * sv.value)


def _bessel_hankel(nu: float, x: float):
    """Hankel expansion; returns None when the smallest term is not small enough."""
    mu = 4.0 * nu * nu
    P, Q = 1.0, 0.0
    A = 1.0
    prev = math.inf
    k = 1
    while True:
        A *= (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if A == 0.0:
            last = 0.0
            break
        if abs(A) > prev:
            last = prev
            break
        if k % 2:
            Q += A if (k // 2) % 2 == 0 else -A
        else:
            P += A if (k // 2) % 2 == 0 else -A
        prev = abs(A)
        if prev < 1e-17 * min(1.0, abs(P) + abs(Q)):
            last = prev
            break
        k += 1
        if k > 500:
            last = prev
            break
    if last > 1e-16:
        return None
    w = x - (0.5 * nu + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    val = amp * (P * math.cos(w) - Q * math.sin(w))
    err = amp * (last + 4.0 * K.U_DOUBLE * (abs(P) + abs(Q)) * (1.0 + x * K.U_DOUBLE * 4))
    return val, err


def bessel_j_value(nu: float, x: float):
    """J_nu(x) together with an absolute error estimate."""
    nu = float(nu)
    x = float(x)
    if not math.isfinite(nu) or not math.isfinite(x) or x < 0:
        raise InvalidParameter("bessel_j needs finite nu and x >= 0")
    if nu < 0 and nu == math.floor(nu):
        v, e = bessel_j_value(-nu, x)
        return (v if int(-nu) % 2 == 0 else -v), e
    if x >= 25.0:
        h = _bessel_hankel(nu, x)
        if h is not None:
            return h
    return _bessel_series(nu, x)


def bessel_j(nu: float, x: float) -> float:
    return bessel_j_value(nu, x)[0]


# ---------------------------------------------------------------- asymptotics

def asymptotic_2f3(a, b, x: float) -> AsymptoticValue:
    """Leading large-x terms of Phi(x) = 2F3(a; b; -x^2).

    Phi ~ C [G1 x^(-2 a1) + G2 x^(-2 a2) + pi^(-1/2) x^(-chi) cos(2x - pi chi / 2)]
    with C = prod Gamma(b) / prod Gamma(a) and chi = sum(b) - a1 - a2 - 1/2.
    """
    a1, a2 = _check_pair(a)
    b = _check_triple(b)
    x = float(x)
    if x <= 0:
        raise InvalidParameter("x must be positive")
    if a2 - a1 == math.floor(a2 - a1):
        raise DegenerateCase("a2 - a1 is an integer; the algebraic terms merge into a logarithmic one")
    chi = sum(b) - a1 - a2 - 0.5
    lc, sc = 0.0, 1.0
    for bj in b:
        l, s = _log_gamma_signed(bj)
        lc, sc = lc + l, sc * s
    for aj in (a1, a2):
        l, s = _log_gamma_signed(aj)
        lc, sc = lc - l, sc * s

    def algebraic(p, q):
        # C * Gamma(p) Gamma(q - p) / prod Gamma(b - p) * x^(-2p)
        l1, s1 = _log_gamma_signed(p)
        l2, s2 = _log_gamma_signed(q - p)
        sign = sc * s1 * s2
        logv = lc + l1 + l2 - 2.0 * p * math.log(x)
        for bj in b:
            r = rgamma(bj - p)
            if r == 0.0:
                return 0.0
            logv += math.log(abs(r))
            sign *= math.copysign(1.0, r)
        return sign * math.exp(logv)

    amp = sc * math.exp(lc - chi * math.log(x)) / math.sqrt(math.pi)
    return AsymptoticValue(algebraic(a1, a2), algebraic(a2, a1), amp, 0.5 * math.pi * chi, chi, x)
