"""Sign certificates for Phi(x) = 2F3(a1, a2; b1, b2, b3; -x^2) and numerical checks."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from . import regions as R
from .errors import HyperposError, InvalidParameter, PrecisionLoss, QuadratureFailure
from .gasper import ExpansionMode, min_coefficient_scan, nu_for_saalschutz
from .hyperfn import phi_2f3, phi_2f3_grid


class Verdict(enum.Enum):
    STRICT_POSITIVE = "STRICT_POSITIVE"
    NONNEG_WITH_ZEROS = "NONNEG_WITH_ZEROS"
    SIGN_CHANGE = "SIGN_CHANGE"
    INDETERMINATE = "INDETERMINATE"


class Theorem(enum.Enum):
    THM2 = "THM2"
    COR2 = "COR2"
    THM3 = "THM3"
    THM4 = "THM4"
    PROP_HEX = "PROP_HEX"
    PROP_QUAD_1 = "PROP_QUAD_1"
    PROP_QUAD_2 = "PROP_QUAD_2"
    PROP2_NECESSITY = "PROP2_NECESSITY"
    NONE = "NONE"


# grid values only need their sign and rough size; minima are polished at full accuracy
SCAN_REL_TOL = 1e-6

_Q1_TYPE = ("S_A5A6B6B5", "S_A1A3B3B1", "S_A2A4B4B2")
_Q2_TYPE = ("S_A1A2B2B1", "S_A4A6B6B4", "S_A3A5B5B3")


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    theorem: Theorem
    a: tuple
    b: tuple
    active_constraints: tuple = ()
    evidence: object = None
    notes: tuple = ()


@dataclass(frozen=True)
class SignReport:
    x_max: float
    points: int
    min_value: float
    argmin_x: float
    first_sign_change: float | None
    skipped: tuple = ()
    uncertain: int = 0


@dataclass(frozen=True)
class TransferenceReport:
    kind: str
    j: int
    shift: float
    x: float
    lhs: float
    rhs: float
    residual: float
    scaled_residual: float
    scale: float


def _evidence(a, b, n):
    """Coefficient scan backing a face or quadrilateral certificate, if one applies."""
    a1, a2 = a
    if abs(sum(b) - sum(R.xi(a))) <= R.tol(sum(R.xi(a))):
        return min_coefficient_scan(a, b, n, ExpansionMode.ON_PLANE_L)
    if a1 < a2 and abs(sum(b) - sum(R.eta(a))) <= R.tol(sum(R.eta(a))):
        return min_coefficient_scan((a2, a1), b, n, ExpansionMode.ON_PLANE_L)
    if a1 < a2 and R.side_quadrilaterals(a, b):
        return min_coefficient_scan(a, b, n, ExpansionMode.GENERAL_K, nu_for_saalschutz(a, b))
    return None


def _strict_branches(a, b):
    """Every sufficient condition that holds at (a, b), in ladder order."""
    a1, a2 = a
    lam = R.in_lambda(a)
    found = []
    if R.in_m1(a):
        m = R.in_gamma_AB(a, b)
        if m:
            found.append((Theorem.THM4, m.active_constraints, f"Gamma+(A u B), case {R.gamma_ab_case(a)}"))
    if lam:
        m = R.in_gamma_A(a, b)
        if m:
            thm = Theorem.THM2
            note = "Gamma+(A)" + (", diagonal a1 = a2 (COR2)" if a1 == a2 else "")
            if R.in_hexagon(a, b, "A"):
                note += ", on the hexagon H_A"
            found.append((thm, m.active_constraints, note))
    if a1 < a2:
        m = R.in_gamma_B(a, b)
        if m:
            found.append((Theorem.THM3, m.active_constraints, "Gamma+(B)"))
        sigma = R.in_sigma(a)
        if sigma:
            on = R.side_quadrilaterals(a, b)
            shadows = R.quadrilateral_shadows(a, b)
            for thm, kinds, ok in ((Theorem.PROP_QUAD_1, _Q1_TYPE, True), (Theorem.PROP_QUAD_2, _Q2_TYPE, lam)):
                tags = [t for t in shadows if t in kinds] if ok else []
                if tags:
                    where = "on" if any(t in on for t in tags) else "above"
                    found.append((thm, (), f"{where} side quadrilateral(s) {', '.join(tags)}"))
    return found


def certify(a, b, evidence_n: int | None = None) -> Certificate:
    """Apply the sufficient and necessary conditions in a fixed order.

    The first satisfied rung decides the verdict; notes list every rung that
    holds.  Quadrilateral rungs accept b anywhere in S + R_+^3, since
    positivity at b carries over to every upward shift of b.
    """
    a = R.pair(a)
    b = R.triple(b)
    notes = []
    if a[0] > a[1]:
        a = (a[1], a[0])
        notes.append("swapped a1 and a2 so that a1 <= a2")
    a1, a2 = a

    def done(verdict, theorem, active=()):
        ev = None
        if evidence_n is not None and verdict is not Verdict.SIGN_CHANGE:
            try:
                ev = _evidence(a, b, evidence_n)
            except HyperposError as exc:
                notes.append(f"no expansion evidence: {exc}")
        return Certificate(verdict, theorem, a, b, tuple(active), ev, tuple(notes))

    nec = R.necessity(a, b)
    if nec is not R.Necessity.OK:
        notes.append(f"necessary condition fails: {nec.value}")
        return done(Verdict.SIGN_CHANGE, Theorem.PROP2_NECESSITY)

    lam = R.in_lambda(a)
    va = R.vertex_label(a, b, "A")
    vb = R.vertex_label(a, b, "B") if a1 < a2 else None
    if va and lam:
        notes.append(f"b is the vertex {va}")
        return done(Verdict.NONNEG_WITH_ZEROS, Theorem.COR2 if a1 == a2 else Theorem.THM2)
    if vb:
        notes.append(f"b is the vertex {vb}")
        return done(Verdict.NONNEG_WITH_ZEROS, Theorem.THM3)
    if va:
        # Phi is a squared Bessel function here, so no strict certificate can apply
        notes.append(f"b is the vertex {va}, where Phi is a Bessel square, but a lies outside Lambda")
        return done(Verdict.INDETERMINATE, Theorem.NONE)

    found = _strict_branches(a, b)
    if found:
        thm, active, _ = found[0]
        notes.extend(n for _, _, n in found)
        return done(Verdict.STRICT_POSITIVE, thm, active)
    if a1 < a2:
        if R.side_quadrilaterals(a, b):
            notes.append("on a side quadrilateral but a is not admissible for it")
        if not R.in_m1(a):
            notes.append("a lies outside the admissible set of Gamma+(A u B)")
    return done(Verdict.INDETERMINATE, Theorem.NONE)


# ---------------------------------------------------------------- numerical scans

def _bisect(a, b, lo, hi, width=1e-8):
    flo = phi_2f3(a, b, lo).value
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        fm = phi_2f3(a, b, mid).value
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refine_minima(a, b, xs, vals, ok, count):
    """Polish the `count` lowest interior grid minima with a bounded Brent search."""
    v = np.where(ok, vals, np.inf)
    idx = [i for i in range(1, len(xs) - 1) if v[i] <= v[i - 1] and v[i] <= v[i + 1] and np.isfinite(v[i])]
    idx.sort(key=lambda i: v[i])
    best = None
    for i in idx[:count]:

        def f(t):
            try:
                return phi_2f3(a, b, t).value
            except PrecisionLoss:
                return np.inf

        r = optimize.minimize_scalar(f, bounds=(float(xs[i - 1]), float(xs[i + 1])),
                                     method="bounded", options={"xatol": 1e-10})
        if r.fun < v[i] and (best is None or r.fun < best[0]):
            best = (float(r.fun), float(r.x))
    return best


def numeric_sign_scan(a, b, x_max: float = 40.0, points: int = 4000, refine: int = 3) -> SignReport:
    """Evaluate Phi on a uniform grid of (0, x_max].

    Records the minimum and the first sign change (bisected to 1e-8).  A
    value counts as negative only when it is below minus its error estimate.
    The `refine` lowest interior local minima are polished by a bounded
    one-dimensional search, so touching zeros show up as near-zero minima.
    """
    a = R.pair(a)
    b = R.triple(b)
    if not (x_max > 0 and points >= 1):
        raise InvalidParameter("need x_max > 0 and points >= 1")
    xs = x_max * np.arange(1, points + 1) / points
    skipped = []
    try:
        vals, errs, _ = phi_2f3_grid(a, b, xs, rel_tol=SCAN_REL_TOL)
    except PrecisionLoss:
        vals = np.full(points, np.nan)
        errs = np.full(points, np.nan)
        for i, x in enumerate(xs):
            try:
                sv = phi_2f3(a, b, float(x))
                vals[i], errs[i] = sv.value, sv.abs_error_estimate
            except PrecisionLoss:
                skipped.append(float(x))
    ok = ~np.isnan(vals)
    if not ok.any():
        raise PrecisionLoss("no grid point could be evaluated")
    k = int(np.argmin(np.where(ok, vals, np.inf)))
    min_value, argmin = float(vals[k]), float(xs[k])
    neg = np.nonzero(ok & (vals < -errs))[0]
    uncertain = int(np.sum(ok & (np.abs(vals) <= errs)))
    first = None
    if neg.size:
        i = int(neg[0])
        lo = float(xs[i - 1]) if i > 0 else 1e-300
        first = _bisect(a, b, lo, float(xs[i]))
    elif refine:
        best = _refine_minima(a, b, xs, vals, ok, refine)
        if best is not None and best[0] < min_value:
            min_value, argmin = best
    return SignReport(float(x_max), int(points), min_value, argmin, first, tuple(skipped), uncertain)


# ---------------------------------------------------------------- transference

def transference_check(a, b, j: int, shift: float, x: float, kind: str = "raise_b") -> TransferenceReport:
    """Compare Phi at shifted parameters with the integral transform of Phi.

    `residual` is |lhs - rhs| / |lhs|; `scaled_residual` divides by the larger
    of |lhs| and the integral of |integrand|, which stays meaningful near zeros.

    raise_b:  Phi(a, b + s e_j; x) = 2/B(b_j, s) int_0^1 Phi(a, b; xt) (1-t^2)^(s-1) t^(2 b_j - 1) dt
    lower_a:  Phi(a - s e_j, b; x) = 2/B(s, a_j - s) int_0^1 Phi(a, b; xt) (1-t^2)^(s-1) t^(2 a_j - 2s - 1) dt
    """
    a = R.pair(a)
    b = R.triple(b)
    if not shift > 0:
        raise InvalidParameter("shift must be positive")
    if kind == "raise_b":
        if j not in (0, 1, 2):
            raise InvalidParameter("j must index b")
        p = b[j]
        norm = 2.0 / special.beta(p, shift)
        expo = 2 * p - 1
        a2, b2 = a, tuple(v + shift if i == j else v for i, v in enumerate(b))
    elif kind == "lower_a":
        if j not in (0, 1) or not a[j] > shift:
            raise InvalidParameter("need j in (0, 1) and a_j > shift")
        p = a[j]
        norm = 2.0 / special.beta(shift, p - shift)
        expo = 2 * p - 2 * shift - 1
        a2, b2 = tuple(v - shift if i == j else v for i, v in enumerate(a)), b
    else:
        raise InvalidParameter("kind must be 'raise_b' or 'lower_a'")

    def f(t):
        # the (1 - t)^(s-1) t^expo factor is carried by the quadrature weight
        return phi_2f3(a, b, x * t).value * (1 + t) ** (shift - 1)

    val, aerr, info = _weighted_quad(f, expo, shift - 1)
    absval, _, _ = _weighted_quad(lambda t: abs(f(t)), expo, shift - 1)
    lhs = phi_2f3(a2, b2, x).value
    rhs = float(norm * val)
    scale = float(max(abs(lhs), norm * absval))
    gap = abs(lhs - rhs)
    rel = gap / abs(lhs) if lhs != 0 else math.inf
    return TransferenceReport(kind, j, float(shift), float(x), lhs, rhs, rel, gap / scale, scale)


def _weighted_quad(f, left_power, right_power, lo=0.0, hi=1.0):
    """int_lo^hi f(t) (t-lo)^left_power (hi-t)^right_power dt by QUADPACK's algebraic-weight rule."""
    out = integrate.quad(f, lo, hi, weight="alg", wvar=(left_power, right_power),
                         epsabs=1e-14, epsrel=1e-12, limit=200, full_output=1)
    val, err, info = out[0], out[1], out[2]
    if len(out) > 3 and out[3] and "roundoff" not in str(out[3]).lower():
        raise QuadratureFailure(str(out[3]))
    if info["neval"] > 10_000:
        raise QuadratureFailure(f"{info['neval']} evaluations exceed the budget")
    return val, err, info
