"""Gasper's sums-of-squares expansion of Phi in squared Bessel functions.

For any nu > -1/2,

    pFq(u; v; -z^2) = Gamma(nu+1)^2 (z/2)^(-2 nu)
        * sum_n w_n(nu) F_n J_{n+nu}(z)^2,
    w_n(nu) = (2n + 2nu) / (n + 2nu) * (2nu + 1)_n / n!      (w_0 = 1),
    F_n = (p+3)F(q+1)(-n, n + 2nu, nu + 1, u; nu + 1/2, v; 1).

With u = (a1, a2), v = b this gives the K-mode coefficients K_n.  Taking
nu = a1 - 1/2 cancels a1 against nu + 1/2 and leaves the 4F3 coefficients
L_n used on the bottom face of the Newton polyhedron.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidNu, InvalidParameter, OffPlane
from .hyperfn import SeriesValue, bessel_j_value, exact_param, pfq_terminating_value, pochhammer
from .regions import pair, triple


class ExpansionMode(enum.Enum):
    ON_PLANE_L = "L"
    GENERAL_K = "K"


@dataclass(frozen=True)
class ExpansionCoefficients:
    nu: float
    kind: ExpansionMode
    values: tuple
    min_value: float
    argmin: int


def nu_for_saalschutz(a, b) -> float:
    """The nu making every K_n Saalschuetzian: 2nu + 1 = sum(b) - a1 - a2 - 1/2."""
    a1, a2 = pair(a)
    b = triple(b)
    s = sum(b) - a1 - a2 - 0.5
    if not s > 0:
        raise InvalidNu(f"sum(b) - a1 - a2 - 1/2 = {s} must be positive")
    nu = (s - 1.0) / 2.0
    if (2 * nu) <= -1 and 2 * nu == math.floor(2 * nu):
        raise InvalidNu(f"2 nu = {2 * nu} is a negative integer")
    return nu


def _check_plane(a, b):
    a1, a2 = pair(a)
    b = triple(b)
    plane = 3 * a1 + a2 + 0.5
    if abs(sum(b) - plane) > 1e-10 * (1 + plane):
        raise OffPlane(f"sum(b) = {sum(b)} is not on the plane {plane}")
    return (a1, a2), b


def coefficient_L_value(n: int, a, b) -> SeriesValue:
    (a1, a2), b = _check_plane(a, b)
    return pfq_terminating_value(n, (-n, exact_param(n - 1, 2 * a1), exact_param(a1, 0.5), a2), b)


def coefficient_L(n: int, a, b) -> float:
    """L_n = 4F3(-n, n + 2a1 - 1, a1 + 1/2, a2; b1, b2, b3; 1) on the plane sum(b) = 3a1 + a2 + 1/2."""
    return coefficient_L_value(n, a, b).value


def coefficient_K_value(n: int, nu: float, a, b) -> SeriesValue:
    a1, a2 = pair(a)
    b = triple(b)
    nu = float(nu)
    if not nu > -0.5:
        raise InvalidNu("nu must exceed -1/2")
    return pfq_terminating_value(n, (-n, exact_param(n, 2 * nu), exact_param(nu, 1.0), a1, a2),
                                 (exact_param(nu, 0.5),) + b)


def coefficient_K(n: int, nu: float, a, b) -> float:
    """K_n = 5F4(-n, n + 2nu, nu + 1, a1, a2; nu + 1/2, b1, b2, b3; 1)."""
    return coefficient_K_value(n, nu, a, b).value


def _weight(n: int, nu: float) -> float:
    if n == 0:
        return 1.0
    return (2 * n + 2 * nu) / (n + 2 * nu) * pochhammer(2 * nu + 1, n) / math.factorial(n)


def _resolve(a, b, mode, nu):
    mode = ExpansionMode(mode) if not isinstance(mode, ExpansionMode) else mode
    if mode is ExpansionMode.ON_PLANE_L:
        a, b = _check_plane(a, b)
        return mode, a[0] - 0.5, (lambda n: coefficient_L_value(n, a, b))
    a, b = pair(a), triple(b)
    if nu is None:
        nu = nu_for_saalschutz(a, b)
    if not nu > -0.5:
        raise InvalidNu("nu must exceed -1/2")
    return mode, float(nu), (lambda n: coefficient_K_value(n, nu, a, b))


def expansion_partial_sum(a, b, x: float, N: int, mode="L", nu: float | None = None,
                          arg_scale: float = 1.0) -> SeriesValue:
    """Partial sum n <= N of the expansion of 2F3(a; b; -(arg_scale x)^2).

    The error estimate adds the propagated errors of every retained term and
    twice the first omitted term.
    """
    if N < 0 or int(N) != N:
        raise InvalidParameter("N must be a non-negative integer")
    x = float(x)
    if not x > 0:
        raise InvalidParameter("x must be positive")
    mode, nu, coef = _resolve(a, b, mode, nu)
    z = arg_scale * x
    pre = math.exp(2 * math.lgamma(nu + 1) - 2 * nu * math.log(z / 2))
    total = 0.0
    err = 0.0
    for n in range(int(N) + 2):
        c = coef(n)
        j, je = bessel_j_value(n + nu, z)
        w = _weight(n, nu)
        term = pre * w * c.value * j * j
        if n <= N:
            total += term
            err += abs(pre * w) * (abs(c.value) * (2 * abs(j) * je + je * je) + c.abs_error_estimate * j * j)
            err += 4e-16 * abs(term)
        else:
            err += 2 * abs(term)
    err += 1e-16 * abs(total)
    return SeriesValue(total, err, int(N) + 1, 0.0, "expansion")


def min_coefficient_scan(a, b, N: int, mode="L", nu: float | None = None) -> ExpansionCoefficients:
    """Coefficients for n = 0..N and their minimum."""
    mode, nu, coef = _resolve(a, b, mode, nu)
    values = tuple(coef(n).value for n in range(int(N) + 1))
    k = min(range(len(values)), key=values.__getitem__)
    return ExpansionCoefficients(nu, mode, values, values[k], k)
