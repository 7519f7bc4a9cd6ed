"""Randomized self-checks behind ``hyperpos verify``.

Each suite draws parameters from a seeded generator, runs an identity or a
soundness check per draw and returns a JSON-ready summary.  The samplers are
also used by the test suite.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from . import regions as R
from .certify import Verdict, certify, numeric_sign_scan
from .criteria import (Omega5F4Params, Theta4F3Params, check_omega_criteria, check_theta_criteria,
                       chu_vandermonde, fields_wimp_decomposition, omega, saalschutz_3f2, theta,
                       whipple_decomposition)
from .errors import DenominatorPole, HyperposError
from .fracint import FracIntParams, fracint_quadrature, fracint_value
from .hyperfn import bessel_j, exact_param, hyp_neg_square, pfq_terminating_value

SUITES = ("identities", "criteria", "certificates", "fracint")


# ---------------------------------------------------------------- samplers

def dyadic(rng, lo, hi, size=None):
    """Uniform draws rounded to multiples of 2^-24, so short sums of them are exact."""
    return np.round(rng.uniform(lo, hi, size) * 2.0 ** 24) / 2.0 ** 24


def random_theta_params(rng, n: int = 1) -> Theta4F3Params:
    """A Saalschuetzian 4F3 parameter set with positive betas."""
    while True:
        al = (dyadic(rng, -0.9, 3.0), dyadic(rng, 0.1, 3.0), dyadic(rng, 0.1, 3.0))
        b1, b2 = dyadic(rng, 0.1, 4.0, 2)
        b3 = 1 + sum(al) - b1 - b2
        if b3 > 0.1:
            return Theta4F3Params(al, (b1, b2, b3), n)


def random_omega_params(rng, n: int = 1) -> Omega5F4Params:
    while True:
        al = (dyadic(rng, -0.9, 3.0),) + tuple(dyadic(rng, 0.1, 3.0, 3))
        b = tuple(dyadic(rng, 0.1, 4.0, 3))
        b4 = 1 + sum(al) - sum(b)
        if b4 > 0.1:
            return Omega5F4Params(al, b + (b4,), n)


def random_passing_theta(rng, n: int = 1) -> Theta4F3Params:
    """Rejection-sample a parameter set that meets an all-n criterion."""
    while True:
        p = random_theta_params(rng, n)
        if check_theta_criteria(p).satisfied:
            return p


def random_passing_omega(rng, n: int = 1) -> Omega5F4Params:
    while True:
        p = random_omega_params(rng, n)
        if check_omega_criteria(p).satisfied:
            return p


def random_point(rng, a_range=(0.2, 3.0), b_range=(0.1, 6.0)):
    a = tuple(float(v) for v in np.sort(rng.uniform(*a_range, 2)))
    b = tuple(float(v) for v in rng.uniform(*b_range, 3))
    return a, b


def random_strict_point(rng):
    """A point certified STRICT_POSITIVE, half of them close to the certified boundary."""
    while True:
        a, b = random_point(rng)
        if rng.random() < 0.5:
            # pull b towards a vertex so the sample is not only deep inside
            verts = list(R.vertices_A(a).values()) + list(R.vertices_B(a).values())
            v = verts[rng.integers(len(verts))]
            b = tuple(float(x + rng.uniform(0.0, 0.3)) for x in v)
        c = certify(a, b)
        if c.verdict is Verdict.STRICT_POSITIVE:
            return a, b, c


def violation_margin(a, b) -> float:
    """How far b is from meeting the necessary conditions (positive when violated)."""
    a1 = min(a)
    return max(a1 - min(b), 3 * a1 + max(a) + 0.5 - sum(b))


def random_sign_change_point(rng, margin: float = 0.25):
    """A point failing the necessary conditions by at least `margin`."""
    while True:
        a, b = random_point(rng)
        if violation_margin(a, b) < margin:
            continue
        c = certify(a, b)
        if c.verdict is Verdict.SIGN_CHANGE:
            return a, b, c


def random_fracint_params(rng) -> FracIntParams:
    al = rng.uniform(-0.95, 4.0)
    lam = rng.uniform(-0.95, 4.0)
    mu = rng.uniform(-al - 1 + 0.05, 5.0)
    return FracIntParams(al, lam, mu)


# ---------------------------------------------------------------- helpers

def rel_err(x: float, ref: float) -> float:
    return abs(x - ref) / max(abs(ref), 1e-300)


class _Tally:
    def __init__(self):
        self.checks = {}

    def record(self, name, ok, detail=None):
        c = self.checks.setdefault(name, {"passed": 0, "failed": 0, "examples": []})
        if ok:
            c["passed"] += 1
        else:
            c["failed"] += 1
            if detail is not None and len(c["examples"]) < 3:
                c["examples"].append(detail)

    def summary(self, suite, seed, trials):
        failed = sum(c["failed"] for c in self.checks.values())
        return {"suite": suite, "seed": seed, "trials": trials, "ok": failed == 0,
                "passed": sum(c["passed"] for c in self.checks.values()), "failed": failed,
                "checks": self.checks}


# ---------------------------------------------------------------- suites

def _identities(rng, trials, t):
    for _ in range(trials):
        n = int(rng.integers(1, 21))
        p = random_theta_params(rng, n)
        try:
            w = whipple_decomposition(p)
        except DenominatorPole:
            continue
        d = theta(p)
        t.record("whipple", rel_err(w, d) <= 1e-10, {"alpha": p.alpha, "beta": p.beta, "n": n})

        q = random_omega_params(rng, n)
        for variant in ("T1", "G3"):
            try:
                f = fields_wimp_decomposition(q, variant=variant)
            except DenominatorPole:
                continue
            t.record(f"fields_wimp_{variant}", rel_err(f, omega(q)) <= 1e-10,
                     {"alpha": q.alpha, "beta": q.beta, "n": n})

        k = int(rng.integers(0, 31))
        a1, a2 = dyadic(rng, 0.1, 3.0, 2)
        b1 = dyadic(rng, 0.1, 4.0)
        b2 = 1 + a1 + a2 - b1
        if b2 > 0.1:
            direct = pfq_terminating_value(k, (-k, exact_param(k, a1), a2), (b1, b2)).value if k else 1.0
            t.record("saalschutz", rel_err(saalschutz_3f2(k, a1, a2, b1, b2), direct) <= 1e-12)
        a, c = rng.uniform(-2.0, 3.0), rng.uniform(0.1, 4.0)
        direct = pfq_terminating_value(k, (-k, a), (c,)).value if k else 1.0
        t.record("chu_vandermonde", rel_err(chu_vandermonde(k, a, c), direct) <= 1e-12)

        nu, x = rng.uniform(0.0, 5.0), rng.uniform(0.05, 20.0)
        lhs = bessel_j(nu, x) ** 2
        rhs = (x / 2) ** (2 * nu) / special.gamma(nu + 1) ** 2 * \
            hyp_neg_square((nu + 0.5,), (nu + 1, 2 * nu + 1), x).value
        t.record("bessel_square", rel_err(lhs, rhs) <= 1e-9, {"nu": nu, "x": x})


def _criteria(rng, trials, t):
    for _ in range(trials):
        p = random_passing_theta(rng)
        worst = min(_scaled_terminating(n, (-n, exact_param(n, p.alpha[0])) + p.alpha[1:], p.beta) for n in range(1, 61))
        t.record("theta_nonnegative", worst >= -1e-10, {"alpha": p.alpha, "beta": p.beta})
        q = random_passing_omega(rng)
        worst = min(_scaled_terminating(n, (-n, exact_param(n, q.alpha[0])) + q.alpha[1:], q.beta) for n in range(1, 61))
        t.record("omega_nonnegative", worst >= -1e-10, {"alpha": q.alpha, "beta": q.beta})


def _scaled_terminating(n, num, den):
    """Value divided by the sum of absolute terms."""
    sv = pfq_terminating_value(n, num, den)
    terms = np.ones(n + 1)
    for k in range(n):
        r = 1.0 / (k + 1)
        for u in num:
            r *= (u[0] if isinstance(u, tuple) else u) + k
        for v in den:
            r /= v + k
        terms[k + 1] = terms[k] * r
    scale = float(np.sum(np.abs(terms)))
    return (sv.value + sv.abs_error_estimate) / scale


def _certificates(rng, trials, t):
    for _ in range(trials):
        a, b, c = random_strict_point(rng)
        r = numeric_sign_scan(a, b, 40.0, 2000, refine=0)
        t.record("strict_positive_scan", r.min_value > 0 and r.first_sign_change is None,
                 {"a": a, "b": b, "theorem": c.theorem.value, "min": r.min_value})
        a, b, c = random_sign_change_point(rng)
        r = numeric_sign_scan(a, b, 40.0, 2000, refine=0)
        if r.first_sign_change is None:
            r = numeric_sign_scan(a, b, 120.0, 12000, refine=0)
        t.record("sign_change_found", r.first_sign_change is not None, {"a": a, "b": b})


def _fracint(rng, trials, t):
    for _ in range(trials):
        p = random_fracint_params(rng)
        for x in (0.5, 2.0, 5.0, 10.0, 20.0):
            q, scale = fracint_quadrature(p, x, full_output=True)
            v = fracint_value(p, x).value
            t.record("identity", abs(v - q) <= 1e-7 * scale,
                     {"alpha": p.alpha, "lam": p.lam, "mu": p.mu, "x": x})
    c = 2 * math.sqrt(2 / math.pi)
    for x in np.linspace(0.6, 30.0, 50):
        v = fracint_value((-0.5, 1.0, 0.5), float(x)).value
        t.record("closed_form", abs(v - c * math.sin(x / 2) ** 2) <= 1e-10 * c, {"x": float(x)})


_RUNNERS = {"identities": _identities, "criteria": _criteria, "certificates": _certificates,
            "fracint": _fracint}


def run_suite(suite: str, seed: int = 0, trials: int = 20) -> dict:
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    rng = np.random.default_rng(seed)
    t = _Tally()
    try:
        _RUNNERS[suite](rng, trials, t)
    except HyperposError as exc:
        t.record("numerical_failure", False, {"error": f"{type(exc).__name__}: {exc}"})
    return t.summary(suite, seed, trials)
