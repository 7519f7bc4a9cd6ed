import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

import oracles
from hyperpos import criteria as C
from hyperpos import gasper as G
from hyperpos import regions as R
from hyperpos.errors import DenominatorPole, InvalidParameter, PreconditionViolation, SaalschutzViolation
from hyperpos.verify import dyadic, random_omega_params, random_passing_omega, random_passing_theta, random_theta_params


def _theta_ref(p):
    a1, a2, a3 = p.alpha
    with mp.workdps(60):
        return oracles.terminating(p.n, [oracles.mpf(a1) + p.n, a2, a3], p.beta, dps=60)


def _omega_ref(p):
    a1, a2, a3, a4 = p.alpha
    with mp.workdps(60):
        return oracles.terminating(p.n, [oracles.mpf(a1) + p.n, a2, a3, a4], p.beta, dps=60)


# ---------------------------------------------------------------- parameter types

def test_params_validate():
    with pytest.raises(SaalschutzViolation):
        C.Theta4F3Params((1, 1, 1), (1, 1, 1))
    with pytest.raises(InvalidParameter):
        C.Theta4F3Params((-1, 1, 1), (1, 1, 0))
    with pytest.raises(InvalidParameter):
        C.Theta4F3Params((1, 1), (1, 1, 1))
    with pytest.raises(SaalschutzViolation):
        C.Omega5F4Params((1, 1, 1, 1), (1, 1, 1, 1))
    with pytest.raises(InvalidParameter):
        C.Omega5F4Params((1, 0, 1, 1), (1, 1, 1, 0))


# ---------------------------------------------------------------- closed forms

def test_saalschutz_examples():
    assert C.saalschutz_3f2(0, 1, 1, 1.5, 1.5) == 1
    assert C.saalschutz_3f2(1, 1, 1, 1.5, 1.5) == pytest.approx(1 / 9, rel=1e-15)
    # two-term direct sum: 1 - 2*1/(1.5*1.5)
    assert float(Fraction(1) - Fraction(2) / Fraction(9, 4)) == pytest.approx(1 / 9, rel=1e-15)
    assert C.saalschutz_3f2(5, 1.5, 1, 1, 2.5) == 0.0
    with pytest.raises(SaalschutzViolation):
        C.saalschutz_3f2(2, 1, 1, 1, 1)
    with pytest.raises(DenominatorPole):
        C.saalschutz_3f2(3, -2.5, 1, -1, 0.5)


def test_saalschutz_matches_mpmath(rng):
    for _ in range(100):
        k = int(rng.integers(0, 31))
        # dyadic draws keep 1 + a1 + a2 = b1 + b2 exact in binary
        a1, a2 = dyadic(rng, 0.1, 3, 2)
        b1 = dyadic(rng, 0.1, 3)
        b2 = 1 + a1 + a2 - b1
        if b2 <= 0.05:
            continue
        ref = oracles.terminating(k, [oracles.mpf(a1) + k, a2], [b1, b2])
        assert oracles.rel(C.saalschutz_3f2(k, a1, a2, b1, b2), ref) < 1e-12


def test_chu_vandermonde(rng):
    for _ in range(100):
        n = int(rng.integers(0, 31))
        a, c = rng.uniform(-3, 3), rng.uniform(0.1, 4)
        ref = oracles.terminating(n, [a], [c])
        assert abs(C.chu_vandermonde(n, a, c) - float(ref)) <= 1e-12 * max(1.0, abs(float(ref)))


# ---------------------------------------------------------------- theta / omega

def test_theta_examples():
    p = C.Theta4F3Params((1, 1, 1), (4 / 3, 4 / 3, 4 / 3), 1)
    assert C.theta(p) == pytest.approx(5 / 32, rel=1e-14)
    p = C.Theta4F3Params((1, 1, 1), (4 / 3, 4 / 3, 4 / 3), 2)
    assert C.theta(p) == pytest.approx(C.whipple_decomposition(p), rel=1e-10)


def test_theta_reduces_to_chu_vandermonde():
    a1, b2 = 0.7, 3.4
    a2 = a3 = 1.25
    # alpha2 = beta3, alpha3 = beta1, Saalschuetz fixes beta2 = 1 + a1
    for n in range(1, 12):
        p = C.Theta4F3Params((a1, a2, a3), (a3, 1 + a1, a2), n)
        ref = C.chu_vandermonde(n, n + a1, 1 + a1)
        assert C.theta(p) == pytest.approx(ref, rel=1e-12, abs=1e-14)
    _ = b2


def test_theta_omega_match_mpmath(rng):
    for _ in range(40):
        n = int(rng.integers(1, 30))
        p = random_theta_params(rng, n)
        ref = _theta_ref(p)
        scale = max(1.0, abs(float(ref)))
        assert abs(C.theta(p) - float(ref)) <= 1e-10 * scale * (1 + n)
        q = random_omega_params(rng, n)
        ref = _omega_ref(q)
        assert abs(C.omega(q) - float(ref)) <= 1e-10 * max(1.0, abs(float(ref))) * (1 + n)


def test_omega_examples(rng):
    al, be = (0.5, 1.2, 0.7, 1.1), (1.3, 0.9, 1.1, 1.2)
    p = C.Omega5F4Params(al, be, 1)
    assert C.omega(p) == pytest.approx(1 - 1.5 * 1.2 * 0.7 * 1.1 / (1.3 * 0.9 * 1.1 * 1.2), rel=1e-14)
    # a4 = b4 cancels down to a Theta
    for n in (1, 4, 9):
        om = C.Omega5F4Params((0.5, 1.2, 0.7, 1.8), (1.3, 0.9, 1.2, 1.8), n)
        th = C.Theta4F3Params((0.5, 1.2, 0.7), (1.3, 0.9, 1.2), n)
        assert C.omega(om) == pytest.approx(C.theta(th), rel=1e-12, abs=1e-15)
    q = random_omega_params(rng, 3)
    assert C.omega(q) == pytest.approx(C.fields_wimp_decomposition(q), rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------- criteria

def test_theta_criteria_examples():
    r = C.check_theta_criteria(C.Theta4F3Params((1, 0.5, 1), (1.25, 1.25, 1)))
    assert r.satisfied and "A1" in r.which
    # the beta3 clause 1 <= 1.05 <= 1 fails, so the A4 replacement cannot help;
    # and rightly so, since Theta_1 = 1 - 1/(0.9 * 1.05^2) is negative
    p = C.Theta4F3Params((0, 1, 1), (0.9, 1.05, 1.05))
    r = C.check_theta_criteria(p)
    assert not r.satisfied and r.failed_clauses["A1"] == ("b3_A1",)
    assert C.theta(p) == pytest.approx(1 - 1 / (0.9 * 1.05 ** 2), rel=1e-13) and C.theta(p) < 0
    # nudging beta3 down to 1 + alpha1 restores A1-with-A4
    r = C.check_theta_criteria(C.Theta4F3Params((0, 1, 1), (1.0, 1.0, 1.0)))
    assert "A4_ALT" in r.which
    r = C.check_theta_criteria(C.Theta4F3Params((1, 1, 1), (4 / 3, 4 / 3, 4 / 3)))
    assert "A2" in r.which


def test_theta_criteria_negative_and_modes():
    p = C.Theta4F3Params((2.5, 2, 2), (0.5, 0.5, 6.5), 4)
    r = C.check_theta_criteria(p)
    assert not r.satisfied and r.which == () and r.failed_clauses
    with pytest.raises(InvalidParameter):
        C.check_theta_criteria(p, mode="sometimes")


def test_a42_only_in_fixed_n_mode():
    # beta3 = 1.9 meets the (A1) band [1, 2]; min(b1, b2) = 2.3 sits in the m = 2 band [1.5, 2.5]
    p = C.Theta4F3Params((1, 1, 3.5), (2.3, 2.3, 1.9), 5)
    assert not C.check_theta_criteria(p).satisfied
    r = C.check_theta_criteria(p, mode="fixed_n")
    assert "A42_ALT(2)" in r.which
    assert C.theta(p) >= 0
    assert float(_theta_ref(p)) >= 0
    assert "A42_ALT(2)" not in C.check_theta_criteria(C.Theta4F3Params(p.alpha, p.beta, 2), mode="fixed_n").which


# The alternate underlined clause does not combine with the (A2)/(C2) bases:
# these points meet the clauses as printed yet the series is negative.
A2_ALT_COUNTER = ((-0.06748092174530029, 1.1925437450408936, 1.614165186882019),
                  (0.9404703378677368, 1.215126872062683, 1.5836308002471924))
C2_ALT_COUNTER = ((1.483905090166262, 0.45898268697113936, 1.197535859993444, 0.6655221344006687),
                  (1.006878021747106, 0.39936357801889055, 1.9636353795657033))


def test_alternate_clause_rejected_with_a2_base():
    alpha, beta = A2_ALT_COUNTER
    c = C._theta_clauses(*alpha, *beta)
    assert c["b3_A2"] and c["product"] and c["A4"] and not c["b3_A1"] and not c["underlined"]
    p = C.Theta4F3Params(alpha, beta, 3)
    assert not C.check_theta_criteria(p).satisfied
    assert float(_theta_ref(p)) == pytest.approx(-1.0044e-4, rel=1e-3)
    assert C.theta(p) == pytest.approx(float(_theta_ref(p)), rel=1e-10)


def test_alternate_clause_rejected_with_c2_base():
    alpha, beta = C2_ALT_COUNTER
    beta = beta + (1 + sum(alpha) - sum(beta),)
    c = C._omega_clauses(*alpha, *beta)
    assert c["C2_cap"] and c["C2_sum"] and c["C2_product"] and c["A4"] and not c["underlined"]
    p = C.Omega5F4Params(alpha, beta, 8)
    assert not C.check_omega_criteria(p).satisfied
    assert float(_omega_ref(p)) == pytest.approx(-1.8453e-3, rel=1e-3)
    assert C.omega(p) == pytest.approx(float(_omega_ref(p)), rel=1e-10)


def test_report_invariant(rng):
    for _ in range(200):
        r = C.check_theta_criteria(random_theta_params(rng))
        assert r.satisfied == bool(r.which)
        q = C.check_omega_criteria(random_omega_params(rng))
        assert q.satisfied == bool(q.which)


def test_omega_criteria_quadrilateral_case():
    a = (0.6, 1.0)
    q = R.quadrilateral_vertices(a, "S_A5A6B6B5")
    b = tuple(0.5 * (np.array(q[0]) + np.array(q[3])))
    nu = G.nu_for_saalschutz(a, b)
    assert nu + 0.5 == pytest.approx(0.5 * a[0] + 0.5 * a[1])
    p = C.Omega5F4Params((2 * nu, nu + 1, a[0], a[1]), (nu + 0.5,) + b, 1)
    assert "C1" in C.check_omega_criteria(p).which


def test_omega_criteria_reduction_and_negative():
    th = C.Theta4F3Params((1, 0.5, 1), (1.25, 1.25, 1))
    om = C.Omega5F4Params(th.alpha + (0.8,), th.beta + (0.8,))
    assert C.check_theta_criteria(th).satisfied and C.check_omega_criteria(om).satisfied
    bad = C.Omega5F4Params((2.5, 2, 2, 2), (0.3, 0.3, 0.4, 8.5))
    r = C.check_omega_criteria(bad)
    assert not r.satisfied and set(r.failed_clauses) == {"C1", "C2"}


@pytest.mark.parametrize("kind", ["theta", "omega"])
def test_criteria_soundness_sample(kind, rng):
    """Smaller-sample version of the soundness acceptance check, against mpmath."""
    for _ in range(15):
        if kind == "theta":
            p = random_passing_theta(rng, 1)
        else:
            p = random_passing_omega(rng, 1)
        for n in (1, 2, 5, 13, 40):
            q = type(p)(p.alpha, p.beta, n)
            ref = _theta_ref(q) if kind == "theta" else _omega_ref(q)
            assert float(ref) >= -1e-30
            val = C.theta(q) if kind == "theta" else C.omega(q)
            assert val >= -1e-10 * max(1.0, abs(val))


# ---------------------------------------------------------------- decompositions

def test_whipple_n1_closed_form():
    a1, a2, a3 = 0.4, 1.1, 0.9
    b1, b2 = 1.3, 1.2
    b3 = 1 + a1 + a2 + a3 - b1 - b2
    p = C.Theta4F3Params((a1, a2, a3), (b1, b2, b3), 1)
    d = 1 + a1 + a2 - b3
    expected = ((1 + a1 - b3) * (b3 - a2) / d + (b1 - a3) * (b2 - a3) * (1 + a1) * a2 / (d * b1 * b2)) / b3
    assert C.whipple_decomposition(p) == pytest.approx(expected, rel=1e-13)
    assert C.theta(p) == pytest.approx(expected, rel=1e-13)


def test_whipple_single_term_when_a3_is_b1():
    a1, a2, a3 = 0.4, 1.1, 0.9
    b2 = 1.7
    b3 = 1 + a1 + a2 - b2
    for n in (1, 3, 7):
        p = C.Theta4F3Params((a1, a2, a3), (a3, b2, b3), n)
        ref = (oracles.mp.rf(1 + a1 - b3, n) * oracles.mp.rf(b3 - a2, n)
               / (oracles.mp.rf(b3, n) * oracles.mp.rf(1 + a1 + a2 - b3, n)))
        assert C.whipple_decomposition(p) == pytest.approx(float(ref), rel=1e-12, abs=1e-15)


def test_decompositions_match(rng):
    done = 0
    while done < 25:
        n = int(rng.integers(1, 21))
        p = random_theta_params(rng, n)
        q = random_omega_params(rng, n)
        try:
            w = C.whipple_decomposition(p)
            t1 = C.fields_wimp_decomposition(q)
            g3 = C.fields_wimp_decomposition(q, variant="G3")
        except DenominatorPole:
            continue
        th, om = _theta_ref(p), _omega_ref(q)
        assert abs(w - float(th)) <= 1e-10 * max(1.0, abs(float(th)))
        assert abs(t1 - float(om)) <= 1e-10 * max(1.0, abs(float(om)))
        assert abs(g3 - float(om)) <= 1e-10 * max(1.0, abs(float(om)))
        done += 1


def test_fields_wimp_options():
    q = C.Omega5F4Params((0.5, 1.2, 0.7, 1.1), (1.3, 0.9, 1.1, 1.2), 1)
    ref = 1 - 1.5 * 1.2 * 0.7 * 1.1 / (1.3 * 0.9 * 1.1 * 1.2)
    assert C.fields_wimp_decomposition(q) == pytest.approx(ref, rel=1e-13)
    # any admissible delta works once sigma follows it
    assert C.fields_wimp_decomposition(q, delta=0.37) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(SaalschutzViolation):
        C.fields_wimp_decomposition(q, delta=0.37, sigma=0.2)
    with pytest.raises(InvalidParameter):
        C.fields_wimp_decomposition(q, variant="X")


def test_whipple_pole():
    # b3 = 1 + a1 + a2 makes (k + a1 + a2 - b3)_k vanish at k = 1
    p = C.Theta4F3Params((0.5, 1.0, 1.0), (0.5, 0.5, 2.5), 2)
    with pytest.raises(DenominatorPole):
        C.whipple_decomposition(p)


# ---------------------------------------------------------------- product inequality

def test_lemma_h_examples():
    assert C.lemma_h_check((1, 1.5, 2), (2, 1, 1.5))
    assert C.lemma_h_check((1, 1.5, 2), (1.5, 1.5, 1.5))
    assert 1.5 ** 3 == 3.375
    m, _ = C.lemma_h_grid_minimum((1, 1.5, 2))
    assert m >= 3 * (1 - 1e-12)
    with pytest.raises(PreconditionViolation):
        C.lemma_h_check((2, 1, 1.5), (1.5, 1.5, 1.5))
    with pytest.raises(PreconditionViolation):
        C.lemma_h_check((1, 1.5, 2), (0.5, 2, 2))
    with pytest.raises(PreconditionViolation):
        C.lemma_h_check((1, 1.5, 2), (1.5, 1.5, 1.6))


def test_lemma_h_random_against_scipy(rng):
    from scipy.optimize import minimize

    for _ in range(10):
        al = np.sort(rng.uniform(0.1, 3.0, 3))
        s = al.sum()
        cons = [{"type": "ineq", "fun": lambda x: x[0] + x[1] - al[0] - al[1]},
                {"type": "ineq", "fun": lambda x: al[1] + al[2] - x[0] - x[1]}]
        best = min(minimize(lambda x: x[0] * x[1] * (s - x[0] - x[1]), x0, bounds=[(al[0], al[2])] * 2,
                            constraints=cons, method="SLSQP").fun
                   for x0 in rng.uniform(al[0], al[2], (6, 2)))
        assert best >= math.prod(al) * (1 - 1e-9)
        assert C.lemma_h_grid_minimum(al)[0] >= math.prod(al) * (1 - 1e-12)
