import mpmath as mp
import numpy as np
import pytest

import oracles
from hyperpos import gasper as G
from hyperpos import regions as R
from hyperpos.certify import Verdict, certify
from hyperpos.errors import InvalidNu, InvalidParameter, OffPlane
from hyperpos.hyperfn import phi_2f3


def _plane_point(rng, a):
    """A point of the bottom hexagon (on the plane, inside the A polyhedron)."""
    verts = np.array(oracles.perms(R.xi(a)))
    return tuple(float(v) for v in rng.dirichlet(np.ones(len(verts))) @ verts)


def _lambda_pair(rng):
    while True:
        a = tuple(float(v) for v in np.sort(rng.uniform(0.3, 2.5, 2)))
        if R.in_lambda(a):
            return a


# ---------------------------------------------------------------- nu

def test_nu_examples():
    assert G.nu_for_saalschutz((1, 1), (1.5, 1.5, 1.5)) == pytest.approx(0.5)
    assert G.nu_for_saalschutz((1, 2), (2, 2, 1.5)) == pytest.approx(0.5)
    with pytest.raises(InvalidNu):
        G.nu_for_saalschutz((1, 1), (0.5, 0.5, 0.5))


def test_nu_interpolates_a():
    a = (0.7, 1.3)
    q = R.quadrilateral_vertices(a, "S_A5A6B6B5")
    for lam in (0.0, 0.25, 0.5, 1.0):
        b = tuple((1 - lam) * np.array(q[0]) + lam * np.array(q[3]))
        assert G.nu_for_saalschutz(a, b) + 0.5 == pytest.approx((1 - lam) * a[0] + lam * a[1], abs=1e-14)


# ---------------------------------------------------------------- coefficients

def test_L_examples():
    assert G.coefficient_L(0, (1, 1), (1.5, 1.5, 1.5)) == 1.0
    assert G.coefficient_L(1, (1, 1), (1.5, 1.5, 1.5)) == pytest.approx(1 / 9, rel=1e-14)
    with pytest.raises(OffPlane):
        G.coefficient_L(1, (1, 1), (2, 2, 2))


def test_L_vanishes_at_vertices():
    for a in [(1, 1), (0.7, 1.1), (0.5, 1.0), (2, 3)]:
        for v in oracles.perms(R.xi(a)):
            vals = G.min_coefficient_scan(a, v, 50).values
            assert vals[0] == 1.0
            assert max(abs(c) for c in vals[1:]) <= 1e-12


def test_L_and_K_match_mpmath(rng):
    for _ in range(20):
        a = _lambda_pair(rng)
        b = _plane_point(rng, a)
        n = int(rng.integers(1, 40))
        ref = oracles.terminating(n, [2 * oracles.mpf(a[0]) - 1 + n, oracles.mpf(a[0]) + 0.5, a[1]], b)
        assert abs(G.coefficient_L(n, a, b) - float(ref)) <= 1e-11 * max(1.0, abs(float(ref)))
        bb = tuple(float(v) for v in rng.uniform(0.5, 3.0, 3))
        nu = float(rng.uniform(0.0, 2.0))
        ref = oracles.terminating(n, [2 * oracles.mpf(nu) + n, oracles.mpf(nu) + 1, a[0], a[1]],
                                  [oracles.mpf(nu) + 0.5, *bb])
        assert abs(G.coefficient_K(n, nu, a, bb) - float(ref)) <= 1e-11 * max(1.0, abs(float(ref)))


def test_K_examples():
    a, b, nu = (0.8, 1.2), (1.4, 1.9, 2.2), 0.35
    assert G.coefficient_K(0, nu, a, b) == 1.0
    expected = 1 - (1 + 2 * nu) * (nu + 1) * a[0] * a[1] / ((nu + 0.5) * b[0] * b[1] * b[2])
    assert G.coefficient_K(1, nu, a, b) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(InvalidNu):
        G.coefficient_K(1, -0.6, a, b)


def test_K_reduces_to_L_when_nu_is_a1_minus_half():
    a = (0.9, 1.3)
    b = _plane_point(np.random.default_rng(3), a)
    nu = G.nu_for_saalschutz(a, b)
    assert nu == pytest.approx(a[0] - 0.5)
    for n in range(1, 15):
        assert G.coefficient_K(n, nu, a, b) == pytest.approx(G.coefficient_L(n, a, b), rel=1e-10, abs=1e-13)


# ---------------------------------------------------------------- reconstruction

def test_weight_at_zero():
    # (2n + 2nu)/(n + 2nu) is 2nu/2nu = 1 at n = 0, and stays 1 in the nu -> 0 limit
    assert G._weight(0, 0.7) == 1.0
    assert G._weight(0, 0.0) == 1.0
    assert G._weight(3, 0.0) == pytest.approx(2.0)


def test_vertex_collapse_single_term():
    a = (1, 1)
    b = (1, 1.5, 2)
    for x in (0.5, 3.0, 7.5):
        s = G.expansion_partial_sum(a, b, x, 0)
        # Phi = Gamma(a1 + 1/2)^2 (x/2)^(1 - 2a1) J_{a1 - 1/2}(x)^2
        j = oracles.besselj(0.5, x)
        ref = mp.gamma(1.5) ** 2 * (mp.mpf(x) / 2) ** -1 * j ** 2
        assert s.value == pytest.approx(float(ref), rel=1e-12)
        assert s.value == pytest.approx(phi_2f3(a, b, x).value, rel=1e-12)


@pytest.mark.parametrize("mode", ["L", "K"])
def test_reconstruction(mode, rng):
    for _ in range(8):
        a = _lambda_pair(rng)
        if mode == "L":
            b = _plane_point(rng, a)
        else:
            b = tuple(float(v) for v in np.array(_plane_point(rng, a)) + rng.uniform(0, 1.0, 3))
        for x in rng.uniform(0.05, 10.0, 4):
            s = G.expansion_partial_sum(a, b, x, 60, mode=mode)
            ref = float(oracles.phi(a, b, x))
            assert abs(s.value - ref) <= s.abs_error_estimate + 1e-15 * abs(ref)
            assert s.abs_error_estimate <= 1e-8 * max(1.0, abs(ref))


def test_reconstruction_with_arg_scale():
    a, b = (0.8, 1.1), (1.6, 1.9, 2.4)
    for x in (1.0, 4.0, 9.0):
        s = G.expansion_partial_sum(a, b, x, 60, mode="K", arg_scale=0.5)
        assert s.value == pytest.approx(float(oracles.phi(a, b, x / 2)), rel=1e-10)


def test_partial_sum_validation():
    with pytest.raises(InvalidParameter):
        G.expansion_partial_sum((1, 1), (1.5, 1.5, 1.5), 0.0, 5)
    with pytest.raises(InvalidParameter):
        G.expansion_partial_sum((1, 1), (1.5, 1.5, 1.5), 1.0, -1)
    with pytest.raises(OffPlane):
        G.expansion_partial_sum((1, 1), (2, 2, 2), 1.0, 5, mode="L")


# ---------------------------------------------------------------- scans

def test_scan_examples():
    s = G.min_coefficient_scan((1, 1), (1.5, 1.5, 1.5), 200)
    assert s.kind is G.ExpansionMode.ON_PLANE_L and len(s.values) == 201
    assert s.min_value >= -1e-10
    s = G.min_coefficient_scan((1, 1), (1, 1.5, 2), 20)
    assert s.min_value == pytest.approx(0, abs=1e-14) and s.argmin >= 1
    s = G.min_coefficient_scan((1, 1), (1, 1, 1.2), 20, mode="K")
    assert s.min_value < 0


def test_hexagon_coefficients_nonnegative(rng):
    for _ in range(10):
        a = _lambda_pair(rng)
        b = _plane_point(rng, a)
        assert G.min_coefficient_scan(a, b, 200).min_value >= -1e-10


def test_interlacing_strictness(rng):
    from hyperpos.hyperfn import phi_2f3_grid

    xs = np.linspace(0.04, 40, 1000)
    for _ in range(4):
        a = _lambda_pair(rng)
        b = _plane_point(rng, a)
        s = G.min_coefficient_scan(a, b, 60)
        if s.min_value >= 0 and max(s.values[1:]) > 1e-6:
            assert np.min(phi_2f3_grid(a, b, xs)[0]) > 0
            assert certify(a, b).verdict is Verdict.STRICT_POSITIVE
