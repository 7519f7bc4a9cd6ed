import mpmath as mp
import numpy as np
import pytest
from scipy import special

import oracles
from hyperpos import regions as R
from hyperpos.certify import Theorem, Verdict, certify, numeric_sign_scan, transference_check
from hyperpos.errors import InvalidParameter
from hyperpos.verify import random_point


# ---------------------------------------------------------------- ladder

@pytest.mark.parametrize("a,b,verdict,theorem", [
    ((1, 1), (1, 1.5, 2), Verdict.NONNEG_WITH_ZEROS, Theorem.COR2),
    ((1, 1), (2, 1, 1.5), Verdict.NONNEG_WITH_ZEROS, Theorem.COR2),
    ((1, 1), (2, 2, 2), Verdict.STRICT_POSITIVE, Theorem.THM2),
    ((1, 1), (1, 1, 1), Verdict.SIGN_CHANGE, Theorem.PROP2_NECESSITY),
    ((1, 2), (0.9, 5, 5), Verdict.SIGN_CHANGE, Theorem.PROP2_NECESSITY),
    ((0.5, 1), (3, 3, 3), Verdict.STRICT_POSITIVE, Theorem.THM4),
    ((1, 1.4), (1.5, 1.7, 1.8), Verdict.STRICT_POSITIVE, Theorem.THM4),
])
def test_certify_examples(a, b, verdict, theorem):
    c = certify(a, b)
    assert c.verdict is verdict and c.theorem is theorem


def test_half_one_is_in_m1_and_every_branch_is_noted():
    # a = (1/2, 1) meets (M1), so the Gamma+(A u B) rung fires first; the
    # Gamma+(A) and Gamma+(B) rungs hold as well and are recorded
    assert R.in_m1((0.5, 1)) and R.in_lambda((0.5, 1))
    c = certify((0.5, 1), (3, 3, 3))
    text = " ".join(c.notes)
    assert "Gamma+(A u B)" in text and "Gamma+(A)" in text and "Gamma+(B)" in text


def test_swap_is_noted():
    c = certify((2, 1), (4, 4, 4))
    assert c.a == (1.0, 2.0)
    assert any("swapped" in n for n in c.notes)
    assert c.verdict is certify((1, 2), (4, 4, 4)).verdict


def test_vertex_verdicts():
    for a in [(1, 1), (0.7, 1.1), (0.5, 1.0), (1, 2)]:
        for v in oracles.perms(R.xi(a)):
            c = certify(a, v)
            assert c.verdict is Verdict.NONNEG_WITH_ZEROS
        if a[0] < a[1]:
            for v in oracles.perms(R.eta(a)):
                c = certify(a, v)
                assert c.verdict is Verdict.NONNEG_WITH_ZEROS and c.theorem is Theorem.THM3


def test_vertex_outside_lambda_is_indeterminate():
    a = (0.25, 0.9)
    assert not R.in_lambda(a)
    c = certify(a, R.xi(a))
    assert c.verdict is Verdict.INDETERMINATE and c.theorem is Theorem.NONE


def test_theorem_none_iff_indeterminate(rng):
    seen = set()
    for _ in range(3000):
        a, b = random_point(rng)
        c = certify(a, b)
        seen.add(c.verdict)
        assert (c.verdict is Verdict.INDETERMINATE) == (c.theorem is Theorem.NONE)
        if c.verdict is Verdict.SIGN_CHANGE:
            assert c.theorem is Theorem.PROP2_NECESSITY
            assert R.necessity(a, b) is not R.Necessity.OK
    assert seen == set(Verdict) - {Verdict.NONNEG_WITH_ZEROS}


def test_quadrilateral_certificate():
    a = (1, 2)
    b = (2.625, 2.625, 1.25)
    assert R.in_lambda(a) and R.in_sigma(a)
    c = certify(a, b, evidence_n=60)
    assert c.verdict is Verdict.STRICT_POSITIVE
    assert c.theorem in (Theorem.PROP_QUAD_1, Theorem.PROP_QUAD_2, Theorem.THM4)
    assert any("S_A5A6B6B5" in n for n in c.notes)
    assert c.evidence is not None and c.evidence.min_value >= -1e-10


def test_evidence_on_hexagon():
    c = certify((1, 1), (1.5, 1.5, 1.5), evidence_n=200)
    assert c.verdict is Verdict.STRICT_POSITIVE
    assert c.evidence.min_value >= -1e-10 and len(c.evidence.values) == 201
    assert certify((1, 1), (3, 3, 3), evidence_n=20).evidence is None


def test_monotone_verdict(rng):
    count = 0
    while count < 150:
        a, b = random_point(rng)
        if certify(a, b).verdict is not Verdict.STRICT_POSITIVE:
            continue
        count += 1
        for j in range(3):
            for t in (0.1, 1.0, 10.0):
                bb = list(b)
                bb[j] += t
                assert certify(a, bb).verdict is Verdict.STRICT_POSITIVE


# ---------------------------------------------------------------- scans

def test_scan_sign_change_example():
    s = numeric_sign_scan((1, 1), (1, 1, 1), 40.0)
    assert s.first_sign_change is not None and s.min_value < 0
    # independent check: mpmath sees opposite signs 1e-7 either side
    x = s.first_sign_change
    assert oracles.phi((1, 1), (1, 1, 1), x - 1e-7) * oracles.phi((1, 1), (1, 1, 1), x + 1e-7) < 0


def test_scan_positive_example():
    s = numeric_sign_scan((1, 1), (2, 2, 2), 40.0)
    assert s.first_sign_change is None and s.min_value > 0


def test_scan_touching_zeros_of_bessel_square():
    # a = (1/2, 1), b = (1, 1, 1) collapses Phi to J_0(x)^2
    s = numeric_sign_scan((0.5, 1), (1, 1, 1), 40.0)
    assert s.first_sign_change is None
    assert abs(s.min_value) <= 1e-12
    zeros = special.jn_zeros(0, 14)
    assert np.min(np.abs(zeros - s.argmin_x)) < 1e-4
    first = numeric_sign_scan((0.5, 1), (1, 1, 1), 3.0)
    assert first.argmin_x == pytest.approx(2.404825557695773, abs=1e-5)
    assert float(mp.besselj(0, 2.404825557695773)) == pytest.approx(0, abs=1e-15)


def test_scan_validation():
    with pytest.raises(InvalidParameter):
        numeric_sign_scan((1, 1), (2, 2, 2), -1.0)


def test_strict_sample_scans_positive(rng):
    from hyperpos.verify import random_strict_point

    for _ in range(10):
        a, b, _ = random_strict_point(rng)
        assert numeric_sign_scan(a, b, 40.0).min_value > 0


def test_vertex_scans_touch_zero():
    for a in [(1, 1), (0.7, 1.1)]:
        for v in oracles.perms(R.xi(a))[:3]:
            s = numeric_sign_scan(a, v, 40.0)
            assert s.min_value >= -1e-12 and s.min_value <= 1e-9 and s.first_sign_change is None


# ---------------------------------------------------------------- transference

def test_transference_examples():
    r = transference_check((1, 1), (2, 2, 2), 0, 1.0, 5.0)
    assert r.residual <= 1e-8
    r = transference_check((1, 1), (2, 2, 2), 0, 0.5, 5.0)
    assert r.residual <= 1e-6
    r = transference_check((1, 1), (2, 2, 2), 0, 0.5, 5.0, kind="lower_a")
    assert r.residual <= 1e-6


def test_transference_lhs_against_mpmath():
    r = transference_check((0.8, 1.3), (1.7, 2.1, 2.6), 2, 0.5, 10.0)
    assert r.lhs == pytest.approx(float(oracles.phi((0.8, 1.3), (1.7, 2.1, 3.1), 10.0)), rel=1e-12)
    assert r.scaled_residual <= 1e-6


def test_transference_rhs_against_mpmath_quadrature():
    a, b, s, x = (1.0, 1.0), (2.0, 2.0, 2.0), 0.5, 2.0
    r = transference_check(a, b, 1, s, x)
    with mp.workdps(30):
        f = lambda t: oracles.phi(a, b, x * t, dps=30) * (1 - t * t) ** (s - 1) * t ** (2 * b[1] - 1)
        ref = 2 / mp.beta(b[1], s) * mp.quad(f, [0, 0.5, 1])
    assert r.rhs == pytest.approx(float(ref), rel=1e-8)


def test_transference_validation():
    with pytest.raises(InvalidParameter):
        transference_check((1, 1), (2, 2, 2), 3, 0.5, 1.0)
    with pytest.raises(InvalidParameter):
        transference_check((1, 1), (2, 2, 2), 0, 1.5, 1.0, kind="lower_a")
    with pytest.raises(InvalidParameter):
        transference_check((1, 1), (2, 2, 2), 0, 0.5, 1.0, kind="sideways")
    with pytest.raises(InvalidParameter):
        transference_check((1, 1), (2, 2, 2), 0, 0.0, 1.0)
