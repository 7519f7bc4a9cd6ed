"""The numpy fallback and the compiled kernels must agree."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from hyperpos import _accel
from hyperpos import _kernels as K

PROBE = r"""
import json, sys
import numpy as np
from hyperpos import _accel
from hyperpos.hyperfn import phi_2f3, phi_2f3_grid
from hyperpos.certify import numeric_sign_scan
xs = np.linspace(0.05, 40, 400)
vals, errs, tiers = phi_2f3_grid((0.8, 1.3), (1.6, 2.2, 2.9), xs)
sv = phi_2f3((1, 1), (2, 2, 2), 25.0)
rep = numeric_sign_scan((1, 1), (1, 1, 1), 20.0, 800)
json.dump({"jit": _accel.USE_NUMBA, "vals": vals.tolist(), "tiers": tiers.tolist(),
           "scalar": [sv.value, sv.tier], "first": rep.first_sign_change}, sys.stdout)
"""


def _probe(jit):
    env = dict(os.environ, HYPERPOS_JIT=jit)
    out = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba is not installed")
def test_fallback_matches_jit():
    jit, ref = _probe("1"), _probe("0")
    assert jit["jit"] is True and ref["jit"] is False
    assert jit["tiers"] == ref["tiers"]
    np.testing.assert_allclose(jit["vals"], ref["vals"], rtol=1e-13, atol=1e-300)
    assert jit["scalar"][1] == ref["scalar"][1]
    assert jit["scalar"][0] == pytest.approx(ref["scalar"][0], rel=1e-13)
    assert jit["first"] == pytest.approx(ref["first"], abs=1e-8)


def test_numpy_kernel_in_process():
    # drive the fallback directly so it is covered whatever backend is active
    c = np.array([1.0 / (k + 1) ** 2 for k in range(60)])
    z = np.array([-0.5, 0.25, 0.9])
    got = K._np_sum(c, None, z, None, 1e-17, K.U_DOUBLE, False)
    for i, zz in enumerate(z):
        t, s = 1.0, 1.0
        for n in range(60):
            t *= c[n] * zz
            s += t
        assert got[i, 0] == pytest.approx(s, rel=1e-15)
        assert got[i, 7] == 1.0


def test_dd_primitives():
    hi, lo = K.two_prod(np.array([1.0 + 2 ** -30]), np.array([1.0 - 2 ** -30]))
    assert hi[0] + lo[0] == 1.0 - 2 ** -60 or (hi[0], lo[0]) == (1.0, -(2.0 ** -60))
    s, e = K.two_sum(1.0, 2 ** -60)
    assert (s, e) == (1.0, 2 ** -60)


def test_njit_is_identity_when_disabled(monkeypatch):
    monkeypatch.setattr(_accel, "USE_NUMBA", False)

    def f(x):
        return x + 1

    assert _accel.njit(f) is f
    assert _accel.njit(parallel=True)(f) is f


@pytest.mark.parametrize("num,den,z", [
    ((-120.0, 120.5, 0.75, 1.25), (1.5, 2.25, 0.625), [1.0]),
    ((0.8, 1.3), (1.6, 2.2, 2.9), [-900.0, -25.0, -0.5, 3.0]),
    ((1.5,), (2.0, 2.5), [-4000.0]),
])
def test_mp_bounds_kernel_matches_numpy(num, den, z):
    from hyperpos import hyperfn as H

    plan = H._Plan(num, den)
    z = np.array(z)
    log_u = np.full(z.shape[0], -120.0)
    jit = H._mp_bounds_jit(plan, z, log_u)
    ref = H._mp_bounds_numpy(plan, z, log_u)
    np.testing.assert_array_equal(jit[0], ref[0])
    for a, b in zip(jit[1:], ref[1:]):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)
