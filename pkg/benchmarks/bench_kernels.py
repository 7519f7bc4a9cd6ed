"""Time the series kernels with numba and with the numpy fallback.

Each backend runs in its own interpreter, because the choice is fixed at
import time by HYPERPOS_JIT.  Usage:  python benchmarks/bench_kernels.py
"""
import json
import os
import subprocess
import sys

CASES = r"""
import json, time
import numpy as np
from hyperpos import _accel
from hyperpos.hyperfn import phi_2f3, phi_2f3_grid
from hyperpos.certify import numeric_sign_scan

def best(f, repeat=3):
    f()                                      # warm-up, includes compilation
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        f()
        ts.append(time.perf_counter() - t)
    return min(ts)

a, b = (0.8, 1.3), (1.6, 2.2, 2.9)
out = {"jit": _accel.USE_NUMBA}
out["grid 4000 pts, x <= 10 (double)"] = best(lambda: phi_2f3_grid(a, b, np.linspace(0.01, 10, 4000)))
out["grid 4000 pts, x <= 20 (dd)"] = best(lambda: phi_2f3_grid(a, b, np.linspace(10, 20, 4000)))
out["2000 scalar calls, x <= 10"] = best(lambda: [phi_2f3(a, b, x) for x in np.linspace(0.01, 10, 2000)])
out["sign scan to 40, 4000 pts"] = best(lambda: numeric_sign_scan(a, b, 40.0, 4000))
print(json.dumps(out))
"""


def run(jit: str) -> dict:
    env = dict(os.environ, HYPERPOS_JIT=jit)
    res = subprocess.run([sys.executable, "-c", CASES], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    fast, slow = run("1"), run("0")
    width = max(len(k) for k in fast if k != "jit")
    print(f"{'case':<{width}}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speed-up':>8}")
    for k in fast:
        if k == "jit":
            continue
        print(f"{k:<{width}}  {fast[k]:10.4f}  {slow[k]:10.4f}  {slow[k] / fast[k]:8.1f}x")


if __name__ == "__main__":
    main()
