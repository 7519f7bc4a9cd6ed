"""Hot loops: double and double-double series summation.

Every primitive here is branch free so that, with the numba backend switched
off, the same functions operate elementwise on numpy arrays.  The batch entry
points pick a ``prange`` loop (numba) or a masked vectorised loop (numpy).
"""
import numpy as np

from ._accel import USE_NUMBA, njit, prange

U_DOUBLE = 2.0 ** -53
U_DD = 2.0 ** -104
_SPLITTER = 134217729.0  # 2**27 + 1


@njit
def two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


@njit
def quick_two_sum(a, b):
    s = a + b
    e = b - (s - a)
    return s, e


@njit
def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


@njit
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@njit
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


@njit
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


@njit
def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul(q1, 0.0 * q1, bh, bl)
    rh, rl = dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = dd_mul(q2, 0.0 * q2, bh, bl)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0 * q3)


@njit
def _series_coeffs(nh, nl, dh, dl, start, count):
    n = np.arange(start, start + count).astype(np.float64)
    zero = np.zeros(count)
    ph = zero + 1.0
    pl = zero
    for i in range(nh.shape[0]):
        sh, sl = two_sum(zero + nh[i], n)
        sh, sl = dd_add(sh, sl, zero + nl[i], zero)
        ph, pl = dd_mul(ph, pl, sh, sl)
    qh = n + 1.0
    ql = zero
    for i in range(dh.shape[0]):
        sh, sl = two_sum(zero + dh[i], n)
        sh, sl = dd_add(sh, sl, zero + dl[i], zero)
        qh, ql = dd_mul(qh, ql, sh, sl)
    return dd_div(ph, pl, qh, ql)


@njit
def _series_coeffs_loop(nh, nl, dh, dl, start, count):
    # same arithmetic one index at a time; avoids the temporaries under numba
    ch = np.empty(count)
    cl = np.empty(count)
    for k in range(count):
        n = float(start + k)
        ph, pl = 1.0, 0.0
        for i in range(nh.shape[0]):
            sh, sl = two_sum(nh[i], n)
            sh, sl = dd_add(sh, sl, nl[i], 0.0)
            ph, pl = dd_mul(ph, pl, sh, sl)
        qh, ql = n + 1.0, 0.0
        for i in range(dh.shape[0]):
            sh, sl = two_sum(dh[i], n)
            sh, sl = dd_add(sh, sl, dl[i], 0.0)
            qh, ql = dd_mul(qh, ql, sh, sl)
        ch[k], cl[k] = dd_div(ph, pl, qh, ql)
    return ch, cl


@njit
def mp_bounds(c, zabs, zneg, log_u, stop):
    """Log-space bookkeeping for one argument of the multiprecision sum.

    Returns (N, log10 max|partial|, log10 rounding bound, log10 truncation
    bound).  For a non-terminating series (stop < 0) an N of at least
    len(c) asks for more coefficients.
    """
    L = c.shape[0]
    lz = np.log10(zabs)
    logs = np.empty(L + 1)
    logs[0] = 0.0
    top = 0
    for k in range(L):
        logs[k + 1] = logs[k] + np.log10(abs(c[k])) + lz
        if logs[k + 1] > logs[top]:
            top = k + 1
    peak = logs[top]
    if stop >= 0:
        N = min(stop, L)
    else:
        N = L + 1
        for k in range(top, L + 1):
            if logs[k] <= peak + log_u - 3.0:
                N = k + 2
                break
        if N >= L:
            return N, 0.0, 0.0, 0.0
    s = 0.0
    sgn = 1.0
    maxpart = 0.0
    sabs = 0.0
    snabs = 0.0
    for k in range(N + 1):
        if k > 0:
            if c[k - 1] < 0.0:
                sgn = -sgn
            if zneg:
                sgn = -sgn
        m = 10.0 ** (logs[k] - peak)
        s += sgn * m
        maxpart = max(maxpart, abs(s))
        sabs += m
        snabs += k * m
    err_log = log_u + peak + np.log10(3.0 * snabs + 2.0 * sabs)
    if stop >= 0:
        trunc_log = -np.inf
    else:
        rho = abs(c[N]) * zabs
        trunc_log = logs[N] + (np.log10(rho / (1.0 - rho)) if rho < 0.5 else np.log10(2.0))
    return N, peak + np.log10(max(maxpart, 1e-300)), err_log, trunc_log


def _split_params(params):
    hi = np.array([u if isinstance(u, float) else u[0] for u in params], dtype=np.float64)
    lo = np.array([0.0 if isinstance(u, float) else u[1] for u in params], dtype=np.float64)
    return hi, lo


def series_coeffs(num, den, start, count):
    """Term ratios c_n = prod(u+n) / ((n+1) prod(v+n)) in double-double.

    Vectorised over n; the ratio of consecutive series terms at argument z
    is ``c_n * z``.  A parameter may be a float or an exact (hi, lo) pair.
    """
    kernel = _series_coeffs_loop if USE_NUMBA else _series_coeffs
    return kernel(*_split_params(num), *_split_params(den), start, count)


# Scalar kernels.  Each returns
# (value_hi, value_lo, terms, sum|t|, sum n|t|, max|partial|, |last term|, converged).

@njit
def _sum_double(c, z, tol, u):
    t = 1.0
    s = 1.0
    comp = 0.0
    maxpart = 1.0
    sabs = 1.0
    snabs = 0.0
    small = 0
    n = 0
    done = False
    N = c.shape[0]
    while n < N:
        r = c[n] * z
        t = t * r
        n += 1
        ss = s + t
        if abs(s) >= abs(t):
            comp += (s - ss) + t
        else:
            comp += (t - ss) + s
        s = ss
        at = abs(t)
        sabs += at
        snabs += n * at
        v = abs(s + comp)
        if v > maxpart:
            maxpart = v
        if t == 0.0:
            done = True
            break
        if abs(r) < 1.0 and at <= max(tol * v, 1e-3 * u * maxpart):
            small += 1
            if small >= 3:
                done = True
                break
        else:
            small = 0
    return s + comp, 0.0, n, sabs, snabs, maxpart, abs(t), done


@njit
def _sum_dd(c_hi, c_lo, z_hi, z_lo, tol, u):
    t_hi = 1.0
    t_lo = 0.0
    s_hi = 1.0
    s_lo = 0.0
    maxpart = 1.0
    sabs = 1.0
    snabs = 0.0
    small = 0
    n = 0
    done = False
    N = c_hi.shape[0]
    while n < N:
        r_hi, r_lo = dd_mul(c_hi[n], c_lo[n], z_hi, z_lo)
        t_hi, t_lo = dd_mul(t_hi, t_lo, r_hi, r_lo)
        s_hi, s_lo = dd_add(s_hi, s_lo, t_hi, t_lo)
        n += 1
        at = abs(t_hi)
        sabs += at
        snabs += n * at
        v = abs(s_hi)
        if v > maxpart:
            maxpart = v
        if t_hi == 0.0:
            done = True
            break
        if abs(r_hi) < 1.0 and at <= max(tol * v, 1e-3 * u * maxpart):
            small += 1
            if small >= 3:
                done = True
                break
        else:
            small = 0
    return s_hi, s_lo, n, sabs, snabs, maxpart, abs(t_hi), done


@njit(parallel=True)
def _sum_double_batch(c, z, tol, u, out):
    for i in prange(z.shape[0]):
        r = _sum_double(c, z[i], tol, u)
        out[i, 0] = r[0]
        out[i, 1] = r[1]
        out[i, 2] = r[2]
        out[i, 3] = r[3]
        out[i, 4] = r[4]
        out[i, 5] = r[5]
        out[i, 6] = r[6]
        out[i, 7] = 1.0 if r[7] else 0.0


@njit(parallel=True)
def _sum_dd_batch(c_hi, c_lo, z_hi, z_lo, tol, u, out):
    for i in prange(z_hi.shape[0]):
        r = _sum_dd(c_hi, c_lo, z_hi[i], z_lo[i], tol, u)
        out[i, 0] = r[0]
        out[i, 1] = r[1]
        out[i, 2] = r[2]
        out[i, 3] = r[3]
        out[i, 4] = r[4]
        out[i, 5] = r[5]
        out[i, 6] = r[6]
        out[i, 7] = 1.0 if r[7] else 0.0


def _np_sum(c_hi, c_lo, z_hi, z_lo, tol, u, dd):
    """Masked vectorised summation; same stopping rule as the scalar kernels."""
    M = z_hi.shape[0]
    t_hi = np.ones(M)
    t_lo = np.zeros(M)
    s_hi = np.ones(M)
    s_lo = np.zeros(M)
    maxpart = np.ones(M)
    sabs = np.ones(M)
    snabs = np.zeros(M)
    last = np.ones(M)
    small = np.zeros(M, dtype=np.int64)
    nused = np.zeros(M)
    active = np.ones(M, dtype=bool)
    done = np.zeros(M, dtype=bool)
    for n in range(c_hi.shape[0]):
        if not active.any():
            break
        if dd:
            r_hi, r_lo = dd_mul(c_hi[n], c_lo[n], z_hi, z_lo)
            nt_hi, nt_lo = dd_mul(t_hi, t_lo, r_hi, r_lo)
            ns_hi, ns_lo = dd_add(s_hi, s_lo, nt_hi, nt_lo)
        else:
            # Kahan-style compensation carried in the lo word
            r_hi = c_hi[n] * z_hi
            nt_hi = t_hi * r_hi
            nt_lo = np.zeros(M)
            y = nt_hi - s_lo
            ns_hi = s_hi + y
            ns_lo = (ns_hi - s_hi) - y
        a = active
        t_hi = np.where(a, nt_hi, t_hi)
        t_lo = np.where(a, nt_lo, t_lo)
        s_hi = np.where(a, ns_hi, s_hi)
        s_lo = np.where(a, ns_lo, s_lo)
        nused = np.where(a, n + 1.0, nused)
        at = np.abs(t_hi)
        sabs = np.where(a, sabs + at, sabs)
        snabs = np.where(a, snabs + (n + 1) * at, snabs)
        v = np.abs(s_hi) if dd else np.abs(s_hi - s_lo)
        maxpart = np.where(a, np.maximum(maxpart, v), maxpart)
        last = np.where(a, at, last)
        zero = a & (t_hi == 0.0)
        quiet = a & (np.abs(r_hi) < 1.0) & (at <= np.maximum(tol * v, 1e-3 * u * maxpart))
        small = np.where(a, np.where(quiet, small + 1, 0), small)
        fin = zero | (small >= 3)
        done |= fin
        active &= ~fin
    if not dd:
        s_hi, s_lo = s_hi - s_lo, np.zeros(M)
    return np.column_stack([s_hi, s_lo, nused, sabs, snabs, maxpart, last, done.astype(float)])


def sum_double_batch(c, z, tol, u=U_DOUBLE):
    z = np.ascontiguousarray(z, dtype=np.float64)
    if USE_NUMBA:
        out = np.empty((z.shape[0], 8))
        _sum_double_batch(np.ascontiguousarray(c), z, tol, u, out)
        return out
    return _np_sum(c, None, z, None, tol, u, False)


def sum_dd_batch(c_hi, c_lo, z_hi, z_lo, tol, u=U_DD):
    z_hi = np.ascontiguousarray(z_hi, dtype=np.float64)
    z_lo = np.ascontiguousarray(z_lo, dtype=np.float64)
    if USE_NUMBA:
        out = np.empty((z_hi.shape[0], 8))
        _sum_dd_batch(np.ascontiguousarray(c_hi), np.ascontiguousarray(c_lo), z_hi, z_lo, tol, u, out)
        return out
    return _np_sum(c_hi, c_lo, z_hi, z_lo, tol, u, True)


def sum_double(c, z, tol, u=U_DOUBLE):
    if USE_NUMBA:
        return _sum_double(c, z, tol, u)
    r = _np_sum(c, None, np.array([z]), None, tol, u, False)[0]
    return r[0], r[1], int(r[2]), r[3], r[4], r[5], r[6], bool(r[7])


def sum_dd(c_hi, c_lo, z_hi, z_lo, tol, u=U_DD):
    if USE_NUMBA:
        return _sum_dd(c_hi, c_lo, z_hi, z_lo, tol, u)
    r = _np_sum(c_hi, c_lo, np.array([z_hi]), np.array([z_lo]), tol, u, True)[0]
    return r[0], r[1], int(r[2]), r[3], r[4], r[5], r[6], bool(r[7])
