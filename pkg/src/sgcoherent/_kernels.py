"""Inner loops: Miller recurrence, coherent-state overlaps, RK4 on a chain.

Each kernel has a numba-compiled variant and a numpy variant with the same
signature.  The public wrappers at the bottom dispatch on
:func:`sgcoherent._accel.get_backend`.
"""

import math

import numpy as np
from scipy.special import gammaln

from ._accel import HAVE_NUMBA, get_backend, njit

if HAVE_NUMBA:
    from numba import prange
else:  # pragma: no cover
    prange = range

_BIG = 1.0e250
_RESCALE = 1.0e-250


# --- Miller downward recurrence -------------------------------------------

def _miller_row_py(n_max, x, n_start):
    # x > 0; n_start even and > n_max
    out = np.zeros(n_max + 1)
    j_next = 0.0
    j_cur = 1.0e-30
    norm = 0.0
    for k in range(n_start, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        if k <= n_max:
            out[k] = j_cur
        if k % 2 == 0:
            norm += 2.0 * j_cur
        j_next = j_cur
        j_cur = j_prev
        if abs(j_cur) > _BIG:
            j_cur *= _RESCALE
            j_next *= _RESCALE
            norm *= _RESCALE
            for i in range(k, n_max + 1):
                out[i] *= _RESCALE
    out[0] = j_cur
    norm += j_cur
    for i in range(n_max + 1):
        out[i] /= norm
    return out


_miller_row_nb = njit(cache=True)(_miller_row_py)


# --- coherent-state overlaps -----------------------------------------------

def _coherent_overlap_nb_impl(coeffs, alphas):
    # out[p] = sum_n <alpha_p|n> c_n with <alpha|n> = e^{-|a|^2/2} conj(a)^n / sqrt(n!)
    npts = alphas.shape[0]
    ncoef = coeffs.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    for p in prange(npts):
        a = alphas[p]
        ac = a.real - 1j * a.imag
        amp = math.exp(-0.5 * (a.real * a.real + a.imag * a.imag)) + 0j
        acc = amp * coeffs[0]
        for n in range(1, ncoef):
            amp = amp * ac / math.sqrt(n)
            acc += amp * coeffs[n]
        out[p] = acc
    return out


if HAVE_NUMBA:
    _coherent_overlap_nb = njit(cache=True, parallel=True)(_coherent_overlap_nb_impl)
else:  # pragma: no cover
    _coherent_overlap_nb = _coherent_overlap_nb_impl


def _coherent_overlap_np(coeffs, alphas, chunk=2048):
    # log-magnitude / phase form: no n! overflow for any basis size
    n = np.arange(coeffs.shape[0])
    half_log_fact = 0.5 * gammaln(n + 1.0)
    out = np.empty(alphas.shape[0], dtype=np.complex128)
    for lo in range(0, alphas.shape[0], chunk):
        a = alphas[lo:lo + chunk]
        r = np.abs(a)
        theta = -np.angle(a)
        with np.errstate(divide="ignore"):
            log_r = np.log(r)
        log_mag = np.empty((a.shape[0], n.shape[0]))
        log_mag[:, 0] = -0.5 * r * r
        # n >= 1 only, so log(0) = -inf never meets a zero exponent
        log_mag[:, 1:] = np.outer(log_r, n[1:]) - half_log_fact[1:] - 0.5 * (r * r)[:, None]
        phase = np.outer(theta, n)
        terms = np.exp(log_mag + 1j * phase)
        out[lo:lo + chunk] = terms @ coeffs
    return out


# --- RK4 on the tridiagonal chain ------------------------------------------

def _rk4_chain_nb_impl(c0, coupling, dt, steps):
    # dc_n/dt = 1j * coupling * (c_{n-1} + c_{n+1}), open ends
    n = c0.shape[0]
    c = c0.copy()
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    g = 1j * coupling
    edge = abs(c[n - 1])
    for _ in range(steps):
        _chain_apply(c, k1, g)
        for i in range(n):
            tmp[i] = c[i] + 0.5 * dt * k1[i]
        _chain_apply(tmp, k2, g)
        for i in range(n):
            tmp[i] = c[i] + 0.5 * dt * k2[i]
        _chain_apply(tmp, k3, g)
        for i in range(n):
            tmp[i] = c[i] + dt * k3[i]
        _chain_apply(tmp, k4, g)
        for i in range(n):
            c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        e = abs(c[n - 1])
        if e > edge:
            edge = e
    return c, edge


def _chain_apply_impl(c, out, g):
    n = c.shape[0]
    if n == 1:
        out[0] = 0.0
        return
    out[0] = g * c[1]
    for i in range(1, n - 1):
        out[i] = g * (c[i - 1] + c[i + 1])
    out[n - 1] = g * c[n - 2]


_chain_apply = njit(cache=True)(_chain_apply_impl)
_rk4_chain_nb = njit(cache=True)(_rk4_chain_nb_impl)


def _chain_rhs_np(c, g):
    out = np.zeros_like(c)
    out[:-1] += c[1:]
    out[1:] += c[:-1]
    return g * out


def _rk4_chain_np(c0, coupling, dt, steps):
    c = c0.copy()
    g = 1j * coupling
    edge = abs(c[-1])
    for _ in range(steps):
        k1 = _chain_rhs_np(c, g)
        k2 = _chain_rhs_np(c + 0.5 * dt * k1, g)
        k3 = _chain_rhs_np(c + 0.5 * dt * k2, g)
        k4 = _chain_rhs_np(c + dt * k3, g)
        c = c + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        edge = max(edge, abs(c[-1]))
    return c, edge


# --- dispatch --------------------------------------------------------------

KERNELS = {
    "numba": {
        "miller_row": _miller_row_nb,
        "coherent_overlap": _coherent_overlap_nb,
        "rk4_chain": _rk4_chain_nb,
    },
    "numpy": {
        "miller_row": _miller_row_py,
        "coherent_overlap": _coherent_overlap_np,
        "rk4_chain": _rk4_chain_np,
    },
}


def miller_row(n_max, x, n_start):
    return KERNELS[get_backend()]["miller_row"](int(n_max), float(x), int(n_start))


def coherent_overlap(coeffs, alphas):
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    alphas = np.ascontiguousarray(np.ravel(alphas), dtype=np.complex128)
    return KERNELS[get_backend()]["coherent_overlap"](coeffs, alphas)


def rk4_chain(c0, coupling, dt, steps):
    c0 = np.ascontiguousarray(c0, dtype=np.complex128)
    return KERNELS[get_backend()]["rk4_chain"](c0, float(coupling), float(dt), int(steps))
