"""Integer-order Bessel functions, Chebyshev U, Bell polynomials and
weighted Bessel sums.

Everything here is a pure function of its arguments.  Bessel values come from
a single Miller (downward) recurrence normalised with
``J_0 + 2 * sum(J_2k) = 1``; a power series covers tiny arguments and
orders far beyond the argument.
"""

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .errors import DomainError
from .quadrature import gauss_legendre

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)
_SMALL_X = 1e-3
_MAX_ORDER = 10**6


def ipow(e):
    """``1j ** e`` for integer ``e`` (any sign), exact."""
    return _I_POWERS[int(e) % 4]


@dataclass(frozen=True)
class BesselRow:
    order_max: int
    argument: float
    values: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self):
        return self.order_max + 1

    def __getitem__(self, n):
        return self.values[n]


def miller_start(n_max, x):
    """Starting order of the downward recurrence (always even).

    Beyond ``max(n_max, |x|)`` the start needs a margin covering the
    turning-point region of width ~|x|^(1/3); 12 widths plus 20 orders keeps
    the neglected start value below ~1e-17 of the row's scale.
    """
    start = max(n_max, math.ceil(abs(x))) + 20 + math.ceil(12.0 * abs(x) ** (1.0 / 3.0))
    return start + (start % 2)


def _check_x(x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"Bessel argument must be finite, got {x}")
    return x


def _series(n, x):
    # n >= 0; power series with the leading factor taken in log domain
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    # log|x| - log 2 rather than log(|x|/2): the halving underflows for subnormal x
    log_lead = n * (math.log(abs(x)) - math.log(2.0)) - math.lgamma(n + 1.0)
    if log_lead < -745.0:
        return 0.0
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (n + k))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    lead = math.exp(log_lead)
    if x < 0 and n % 2:
        lead = -lead
    return lead * total


def bessel_j(n, x):
    """Bessel function of the first kind, integer order ``n``.

    Negative orders use ``J_{-n} = (-1)^n J_n``, negative arguments use
    ``J_n(-x) = (-1)^n J_n(x)``.
    """
    if int(n) != n:
        raise DomainError(f"order must be an integer, got {n}")
    n = int(n)
    x = _check_x(x)
    if abs(n) > _MAX_ORDER:
        raise DomainError(f"|n| must not exceed {_MAX_ORDER}")
    sign = 1.0
    if n < 0:
        n = -n
        if n % 2:
            sign = -sign
    if x < 0:
        x = -x
        if n % 2:
            sign = -sign
    if x < _SMALL_X or x * x <= n + 1:
        return sign * _series(n, x)
    return sign * float(_kernels.miller_row(n, x, miller_start(n, x))[n])


def jn_row(n_max, x):
    """``[J_0(x), ..., J_{n_max}(x)]`` as a float array."""
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    x = _check_x(x)
    ax = abs(x)
    if ax < _SMALL_X:
        out = np.zeros(n_max + 1)
        for n in range(n_max + 1):
            out[n] = _series(n, ax)
            if out[n] == 0.0:
                break
    else:
        out = _kernels.miller_row(n_max, ax, miller_start(n_max, ax))
    if x < 0:
        out[1::2] *= -1.0
    return out


def bessel_row(n_max, x):
    """All orders ``0..n_max`` at argument ``x`` from one recurrence pass."""
    return BesselRow(int(n_max), float(x), jn_row(int(n_max), x))


def bessel_signed(row, k):
    """``J_k`` for any integer ``k`` from a non-negative-order row."""
    if k >= 0:
        return row[k]
    return -row[-k] if k % 2 else row[-k]


def _log_bound(k, ax):
    # log of the bound |J_k(x)| <= (|x|/2)^k / k!
    return k * math.log(ax / 2.0) - math.lgamma(k + 1.0)


def bessel_tail_bound(x, k_max, power=0):
    """Upper bound on ``sum_{k > k_max} k**power * J_k(x)**2``."""
    ax = abs(float(x))
    if ax == 0.0:
        return 0.0
    total = 0.0
    k = k_max + 1
    while True:
        log_term = power * math.log(k) + 2.0 * _log_bound(k, ax)
        log_next = power * math.log(k + 1) + 2.0 * _log_bound(k + 1, ax)
        term = math.exp(log_term) if log_term > -745.0 else 0.0
        total += term
        ratio = math.exp(log_next - log_term)
        if ratio < 0.5 and (term <= 1e-6 * total or term == 0.0):
            return total + term * ratio / (1.0 - ratio)
        k += 1


def bessel_moment_direct(p, x, tol=1e-14, return_info=False):
    """``sum_{k>=0} k**p * J_k(x)**2`` by direct summation.

    The sum stops at the first index ``K`` whose analytic tail bound falls
    below ``tol``.  With ``return_info`` the result is
    ``(value, K, tail_bound)``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if p < 0 or int(p) != p:
        raise DomainError("p must be a non-negative integer")
    x = _check_x(x)
    k_max = max(8, math.ceil(abs(x)) + 8)
    tail = bessel_tail_bound(x, k_max, p)
    while tail >= tol:
        k_max += 4
        tail = bessel_tail_bound(x, k_max, p)
    row = jn_row(k_max, x)
    k = np.arange(k_max + 1, dtype=float)
    value = math.fsum(k**p * row * row)
    if return_info:
        return value, k_max, tail
    return value


# --- Chebyshev polynomials of the second kind ------------------------------

def chebyshev_u(n, xi):
    """``U_n(xi)`` from ``U_0 = 1``, ``U_1 = 2 xi``, ``U_{n+1} = 2 xi U_n - U_{n-1}``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    u_prev = 0.0 * xi
    u = 1.0 + 0.0 * xi
    for _ in range(n):
        u_prev, u = u, 2.0 * xi * u - u_prev
    return u


def chebyshev_u_row(n_max, xi):
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * xi
    for n in range(1, n_max):
        out[n + 1] = 2.0 * xi * out[n] - out[n - 1]
    return out


def chebyshev_fourier_coeff(k, omega, tol=1e-12):
    """Weighted Fourier integral of ``U_k`` over ``[-1, 1]``.

    Evaluates ``(i (-i)^{k+1} / (pi (k+1))) * int sqrt(1-xi^2) U_k(xi) e^{i omega xi} dxi``
    numerically, after the substitution ``xi = cos(theta)`` which removes the
    square-root endpoint behaviour.  Analytically this is ``J_{k+1}(omega)/omega``.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    if omega == 0:
        raise DomainError("omega must be non-zero")

    def integrand(theta):
        c = np.cos(theta)
        s = np.sin(theta)
        return s * s * chebyshev_u(k, c) * np.exp(1j * omega * c)

    integral = gauss_legendre(integrand, 0.0, math.pi, tol=tol)
    prefactor = 1j * ipow(3 * (k + 1)) / (math.pi * (k + 1))
    return complex(prefactor * integral)


# --- Bell polynomials ------------------------------------------------------

def _bell_table(n, xs):
    # T[m][j] = B_{m,j}(x_1, ...), only for m - j + 1 <= len(xs)
    width = len(xs)
    table = [[0] * (n + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for m in range(1, n + 1):
        for j in range(1, m + 1):
            if m - j + 1 > width:
                continue
            acc = 0
            for i in range(1, m - j + 2):
                acc = acc + comb(m - 1, i - 1) * xs[i - 1] * table[m - i][j - 1]
            table[m][j] = acc
    return table


def bell_partial(n, k, xs):
    """Partial Bell polynomial ``B_{n,k}(x_1, ..., x_{n-k+1})``.

    Computed with the recurrence
    ``B_{n,k} = sum_i C(n-1, i-1) x_i B_{n-i,k-1}``; entries of ``xs`` may be
    scalars or numpy arrays (evaluated elementwise).
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    if len(xs) < n - k + 1:
        raise DomainError(f"B_{{{n},{k}}} needs {n - k + 1} arguments, got {len(xs)}")
    return _bell_table(n, list(xs[: n - k + 1]))[n][k]


def bell_partial_enumerate(n, k, xs):
    """Partial Bell polynomial by literal enumeration of the index sequences."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    width = n - k + 1
    total = 0

    def walk(i, remaining_k, remaining_n, js):
        nonlocal total
        if i > width:
            if remaining_k == 0 and remaining_n == 0:
                coeff = math.factorial(n)
                term = 1
                for idx, j in enumerate(js, start=1):
                    coeff //= math.factorial(j) * math.factorial(idx) ** j
                    term = term * xs[idx - 1] ** j
                total = total + coeff * term
            return
        for j in range(min(remaining_k, remaining_n // i) + 1):
            walk(i + 1, remaining_k - j, remaining_n - i * j, js + [j])

    walk(1, k, n, [])
    return total


def bell_complete(n, xs):
    """Complete Bell polynomial ``B_n = sum_{k=1}^{n} B_{n,k}``."""
    if len(xs) != n:
        raise DomainError(f"B_{n} takes exactly {n} arguments, got {len(xs)}")
    if n == 0:
        return 1
    table = _bell_table(n, list(xs))
    total = 0
    for k in range(1, n + 1):
        total = total + table[n][k]
    return total


def bell_determinant(xs):
    """Complete Bell polynomial from its upper-Hessenberg determinant form."""
    n = len(xs)
    if n == 0:
        return 1.0
    mat = np.zeros((n, n), dtype=complex)
    for i in range(n):
        if i > 0:
            mat[i, i - 1] = -1.0
        for j in range(i, n):
            mat[i, j] = comb(n - 1 - i, j - i) * xs[j - i]
    return complex(np.linalg.det(mat))


# --- weighted Bessel sums --------------------------------------------------

def _g_derivatives(x, y, order):
    # derivatives of g(y) = i x sin(y), cycled exactly so parity is preserved
    s, c = np.sin(y), np.cos(y)
    cycle = (c, -s, -c, s)
    return [1j * x * cycle[(j - 1) % 4] for j in range(1, order + 1)]


def bessel_even_moment(nu, x, tol=1e-12):
    """``sum_{k>=1} k^(2 nu) J_k(x)^2`` from the Bell-polynomial integral.

    Integrates ``B_{2nu}(g', ..., g^(2nu))`` with ``g(y) = i x sin(y)`` over
    ``[-pi, pi]`` and scales by ``(-1)^nu / (4 pi)``.
    """
    if nu < 1 or int(nu) != nu:
        raise DomainError("nu must be a positive integer")
    x = _check_x(x)
    order = 2 * int(nu)

    def integrand(y):
        return bell_complete(order, _g_derivatives(x, y, order)) + 0j * y

    integral = gauss_legendre(integrand, -math.pi, math.pi, tol=tol)
    value = (-1) ** nu * integral / (4.0 * math.pi)
    if abs(value.imag) >= 1e-10 * max(1.0, abs(value.real)):
        raise ArithmeticError(f"imaginary residue {value.imag:.3e} in even Bessel moment")
    return float(value.real)


def bessel_cubed_sum_closed(x):
    """Closed form for ``sum_{k>=1} k^3 J_k(2x)^2``."""
    x = _check_x(x)
    j0, j1, j2, j3 = jn_row(3, 2.0 * x)
    x2 = x * x
    return x2 * (
        (6 * x2 + 1) * j0 * j0
        + (6 * x2 - 1) * j1 * j1
        - 2 * x * j0 * j1
        + (2 * x2 / 3) * (j0 * j2 + j1 * j3)
    )


@dataclass(frozen=True)
class CubedSumCheck:
    xs: np.ndarray
    closed: np.ndarray
    direct: np.ndarray
    deviation: np.ndarray
    max_deviation: float
    valid: bool


def cubed_sum_check(xs, tol=1e-8):
    """Compare the closed k^3 form with direct summation at each ``x``.

    Deviation is ``|closed - direct| / max(1, |direct|)``; ``valid`` is False
    as soon as any deviation exceeds ``tol``.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    closed = np.array([bessel_cubed_sum_closed(x) for x in xs])
    direct = np.array([bessel_moment_direct(3, 2.0 * x, tol=1e-15) for x in xs])
    deviation = np.abs(closed - direct) / np.maximum(1.0, np.abs(direct))
    max_dev = float(deviation.max()) if deviation.size else 0.0
    return CubedSumCheck(xs, closed, direct, deviation, max_dev, max_dev <= tol)
