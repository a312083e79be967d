"""Susskind-Glogower coherent states on a truncated number basis.

Three constructions are provided: the approximate displaced vacuum, the
exact displaced vacuum, and the evolved state for an arbitrary number-state
initial condition.  :func:`evolve_exact_oracle` integrates the truncated
chain Hamiltonian numerically and serves as an independent check on the
closed forms.

Conventions: interaction picture, hbar = 1, and the only parameter is the
dimensionless time ``tau = eta * t``.  The closed-form evolved state
satisfies ``dc/dt = +i H c``, i.e. ``c(t) = exp(+iHt) c(0)``; the oracle
uses the same sign by default.  The opposite sign gives coefficients that
differ by ``(-1)**(n - m)`` (the chain spectrum is symmetric), so moduli,
photon statistics and Q functions up to a reflection are unchanged.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal, expm

from . import _kernels
from .errors import DomainError, OracleDisagreement, TruncationError
from .specfun import bessel_tail_bound, chebyshev_u_row, jn_row

_PHASES = np.array([1 + 0j, 1j, -1 + 0j, -1j])


class Recipe(str, enum.Enum):
    APPROX_DISPLACED = "approx_displaced"
    EXACT_DISPLACED = "exact_displaced"
    EVOLVED = "evolved"
    ORACLE = "oracle"
    RAW = "raw"


@dataclass(frozen=True)
class FockState:
    """Amplitudes ``c_0..c_N`` over the number basis plus provenance.

    ``tail_bound`` bounds the probability discarded by the truncation, so
    ``1 - tail_bound <= sum |c_n|^2 <= 1`` for the normalised recipes.
    """

    coeffs: np.ndarray
    recipe: Recipe = Recipe.RAW
    param: float = 0.0
    initial_m: int | None = None
    tail_bound: float = 0.0
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty vector")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "recipe", Recipe(self.recipe))

    @property
    def truncation(self):
        return self.coeffs.size - 1

    def norm(self):
        return math.fsum(np.abs(self.coeffs) ** 2)

    def probabilities(self):
        return np.abs(self.coeffs) ** 2

    @classmethod
    def number(cls, k, N=None):
        """The number state ``|k>`` in a basis of size ``N + 1`` (default ``k``)."""
        N = k if N is None else N
        if not 0 <= k <= N:
            raise DomainError(f"need 0 <= k <= N, got k={k}, N={N}")
        c = np.zeros(N + 1, dtype=np.complex128)
        c[k] = 1.0
        return cls(c, Recipe.RAW, initial_m=k)


def _phase(exponents):
    return _PHASES[np.mod(exponents, 4)]


def _signed(row, k):
    # J_k for integer arrays k (possibly negative) from a non-negative-order row
    vals = row[np.abs(k)]
    flip = (k < 0) & (np.abs(k) % 2 == 1)
    return np.where(flip, -vals, vals)


# --- truncation ------------------------------------------------------------

def _tail_approx(x, N):
    return 2.0 * bessel_tail_bound(2.0 * x, N)


def _tail_exact(x, N):
    if x == 0:
        return 0.0
    return bessel_tail_bound(2.0 * x, N + 1, power=2) / (x * x)


def _tail_evolved(tau, m, N):
    if N - m < 0:
        return 1.0
    bound = 2.0 * (bessel_tail_bound(2.0 * tau, N - m) + bessel_tail_bound(2.0 * tau, N + m + 2))
    return min(1.0, bound)


def truncation_for(x, eps=1e-12):
    """Smallest ``N >= 8`` whose analytic tail bound is below ``eps``.

    ``x`` is the parameter magnitude: ``x`` for the displaced states,
    ``|tau| + m`` for evolved states.  The bound covers every recipe, using
    ``|J_k(y)| <= (|y|/2)^k / k!``, and is monotone in ``|x|`` and ``1/eps``.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    X = abs(float(x))
    if not math.isfinite(X):
        raise DomainError(f"parameter must be finite, got {x}")
    shift = math.floor(X)
    N = max(8, shift)
    while True:
        worst = max(
            _tail_approx(X, N),
            _tail_exact(X, N),
            4.0 * bessel_tail_bound(2.0 * X, N - shift),
        )
        if worst < eps:
            return N
        N += 1


# --- SG operators ----------------------------------------------------------

def apply_v(state):
    """Lowering operator ``V = sum |n><n+1|``; annihilates the vacuum."""
    c = np.zeros_like(state.coeffs)
    c[:-1] = state.coeffs[1:]
    return FockState(c, Recipe.RAW, tail_bound=state.tail_bound)


def apply_vdag(state):
    """Raising operator ``V^dagger = sum |n+1><n|`` in a fixed basis.

    The amplitude pushed past the top of the basis is added to the state's
    ``tail_bound`` and reported in ``info["lost"]``.
    """
    c = np.zeros_like(state.coeffs)
    c[1:] = state.coeffs[:-1]
    lost = float(abs(state.coeffs[-1]) ** 2)
    return FockState(c, Recipe.RAW, tail_bound=state.tail_bound + lost, info={"lost": lost})


# --- closed-form states ----------------------------------------------------

def sg_displaced_approx(x, N=None):
    """Approximate displaced vacuum, ``c_n = c_0 J_n(2x)``.

    ``c_0 = sqrt(2 / (1 + J_0(2x)^2))`` normalises the state.
    """
    x = float(x)
    N = truncation_for(x) if N is None else int(N)
    row = jn_row(N, 2.0 * x)
    c0_sq = 2.0 / (1.0 + row[0] ** 2)
    return FockState(
        math.sqrt(c0_sq) * row,
        Recipe.APPROX_DISPLACED,
        param=x,
        tail_bound=c0_sq * 0.5 * _tail_approx(x, N),
    )


def sg_vacuum_displaced(x, N=None):
    """Exact displaced vacuum, ``c_n = (n + 1) J_{n+1}(2x) / x``; ``|0>`` at ``x = 0``."""
    x = float(x)
    N = truncation_for(x) if N is None else int(N)
    if x == 0.0:
        c = np.zeros(N + 1)
        c[0] = 1.0
    else:
        row = jn_row(N + 1, 2.0 * x)
        c = np.arange(1, N + 2) * row[1:] / x
    return FockState(c, Recipe.EXACT_DISPLACED, param=x, tail_bound=_tail_exact(x, N))


def sg_evolved(m, tau, N=None):
    """State evolved from ``|m>`` for normalised time ``tau = eta t``.

    ``c_n = i^(n-m) J_(n-m)(2 tau) + i^(n+m) J_(n+m+2)(2 tau)``, with negative
    orders resolved by ``J_-k = (-1)^k J_k`` and powers of ``i`` taken exactly.
    """
    if m < 0 or int(m) != m:
        raise DomainError("m must be a non-negative integer")
    m = int(m)
    tau = float(tau)
    N = truncation_for(abs(tau) + m) if N is None else int(N)
    row = jn_row(N + m + 2, 2.0 * tau)
    n = np.arange(N + 1)
    c = _phase(n - m) * _signed(row, n - m) + _phase(n + m) * row[n + m + 2]
    return FockState(
        c, Recipe.EVOLVED, param=tau, initial_m=m, tail_bound=_tail_evolved(tau, m, N)
    )


# --- Hamiltonian and oracle ------------------------------------------------

@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """``eta (V + V^dagger)`` on a basis of ``dimension`` number states."""

    dimension: int
    coupling: float

    def dense(self):
        off = np.full(self.dimension - 1, self.coupling)
        return np.diag(off, 1) + np.diag(off, -1)

    def matvec(self, c):
        c = np.asarray(c)
        out = np.zeros_like(c, dtype=np.result_type(c, float))
        out[:-1] += c[1:]
        out[1:] += c[:-1]
        return self.coupling * out

    def eigenvalues(self):
        return eigvalsh_tridiagonal(
            np.zeros(self.dimension), np.full(self.dimension - 1, self.coupling)
        )


def hamiltonian(eta, N):
    if N < 1:
        raise DomainError("N must be at least 1")
    return TridiagonalHamiltonian(int(N) + 1, float(eta))


def evolve_exact_oracle(m, t, eta=1.0, N=None, *, sign=1, tol=1e-10, edge_tol=1e-10):
    """Evolve ``|m>`` under the truncated chain Hamiltonian, numerically.

    Two schemes are run and must agree to ``10 * tol``: a dense matrix
    exponential ``exp(sign * i H t)`` (Pade scaling and squaring) and fixed-step
    RK4 with the step halved until successive runs agree to ``tol``.  The
    exponential result is returned.

    Raises
    ------
    TruncationError
        If ``|c_N|`` exceeds ``edge_tol`` anywhere along the RK4 trajectory.
    OracleDisagreement
        If the two schemes disagree.
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    tau = float(eta) * float(t)
    N = truncation_for(abs(tau) + m) + 32 if N is None else int(N)
    if not 0 <= m <= N:
        raise DomainError(f"need 0 <= m <= N, got m={m}, N={N}")
    c0 = np.zeros(N + 1, dtype=np.complex128)
    c0[m] = 1.0
    if t == 0:
        return FockState(c0, Recipe.ORACLE, param=0.0, initial_m=m, info={"agreement": 0.0})

    H = hamiltonian(eta, N).dense()
    c_exp = expm((sign * 1j * t) * H) @ c0

    steps = max(16, math.ceil(40 * abs(tau)))
    dt = t / steps
    c_rk, edge = _kernels.rk4_chain(c0, sign * eta, dt, steps)
    while True:
        steps *= 2
        dt = t / steps
        c_fine, edge = _kernels.rk4_chain(c0, sign * eta, dt, steps)
        change = float(np.max(np.abs(c_fine - c_rk)))
        c_rk = c_fine
        if change < tol:
            break
        if steps > 2**22:
            raise OracleDisagreement(f"RK4 did not settle (last change {change:.2e})")

    if edge > edge_tol:
        raise TruncationError(
            f"edge amplitude {edge:.2e} exceeds {edge_tol:.0e} at N={N}; increase N",
            suggested_n=2 * N,
        )
    agreement = float(np.max(np.abs(c_exp - c_rk)))
    if agreement > 10 * tol:
        raise OracleDisagreement(f"expm and RK4 differ by {agreement:.2e}")
    return FockState(
        c_exp,
        Recipe.ORACLE,
        param=tau,
        initial_m=m,
        tail_bound=edge * edge,
        info={"agreement": agreement, "rk4_steps": steps},
    )


def chebyshev_eigvec_residual(xi, eta=1.0, N=256, full=False):
    """Relative residual ``|H v - 2 eta xi v| / |v|`` for ``v_n = U_n(xi)``.

    The last row is dropped unless ``full`` is set: the truncated chain has no
    ``v_{N+1}`` to balance it.
    """
    if not -1.0 < xi < 1.0:
        raise DomainError("xi must lie in (-1, 1)")
    if N < 8:
        raise DomainError("N must be at least 8")
    v = chebyshev_u_row(N, xi)
    r = hamiltonian(eta, N).matvec(v) - 2.0 * eta * xi * v
    if not full:
        r = r[:-1]
    return float(np.linalg.norm(r) / np.linalg.norm(v))
