"""Light in a semi-infinite array of evanescently coupled waveguides.

Site ``n`` couples to its nearest neighbours with unit strength in the
normalised distance ``Z = c z``; site 0 is the array edge and couples only
to site 1::

    i da_n/dZ + (a_{n+1} + a_{n-1}) = 0,   n >= 1
    i da_0/dZ + a_1 = 0

The closed-form amplitudes solve this system (checked by
:func:`coupled_mode_residual`), and their intensities coincide with the
photon-number distribution of the evolved SG state at ``tau = Z``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .analysis import photon_distribution
from .errors import DomainError, TruncationError
from .specfun import bessel_j, ipow
from .states import sg_evolved, truncation_for


@dataclass(frozen=True)
class WaveguideField:
    amplitudes: np.ndarray
    z: float
    excited_site: int
    input_amplitude: float = 1.0

    @property
    def intensity(self):
        return np.abs(self.amplitudes) ** 2

    def power(self):
        return math.fsum(self.intensity)


def default_sites(m, z):
    # enough sites that the field at the last one stays below ~1e-10
    return truncation_for(abs(z) + m, 1e-20) + 8


def modal_amplitude_closed(n, m, z, a0=1.0):
    """``a_n(Z) = A0 [i^(n-m) J_(n-m)(2Z) + i^(n+m) J_(n+m+2)(2Z)]`` after exciting site ``m``."""
    if n < 0 or m < 0:
        raise DomainError("site indices must be non-negative")
    return a0 * (ipow(n - m) * bessel_j(n - m, 2.0 * z) + ipow(n + m) * bessel_j(n + m + 2, 2.0 * z))


def modal_amplitudes(m, z, N=None, a0=1.0):
    N = default_sites(m, z) if N is None else int(N)
    return np.array([modal_amplitude_closed(n, m, z, a0) for n in range(N + 1)])


def intensity_profile(m, z, N=None, a0=1.0):
    """``I_n(Z) = |a_n(Z)|^2`` on sites ``0..N``."""
    return np.abs(modal_amplitudes(m, z, N, a0)) ** 2


def lattice_rhs(a):
    """``da/dZ`` of the truncated coupled-mode system."""
    out = np.zeros_like(a, dtype=np.complex128)
    out[:-1] += a[1:]
    out[1:] += a[:-1]
    return 1j * out


def _closed_derivative(m, z, N, a0):
    # d/dZ [i^k J_k(2Z)] = i^k (J_{k-1} - J_{k+1})(2Z)
    out = np.empty(N + 1, dtype=np.complex128)
    y = 2.0 * z
    for n in range(N + 1):
        k1, k2 = n - m, n + m + 2
        out[n] = ipow(k1) * (bessel_j(k1 - 1, y) - bessel_j(k1 + 1, y)) + ipow(n + m) * (
            bessel_j(k2 - 1, y) - bessel_j(k2 + 1, y)
        )
    return a0 * out


def coupled_mode_residual(m, z, N=None, a0=1.0):
    """Max residual of the closed form in the lattice equations, last site excluded."""
    N = default_sites(m, z) if N is None else int(N)
    a = modal_amplitudes(m, z, N, a0)
    residual = _closed_derivative(m, z, N, a0) - lattice_rhs(a)
    return float(np.max(np.abs(residual[:-1])))


def propagate_ode(m, z_end, N=None, tol=1e-10, a0=1.0, edge_tol=1e-10, n_checks=256):
    """Integrate the coupled-mode equations from a single excited site.

    Uses an adaptive embedded Runge-Kutta scheme (DOP853) with relative
    tolerance ``tol``.  The edge site is sampled along the path; if its
    amplitude exceeds ``edge_tol`` the array is too short.
    """
    if m < 0:
        raise DomainError("m must be non-negative")
    N = default_sites(m, z_end) if N is None else int(N)
    if m > N:
        raise DomainError("excited site lies outside the array")
    a0_vec = np.zeros(N + 1, dtype=np.complex128)
    a0_vec[m] = a0
    if z_end == 0:
        return WaveguideField(a0_vec, 0.0, m, a0)

    sol = solve_ivp(
        lambda _z, a: lattice_rhs(a),
        (0.0, float(z_end)),
        a0_vec,
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-3 * abs(a0),
        dense_output=True,
    )
    if not sol.success:
        raise ArithmeticError(f"coupled-mode integration failed: {sol.message}")
    checks = sol.sol(np.linspace(0.0, z_end, n_checks))
    edge = float(np.max(np.abs(checks[-1])))
    if edge > edge_tol * abs(a0):
        raise TruncationError(
            f"edge amplitude {edge:.2e} exceeds {edge_tol:.0e} with {N + 1} sites",
            suggested_n=2 * N,
        )
    return WaveguideField(sol.y[:, -1].copy(), float(z_end), int(m), a0)


def analogy_report(m, x, N=None):
    """``max_n |I_n(Z=x) - P_m(n, tau=x)|`` between the array and the SG state."""
    N = truncation_for(abs(x) + m) if N is None else int(N)
    intensity = intensity_profile(m, x, N)
    probs = photon_distribution(sg_evolved(m, x, N)).probs
    return float(np.max(np.abs(intensity - probs)))
