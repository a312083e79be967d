"""Husimi Q function, photon statistics and the Mandel Q-parameter."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.signal import find_peaks

from . import _kernels
from .errors import DomainError, UndefinedMomentError
from .specfun import bessel_cubed_sum_closed, bessel_moment_direct
from .states import FockState, sg_evolved

DEFAULT_HALF_WIDTH = 8.0
DEFAULT_RESOLUTION = 257


# --- Husimi Q --------------------------------------------------------------

def husimi_q(state, alpha):
    """``Q(alpha) = |<alpha|psi>|^2 / pi`` for a pure state."""
    overlap = _kernels.coherent_overlap(state.coeffs, np.array([complex(alpha)]))[0]
    return float(abs(overlap) ** 2 / math.pi)


def husimi_values(state, alphas):
    """Vectorised :func:`husimi_q` over an array of complex points."""
    alphas = np.asarray(alphas, dtype=np.complex128)
    overlap = _kernels.coherent_overlap(state.coeffs, alphas.ravel())
    return (np.abs(overlap) ** 2 / math.pi).reshape(alphas.shape)


@dataclass(frozen=True)
class PhaseGrid:
    """Husimi values on a rectangular grid; ``values[i, j]`` sits at ``re[j] + 1j*im[i]``."""

    re: np.ndarray
    im: np.ndarray
    values: np.ndarray

    @property
    def re_range(self):
        return float(self.re[0]), float(self.re[-1])

    @property
    def im_range(self):
        return float(self.im[0]), float(self.im[-1])

    @property
    def resolution(self):
        return self.re.size, self.im.size

    @property
    def cell_area(self):
        return (self.re[1] - self.re[0]) * (self.im[1] - self.im[0])

    @property
    def mass(self):
        return float(self.values.sum() * self.cell_area)


def husimi_grid(state, re_range=(-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH), im_range=None,
                resolution=DEFAULT_RESOLUTION):
    if im_range is None:
        im_range = re_range
    if np.ndim(resolution) == 0:
        resolution = (resolution, resolution)
    n_re, n_im = (int(r) for r in resolution)
    if n_re < 2 or n_im < 2:
        raise DomainError("resolution must be at least 2 per axis")
    re = np.linspace(re_range[0], re_range[1], n_re)
    im = np.linspace(im_range[0], im_range[1], n_im)
    alphas = re[None, :] + 1j * im[:, None]
    return PhaseGrid(re, im, husimi_values(state, alphas))


@dataclass(frozen=True)
class LobeReport:
    count: int
    radius: float
    angles: np.ndarray
    profile: np.ndarray
    peak_angles: np.ndarray


def angular_lobes(state, threshold=0.1, n_theta=720, n_r=240, r_max=None, prominence=1e-6):
    """Count phase-space lobes on the ring of maximum Husimi mass.

    The radial density ``r * int Q(r, theta) dtheta`` picks the radius; lobes
    are circular local maxima of ``Q`` along that ring exceeding
    ``threshold`` times the ring's peak and standing at least ``prominence``
    times that peak above the surrounding minima.
    """
    if r_max is None:
        p = state.probabilities()
        n = np.arange(p.size)
        mean = float(n @ p)
        spread = math.sqrt(max(float(n * n @ p) - mean * mean, 0.0))
        r_max = math.sqrt(mean + 6.0 * spread) + 3.0
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    r = np.linspace(0.0, r_max, n_r)
    q_polar = husimi_values(state, r[:, None] * np.exp(1j * theta)[None, :])
    radial = r * q_polar.sum(axis=1)
    radius = float(r[int(np.argmax(radial))])
    profile = husimi_values(state, radius * np.exp(1j * theta))
    # tile three periods so peaks at the wrap-around are seen; the prominence
    # floor keeps round-off ripple on a flat ring from counting as lobes
    top = float(profile.max())
    found, _ = find_peaks(np.tile(profile, 3), height=threshold * top, prominence=prominence * top)
    found = found[(found >= n_theta) & (found < 2 * n_theta)] - n_theta
    return LobeReport(int(found.size), radius, theta, profile, theta[found])


# --- photon statistics -----------------------------------------------------

@dataclass(frozen=True)
class PhotonDistribution:
    probs: np.ndarray
    tail_bound: float = 0.0

    @property
    def n(self):
        return np.arange(self.probs.size)

    def moment(self, k):
        return math.fsum(self.n.astype(float) ** k * self.probs)

    def total(self):
        return math.fsum(self.probs)


def photon_distribution(state):
    """``P(n) = |c_n|^2``."""
    return PhotonDistribution(state.probabilities(), state.tail_bound)


def _q_from_moments(mean, second):
    if mean == 0:
        raise UndefinedMomentError("Mandel Q is undefined for zero mean photon number")
    return (second - mean * mean) / mean - 1.0


def mandel_q(state):
    """Mandel Q-parameter of a :class:`FockState` or :class:`PhotonDistribution`."""
    dist = photon_distribution(state) if isinstance(state, FockState) else state
    return _q_from_moments(dist.moment(1), dist.moment(2))


def mandel_q_closed(x, s3="auto", tol=1e-8):
    """Mandel Q of the exact displaced vacuum from Bessel moment sums.

    ``<n> = (S3 - S2) / x^2`` and ``<n^2> = (S4 - 2 S3 + S2) / x^2`` with
    ``S_p = sum k^p J_k(2x)^2``, ``S2 = x^2`` and ``S4 = 3x^4 + x^2``.
    ``s3`` picks the cubic sum: ``"closed"``, ``"direct"`` or ``"auto"``
    (closed form when it matches direct summation to ``tol`` relative,
    direct summation otherwise).
    """
    x = float(x)
    if x == 0:
        raise UndefinedMomentError("Mandel Q is undefined at x = 0 (vacuum)")
    x2 = x * x
    s2 = x2
    s4 = 3.0 * x2 * x2 + x2
    if s3 == "closed":
        s3_val = bessel_cubed_sum_closed(x)
    elif s3 == "direct":
        s3_val = bessel_moment_direct(3, 2.0 * x, tol=1e-15)
    elif s3 == "auto":
        closed = bessel_cubed_sum_closed(x)
        direct = bessel_moment_direct(3, 2.0 * x, tol=1e-15)
        ok = abs(closed - direct) <= tol * max(1.0, abs(direct))
        s3_val = closed if ok else direct
    else:
        raise DomainError(f"s3 must be 'auto', 'closed' or 'direct', got {s3!r}")
    mean = (s3_val - s2) / x2
    second = (s4 - 2.0 * s3_val + s2) / x2
    return _q_from_moments(mean, second)


# --- Mandel scans ----------------------------------------------------------

@dataclass(frozen=True)
class MandelSeries:
    tau: np.ndarray
    q: np.ndarray
    tau_star: float
    q_star: float
    zero_crossing: float | None
    m: int = 0

    @property
    def minimum(self):
        return self.tau_star, self.q_star


def _golden_min(f, a, b, xtol):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def mandel_evolved(m, tau):
    return mandel_q(sg_evolved(m, tau))


def mandel_scan(tau_min, tau_max, steps, m=0, xtol=1e-3):
    """Sample ``Q(tau)`` of the evolved state and locate its features.

    The minimum is refined by golden-section search inside the bracketing
    grid cells to ``|dtau| < xtol``; the zero crossing is the sign change at
    largest ``tau``, refined by Brent's method (``None`` if there is none).
    """
    if steps < 2:
        raise DomainError("steps must be at least 2")
    if tau_max <= tau_min:
        raise DomainError("tau_max must exceed tau_min")
    if m == 0 and tau_min <= 0:
        raise DomainError("tau_min must be positive for m = 0 (vacuum at tau = 0)")
    taus = np.linspace(tau_min, tau_max, int(steps))
    qs = np.array([mandel_evolved(m, t) for t in taus])

    i = int(np.argmin(qs))
    lo = taus[max(i - 1, 0)]
    hi = taus[min(i + 1, taus.size - 1)]
    tau_star, q_star = _golden_min(lambda t: mandel_evolved(m, t), lo, hi, xtol)
    if qs[i] < q_star:
        tau_star, q_star = float(taus[i]), float(qs[i])

    crossing = None
    sign_change = np.nonzero(np.sign(qs[:-1]) * np.sign(qs[1:]) < 0)[0]
    if sign_change.size:
        j = int(sign_change[-1])
        crossing = brentq(lambda t: mandel_evolved(m, t), taus[j], taus[j + 1], xtol=1e-10)
    return MandelSeries(taus, qs, float(tau_star), float(q_star), crossing, int(m))
