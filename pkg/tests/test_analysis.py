import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from sgcoherent import analysis, states
from sgcoherent.errors import DomainError, UndefinedMomentError
from sgcoherent.specfun import bessel_j
from sgcoherent.states import FockState


def husimi_reference(coeffs, alpha):
    # direct sum of <alpha|n> c_n, factorials in log space
    n = np.arange(coeffs.size)
    a = complex(alpha)
    if a == 0:
        return abs(coeffs[0]) ** 2 / math.pi
    log_mag = n * math.log(abs(a)) - 0.5 * gammaln(n + 1) - 0.5 * abs(a) ** 2
    terms = np.exp(log_mag) * np.exp(-1j * n * np.angle(a)) * coeffs
    return abs(math.fsum(terms.real) + 1j * math.fsum(terms.imag)) ** 2 / math.pi


# --- Husimi Q ---------------------------------------------------------------

def test_vacuum_at_origin():
    assert analysis.husimi_q(FockState.number(0, 10), 0) == pytest.approx(1 / math.pi, abs=1e-16)


@pytest.mark.parametrize("k", [1, 5, 12])
def test_number_state_ring(k):
    s = FockState.number(k, k + 4)
    for alpha in (0.3, 1.1 - 2j, 2.5j, -3.0 + 0.5j):
        r2 = abs(alpha) ** 2
        expected = math.exp(-r2) * r2**k / (math.pi * math.factorial(k))
        assert analysis.husimi_q(s, alpha) == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_husimi_matches_reference(backend):
    s = states.sg_evolved(5, 5.0)
    rng = np.random.default_rng(11)
    alphas = rng.uniform(-7, 7, 40) + 1j * rng.uniform(-7, 7, 40)
    got = analysis.husimi_values(s, alphas)
    ref = np.array([husimi_reference(s.coeffs, a) for a in alphas])
    assert np.allclose(got, ref, rtol=1e-10, atol=1e-16)


def test_husimi_large_basis_no_overflow(backend):
    s = states.sg_evolved(10, 20.0, 260)
    assert s.truncation > 170
    vals = analysis.husimi_values(s, np.array([7.5 + 7.5j, 0.0, -11.0]))
    assert np.all(np.isfinite(vals)) and np.all(vals >= 0)


def test_husimi_global_phase_invariance():
    s = states.sg_vacuum_displaced(3.0)
    t = FockState(np.exp(0.77j) * s.coeffs)
    a = analysis.husimi_grid(s, (-4, 4), resolution=33).values
    b = analysis.husimi_grid(t, (-4, 4), resolution=33).values
    assert np.max(np.abs(a - b)) < 1e-15


def test_vacuum_grid_mass():
    g = analysis.husimi_grid(FockState.number(0, 8), (-4, 4), resolution=129)
    assert abs(g.mass - 1) < 1e-3
    assert g.resolution == (129, 129)
    assert g.re_range == (-4.0, 4.0)


@pytest.mark.parametrize("m,tau", [(0, 2.32), (1, 5.0), (5, 1.0), (0, 20.0)])
def test_grid_mass_and_positivity(m, tau):
    g = analysis.husimi_grid(states.sg_evolved(m, tau))
    assert np.all(g.values >= 0)
    assert abs(g.mass - 1) < 1e-3


def test_grid_layout_and_rectangular_window():
    s = states.sg_evolved(1, 1.0)
    g = analysis.husimi_grid(s, (-3, 2), (-1, 4), resolution=(11, 6))
    assert g.values.shape == (6, 11)
    i, j = 4, 7
    assert g.values[i, j] == pytest.approx(analysis.husimi_q(s, g.re[j] + 1j * g.im[i]), rel=1e-12)
    with pytest.raises(DomainError):
        analysis.husimi_grid(s, resolution=1)


@pytest.mark.parametrize("tau", [1.0, 2.32, 5.0, 20.0])
def test_quarter_turn(tau):
    a = states.sg_evolved(0, tau)
    b = states.sg_vacuum_displaced(tau, a.truncation)
    ga = analysis.husimi_grid(a, (-6, 6), resolution=65)
    gb = analysis.husimi_grid(b, (-6, 6), resolution=65)
    assert np.max(np.abs(ga.values - np.rot90(gb.values, -1))) < 1e-10


# --- lobes -------------------------------------------------------------------

def test_lobe_counts():
    assert analysis.angular_lobes(states.sg_vacuum_displaced(20.0)).count == 2
    assert analysis.angular_lobes(states.sg_evolved(1, 5.0)).count == 2
    assert analysis.angular_lobes(states.sg_vacuum_displaced(1.0)).count == 1
    # a number state is a featureless ring
    assert analysis.angular_lobes(FockState.number(5, 10)).count == 0


def test_lobes_of_a_cat_state():
    # superposition of coherent states at +-4 has two lobes on the real axis
    n = np.arange(60)
    log_c = n * math.log(4.0) - 0.5 * gammaln(n + 1) - 8.0
    c = np.exp(log_c) * (1 + (-1.0) ** n)
    rep = analysis.angular_lobes(FockState(c / np.linalg.norm(c)))
    assert rep.count == 2
    assert np.allclose(np.sort(np.mod(rep.peak_angles, 2 * np.pi)), [0, np.pi], atol=0.02)


# --- photon statistics -------------------------------------------------------

def test_photon_distribution_formulas():
    x = 2.32
    s = states.sg_vacuum_displaced(x)
    p = analysis.photon_distribution(s)
    for n in (0, 3, 7):
        assert p.probs[n] == pytest.approx(((n + 1) * bessel_j(n + 1, 2 * x) / x) ** 2, rel=1e-13)
    assert abs(p.total() + p.tail_bound - 1) < 1e-10
    d = analysis.photon_distribution(states.sg_evolved(5, 0.0))
    assert d.probs[5] == 1 and d.total() == 1


def test_mandel_number_and_poisson():
    for m in (1, 4, 9):
        assert analysis.mandel_q(FockState.number(m, m + 3)) == pytest.approx(-1, abs=1e-15)
    lam = 3.7
    n = np.arange(80)
    probs = np.exp(-lam + n * math.log(lam) - gammaln(n + 1))
    assert abs(analysis.mandel_q(analysis.PhotonDistribution(probs))) < 1e-10


def test_mandel_vacuum_undefined():
    with pytest.raises(UndefinedMomentError):
        analysis.mandel_q(FockState.number(0, 5))
    with pytest.raises(UndefinedMomentError):
        analysis.mandel_q_closed(0.0)


def test_mandel_at_2_32():
    assert abs(analysis.mandel_q(states.sg_vacuum_displaced(2.32)) + 0.64) <= 0.01
    assert abs(analysis.mandel_q_closed(2.32) + 0.64) <= 0.01


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 20.0))
def test_mandel_summation_orders_agree(x):
    s = states.sg_vacuum_displaced(x)
    c2 = np.abs(s.coeffs) ** 2
    n = np.arange(c2.size, dtype=float)
    mean = math.fsum(n * c2)
    second = math.fsum(n * n * c2)
    direct = (second - mean * mean) / mean - 1
    assert abs(analysis.mandel_q(s) - direct) < 1e-12


@pytest.mark.parametrize("x", np.linspace(0.05, 20.0, 25))
def test_mandel_closed_vs_coefficients(x):
    ref = analysis.mandel_q(states.sg_vacuum_displaced(x))
    for mode in ("auto", "closed", "direct"):
        assert abs(analysis.mandel_q_closed(x, s3=mode) - ref) < 1e-8
    with pytest.raises(DomainError):
        analysis.mandel_q_closed(x, s3="bogus")


# --- scans -------------------------------------------------------------------

def test_mandel_scan_m0():
    s = analysis.mandel_scan(0.05, 20.0, 400, m=0)
    assert abs(s.tau_star - 2.32) <= 0.02
    assert abs(s.q_star + 0.64) <= 0.01
    assert abs(s.zero_crossing - 13.48) <= 0.05
    assert np.all(np.diff(s.tau) > 0)
    assert s.q_star <= s.q.min()
    assert s.minimum == (s.tau_star, s.q_star)


def test_mandel_scan_m5_small_tau():
    s = analysis.mandel_scan(1e-3, 2.0, 20, m=5)
    assert abs(s.q[0] + 1) < 1e-5


@pytest.mark.parametrize("m", [1, 5, 10])
def test_mandel_scan_higher_m_reports_minimum(m):
    # minima for m >= 1 are reported, not compared against a reference
    s = analysis.mandel_scan(0.05, 20.0, 100, m=m)
    assert np.isfinite(s.tau_star) and -1 <= s.q_star <= s.q.min()


def test_mandel_scan_domain():
    with pytest.raises(DomainError):
        analysis.mandel_scan(0.0, 5.0, 10, m=0)
    with pytest.raises(DomainError):
        analysis.mandel_scan(1.0, 5.0, 1)
    with pytest.raises(DomainError):
        analysis.mandel_scan(5.0, 1.0, 10)
