import math

import mpmath
import numpy as np
import pytest

from sgcoherent import states, waveguide
from sgcoherent.errors import DomainError, TruncationError
from sgcoherent.specfun import bessel_j, ipow


def test_closed_form_at_origin():
    for m in (0, 3):
        assert waveguide.modal_amplitude_closed(m, m, 0.0) == 1
        for n in range(6):
            if n != m:
                assert waveguide.modal_amplitude_closed(n, m, 0.0) == 0


def test_closed_form_against_mpmath():
    n, m, z = 3, 1, 2.5
    ref = 1j ** (n - m) * float(mpmath.besselj(n - m, 2 * z)) + 1j ** (n + m) * float(mpmath.besselj(n + m + 2, 2 * z))
    assert abs(waveguide.modal_amplitude_closed(n, m, z) - ref) < 1e-14
    # independent code path from the state constructor
    assert abs(waveguide.modal_amplitude_closed(n, m, z) - states.sg_evolved(m, z).coeffs[n]) < 1e-14
    assert waveguide.modal_amplitude_closed(n, m, z, a0=2.0) == pytest.approx(2 * ref, rel=1e-14)
    with pytest.raises(DomainError):
        waveguide.modal_amplitude_closed(-1, 0, 1.0)


@pytest.mark.parametrize("m,z", [(0, 1.0), (1, 5.0), (5, 20.0), (10, 20.0)])
def test_intensity_is_lossless(m, z):
    assert abs(math.fsum(waveguide.intensity_profile(m, z)) - 1) < 1e-10


def test_intensity_at_origin_is_delta():
    i = waveguide.intensity_profile(2, 0.0, 10)
    assert i[2] == 1 and i.sum() == 1


@pytest.mark.parametrize("m,z", [(0, 0.7), (1, 3.0), (5, 12.0), (10, 20.0)])
def test_closed_form_solves_lattice(m, z):
    # pins the sign convention of the coupled-mode equations
    assert waveguide.coupled_mode_residual(m, z) < 1e-10


def test_opposite_sign_lattice_is_not_solved():
    a = waveguide.modal_amplitudes(1, 2.0, 40)
    deriv = waveguide._closed_derivative(1, 2.0, 40, 1.0)
    assert np.max(np.abs(deriv + waveguide.lattice_rhs(a))[:-1]) > 0.1


@pytest.mark.parametrize("m", [0, 1, 5])
@pytest.mark.parametrize("z", [1.0, 5.0, 20.0])
def test_ode_matches_closed_form(m, z):
    field = waveguide.propagate_ode(m, z)
    closed = waveguide.modal_amplitudes(m, z, field.amplitudes.size - 1)
    assert np.max(np.abs(field.amplitudes - closed)) < 1e-6
    assert abs(field.power() - 1) < 1e-9
    assert field.z == z and field.excited_site == m


def test_ode_at_zero_is_exact():
    f = waveguide.propagate_ode(3, 0.0, 10)
    assert np.array_equal(f.amplitudes, np.eye(11)[3].astype(complex))


def test_ode_edge_leakage():
    with pytest.raises(TruncationError):
        waveguide.propagate_ode(0, 10.0, N=15)
    with pytest.raises(DomainError):
        waveguide.propagate_ode(12, 1.0, N=10)


def test_ode_input_amplitude_scales():
    f = waveguide.propagate_ode(1, 2.0, a0=3.0)
    assert f.power() == pytest.approx(9.0, rel=1e-9)


@pytest.mark.parametrize("m,x", [(0, 2.32), (10, 20.0), (1, 5.0)])
def test_analogy(m, x):
    assert waveguide.analogy_report(m, x) < 1e-12


def test_analogy_at_origin_is_exact():
    assert waveguide.analogy_report(5, 0.0) == 0.0


def test_reciprocity_of_bulk_term():
    # i^(n-m) J_(n-m) is symmetric under exchanging n and m, given Bessel parity
    for n, m in [(2, 5), (0, 7), (4, 1)]:
        a = ipow(n - m) * bessel_j(n - m, 3.3)
        b = ipow(m - n) * bessel_j(m - n, 3.3)
        assert abs(a - b) < 1e-15
