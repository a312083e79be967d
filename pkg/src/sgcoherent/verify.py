"""Invariant suite behind ``sgcoherent verify``.

Each check returns ``(passed, detail)``; :func:`run_suite` runs them all and
collects :class:`CheckResult` records.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import analysis, specfun, states, waveguide

TAUS = (1.0, 2.32, 5.0, 20.0)
MS = (0, 1, 5, 10)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def check_bessel_recurrence():
    worst = 0.0
    for x in np.linspace(0.5, 50.0, 25):
        row = specfun.jn_row(60, x)
        n = np.arange(1, 51)
        res = np.abs(row[n - 1] + row[n + 1] - (2 * n / x) * row[n])
        worst = max(worst, float(np.max(res / np.maximum(1.0, np.abs(row[n])))))
    return worst < 1e-10, f"max residual {worst:.2e}"


def check_bessel_normalisation():
    worst = 0.0
    for x in np.linspace(0.0, 50.0, 26):
        row = specfun.jn_row(int(x) + 40, x)
        worst = max(worst, abs(row[0] ** 2 + 2 * math.fsum(row[1:] ** 2) - 1.0))
    return worst < 1e-10, f"max |J0^2 + 2 sum Jn^2 - 1| = {worst:.2e}"


def check_jacobi_anger():
    y = np.linspace(-math.pi, math.pi, 101)
    worst = 0.0
    for x in (0.5, 3.0, 12.0, 30.0):
        N = int(x) + 40
        row = specfun.jn_row(N, x)
        k = np.arange(-N, N + 1)
        j = np.array([specfun.bessel_signed(row, int(kk)) for kk in k])
        series = (j[None, :] * np.exp(1j * np.outer(y, k))).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(np.exp(1j * x * np.sin(y)) - series))))
    return worst < 1e-9, f"max deviation {worst:.2e}"


def check_bell_determinant():
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(1, 9):
        xs = list(rng.normal(size=n) + 1j * rng.normal(size=n))
        a = specfun.bell_complete(n, xs)
        b = specfun.bell_determinant(xs)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst < 1e-12, f"max relative deviation {worst:.2e}"


def check_even_moments():
    worst = 0.0
    for x in np.linspace(0.0, 20.0, 11):
        for nu in (1, 2):
            a = specfun.bessel_even_moment(nu, x)
            b = specfun.bessel_moment_direct(2 * nu, x, tol=1e-12)
            worst = max(worst, abs(a - b))
    return worst < 1e-9, f"max |integral - direct| {worst:.2e}"


def check_cubed_sum():
    report = specfun.cubed_sum_check(np.linspace(0.05, 10.0, 60))
    return True, f"closed form max relative deviation {report.max_deviation:.2e} (valid={report.valid})"


def check_fourier_coefficient():
    worst = 0.0
    for k in (0, 1, 3, 7):
        for w in (0.5, 2.0, 5.0, -5.0):
            got = specfun.chebyshev_fourier_coeff(k, w)
            worst = max(worst, abs(got - specfun.bessel_j(k + 1, w) / w))
    return worst < 1e-8, f"max deviation {worst:.2e}"


def check_oracle():
    worst = 0.0
    for m in MS:
        for tau in TAUS:
            closed = states.sg_evolved(m, tau)
            oracle = states.evolve_exact_oracle(m, tau, N=closed.truncation + 32)
            worst = max(worst, float(np.max(np.abs(closed.coeffs - oracle.coeffs[: closed.truncation + 1]))))
    return worst < 1e-8, f"max coefficient deviation {worst:.2e}"


def check_norm_and_initial():
    worst = 0.0
    exact = True
    for m in MS:
        exact &= bool(np.array_equal(states.sg_evolved(m, 0.0).coeffs, states.FockState.number(m, states.truncation_for(m)).coeffs))
        for tau in TAUS:
            worst = max(worst, abs(analysis.photon_distribution(states.sg_evolved(m, tau)).total() - 1))
    return worst < 1e-10 and exact, f"max norm error {worst:.2e}, tau=0 exact: {exact}"


def check_phase_relation():
    worst_mod = 0.0
    worst_q = 0.0
    for tau in TAUS:
        a = states.sg_evolved(0, tau)
        b = states.sg_vacuum_displaced(tau, a.truncation)
        worst_mod = max(worst_mod, float(np.max(np.abs(np.abs(a.coeffs) - np.abs(b.coeffs)))))
        ga = analysis.husimi_grid(a, resolution=65)
        gb = analysis.husimi_grid(b, resolution=65)
        worst_q = max(worst_q, float(np.max(np.abs(ga.values - np.rot90(gb.values, -1)))))
    ok = worst_mod < 1e-12 and worst_q < 1e-10
    return ok, f"modulus {worst_mod:.2e}, quarter-turn Q {worst_q:.2e}"


def check_mandel():
    s = analysis.mandel_scan(0.05, 20.0, 400, m=0)
    ok = (abs(s.tau_star - 2.32) <= 0.02 and abs(s.q_star + 0.64) <= 0.01
          and s.zero_crossing is not None and abs(s.zero_crossing - 13.48) <= 0.05)
    return ok, f"min Q {s.q_star:.4f} at tau {s.tau_star:.4f}; zero crossing {s.zero_crossing:.4f}"


def check_mandel_closed():
    worst = 0.0
    for x in np.linspace(0.05, 10.0, 40):
        worst = max(worst, abs(analysis.mandel_q_closed(x) - analysis.mandel_q(states.sg_vacuum_displaced(x))))
    return worst < 1e-8, f"max |closed - coefficients| {worst:.2e}"


def check_waveguide():
    analogy = 0.0
    ode = 0.0
    for m in (0, 1, 5):
        for z in (1.0, 5.0, 20.0):
            analogy = max(analogy, waveguide.analogy_report(m, z))
            field = waveguide.propagate_ode(m, z)
            closed = waveguide.modal_amplitudes(m, z, field.amplitudes.size - 1)
            ode = max(ode, float(np.max(np.abs(field.amplitudes - closed))))
    return analogy < 1e-12 and ode < 1e-6, f"analogy {analogy:.2e}, ODE vs closed {ode:.2e}"


def check_lobes():
    counts = (analysis.angular_lobes(states.sg_vacuum_displaced(20.0)).count,
              analysis.angular_lobes(states.sg_evolved(1, 5.0)).count)
    return counts == (2, 2), f"lobe counts {counts}"


def check_chebyshev_eigvec():
    worst = max(states.chebyshev_eigvec_residual(xi, 1.0, 256) for xi in (-0.9, 0.0, 0.5))
    return worst < 1e-12, f"max interior residual {worst:.2e}"


def check_husimi_mass():
    grid = analysis.husimi_grid(states.sg_vacuum_displaced(2.32), (-6, 6), resolution=129)
    ok = abs(grid.mass - 1) < 1e-3 and bool(np.all(grid.values >= 0))
    return ok, f"mass {grid.mass:.6f}"


CHECKS = (
    ("bessel recurrence", check_bessel_recurrence),
    ("bessel normalisation", check_bessel_normalisation),
    ("jacobi-anger", check_jacobi_anger),
    ("bell determinant", check_bell_determinant),
    ("even bessel moments", check_even_moments),
    ("k^3 closed form", check_cubed_sum),
    ("chebyshev fourier", check_fourier_coefficient),
    ("oracle equivalence", check_oracle),
    ("norm and initial state", check_norm_and_initial),
    ("phase / modulus relation", check_phase_relation),
    ("mandel minimum and crossing", check_mandel),
    ("mandel closed form", check_mandel_closed),
    ("waveguide analogy", check_waveguide),
    ("cat-state lobes", check_lobes),
    ("chebyshev eigenvector", check_chebyshev_eigvec),
    ("husimi mass", check_husimi_mass),
)


def run_suite(checks=CHECKS):
    results = []
    for name, fn in checks:
        start = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results
