"""Coherent-like states built from Susskind-Glogower phase operators.

Submodules: :mod:`~sgcoherent.specfun` (Bessel rows, Bell polynomials,
moment integrals), :mod:`~sgcoherent.states` (state recipes and the
matrix-exponential oracle), :mod:`~sgcoherent.analysis` (Husimi Q, photon
statistics, Mandel Q), :mod:`~sgcoherent.waveguide` (the coupled waveguide
array) and :mod:`~sgcoherent.cli`.
"""

__version__ = "0.1.0"

from ._accel import get_backend, set_backend
from .analysis import (
    angular_lobes,
    husimi_grid,
    husimi_q,
    mandel_q,
    mandel_q_closed,
    mandel_scan,
    photon_distribution,
)
from .errors import (
    DomainError,
    OracleDisagreement,
    QuadratureError,
    TruncationError,
    UndefinedMomentError,
)
from .states import (
    FockState,
    Recipe,
    evolve_exact_oracle,
    sg_displaced_approx,
    sg_evolved,
    sg_vacuum_displaced,
    truncation_for,
)

__all__ = [
    "__version__",
    "get_backend",
    "set_backend",
    "angular_lobes",
    "husimi_grid",
    "husimi_q",
    "mandel_q",
    "mandel_q_closed",
    "mandel_scan",
    "photon_distribution",
    "DomainError",
    "OracleDisagreement",
    "QuadratureError",
    "TruncationError",
    "UndefinedMomentError",
    "FockState",
    "Recipe",
    "evolve_exact_oracle",
    "sg_displaced_approx",
    "sg_evolved",
    "sg_vacuum_displaced",
    "truncation_for",
]
