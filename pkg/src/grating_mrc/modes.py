"""Quasiperiodic spectral data for a plane wave hitting an L-periodic surface.

Conventions (2-D, time factor exp(-i omega t) suppressed):

    incident wave    u0(x, y) = exp(ik (x cos(theta) - y sin(theta)))
    Bloch factor     nu = exp(ikL cos(theta)),  |nu| = 1
    eigenvalues      lambda_j = k cos(theta) + 2 pi j / L
    eigenfunctions   phi_j(x) = exp(i lambda_j x) / sqrt(L)
    vertical wavenumbers
                     mu_j = sqrt(k^2 - lambda_j^2)        lambda_j^2 < k^2
                     mu_j = i sqrt(lambda_j^2 - k^2)      lambda_j^2 > k^2

Orders with real mu_j propagate to y -> +infinity; the rest decay
exponentially (evanescent).  The degenerate case lambda_j^2 = k^2 (a Wood
anomaly) is rejected outright, see `errors.WoodAnomaly`.

Everything here is a pure function of immutable inputs; `ModeSystem`
precomputes the per-order data once and is safe for concurrent reads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import WoodAnomaly

DEFAULT_J_MAX = 120
# guard band on |k^2 - lambda_j^2|, as a fraction of k^2
DEFAULT_WOOD_TOL_FACTOR = 1e-10


@dataclass(frozen=True)
class ScatterParams:
    """Physical parameters of one scattering configuration.

    k : wavenumber, > 0
    period : surface period L, > 0
    theta : incidence angle in radians, 0 < theta <= pi/2; the incident
        direction is (cos(theta), -sin(theta))
    """

    k: float
    period: float
    theta: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"wavenumber k must be > 0, got {self.k}")
        if not self.period > 0:
            raise ValueError(f"period must be > 0, got {self.period}")
        if not 0 < self.theta <= math.pi / 2:
            raise ValueError(
                f"theta must lie in (0, pi/2], got {self.theta}"
            )

    def default_wood_tol(self) -> float:
        return DEFAULT_WOOD_TOL_FACTOR * self.k**2


def quasiperiodicity_factor(params: ScatterParams) -> complex:
    """Bloch factor nu = exp(ikL cos(theta)); unit modulus."""
    return cmath.exp(1j * params.k * params.period * math.cos(params.theta))


def lambda_j(params: ScatterParams, j: int) -> float:
    """Horizontal wavenumber of order j: k cos(theta) + 2 pi j / L."""
    return params.k * math.cos(params.theta) + 2.0 * math.pi * j / params.period


def mu_j(params: ScatterParams, j: int, wood_tol: float | None = None) -> complex:
    """Vertical wavenumber of order j on the outgoing branch.

    Returns the positive real root of k^2 - lambda_j^2 for a propagating
    order, i times the positive real root of lambda_j^2 - k^2 for an
    evanescent one.

    Raises WoodAnomaly when |k^2 - lambda_j^2| <= wood_tol (default
    1e-10 * k^2).
    """
    if wood_tol is None:
        wood_tol = params.default_wood_tol()
    lam = lambda_j(params, j)
    gap = params.k**2 - lam * lam
    if abs(gap) <= wood_tol:
        raise WoodAnomaly(
            f"order j={j}: |k^2 - lambda_j^2| = {abs(gap):.3e} <= {wood_tol:.3e}"
        )
    if gap > 0.0:
        return complex(math.sqrt(gap), 0.0)
    return complex(0.0, math.sqrt(-gap))


def propagating_set(params: ScatterParams, j_range) -> frozenset[int]:
    """Orders j with lambda_j^2 < k^2 within j_range.

    j_range may be an integer J (meaning -J..J) or any iterable of orders.
    """
    if isinstance(j_range, int):
        j_range = range(-j_range, j_range + 1)
    k2 = params.k**2
    return frozenset(j for j in j_range if lambda_j(params, j) ** 2 < k2)


def basis_phi(params: ScatterParams, j: int, x) -> complex:
    """Normalized quasiperiodic eigenfunction exp(i lambda_j x) / sqrt(L)."""
    val = np.exp(1j * lambda_j(params, j) * np.asarray(x)) / math.sqrt(params.period)
    return complex(val) if val.ndim == 0 else val


def incident_field(params: ScatterParams, point) -> complex:
    """Incident plane wave exp(ik (x cos(theta) - y sin(theta))); unit modulus."""
    x, y = point
    phase = params.k * (
        np.asarray(x) * math.cos(params.theta) - np.asarray(y) * math.sin(params.theta)
    )
    val = np.exp(1j * phase)
    return complex(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class ModeSystem:
    """Precomputed per-order mode data for |j| <= j_max.

    Arrays are indexed by j + j_max.  Immutable after construction; all
    methods are pure lookups plus elementary-function calls.
    """

    params: ScatterParams
    j_max: int
    lambdas: np.ndarray
    mus: np.ndarray
    propagating: frozenset[int]
    nu: complex

    @classmethod
    def build(
        cls,
        params: ScatterParams,
        j_max: int = DEFAULT_J_MAX,
        wood_tol: float | None = None,
    ) -> "ModeSystem":
        """Compute lambdas, mus, the propagating set and nu for |j| <= j_max.

        Raises WoodAnomaly if any order in range is degenerate.
        """
        if j_max < 1:
            raise ValueError(f"j_max must be >= 1, got {j_max}")
        orders = range(-j_max, j_max + 1)
        lambdas = np.array([lambda_j(params, j) for j in orders])
        mus = np.array([mu_j(params, j, wood_tol) for j in orders])
        return cls(
            params=params,
            j_max=j_max,
            lambdas=lambdas,
            mus=mus,
            propagating=propagating_set(params, j_max),
            nu=quasiperiodicity_factor(params),
        )

    @property
    def j_range(self) -> range:
        return range(-self.j_max, self.j_max + 1)

    def lam(self, j: int) -> float:
        return float(self.lambdas[j + self.j_max])

    def mu(self, j: int) -> complex:
        return complex(self.mus[j + self.j_max])


def radiating_mode(modes: ModeSystem, j: int, point) -> complex:
    """Outgoing mode phi_j(x) exp(i mu_j y) of order j.

    Quasiperiodic in x with factor nu; for evanescent j the modulus decays
    monotonically as y grows.
    """
    if abs(j) > modes.j_max:
        raise ValueError(f"order {j} outside |j| <= {modes.j_max}")
    x, y = point
    return complex(
        basis_phi(modes.params, j, x) * cmath.exp(1j * modes.mu(j) * y)
    )
