"""Least-squares fit of the incident trace by outgoing quasiperiodic solutions.

The scattered field is sought as a combination of outgoing dictionary
columns: either layer Green's functions g(., xi_m) anchored at source points
below the boundary (the default), or outgoing modes phi_j(x) exp(i mu_j y)
with |j| <= p.  The coefficients minimize

    r_min = min_c || b + A c ||,      ||a||^2 = (1/N) sum_i |a_i|^2,

where b_i = u0(x_i) on the N boundary nodes and A holds the dictionary
columns sampled at the nodes (note ||b|| = 1).  The minimization runs
through the SVD of A with small singular values discarded relative to the
largest one: near-dependent columns otherwise destabilize the coefficients.
An epsilon-accurate boundary fit by outgoing solutions is guaranteed to stay
O(epsilon)-accurate everywhere above the boundary, which is what makes the
residual a meaningful error proxy.

If the residual misses the target, the node and pole counts are doubled and
the pass repeats, up to a configured number of passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Union

import numpy as np

from .errors import DegenerateMatrix, NotConverged
from .geometry import Profile, discretize, profile_nodes
from .greens import GreensConfig, greens_matrix
from .modes import ModeSystem, ScatterParams, incident_field

DEFAULT_W_MIN = 1e-8
DEFAULT_QUADRATURE_POINTS = 1024
# matching height above the top of the boundary for amplitude extraction
DEFAULT_MATCH_CLEARANCE = 0.5


def discrete_norm(v: np.ndarray) -> float:
    """Node-averaged Euclidean norm sqrt((1/N) sum |v_i|^2)."""
    v = np.asarray(v)
    return float(np.sqrt(np.mean(np.abs(v) ** 2)))


@dataclass(frozen=True)
class PoleDictionary:
    """Columns g(., xi_m) for source points xi_m below the boundary."""

    greens: GreensConfig
    poles: np.ndarray  # (M, 2)

    @property
    def column_count(self) -> int:
        return self.poles.shape[0]

    def evaluate(self, points) -> np.ndarray:
        """Column functions at the given points, shape (P, M)."""
        return greens_matrix(self.greens, points, self.poles)


@dataclass(frozen=True)
class RayleighDictionary:
    """Columns phi_j(x) exp(i mu_j y), j = -p..p (the mode-series ansatz).

    Evanescent columns genuinely blow up below y = 0, which is the source of
    the classical instability; the truncated-SVD solve is what keeps the
    coefficients usable.
    """

    modes: ModeSystem
    order: int  # p >= 0

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        if self.order > self.modes.j_max:
            raise ValueError(
                f"order {self.order} exceeds mode range |j| <= {self.modes.j_max}"
            )

    @property
    def column_count(self) -> int:
        return 2 * self.order + 1

    def evaluate(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        x = points[:, 0][:, None]
        y = points[:, 1][:, None]
        orders = np.arange(-self.order, self.order + 1)
        lam = self.modes.lambdas[orders + self.modes.j_max][None, :]
        mu = self.modes.mus[orders + self.modes.j_max][None, :]
        root_l = math.sqrt(self.modes.params.period)
        return np.exp(1j * lam * x) / root_l * np.exp(1j * mu * y)


Dictionary = Union[PoleDictionary, RayleighDictionary]


@dataclass(frozen=True)
class LeastSquaresSystem:
    """Design matrix A (N x columns) and right-hand vector b, b_i = u0(x_i)."""

    matrix: np.ndarray
    rhs: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]

    @property
    def column_count(self) -> int:
        return self.matrix.shape[1]

    def residual_norm(self, coefficients: np.ndarray) -> float:
        """|| b + A c || under the (1/N) node-averaged norm."""
        return discrete_norm(self.rhs + self.matrix @ coefficients)


def assemble(nodes, dictionary: Dictionary, params: ScatterParams) -> LeastSquaresSystem:
    """A[i, m] = (column m)(node i), b[i] = u0(node i)."""
    nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
    matrix = dictionary.evaluate(nodes)
    rhs = incident_field(params, (nodes[:, 0], nodes[:, 1]))
    return LeastSquaresSystem(matrix=matrix, rhs=np.asarray(rhs, dtype=complex))


def assemble_rayleigh(nodes, p: int, modes: ModeSystem) -> LeastSquaresSystem:
    """Mode-dictionary system of order p; solving it realizes m(p) as r_min."""
    return assemble(nodes, RayleighDictionary(modes=modes, order=p), modes.params)


class TsvdResult(NamedTuple):
    coefficients: np.ndarray
    r_min: float
    singular_values: np.ndarray
    n_discarded: int


def solve_tsvd(system: LeastSquaresSystem, w_min: float = DEFAULT_W_MIN) -> TsvdResult:
    """Minimize || b + A c || by SVD, discarding sigma < w_min * sigma_max.

    The cutoff is relative, so it is invariant under overall column scaling.
    With nothing discarded the result is the exact least-squares minimum.
    Raises DegenerateMatrix when no singular value survives.
    """
    if w_min < 0:
        raise ValueError(f"w_min must be >= 0, got {w_min}")
    u, sigma, vh = np.linalg.svd(system.matrix, full_matrices=False)
    keep = sigma > 0
    if w_min > 0 and sigma.size and sigma[0] > 0:
        keep &= sigma >= w_min * sigma[0]
    if not bool(np.any(keep)):
        raise DegenerateMatrix(
            f"all {sigma.size} singular values below cutoff {w_min:g} * sigma_max"
        )
    projected = u[:, keep].conj().T @ system.rhs
    coefficients = -(vh[keep].conj().T @ (projected / sigma[keep]))
    return TsvdResult(
        coefficients=coefficients,
        r_min=system.residual_norm(coefficients),
        singular_values=sigma,
        n_discarded=int(np.count_nonzero(~keep)),
    )


class PassRecord(NamedTuple):
    n_nodes: int
    n_columns: int
    r_min: float


@dataclass(frozen=True)
class ScatterConfig:
    """Everything one solve needs: geometry, physics and solver knobs."""

    profile: Profile
    params: ScatterParams
    n_nodes: int = 256
    n_poles: int = 64
    depth: float = 1.2
    j_max: int = 120
    w_min: float = DEFAULT_W_MIN
    epsilon: float = 0.05
    max_refinements: int = 3
    dictionary: str = "poles"  # "poles" | "rayleigh"
    order: int = 2             # p, rayleigh dictionary only
    pole_offset: tuple[float, float] | None = None
    min_separation: float | None = None
    wood_tol: float | None = None
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS
    match_height: float | None = None

    def __post_init__(self):
        if self.dictionary not in ("poles", "rayleigh"):
            raise ValueError(f"dictionary must be 'poles' or 'rayleigh', got {self.dictionary!r}")
        if self.max_refinements < 1:
            raise ValueError("max_refinements counts solve passes and must be >= 1")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class MrcSolution:
    """Converged (or best-effort) coefficients for one configuration."""

    dictionary: Dictionary
    coefficients: np.ndarray
    r_min: float
    history: tuple[PassRecord, ...]
    params: ScatterParams
    nodes: np.ndarray
    converged: bool
    singular_values: np.ndarray = field(repr=False, default=None)
    n_discarded: int = 0

    @property
    def boundary_top(self) -> float:
        return float(np.max(self.nodes[:, 1]))


def mrc_solve(config: ScatterConfig) -> MrcSolution:
    """Assemble and solve, doubling N (and M or p) until r_min <= epsilon.

    max_refinements is the total number of solve passes.  Raises
    NotConverged carrying the best pass when the target is never met.
    """
    modes = ModeSystem.build(config.params, config.j_max, config.wood_tol)
    history: list[PassRecord] = []
    best: MrcSolution | None = None

    n_nodes = config.n_nodes
    n_poles = config.n_poles
    order = config.order
    for _ in range(config.max_refinements):
        dictionary, nodes = _build_pass(config, modes, n_nodes, n_poles, order)
        system = assemble(nodes, dictionary, config.params)
        result = solve_tsvd(system, config.w_min)
        history.append(PassRecord(n_nodes, dictionary.column_count, result.r_min))
        candidate = MrcSolution(
            dictionary=dictionary,
            coefficients=result.coefficients,
            r_min=result.r_min,
            history=tuple(history),
            params=config.params,
            nodes=nodes,
            converged=result.r_min <= config.epsilon,
            singular_values=result.singular_values,
            n_discarded=result.n_discarded,
        )
        if best is None or candidate.r_min < best.r_min:
            best = candidate
        if candidate.converged:
            return candidate
        n_nodes *= 2
        n_poles *= 2
        order = 2 * order if order > 0 else 1
    best = replace(best, history=tuple(history))
    raise NotConverged(
        f"r_min = {best.r_min:.6e} > epsilon = {config.epsilon:g} "
        f"after {len(history)} pass(es)",
        best,
    )


def _build_pass(config: ScatterConfig, modes: ModeSystem, n_nodes, n_poles, order):
    if config.dictionary == "poles":
        disc = discretize(config.profile, n_nodes, n_poles, config.depth,
                          config.pole_offset)
        greens = GreensConfig(
            modes=modes,
            depth=config.depth,
            j_max=config.j_max,
            min_separation=config.min_separation,
        )
        return PoleDictionary(greens=greens, poles=disc.poles), disc.nodes
    nodes = profile_nodes(config.profile, n_nodes)
    return RayleighDictionary(modes=modes, order=order), nodes


def evaluate_field(solution: MrcSolution, points):
    """Scattered field: the dictionary expansion at the given point(s).

    Accepts one (x, y) pair or an (P, 2) array; returns complex or (P,).
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    values = solution.dictionary.evaluate(pts.reshape(-1, 2)) @ solution.coefficients
    return complex(values[0]) if single else values


def rayleigh_coefficients(
    solution: MrcSolution,
    match_height: float | None = None,
    j_set=None,
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS,
) -> dict[int, complex]:
    """Outgoing plane-wave amplitudes B_j of the computed field.

    B_j is the coefficient of exp(i lambda_j x + i mu_j y) in the expansion
    of the field above the boundary, extracted on the line y = R:

        B_j = exp(-i mu_j R) (1/L) integral_0^L v(x, R) exp(-i lambda_j x) dx.

    The integrand is L-periodic and smooth, so the uniform-grid trapezoid
    rule converges spectrally.  R defaults to the boundary top plus 0.5 and
    must clear every boundary point; the extracted amplitudes are independent
    of R for a field that is genuinely outgoing.
    """
    modes = _solution_modes(solution)
    if match_height is None:
        match_height = solution.boundary_top + DEFAULT_MATCH_CLEARANCE
    if match_height <= solution.boundary_top:
        raise ValueError(
            f"match height {match_height} must exceed the boundary top "
            f"{solution.boundary_top}"
        )
    if j_set is None:
        j_set = sorted(modes.propagating)
    L = solution.params.period
    xs = np.arange(quadrature_points) * (L / quadrature_points)
    line = np.column_stack([xs, np.full_like(xs, match_height)])
    values = evaluate_field(solution, line)
    out: dict[int, complex] = {}
    for j in j_set:
        mean = np.mean(values * np.exp(-1j * modes.lam(j) * xs))
        out[j] = complex(np.exp(-1j * modes.mu(j) * match_height) * mean)
    return out


def energy_balance(amplitudes: dict[int, complex], modes: ModeSystem) -> float:
    """sum_{j in J} mu_j |B_j|^2 / (k sin(theta)); equals 1 for a lossless fit."""
    missing = modes.propagating - set(amplitudes)
    if missing:
        raise ValueError(f"amplitudes missing propagating orders {sorted(missing)}")
    params = modes.params
    flux_in = params.k * math.sin(params.theta)
    total = 0.0
    for j in sorted(modes.propagating):
        total += modes.mu(j).real * abs(amplitudes[j]) ** 2
    return total / flux_in


def diffraction_efficiencies(
    amplitudes: dict[int, complex], modes: ModeSystem
) -> dict[int, float]:
    """Per-order share of the reflected energy, mu_j |B_j|^2 / (k sin(theta))."""
    params = modes.params
    flux_in = params.k * math.sin(params.theta)
    return {
        j: modes.mu(j).real * abs(amplitudes[j]) ** 2 / flux_in
        for j in sorted(set(amplitudes) & modes.propagating)
    }


def _solution_modes(solution: MrcSolution) -> ModeSystem:
    if isinstance(solution.dictionary, PoleDictionary):
        return solution.dictionary.greens.modes
    return solution.dictionary.modes
