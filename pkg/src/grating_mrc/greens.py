"""Quasiperiodic half-space Green's function above the Dirichlet line y = -b.

Truncated mode sum

    g(x, xi) = sum_{|j| <= j_max} phi_j(x1) conj(phi_j(xi1)) g_j(x2, xi2)

with the one-dimensional kernel

    g_j(y, eta) = v_j(max(y, eta)) psi_j(min(y, eta)),
    v_j(t)   = exp(i mu_j t),
    psi_j(t) = mu_j^{-1} exp(i mu_j b) sin(mu_j (t + b)),

normalized so the Wronskian W[v_j, psi_j] = 1, which makes the derivative
jump of g_j across y = eta equal to -1.  g vanishes on y = -b, is outgoing
as y -> +infinity, satisfies (Delta + k^2) g = -delta(x - xi) above the
line, and inherits the Bloch factor nu in x1 (conj(nu) in xi1).

Stability: for an evanescent order mu_j = i kappa the factor
sin(mu_j (t + b)) grows like exp(kappa (t + b)) and must cancel against
v_j exp(i mu_j b).  The cancellation is performed in closed form,

    g_j = (exp(-kappa (ymax - ymin)) - exp(-kappa (ymax + ymin + 2b))) / (2 kappa),

whose exponents are never positive; the naive product overflows well before
j reaches the default truncation order.

The series is summed from j = 0 outward in symmetric (+j, -j) pairs, in
double precision, with no acceleration: plain truncation at |j| <= j_max is
the intended evaluation path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPoints
from .modes import ModeSystem

# fraction of the period below which field/source points count as coincident
DEFAULT_MIN_SEPARATION_FACTOR = 1e-6


@dataclass(frozen=True)
class GreensConfig:
    """Mode system, artificial-line depth b and truncation order for g.

    depth must exceed -min f of every profile paired with it so that all
    source points sit strictly above y = -b.
    """

    modes: ModeSystem
    depth: float
    j_max: int = 120
    min_separation: float | None = None

    def __post_init__(self):
        if not self.depth > 0:
            raise ValueError(f"depth must be > 0, got {self.depth}")
        if self.j_max < 1:
            raise ValueError(f"j_max must be >= 1, got {self.j_max}")
        if self.j_max > self.modes.j_max:
            raise ValueError(
                f"j_max={self.j_max} exceeds mode range |j| <= {self.modes.j_max}"
            )

    def separation_cutoff(self) -> float:
        if self.min_separation is not None:
            return self.min_separation
        return DEFAULT_MIN_SEPARATION_FACTOR * self.modes.params.period


def psi_j(config: GreensConfig, j: int, y: float) -> complex:
    """Vertical kernel factor psi_j(y); zero exactly at y = -b."""
    _check_order(config, j)
    mu = config.modes.mu(j)
    b = config.depth
    if mu.imag == 0.0:
        m = mu.real
        return cmath.exp(1j * m * b) * math.sin(m * (y + b)) / m
    kappa = mu.imag
    # (1/kappa) e^{-kappa b} sinh(kappa (y+b)), written so both exponents
    # stay <= kappa*y and never overflow for y <= 0
    return complex((math.exp(kappa * y) - math.exp(-kappa * (y + 2.0 * b))) / (2.0 * kappa))


def mode_kernel(config: GreensConfig, j: int, y: float, eta: float) -> complex:
    """One-dimensional kernel g_j(y, eta) = v_j(max) psi_j(min); symmetric."""
    _check_order(config, j)
    mu = config.modes.mu(j)
    b = config.depth
    ymax = max(y, eta)
    ymin = min(y, eta)
    if mu.imag == 0.0:
        m = mu.real
        return cmath.exp(1j * m * (ymax + b)) * math.sin(m * (ymin + b)) / m
    kappa = mu.imag
    return complex(
        (math.exp(-kappa * (ymax - ymin)) - math.exp(-kappa * (ymax + ymin + 2.0 * b)))
        / (2.0 * kappa)
    )


def greens_g(config: GreensConfig, x_pt, xi_pt) -> complex:
    """g(x, xi) for a single field point x and source point xi.

    Raises CoincidentPoints when the two points (or a periodic image of the
    source) are closer than the configured minimum separation.
    """
    out = greens_matrix(config, np.asarray(x_pt, float).reshape(1, 2),
                        np.asarray(xi_pt, float).reshape(1, 2))
    return complex(out[0, 0])


def greens_matrix(config: GreensConfig, points, sources) -> np.ndarray:
    """g evaluated on the (field point, source point) grid; shape (P, Q).

    Vectorized per order: each of the 2*j_max + 1 terms is applied to the
    whole grid at once.  This is the batch path used for matrix assembly and
    field sampling.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    sources = np.asarray(sources, dtype=float).reshape(-1, 2)
    params = config.modes.params
    L = params.period
    b = config.depth

    if np.any(points[:, 1] < -b) or np.any(sources[:, 1] < -b):
        raise ValueError(f"all points must satisfy y >= -b = {-b}")

    x = points[:, 0][:, None]
    y = points[:, 1][:, None]
    sx = sources[:, 0][None, :]
    sy = sources[:, 1][None, :]

    dx = x - sx
    dy = y - sy
    # singularity check against the nearest periodic image of the source
    dx_img = dx - L * np.round(dx / L)
    dist = np.hypot(dx_img, dy)
    cutoff = config.separation_cutoff()
    if np.any(dist < cutoff):
        i, q = np.unravel_index(int(np.argmin(dist)), dist.shape)
        raise CoincidentPoints(
            f"field point {tuple(points[i])} within {dist[i, q]:.3e} "
            f"of source {tuple(sources[q])} (cutoff {cutoff:.3e})"
        )

    ymax = np.maximum(y, sy)
    ymin = np.minimum(y, sy)
    d_gap = ymax - ymin              # >= 0
    d_mirror = ymax + ymin + 2.0 * b  # >= 0 for y, eta >= -b

    # phi_j(x1) conj(phi_j(xi1)) = exp(i lambda_j dx) / L, advanced over j by
    # repeated multiplication with step = exp(2 pi i dx / L)
    base = np.exp(1j * params.k * math.cos(params.theta) * dx) / L
    step = np.exp(2j * math.pi * dx / L)
    step_conj = np.conj(step)

    total = base * _kernel_grid(config, 0, ymin, d_gap, d_mirror)
    phase_pos = base
    phase_neg = base
    for j in range(1, config.j_max + 1):
        phase_pos = phase_pos * step
        phase_neg = phase_neg * step_conj
        pair = phase_pos * _kernel_grid(config, j, ymin, d_gap, d_mirror)
        pair += phase_neg * _kernel_grid(config, -j, ymin, d_gap, d_mirror)
        total += pair
    return total


def _kernel_grid(config: GreensConfig, j: int, ymin, d_gap, d_mirror) -> np.ndarray:
    """g_j over the pair grid, from the precomputed min/max combinations."""
    mu = config.modes.mu(j)
    b = config.depth
    if mu.imag == 0.0:
        m = mu.real
        # v_j(ymax) e^{i m b} = e^{i m (ymin + d_gap + b)}
        return np.exp(1j * m * (ymin + d_gap + b)) * np.sin(m * (ymin + b)) / m
    kappa = mu.imag
    return (np.exp(-kappa * d_gap) - np.exp(-kappa * d_mirror)) / (2.0 * kappa)


def _check_order(config: GreensConfig, j: int) -> None:
    if abs(j) > config.j_max:
        raise ValueError(f"order {j} outside |j| <= {config.j_max}")
