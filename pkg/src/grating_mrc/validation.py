"""Cross-module invariant checks, runnable as `grating-mrc validate`.

Each check returns a CheckResult with the measured quantity in `detail`,
so a failure is diagnosable from the report alone.  The suite is seeded
and deterministic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Profile, profile_nodes
from .greens import GreensConfig, greens_g, mode_kernel
from .modes import ModeSystem, ScatterParams, incident_field, radiating_mode
from .solver import (
    ScatterConfig,
    assemble_rayleigh,
    energy_balance,
    evaluate_field,
    mrc_solve,
    rayleigh_coefficients,
    solve_tsvd,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _default_greens(theta=math.pi / 4.0) -> GreensConfig:
    params = ScatterParams(k=1.0, period=math.pi, theta=theta)
    modes = ModeSystem.build(params, j_max=120)
    return GreensConfig(modes=modes, depth=1.2, j_max=120)


def check_wronskian_jump() -> CheckResult:
    """Derivative jump of the vertical kernel across the source height is -1."""
    config = _default_greens()
    eta = 0.233
    h = 1e-4
    worst = 0.0
    for j in (0, 1, -1, 5, -7):
        def g(y, j=j):
            return mode_kernel(config, j, y, eta)

        d_above = (-3 * g(eta) + 4 * g(eta + h) - g(eta + 2 * h)) / (2 * h)
        d_below = (3 * g(eta) - 4 * g(eta - h) + g(eta - 2 * h)) / (2 * h)
        worst = max(worst, abs((d_above - d_below) + 1.0))
    return CheckResult("wronskian_jump", worst < 1e-5,
                       f"max |jump + 1| = {worst:.3e} at h = {h:g}")


def check_dirichlet_line() -> CheckResult:
    """g vanishes identically on the artificial line y = -b."""
    config = _default_greens()
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(25):
        x1 = rng.uniform(0.0, math.pi)
        xi = (rng.uniform(0.0, math.pi), rng.uniform(-1.0, 1.0))
        scale = abs(greens_g(config, (x1, xi[1] + 0.3), xi))
        worst = max(worst, abs(greens_g(config, (x1, -config.depth), xi)) / scale)
    return CheckResult("dirichlet_line", worst < 1e-12,
                       f"max |g(y=-b)| / |g| = {worst:.3e}")


def check_greens_quasiperiodicity() -> CheckResult:
    """Bloch factor nu in the field argument, conj(nu) in the source argument."""
    config = _default_greens()
    nu = config.modes.nu
    L = config.modes.params.period
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(10):
        x = (rng.uniform(0.0, L), rng.uniform(0.2, 1.5))
        xi = (rng.uniform(0.0, L), rng.uniform(-1.0, 0.0))
        g0 = greens_g(config, x, xi)
        shift_x = greens_g(config, (x[0] + L, x[1]), xi)
        shift_xi = greens_g(config, x, (xi[0] + L, xi[1]))
        worst = max(worst, abs(shift_x - nu * g0) / abs(g0))
        worst = max(worst, abs(shift_xi - np.conj(nu) * g0) / abs(g0))
    return CheckResult("greens_quasiperiodicity", worst < 1e-10,
                       f"max relative defect = {worst:.3e}")


def _fd_helmholtz_residual(f, point, k, h) -> float:
    x, y = point
    lap = (f((x + h, y)) + f((x - h, y)) + f((x, y + h)) + f((x, y - h))
           - 4.0 * f((x, y))) / h**2
    return abs(lap + k * k * f((x, y)))


def check_helmholtz_residual() -> CheckResult:
    """(Delta + k^2) annihilates g, the outgoing modes and the incident wave.

    Centered 5-point residuals must drop by >= 3.5x when h halves.
    """
    config = _default_greens()
    params = config.modes.params
    xi = (1.3, -0.35)
    cases = {
        "greens": lambda p: greens_g(config, p, xi),
        "mode_j2": lambda p: radiating_mode(config.modes, 2, p),
        "incident": lambda p: incident_field(params, p),
    }
    detail = []
    ok = True
    for name, f in cases.items():
        r1 = _fd_helmholtz_residual(f, (0.7, 0.9), params.k, 2e-3)
        r2 = _fd_helmholtz_residual(f, (0.7, 0.9), params.k, 1e-3)
        ratio = r1 / r2 if r2 > 0 else math.inf
        # fully resolved residuals sit at roundoff level; accept those too
        ok = ok and (ratio >= 3.5 or r1 < 1e-10)
        detail.append(f"{name}: {ratio:.2f}x")
    return CheckResult("helmholtz_residual", ok, ", ".join(detail))


def check_flat_oracle() -> CheckResult:
    """Flat line: residual target met, specular amplitude -1, no other orders."""
    params = ScatterParams(k=1.0, period=math.pi, theta=math.pi / 3.0)
    config = ScatterConfig(
        profile=Profile(kind="flat", period=math.pi),
        params=params, n_nodes=64, n_poles=16, epsilon=1e-3,
    )
    solution = mrc_solve(config)
    amps = rayleigh_coefficients(solution, j_set=[-1, 0, 1])
    tol = 10.0 * solution.r_min
    ok = (solution.r_min <= 1e-3
          and abs(amps[0] + 1.0) <= tol
          and abs(amps[1]) <= tol
          and abs(amps[-1]) <= tol)
    return CheckResult(
        "flat_oracle", ok,
        f"r_min = {solution.r_min:.3e}, |B0 + 1| = {abs(amps[0] + 1.0):.3e}, "
        f"|B±1| <= {max(abs(amps[1]), abs(amps[-1])):.3e}",
    )


def check_energy_balance() -> CheckResult:
    """Reflected energy equals incident energy for the flat-line solve."""
    params = ScatterParams(k=1.0, period=math.pi, theta=math.pi / 4.0)
    config = ScatterConfig(
        profile=Profile(kind="flat", period=math.pi),
        params=params, n_nodes=64, n_poles=16, epsilon=1e-3,
    )
    solution = mrc_solve(config)
    modes = ModeSystem.build(params, config.j_max)
    balance = energy_balance(rayleigh_coefficients(solution), modes)
    tol = 20.0 * solution.r_min
    return CheckResult("energy_balance", abs(balance - 1.0) <= tol,
                       f"balance = {balance:.6f} (tol {tol:.1e})")


def check_tsvd_monotonicity() -> CheckResult:
    """m(p) never grows as mode-dictionary columns are appended (no cutoff)."""
    params = ScatterParams(k=1.0, period=math.pi, theta=math.pi / 3.0)
    modes = ModeSystem.build(params, j_max=120)
    nodes = profile_nodes(Profile(kind="flat", period=math.pi), 64)
    previous = math.inf
    ok = True
    values = []
    for p in range(0, 7):
        r = solve_tsvd(assemble_rayleigh(nodes, p, modes), w_min=0.0).r_min
        values.append(r)
        ok = ok and r <= previous + 1e-12
        previous = r
    return CheckResult("tsvd_monotonicity", ok,
                       f"m(0..6) = [{', '.join(f'{v:.2e}' for v in values)}]")


def check_boundary_residual() -> CheckResult:
    """Total field on the boundary nodes reproduces the reported residual."""
    params = ScatterParams(k=1.0, period=math.pi, theta=math.pi / 4.0)
    config = ScatterConfig(
        profile=Profile(kind="I", period=math.pi),
        params=params, epsilon=1.0, max_refinements=1,
    )
    solution = mrc_solve(config)
    total = (evaluate_field(solution, solution.nodes)
             + incident_field(params, (solution.nodes[:, 0], solution.nodes[:, 1])))
    rms = float(np.sqrt(np.mean(np.abs(total) ** 2)))
    ok = abs(rms - solution.r_min) <= 1e-10 + 1e-6 * solution.r_min
    return CheckResult("boundary_residual", ok,
                       f"rms = {rms:.6e} vs r_min = {solution.r_min:.6e}")


ALL_CHECKS = (
    check_wronskian_jump,
    check_dirichlet_line,
    check_greens_quasiperiodicity,
    check_helmholtz_residual,
    check_flat_oracle,
    check_energy_balance,
    check_tsvd_monotonicity,
    check_boundary_residual,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
