"""Spectral data: eigenvalues, branch choices, eigenfunctions, incident wave."""

import cmath
import math

import numpy as np
import pytest

from grating_mrc.errors import WoodAnomaly
from grating_mrc.modes import (
    ModeSystem,
    ScatterParams,
    basis_phi,
    incident_field,
    lambda_j,
    mu_j,
    propagating_set,
    quasiperiodicity_factor,
    radiating_mode,
)


def params(k=1.0, period=math.pi, theta=math.pi / 2.0):
    return ScatterParams(k=k, period=period, theta=theta)


class TestScatterParams:
    def test_rejects_bad_ranges(self):
        with pytest.raises(ValueError):
            ScatterParams(k=0.0, period=math.pi, theta=1.0)
        with pytest.raises(ValueError):
            ScatterParams(k=1.0, period=0.0, theta=1.0)
        with pytest.raises(ValueError):
            ScatterParams(k=1.0, period=math.pi, theta=0.0)
        with pytest.raises(ValueError):
            ScatterParams(k=1.0, period=math.pi, theta=math.pi / 2.0 + 0.01)

    def test_normal_incidence_admitted(self):
        assert params(theta=math.pi / 2.0).theta == math.pi / 2.0


class TestQuasiperiodicityFactor:
    def test_normal_incidence_is_one(self):
        assert quasiperiodicity_factor(params()) == 1.0 + 0.0j

    def test_oblique(self):
        # exp(i pi cos(pi/4)), evaluated at 40 digits
        expected = -0.6056998670788134 + 0.7956932015674809j
        assert quasiperiodicity_factor(params(theta=math.pi / 4.0)) == pytest.approx(expected, abs=1e-14)

    def test_half_turn(self):
        # 2 * pi * cos(pi/3) = pi
        nu = quasiperiodicity_factor(params(k=2.0, theta=math.pi / 3.0))
        assert nu == pytest.approx(-1.0 + 0.0j, abs=1e-14)

    def test_unit_modulus(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = params(k=rng.uniform(0.1, 5.0), period=rng.uniform(0.5, 8.0),
                       theta=rng.uniform(0.01, math.pi / 2.0))
            assert abs(abs(quasiperiodicity_factor(p)) - 1.0) <= 1e-14


class TestLambda:
    def test_values(self):
        assert lambda_j(params(), 0) == 0.0
        assert lambda_j(params(), 1) == pytest.approx(2.0, abs=1e-14)
        assert lambda_j(params(theta=math.pi / 4.0), 0) == pytest.approx(
            0.7071067811865476, abs=1e-14)


class TestMu:
    def test_propagating(self):
        assert mu_j(params(), 0) == pytest.approx(1.0 + 0.0j, abs=1e-14)

    def test_evanescent(self):
        # lambda_1 = 2, sqrt(4 - 1) = sqrt(3)
        assert mu_j(params(), 1) == pytest.approx(1.7320508075688772j, abs=1e-14)

    def test_oblique(self):
        # sqrt(1 - cos^2(pi/4)) = sin(pi/4)
        assert mu_j(params(theta=math.pi / 4.0), 0) == pytest.approx(
            0.7071067811865476 + 0.0j, abs=1e-14)

    def test_branch_and_circle_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            p = params(k=rng.uniform(0.2, 4.0), period=rng.uniform(0.5, 6.0),
                       theta=rng.uniform(0.05, math.pi / 2.0))
            j = int(rng.integers(-60, 61))
            lam = lambda_j(p, j)
            mu = mu_j(p, j)
            # exactly one of Re, Im is nonzero and both are >= 0
            assert mu.real >= 0.0 and mu.imag >= 0.0
            assert (mu.real > 0.0) != (mu.imag > 0.0)
            assert mu**2 + lam**2 == pytest.approx(p.k**2, rel=1e-12)

    def test_wood_anomaly_raises(self):
        # k=2, L=pi, theta=pi/2: lambda_{±1} = ±2, so lambda^2 = k^2 exactly
        p = params(k=2.0)
        with pytest.raises(WoodAnomaly):
            mu_j(p, 1)
        with pytest.raises(WoodAnomaly):
            ModeSystem.build(p, j_max=5)


class TestPropagatingSet:
    def test_normal_incidence(self):
        assert propagating_set(params(), 120) == {0}

    def test_oblique(self):
        assert propagating_set(params(theta=math.pi / 4.0), 120) == {0}

    def test_small_k(self):
        assert propagating_set(params(k=0.1), 120) == {0}

    def test_matches_definition(self):
        p = params(k=3.7, theta=1.1)
        expected = {j for j in range(-120, 121) if lambda_j(p, j) ** 2 < p.k**2}
        assert propagating_set(p, 120) == expected
        assert len(expected) > 1


class TestBasisPhi:
    def test_at_origin(self):
        assert basis_phi(params(theta=math.pi / 4.0), 0, 0.0) == pytest.approx(
            0.5641895835477563 + 0.0j, abs=1e-14)

    def test_oscillation(self):
        # lambda_1 = 2 at normal incidence: exp(i pi) / sqrt(pi)
        assert basis_phi(params(), 1, math.pi / 2.0) == pytest.approx(
            -0.5641895835477563 + 0.0j, abs=1e-14)

    def test_modulus(self):
        p = params(theta=1.0)
        for x in np.linspace(0.0, math.pi, 7):
            assert abs(basis_phi(p, 3, x)) == pytest.approx(1.0 / math.sqrt(math.pi), abs=1e-14)

    def test_discrete_orthonormality(self):
        # trapezoid oracle for integral_0^L phi_j conj(phi_m) dx = delta_jm
        p = params(theta=math.pi / 3.0)
        n_quad = 4096
        xs = np.arange(n_quad) * p.period / n_quad
        for j, m in [(1, 2), (0, -3), (4, 4)]:
            vals = basis_phi(p, j, xs) * np.conj(basis_phi(p, m, xs))
            integral = np.mean(vals) * p.period
            expected = 1.0 if j == m else 0.0
            assert abs(integral - expected) <= 1e-10


class TestIncidentField:
    def test_at_origin(self):
        assert incident_field(params(theta=math.pi / 4.0), (0.0, 0.0)) == 1.0 + 0.0j

    def test_normal_incidence_phase(self):
        # alpha = (0, -1): phase is -y regardless of x
        expected = 0.5403023058681398 - 0.8414709848078965j
        assert incident_field(params(), (3.7, 1.0)) == pytest.approx(expected, abs=1e-14)

    def test_unit_modulus(self):
        p = params(theta=0.9)
        rng = np.random.default_rng(2)
        pts = rng.uniform(-5.0, 5.0, size=(100, 2))
        vals = incident_field(p, (pts[:, 0], pts[:, 1]))
        assert np.max(np.abs(np.abs(vals) - 1.0)) <= 1e-14


class TestRadiatingMode:
    def test_at_origin(self):
        modes = ModeSystem.build(params(), 10)
        assert radiating_mode(modes, 0, (0.0, 0.0)) == pytest.approx(
            0.5641895835477563 + 0.0j, abs=1e-14)

    def test_evanescent_decay_value(self):
        # mu_1 = i sqrt(3): (1/sqrt(pi)) exp(-2 sqrt(3))
        modes = ModeSystem.build(params(), 10)
        assert radiating_mode(modes, 1, (0.0, 2.0)) == pytest.approx(
            0.017659762046239845 + 0.0j, abs=1e-14)

    def test_monotone_decay(self):
        modes = ModeSystem.build(params(), 10)
        heights = np.linspace(0.0, 4.0, 9)
        mags = [abs(radiating_mode(modes, 2, (0.3, y))) for y in heights]
        assert all(b < a for a, b in zip(mags, mags[1:]))

    def test_quasiperiodicity(self):
        p = params(theta=1.2)
        modes = ModeSystem.build(p, 10)
        nu = modes.nu
        rng = np.random.default_rng(3)
        for _ in range(20):
            j = int(rng.integers(-10, 11))
            x, y = rng.uniform(0.0, math.pi), rng.uniform(-0.5, 2.0)
            shifted = radiating_mode(modes, j, (x + p.period, y))
            ref = nu * radiating_mode(modes, j, (x, y))
            assert abs(shifted - ref) <= 1e-12 * max(1.0, abs(ref))


def五_point_residual(f, x, y, k, h):
    lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / h**2
    return abs(lap + k * k * f(x, y))


def test_helmholtz_residual_second_order():
    """Halving h cuts the centered 5-point (Delta + k^2) residual >= 3.5x."""
    p = params(theta=1.0)
    modes = ModeSystem.build(p, 10)

    def mode(x, y):
        return radiating_mode(modes, 2, (x, y))

    def incident(x, y):
        return incident_field(p, (x, y))

    for f in (mode, incident):
        r_coarse =五_point_residual(f, 0.8, 0.6, p.k, 2e-3)
        r_fine =五_point_residual(f, 0.8, 0.6, p.k, 1e-3)
        assert r_coarse / r_fine >= 3.5
