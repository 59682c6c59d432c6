import math

import numpy as np
import pytest

from gaborlab.gabor import (
    bargmann_cs_derivative,
    bargmann_derivative,
    bargmann_eval,
    bargmann_modulus,
    gabor_eval,
    gabor_field,
    gabor_quadrature_oracle,
)
from gaborlab.grid import TFGrid
from gaborlab.signals import GaussianSum, gaussian


def random_sum(rng, max_atoms=5):
    n = rng.integers(1, max_atoms + 1)
    return GaussianSum(
        (
            rng.uniform(-2, 2) + 1j * rng.uniform(-2, 2),
            rng.uniform(-3, 3),
            rng.uniform(-3, 3),
        )
        for _ in range(n)
    )


def test_window_values():
    phi = gaussian()
    assert gabor_eval(phi, 0.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert gabor_eval(phi, 1.0, 0.0) == pytest.approx(math.exp(-math.pi / 2), abs=1e-15)


def test_atom_closed_form_against_oracle():
    f = gaussian(shift=0.7, modulation=-1.3)
    closed = gabor_eval(f, 0.2, 0.4)
    quad = gabor_quadrature_oracle(f, 0.2, 0.4)
    assert abs(closed - quad) <= 1e-10 * max(1.0, abs(closed))


def test_oracle_unit_integral_and_zero_signal():
    assert abs(gabor_quadrature_oracle(gaussian(), 0.0, 0.0) - 1.0) < 1e-10
    assert gabor_quadrature_oracle(gaussian() - gaussian(), 1.0, 2.0) == 0
    with pytest.raises(ValueError):
        gabor_quadrature_oracle(gaussian(), 0.0, 0.0, step=0.0)


def test_covariance_peak_shift():
    # T_{1/a} phi with a = 1/2 peaks at x = 2 with unit modulus
    f = gaussian(shift=2.0)
    assert abs(abs(gabor_quadrature_oracle(f, 2.0, 0.0)) - 1.0) < 1e-10
    assert abs(abs(gabor_eval(f, 2.0, 0.0)) - 1.0) < 1e-14


def test_field_values_of_window():
    grid = TFGrid(-1, 1, -1, 1, 3, 3)
    F = gabor_field(gaussian(), grid)
    assert F.values[1, 1] == pytest.approx(1.0, abs=1e-15)
    for i, j in ((0, 0), (0, 2), (2, 0), (2, 2)):
        assert abs(F.values[i, j]) == pytest.approx(math.exp(-math.pi), rel=1e-12)


def test_field_closed_vs_quadrature():
    f = GaussianSum([(1.0, 0.0, 0.0), (0.1j, 1.0, 0.0)])  # f_plus at a=1, gamma=0.1
    grid = TFGrid(-2, 3, -2, 3, 21, 21)
    Fc = gabor_field(f, grid, mode="closed")
    Fq = gabor_field(f, grid, mode="quadrature")
    rel = np.abs(Fc.values - Fq.values) / np.maximum(np.abs(Fc.values), 1.0)
    assert rel.max() <= 1e-8


def test_empty_signal_field_and_cost_guard():
    grid = TFGrid(-1, 1, -1, 1, 4, 4)
    assert np.all(gabor_field(GaussianSum(), grid).values == 0)
    big = TFGrid(-1, 1, -1, 1, 4000, 4000)
    with pytest.raises(ValueError):
        gabor_field(gaussian(), big, mode="quadrature")
    with pytest.raises(ValueError):
        gabor_field(gaussian(), grid, mode="nope")


def test_linearity():
    rng = np.random.default_rng(11)
    for _ in range(10):
        f, g = random_sum(rng, 3), random_sum(rng, 3)
        al = rng.normal() + 1j * rng.normal()
        be = rng.normal() + 1j * rng.normal()
        x, w = rng.uniform(-3, 3, 2)
        lhs = gabor_eval(al * f + be * g, x, w)
        rhs = al * gabor_eval(f, x, w) + be * gabor_eval(g, x, w)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_shift_covariance_of_magnitude():
    rng = np.random.default_rng(12)
    for _ in range(10):
        f = random_sum(rng, 3)
        u = rng.uniform(-2, 2)
        x, w = rng.uniform(-3, 3, 2)
        lhs = abs(gabor_eval(f.translated(u), x, w))
        rhs = abs(gabor_eval(f, x - u, w))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)


def test_bargmann_modulus_of_window_is_one():
    rng = np.random.default_rng(13)
    phi = gaussian()
    assert bargmann_modulus(phi, 0.0, 0.0) == 1.0
    for _ in range(20):
        x, w = rng.uniform(-3.5, 3.5, 2)
        if x * x + w * w <= 25.0:
            assert abs(bargmann_modulus(phi, x, w) - 1.0) <= 1e-9


def test_bargmann_modulus_shifted_window():
    f = gaussian(shift=1.0)
    assert bargmann_modulus(f, 0.0, 0.0) == pytest.approx(math.exp(-math.pi / 2), rel=1e-12)


def test_bargmann_gabor_identity():
    rng = np.random.default_rng(14)
    for _ in range(10):
        f = random_sum(rng, 4)
        x, w = rng.uniform(-2, 2, 2)
        lhs = bargmann_modulus(f, x, w)
        rhs = abs(gabor_eval(f, x, -w)) * math.exp(math.pi * (x * x + w * w) / 2)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


def test_bargmann_overflow_flag():
    # |B phi| is identically 1, so overflow needs a shifted atom
    assert bargmann_modulus(gaussian(), 30.0, 30.0) == 1.0
    assert bargmann_modulus(gaussian(shift=3.0), 90.0, 0.0) == math.inf
    assert bargmann_modulus(GaussianSum(), 30.0, 30.0) == 0.0


def test_complex_step_matches_analytic_derivative():
    rng = np.random.default_rng(15)
    for _ in range(10):
        f = random_sum(rng, 4)
        z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        d_cs = bargmann_cs_derivative(f, z)
        d_an = bargmann_derivative(f, z)
        assert abs(d_cs - d_an) <= 1e-7 * max(1.0, abs(d_an))
        # derivative consistent with a coarse finite difference of B f
        h = 1e-5
        d_fd = (bargmann_eval(f, z + h) - bargmann_eval(f, z - h)) / (2 * h)
        assert abs(d_fd - d_an) <= 1e-3 * max(1.0, abs(d_an))
