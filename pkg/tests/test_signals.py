import math

import numpy as np
import pytest

from gaborlab.signals import (
    GaussianAtom,
    GaussianSum,
    gaussian,
    phase_equivalent,
    signal_inner,
    signal_norm,
    signal_phase_distance,
)


def test_atom_rejects_zero_coeff_and_nonfinite():
    with pytest.raises(ValueError):
        GaussianAtom(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        GaussianAtom(1.0, math.inf, 0.0)
    with pytest.raises(ValueError):
        GaussianAtom(1.0, 0.0, math.nan)


def test_duplicate_atoms_merge_and_cancel():
    f = gaussian() - gaussian()
    assert f.is_zero
    g = GaussianSum([(1.0, 0.5, 0.0), (2.0, 0.5, 0.0), (1j, 0.0, 1.0)])
    assert len(g) == 2
    merged = {(a.shift, a.modulation): a.coeff for a in g.atoms}
    assert merged[(0.5, 0.0)] == 3.0


def test_zero_signal_evaluates_to_zero():
    assert GaussianSum().evaluate(0.3) == 0
    assert np.all(GaussianSum().evaluate(np.linspace(-1, 1, 5)) == 0)


def test_inner_product_matches_quadrature():
    rng = np.random.default_rng(3)
    t = np.arange(-12.0, 12.0, 1e-3)
    for _ in range(5):
        f = GaussianSum(
            (rng.normal() + 1j * rng.normal(), rng.uniform(-2, 2), rng.uniform(-2, 2))
            for _ in range(3)
        )
        g = GaussianSum(
            (rng.normal() + 1j * rng.normal(), rng.uniform(-2, 2), rng.uniform(-2, 2))
            for _ in range(2)
        )
        quad = np.trapezoid(np.conj(f.evaluate(t)) * g.evaluate(t), dx=1e-3)
        assert abs(signal_inner(f, g) - quad) < 1e-9


def test_gaussian_is_normalized():
    assert abs(signal_norm(gaussian()) - 1.0) < 1e-15


def test_phase_distance_exact_cases():
    f = gaussian()
    assert signal_phase_distance(f, f) == 0.0
    g = gaussian(coeff=np.exp(0.4j))
    assert signal_phase_distance(f, g) < 1e-15
    # tiny perturbations must not cancel away (the naive closed form does)
    eps = 3e-9
    h = GaussianSum([(1.0, 0.0, 0.0), (1j * eps, 2.0, 0.0)])
    d = signal_phase_distance(f, h)
    assert abs(d - eps) < 1e-3 * eps


def test_phase_equivalent_is_algebraic():
    f = GaussianSum([(1.0, 0.0, 0.0), (2j, 1.0, -1.0)])
    assert phase_equivalent(f, f * np.exp(1.3j))
    assert not phase_equivalent(f, f * 2.0)
    assert not phase_equivalent(f, gaussian())
    tiny = 1e-12
    g = GaussianSum([(1.0, 0.0, 0.0), (1j * tiny, 2.0, 0.0)])
    h = GaussianSum([(1.0, 0.0, 0.0), (-1j * tiny, 2.0, 0.0)])
    assert not phase_equivalent(g, h)


def test_translation_moves_atoms():
    f = gaussian().translated(1.5)
    assert f.atoms[0].shift == 1.5
    t = np.linspace(-2, 2, 9)
    assert np.allclose(f.evaluate(t), gaussian().evaluate(t - 1.5))
