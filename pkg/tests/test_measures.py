"""Atomic measure canonicalization and kernel integration."""

import json
import math

import numpy as np
import pytest

from fptimages import AtomicMeasure, total_variation_distance

E_M2 = math.exp(-2.0)


def test_total_variation():
    assert AtomicMeasure().total_variation == 0.0
    # single point mass generating the unit-slope linear boundary
    assert AtomicMeasure([2.0], [E_M2]).total_variation == pytest.approx(
        0.1353352832366127, abs=1e-16)
    assert AtomicMeasure([2.0, 3.0], [0.1, 0.2]).total_variation == pytest.approx(0.3)


def test_canonical_form():
    m = AtomicMeasure([3.0, 1.0, 3.0], [0.1, 0.2, 0.3])
    np.testing.assert_allclose(m.atoms, [1.0, 3.0])
    np.testing.assert_allclose(m.weights, [0.2, 0.4])
    assert len(m) == 2


def test_canonicalization_idempotent_and_mass_preserving():
    rng = np.random.default_rng(11)
    for _ in range(50):
        atoms = rng.uniform(0.5, 8.0, size=12)
        weights = rng.uniform(0.0, 1.0, size=12)
        m = AtomicMeasure(atoms, weights)
        again = AtomicMeasure(m.atoms, m.weights)
        np.testing.assert_array_equal(m.atoms, again.atoms)
        np.testing.assert_array_equal(m.weights, again.weights)
        assert m.total_variation == pytest.approx(weights.sum(), rel=1e-14)


def test_weight_floor_drops_noise():
    m = AtomicMeasure([1.0, 2.0], [1.0, 1e-17])
    np.testing.assert_allclose(m.atoms, [1.0])


def test_negative_weights_rejected():
    with pytest.raises(ValueError):
        AtomicMeasure([1.0], [-0.5])
    # denormal LP noise is clipped instead
    m = AtomicMeasure([1.0, 2.0], [1.0, -1e-15])
    np.testing.assert_allclose(m.atoms, [1.0])


def test_integrate_r_examples():
    m = AtomicMeasure([2.0], [E_M2])
    # on the generated boundary 1 + t the integral is identically one
    assert m.integrate_r(1.0, 2.0) == pytest.approx(1.0, abs=1e-15)
    assert m.integrate_r(1.0, 1.0) == pytest.approx(0.1353352832366127, abs=1e-15)
    assert AtomicMeasure().integrate_r(1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        m.integrate_r(0.0, 1.0)


def test_integrate_r_linear_in_measure():
    rng = np.random.default_rng(3)
    atoms1 = rng.uniform(1.0, 5.0, 5)
    atoms2 = rng.uniform(1.0, 5.0, 4)
    w1 = rng.uniform(0.1, 1.0, 5)
    w2 = rng.uniform(0.1, 1.0, 4)
    alpha, beta = 0.7, 2.3
    combo = AtomicMeasure(np.concatenate([atoms1, atoms2]),
                          np.concatenate([alpha * w1, beta * w2]))
    m1 = AtomicMeasure(atoms1, w1)
    m2 = AtomicMeasure(atoms2, w2)
    for t, x in [(0.5, 1.0), (1.0, 0.2), (2.0, 2.5)]:
        expected = alpha * m1.integrate_r(t, x) + beta * m2.integrate_r(t, x)
        assert combo.integrate_r(t, x) == pytest.approx(expected, rel=1e-12)


def test_integrate_r_increasing_in_x():
    m = AtomicMeasure([1.5, 2.5], [0.3, 0.4])
    x = np.linspace(-2.0, 2.0, 64)
    vals = m.integrate_r(np.full_like(x, 0.8), x)
    assert np.all(np.diff(vals) > 0.0)


def test_restrict_mass():
    m = AtomicMeasure([0.99, 1.0], [0.1, 0.2])
    assert m.restrict_mass(0.99, 1.0) == pytest.approx(0.2)
    assert AtomicMeasure().restrict_mass(0.0, 1.0) == 0.0
    assert AtomicMeasure([0.5], [0.3]).restrict_mass(0.99, 1.0) == 0.0
    with pytest.raises(ValueError):
        m.restrict_mass(1.0, 1.0)


def test_json_pairs_roundtrip():
    m = AtomicMeasure([2.0, 4.5], [E_M2, 0.25])
    text = json.dumps(m.to_pairs())
    back = AtomicMeasure.from_pairs(json.loads(text))
    np.testing.assert_array_equal(back.atoms, m.atoms)
    np.testing.assert_array_equal(back.weights, m.weights)
    assert AtomicMeasure.from_pairs([]).is_empty


def test_total_variation_distance():
    a = AtomicMeasure([1.0, 2.0], [0.5, 0.5])
    b = AtomicMeasure([2.0, 3.0], [0.4, 0.1])
    assert total_variation_distance(a, b) == pytest.approx(0.5 + 0.1 + 0.1)
    assert total_variation_distance(a, a) == 0.0
