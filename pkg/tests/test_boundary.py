"""Boundary catalogue, concavity checking and the forward method of images."""

import math

import numpy as np
import pytest

from fptimages import (AtomicMeasure, LinearBoundary, LogBoundary,
                       QuadraticBoundary, SqrtBoundary, TabulatedBoundary,
                       as_boundary, concavity_check, forward_images,
                       limit_at_zero, parse_boundary)

E_M2 = math.exp(-2.0)


def test_catalogue_values():
    assert LinearBoundary(1.0, 1.0).value(1.0) == 2.0
    assert SqrtBoundary(1.0).value(0.0) == 1.0
    assert LogBoundary(2.0).value(0.0) == pytest.approx(0.6931471805599453)
    assert QuadraticBoundary(1.0).value(0.5) == 1.25


def test_metadata():
    b = SqrtBoundary(1.0)
    assert b.b0 == 1.0 and b.slope0 == 0.5 and b.concave
    assert LogBoundary(2.0).slope0 == 0.5
    q = QuadraticBoundary(1.0)
    assert q.slope0 == 0.0 and not q.concave


def test_invalid_boundaries():
    with pytest.raises(ValueError):
        LinearBoundary(0.0, 1.0)       # b(0) must be positive
    with pytest.raises(ValueError):
        LinearBoundary(-1.0, 1.0)
    with pytest.raises(ValueError):
        SqrtBoundary(0.0)
    with pytest.raises(ValueError):
        LogBoundary(1.0)
    with pytest.raises(ValueError):
        LinearBoundary(1.0, 1.0).value(-0.5)


def test_concavity_check():
    grid = np.linspace(0.0, 1.0, 21)
    assert concavity_check(LinearBoundary(1.0, 1.0), grid)
    assert concavity_check(SqrtBoundary(1.0), grid)
    assert not concavity_check(QuadraticBoundary(1.0), np.array([0.0, 0.5, 1.0]))


def test_tabulated_boundary():
    t = np.linspace(0.0, 2.0, 21)
    b = TabulatedBoundary(t, np.sqrt(1.0 + t))
    assert b.value(0.0) == 1.0
    assert b.value(1.0) == pytest.approx(math.sqrt(2.0), abs=1e-4)
    assert b.slope0 == pytest.approx(0.5, abs=1e-2)
    assert b.concave
    with pytest.raises(ValueError):
        b.value(2.5)                    # no extrapolation
    with pytest.raises(ValueError):
        TabulatedBoundary([0.1, 0.2, 0.3], [1.0, 1.1, 1.2])  # must start at 0


def test_limit_at_zero():
    assert limit_at_zero(AtomicMeasure([2.0], [E_M2])) == 1.0
    assert limit_at_zero(AtomicMeasure([1.0, 1.5], [0.2, 0.6])) == 0.5
    # zero-weight atoms are dropped in canonical form
    assert limit_at_zero(AtomicMeasure([3.0, 4.0], [0.0, 0.1])) == 2.0
    with pytest.raises(ValueError):
        limit_at_zero(AtomicMeasure())


def test_forward_images_linear():
    m = AtomicMeasure([2.0], [E_M2])
    assert forward_images(m, 0.5) == pytest.approx(1.5, abs=1e-9)
    assert forward_images(m, 2.0) == pytest.approx(3.0, abs=1e-9)


def test_forward_images_negative_slope():
    # single atom at 2a with weight e^{-2am} generates a + m t; m = -1/2
    m = AtomicMeasure([2.0], [math.exp(1.0)])
    for t in (0.25, 0.5, 1.0, 1.5):
        assert forward_images(m, t) == pytest.approx(1.0 - 0.5 * t, abs=1e-9)


def test_forward_images_two_atoms():
    # two-point measure: the generated curve satisfies the defining identity,
    # is concave, and approaches (smallest atom)/2 at the origin
    m = AtomicMeasure([1.0, 1.5], [0.2, 0.6])
    ts = np.array([0.05, 0.1, 0.2, 0.35, 0.5, 1.0, 2.0])
    bts = np.array([forward_images(m, t, tol=1e-12) for t in ts])
    for t, x in zip(ts, bts):
        assert m.integrate_r(t, x) == pytest.approx(1.0, abs=1e-10)
    # concavity across consecutive triples
    for i in range(len(ts) - 2):
        chord = bts[i] + (bts[i + 2] - bts[i]) * (ts[i + 1] - ts[i]) / (ts[i + 2] - ts[i])
        assert bts[i + 1] >= chord - 1e-8
    assert abs(forward_images(m, 1e-6) - limit_at_zero(m)) <= 1e-3


def test_forward_images_errors():
    with pytest.raises(ValueError):
        forward_images(AtomicMeasure(), 1.0)
    with pytest.raises(ValueError):
        forward_images(AtomicMeasure([-1.0], [1.0]), 1.0)
    with pytest.raises(ValueError):
        forward_images(AtomicMeasure([2.0], [1.0]), 0.0)


def test_parse_boundary():
    assert parse_boundary("linear:1,1") == LinearBoundary(1.0, 1.0)
    assert parse_boundary("sqrt:1") == SqrtBoundary(1.0)
    assert parse_boundary("log:2") == LogBoundary(2.0)
    assert parse_boundary("quadratic:1") == QuadraticBoundary(1.0)
    with pytest.raises(ValueError):
        parse_boundary("cubic:1")
    with pytest.raises(ValueError):
        parse_boundary("linear:1")


def test_as_boundary_forms():
    b = as_boundary("linear:2,0.5")
    assert b.value(2.0) == 3.0
    t = np.linspace(0.0, 1.0, 11)
    tab = as_boundary((t, 1.0 + t))
    assert tab.value(0.5) == pytest.approx(1.5, abs=1e-12)
    tab2 = as_boundary(np.column_stack([t, 1.0 + t]))
    assert tab2.value(0.25) == pytest.approx(1.25, abs=1e-12)
    with pytest.raises(ValueError):
        as_boundary(42)
