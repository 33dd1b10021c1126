import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kappa_weyl.errors import BadShape, EdgeLeak, GridMismatch, NonNormalizable, ShiftTooLarge
from kappa_weyl.grid import (
    DEFAULT_GRID,
    Bump,
    Gaussian,
    GridSpec,
    Hermite,
    StateVector,
    check_edges,
    fourier,
    frequencies,
    generator_from_spec,
    inner,
    inverse_fourier,
    make_state,
    multiply_phase,
    shift,
    state_fourier,
)

import oracles


def test_default_grid_layout():
    g = DEFAULT_GRID
    assert g.n_points == 1024
    assert g.step == pytest.approx(0.0234375, abs=0)
    assert g.points[0] == -12.0
    assert g.points[-1] == pytest.approx(12.0 - g.step)
    lo, hi = g.r_window
    assert lo == pytest.approx(np.exp(-12)) and hi == pytest.approx(np.exp(12))


@pytest.mark.parametrize("args", [(1000, -1, 1), (64, 1, 2), (64, -1, -2), (64, 2, 1)])
def test_grid_validation(args):
    with pytest.raises((ValueError, BadShape)):
        GridSpec(*args)


def test_make_state_normalized():
    xi = make_state(DEFAULT_GRID, Gaussian(0.5, 1.3))
    assert xi.norm == pytest.approx(1.0, abs=1e-14)
    ref = oracles.gauss1_normalized(DEFAULT_GRID.points, 0.5, 1.3)
    assert np.max(np.abs(xi.values - ref)) < 1e-13


def test_state_values_read_only():
    xi = make_state(DEFAULT_GRID, Gaussian())
    with pytest.raises(ValueError):
        xi.values[0] = 1.0


def test_edge_leak_raised():
    with pytest.raises(EdgeLeak):
        make_state(DEFAULT_GRID, Gaussian(10.0, 1.0))
    xi = make_state(DEFAULT_GRID, Gaussian(0.0, 1.0))
    assert check_edges(xi) < 1e-10


def test_zero_state_not_normalizable():
    with pytest.raises(NonNormalizable):
        make_state(DEFAULT_GRID, lambda s: np.zeros_like(s))


def test_bump_compact_support():
    grid = GridSpec(1024, -10.0, 10.0)
    xi = make_state(grid, Bump((-1.0, 1.0)))
    outside = np.abs(grid.points) >= 1.0
    assert np.all(xi.values[outside] == 0)
    assert np.all(np.abs(xi.values[~outside]) > 0)


def test_hermite_orthonormal():
    s = DEFAULT_GRID.points
    h = DEFAULT_GRID.step
    funcs = [Hermite(n, 0.3, 0.9)(s) for n in range(6)]
    gram = np.array([[np.sum(a * b) * h for b in funcs] for a in funcs])
    assert np.max(np.abs(gram - np.eye(6))) < 1e-12


def test_generator_from_spec():
    assert generator_from_spec({"kind": "gaussian", "center": 1, "width": 2}) == Gaussian(1.0, 2.0)
    assert generator_from_spec({"kind": "bump", "support": [0, 3]}) == Bump((0.0, 3.0))
    assert generator_from_spec({"kind": "hermite", "n": 2}) == Hermite(2, 0.0, 1.0)
    with pytest.raises(ValueError):
        generator_from_spec({"kind": "square"})


def test_shift_matches_translated_gaussian():
    xi = make_state(DEFAULT_GRID, Gaussian(0.0, 1.0))
    moved = shift(xi, 2.0)
    ref = oracles.gauss1_normalized(DEFAULT_GRID.points, -2.0, 1.0)
    assert np.max(np.abs(moved.values - ref)) < 1e-13


def test_shift_limits():
    xi = make_state(DEFAULT_GRID, Gaussian())
    with pytest.raises(ShiftTooLarge):
        shift(xi, 0.4 * DEFAULT_GRID.length)
    same = shift(xi, 0.0)
    assert np.array_equal(same.values, xi.values)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_shift_group_and_unitary(a, b):
    xi = make_state(DEFAULT_GRID, Gaussian(0.0, 0.8))
    two = shift(shift(xi, a), b)
    one = shift(xi, a + b)
    assert (two - one).norm < 1e-12
    assert shift(xi, a).norm == pytest.approx(1.0, abs=1e-12)


def test_multiply_phase_forms():
    xi = make_state(DEFAULT_GRID, Gaussian())
    th = 0.3 * DEFAULT_GRID.points
    a = multiply_phase(xi, th)
    b = multiply_phase(xi, lambda s: 0.3 * s)
    assert np.array_equal(a.values, b.values)
    assert a.norm == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(GridMismatch):
        multiply_phase(xi, np.zeros(3))


def test_inner_product():
    xi = make_state(DEFAULT_GRID, Gaussian(0.0, 1.0))
    eta = make_state(DEFAULT_GRID, Gaussian(1.0, 1.0))
    # <g0, g1> for unit-width normalised Gaussians is exp(-d^2/4)
    assert inner(xi, eta) == pytest.approx(np.exp(-0.25), abs=1e-13)
    other = StateVector(GridSpec(512, -12, 12), np.ones(512))
    with pytest.raises(GridMismatch):
        inner(xi, other)


def test_fourier_of_gaussian_closed_form():
    g = DEFAULT_GRID
    lam, xh = state_fourier(make_state(g, Gaussian(1.5, 0.7)))
    # normalised Gaussian: transform has width 1/0.7 and phase exp(-i lam 1.5)
    ref = oracles.gauss1_normalized(lam, 0.0, 1 / 0.7) * np.exp(-1j * lam * 1.5)
    assert np.max(np.abs(xh - ref)) < 1e-13


def test_fourier_round_trip_2d(rng):
    f = rng.normal(size=(32, 64)) + 1j * rng.normal(size=(32, 64))
    F = fourier(f, (0.2, 0.1), origin=(-3.2, -3.2))
    back = inverse_fourier(F, (0.2, 0.1), origin=(-3.2, -3.2))
    assert np.max(np.abs(back - f)) < 1e-12


def test_fourier_rejects_non_power_of_two():
    with pytest.raises(BadShape):
        fourier(np.ones(12))


def test_frequencies_centred():
    lam = frequencies(8, 0.5)
    assert lam[4] == 0.0
    assert lam[1] - lam[0] == pytest.approx(2 * np.pi / 4)
