import numpy as np
import pytest

from kappa_weyl import quantization as qz
from kappa_weyl import symbol_algebra as sa
from kappa_weyl.errors import BadShape, GridMismatch, SymbolNotEvaluable, UnsupportedDimension
from kappa_weyl.grid import DEFAULT_GRID, Gaussian, GridSpec, make_state
from kappa_weyl.symbols import GaussianMixture

import oracles

PARS = (1.0, 0.3, 4.0, 1.8, 0.5, 0.2, 0.3)  # amp, t0, r0, sigma, tau, u, v
SYMBOL = GaussianMixture.gaussian([0.3, 4.0], [1.8, 0.5], [0.2, 0.3])
S = DEFAULT_GRID.points


def _state_fn(s):
    return oracles.gauss1(s, 1.0, 0.7) / (np.pi * 0.49) ** 0.25


@pytest.fixture(scope="module")
def applied():
    xi = make_state(DEFAULT_GRID, Gaussian(1.0, 0.7))
    return xi, qz.kernel_kappa(SYMBOL).apply(xi).values


@pytest.fixture(scope="module")
def weyl_reference():
    def f_hat(a, b):
        return oracles.gauss2_hat(a, b, *PARS)
    return oracles.weyl_integral(f_hat, _state_fn, S, (-4.5, 4.5), (-14, 14), 0.1)


def _rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_kernel_matches_weyl_integral(applied, weyl_reference):
    _, got = applied
    assert _rel(got, weyl_reference) < 1e-8


def test_normalization_constant_resolved(applied, weyl_reference):
    _, got = applied
    unit = got / qz.C0
    c0 = np.vdot(unit, weyl_reference) / np.vdot(unit, unit)
    assert abs(c0 * np.sqrt(2 * np.pi) - 1) < 1e-12


def test_package_weyl_sum_agrees_with_oracle(applied, weyl_reference):
    xi, _ = applied
    out = qz.weyl_integral_apply(SYMBOL.fourier(), xi, (-4.5, 4.5), (-14, 14), 0.1, 0.1)
    assert _rel(out.values, weyl_reference) < 1e-12


def test_ccr_bridge_against_canonical_integral(applied):
    _, got = applied
    alphas = np.arange(-4.5, 4.5001, 0.1)
    betas = np.arange(-60, 60.0001, 0.1)
    g_hat = oracles.ccr_symbol_hat(lambda a, r: oracles.gauss2_f1(a, r, *PARS), alphas, betas)
    ref = oracles.ccr_integral(g_hat, alphas, betas, _state_fn, S)
    assert _rel(got, ref) < 1e-10
    H = qz.kernel_ccr(qz.kappa_to_ccr(SYMBOL))
    assert H.relative_error(qz.kernel_kappa(SYMBOL)) < 1e-12


def test_ccr_symbol_pointwise():
    g = qz.kappa_to_ccr(SYMBOL)
    # at lam -> 0 the bridge is F_1 g(0, q) = F_1 f(0, e^{-q})
    q = np.array([-1.5, -1.386, -1.2])
    assert np.allclose(g.f1(0.0, q), SYMBOL.f1(0.0, np.exp(-q)), rtol=1e-14)
    assert np.all(np.isfinite(g(0.3, q)))
    assert qz.kappa_to_ccr(GaussianMixture.zero()).is_zero()


def test_kernel_of_zero_symbol():
    K = qz.kernel_kappa(GaussianMixture.zero())
    assert not np.any(K.entries)
    assert not np.any(qz.kernel_ccr(qz.kappa_to_ccr(GaussianMixture.zero())).entries)


def test_kernel_hermitian_for_real_symbol():
    f = GaussianMixture.gaussian([0.0, 3.0], [1.0, 0.5])
    K = qz.kernel_kappa(f)
    assert K.relative_error(K.adjoint()) < 1e-6


def test_pi_of_transform_is_two_pi_quantisation():
    f = GaussianMixture.gaussian([0.0, 3.0], [1.0, 0.5], [0.1, 0.2])
    lhs = qz.kernel_pi(f.fourier())
    rhs = qz.kernel_kappa(f) * (2 * np.pi)
    assert lhs.relative_error(rhs) < 1e-13


def test_kernel_of_star_product(pos_pair, star_pair):
    f, g = pos_pair
    lhs = qz.kernel_kappa(star_pair * (1 / (2 * np.pi)))
    rhs = qz.kernel_kappa(f) @ qz.kernel_kappa(g)
    assert lhs.relative_error(rhs) < 1e-6


def test_kernel_needs_evaluable_symbol():
    with pytest.raises(SymbolNotEvaluable):
        qz.kernel_kappa(lambda t, r: t)


def test_kernel_matrix_checks():
    g = GridSpec(64, -4, 4)
    with pytest.raises(BadShape):
        qz.KernelMatrix(g, np.zeros((3, 3)))
    K = qz.KernelMatrix(g, np.eye(64))
    with pytest.raises(GridMismatch):
        K @ qz.KernelMatrix(GridSpec(64, -5, 5), np.eye(64))
    assert K.trace() == pytest.approx(64 * g.step)
    assert K.hs_norm() == pytest.approx(8 * g.step)


def test_conjugate_by_translation_matches_shifted_symbol():
    f = GaussianMixture.gaussian([0.0, 3.0], [1.0, 0.5])
    theta = 0.4
    K = qz.conjugate_by_translation(qz.kernel_kappa(f), theta)
    # shifting s by theta rescales R by e^{-theta}: kernel of f(t, e^{-theta} r)
    ref = qz.kernel_kappa(GaussianMixture.gaussian([0.0, 3.0 * np.exp(theta)],
                                                   [1.0, 0.5 * np.exp(theta)]))
    # the FFT shift wraps the ~1e-8 kernel tails at the grid edges
    assert K.relative_error(ref) < 1e-7


@pytest.mark.parametrize("d, area", [(1, 2.0), (2, 2 * np.pi), (3, 4 * np.pi)])
def test_sphere_directions(d, area):
    dirs, wts = qz.sphere_directions(d)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1)
    assert wts.sum() == pytest.approx(area)
    with pytest.raises(UnsupportedDimension):
        qz.sphere_directions(4)


def test_lift_fibers_match_restrictions():
    f = GaussianMixture.gaussian([0.2, 1.0, -0.5], [1.0, 0.7, 0.9], [0.1, 0.3, -0.2], amp=1j)
    field = qz.lift_cartesian(f, 2, 16)
    t, r = np.array([0.1, -0.4]), np.array([0.5, 1.7])
    for c, fib in zip(field.directions, field.fibers):
        assert np.allclose(fib(t, r), f(t, r * c[0], r * c[1]), rtol=1e-13, atol=1e-15)
    ring = qz.RingSymbol(GaussianMixture.gaussian([0.0, 2.0], [1.0, 0.5]), 3)
    lifted = qz.lift_cartesian(ring, 3, 8)
    assert all(fb is ring.profile for fb in lifted.fibers)
    assert ring(0.0, 2.0, 0.0, 0.0) == pytest.approx(1.0)
    with pytest.raises(UnsupportedDimension):
        qz.lift_cartesian(f, 1)


def test_star_cartesian_ring_fibers(lattice):
    profile = GaussianMixture.gaussian([0.0, 4.0], [1.0, 0.5])
    ring = qz.RingSymbol(profile, 2)
    field = qz.star_cartesian(ring, ring, 2, lattice, n_directions=4)
    assert len(field.fibers) == 4 and field.fibers[0] is field.fibers[3]
    ref = qz.kernel_kappa(profile) @ qz.kernel_kappa(profile)
    assert qz.kernel_kappa(field.fibers[0]).relative_error(ref) < 1e-6


def _rotation(th):
    return np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])


def test_gd_action_is_left_action(rng):
    f = GaussianMixture.gaussian([0.2, 1.0, -0.5], [1.0, 0.7, 0.9], [0.1, 0.3, -0.2])
    g1 = qz.GdElement(_rotation(0.7), 0.3, 1.4)
    g2 = qz.GdElement(_rotation(-1.9), -0.8, 0.6)
    pts = rng.normal(size=(3, 40))
    lhs = qz.act_gd(g1, qz.act_gd(g2, f))(*pts)
    rhs = qz.act_gd(qz.compose_gd(g1, g2), f)(*pts)
    assert np.max(np.abs(lhs - rhs)) < 1e-14
    # direct definition f(t - a, lam^{-1} A^{-1} x)
    y = np.linalg.inv(g1.A) @ pts[1:] / g1.lam
    assert np.allclose(qz.act_gd(g1, f)(*pts), f(pts[0] - g1.a, *y), rtol=1e-13)


def test_gd_signed_permutation_stays_closed_form():
    f = GaussianMixture.gaussian([0.2, 1.0, -0.5], [1.0, 0.7, 0.9], [0.1, 0.3, -0.2])
    g = qz.GdElement(np.array([[0.0, -1.0], [1.0, 0.0]]), 0.5, 2.0)
    moved = qz.act_gd(g, f)
    assert isinstance(moved, GaussianMixture)
    t, x1, x2 = 0.3, 0.9, -1.2
    y = np.linalg.inv(g.A) @ np.array([x1, x2]) / g.lam
    assert moved(t, x1, x2) == pytest.approx(f(t - 0.5, *y), rel=1e-13)


def test_gd_validation():
    with pytest.raises(ValueError):
        qz.GdElement(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        qz.GdElement(np.eye(2), 0.0, -1.0)
    e = qz.GdElement.identity(3)
    assert np.array_equal(e.A, np.eye(3))


def test_dilation_covariance_d1():
    f = GaussianMixture.gaussian([0.0, 2.5], [1.0, 0.35]) + \
        GaussianMixture.gaussian([0.3, -3.0], [1.2, 0.4], [0.2, 0.1]) * 0.5
    lam = 1.5
    moved = qz.lift_cartesian(qz.act_gd(qz.GdElement(np.eye(1), 0.0, lam), f), 1)
    base = qz.lift_cartesian(f, 1)
    for fa, fb in zip(moved.fibers, base.fibers):
        lhs = qz.kernel_kappa(fa)
        rhs = qz.conjugate_by_translation(qz.kernel_kappa(fb), np.log(lam))
        assert lhs.relative_error(rhs) < 1e-9


@pytest.mark.parametrize("fmt", ["bin", "csv"])
def test_kernel_file_round_trip(tmp_path, fmt):
    grid = GridSpec(64, -4.0, 4.0)
    K = qz.kernel_kappa(GaussianMixture.gaussian([0.1, 1.0], [1.0, 0.5], [0.2, 0.3]), grid)
    path = tmp_path / f"k.{fmt}"
    write = qz.write_kernel_bin if fmt == "bin" else qz.write_kernel_csv
    read = qz.read_kernel_bin if fmt == "bin" else qz.read_kernel_csv
    write(K, path)
    back = read(path)
    assert back.grid == grid
    assert np.array_equal(back.entries, K.entries)
    assert not any(p.name.startswith(".tmp-") for p in tmp_path.iterdir())


def test_bad_kernel_file(tmp_path):
    p = tmp_path / "junk.bin"
    p.write_bytes(b"nope" + bytes(40))
    with pytest.raises(BadShape):
        qz.read_kernel_bin(p)


def test_star_pair_is_sampled(star_pair, lattice):
    assert star_pair.lattice == lattice
    assert sa.l1_norm(star_pair) > 0


def test_real_r_even_symbol_gives_self_adjoint_kernel():
    f = GaussianMixture.gaussian([0.3, 0.0], [1.0, 1.5])
    K = qz.kernel_kappa(f)
    assert K.relative_error(K.adjoint()) < 1e-10


def test_distinct_even_symbols_distinct_kernels():
    f = GaussianMixture.gaussian([0.0, 0.0], [1.0, 1.5])
    g = GaussianMixture.gaussian([0.0, 0.0], [1.0, 1.6])
    assert qz.kernel_kappa(f).relative_error(qz.kernel_kappa(g)) > 1e-3
