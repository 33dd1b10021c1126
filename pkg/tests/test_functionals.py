import mpmath
import numpy as np
import pytest

from kappa_weyl import functionals as fn
from kappa_weyl import quantization as qz
from kappa_weyl.errors import DivergentAtOrigin, SymbolNotEvaluable, UnsupportedDimension
from kappa_weyl.grid import DEFAULT_GRID
from kappa_weyl.symbols import GaussianMixture

import oracles

PARS = (1.0, 0.3, 4.0, 1.8, 0.5, 0.2, 0.3)
F = GaussianMixture.gaussian([0.3, 4.0], [1.8, 0.5], [0.2, 0.3])
R_WINDOW = DEFAULT_GRID.r_window


def _radial_gauss_log_integral(r0, tau):
    """``\\int_0^inf exp(-(r - r0)^2 / 2 tau^2) dr / r`` is divergent; use the window instead."""
    lo, hi = R_WINDOW
    g = lambda r: mpmath.exp(-(r - r0) ** 2 / (2 * tau**2)) / r
    return float(mpmath.quad(g, [lo, r0 - 8 * tau, r0, r0 + 8 * tau, hi]))


def test_trace_constant_pinned():
    """Matrix trace against an independent (t, log r) quadrature of the symbol."""
    num = oracles.log_r_integral(lambda t, r: oracles.gauss2(t, r, *PARS), (-20, 20), R_WINDOW)
    mat = qz.kernel_kappa(F).trace()
    assert abs(mat / num - 1 / (2 * np.pi)) < 1e-10
    assert fn.TRACE_CONSTANT == 1 / (2 * np.pi)


def test_trace_integral_closed_form():
    f = GaussianMixture.gaussian([0.0, 4.0], [1.2, 0.5])
    t_part = np.sqrt(2 * np.pi) * 1.2
    ref = t_part * _radial_gauss_log_integral(4.0, 0.5) / (2 * np.pi)
    assert fn.trace_integral(f) == pytest.approx(ref, rel=1e-12)


def test_trace_symbol_sides_agree():
    rep = fn.trace_symbol(F)
    assert rep.relative_error < 1e-10
    assert rep.relative_error == abs(rep.symbol_side - rep.operator_side) / abs(rep.symbol_side)


def test_trace_zero_and_odd_symbols():
    rep = fn.trace_symbol(GaussianMixture.zero())
    assert rep.symbol_side == 0 and rep.operator_side == 0 and rep.relative_error == 0
    odd = GaussianMixture.gaussian([1.0, 4.0], [1.0, 0.5]) - GaussianMixture.gaussian([-1.0, 4.0], [1.0, 0.5])
    assert abs(fn.trace_symbol(odd).symbol_side) < 1e-10


def test_trace_example_needs_relaxed_origin_guard():
    f = GaussianMixture.gaussian([0.0, 3.0], [np.sqrt(0.5), np.sqrt(0.5)])
    with pytest.raises(DivergentAtOrigin):
        fn.trace_symbol(f)
    rep = fn.trace_symbol(f, origin_tol=1e-3)
    assert rep.relative_error < 1e-3


def test_trace_linear_and_conjugate():
    g = GaussianMixture.gaussian([-0.2, 4.2], [1.0, 0.45], [0.1, -0.2])
    a, b = 0.7 - 0.2j, -1.3
    lhs = fn.trace_integral(a * F + b * g)
    assert lhs == pytest.approx(a * fn.trace_integral(F) + b * fn.trace_integral(g), rel=1e-12)
    assert fn.trace_integral(F.conj()) == pytest.approx(np.conj(fn.trace_integral(F)), rel=1e-12)


def test_trace_of_sampled_symbol(star_pair, pos_pair):
    """The star product of transforms gives the trace of the operator product."""
    f, g = pos_pair
    prod = star_pair * (1 / (2 * np.pi))
    op = (qz.kernel_kappa(f) @ qz.kernel_kappa(g)).trace()
    assert fn.trace_symbol(prod.__class__(prod.lattice, prod.values)).operator_side == pytest.approx(
        op, rel=1e-6)


def test_hs_norm():
    f = GaussianMixture.gaussian([0.0, 3.0], [1.0, 0.5])
    assert fn.hs_norm(f) == pytest.approx(fn.hs_norm_matrix(f), rel=1e-6)
    assert fn.hs_norm(2 * f) == pytest.approx(2 * fn.hs_norm(f), rel=1e-14)
    assert fn.hs_norm(GaussianMixture.zero()) == 0.0
    # |f|^2 = exp(-t^2 - (r-3)^2 / 0.25): closed form in t, mpmath in r
    ref = np.sqrt(np.sqrt(np.pi) * _radial_gauss_log_integral(3.0, 0.5 / np.sqrt(2)) / (2 * np.pi))
    assert fn.hs_norm(f) == pytest.approx(ref, rel=1e-12)


def test_hs_norm_needs_closed_form(star_pair):
    with pytest.raises(SymbolNotEvaluable):
        fn.hs_norm(star_pair)


def test_divergent_at_origin():
    near = GaussianMixture.gaussian([0.0, 0.5], [1.0, 1.0])
    with pytest.raises(DivergentAtOrigin):
        fn.trace_integral(near)
    with pytest.raises(DivergentAtOrigin):
        fn.hs_norm(near)


@pytest.mark.parametrize("d, area", [(1, 2.0), (2, 2 * np.pi), (3, 4 * np.pi)])
def test_sphere_area(d, area):
    assert fn.sphere_area(d) == area
    with pytest.raises(UnsupportedDimension):
        fn.sphere_area(0)


def test_sphere_area_matches_gamma_formula():
    from scipy.special import gamma
    for d in (1, 2, 3):
        assert fn.sphere_area(d) == pytest.approx(2 * np.pi ** (d / 2) / gamma(d / 2), rel=1e-15)


def test_tau_radial_d1_is_sum_of_fibers():
    f = GaussianMixture.gaussian([0.1, 4.0], [1.0, 0.5], [0.2, 0.1]) + \
        GaussianMixture.gaussian([-0.2, -3.8], [0.9, 0.45]) * 0.7
    field = qz.lift_cartesian(f, 1)
    parts = [fn.trace_integral(fib) for fib in field.fibers]
    assert fn.tau_radial(field) == pytest.approx(sum(parts), rel=1e-12)
    assert fn.tau_cartesian(f, 1) == pytest.approx(fn.tau_radial(field), rel=1e-6)


def test_tau_radial_rotation_invariant_d2():
    profile = GaussianMixture.gaussian([0.0, 4.0], [1.0, 0.5])
    field = qz.lift_cartesian(qz.RingSymbol(profile, 2), 2, 32)
    assert fn.tau_radial(field) == pytest.approx(2 * np.pi * fn.trace_integral(profile), rel=1e-12)


def test_tau_cartesian_matches_radial_d2():
    f = GaussianMixture.gaussian([0.0, 3.5, 1.0], [1.0, 0.4, 0.6], [0.0, 0.3, 0.0])
    a = fn.tau_cartesian(f, 2)
    b = fn.tau_radial(qz.lift_cartesian(f, 2, 64))
    assert abs(a - b) < 1e-5 * abs(b)


def test_tau_cartesian_ring_d2_and_d3():
    profile = GaussianMixture.gaussian([0.0, 4.0], [1.0, 0.5])
    base = fn.trace_integral(profile)
    assert fn.tau_cartesian(qz.RingSymbol(profile, 2), 2) == pytest.approx(2 * np.pi * base, rel=1e-4)
    assert fn.tau_cartesian(qz.RingSymbol(profile, 3), 3) == pytest.approx(4 * np.pi * base, rel=1e-3)


def test_tau_zero_and_errors():
    assert fn.tau_cartesian(GaussianMixture.zero(3), 2) == 0
    field = qz.lift_cartesian(GaussianMixture.zero(2), 1)
    assert fn.tau_radial(field) == 0
    with pytest.raises(UnsupportedDimension):
        fn.tau_cartesian(F, 2)
    with pytest.raises(UnsupportedDimension):
        fn.tau_cartesian(F, 4)


@pytest.fixture(scope="module")
def props(pos_pair, lattice):
    f, g = pos_pair
    return fn.check_trace_properties(f, g, lattice)


def test_product_trace_matches_matrix(props, pos_pair):
    f, g = pos_pair
    mat = (qz.kernel_kappa(f) @ qz.kernel_kappa(g)).trace()
    assert abs(props.trace_fg - mat) < 1e-6 * abs(mat)


def test_trace_properties(props):
    assert props.cyclic and props.positive
    assert props.cyclicity_residual < 1e-6 * props.scale
    assert abs(props.positivity - props.hs_norm_squared) < 1e-6 * props.hs_norm_squared
    assert abs(props.positivity_imag) < 1e-8 * props.scale


def test_trace_properties_same_symbol(pos_pair, lattice):
    f, _ = pos_pair
    rep = fn.check_trace_properties(f, f, lattice)
    assert rep.cyclicity_residual == 0.0


def test_singular_decay():
    K = qz.kernel_kappa(F)
    sv = fn.singular_decay(K, 64)
    assert all(a >= b for a, b in zip(sv, sv[1:]))
    assert sv[63] / sv[0] < 1e-6
    full = fn.singular_decay(K, DEFAULT_GRID.n_points)
    assert np.sum(np.square(full)) == pytest.approx(K.hs_norm() ** 2, rel=1e-8)
    zero = qz.kernel_kappa(GaussianMixture.zero())
    assert fn.singular_decay(zero, 5) == [0.0] * 5
    with pytest.raises(ValueError):
        fn.singular_decay(K, 2000)


def test_near_separable_symbol_is_nearly_rank_one():
    # widths chosen so the kernel is a nearly isotropic Gaussian blob in (s, u),
    # i.e. close to an outer product a(s) a(u)
    f = GaussianMixture.gaussian([0.0, 4.0], [8.0, 0.25])
    sv = fn.singular_decay(qz.kernel_kappa(f), 2)
    assert sv[1] / sv[0] < 0.05
