"""Products, involutions and projections of momentum symbols.

Two Banach *-algebra structures live on integrable functions of
``(alpha, beta)``:

* the algebra of symbols with the star product ``*`` and involution
  ``phi^*(a, b) = conj(phi(-a, -b))``, representing operator products of the
  Weyl-quantised symbols;
* the group algebra of the radial group with convolution ``x`` against the
  left Haar measure ``exprel(a) da db`` and ``phi^dag = e^{-a} phi^*``.

The map ``u phi = phi / exprel(alpha)`` intertwines them.
"""
from __future__ import annotations

import numpy as np

from . import _twisted
from ._interp import ORDER
from .errors import QuadratureBoxTooSmall
from .special import exprel
from .symbols import (
    DEFAULT_LATTICE,
    GaussianMixture,
    MomentumLattice,
    SampledSymbol,
    check_box,
    edge_ratio,
    from_mixed,
    sample,
)

__all__ = [
    "star_momentum",
    "convolve_group",
    "product_rows",
    "involution_B",
    "dagger_group",
    "digamma",
    "iso_u",
    "iso_u_inverse",
    "project_even",
    "trivial_character",
    "l1_norm",
    "l1_distance",
]

OVERSAMPLE = 8
BOX_TOL = 1e-8


def _lattice_for(*symbols, lattice=None):
    if lattice is not None:
        return lattice
    for s in symbols:
        if isinstance(s, SampledSymbol):
            return s.lattice
    return DEFAULT_LATTICE


def _is_zero(phi) -> bool:
    return phi.is_zero()


def _fine_rows(phi, lattice: MomentumLattice, box_tol: float):
    """Oversampled ``Phi`` rows of a factor, with box guards."""
    if isinstance(phi, GaussianMixture):
        a, b = lattice.mesh()
        check_box(phi(a, b), box_tol, "factor in momentum box")
        hx = lattice.h_x / OVERSAMPLE
        x0 = -lattice.x_max
        xf = x0 + hx * np.arange(OVERSAMPLE * lattice.n_beta)
        aa, xx = np.meshgrid(lattice.alphas, xf, indexing="ij")
        table = phi.mixed(aa, xx)
    else:
        phi = sample(phi, lattice)
        check_box(phi.values, box_tol, "factor in momentum box")
        table, x0, hx = phi.fine_rows(OVERSAMPLE)
    check_box(table, box_tol, "factor in position window", axes=(1,))
    return np.ascontiguousarray(table), x0, hx


def product_rows(phi1, phi2, lattice: MomentumLattice | None = None, kind: str = "star",
                 rows=None, box_tol: float = BOX_TOL) -> np.ndarray:
    """Partial transform ``Phi12(alpha_i, x_k)`` of a product for selected rows.

    ``rows`` are lattice indices of ``alpha`` (default: all).  ``kind`` is
    ``"star"`` or ``"group"``.
    """
    lattice = _lattice_for(phi1, phi2, lattice=lattice)
    rows = np.arange(lattice.n_alpha) if rows is None else np.atleast_1d(np.asarray(rows))
    if _is_zero(phi1) or _is_zero(phi2):
        return np.zeros((rows.size, lattice.n_beta), dtype=complex)
    tab1, x0, hx = _fine_rows(phi1, lattice, box_tol)
    tab2, _, _ = _fine_rows(phi2, lattice, box_tol)
    max1 = np.abs(tab1).max(axis=1)
    max2 = np.abs(tab2).max(axis=1)
    prune = 1e-17 * max1.max() * max2.max()
    code = {"star": _twisted.STAR, "group": _twisted.GROUP}[kind]
    return _twisted.twisted_rows(tab1, tab2, x0, hx, lattice.alphas, lattice.xs,
                                 rows.astype(np.int64), code, max1, max2, prune, ORDER)


def _product(phi1, phi2, lattice, kind, box_tol):
    lattice = _lattice_for(phi1, phi2, lattice=lattice)
    mixed = product_rows(phi1, phi2, lattice, kind, None, box_tol)
    if np.any(mixed):
        check_box(mixed, box_tol, f"{kind} product in position window", axes=(1,))
    values = from_mixed(mixed, lattice)
    if np.any(values):
        check_box(values, box_tol, f"{kind} product in momentum box")
    return SampledSymbol(lattice, values, mixed)


def star_momentum(phi1, phi2, lattice: MomentumLattice | None = None,
                  box_tol: float = BOX_TOL) -> SampledSymbol:
    """Star product

        (phi1 * phi2)(a, b) = \\int da' db' w(a-a', a) phi1(a', b')
                              phi2(a - a', w(a-a', a) b - w(a'-a, a') b')

    sampled on ``lattice``.  Raises :class:`QuadratureBoxTooSmall` when an
    input or the result is not negligible at the edges of the lattice box or
    of the conjugate position window.
    """
    return _product(phi1, phi2, lattice, "star", box_tol)


def convolve_group(phi1, phi2, lattice: MomentumLattice | None = None,
                   box_tol: float = BOX_TOL) -> SampledSymbol:
    """Convolution on the radial group against the left Haar measure."""
    return _product(phi1, phi2, lattice, "group", box_tol)


def _reflect(values, axes):
    """``v(-a, -b)`` on a centred lattice (the unmatched first node becomes 0)."""
    out = values
    for ax in axes:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
        idx = [slice(None)] * out.ndim
        idx[ax] = 0
        out = out.copy()
        out[tuple(idx)] = 0
    return out


def involution_B(phi):
    """``phi^*(a, b) = conj(phi(-a, -b))``."""
    if isinstance(phi, GaussianMixture):
        return phi.reflect([0, 1]).conj()
    return SampledSymbol(phi.lattice, np.conj(_reflect(phi.values, (0, 1))))


def digamma(phi):
    """``phi(a, -b)``; intertwines the two faithful representations."""
    if isinstance(phi, GaussianMixture):
        return phi.reflect([1])
    return SampledSymbol(phi.lattice, _reflect(phi.values, (1,)))


def dagger_group(phi):
    """Group-algebra involution ``e^{-a} conj(phi(-a, -b))``."""
    if isinstance(phi, GaussianMixture):
        return involution_B(phi).times_exp(0, -1.0)
    vals = np.exp(-phi.lattice.alphas)[:, None] * np.conj(_reflect(phi.values, (0, 1)))
    return SampledSymbol(phi.lattice, vals)


def iso_u(phi, lattice: MomentumLattice | None = None) -> SampledSymbol:
    """``(u phi)(a, b) = phi(a, b) / exprel(a)``."""
    s = sample(phi, _lattice_for(phi, lattice=lattice))
    return SampledSymbol(s.lattice, s.values / exprel(s.lattice.alphas)[:, None])


def iso_u_inverse(phi, lattice: MomentumLattice | None = None) -> SampledSymbol:
    s = sample(phi, _lattice_for(phi, lattice=lattice))
    return SampledSymbol(s.lattice, s.values * exprel(s.lattice.alphas)[:, None])


def project_even(phi, sign: int = 1, lattice: MomentumLattice | None = None,
                 box_tol: float = BOX_TOL) -> SampledSymbol:
    """``E_+`` (sign=+1) or ``E_-`` (sign=-1).

    The position-space symbol is made even in its second variable by
    copying the half-line ``x > 0`` (or ``x < 0``) onto the other half.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    s = sample(phi, _lattice_for(phi, lattice=lattice))
    lat = s.lattice
    mixed = s.mixed_values
    c = lat.n_beta // 2
    folded = mixed.copy()
    k = np.arange(1, c)
    if sign > 0:
        folded[:, c - k] = mixed[:, c + k]
    else:
        folded[:, c + k] = mixed[:, c - k]
    values = from_mixed(folded, lat)
    if np.any(values):
        ratio = edge_ratio(values)
        if ratio > box_tol:
            raise QuadratureBoxTooSmall(
                f"projection leaves edge/peak ratio {ratio:.2e}; the folded symbol has a kink at x=0")
    return SampledSymbol(lat, values, folded)


def trivial_character(phi, t: float) -> complex:
    """``\\int da db phi(a, b) e^{i a t}``, the one-dimensional representation ``R = 0``."""
    if isinstance(phi, GaussianMixture):
        if phi.is_zero():
            return 0j
        return complex(2 * np.pi * phi.inverse_fourier()(t, 0.0))
    # the beta integral is the x = 0 column of the mixed representation
    lat = phi.lattice
    col = phi.mixed_values[:, lat.n_beta // 2]
    return complex(lat.h_alpha * np.sum(col * np.exp(1j * lat.alphas * t)))


def _auto_lattice(phi: GaussianMixture, n: int = 512) -> MomentumLattice:
    (a_lo, a_hi), (b_lo, b_hi) = phi.box(1e-16)
    return MomentumLattice(n, n, max(abs(a_lo), abs(a_hi)), max(abs(b_lo), abs(b_hi)))


def l1_norm(phi, haar: bool = False, lattice: MomentumLattice | None = None) -> float:
    """``\\int |phi|`` or, with ``haar=True``, ``\\int exprel(a) |phi|``."""
    if isinstance(phi, GaussianMixture):
        if phi.is_zero():
            return 0.0
        lattice = lattice or _auto_lattice(phi)
    s = sample(phi, _lattice_for(phi, lattice=lattice))
    lat = s.lattice
    mag = np.abs(s.values)
    if haar:
        mag = mag * exprel(lat.alphas)[:, None]
    return float(lat.h_alpha * lat.h_beta * mag.sum())


def l1_distance(phi1, phi2, lattice: MomentumLattice | None = None, haar: bool = False) -> float:
    lattice = _lattice_for(phi1, phi2, lattice=lattice)
    diff = sample(phi1, lattice).values - sample(phi2, lattice).values
    return l1_norm(SampledSymbol(lattice, diff), haar=haar)
