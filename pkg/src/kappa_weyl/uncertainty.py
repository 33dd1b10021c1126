"""Uncertainties of time and radius on grid states, bump states and physical scales.

Units: ``T = P / kappa`` with ``P = -i d/ds`` and ``R = e^{-Q}``, so that
``[T, R] = (i / kappa) R`` and every state obeys
``Delta T * Delta R >= <R> / (2 kappa)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import EdgeLeak, GridTooSmall, NonNormalizable
from .grid import EDGE_FRACTION, Bump, GridSpec, StateVector, check_edges, make_state, state_fourier

__all__ = [
    "MomentReport",
    "moments",
    "bump_width_for",
    "make_bump_state",
    "BUMP_GRID",
    "PhysicalScales",
    "estimate_L",
    "required_kappa_inv",
    "Scenario",
    "SCENARIOS",
    "run_scenario",
]

VAR_FLOOR = 1e-12
# a grid long enough for the eps = 0.05 bump (support ~ 80) translated by up to ~16
BUMP_GRID = GridSpec(8192, -16.0, 112.0)


@dataclass(frozen=True)
class MomentReport:
    mean_T: float
    var_T: float
    mean_R: float
    var_R: float
    kappa: float

    @property
    def delta_T(self) -> float:
        return float(np.sqrt(max(self.var_T, 0.0)))

    @property
    def delta_R(self) -> float:
        return float(np.sqrt(max(self.var_R, 0.0)))

    @property
    def product(self) -> float:
        return self.delta_T * self.delta_R

    @property
    def bound(self) -> float:
        return self.mean_R / (2 * self.kappa)

    @property
    def slack(self) -> float:
        return self.product - self.bound


def _momentum_density(xi: StateVector, momentum_tol: float):
    lam, xh = state_fourier(xi)
    dens = np.abs(xh) ** 2
    m = max(1, int(EDGE_FRACTION * lam.size))
    peak = dens.max()
    leak = max(dens[:m].max(), dens[-m:].max())
    if leak > momentum_tol * peak:
        raise EdgeLeak(f"momentum-space edge density {leak / peak:.2e} of peak; refine the grid")
    return lam, dens


def moments(xi: StateVector, kappa: float = 1.0, edge_tol: float = 1e-10,
            momentum_tol: float = 1e-12) -> MomentReport:
    """Means and variances of ``T`` (Fourier side) and ``R`` (position side)."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    norm2 = xi.norm**2
    if not np.isfinite(norm2) or norm2 <= 0:
        raise NonNormalizable("state has zero or non-finite norm")
    check_edges(xi.with_values(xi.values / np.sqrt(norm2)), edge_tol)
    lam, dens = _momentum_density(xi, momentum_tol)
    dens = dens / dens.sum()
    mean_p = float(np.sum(lam * dens))
    var_p = float(np.sum((lam - mean_p) ** 2 * dens))
    pos = np.abs(xi.values) ** 2
    pos = pos / pos.sum()
    r = np.exp(-xi.grid.points)
    mean_r = float(np.sum(r * pos))
    var_r = float(np.sum((r - mean_r) ** 2 * pos))
    return MomentReport(mean_p / kappa, var_p / kappa**2, mean_r, var_r, float(kappa))


# -- bump states -------------------------------------------------------------


def _bump_delta_p(half_width: float, n: int = 4096) -> float:
    """``Delta P`` of the mollifier on ``[0, 2 w]``, from the exact derivative.

    ``Delta P = |xi'| / |xi|`` for a real bump; the integrals are taken on a
    fine reference grid in the scaled variable.
    """
    x = np.linspace(-1, 1, n + 1)[1:-1]
    g = np.exp(-1.0 / (1.0 - x**2))
    dg = g * (-2 * x / (1.0 - x**2) ** 2)
    return float(np.sqrt(np.sum(dg**2) / np.sum(g**2))) / half_width


def bump_width_for(eps: float, margin: float = 0.98) -> float:
    """Half-width ``w`` with ``Delta P = margin * eps``, by bisection."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    target = margin * eps
    return float(brentq(lambda w: _bump_delta_p(w) - target, 1e-6, 1e9, xtol=1e-12, rtol=1e-14))


def make_bump_state(eps: float, lam: float, grid: GridSpec = BUMP_GRID,
                    edge_tol: float = 1e-10) -> StateVector:
    """Smooth compactly supported state with ``Delta T < eps`` (kappa = 1).

    The mollifier ``exp(-1/(1 - x^2))`` is widened until ``Delta P < eps``
    and placed on ``[lam, lam + 2 w]``, i.e. translated by ``lam`` from a
    support starting at ``s = 0``; then ``R <= e^{-lam}`` on the support.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    w = bump_width_for(eps)
    lo, hi = lam, lam + 2 * w
    m = max(1, int(EDGE_FRACTION * grid.n_points))
    inner_lo = grid.s_min + m * grid.step
    inner_hi = grid.s_max - m * grid.step
    if lo < inner_lo or hi > inner_hi:
        raise GridTooSmall(f"bump support [{lo:.3g}, {hi:.3g}] does not fit the grid interior "
                           f"[{inner_lo:.3g}, {inner_hi:.3g}]")
    if 2 * w < 16 * grid.step:
        raise GridTooSmall("bump support spans fewer than 16 grid points")
    state = make_state(grid, Bump((lo, hi)), edge_tol=edge_tol)
    if moments(state).delta_T >= eps:
        raise GridTooSmall("grid too coarse to resolve the bump derivative")
    return state


# -- physical scales ---------------------------------------------------------


@dataclass(frozen=True)
class PhysicalScales:
    """``1/kappa`` in metres and the speed of light in m/s."""

    kappa_inv_m: float = 1e-35
    c_m_per_s: float = 299792458.0

    def __post_init__(self):
        if not (self.kappa_inv_m > 0 and self.c_m_per_s > 0):
            raise ValueError("physical scales must be positive")

    @property
    def kappa(self) -> float:
        return 1.0 / self.kappa_inv_m


def estimate_L(dT_s: float, dR_m: float, scales: PhysicalScales = PhysicalScales()) -> float:
    """Largest distance ``L = 2 kappa c Delta T Delta R`` (metres)."""
    if dT_s <= 0 or dR_m <= 0:
        raise ValueError("uncertainties must be positive")
    return 2 * scales.kappa * scales.c_m_per_s * dT_s * dR_m


def required_kappa_inv(L_m: float, c_dT_dR_m2: float) -> float:
    """``1/kappa`` needed so that ``L <= 2 kappa c Delta T Delta R`` (metres)."""
    if L_m <= 0 or c_dT_dR_m2 <= 0:
        raise ValueError("inputs must be positive")
    return 2 * c_dT_dR_m2 / L_m


@dataclass(frozen=True)
class Scenario:
    name: str
    quantity: str
    value: float
    unit: str
    inputs: dict


def run_scenario(name: str, scales: PhysicalScales = PhysicalScales()) -> Scenario:
    """Named physical estimates: ``lhc``, ``atomic`` and ``earth``."""
    c = scales.c_m_per_s
    if name == "lhc":
        dR = 1e-19
        dT = dR / c
        return Scenario(name, "L_max", estimate_L(dT, dR, scales), "m",
                        {"c*dT_m": dR, "dR_m": dR, "kappa_inv_m": scales.kappa_inv_m})
    if name == "atomic":
        tau0, ell0 = 1.5e-16, 0.5e-10
        return Scenario(name, "L_max", estimate_L(tau0, ell0, scales), "m",
                        {"dT_s": tau0, "dR_m": ell0, "kappa_inv_m": scales.kappa_inv_m})
    if name == "earth":
        L, prod = 1e7, 1e-38
        return Scenario(name, "kappa_inv_required", required_kappa_inv(L, prod), "m",
                        {"L_m": L, "c*dT*dR_m2": prod})
    raise ValueError(f"unknown scenario {name!r}")


SCENARIOS = ("lhc", "atomic", "earth")
