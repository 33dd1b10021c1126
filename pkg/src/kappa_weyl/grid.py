"""Uniform periodic grid for L^2(R), sampled states and Fourier transforms.

Fourier convention (n-dimensional)::

    (F f)(lam)     = (2 pi)^{-n/2} \\int f(x) e^{-i lam.x} dx
    (F^{-1} g)(x)  = (2 pi)^{-n/2} \\int g(lam) e^{+i lam.x} dlam

Discrete transforms return samples on the centred frequency lattice
``frequencies(n, h)``, i.e. ``(j - n/2) * 2 pi / (n h)`` for ``j = 0..n-1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import eval_hermite, gammaln

from .errors import BadShape, EdgeLeak, GridMismatch, NonNormalizable, ShiftTooLarge

__all__ = [
    "GridSpec",
    "StateVector",
    "Gaussian",
    "Bump",
    "Hermite",
    "generator_from_spec",
    "make_state",
    "check_edges",
    "inner",
    "shift",
    "multiply_phase",
    "frequencies",
    "fourier",
    "inverse_fourier",
    "DEFAULT_GRID",
]

EDGE_FRACTION = 0.05
MAX_SHIFT_FRACTION = 0.4


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Grid ``s_k = s_min + k*step`` for ``k = 0..n_points-1`` (periodic)."""

    n_points: int = 1024
    s_min: float = -12.0
    s_max: float = 12.0

    def __post_init__(self):
        if not _is_power_of_two(int(self.n_points)):
            raise BadShape(f"n_points must be a power of two, got {self.n_points}")
        if not (self.s_min < 0.0 < self.s_max):
            raise BadShape("grid must straddle s = 0 (s_min < 0 < s_max)")

    @property
    def step(self) -> float:
        return (self.s_max - self.s_min) / self.n_points

    @property
    def length(self) -> float:
        return self.s_max - self.s_min

    @property
    def points(self) -> np.ndarray:
        return self.s_min + self.step * np.arange(self.n_points)

    @property
    def r_window(self) -> tuple[float, float]:
        """Range of ``r = e^{-s}`` covered by the grid."""
        return float(np.exp(-self.s_max)), float(np.exp(-self.s_min))


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True, eq=False)
class StateVector:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n_points,):
            raise BadShape(f"expected {self.grid.n_points} samples, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.step))

    def with_values(self, values) -> "StateVector":
        return StateVector(self.grid, values)

    def __add__(self, other):
        _same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def _same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatch(f"{a.grid} != {b.grid}")


# -- generator catalog -----------------------------------------------------


@dataclass(frozen=True)
class Gaussian:
    """``exp(-(s - center)^2 / (2 width^2))``."""

    center: float = 0.0
    width: float = 1.0

    def __call__(self, s):
        return np.exp(-0.5 * ((np.asarray(s) - self.center) / self.width) ** 2)


@dataclass(frozen=True)
class Bump:
    """Smooth bump ``exp(-1/(1 - x^2))`` on ``support``, zero outside."""

    support: tuple[float, float] = (-1.0, 1.0)

    def __call__(self, s):
        a, b = self.support
        x = (2 * np.asarray(s, dtype=float) - (a + b)) / (b - a)
        out = np.zeros_like(x)
        inside = np.abs(x) < 1
        out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
        return out


@dataclass(frozen=True)
class Hermite:
    """Hermite function of order ``n``, scaled and centred."""

    n: int = 0
    center: float = 0.0
    width: float = 1.0

    def __call__(self, s):
        x = (np.asarray(s, dtype=float) - self.center) / self.width
        log_norm = 0.5 * (self.n * np.log(2.0) + gammaln(self.n + 1) + 0.5 * np.log(np.pi))
        return eval_hermite(self.n, x) * np.exp(-0.5 * x**2 - log_norm) / np.sqrt(self.width)


def generator_from_spec(spec: dict):
    """Build a catalog generator from a JSON-style dictionary."""
    kind = spec.get("kind")
    if kind == "gaussian":
        return Gaussian(float(spec.get("center", 0.0)), float(spec.get("width", 1.0)))
    if kind == "bump":
        lo, hi = spec.get("support", (-1.0, 1.0))
        return Bump((float(lo), float(hi)))
    if kind == "hermite":
        return Hermite(int(spec.get("n", 0)), float(spec.get("center", 0.0)),
                       float(spec.get("width", 1.0)))
    raise ValueError(f"unknown state generator kind {kind!r}")


def check_edges(state: StateVector, edge_tol: float = 1e-10) -> float:
    """Return the largest |value| in the outer 5% of the grid, raise if > edge_tol."""
    n = state.grid.n_points
    m = max(1, int(EDGE_FRACTION * n))
    vals = np.abs(state.values)
    leak = float(max(vals[:m].max(), vals[-m:].max()))
    if leak > edge_tol:
        raise EdgeLeak(f"edge amplitude {leak:.3e} exceeds edge_tol={edge_tol:.1e}")
    return leak


def make_state(grid: GridSpec, generator, edge_tol: float = 1e-10,
               normalize: bool = True) -> StateVector:
    """Sample a catalog generator on ``grid`` and normalize it."""
    if isinstance(generator, dict):
        generator = generator_from_spec(generator)
    values = np.asarray(generator(grid.points), dtype=complex)
    state = StateVector(grid, values)
    norm = state.norm
    if not np.isfinite(norm) or norm < 1e-150:
        raise NonNormalizable(f"state norm {norm!r} is not usable")
    if normalize:
        state = state.with_values(values / norm)
    check_edges(state if normalize else state.with_values(values / norm), edge_tol)
    return state


# -- basic operations ------------------------------------------------------


def inner(a: StateVector, b: StateVector) -> complex:
    """<a, b>, conjugate-linear in ``a``."""
    _same_grid(a, b)
    return complex(np.vdot(a.values, b.values) * a.grid.step)


def shift(xi: StateVector, alpha: float) -> StateVector:
    """Translate: ``(shift(xi, alpha))(s) = xi(s + alpha)``, via FFT phases."""
    grid = xi.grid
    if abs(alpha) >= MAX_SHIFT_FRACTION * grid.length:
        raise ShiftTooLarge(f"|alpha|={abs(alpha)} exceeds {MAX_SHIFT_FRACTION} * grid length")
    if alpha == 0:
        return xi.with_values(xi.values.copy())
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, grid.step)
    return xi.with_values(np.fft.ifft(np.fft.fft(xi.values) * np.exp(1j * k * alpha)))


def multiply_phase(xi: StateVector, theta) -> StateVector:
    """Pointwise multiplication by ``exp(i theta(s))``.

    ``theta`` is either an array of samples or a callable of the grid points.
    """
    if callable(theta):
        theta = theta(xi.grid.points)
    if isinstance(theta, StateVector):
        _same_grid(xi, theta)
        theta = theta.values.real
    theta = np.asarray(theta, dtype=float)
    if theta.shape != xi.values.shape:
        raise GridMismatch(f"phase has shape {theta.shape}, state has {xi.values.shape}")
    return xi.with_values(xi.values * np.exp(1j * theta))


# -- Fourier transforms ----------------------------------------------------


def frequencies(n: int, spacing: float) -> np.ndarray:
    """Centred frequency lattice dual to ``n`` samples with spacing ``spacing``."""
    return (np.arange(n) - n // 2) * (2 * np.pi / (n * spacing))


def _axes_params(f, axes, spacing, origin):
    if axes is None:
        axes = tuple(range(f.ndim))
    elif np.isscalar(axes):
        axes = (int(axes),)
    axes = tuple(int(a) % f.ndim for a in axes)
    spacing = np.broadcast_to(np.asarray(spacing, dtype=float), (len(axes),))
    origin = np.broadcast_to(np.asarray(origin, dtype=float), (len(axes),))
    for ax in axes:
        if not _is_power_of_two(f.shape[ax]):
            raise BadShape(f"axis {ax} has length {f.shape[ax]}, not a power of two")
    return axes, spacing, origin


def _phase(shape, ax, lam, x0, sign):
    bshape = [1] * len(shape)
    bshape[ax] = shape[ax]
    return np.exp(sign * 1j * lam * x0).reshape(bshape)


def fourier(f, spacing=1.0, axes=None, origin=0.0) -> np.ndarray:
    """Continuous-convention Fourier transform of samples ``f``.

    Sample ``k`` along an axis sits at ``origin + k*spacing``; the result is
    sampled on ``frequencies(n, spacing)`` along the same axis.
    """
    f = np.asarray(f, dtype=complex)
    axes, spacing, origin = _axes_params(f, axes, spacing, origin)
    out = f
    for ax, h, x0 in zip(axes, spacing, origin):
        n = f.shape[ax]
        lam = frequencies(n, h)
        out = np.fft.fftshift(np.fft.fft(out, axis=ax), axes=ax)
        out = out * (h / np.sqrt(2 * np.pi)) * _phase(out.shape, ax, lam, x0, -1)
    return out


def inverse_fourier(g, spacing=1.0, axes=None, origin=0.0) -> np.ndarray:
    """Inverse of :func:`fourier`; ``spacing``/``origin`` describe the x-lattice."""
    g = np.asarray(g, dtype=complex)
    axes, spacing, origin = _axes_params(g, axes, spacing, origin)
    out = g
    for ax, h, x0 in zip(axes, spacing, origin):
        n = g.shape[ax]
        lam = frequencies(n, h)
        dlam = 2 * np.pi / (n * h)
        out = out * _phase(out.shape, ax, lam, x0, +1)
        out = np.fft.ifft(np.fft.ifftshift(out, axes=ax), axis=ax) * (n * dlam / np.sqrt(2 * np.pi))
    return out


def state_fourier(xi: StateVector) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(lam, xi_hat)`` for a state on its grid."""
    g = xi.grid
    return frequencies(g.n_points, g.step), fourier(xi.values, g.step, origin=g.s_min)
