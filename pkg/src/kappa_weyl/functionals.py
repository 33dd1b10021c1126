"""Trace, Hilbert-Schmidt norm and the d+1 dimensional trace functionals.

The trace of ``f(T, R)`` is ``TRACE_CONSTANT * \\int dt \\int_{r>0} dr/r f(t, r)``
with ``TRACE_CONSTANT = 1/(2 pi)``; the squared Hilbert-Schmidt norm is the
same functional applied to ``|f|^2``.  Symbol-side integrals are taken over
the r-window ``[e^{-s_max}, e^{-s_min}]`` of the grid; the part below the
window is bounded analytically and must be negligible.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DivergentAtOrigin, SymbolNotEvaluable, UnsupportedDimension
from .grid import DEFAULT_GRID, GridSpec
from .quantization import C0, KernelMatrix, RadialSymbolField, RingSymbol, kernel_kappa
from .symbols import DEFAULT_LATTICE, GaussianMixture, MomentumLattice, SampledSymbol

__all__ = [
    "TRACE_CONSTANT",
    "TraceReport",
    "sphere_area",
    "trace_symbol",
    "trace_integral",
    "hs_norm",
    "hs_norm_matrix",
    "tau_radial",
    "tau_cartesian",
    "product_trace",
    "TracePropertiesReport",
    "check_trace_properties",
    "singular_decay",
]

TRACE_CONSTANT = 1.0 / (2 * np.pi)
EPS_FLOOR = 1e-300


@dataclass(frozen=True)
class TraceReport:
    symbol_side: complex
    operator_side: complex
    relative_error: float


def sphere_area(d: int) -> float:
    """Area ``2 pi^{d/2} / Gamma(d/2)`` of the unit sphere in R^d."""
    exact = {1: 2.0, 2: 2 * np.pi, 3: 4 * np.pi}
    if d < 1:
        raise UnsupportedDimension(f"d must be positive, got {d}")
    if d in exact:
        return exact[d]
    return 2 * np.pi ** (d / 2) / math.gamma(d / 2)


# -- r-marginals ------------------------------------------------------------


class _Marginal:
    """``m(r) = \\int dt f(t, r)`` plus an analytic bound of ``|m|`` on ``[0, r_min]``."""

    def __init__(self, f):
        self.f = f
        if isinstance(f, GaussianMixture):
            self._mix = f.integrate(0) if f.n_terms else None
        elif isinstance(f, SampledSymbol):
            self._mix = None
        else:
            raise SymbolNotEvaluable(f"no t-marginal for {type(f).__name__}")

    def __call__(self, r):
        if isinstance(self.f, SampledSymbol):
            return self.f.mixed(np.zeros_like(np.asarray(r, float)), r)
        if self._mix is None:
            return np.zeros_like(np.asarray(r, float), dtype=complex)
        return self._mix(r)

    def envelope(self, r):
        """Term-wise bound ``sum_k |term_k(r)|`` of ``|m(r)|`` (matches :meth:`origin_bound`)."""
        if isinstance(self.f, SampledSymbol):
            return np.abs(self(r))
        if self._mix is None:
            return np.zeros_like(np.asarray(r, float))
        m = self._mix
        r = np.asarray(r, float)[..., None]
        return np.sum(np.abs(m.amp) * np.exp(-0.5 * ((r - m.center[:, 0]) / m.width[:, 0]) ** 2),
                      axis=-1)

    def peaks(self):
        if self._mix is None:
            return []
        return [float(q) for q in self._mix.center[:, 0] if q > 0]

    def origin_bound(self, r_min: float) -> float:
        if isinstance(self.f, SampledSymbol):
            r = np.linspace(0.0, r_min, 9)
            return float(np.max(np.abs(self(r))))
        if self._mix is None:
            return 0.0
        m = self._mix
        amp = np.abs(m.amp)
        q, tau = m.center[:, 0], m.width[:, 0]
        dist = np.clip(q, 0.0, r_min) - q
        return float(np.sum(amp * np.exp(-0.5 * (dist / tau) ** 2)))


def _log_integral(fn, r_lo, r_hi, peaks=()):
    """``\\int_{r_lo}^{r_hi} fn(r) dr / r`` via ``r = e^{-s}``."""
    s_lo, s_hi = -np.log(r_hi), -np.log(r_lo)
    pts = sorted({-np.log(p) for p in peaks if r_lo < p < r_hi})

    def part(kind):
        def g(s):
            v = fn(np.exp(-s))
            return float(np.real(v) if kind == 0 else np.imag(v))
        with warnings.catch_warnings():
            # tiny integrands trip the roundoff detector; the value is still fine
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(g, s_lo, s_hi, points=pts or None, limit=400,
                                    epsabs=1e-15, epsrel=1e-12)
        return val

    return complex(part(0), part(1))


def _check_origin(bound, total, origin_tol, what, r_lo, mass=None):
    """Raise unless the origin density is negligible against the integral.

    When the integral nearly cancels (e.g. a symbol odd in ``t``), ``mass``
    supplies the integral of the term-wise envelope as the reference instead.
    """
    if bound <= origin_tol * max(abs(total), EPS_FLOOR):
        return
    if mass is not None and bound <= origin_tol * max(mass(), EPS_FLOOR):
        return
    raise DivergentAtOrigin(
        f"{what}: density {bound:.2e} per e-fold below r={r_lo:.2e} exceeds "
        f"{origin_tol:.0e} of the integral {abs(total):.3e}")


def _window_integral(marg, grid: GridSpec):
    """``(\\int dr/r marg over the r-window, origin bound)``."""
    r_lo, r_hi = grid.r_window
    return _log_integral(marg, r_lo, r_hi, marg.peaks()), marg.origin_bound(r_lo)


def _guarded_log_integral(marg, grid: GridSpec, origin_tol: float, what: str):
    total, bound = _window_integral(marg, grid)
    r_lo, r_hi = grid.r_window

    def mass():
        return abs(_log_integral(marg.envelope, r_lo, r_hi, marg.peaks()))

    _check_origin(bound, total, origin_tol, what, r_lo, mass)
    return total


def trace_integral(f, grid: GridSpec = DEFAULT_GRID, origin_tol: float = 1e-8) -> complex:
    """``TRACE_CONSTANT * \\int dt \\int dr/r f`` over the grid's r-window."""
    if f.is_zero():
        return 0j
    return TRACE_CONSTANT * _guarded_log_integral(_Marginal(f), grid, origin_tol, "trace")


def _diagonal_trace(f, grid: GridSpec) -> complex:
    """``sum_s K_f(s, s) * step`` (diagonal of the kernel only)."""
    s = grid.points
    diag = C0 * f.f1(np.zeros_like(s), np.exp(-s))
    return complex(np.sum(diag) * grid.step)


def trace_symbol(f, grid: GridSpec = DEFAULT_GRID, origin_tol: float = 1e-8) -> TraceReport:
    """Compare the symbol-side trace with the kernel diagonal sum."""
    if f.is_zero():
        return TraceReport(0j, 0j, 0.0)
    sym = trace_integral(f, grid, origin_tol)
    op = _diagonal_trace(f, grid)
    return TraceReport(sym, op, abs(sym - op) / max(abs(sym), EPS_FLOOR))


def hs_norm(f, grid: GridSpec = DEFAULT_GRID, origin_tol: float = 1e-8) -> float:
    """``(TRACE_CONSTANT \\int dt \\int dr/r |f|^2)^{1/2}`` over the r-window.

    Closed-form mixtures only (``|f|^2`` is again a mixture).
    """
    if f.is_zero():
        return 0.0
    if not isinstance(f, GaussianMixture):
        raise SymbolNotEvaluable("hs_norm needs a closed-form symbol")
    sq = f * f.conj()
    val = _guarded_log_integral(_Marginal(sq), grid, origin_tol, "Hilbert-Schmidt norm")
    return float(np.sqrt(TRACE_CONSTANT * val.real))


def hs_norm_matrix(f, grid: GridSpec = DEFAULT_GRID) -> float:
    """Hilbert-Schmidt norm of the discretised operator ``f(T, R)``."""
    return kernel_kappa(f, grid).hs_norm()


# -- d + 1 dimensions -----------------------------------------------------------


def tau_radial(F: RadialSymbolField, grid: GridSpec = DEFAULT_GRID,
               origin_tol: float = 1e-8) -> complex:
    """Sphere quadrature ``sum_c weight_c * trace(F(c))``."""
    seen = {}
    total, bound = 0j, 0.0
    for fib, wt in zip(F.fibers, F.weights):
        key = id(fib)
        if key not in seen:
            seen[key] = (0j, 0.0) if fib.is_zero() else _window_integral(_Marginal(fib), grid)
        val, b = seen[key]
        total += wt * val
        bound += wt * b
    _check_origin(bound, total, origin_tol, "radial trace", grid.r_window[0])
    return complex(TRACE_CONSTANT * total)


def tau_cartesian(f, d: int, grid: GridSpec = DEFAULT_GRID, n: int | None = None,
                  origin_tol: float = 1e-8) -> complex:
    """``TRACE_CONSTANT * \\int dt \\int d^d x |x|^{-d} f(t, x)`` by cartesian quadrature.

    The time integral is exact; the spatial one is a tensor trapezoid rule on
    a cell-centred grid (so ``x = 0`` is never a node), restricted to the
    grid's r-window.  Equivalently ``sphere_area(d)`` times the angular mean
    of the fiber traces.
    """
    if d not in (1, 2, 3):
        raise UnsupportedDimension(f"d must be 1, 2 or 3, got {d}")
    if isinstance(f, RingSymbol):
        prof = f.profile.integrate(0) if f.profile.n_terms else None

        def marg(*xs):
            rad = np.sqrt(sum(x**2 for x in xs))
            return prof(rad) if prof is not None else np.zeros_like(rad)

        reach = max(abs(a) for a in f.profile.box(1e-16)[1])
        bound_src = prof
    elif isinstance(f, GaussianMixture):
        if f.ndim != d + 1:
            raise UnsupportedDimension(f"symbol has {f.ndim} variables, expected {d + 1}")
        if f.is_zero():
            return 0j
        prof = f.integrate(0)
        marg = prof
        reach = max(max(abs(a), abs(b)) for a, b in f.box(1e-16)[1:])
        bound_src = None
    else:
        raise SymbolNotEvaluable("tau_cartesian needs a Gaussian mixture or a ring symbol")
    if bound_src is None and f.is_zero():
        return 0j
    r_lo, r_hi = grid.r_window
    reach = min(reach, r_hi)
    n = n or {1: 1 << 16, 2: 1024, 3: 192}[d]
    h = 2 * reach / n
    axis = -reach + h * (np.arange(n) + 0.5)
    if d == 1:
        X = [axis]
    else:
        X = np.meshgrid(*([axis] * d), indexing="ij", sparse=True)
    rad = np.sqrt(sum(x**2 for x in X))
    vals = marg(*X)
    inside = (rad >= r_lo) & (rad <= r_hi)
    total = np.sum(np.where(inside, vals / np.maximum(rad, r_lo) ** d, 0.0)) * h**d
    # density at the origin: |marginal(0)| per e-fold, times the sphere area
    origin = abs(marg(*([np.zeros(1)] * d))[0]) * sphere_area(d)
    if origin > origin_tol * max(abs(total), EPS_FLOOR):
        raise DivergentAtOrigin(f"|x|^-d f is not negligible at the origin ({origin:.2e})")
    return complex(TRACE_CONSTANT * total)


# -- trace properties ------------------------------------------------------


def product_trace(f, g, lattice: MomentumLattice = DEFAULT_LATTICE,
                  grid: GridSpec = DEFAULT_GRID, box_tol: float = 1e-8) -> complex:
    """Trace of ``f(T,R) g(T,R)`` from the star product of the symbols.

    Only the row ``alpha = 0`` of ``f_hat * g_hat`` is needed:
    ``\\int dt (f star g)(t, r) = Phi(0, r) / (2 pi)``.
    """
    from .symbol_algebra import product_rows

    fh = f.fourier() if isinstance(f, GaussianMixture) else f
    gh = g.fourier() if isinstance(g, GaussianMixture) else g
    c = lattice.n_alpha // 2
    row = product_rows(fh, gh, lattice, "star", rows=[c], box_tol=box_tol)[0] / (2 * np.pi)
    # band-limited interpolation of the row in x
    from scipy.signal import resample

    factor = 16
    fine = resample(row, factor * row.size)
    xs = lattice.xs[0] + (lattice.h_x / factor) * np.arange(fine.size)
    r_lo, r_hi = grid.r_window
    r_hi = min(r_hi, xs[-1])
    pos = xs > 0
    peak = xs[np.argmax(np.abs(fine) * pos)]

    def marg(r):
        return np.interp(r, xs, fine.real) + 1j * np.interp(r, xs, fine.imag)

    if abs(marg(r_lo)) > 1e-8 * np.abs(fine).max():
        raise DivergentAtOrigin("product symbol does not vanish at the lower r-window edge")
    return TRACE_CONSTANT * _log_integral(marg, r_lo, r_hi, [peak])


@dataclass(frozen=True)
class TracePropertiesReport:
    trace_fg: complex
    trace_gf: complex
    cyclicity_residual: float
    positivity: float
    positivity_imag: float
    hs_norm_squared: float
    scale: float

    @property
    def cyclic(self) -> bool:
        return self.cyclicity_residual < 1e-4 * self.scale

    @property
    def positive(self) -> bool:
        return self.positivity >= -1e-6 * self.scale


def check_trace_properties(f: GaussianMixture, g: GaussianMixture,
                           lattice: MomentumLattice = DEFAULT_LATTICE,
                           grid: GridSpec = DEFAULT_GRID) -> TracePropertiesReport:
    """Cyclicity ``tau(f*g) = tau(g*f)`` and positivity ``tau(conj(f)*f) >= 0``."""
    t_fg = product_trace(f, g, lattice, grid)
    t_gf = t_fg if g is f else product_trace(g, f, lattice, grid)
    t_pos = product_trace(f.conj(), f, lattice, grid)
    hs_f = hs_norm(f, grid)
    hs_g = hs_f if g is f else hs_norm(g, grid)
    scale = max(hs_f * hs_g, EPS_FLOOR)
    return TracePropertiesReport(t_fg, t_gf, float(abs(t_fg - t_gf)), float(t_pos.real),
                                 float(t_pos.imag), hs_f**2, scale)


def singular_decay(K: KernelMatrix, k: int) -> list:
    """Top ``k`` singular values of the discretised operator, non-increasing."""
    n = K.grid.n_points
    if k > n:
        raise ValueError("k exceeds the number of grid points")
    sv = np.linalg.svd(K.operator, compute_uv=False)
    return [float(v) for v in sv[:k]]
