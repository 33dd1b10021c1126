"""Symbol containers: closed-form Gaussian mixtures and sampled momentum symbols.

A :class:`GaussianMixture` is a finite sum of separable terms

    a * prod_j exp(-(x_j - c_j)^2 / (2 w_j^2)) * exp(i f_j x_j)

on R^n.  The family is closed under Fourier transforms (in any subset of
axes), products, conjugation, reflections and multiplication by real
exponentials, so most operations stay exact.

For two-variable symbols the same object plays two roles:

* a position symbol ``f(t, r)``: :meth:`GaussianMixture.f1` gives the partial
  transform ``(F_1 f)(lam, r)`` in the first variable;
* a momentum symbol ``phi(alpha, beta)``: :meth:`GaussianMixture.mixed` gives
  ``Phi(alpha, x) = \\int dbeta phi(alpha, beta) e^{i beta x}``.

A :class:`SampledSymbol` holds momentum values on a :class:`MomentumLattice`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import resample

from ._interp import ORDER, interp2_eval
from .errors import BadShape, QuadratureBoxTooSmall

__all__ = [
    "GaussianMixture",
    "MomentumLattice",
    "SampledSymbol",
    "DEFAULT_LATTICE",
    "sample",
    "edge_ratio",
    "check_box",
    "symbol_from_dict",
    "symbol_to_dict",
    "load_symbol",
    "save_symbol",
]

SQRT_2PI = np.sqrt(2 * np.pi)


class GaussianMixture:
    """Sum of separable complex Gaussians on R^n (see module docstring)."""

    def __init__(self, amp, center, width, freq=None):
        amp = np.atleast_1d(np.asarray(amp, dtype=complex))
        center = np.atleast_2d(np.asarray(center, dtype=float))
        width = np.atleast_2d(np.asarray(width, dtype=float))
        if freq is None:
            freq = np.zeros_like(center)
        freq = np.atleast_2d(np.asarray(freq, dtype=float))
        k = amp.shape[0]
        if not (center.shape == width.shape == freq.shape and center.shape[0] == k):
            raise BadShape("amp, center, width and freq must describe the same terms")
        if np.any(width <= 0):
            raise ValueError("widths must be positive")
        self.amp, self.center, self.width, self.freq = amp, center, width, freq

    # -- construction ------------------------------------------------------

    @classmethod
    def gaussian(cls, center, width, freq=None, amp=1.0):
        """A single term."""
        center = np.atleast_1d(np.asarray(center, dtype=float))
        width = np.broadcast_to(np.asarray(width, dtype=float), center.shape)
        freq = np.zeros_like(center) if freq is None else np.broadcast_to(
            np.asarray(freq, dtype=float), center.shape)
        return cls([amp], [center], [width], [freq])

    @classmethod
    def zero(cls, ndim: int = 2):
        return cls(np.zeros(0), np.zeros((0, ndim)), np.ones((0, ndim)), np.zeros((0, ndim)))

    @classmethod
    def from_terms(cls, terms):
        """Two-variable terms given as dicts with keys a, p, q, sigma, tau, u, v."""
        amp, center, width, freq = [], [], [], []
        for t in terms:
            amp.append(_complex(t.get("a", 1.0)))
            center.append([float(t.get("p", 0.0)), float(t.get("q", 0.0))])
            width.append([float(t.get("sigma", 1.0)), float(t.get("tau", 1.0))])
            freq.append([float(t.get("u", 0.0)), float(t.get("v", 0.0))])
        if not amp:
            return cls.zero(2)
        return cls(amp, center, width, freq)

    def terms(self):
        """Inverse of :meth:`from_terms` for two-variable mixtures."""
        if self.ndim != 2:
            raise BadShape("terms() is only defined for two-variable mixtures")
        out = []
        for a, c, w, f in zip(self.amp, self.center, self.width, self.freq):
            out.append({"a": [a.real, a.imag], "p": c[0], "q": c[1], "sigma": w[0],
                        "tau": w[1], "u": f[0], "v": f[1]})
        return out

    # -- basic structure ---------------------------------------------------

    @property
    def ndim(self) -> int:
        return self.center.shape[1]

    @property
    def n_terms(self) -> int:
        return self.amp.shape[0]

    def is_zero(self) -> bool:
        return self.n_terms == 0 or not np.any(self.amp)

    def __repr__(self):
        return f"GaussianMixture(ndim={self.ndim}, n_terms={self.n_terms})"

    def _replace(self, amp=None, center=None, width=None, freq=None):
        return GaussianMixture(self.amp if amp is None else amp,
                               self.center if center is None else center,
                               self.width if width is None else width,
                               self.freq if freq is None else freq)

    def __call__(self, *xs):
        if len(xs) != self.ndim:
            raise BadShape(f"expected {self.ndim} coordinates, got {len(xs)}")
        xs = np.broadcast_arrays(*[np.asarray(x, dtype=float) for x in xs])
        out = np.zeros(xs[0].shape, dtype=complex)
        for a, c, w, f in zip(self.amp, self.center, self.width, self.freq):
            expo = np.zeros(xs[0].shape, dtype=complex)
            for j, x in enumerate(xs):
                expo += -0.5 * ((x - c[j]) / w[j]) ** 2 + 1j * f[j] * x
            out += a * np.exp(expo)
        return out

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GaussianMixture):
            return NotImplemented
        if other.ndim != self.ndim:
            raise BadShape("dimension mismatch")
        return GaussianMixture(np.concatenate([self.amp, other.amp]),
                               np.vstack([self.center, other.center]),
                               np.vstack([self.width, other.width]),
                               np.vstack([self.freq, other.freq]))

    def __neg__(self):
        return self._replace(amp=-self.amp)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaussianMixture):
            return self._product(other)
        return self._replace(amp=self.amp * complex(other))

    __rmul__ = __mul__

    def _product(self, other):
        if other.ndim != self.ndim:
            raise BadShape("dimension mismatch")
        amp, center, width, freq = [], [], [], []
        for a1, c1, w1, f1 in zip(self.amp, self.center, self.width, self.freq):
            for a2, c2, w2, f2 in zip(other.amp, other.center, other.width, other.freq):
                s1, s2 = w1**2, w2**2
                var = s1 * s2 / (s1 + s2)
                amp.append(a1 * a2 * np.exp(-0.5 * np.sum((c1 - c2) ** 2 / (s1 + s2))))
                center.append((c1 * s2 + c2 * s1) / (s1 + s2))
                width.append(np.sqrt(var))
                freq.append(f1 + f2)
        if not amp:
            return GaussianMixture.zero(self.ndim)
        return GaussianMixture(amp, center, width, freq)

    def conj(self):
        return self._replace(amp=np.conj(self.amp), freq=-self.freq)

    def reflect(self, axes):
        """``x_j -> -x_j`` for the listed axes."""
        axes = _axes(axes, self.ndim)
        c, f = self.center.copy(), self.freq.copy()
        c[:, axes] *= -1
        f[:, axes] *= -1
        return self._replace(center=c, freq=f)

    def times_exp(self, axis: int, rate: float):
        """Multiply by ``exp(rate * x_axis)`` (stays a Gaussian mixture)."""
        c, w = self.center.copy(), self.width
        s2 = w[:, axis] ** 2
        factor = np.exp(rate * c[:, axis] + 0.5 * rate**2 * s2)
        c[:, axis] = c[:, axis] + rate * s2
        return self._replace(amp=self.amp * factor, center=c)

    def integrate(self, axis: int):
        """Integrate out one variable exactly."""
        c, w, f = self.center[:, axis], self.width[:, axis], self.freq[:, axis]
        amp = self.amp * SQRT_2PI * w * np.exp(1j * f * c - 0.5 * (f * w) ** 2)
        keep = [j for j in range(self.ndim) if j != axis]
        if not keep:
            return complex(np.sum(amp))
        return GaussianMixture(amp, self.center[:, keep], self.width[:, keep], self.freq[:, keep])

    def fourier(self, axes=None):
        """Forward transform ``(2 pi)^{-1/2} \\int e^{-i lam x}`` in ``axes``."""
        return self._transform(axes, forward=True)

    def inverse_fourier(self, axes=None):
        """Inverse transform ``(2 pi)^{-1/2} \\int e^{+i lam x}`` in ``axes``."""
        return self._transform(axes, forward=False)

    def _transform(self, axes, forward):
        axes = _axes(axes, self.ndim)
        amp = self.amp.copy()
        c, w, f = self.center.copy(), self.width.copy(), self.freq.copy()
        for j in axes:
            cj, wj, fj = c[:, j].copy(), w[:, j].copy(), f[:, j].copy()
            amp = amp * wj * np.exp(1j * fj * cj)
            if forward:
                c[:, j], f[:, j] = fj, -cj
            else:
                c[:, j], f[:, j] = -fj, cj
            w[:, j] = 1.0 / wj
        return GaussianMixture(amp, c, w, f)

    # -- two-variable helpers ----------------------------------------------

    @cached_property
    def _f1_form(self):
        return self.fourier(axes=(0,))

    @cached_property
    def _mixed_form(self):
        return self.inverse_fourier(axes=(1,)) * SQRT_2PI

    def f1(self, lam, r):
        """Partial transform in the first variable, ``(F_1 f)(lam, r)``."""
        return self._f1_form(lam, r)

    def mixed(self, alpha, x):
        """``\\int dbeta phi(alpha, beta) e^{i beta x}``."""
        return self._mixed_form(alpha, x)

    def box(self, tol: float = 1e-12):
        """Per-axis interval outside of which every term is below ``tol`` times its peak."""
        if self.n_terms == 0:
            return tuple((-1.0, 1.0) for _ in range(self.ndim))
        reach = np.sqrt(2 * np.log(1 / tol))
        lo = np.min(self.center - reach * self.width, axis=0)
        hi = np.max(self.center + reach * self.width, axis=0)
        return tuple((float(a), float(b)) for a, b in zip(lo, hi))

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        if self.ndim == 2:
            return {"kind": "gaussian_mixture", "terms": self.terms()}
        return {"kind": "gaussian_mixture", "dim": self.ndim,
                "terms": [{"a": [a.real, a.imag], "center": list(c), "width": list(w),
                           "freq": list(f)}
                          for a, c, w, f in zip(self.amp, self.center, self.width, self.freq)]}


def _axes(axes, ndim):
    if axes is None:
        return list(range(ndim))
    if np.isscalar(axes):
        axes = [axes]
    return [int(a) % ndim for a in axes]


def _complex(a):
    if isinstance(a, (list, tuple)):
        if len(a) != 2:
            raise ValueError("complex amplitudes are given as [re, im]")
        return complex(float(a[0]), float(a[1]))
    if isinstance(a, dict):
        return complex(float(a.get("re", 0.0)), float(a.get("im", 0.0)))
    return complex(a)


# -- sampled momentum symbols -------------------------------------------------


@dataclass(frozen=True)
class MomentumLattice:
    """Centred lattice ``alpha_i = (i - n_alpha/2) h_alpha``, same for beta.

    The index ``n/2`` is the origin, so differences of lattice points stay
    on the lattice.  The conjugate position lattice for ``beta`` is
    ``x_k = (k - n_beta/2) h_x`` with ``h_x = 2 pi / (n_beta h_beta)``.
    """

    n_alpha: int = 256
    n_beta: int = 2048
    alpha_max: float = 10.0
    beta_max: float = 64.0

    def __post_init__(self):
        for n in (self.n_alpha, self.n_beta):
            if n < 8 or n & (n - 1):
                raise BadShape(f"lattice sizes must be powers of two >= 8, got {n}")

    @property
    def h_alpha(self) -> float:
        return 2 * self.alpha_max / self.n_alpha

    @property
    def h_beta(self) -> float:
        return 2 * self.beta_max / self.n_beta

    @property
    def h_x(self) -> float:
        return 2 * np.pi / (self.n_beta * self.h_beta)

    @property
    def x_max(self) -> float:
        return np.pi / self.h_beta

    @property
    def alphas(self) -> np.ndarray:
        return (np.arange(self.n_alpha) - self.n_alpha // 2) * self.h_alpha

    @property
    def betas(self) -> np.ndarray:
        return (np.arange(self.n_beta) - self.n_beta // 2) * self.h_beta

    @property
    def xs(self) -> np.ndarray:
        return (np.arange(self.n_beta) - self.n_beta // 2) * self.h_x

    def refined(self, factor: int = 2) -> "MomentumLattice":
        """Same box, ``factor`` times finer steps."""
        return MomentumLattice(self.n_alpha * factor, self.n_beta * factor,
                               self.alpha_max, self.beta_max)

    def mesh(self):
        return np.meshgrid(self.alphas, self.betas, indexing="ij")


DEFAULT_LATTICE = MomentumLattice()


def to_mixed(values, lattice: MomentumLattice) -> np.ndarray:
    """Rows ``Phi(alpha_i, x_k)`` from momentum samples (exact trapezoid sums)."""
    m = lattice.n_beta
    shifted = np.fft.ifftshift(values, axes=-1)
    return lattice.h_beta * m * np.fft.fftshift(np.fft.ifft(shifted, axis=-1), axes=-1)


def from_mixed(mixed, lattice: MomentumLattice) -> np.ndarray:
    """Inverse of :func:`to_mixed`."""
    shifted = np.fft.ifftshift(mixed, axes=-1)
    return lattice.h_x / (2 * np.pi) * np.fft.fftshift(np.fft.fft(shifted, axis=-1), axes=-1)


def edge_ratio(values, fraction: float = 0.05, axes=(0, 1)) -> float:
    """Largest |value| in the outer ``fraction`` band of the given axes, over the peak."""
    mag = np.abs(values)
    peak = mag.max() if mag.size else 0.0
    if peak == 0:
        return 0.0
    worst = 0.0
    for ax in axes:
        n = mag.shape[ax]
        m = max(1, int(fraction * n))
        lo = np.take(mag, np.arange(m), axis=ax).max()
        hi = np.take(mag, np.arange(n - m, n), axis=ax).max()
        worst = max(worst, lo, hi)
    return float(worst / peak)


def check_box(values, tol: float, what: str, axes=(0, 1)) -> None:
    ratio = edge_ratio(values, axes=axes)
    if ratio > tol:
        raise QuadratureBoxTooSmall(
            f"{what}: edge/peak ratio {ratio:.2e} exceeds {tol:.0e}; enlarge the box or refine")


class SampledSymbol:
    """Momentum symbol sampled on a :class:`MomentumLattice` (zero outside)."""

    def __init__(self, lattice: MomentumLattice, values, mixed_values=None):
        values = np.asarray(values, dtype=complex)
        if values.shape != (lattice.n_alpha, lattice.n_beta):
            raise BadShape(f"values shape {values.shape} does not match lattice")
        self.lattice = lattice
        self.values = values
        self._mixed = mixed_values

    def __repr__(self):
        lat = self.lattice
        return (f"SampledSymbol({lat.n_alpha}x{lat.n_beta}, alpha_max={lat.alpha_max}, "
                f"beta_max={lat.beta_max})")

    def _like(self, values):
        return SampledSymbol(self.lattice, values)

    def __add__(self, other):
        other = sample(other, self.lattice)
        return self._like(self.values + other.values)

    def __sub__(self, other):
        other = sample(other, self.lattice)
        return self._like(self.values - other.values)

    def __mul__(self, c):
        return self._like(self.values * complex(c))

    __rmul__ = __mul__

    def __neg__(self):
        return self._like(-self.values)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    @property
    def mixed_values(self) -> np.ndarray:
        """``Phi(alpha_i, x_k)`` on the lattice rows and the conjugate x-lattice."""
        if self._mixed is None:
            self._mixed = to_mixed(self.values, self.lattice)
        return self._mixed

    def box(self, tol: float = 1e-12):
        lat = self.lattice
        return ((-lat.alpha_max, lat.alpha_max), (-lat.beta_max, lat.beta_max))

    def __call__(self, alpha, beta):
        """Local Lagrange interpolation of the samples; zero outside the box."""
        lat = self.lattice
        return interp2_eval(self.values, lat.alphas[0], lat.h_alpha, lat.betas[0], lat.h_beta,
                            alpha, beta, ORDER)

    def fine_rows(self, oversample: int = 8):
        """Rows of ``Phi`` on an x-lattice refined ``oversample`` times.

        Returns ``(table, x0, hx)`` with ``table[i, k] = Phi(alpha_i, x0 + k hx)``.
        """
        lat = self.lattice
        m = lat.n_beta
        padded = np.zeros((lat.n_alpha, oversample * m), dtype=complex)
        off = (oversample * m) // 2 - m // 2
        padded[:, off:off + m] = self.values
        fine = lat.h_beta * oversample * m * np.fft.fftshift(
            np.fft.ifft(np.fft.ifftshift(padded, axes=-1), axis=-1), axes=-1)
        return fine, -lat.x_max, lat.h_x / oversample

    @cached_property
    def _fine_table(self):
        lat = self.lattice
        rows, x0, hx = self.fine_rows(8)
        factor = 4
        table = resample(rows, factor * lat.n_alpha, axis=0)
        return table, float(lat.alphas[0]), lat.h_alpha / factor, x0, hx

    def mixed(self, alpha, x):
        """Interpolated ``Phi(alpha, x)``; zero outside the lattice windows."""
        table, a0, ha, x0, hx = self._fine_table
        return interp2_eval(table, a0, ha, x0, hx, alpha, x, ORDER)

    def f1(self, lam, r):
        """Position-symbol partial transform, if this holds ``f_hat``."""
        return self.mixed(lam, r) / SQRT_2PI

    def to_dict(self):
        lat = self.lattice
        return {"kind": "sampled", "n_alpha": lat.n_alpha, "n_beta": lat.n_beta,
                "alpha_max": lat.alpha_max, "beta_max": lat.beta_max,
                "re": self.values.real.tolist(), "im": self.values.imag.tolist()}


def sample(phi, lattice: MomentumLattice = DEFAULT_LATTICE) -> SampledSymbol:
    """Put a momentum symbol on ``lattice`` (closed forms are evaluated exactly)."""
    if isinstance(phi, SampledSymbol):
        if phi.lattice == lattice:
            return phi
        a, b = lattice.mesh()
        return SampledSymbol(lattice, phi(a, b))
    a, b = lattice.mesh()
    values = phi(a, b)
    mixed = None
    if isinstance(phi, GaussianMixture):
        xa, xx = np.meshgrid(lattice.alphas, lattice.xs, indexing="ij")
        mixed = phi.mixed(xa, xx)
    return SampledSymbol(lattice, values, mixed)


# -- JSON --------------------------------------------------------------------


def symbol_from_dict(spec: dict):
    """Build a symbol from its JSON dictionary (raises ValueError/KeyError if malformed)."""
    if not isinstance(spec, dict):
        raise ValueError("symbol spec must be a JSON object")
    kind = spec.get("kind")
    if kind == "gaussian_mixture":
        terms = spec.get("terms")
        if not isinstance(terms, list):
            raise ValueError("field 'terms' must be a list")
        dim = int(spec.get("dim", 2))
        if dim == 2 and all("center" not in t for t in terms):
            for i, t in enumerate(terms):
                if not isinstance(t, dict):
                    raise ValueError(f"terms[{i}] must be an object")
                for key in ("sigma", "tau"):
                    if key in t and float(t[key]) <= 0:
                        raise ValueError(f"terms[{i}].{key} must be positive")
                unknown = set(t) - {"a", "p", "q", "sigma", "tau", "u", "v"}
                if unknown:
                    raise ValueError(f"terms[{i}] has unknown fields {sorted(unknown)}")
            return GaussianMixture.from_terms(terms)
        if not terms:
            return GaussianMixture.zero(dim)
        amp = [_complex(t.get("a", 1.0)) for t in terms]
        center = [t["center"] for t in terms]
        width = [t.get("width", [1.0] * dim) for t in terms]
        freq = [t.get("freq", [0.0] * dim) for t in terms]
        return GaussianMixture(amp, center, width, freq)
    if kind == "sampled":
        lat = MomentumLattice(int(spec["n_alpha"]), int(spec["n_beta"]),
                              float(spec["alpha_max"]), float(spec["beta_max"]))
        values = np.asarray(spec["re"], dtype=float) + 1j * np.asarray(spec["im"], dtype=float)
        return SampledSymbol(lat, values)
    raise ValueError(f"field 'kind' must be 'gaussian_mixture' or 'sampled', got {kind!r}")


def symbol_to_dict(symbol) -> dict:
    return symbol.to_dict()


def load_symbol(path):
    with open(path) as fh:
        return symbol_from_dict(json.load(fh))


def save_symbol(symbol, path):
    with open(path, "w") as fh:
        json.dump(symbol.to_dict(), fh)
