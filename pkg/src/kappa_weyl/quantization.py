"""Quantised operators as integral kernels on the position grid.

Conventions.  A position symbol ``f(t, r)`` is quantised as

    f(T, R) = (1/2 pi) \\int da db f_hat(a, b) W(a, b),

with ``W`` the Weyl operators of :mod:`kappa_weyl.radial_group`.  Its kernel is

    K_f(s, u) = C0 * (F_1 f)(u - s, (e^{-s} - e^{-u}) / (u - s)),   C0 = (2 pi)^{-1/2}.

A momentum symbol ``phi`` is represented without the ``1/2 pi``:
``pi(phi) = \\int phi W`` has kernel ``Phi(u - s, r(s, u))`` where
``Phi(a, x) = \\int db phi(a, b) e^{i b x}``; hence ``pi(f_hat) = 2 pi f(T, R)``.

Canonical (CCR) Weyl quantisation uses ``exp(i(aP + bQ))`` and has kernel
``C0 * (F_1 g)(u - s, (u + s)/2)``.
"""
from __future__ import annotations

import io
import os
import struct
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import BadShape, GridMismatch, SymbolNotEvaluable, UnsupportedDimension
from .grid import DEFAULT_GRID, GridSpec, StateVector, shift
from .special import divided_exp, exprel_neg, sinhc
from .symbols import GaussianMixture

__all__ = [
    "C0",
    "KernelMatrix",
    "kernel_kappa",
    "kernel_pi",
    "kernel_ccr",
    "CCRSymbol",
    "kappa_to_ccr",
    "weyl_integral_apply",
    "ccr_integral_apply",
    "conjugate_by_translation",
    "RingSymbol",
    "RadialSymbolField",
    "sphere_directions",
    "lift_cartesian",
    "star_cartesian",
    "GdElement",
    "compose_gd",
    "act_gd",
    "write_kernel_bin",
    "read_kernel_bin",
    "write_kernel_csv",
    "read_kernel_csv",
]

C0 = 1.0 / np.sqrt(2 * np.pi)
BIN_MAGIC = b"KWK1"


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Kernel samples ``entries[i, k] = K(s_i, s_k)``; operators act with weight ``step``."""

    grid: GridSpec
    entries: np.ndarray = field(repr=False)
    provenance: str = "kappa"

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        n = self.grid.n_points
        if e.shape != (n, n):
            raise BadShape(f"kernel must be {n}x{n}, got {e.shape}")
        object.__setattr__(self, "entries", e)

    @property
    def operator(self) -> np.ndarray:
        """Matrix of the discretised operator (kernel times quadrature weight)."""
        return self.entries * self.grid.step

    def apply(self, xi: StateVector) -> StateVector:
        if xi.grid != self.grid:
            raise GridMismatch("kernel and state live on different grids")
        return xi.with_values(self.entries @ xi.values * self.grid.step)

    def __matmul__(self, other: "KernelMatrix") -> "KernelMatrix":
        if other.grid != self.grid:
            raise GridMismatch("kernels live on different grids")
        return KernelMatrix(self.grid, self.entries @ other.entries * self.grid.step,
                            "product")

    def __add__(self, other):
        return KernelMatrix(self.grid, self.entries + other.entries, self.provenance)

    def __sub__(self, other):
        return KernelMatrix(self.grid, self.entries - other.entries, self.provenance)

    def __mul__(self, c):
        return KernelMatrix(self.grid, self.entries * c, self.provenance)

    __rmul__ = __mul__

    def adjoint(self) -> "KernelMatrix":
        return KernelMatrix(self.grid, self.entries.conj().T, self.provenance)

    def hs_norm(self) -> float:
        """Hilbert-Schmidt norm of the operator: Frobenius norm of ``K * step``."""
        return float(np.linalg.norm(self.entries) * self.grid.step)

    def trace(self) -> complex:
        return complex(np.trace(self.entries) * self.grid.step)

    def relative_error(self, other: "KernelMatrix") -> float:
        """Frobenius distance relative to ``other``."""
        ref = np.linalg.norm(other.entries)
        diff = np.linalg.norm(self.entries - other.entries)
        return float(diff / ref) if ref > 0 else float(diff)


def _mesh(grid: GridSpec):
    s = grid.points
    return np.meshgrid(s, s, indexing="ij")


def _need(f, method):
    fn = getattr(f, method, None)
    if fn is None:
        raise SymbolNotEvaluable(f"{type(f).__name__} does not provide {method}()")
    return fn


def _is_zero(f) -> bool:
    probe = getattr(f, "is_zero", None)
    return bool(probe()) if probe is not None else False


def kernel_kappa(f, grid: GridSpec = DEFAULT_GRID) -> KernelMatrix:
    """Kernel of ``f(T, R)`` from the partial transform ``f.f1(lam, r)``."""
    if _is_zero(f):
        return KernelMatrix(grid, np.zeros((grid.n_points,) * 2), "kappa")
    f1 = _need(f, "f1")
    S, U = _mesh(grid)
    return KernelMatrix(grid, C0 * f1(U - S, divided_exp(S, U)), "kappa")


def kernel_pi(phi, grid: GridSpec = DEFAULT_GRID, sign: int = 1) -> KernelMatrix:
    """Kernel of ``pi_sign(phi) = \\int phi(a, b) W_sign(a, b) da db``.

    ``sign = -1`` uses ``R = -e^{-Q}``.
    """
    if _is_zero(phi):
        return KernelMatrix(grid, np.zeros((grid.n_points,) * 2), "pi")
    mixed = _need(phi, "mixed")
    S, U = _mesh(grid)
    return KernelMatrix(grid, mixed(U - S, sign * divided_exp(S, U)), "pi")


def kernel_ccr(g, grid: GridSpec = DEFAULT_GRID) -> KernelMatrix:
    """Kernel of the canonical Weyl quantisation ``g(P, Q)``."""
    if _is_zero(g):
        return KernelMatrix(grid, np.zeros((grid.n_points,) * 2), "ccr")
    f1 = _need(g, "f1")
    S, U = _mesh(grid)
    return KernelMatrix(grid, C0 * f1(U - S, 0.5 * (U + S)), "ccr")


class CCRSymbol:
    """Canonical-quantisation symbol ``g`` that reproduces ``f(T, R)``.

    Defined through its partial transform
    ``(F_1 g)(lam, q) = (F_1 f)(lam, e^{-q} sinh(lam/2)/(lam/2))``.
    """

    def __init__(self, source, lam_max: float = 40.0, n_lam: int = 4096):
        self.source = source
        self.lam_max = lam_max
        self.n_lam = n_lam

    def is_zero(self) -> bool:
        return _is_zero(self.source)

    def f1(self, lam, q):
        lam = np.asarray(lam, dtype=float)
        q = np.asarray(q, dtype=float)
        return _need(self.source, "f1")(lam, np.exp(-q) * sinhc(0.5 * lam))

    def __call__(self, t, q):
        """``g(t, q)`` by trapezoid inversion of the partial transform."""
        if self.is_zero():
            return np.zeros(np.broadcast(np.asarray(t), np.asarray(q)).shape, dtype=complex)
        t, q = np.broadcast_arrays(np.asarray(t, float), np.asarray(q, float))
        lam = np.linspace(-self.lam_max, self.lam_max, self.n_lam + 1)
        vals = self.f1(lam[:, None], q.ravel()[None, :]) * np.exp(1j * lam[:, None] * t.ravel()[None, :])
        return (C0 * np.trapezoid(vals, lam, axis=0)).reshape(t.shape)


def kappa_to_ccr(f) -> CCRSymbol:
    """Symbol ``g`` with ``g(P, Q) = f(T, R)``."""
    _need(f, "f1")
    return CCRSymbol(f)


# -- operator-side constructions (independent of the kernel formulas) ------


def _lattice_sum(values_fn, xi, alphas, betas, phase_fn):
    acc = np.zeros(xi.grid.n_points, dtype=complex)
    ha = alphas[1] - alphas[0]
    hb = betas[1] - betas[0]
    for a in alphas:
        weights = values_fn(a, betas)
        if not np.any(np.abs(weights) > 0):
            continue
        moved = shift(xi, a).values
        phases = np.exp(1j * np.outer(betas, phase_fn(a, xi.grid.points)))
        acc += moved * (weights @ phases)
    return acc * ha * hb


def weyl_integral_apply(f_hat, xi: StateVector, alpha_box, beta_box, h_alpha: float,
                        h_beta: float, scale: float = 1 / (2 * np.pi)) -> StateVector:
    """``scale * \\int f_hat(a, b) W(a, b) xi`` by a trapezoid sum over Weyl operators.

    Each term is computed with :func:`weyl_act`-equivalent grid operations
    (FFT shift, then the phase ``exprel(-a) b e^{-s}``).
    """
    alphas = np.arange(alpha_box[0], alpha_box[1] + 0.5 * h_alpha, h_alpha)
    betas = np.arange(beta_box[0], beta_box[1] + 0.5 * h_beta, h_beta)
    def phase(a, s):
        return float(exprel_neg(a)) * np.exp(-s)

    acc = _lattice_sum(lambda a, b: f_hat(a, b), xi, alphas, betas, phase)
    return xi.with_values(scale * acc)


def ccr_integral_apply(g_hat, xi: StateVector, alpha_box, beta_box, h_alpha: float,
                       h_beta: float) -> StateVector:
    """``(1/2 pi) \\int g_hat(a, b) exp(i(aP + bQ)) xi`` with
    ``exp(i(aP + bQ)) xi (s) = e^{i a b/2} e^{i b s} xi(s + a)``."""
    alphas = np.arange(alpha_box[0], alpha_box[1] + 0.5 * h_alpha, h_alpha)
    betas = np.arange(beta_box[0], beta_box[1] + 0.5 * h_beta, h_beta)

    def weights(a, b):
        return g_hat(a, b) * np.exp(0.5j * a * b)

    acc = _lattice_sum(weights, xi, alphas, betas, lambda a, s: s)
    return xi.with_values(acc / (2 * np.pi))


def conjugate_by_translation(K: KernelMatrix, theta: float) -> KernelMatrix:
    """``V K V^{-1}`` with ``(V xi)(s) = xi(s + theta)``: entries ``K(s+theta, u+theta)``."""
    grid = K.grid
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, grid.step)
    ph = np.exp(1j * k * theta)
    spec = np.fft.fft2(K.entries) * ph[:, None] * ph[None, :]
    return KernelMatrix(grid, np.fft.ifft2(spec), K.provenance)


# -- d+1 dimensions ----------------------------------------------------------


def sphere_directions(d: int, n: int | None = None):
    """Directions on ``S^{d-1}`` and quadrature weights summing to its area."""
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        n = n or 64
        ang = 2 * np.pi * np.arange(n) / n
        return np.stack([np.cos(ang), np.sin(ang)], axis=1), np.full(n, 2 * np.pi / n)
    if d == 3:
        n = n or 256
        k = np.arange(n) + 0.5
        z = 1 - 2 * k / n
        phi = np.pi * (1 + np.sqrt(5)) * k
        rho = np.sqrt(1 - z**2)
        dirs = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
        return dirs, np.full(n, 4 * np.pi / n)
    raise UnsupportedDimension(f"d must be 1, 2 or 3, got {d}")


class RingSymbol:
    """Rotation-invariant symbol ``f(t, x) = profile(t, |x|)`` on ``R^{1+d}``."""

    def __init__(self, profile: GaussianMixture, d: int):
        if d not in (1, 2, 3):
            raise UnsupportedDimension(f"d must be 1, 2 or 3, got {d}")
        self.profile = profile
        self.d = d
        self.ndim = d + 1

    def __call__(self, t, *xs):
        rad = np.sqrt(sum(np.asarray(x, dtype=float) ** 2 for x in xs))
        return self.profile(t, rad)

    def is_zero(self):
        return self.profile.is_zero()


def _fiber_of_mixture(f: GaussianMixture, c: np.ndarray) -> GaussianMixture:
    """Closed form of ``(t, r) -> f(t, r c)``."""
    if f.n_terms == 0:
        return GaussianMixture.zero(2)
    q, tau, v = f.center[:, 1:], f.width[:, 1:], f.freq[:, 1:]
    A = np.sum(c**2 / (2 * tau**2), axis=1)
    B = np.sum(c * q / (2 * tau**2), axis=1)
    C = np.sum(q**2 / (2 * tau**2), axis=1)
    amp = f.amp * np.exp(B**2 / A - C)
    center = np.stack([f.center[:, 0], B / A], axis=1)
    width = np.stack([f.width[:, 0], 1 / np.sqrt(2 * A)], axis=1)
    freq = np.stack([f.freq[:, 0], np.sum(v * c, axis=1)], axis=1)
    return GaussianMixture(amp, center, width, freq)


@dataclass
class RadialSymbolField:
    """Fibers ``F(c)(t, r)`` over sampled directions with sphere weights."""

    d: int
    directions: np.ndarray
    weights: np.ndarray
    fibers: list

    def __post_init__(self):
        norms = np.linalg.norm(self.directions, axis=1)
        if np.max(np.abs(norms - 1)) > 1e-14:
            raise ValueError("directions must be unit vectors")
        if len(self.fibers) != len(self.directions):
            raise BadShape("one fiber per direction is required")

    def fiber(self, i: int):
        return self.fibers[i]


def lift_cartesian(f, d: int, n_directions: int | None = None) -> RadialSymbolField:
    """Radial field ``F(c)(t, r) = f(t, r c)`` of a symbol on ``R^{1+d}``."""
    dirs, wts = sphere_directions(d, n_directions)
    if isinstance(f, RingSymbol):
        if f.d != d:
            raise UnsupportedDimension("ring symbol dimension mismatch")
        fibers = [f.profile for _ in dirs]
    elif isinstance(f, GaussianMixture):
        if f.ndim != d + 1:
            raise UnsupportedDimension(f"symbol has {f.ndim} variables, expected {d + 1}")
        fibers = [_fiber_of_mixture(f, c) for c in dirs]
    else:
        raise SymbolNotEvaluable("lift_cartesian needs a Gaussian mixture or a ring symbol")
    return RadialSymbolField(d, dirs, wts, fibers)


def star_cartesian(f, g, d: int, lattice=None, n_directions: int | None = None,
                   box_tol: float = 1e-8) -> RadialSymbolField:
    """Fiberwise star product of two lifted symbols.

    Fibers of the result are :class:`~kappa_weyl.symbols.SampledSymbol`
    objects holding the Fourier transform of ``F^f(c) * F^g(c)``, so that
    ``kernel_kappa`` and the trace functionals accept them directly.
    """
    from .symbol_algebra import star_momentum
    from .symbols import DEFAULT_LATTICE, SampledSymbol

    lattice = lattice or DEFAULT_LATTICE
    Ff = lift_cartesian(f, d, n_directions)
    Fg = lift_cartesian(g, d, n_directions)
    fibers = []
    cache = {}
    for a, b in zip(Ff.fibers, Fg.fibers):
        key = (id(a), id(b))
        if key not in cache:
            prod = star_momentum(a.fourier(), b.fourier(), lattice, box_tol=box_tol)
            cache[key] = SampledSymbol(lattice, prod.values / (2 * np.pi))
        fibers.append(cache[key])
    return RadialSymbolField(d, Ff.directions, Ff.weights, fibers)


# -- the group G_d acting on cartesian symbols ------------------------------


@dataclass(frozen=True)
class GdElement:
    """``(A, a, lam)``: rotation/reflection, time translation, dilation."""

    A: np.ndarray
    a: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise BadShape("A must be square")
        if np.max(np.abs(A.T @ A - np.eye(A.shape[0]))) > 1e-12:
            raise ValueError("A must be orthogonal")
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        object.__setattr__(self, "A", A)

    @classmethod
    def identity(cls, d: int):
        return cls(np.eye(d), 0.0, 1.0)


def compose_gd(g1: GdElement, g2: GdElement) -> GdElement:
    """Product for which ``act_gd`` is a left action: ``(A1 A2, a1 + a2, l1 l2)``."""
    return GdElement(g1.A @ g2.A, g1.a + g2.a, g1.lam * g2.lam)


class TransformedSymbol:
    """``f(t - a, lam^{-1} A^{-1} x)`` for a generic callable ``f``."""

    def __init__(self, base, g: GdElement):
        self.base = base
        self.g = g
        self.ndim = g.A.shape[0] + 1

    def __call__(self, t, *xs):
        g = self.g
        X = np.stack(np.broadcast_arrays(*[np.asarray(x, float) for x in xs]), axis=-1)
        Y = (X @ g.A) / g.lam  # rows times A equals A^T x = A^{-1} x
        return self.base(np.asarray(t, float) - g.a, *np.moveaxis(Y, -1, 0))


def _signed_permutation(A):
    rounded = np.round(A)
    if np.max(np.abs(A - rounded)) > 1e-14:
        return None
    if not np.all(np.sum(np.abs(rounded), axis=0) == 1):
        return None
    return rounded


def act_gd(g: GdElement, f):
    """``(rho_g f)(t, x) = f(t - a, lam^{-1} A^{-1} x)``.

    Gaussian mixtures stay closed-form when ``A`` is a signed permutation;
    otherwise a callable wrapper is returned.
    """
    d = g.A.shape[0]
    if isinstance(f, GaussianMixture) and f.ndim == d + 1:
        P = _signed_permutation(g.A)
        if P is not None:
            amp = f.amp * np.exp(-1j * f.freq[:, 0] * g.a)
            center = f.center.copy()
            width = f.width.copy()
            freq = f.freq.copy()
            center[:, 0] += g.a
            for j in range(d):
                i = int(np.flatnonzero(P[:, j])[0])
                sgn = P[i, j]
                center[:, 1 + i] = sgn * g.lam * f.center[:, 1 + j]
                width[:, 1 + i] = g.lam * f.width[:, 1 + j]
                freq[:, 1 + i] = sgn * f.freq[:, 1 + j] / g.lam
            return GaussianMixture(amp, center, width, freq)
    return TransformedSymbol(f, g)


# -- kernel files ------------------------------------------------------------


def _atomic_write(path, data: bytes):
    """Write to a temporary file next to ``path``, then rename over it."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def kernel_to_bin(K: KernelMatrix) -> bytes:
    g = K.grid
    header = BIN_MAGIC + struct.pack("<Idd", g.n_points, g.s_min, g.s_max)
    body = np.ascontiguousarray(K.entries, dtype="<c16").tobytes()
    return header + body


def write_kernel_bin(K: KernelMatrix, path):
    _atomic_write(path, kernel_to_bin(K))


def read_kernel_bin(path) -> KernelMatrix:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != BIN_MAGIC:
        raise BadShape("not a kernel file (bad magic)")
    n, s_min, s_max = struct.unpack("<Idd", data[4:24])
    entries = np.frombuffer(data[24:], dtype="<c16")
    if entries.size != n * n:
        raise BadShape("kernel file is truncated")
    return KernelMatrix(GridSpec(n, s_min, s_max), entries.reshape(n, n).astype(complex))


def kernel_to_csv(K: KernelMatrix) -> bytes:
    n = K.grid.n_points
    pairs = np.empty((n, 2 * n))
    pairs[:, 0::2] = K.entries.real
    pairs[:, 1::2] = K.entries.imag
    buf = io.StringIO()
    g = K.grid
    buf.write(f"# n_points={g.n_points} s_min={g.s_min!r} s_max={g.s_max!r}\n")
    np.savetxt(buf, pairs, delimiter=",", fmt="%.17g")
    return buf.getvalue().encode()


def write_kernel_csv(K: KernelMatrix, path):
    _atomic_write(path, kernel_to_csv(K))


def read_kernel_csv(path) -> KernelMatrix:
    with open(path) as fh:
        head = fh.readline()
        meta = dict(item.split("=") for item in head.lstrip("# ").split())
        pairs = np.loadtxt(fh, delimiter=",", ndmin=2)
    grid = GridSpec(int(meta["n_points"]), float(meta["s_min"]), float(meta["s_max"]))
    return KernelMatrix(grid, pairs[:, 0::2] + 1j * pairs[:, 1::2])
