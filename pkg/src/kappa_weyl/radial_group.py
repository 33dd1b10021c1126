"""The radial group on R^2 and its Weyl representation on grid states.

The group law is the one obtained by composing the unitaries
``W(alpha, beta) = exp(i(alpha T + beta R))`` with ``T = P`` and
``R = exp(-Q)``::

    (a1, b1)(a2, b2) = (a1 + a2, w(a1+a2, a1) e^{a2} b1 + w(a1+a2, a2) b2)

It is isomorphic to the matrix group of ``[[e^a, 0], [exprel(a) b, 1]]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureDiverged
from .grid import StateVector, multiply_phase, shift
from .special import exprel, exprel_neg, w

__all__ = [
    "GroupElement",
    "HaarData",
    "IDENTITY",
    "w",
    "compose",
    "inverse",
    "embed_matrix",
    "haar",
    "haar_integral",
    "scaling_limit_residual",
    "weyl_act",
    "weyl_split",
]


@dataclass(frozen=True)
class GroupElement:
    """Point ``(alpha, beta)``; fields may also be numpy arrays (batched)."""

    alpha: float
    beta: float

    def __iter__(self):
        yield self.alpha
        yield self.beta


IDENTITY = GroupElement(0.0, 0.0)


@dataclass(frozen=True)
class HaarData:
    weight: float   # density of the left Haar measure, exprel(alpha)
    modular: float  # modular function e^alpha


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    a1, b1 = g1
    a2, b2 = g2
    a = np.add(a1, a2)
    b = w(a, a1) * np.exp(a2) * b1 + w(a, a2) * b2
    if np.ndim(a) == 0:
        return GroupElement(float(a), float(b))
    return GroupElement(a, b)


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(-g.alpha, -g.beta) if np.ndim(g.alpha) else GroupElement(-float(g.alpha), -float(g.beta))


def embed_matrix(g: GroupElement) -> np.ndarray:
    """``j(g) = [[e^a, 0], [exprel(a) b, 1]]``; batched inputs give shape (..., 2, 2)."""
    a = np.asarray(g.alpha, dtype=float)
    b = np.asarray(g.beta, dtype=float)
    out = np.zeros(a.shape + (2, 2))
    out[..., 0, 0] = np.exp(a)
    out[..., 1, 0] = exprel(a) * b
    out[..., 1, 1] = 1.0
    return out


def haar(g: GroupElement) -> HaarData:
    a = np.asarray(g.alpha, dtype=float)
    weight, modular = exprel(a), np.exp(a)
    if a.ndim == 0:
        return HaarData(float(weight), float(modular))
    return HaarData(weight, modular)


def _box_for(phi, box):
    if box is not None:
        return box
    hint = getattr(phi, "box", None)
    if callable(hint):
        return hint()
    return ((-10.0, 10.0), (-10.0, 10.0))


def haar_integral(phi, box=None, n: int = 256, weighted: bool = True) -> complex:
    """Trapezoid approximation of ``\\int dmu phi`` (or ``\\int phi`` if not weighted).

    ``phi`` is a callable ``phi(alpha, beta)`` accepting arrays; ``box`` is
    ``((a_lo, a_hi), (b_lo, b_hi))``.
    """
    (a_lo, a_hi), (b_lo, b_hi) = _box_for(phi, box)
    a = np.linspace(a_lo, a_hi, n + 1)
    b = np.linspace(b_lo, b_hi, n + 1)
    A, B = np.meshgrid(a, b, indexing="ij")
    vals = phi(A, B)
    if weighted:
        vals = vals * exprel(A)
    return complex(np.trapezoid(np.trapezoid(vals, b, axis=1), a))


def scaling_limit_residual(phi, kappa: float, box=None, n: int = 256,
                           tol: float = 1e-10) -> float:
    """``|kappa^2 \\int dmu phi(kappa a, kappa b) - \\int phi|``.

    The rescaled integral is evaluated over the box shrunk by ``kappa`` (the
    support of ``phi(kappa .)``); each integral is checked against a run at
    twice the resolution.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    (a_lo, a_hi), (b_lo, b_hi) = _box_for(phi, box)
    small = ((a_lo / kappa, a_hi / kappa), (b_lo / kappa, b_hi / kappa))

    def scaled(a, b):
        return phi(kappa * a, kappa * b)

    def settled(f, bx, weighted):
        coarse = haar_integral(f, bx, n, weighted)
        fine = haar_integral(f, bx, 2 * n, weighted)
        if abs(fine - coarse) > tol * max(1.0, abs(fine)):
            raise QuadratureDiverged(f"quadrature moved by {abs(fine - coarse):.2e} under refinement")
        return fine

    lhs = kappa**2 * settled(scaled, small, True)
    rhs = settled(phi, ((a_lo, a_hi), (b_lo, b_hi)), False)
    return float(abs(lhs - rhs))


def weyl_act(g: GroupElement, xi: StateVector, sign: int = 1) -> StateVector:
    """``(W(a, b) xi)(s) = exp(i sign exprel(-a) b e^{-s}) xi(s + a)``.

    ``sign = -1`` gives the representation with ``R = -e^{-Q}``.
    """
    a, b = float(g.alpha), float(g.beta)
    moved = shift(xi, a)
    if b == 0:
        return moved
    theta = sign * float(exprel_neg(a)) * b * np.exp(-xi.grid.points)
    return multiply_phase(moved, theta)


def weyl_split(alpha: float, beta: float, xi: StateVector, sign: int = 1) -> StateVector:
    """``e^{i alpha T} e^{i exprel(alpha) beta R}`` applied factor by factor."""
    theta = sign * float(exprel(alpha)) * beta * np.exp(-xi.grid.points)
    return shift(multiply_phase(xi, theta), alpha)
