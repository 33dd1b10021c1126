"""Stable elementary functions used throughout the package.

Everything here is built on ``scipy.special.exprel`` (``(e^x - 1)/x`` with
the removable singularity filled in), so that expressions stay accurate when
their arguments approach zero.
"""
import numpy as np
from scipy.special import exprel

__all__ = ["exprel", "exprel_neg", "w", "divided_exp", "sinhc"]


def exprel_neg(x):
    """Return ``(1 - e^{-x}) / x``, i.e. ``exprel(-x)``."""
    return exprel(-np.asarray(x, dtype=float))


def w(a, b):
    """The positive cocycle ``a (e^b - 1) / (b (e^a - 1))``.

    Written as ``exprel(b) / exprel(a)``, which is finite and accurate at
    ``a = 0`` or ``b = 0``.
    """
    return exprel(np.asarray(b, dtype=float)) / exprel(np.asarray(a, dtype=float))


def divided_exp(s, u):
    """Divided difference ``(e^{-s} - e^{-u}) / (u - s)`` of ``e^{-x}``.

    Evaluated as ``e^{-s} (1 - e^{-(u-s)})/(u-s)``; on the diagonal it equals
    ``e^{-s}``.
    """
    s = np.asarray(s, dtype=float)
    u = np.asarray(u, dtype=float)
    return np.exp(-s) * exprel(-(u - s))


def sinhc(x):
    """``sinh(x)/x`` with value 1 at the origin."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0, 1.0, x)
    with np.errstate(over="ignore"):
        return np.where(x == 0, 1.0, np.sinh(safe) / safe)
