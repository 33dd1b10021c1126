"""Numba kernel for the twisted convolutions of momentum symbols.

Both products have the shape

    (phi1 . phi2)(a, b) = \\int da' db' c(a, a') phi1(a', b') phi2(a - a', A b - B b')

with positive coefficients ``A, B`` depending on ``(a, a')`` only.  For fixed
``(a, a')`` the ``b'`` integral is a dilated convolution in ``b``; after the
partial Fourier transform ``Phi(a, x) = \\int db phi(a, b) e^{i b x}`` it
becomes a product,

    Phi12(a, x) = \\int da' (c / A) Phi1(a', (B/A) x) Phi2(a - a', x / A),

so the remaining work is one trapezoid sum over ``a'`` per output point.
"""
import numba
import numpy as np

from ._interp import _BARY

STAR = 0
GROUP = 1


@numba.njit(cache=True, inline="always")
def _exprel(x):
    if abs(x) < 1e-6:
        return 1.0 + x / 2.0 + x * x / 6.0
    return np.expm1(x) / x


@numba.njit(cache=True, inline="always")
def _w(a, b):
    return _exprel(b) / _exprel(a)


@numba.njit(cache=True, inline="always")
def coefficients(kind, alpha, alpha_p):
    """Return ``(c/A, B/A, 1/A)`` for the product ``kind`` at (alpha, alpha')."""
    a2 = alpha - alpha_p
    big_a = _w(a2, alpha)
    if kind == STAR:
        big_b = _w(-a2, alpha_p)
        weight = big_a
    else:
        big_b = _w(a2, -alpha_p) * np.exp(alpha)
        weight = _exprel(alpha_p)
    return weight / big_a, big_b / big_a, 1.0 / big_a


@numba.njit(cache=True, inline="always")
def _interp_lin(row, pos, wts, order):
    """Interpolate ``row`` at fractional index ``pos`` (0 outside)."""
    n = row.shape[0]
    half = order // 2
    fl = np.floor(pos)
    base = int(fl) - half + 1
    if base < 0 or base + order > n:
        return 0j
    if pos == fl:
        return row[int(fl)]
    t = pos - base
    total = 0.0
    acc = 0j
    for m in range(order):
        v = _BARY[m] / (t - m)
        total += v
        acc += v * row[base + m]
    return acc / total


@numba.njit(cache=True, parallel=True)
def twisted_rows(tab1, tab2, x0, hx, alphas, xs, rows, kind, rowmax1, rowmax2, prune, order):
    """``Phi12(alphas[rows[i]], xs[k])`` from oversampled rows of both factors.

    ``tabN[j, m]`` holds ``PhiN(alphas[j], x0 + m hx)``; values outside the
    table are treated as zero.
    """
    na = alphas.shape[0]
    c = na // 2
    h = alphas[1] - alphas[0]
    nx = xs.shape[0]
    out = np.zeros((rows.shape[0], nx), dtype=np.complex128)
    for ii in numba.prange(rows.shape[0]):
        i = rows[ii]
        alpha = alphas[i]
        wts = np.empty(order)
        for j in range(na):
            i2 = i - j + c
            if i2 < 0 or i2 >= na:
                continue
            if rowmax1[j] * rowmax2[i2] <= prune:
                continue
            fac, rho1, rho2 = coefficients(kind, alpha, alphas[j])
            fac *= h
            cut = prune / rowmax2[i2]
            row1 = tab1[j]
            row2 = tab2[i2]
            for k in range(nx):
                x = xs[k]
                v1 = _interp_lin(row1, (rho1 * x - x0) / hx, wts, order)
                if abs(v1.real) + abs(v1.imag) <= cut:
                    continue
                v2 = _interp_lin(row2, (rho2 * x - x0) / hx, wts, order)
                out[ii, k] += fac * v1 * v2
    return out
