"""Numba helpers: local Lagrange interpolation on uniform tables.

Tables are oversampled (by FFT zero padding) before use, so an 8-point
stencil reproduces band-limited data far below the tolerances used in the
package.
"""
import os

import numba
import numpy as np

ORDER = 8

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"

_threads = os.environ.get("KAPPA_WEYL_THREADS")
if _threads:
    try:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
    except ValueError:
        pass


def _barycentric(order):
    out = np.empty(order)
    for m in range(order):
        out[m] = 1.0 / np.prod([m - q for q in range(order) if q != m])
    return out


_BARY = _barycentric(ORDER)


@numba.njit(cache=True, inline="always")
def _stencil(pos, n, order, wts):
    """Fill ``wts`` with Lagrange weights for fractional index ``pos``.

    Returns the first table index of the stencil, or -1 if the stencil does
    not fit inside ``[0, n)``.  Barycentric form on uniform nodes.
    """
    half = order // 2
    fl = np.floor(pos)
    base = int(fl) - half + 1
    if base < 0 or base + order > n:
        return -1
    t = pos - base
    if pos == fl:
        for m in range(order):
            wts[m] = 0.0
        wts[half - 1] = 1.0
        return base
    total = 0.0
    for m in range(order):
        v = _BARY[m] / (t - m)
        wts[m] = v
        total += v
    for m in range(order):
        wts[m] /= total
    return base


@numba.njit(cache=True)
def interp_row(table, y0, hy, y, order, wts):
    """Interpolate one row ``table`` (values at ``y0 + k*hy``) at ``y``; 0 outside."""
    base = _stencil((y - y0) / hy, table.shape[0], order, wts)
    if base < 0:
        return 0j
    acc = 0j
    for m in range(order):
        acc += wts[m] * table[base + m]
    return acc


@numba.njit(cache=True, parallel=True)
def interp2(table, a0, ha, y0, hy, A, Y, order):
    """Tensor-product Lagrange interpolation of ``table[i, k]`` at (A, Y) pairs."""
    n = A.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    na, ny = table.shape
    for p in numba.prange(n):
        wa = np.empty(order)
        wy = np.empty(order)
        ba = _stencil((A[p] - a0) / ha, na, order, wa)
        by = _stencil((Y[p] - y0) / hy, ny, order, wy)
        if ba < 0 or by < 0:
            continue
        acc = 0j
        for i in range(order):
            row = 0j
            for k in range(order):
                row += wy[k] * table[ba + i, by + k]
            acc += wa[i] * row
        out[p] = acc
    return out


def interp2_eval(table, a0, ha, y0, hy, A, Y, order=ORDER):
    A = np.asarray(A, dtype=float)
    Y = np.asarray(Y, dtype=float)
    A, Y = np.broadcast_arrays(A, Y)
    shape = A.shape
    out = interp2(np.ascontiguousarray(table), float(a0), float(ha), float(y0), float(hy),
                  np.ascontiguousarray(A.ravel()), np.ascontiguousarray(Y.ravel()), order)
    return out.reshape(shape)
