"""Independent reference computations used by the tests.

Nothing here calls the package's numerical routines: group laws, Fourier
transforms of Gaussians and the operator integrals are written out directly
from their definitions and evaluated by brute-force quadrature (or mpmath).
"""
import mpmath
import numpy as np

mpmath.mp.dps = 40


# -- special functions -----------------------------------------------------


def w_mp(a, b):
    """``a (e^b - 1) / (b (e^a - 1))`` at 40 digits, with the limits at 0."""
    a, b = mpmath.mpf(a), mpmath.mpf(b)

    def q(x):
        return mpmath.mpf(1) if x == 0 else mpmath.expm1(x) / x

    return float(q(b) / q(a))


def exprel_np(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x / 2, np.expm1(safe) / safe)


def w_np(a, b):
    return exprel_np(b) / exprel_np(a)


def compose_np(a1, b1, a2, b2):
    """Group law written out from its definition."""
    a = a1 + a2
    return a, w_np(a, a1) * np.exp(a2) * b1 + w_np(a, a2) * b2


# -- Gaussians -----------------------------------------------------------------


def gauss2(t, r, amp, t0, r0, st, tau, u=0.0, v=0.0):
    """``amp exp(-(t-t0)^2/2st^2 - (r-r0)^2/2tau^2) e^{i(u t + v r)}``."""
    return amp * np.exp(-0.5 * ((t - t0) / st) ** 2 - 0.5 * ((r - r0) / tau) ** 2
                        + 1j * (u * t + v * r))


def gauss2_hat(a, b, amp, t0, r0, st, tau, u=0.0, v=0.0):
    """``(1/2 pi) \\int f e^{-i(a t + b r)}`` of :func:`gauss2`, by hand."""
    return (amp * st * tau * np.exp(-0.5 * (st * (a - u)) ** 2 - 0.5 * (tau * (b - v)) ** 2)
            * np.exp(-1j * (a - u) * t0 - 1j * (b - v) * r0))


def gauss2_f1(lam, r, amp, t0, r0, st, tau, u=0.0, v=0.0):
    """``(2 pi)^{-1/2} \\int dt f(t, r) e^{-i lam t}`` of :func:`gauss2`."""
    return (amp * st * np.exp(-0.5 * (st * (lam - u)) ** 2 - 1j * (lam - u) * t0)
            * np.exp(-0.5 * ((r - r0) / tau) ** 2 + 1j * v * r))


def gauss1(s, center, width):
    return np.exp(-0.5 * ((s - center) / width) ** 2)


def gauss1_normalized(s, center, width):
    return gauss1(s, center, width) / (np.pi * width**2) ** 0.25


# -- literal twisted convolutions -------------------------------------------


def _trap_weights(n):
    wts = np.ones(n)
    wts[0] = wts[-1] = 0.5
    return wts


def star_literal(phi1, phi2, alpha, beta, box=12.0, n=1201):
    """``\\int da' db' w(a-a', a) phi1(a', b') phi2(a-a', w(a-a', a) b - w(a'-a, a') b')``."""
    ap = np.linspace(-box, box, n)
    bp = np.linspace(-box, box, n)
    h = ap[1] - ap[0]
    A, B = np.meshgrid(ap, bp, indexing="ij")
    a2 = alpha - A
    big = w_np(a2, alpha)
    val = big * phi1(A, B) * phi2(a2, big * beta - w_np(-a2, A) * B)
    wts = np.outer(_trap_weights(n), _trap_weights(n))
    return complex(np.sum(val * wts) * h * h)


def group_literal(phi1, phi2, alpha, beta, box=12.0, n=1201):
    """``\\int dmu(h) phi1(h) phi2(h^{-1} g)`` with ``dmu = exprel(a') da' db'``."""
    ap = np.linspace(-box, box, n)
    bp = np.linspace(-box, box, n)
    h = ap[1] - ap[0]
    A, B = np.meshgrid(ap, bp, indexing="ij")
    ga, gb = compose_np(-A, -B, alpha, beta)
    val = exprel_np(A) * phi1(A, B) * phi2(ga, gb)
    wts = np.outer(_trap_weights(n), _trap_weights(n))
    return complex(np.sum(val * wts) * h * h)


# -- operator integrals on analytic states ------------------------------------


def weyl_integral(f_hat, state, s, alpha_box, beta_box, h):
    """``(1/2 pi) \\int f_hat(a, b) (W(a, b) xi)(s) da db`` with
    ``(W(a, b) xi)(s) = exp(i exprel(-a) b e^{-s}) xi(s + a)``, xi analytic."""
    alphas = np.arange(alpha_box[0], alpha_box[1] + h / 2, h)
    betas = np.arange(beta_box[0], beta_box[1] + h / 2, h)
    out = np.zeros_like(s, dtype=complex)
    for a in alphas:
        coef = f_hat(a, betas)
        theta = exprel_np(-a) * np.exp(-s)
        out += state(s + a) * (np.exp(1j * np.outer(theta, betas)) @ coef)
    return out * h * h / (2 * np.pi)


def ccr_integral(g_hat_rows, alphas, betas, state, s):
    """``(1/2 pi) \\int g_hat(a, b) e^{i a b/2} e^{i b s} xi(s + a)``.

    ``g_hat_rows[i, j] = g_hat(alphas[i], betas[j])`` on uniform lattices.
    """
    ha, hb = alphas[1] - alphas[0], betas[1] - betas[0]
    out = np.zeros_like(s, dtype=complex)
    for a, row in zip(alphas, g_hat_rows):
        coef = row * np.exp(0.5j * a * betas)
        out += state(s + a) * (np.exp(1j * np.outer(s, betas)) @ coef)
    return out * ha * hb / (2 * np.pi)


def ccr_symbol_hat(f1, alphas, betas, q_box=(-8.0, 8.0), nq=8001):
    """``g_hat(a, b) = (2 pi)^{-1/2} \\int dq e^{-i b q} (F_1 g)(a, q)`` where
    ``(F_1 g)(a, q) = (F_1 f)(a, e^{-q} sinh(a/2)/(a/2))``."""
    q = np.linspace(q_box[0], q_box[1], nq)
    hq = q[1] - q[0]
    wq = _trap_weights(nq) * hq
    phase = np.exp(-1j * np.outer(betas, q))
    rows = []
    for a in alphas:
        x = 0.5 * a
        shc = 1.0 if x == 0 else np.sinh(x) / x
        rows.append(phase @ (f1(a, np.exp(-q) * shc) * wq))
    return np.array(rows) / np.sqrt(2 * np.pi)


# -- integrals over (t, r) ------------------------------------------------------


def log_r_integral(f, t_box, r_box, nt=801, ns=4001):
    """``\\int dt \\int dr/r f(t, r)`` by a tensor trapezoid rule in ``(t, log r)``."""
    t = np.linspace(t_box[0], t_box[1], nt)
    lr = np.linspace(np.log(r_box[0]), np.log(r_box[1]), ns)
    T, LR = np.meshgrid(t, lr, indexing="ij")
    val = f(T, np.exp(LR))
    wts = np.outer(_trap_weights(nt) * (t[1] - t[0]), _trap_weights(ns) * (lr[1] - lr[0]))
    return complex(np.sum(val * wts))
