"""Property suites behind ``kappa-weyl verify``.

Each suite is a list of named checks.  A check returns ``(residual,
threshold)`` and passes when ``residual < threshold * tol_scale`` (or
``residual >= -threshold`` for lower bounds).  Numerical guard errors are
caught and reported as failures, so degraded configurations still produce a
full table.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from . import functionals as fn
from . import quantization as qz
from . import radial_group as rg
from . import symbol_algebra as sa
from . import uncertainty as un
from .errors import KappaWeylError
from .grid import DEFAULT_GRID, Bump, Gaussian, GridSpec, Hermite, make_state
from .special import w
from .symbols import DEFAULT_LATTICE, GaussianMixture, MomentumLattice

__all__ = ["RunConfig", "CheckResult", "SUITES", "run_suite", "run", "format_table", "report_json"]


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec = DEFAULT_GRID
    lattice: MomentumLattice = DEFAULT_LATTICE
    tol_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.tol_scale > 0:
            raise ValueError("tolerance scale must be positive")


@dataclass
class CheckResult:
    suite: str
    name: str
    residual: float
    threshold: float
    passed: bool
    kind: str = "upper"
    detail: str = ""


_REGISTRY: dict[str, list] = {s: [] for s in
                              ("group", "algebra", "quantization", "functionals", "uncertainty")}


def _check(suite, name, threshold, kind="upper"):
    def deco(func):
        _REGISTRY[suite].append((name, threshold, kind, func))
        return func
    return deco


# -- shared test objects -------------------------------------------------------


def position_symbol(rng, t_width=(0.8, 1.2)) -> GaussianMixture:
    """Random Gaussian position symbol localised at r ~ 4 (negligible at r = 0)."""
    t0, r0 = rng.uniform(-0.5, 0.5), rng.uniform(3.8, 4.5)
    st, tau = rng.uniform(*t_width), rng.uniform(0.45, 0.55)
    ft, fr = rng.uniform(-0.3, 0.3, size=2)
    amp = np.exp(1j * rng.uniform(0, 2 * np.pi)) * rng.uniform(0.5, 1.5)
    return GaussianMixture.gaussian([t0, r0], [st, tau], [ft, fr], amp=amp)


def momentum_unit(rng) -> GaussianMixture:
    """Unit-width momentum Gaussian whose position profile sits at r ~ 4."""
    p, q = rng.uniform(-0.2, 0.2, size=2)
    u, v = rng.uniform(-0.2, 0.2), rng.uniform(-4.1, -3.9)
    return GaussianMixture.gaussian([p, q], [1.0, 1.0], [u, v])


def momentum_near_origin(rng) -> GaussianMixture:
    """Unit-width momentum Gaussian whose position profile is centred near r = 0."""
    p, q, u, v = rng.uniform(-0.3, 0.3, size=4)
    return GaussianMixture.gaussian([p, q], [1.0, 1.0], [u, v])


def _state(grid, center=3.0, width=0.75):
    return make_state(grid, Gaussian(center, width))


def _rel(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


# -- group --------------------------------------------------------------------


def _elements(rng, n, scale=2.0):
    return rg.GroupElement(rng.uniform(-scale, scale, n), rng.uniform(-scale, scale, n))


def _gdiff(g, h):
    return float(np.max(np.abs(np.asarray(g.alpha) - h.alpha) + np.abs(np.asarray(g.beta) - h.beta)))


@_check("group", "associativity (10^4 triples)", 1e-12)
def _(cfg, rng, cache):
    g1, g2, g3 = (_elements(rng, 10_000) for _ in range(3))
    return _gdiff(rg.compose(rg.compose(g1, g2), g3), rg.compose(g1, rg.compose(g2, g3)))


@_check("group", "identity and inverse", 1e-12)
def _(cfg, rng, cache):
    g = _elements(rng, 10_000)
    e = rg.GroupElement(np.zeros(10_000), np.zeros(10_000))
    return max(_gdiff(rg.compose(g, e), g), _gdiff(rg.compose(e, g), g),
               _gdiff(rg.compose(g, rg.inverse(g)), e), _gdiff(rg.compose(rg.inverse(g), g), e))


@_check("group", "w cocycle w(a1,a2)w(a2,a3)=w(a1,a3)", 1e-13)
def _(cfg, rng, cache):
    a1, a2, a3 = rng.uniform(-5, 5, (3, 10_000))
    lhs, rhs = w(a1, a2) * w(a2, a3), w(a1, a3)
    return float(np.max(np.abs(lhs - rhs) / rhs))


@_check("group", "w reflection w(-a1,a2)=e^a1 w(a1,a2)", 1e-13)
def _(cfg, rng, cache):
    a1, a2 = rng.uniform(-5, 5, (2, 10_000))
    rhs = np.exp(a1) * w(a1, a2)
    return float(np.max(np.abs(w(-a1, a2) - rhs) / rhs))


@_check("group", "w positivity (min value)", 0.0, kind="lower")
def _(cfg, rng, cache):
    a1, a2 = rng.uniform(-30, 30, (2, 10_000))
    return float(np.min(w(a1, a2)))


@_check("group", "matrix embedding homomorphism", 1e-12)
def _(cfg, rng, cache):
    g1, g2 = _elements(rng, 10_000), _elements(rng, 10_000)
    lhs = rg.embed_matrix(rg.compose(g1, g2))
    rhs = rg.embed_matrix(g1) @ rg.embed_matrix(g2)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))


@_check("group", "one-parameter subgroups", 1e-12)
def _(cfg, rng, cache):
    a, b = rng.uniform(-2, 2, (2, 10_000))
    l1, l2 = rng.uniform(-1.5, 1.5, (2, 10_000))
    got = rg.compose(rg.GroupElement(l1 * a, l1 * b), rg.GroupElement(l2 * a, l2 * b))
    return _gdiff(got, rg.GroupElement((l1 + l2) * a, (l1 + l2) * b))


@_check("group", "Haar left invariance", 1e-6)
def _(cfg, rng, cache):
    phi = GaussianMixture.gaussian([0.0, 0.0], [1.0, 1.0])
    box = ((-9.0, 9.0), (-40.0, 40.0))
    base = rg.haar_integral(phi, box, n=512)
    worst = 0.0
    for _ in range(3):
        g0 = rg.GroupElement(*rng.uniform(-1, 1, 2))

        def moved(a, b, g0=g0):
            return phi(*rg.compose(g0, rg.GroupElement(a, b)))
        worst = max(worst, abs(rg.haar_integral(moved, box, n=512) - base) / abs(base))
    return worst


@_check("group", "scaling limit residual(100)/residual(1)", 1e-3)
def _(cfg, rng, cache):
    phi = GaussianMixture.gaussian([0.0, 0.0], [1.0, 1.0])
    return rg.scaling_limit_residual(phi, 100.0) / rg.scaling_limit_residual(phi, 1.0)


@_check("group", "Weyl representation W(g1)W(g2)=W(g1g2) (100 pairs, L2)", 1e-8)
def _(cfg, rng, cache):
    xi = _state(cfg.grid)
    worst = 0.0
    for _ in range(100):
        g1 = rg.GroupElement(*rng.uniform(-1, 1, 2))
        g2 = rg.GroupElement(*rng.uniform(-1, 1, 2))
        lhs = rg.weyl_act(g1, rg.weyl_act(g2, xi))
        rhs = rg.weyl_act(rg.compose(g1, g2), xi)
        worst = max(worst, (lhs - rhs).norm)
    return worst


@_check("group", "split path equals direct path (max abs)", 1e-10)
def _(cfg, rng, cache):
    xi = _state(cfg.grid)
    worst = 0.0
    for _ in range(100):
        a, b = rng.uniform(-2, 2, 2)
        d = rg.weyl_split(a, b, xi).values - rg.weyl_act(rg.GroupElement(a, b), xi).values
        worst = max(worst, float(np.max(np.abs(d))))
    return worst


@_check("group", "Weyl operators unitary", 1e-10)
def _(cfg, rng, cache):
    xi = _state(cfg.grid)
    return max(abs(rg.weyl_act(rg.GroupElement(*rng.uniform(-2, 2, 2)), xi).norm - 1.0)
               for _ in range(20))


# -- algebra ---------------------------------------------------------------


def _alg(cfg, rng, cache):
    """Shared symbols and products of the algebra suite (computed once)."""
    if "alg" not in cache:
        lat = cfg.lattice
        f, g = position_symbol(rng), position_symbol(rng)
        phi, psi = f.fourier(), g.fourier()
        star = sa.star_momentum(phi, psi, lat)
        cache["alg"] = dict(lat=lat, f=f, g=g, phi=phi, psi=psi, star=star)
    return cache["alg"]


@_check("algebra", "star associativity (unit Gaussians, L1)", 1e-5)
def _(cfg, rng, cache):
    lat = cfg.lattice
    p1, p2, p3 = (momentum_unit(rng) for _ in range(3))
    left = sa.star_momentum(sa.star_momentum(p1, p2, lat), p3, lat)
    right = sa.star_momentum(p1, sa.star_momentum(p2, p3, lat), lat)
    return sa.l1_distance(left, right)


@_check("algebra", "pi homomorphism pi(phi*psi)=pi(phi)pi(psi) (rel Frobenius)", 1e-3)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    lhs = qz.kernel_pi(d["star"], cfg.grid)
    rhs = qz.kernel_pi(d["phi"], cfg.grid) @ qz.kernel_pi(d["psi"], cfg.grid)
    return lhs.relative_error(rhs)


@_check("algebra", "pi(phi^*) = pi(phi)^dagger", 1e-6)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    return qz.kernel_pi(sa.involution_B(d["phi"]), cfg.grid).relative_error(
        qz.kernel_pi(d["phi"], cfg.grid).adjoint())


@_check("algebra", "digamma: pi_- = pi_+ o digamma", 1e-6)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    return qz.kernel_pi(d["phi"], cfg.grid, sign=-1).relative_error(
        qz.kernel_pi(sa.digamma(d["phi"]), cfg.grid, sign=1))


@_check("algebra", "E+ idempotent (L1)", 1e-4)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    e1 = sa.project_even(d["phi"], 1, d["lat"])
    return sa.l1_distance(sa.project_even(e1, 1, d["lat"]), e1)


@_check("algebra", "E+ multiplicative (L1)", 1e-4)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    lat = d["lat"]
    lhs = sa.project_even(d["star"], 1, lat)
    rhs = sa.star_momentum(sa.project_even(d["phi"], 1, lat), sa.project_even(d["psi"], 1, lat), lat)
    return sa.l1_distance(lhs, rhs)


@_check("algebra", "E- multiplicative (L1)", 1e-4)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    lat = d["lat"]
    # reflected symbols live at x < 0, where E- keeps the information
    phi, psi = sa.digamma(d["phi"]), sa.digamma(d["psi"])
    lhs = sa.project_even(sa.star_momentum(phi, psi, lat), -1, lat)
    rhs = sa.star_momentum(sa.project_even(phi, -1, lat), sa.project_even(psi, -1, lat), lat)
    return sa.l1_distance(lhs, rhs)


@_check("algebra", "u intertwines star and group convolution (L1)", 1e-5)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    lat = d["lat"]
    lhs = sa.iso_u(d["star"], lat)
    rhs = sa.convolve_group(sa.iso_u(d["phi"], lat), sa.iso_u(d["psi"], lat), lat)
    return sa.l1_distance(lhs, rhs)


@_check("algebra", "u(phi^*) = (u phi)^dagger (L1)", 1e-5)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    lat = d["lat"]
    return sa.l1_distance(sa.iso_u(sa.involution_B(d["phi"]), lat),
                          sa.dagger_group(sa.iso_u(d["phi"], lat)))


@_check("algebra", "dagger isometry on L1(group)", 1e-8)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    phi = d["phi"]
    a = sa.l1_norm(sa.dagger_group(phi), haar=True)
    b = sa.l1_norm(phi, haar=True)
    return abs(a - b) / b


@_check("algebra", "u isometry L1 -> L1(group)", 1e-8)
def _(cfg, rng, cache):
    d = _alg(cfg, rng, cache)
    phi = d["phi"]
    b = sa.l1_norm(phi)
    return abs(sa.l1_norm(sa.iso_u(phi, d["lat"]), haar=True) - b) / b


@_check("algebra", "trivial character multiplicative (t=0.7)", 1e-6)
def _(cfg, rng, cache):
    phi, psi = momentum_near_origin(rng), momentum_near_origin(rng)
    t = 0.7
    lhs = sa.trivial_character(sa.star_momentum(phi, psi, cfg.lattice), t)
    rhs = sa.trivial_character(phi, t) * sa.trivial_character(psi, t)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


# -- quantization ------------------------------------------------------------


def _oracle_state(grid):
    return make_state(grid, Gaussian(1.0, 0.7))


@_check("quantization", "kernel vs Weyl-integral oracle (5 symbols, rel L2)", 1e-4)
def _(cfg, rng, cache):
    xi = _oracle_state(cfg.grid)
    worst = 0.0
    ratios = []
    for _ in range(5):
        f = position_symbol(rng, t_width=(1.6, 2.0))
        fh = f.fourier()
        (a_lo, a_hi), (b_lo, b_hi) = fh.box(1e-13)
        got = qz.kernel_kappa(f, cfg.grid).apply(xi).values
        ref = qz.weyl_integral_apply(fh, xi, (a_lo, a_hi), (b_lo, b_hi), 0.1, 0.1).values
        worst = max(worst, _rel(got, ref))
        unit = got / qz.C0
        ratios.append(np.vdot(unit, ref) / np.vdot(unit, unit))
    cache["c0"] = complex(np.mean(ratios))
    return worst


@_check("quantization", "resolved c0 = (2 pi)^(-1/2)", 1e-6)
def _(cfg, rng, cache):
    if "c0" not in cache:
        raise KappaWeylError("oracle check did not run")
    return abs(cache["c0"] / qz.C0 - 1.0)


@_check("quantization", "CCR bridge H_g = K_f (5 symbols, rel Frobenius)", 1e-4)
def _(cfg, rng, cache):
    worst = 0.0
    for _ in range(5):
        f = position_symbol(rng)
        worst = max(worst, qz.kernel_ccr(qz.kappa_to_ccr(f), cfg.grid).relative_error(
            qz.kernel_kappa(f, cfg.grid)))
    return worst


@_check("quantization", "kernel(f star g) = kernel(f) kernel(g) (rel Frobenius)", 1e-3)
def _(cfg, rng, cache):
    f, g = position_symbol(rng), position_symbol(rng)
    prod = sa.star_momentum(f.fourier(), g.fourier(), cfg.lattice) * (1 / (2 * np.pi))
    lhs = qz.kernel_kappa(prod, cfg.grid)
    rhs = qz.kernel_kappa(f, cfg.grid) @ qz.kernel_kappa(g, cfg.grid)
    return lhs.relative_error(rhs)


@_check("quantization", "G_d action composition (d=2)", 1e-12)
def _(cfg, rng, cache):
    f = GaussianMixture.gaussian([0.2, 1.0, -0.5], [1.0, 0.7, 0.9], [0.1, 0.3, -0.2])
    worst = 0.0
    for _ in range(10):
        gs = []
        for _ in range(2):
            th = rng.uniform(0, 2 * np.pi)
            A = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
            gs.append(qz.GdElement(A, rng.uniform(-1, 1), rng.uniform(0.5, 2)))
        pts = rng.normal(size=(3, 50))
        lhs = qz.act_gd(gs[0], qz.act_gd(gs[1], f))(*pts)
        rhs = qz.act_gd(qz.compose_gd(gs[0], gs[1]), f)(*pts)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


@_check("quantization", "d=1 dilation covariance of kernels", 1e-4)
def _(cfg, rng, cache):
    f = GaussianMixture.gaussian([0.0, 2.5], [1.0, 0.35]) + \
        GaussianMixture.gaussian([0.3, -3.0], [1.2, 0.4], [0.2, 0.1]) * 0.5
    lam = 1.5
    g = qz.GdElement(np.eye(1), 0.0, lam)
    moved = qz.lift_cartesian(qz.act_gd(g, f), 1)
    base = qz.lift_cartesian(f, 1)
    worst = 0.0
    for fa, fb in zip(moved.fibers, base.fibers):
        lhs = qz.kernel_kappa(fa, cfg.grid)
        rhs = qz.conjugate_by_translation(qz.kernel_kappa(fb, cfg.grid), np.log(lam))
        worst = max(worst, lhs.relative_error(rhs))
    return worst


# -- functionals -------------------------------------------------------------


@_check("functionals", "trace: symbol vs matrix (3 symbols, rel)", 1e-3)
def _(cfg, rng, cache):
    return max(fn.trace_symbol(position_symbol(rng), cfg.grid).relative_error for _ in range(3))


@_check("functionals", "HS norm: formula vs Frobenius (3 symbols, rel)", 1e-3)
def _(cfg, rng, cache):
    worst = 0.0
    for _ in range(3):
        f = position_symbol(rng)
        a, b = fn.hs_norm(f, cfg.grid), fn.hs_norm_matrix(f, cfg.grid)
        worst = max(worst, abs(a - b) / a)
    return worst


def _props(cfg, rng, cache):
    if "props" not in cache:
        f, g = position_symbol(rng), position_symbol(rng)
        cache["props"] = fn.check_trace_properties(f, g, cfg.lattice, cfg.grid)
    return cache["props"]


@_check("functionals", "cyclicity |tau(f*g)-tau(g*f)| / scale", 1e-4)
def _(cfg, rng, cache):
    rep = _props(cfg, rng, cache)
    return rep.cyclicity_residual / rep.scale


@_check("functionals", "positivity tau(conj f * f) / scale", -1e-6, kind="lower")
def _(cfg, rng, cache):
    rep = _props(cfg, rng, cache)
    return rep.positivity / rep.scale


@_check("functionals", "tau(conj f * f) = hs_norm^2 (rel)", 1e-3)
def _(cfg, rng, cache):
    rep = _props(cfg, rng, cache)
    return abs(rep.positivity - rep.hs_norm_squared) / rep.hs_norm_squared


@_check("functionals", "tau_c = tau_r, d=1 (rel)", 1e-4)
def _(cfg, rng, cache):
    f = GaussianMixture.gaussian([0.1, 4.0], [1.0, 0.5], [0.2, 0.1]) + \
        GaussianMixture.gaussian([-0.2, -3.8], [0.9, 0.45]) * 0.7
    a = fn.tau_cartesian(f, 1, cfg.grid)
    b = fn.tau_radial(qz.lift_cartesian(f, 1), cfg.grid)
    return abs(a - b) / abs(b)


@_check("functionals", "tau_c = tau_r, d=2 (rel)", 1e-4)
def _(cfg, rng, cache):
    f = GaussianMixture.gaussian([0.0, 3.5, 1.0], [1.0, 0.4, 0.6], [0.0, 0.3, 0.0])
    a = fn.tau_cartesian(f, 2, cfg.grid)
    b = fn.tau_radial(qz.lift_cartesian(f, 2, 64), cfg.grid)
    return abs(a - b) / abs(b)


@_check("functionals", "sphere area prefactor d=1 equals 2", 1e-300)
def _(cfg, rng, cache):
    return abs(fn.sphere_area(1) - 2.0)


@_check("functionals", "compactness sigma_64 / sigma_1", 1e-6)
def _(cfg, rng, cache):
    sv = fn.singular_decay(qz.kernel_kappa(position_symbol(rng), cfg.grid), 64)
    return sv[63] / sv[0]


# -- uncertainty ---------------------------------------------------------------


def _random_state(grid, rng):
    kind = rng.integers(3)
    if kind == 0:
        return make_state(grid, Gaussian(rng.uniform(-2, 2), rng.uniform(0.5, 1.2)))
    if kind == 1:
        return make_state(grid, Hermite(int(rng.integers(0, 5)), rng.uniform(-2, 2),
                                        rng.uniform(0.6, 1.0)))
    lo = rng.uniform(-5, 0)
    return make_state(grid, Bump((lo, lo + rng.uniform(5, 8))))


@_check("uncertainty", "Heisenberg slack over 100 states (min)", -1e-8, kind="lower")
def _(cfg, rng, cache):
    worst = np.inf
    for _ in range(100):
        rep = un.moments(_random_state(cfg.grid, rng), 1.0)
        worst = min(worst, rep.slack)
    return float(worst)


def _bumps(cache):
    if "bumps" not in cache:
        cache["bumps"] = {lam: un.moments(un.make_bump_state(0.05, lam)) for lam in range(9)}
    return cache["bumps"]


@_check("uncertainty", "bump: max(dT, dR) at best lambda <= 8", 0.05)
def _(cfg, rng, cache):
    return min(max(r.delta_T, r.delta_R) for r in _bumps(cache).values())


@_check("uncertainty", "bump: dR(lambda) = e^-lambda dR(0) (rel)", 1e-8)
def _(cfg, rng, cache):
    reps = _bumps(cache)
    d0 = reps[0].delta_R
    return max(abs(r.delta_R / (np.exp(-lam) * d0) - 1) for lam, r in reps.items())


@_check("uncertainty", "lhc scenario L_max = 2e-3 m (rel)", 1e-12)
def _(cfg, rng, cache):
    return abs(un.run_scenario("lhc").value / 2e-3 - 1)


@_check("uncertainty", "atomic scenario within factor 3 of 1e17 m (log10 gap)", np.log10(3.0))
def _(cfg, rng, cache):
    return abs(np.log10(un.run_scenario("atomic").value / 1e17))


@_check("uncertainty", "earth scenario 1/kappa = 2e-45 m (rel)", 1e-12)
def _(cfg, rng, cache):
    return abs(un.run_scenario("earth").value / 2e-45 - 1)


# -- driver ------------------------------------------------------------------

SUITES = tuple(_REGISTRY)


def run_suite(suite: str, cfg: RunConfig = RunConfig()) -> list[CheckResult]:
    if suite not in _REGISTRY:
        raise ValueError(f"unknown suite {suite!r}")
    rng = np.random.default_rng(cfg.seed)
    cache: dict = {}
    out = []
    for name, threshold, kind, func in _REGISTRY[suite]:
        detail = ""
        try:
            residual = float(func(cfg, rng, cache))
        except (KappaWeylError, ValueError, FloatingPointError) as exc:
            residual = float("nan")
            detail = f"{type(exc).__name__}: {exc}"
        if kind == "upper":
            limit = threshold * cfg.tol_scale
            passed = bool(residual < limit) if threshold > 1e-300 else bool(residual <= limit)
        else:
            passed = bool(residual >= threshold * cfg.tol_scale)
        out.append(CheckResult(suite, name, residual, threshold * cfg.tol_scale, passed, kind, detail))
    return out


def run(suite: str = "all", cfg: RunConfig = RunConfig()) -> list[CheckResult]:
    suites = SUITES if suite == "all" else (suite,)
    results = []
    for s in suites:
        results.extend(run_suite(s, cfg))
    return results


def format_table(results) -> str:
    lines = [f"{'suite':<13} {'check':<62} {'residual':>11} {'limit':>10}  result"]
    for r in results:
        op = "<" if r.kind == "upper" else ">="
        res = "nan" if np.isnan(r.residual) else f"{r.residual:.3e}"
        lines.append(f"{r.suite:<13} {r.name:<62} {res:>11} {op}{r.threshold:>9.1e}  "
                     f"{'PASS' if r.passed else 'FAIL'}")
        if r.detail:
            lines.append(f"{'':<13}   {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)


def report_json(results) -> str:
    rows = []
    for r in results:
        row = asdict(r)
        row["residual"] = None if np.isnan(r.residual) else r.residual
        rows.append(row)
    return json.dumps({"checks": rows, "passed": all(r.passed for r in results)}, indent=2)
