"""Named verification suites driven by the CLI.

Each suite runs one family of identities over a parameter sweep and returns
one IdentityReport per identity per parameter point, with the pass tolerance
recorded in the report parameters.  Light suites sweep the default order
grid; the pipeline suites run on the three-pair set that covers the
singular, flat and smooth regimes of the Sonine weight exponent.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import core, fractional, lizorkin, sonine, transform
from .functions import KernelFunction, PolyFunction, PolyGaussian, gaussian, monomial_gaussian
from .quadrature import radial_rule
from .report import IdentityReport
from .sonine import SoninePair
from .special import b_coeff

__all__ = ["SuiteResult", "RunConfig", "SUITES", "DEFAULT_TOLERANCES", "run_suites", "suite_names"]

DEFAULT_ALPHAS = (-0.25, 0.0, 0.5, 1.5)
DEFAULT_BETA_OFFSETS = (0.5, 1.0, 2.0)
PIPELINE_PAIRS = ((0.0, 0.5), (0.5, 1.5), (0.0, 2.0))

DEFAULT_TOLERANCES = {
    "kernel-consistency": 1e-10,
    "transmutation-exact": 1e-12,
    "transmutation-smooth": 1e-6,
    "duality": 1e-7,
    "sonine-product": 1e-8,
    "sonine-monomial": 1e-10,
    "sonine-routes": 1e-12,
    "translation-product": 1e-8,
    "convolution": 1e-6,
    "transform-oracles": 1e-9,
    "transform-derivative": 1e-7,
    "plancherel-classic": 1e-8,
    "decomposition": 1e-6,
    "power-weight-transform": 1e-6,
    "power-weight-degenerate": 1e-8,
    "fractional-cross-route": 1e-4,
    "multiplier-commutation": 1e-4,
    "inversion": 1e-3,
    "plancherel-dual": 1e-3,
}


@dataclass
class RunConfig:
    """Verification run parameters; CLI flags override config-file keys."""

    alpha: Optional[float] = None
    beta: Optional[float] = None
    half_width: float = 12.0
    n_x: int = 512
    lambda_max: float = 16.0
    n_lambda: int = 512
    tolerances: dict = field(default_factory=dict)
    suites: tuple = ("all",)
    out_path: Optional[str] = None
    out_format: str = "json"
    include_timing: bool = False

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def order_sweep(self) -> tuple:
        if self.alpha is not None:
            return (float(self.alpha),)
        return DEFAULT_ALPHAS

    def pair_sweep(self) -> tuple:
        if self.alpha is not None and self.beta is not None:
            return ((float(self.alpha), float(self.beta)),)
        if self.alpha is not None:
            return tuple((float(self.alpha), float(self.alpha) + d) for d in DEFAULT_BETA_OFFSETS)
        return tuple(
            (a, a + d) for a in DEFAULT_ALPHAS for d in DEFAULT_BETA_OFFSETS
        )

    def pipeline_pairs(self) -> tuple:
        if self.alpha is not None and self.beta is not None:
            return ((float(self.alpha), float(self.beta)),)
        return PIPELINE_PAIRS


@dataclass
class SuiteResult:
    reports: list
    passed: bool

    @classmethod
    def collect(cls, reports: Iterable[IdentityReport]) -> "SuiteResult":
        reports = list(reports)
        return cls(reports=reports, passed=all(r.passed() for r in reports))


class _PlanCache:
    def __init__(self, config: RunConfig):
        self.config = config
        self._plans: dict = {}
        self._witness_plans: dict = {}
        self._witnesses: dict = {}

    def plan(self, alpha: float) -> transform.TransformPlan:
        key = round(float(alpha), 12)
        if key not in self._plans:
            c = self.config
            self._plans[key] = transform.build_plan(
                alpha, half_width=c.half_width, n_x=c.n_x, lambda_max=c.lambda_max, n_lambda=c.n_lambda
            )
        return self._plans[key]

    def witness_plan(self, alpha: float) -> transform.TransformPlan:
        key = round(float(alpha), 12)
        if key not in self._witness_plans:
            self._witness_plans[key] = lizorkin.witness_plan(alpha)
        return self._witness_plans[key]

    def witness(self, alpha: float, m: int) -> lizorkin.LizorkinWitness:
        key = (round(float(alpha), 12), m)
        if key not in self._witnesses:
            self._witnesses[key] = lizorkin.make_witness(alpha, self.witness_plan(alpha), m=m)
        return self._witnesses[key]


def _report(name, params, grid, lhs_rhs_or_errs, elapsed, tol) -> IdentityReport:
    abs_err, rel_err = lhs_rhs_or_errs
    params = dict(params)
    params["tol"] = tol
    return IdentityReport(
        name=name, params=params, grid_summary=grid, max_abs_err=abs_err, max_rel_err=rel_err, elapsed=elapsed
    )


def _errs(reference, candidate) -> tuple[float, float]:
    reference = np.atleast_1d(np.asarray(reference))
    candidate = np.atleast_1d(np.asarray(candidate))
    abs_err = float(np.max(np.abs(candidate - reference)))
    scale = float(np.max(np.abs(reference)))
    return abs_err, abs_err / max(scale, 1e-300)


def suite_kernel_consistency(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("kernel-consistency")
    z_set = [0.1, -0.1, 1.0, -1.0, 5.0, -5.0, 10j, -10j, 3 + 4j]
    reports = []
    for a in (-0.4, 0.0, 0.5, 1.5, 2.7):
        start = time.perf_counter()
        worst = 0.0
        for z in z_set:
            vals = [core.dunkl_kernel(a, z, mode) for mode in ("series", "bochner", "bessel")]
            scale = max(abs(v) for v in vals)
            spread = max(abs(v - w) for v in vals for w in vals)
            worst = max(worst, spread / scale)
        reports.append(
            _report(
                "kernel-consistency",
                {"alpha": a},
                f"{len(z_set)} arguments, 3 evaluation modes",
                (worst, worst),
                time.perf_counter() - start,
                tol,
            )
        )
    return reports


def suite_transmutation(config: RunConfig, cache: _PlanCache) -> list:
    reports = []
    rng = np.random.default_rng(7)
    for a in config.order_sweep():
        start = time.perf_counter()
        coeffs = rng.standard_normal(21)
        p = PolyFunction(coeffs)
        lhs = core.dunkl_operator(a, core.intertwiner_v(a, p))
        rhs = core.intertwiner_v(a, p.derivative())
        width = max(len(lhs.coeffs), len(rhs.coeffs))
        lc = np.zeros(width)
        rc = np.zeros(width)
        lc[: len(lhs.coeffs)] = lhs.coeffs
        rc[: len(rhs.coeffs)] = rhs.coeffs
        abs_err = float(np.max(np.abs(lc - rc)))
        rel = abs_err / max(float(np.max(np.abs(rc))), 1e-300)
        reports.append(
            _report(
                "transmutation-exact",
                {"alpha": a, "degree": 20},
                "polynomial coefficients",
                (abs_err, rel),
                time.perf_counter() - start,
                config.tol("transmutation-exact"),
            )
        )
        # dual relation on a Schwartz function, on a grid
        start = time.perf_counter()
        f = monomial_gaussian(1)
        grid = np.linspace(-2.0, 2.0, 9)
        lhs_vals = np.asarray([core.dual_intertwiner_v(a, core.dunkl_operator(a, f), float(x)) for x in grid])
        h = 1e-3
        tv = lambda u: core.dual_intertwiner_v(a, f, float(u))
        rhs_vals = np.asarray([(8 * (tv(x + h) - tv(x - h)) - (tv(x + 2 * h) - tv(x - 2 * h))) / (12 * h) for x in grid])
        reports.append(
            _report(
                "transmutation-smooth",
                {"alpha": a, "input": "x*exp(-x^2)"},
                f"{grid.size}-point grid",
                _errs(rhs_vals, lhs_vals),
                time.perf_counter() - start,
                config.tol("transmutation-smooth"),
            )
        )
    return reports


def suite_duality(config: RunConfig, cache: _PlanCache) -> list:
    """Weighted duality pairings of the intertwiner and the Sonine pair."""
    reports = []
    tol = config.tol("duality")
    for a in config.order_sweep():
        start = time.perf_counter()
        f = PolyFunction.monomial(2)
        g = gaussian()
        vf = core.intertwiner_v(a, f)
        rule = radial_rule(a, 14.0, 128)
        lhs = np.sum(rule.weights * (vf(rule.nodes) * g(rule.nodes) + vf(-rule.nodes) * g(-rule.nodes)))
        gl_x, gl_w = np.polynomial.legendre.leggauss(160)
        nodes = 14.0 * gl_x
        weights = 14.0 * gl_w
        tvg = core.dual_intertwiner_v_grid(a, g, nodes, u_max=400.0)
        rhs = np.sum(weights * f(nodes) * tvg)
        reports.append(
            _report(
                "duality",
                {"alpha": a, "pair": "x^2, exp(-x^2)", "lhs": float(np.real(lhs)), "rhs": float(np.real(rhs))},
                "independent weighted quadratures",
                _errs(rhs, lhs),
                time.perf_counter() - start,
                tol,
            )
        )
    for (a, b) in config.pair_sweep():
        start = time.perf_counter()
        pair = SoninePair.of(a, b)
        f = PolyFunction.monomial(2)
        g = gaussian()
        sf = sonine.sonine_apply(pair, f)
        rule_b = radial_rule(b, 14.0, 128)
        lhs = np.sum(rule_b.weights * (sf(rule_b.nodes) * g(rule_b.nodes) + sf(-rule_b.nodes) * g(-rule_b.nodes)))
        rule_a = radial_rule(a, 14.0, 128)
        tsg = sonine.dual_sonine_grid(pair, g, rule_a.nodes, u_max=400.0)
        tsg_neg = sonine.dual_sonine_grid(pair, g, -rule_a.nodes, u_max=400.0)
        rhs = np.sum(rule_a.weights * (f(rule_a.nodes) * tsg + f(-rule_a.nodes) * tsg_neg))
        reports.append(
            _report(
                "duality",
                {"alpha": a, "beta": b, "pair": "x^2, exp(-x^2)", "lhs": float(np.real(lhs)), "rhs": float(np.real(rhs))},
                "independent weighted quadratures",
                _errs(rhs, lhs),
                time.perf_counter() - start,
                tol,
            )
        )
    return reports


def suite_sonine_product(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("sonine-product")
    reports = []
    for (a, b) in config.pair_sweep():
        start = time.perf_counter()
        pair = SoninePair.of(a, b)
        worst = 0.0
        for lam in (1.0, 2j):
            ka = KernelFunction(a, lam)
            kb = KernelFunction(b, lam)
            for x in (0.3, 1.0, 2.5):
                got = sonine.sonine_apply(pair, ka, x)
                want = kb(x)
                worst = max(worst, abs(got - want) / abs(want))
        reports.append(
            _report(
                "sonine-product",
                {"alpha": a, "beta": b},
                "lam in {1, 2i}, x in {0.3, 1, 2.5}",
                (worst, worst),
                time.perf_counter() - start,
                tol,
            )
        )
    return reports


def suite_sonine_monomial(config: RunConfig, cache: _PlanCache) -> list:
    reports = []
    for (a, b) in config.pair_sweep():
        start = time.perf_counter()
        pair = SoninePair.of(a, b)
        worst_quad = 0.0
        for n in range(0, 21):
            want = b_coeff(n, a) / b_coeff(n, b)
            got = sonine.sonine_apply(pair, PolyFunction.monomial(n), 1.3) / 1.3**n
            worst_quad = max(worst_quad, abs(got - want) / abs(want))
        rng = np.random.default_rng(11)
        p = PolyFunction(rng.standard_normal(21))
        direct = sonine.sonine_apply(pair, p)
        routed = sonine.sonine_via_intertwiners(pair, p)
        route_err = float(np.max(np.abs(direct.coeffs - routed.coeffs)) / np.max(np.abs(direct.coeffs)))
        reports.append(
            _report(
                "sonine-monomial",
                {"alpha": a, "beta": b, "route_err": route_err},
                "monomials n <= 20",
                (worst_quad, max(worst_quad, 0.0)),
                time.perf_counter() - start,
                config.tol("sonine-monomial"),
            )
        )
        reports.append(
            _report(
                "sonine-routes",
                {"alpha": a, "beta": b},
                "random degree-20 polynomial",
                (route_err, route_err),
                time.perf_counter() - start,
                config.tol("sonine-routes"),
            )
        )
    return reports


def suite_translation_product(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("translation-product")
    reports = []
    for a in config.order_sweep():
        start = time.perf_counter()
        worst = 0.0
        for lam in (1.2, 1.5j):
            kf = KernelFunction(a, lam)
            for (x, y) in ((0.7, -1.1), (0.0, 0.9), (1.3, 1.3), (-0.4, 2.0)):
                got = core.translation(a, kf, x, y)
                want = kf(x) * kf(y)
                worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
        reports.append(
            _report(
                "translation-product",
                {"alpha": a},
                "kernel eigenfunctions, 4 point pairs, 2 frequencies",
                (worst, worst),
                time.perf_counter() - start,
                tol,
            )
        )
    return reports


def suite_convolution(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("convolution")
    reports = []
    for a in config.order_sweep():
        start = time.perf_counter()
        f = gaussian()
        g = PolyGaussian(PolyFunction(np.array([1.0, 0.5])), 1.0)
        worst = 0.0
        for x in (0.0, 0.8, -1.5):
            fg = core.convolution(a, f, g, x)
            gf = core.convolution(a, g, f, x)
            worst = max(worst, abs(fg - gf) / max(abs(fg), 1e-300))
        import math

        closed = math.gamma(a + 1.0) * 2.0 ** (-(a + 1.0)) * np.exp(-0.8**2 / 2.0)
        got = core.convolution(a, f, f, 0.8)
        worst = max(worst, abs(got - closed) / closed)
        reports.append(
            _report(
                "convolution",
                {"alpha": a},
                "commutativity at 3 points + gaussian closed form",
                (worst, worst),
                time.perf_counter() - start,
                tol,
            )
        )
    return reports


def suite_transform_oracles(config: RunConfig, cache: _PlanCache) -> list:
    import math

    reports = []
    for a in config.order_sweep():
        plan = cache.plan(a)
        start = time.perf_counter()
        mask = np.abs(plan.lambda_nodes) <= 8.0
        spec = transform.forward(plan, plan.sample(lambda x: np.exp(-(x**2))))
        want = math.gamma(a + 1.0) * np.exp(-plan.lambda_nodes[mask] ** 2 / 4.0)
        sup = float(np.max(np.abs(spec.values[mask] - want)))
        reports.append(
            _report(
                "transform-oracles",
                {"alpha": a, "oracle": "gaussian"},
                f"sup over |lambda| <= 8 ({int(mask.sum())} nodes)",
                (sup, sup),
                time.perf_counter() - start,
                config.tol("transform-oracles"),
            )
        )
        start = time.perf_counter()
        f = monomial_gaussian(1)
        lf = core.dunkl_operator(a, f)
        spec_f = transform.forward(plan, plan.sample(f))
        spec_lf = transform.forward(plan, plan.sample(lf))
        want_vals = 1j * plan.lambda_nodes[mask] * spec_f.values[mask]
        reports.append(
            _report(
                "transform-derivative",
                {"alpha": a, "input": "x*exp(-x^2)"},
                f"|lambda| <= 8 ({int(mask.sum())} nodes)",
                _errs(want_vals, spec_lf.values[mask]),
                time.perf_counter() - start,
                config.tol("transform-derivative"),
            )
        )
    return reports


def suite_plancherel_classic(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("plancherel-classic")
    reports = []
    for a in config.order_sweep():
        plan = cache.plan(a)
        for fname, f in (("exp(-x^2)", lambda x: np.exp(-(x**2))), ("x*exp(-x^2)", lambda x: x * np.exp(-(x**2)))):
            rep = transform.plancherel_check(plan, plan.sample(f))
            rep.params.update({"input": fname, "tol": tol})
            rep.name = "plancherel-classic"
            reports.append(rep)
    return reports


def suite_decomposition(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("decomposition")
    reports = []
    for (a, b) in config.pair_sweep():
        pair = SoninePair.of(a, b)
        plan_a = cache.plan(a)
        plan_b = cache.plan(b)
        for gname, g in (("exp(-x^2)", gaussian()), ("x*exp(-x^2)", monomial_gaussian(1))):
            start = time.perf_counter()
            mask = np.abs(plan_b.lambda_nodes) <= 8.0
            lam_pts = plan_b.lambda_nodes[mask]
            beta_side = transform.forward_at(plan_b, plan_b.sample(g).values, lam_pts)
            ts_vals = sonine.dual_sonine_grid(pair, g, plan_a.x_nodes, u_max=500.0)
            alpha_side = transform.forward_at(plan_a, ts_vals, lam_pts)
            reports.append(
                _report(
                    "decomposition",
                    {"alpha": a, "beta": b, "input": gname},
                    f"|lambda| <= 8 ({lam_pts.size} nodes)",
                    _errs(beta_side, alpha_side),
                    time.perf_counter() - start,
                    tol,
                )
            )
    return reports


def suite_power_weight(config: RunConfig, cache: _PlanCache) -> list:
    reports = []
    for a in config.order_sweep():
        plan = cache.plan(a)
        strip = -(2.0 * a + 2.0)
        lams = [0.35 * strip, 0.6 * strip, 0.85 * strip]
        for lam in lams:
            rep = fractional.power_weight_identity(a, lam, gaussian(), plan)
            rep.params["tol"] = config.tol("power-weight-transform")
            reports.append(rep)
        # zero-constant case: even probe with vanishing matching residue;
        # the slow decay keeps its spectrum narrow, so the high-power pairing
        # weight never amplifies transform-tail noise
        probe = PolyGaussian(PolyFunction.monomial(4), 0.5)
        rep = fractional.power_weight_identity(a, 2.0, probe, plan)
        rep.name = "power-weight-degenerate"
        rep.params["tol"] = config.tol("power-weight-degenerate")
        reports.append(rep)
    return reports


def suite_fractional_cross_route(config: RunConfig, cache: _PlanCache) -> list:
    tol = config.tol("fractional-cross-route")
    reports = []
    for a in (0.5, 1.5):
        plan = cache.plan(a)
        f_grid = plan.sample(lambda x: np.exp(-(x**2)))
        for lam in (-0.3, -0.5):
            start = time.perf_counter()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                mult = transform.apply_multiplier_fn(plan, f_grid, transform.MultiplierSpec(2.0 * lam, 1.0))
            worst = 0.0
            for x in (0.0, 1.0, 2.2):
                km = float(np.real(mult(np.asarray([x]))[0]))
                kk = fractional.frac_power_kernel(a, lam, gaussian(), x)
                worst = max(worst, abs(km - kk) / abs(km))
            reports.append(
                _report(
                    "fractional-cross-route",
                    {"alpha": a, "lam": lam},
                    "x in {0, 1, 2.2}",
                    (worst, worst),
                    time.perf_counter() - start,
                    tol,
                )
            )
    return reports


def _pipeline_reports(config: RunConfig, cache: _PlanCache, orders: tuple) -> list:
    reports = []
    for (a, b) in config.pipeline_pairs():
        pair = SoninePair.of(a, b)
        plan_a = cache.witness_plan(a)
        plan_b = cache.witness_plan(b)
        shared: dict = {}
        for m in (0, 1):
            wb = cache.witness(b, m)
            wa = cache.witness(a, m)
            for order in orders:
                wit = wb if order in ("s-k1-ts", "k2-s-ts") else wa
                rep = lizorkin.inversion_check(pair, plan_a, plan_b, wit, order, shared=shared)
                rep.params["tol"] = config.tol("inversion")
                reports.append(rep)
    return reports


def suite_inversion(config: RunConfig, cache: _PlanCache, order: str) -> list:
    return _pipeline_reports(config, cache, (order,))


def suite_multiplier_commutation(config: RunConfig, cache: _PlanCache) -> list:
    reports = []
    for (a, b) in config.pipeline_pairs():
        pair = SoninePair.of(a, b)
        rep = lizorkin.multiplier_commutation_check(
            pair, cache.witness_plan(a), cache.witness_plan(b), cache.witness(b, 0)
        )
        rep.params["tol"] = config.tol("multiplier-commutation")
        reports.append(rep)
    return reports


def suite_plancherel_dual(config: RunConfig, cache: _PlanCache) -> list:
    reports = []
    for (a, b) in config.pipeline_pairs():
        pair = SoninePair.of(a, b)
        rep = lizorkin.plancherel_dual_check(
            pair, cache.witness_plan(a), cache.witness_plan(b), cache.witness(b, 0)
        )
        rep.params["tol"] = config.tol("plancherel-dual")
        reports.append(rep)
    return reports


SUITES: dict[str, Callable] = {
    "kernel-consistency": suite_kernel_consistency,
    "transmutation": suite_transmutation,
    "duality": suite_duality,
    "sonine-product": suite_sonine_product,
    "sonine-monomial": suite_sonine_monomial,
    "translation-product": suite_translation_product,
    "convolution": suite_convolution,
    "transform-oracles": suite_transform_oracles,
    "plancherel-classic": suite_plancherel_classic,
    "decomposition": suite_decomposition,
    "power-weight-transform": suite_power_weight,
    "fractional-cross-route": suite_fractional_cross_route,
    "inversion-s-k1-ts": lambda c, p: suite_inversion(c, p, "s-k1-ts"),
    "inversion-ts-k2-s": lambda c, p: suite_inversion(c, p, "ts-k2-s"),
    "inversion-k1-ts-s": lambda c, p: suite_inversion(c, p, "k1-ts-s"),
    "inversion-k2-s-ts": lambda c, p: suite_inversion(c, p, "k2-s-ts"),
    "multiplier-commutation": suite_multiplier_commutation,
    "plancherel-dual": suite_plancherel_dual,
}


def suite_names() -> list:
    return list(SUITES)


def run_suites(config: RunConfig, names: Optional[Iterable[str]] = None, max_workers: int = 1) -> SuiteResult:
    """Run the requested suites; 'all' expands to every registered suite.

    Suites may run on a thread pool; reports land in per-suite slots and are
    serialized in registry order, so the output is independent of scheduling.
    """
    if names is None:
        names = config.suites
    requested = set()
    for n in names:
        if n == "all":
            requested.update(SUITES)
        elif n in SUITES:
            requested.add(n)
        else:
            raise KeyError(f"unknown suite {n!r}; available: {', '.join(SUITES)}")
    ordered = [n for n in SUITES if n in requested]

    cache = _PlanCache(config)
    slots: dict[str, list] = {}
    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = {n: pool.submit(SUITES[n], config, cache) for n in ordered}
            for n in ordered:
                slots[n] = futures[n].result()
    else:
        for n in ordered:
            slots[n] = SUITES[n](config, cache)
    reports = [r for n in ordered for r in slots[n]]
    return SuiteResult.collect(reports)
