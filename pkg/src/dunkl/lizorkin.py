"""Lizorkin-type witnesses and the Sonine inversion pipelines.

A witness is realized from a spectral profile that vanishes to all orders at
the origin (an analytic fact of exp(-flat/l^2), not a numerical one), so its
inverse transform has all weighted moments at numerical zero and every
fractional multiplier below is applied on safe ground.

The profile family is l^m exp(-l^2 - flat/l^2).  The flatness scale trades
spectral-origin suppression against spatial tail decay: the spatial tails
behave like exp(-c flat^(1/3) |x|^(2/3)), so larger ``flat`` concentrates
the witness and keeps the high weighted moments representable on desk-scale
grids.  The default flat=64 puts the witness at double-precision zero by
|x| ~ 40.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .functions import GridFunction
from .report import IdentityReport
from .sonine import SoninePair, dual_sonine_grid, sonine_grid
from .special import OrderParam, c_const
from .transform import (
    MultiplierSpec,
    SpectralFunction,
    TransformPlan,
    apply_multiplier_fn,
    build_plan,
    forward,
    inverse,
)

__all__ = [
    "DEFAULT_FLAT",
    "LizorkinWitness",
    "witness_profile",
    "make_witness",
    "witness_plan",
    "k_operator",
    "K_KINDS",
    "inversion_check",
    "INVERSION_ORDERS",
    "multiplier_commutation_check",
    "plancherel_dual_check",
]

DEFAULT_FLAT = 64.0

K_KINDS = ("alpha-full", "beta-full", "alpha-half")

#: pipeline orders: reconstruction identities for the Sonine transform and
#: its dual, plus the two commuted variants.
INVERSION_ORDERS = ("s-k1-ts", "ts-k2-s", "k1-ts-s", "k2-s-ts")

_MASK_LEVEL = 1e-3


def witness_profile(lam: np.ndarray, m: int, flat: float = DEFAULT_FLAT) -> np.ndarray:
    """Spectral profile l^m exp(-l^2 - flat/l^2), zero at l = 0, normalized
    to unit maximum."""
    if m not in (0, 1):
        raise ValueError("parity exponent m must be 0 or 1")
    lam = np.asarray(lam, dtype=float)
    out = np.zeros_like(lam)
    nz = lam != 0.0
    out[nz] = lam[nz] ** m * np.exp(-lam[nz] ** 2 - flat / lam[nz] ** 2)
    peak = np.max(np.abs(out))
    return out / peak if peak > 0 else out


@dataclass
class LizorkinWitness:
    """Inverse transform of a flat spectral profile, with the synthesis
    object and membership diagnostics attached."""

    order: OrderParam
    m: int
    flat: float
    plan: TransformPlan = field(repr=False)
    spectrum: np.ndarray = field(repr=False)
    values: GridFunction = field(repr=False)
    fn: SpectralFunction = field(repr=False)

    def moment_relative(self, k: int) -> float:
        """|int f y^k |y|^(2a+1) dy| relative to the same integral of |f|.

        The absolute moments sit below the float64 noise floor of the
        defining quadrature once k + 2 alpha + 1 is large, so membership is
        diagnosed relative to the natural scale."""
        num = abs(np.sum(self.plan.x_weights * self.values.values * self.plan.x_nodes**k))
        den = np.sum(self.plan.x_weights * np.abs(self.values.values) * np.abs(self.plan.x_nodes) ** k)
        return float(num / max(den, 1e-300))

    def spectral_flatness(self, k_max: int = 5) -> float:
        """max over k <= k_max of the k-th spectral derivative at 0, from the
        profile's closed form (all identically zero by flatness)."""
        # d^k/dl^k of exp(-flat/l^2) extends by 0 at l = 0; report the profile
        # magnitude at the smallest grid node as the numerical stand-in.
        lam_min = float(np.min(np.abs(self.plan.lambda_nodes)))
        return float(np.max(np.abs(witness_profile(np.array([lam_min / 2.0**k_max]), self.m, self.flat))))


def make_witness(
    alpha: OrderParam | float,
    plan: TransformPlan,
    m: int = 0,
    scale: float = 1.0,
    flat: float = DEFAULT_FLAT,
) -> LizorkinWitness:
    """Realize a witness for the order of ``plan`` from the flat profile."""
    spectrum = scale * witness_profile(plan.lambda_nodes, m, flat)
    values = inverse(plan, spectrum)
    fn = SpectralFunction.from_spectrum(plan, spectrum)
    return LizorkinWitness(order=plan.order, m=m, flat=flat, plan=plan, spectrum=spectrum, values=values, fn=fn)


def witness_plan(alpha: OrderParam | float, n_half: int = 192, tol: float = 1e-9) -> TransformPlan:
    """Plan sized for witness pipelines: wide enough in x for the witness
    tails, with a lambda rule that still resolves synthesis out to the
    Weyl-tail truncation radius 1.3 * half_width."""
    return build_plan(
        alpha,
        half_width=40.0,
        n_x=2 * n_half,
        lambda_max=10.5,
        n_lambda=2 * 168,
        tol=tol,
    )


def _k_params(kind: str, pair: SoninePair) -> tuple[str, MultiplierSpec]:
    ratio = c_const(pair.beta) / c_const(pair.alpha)
    if kind == "alpha-full":
        return "alpha", MultiplierSpec(2.0 * pair.mu, ratio)
    if kind == "beta-full":
        return "beta", MultiplierSpec(2.0 * pair.mu, ratio)
    if kind == "alpha-half":
        return "alpha", MultiplierSpec(pair.mu, math.sqrt(ratio))
    raise ValueError(f"unknown operator kind {kind!r}; expected one of {K_KINDS}")


def k_operator(
    kind: str,
    pair: SoninePair,
    plan_alpha: TransformPlan,
    plan_beta: TransformPlan,
    f,
) -> SpectralFunction:
    """Scaled fractional power of the deformed Laplacian used by the
    inversion formulas, realized through the spectral multiplier.

    kind selects base order and exponent: 'alpha-full' and 'beta-full' apply
    |lambda|^(2(beta-alpha)) scaled by c_beta/c_alpha on the respective plan;
    'alpha-half' applies |lambda|^(beta-alpha) scaled by sqrt(c_beta/c_alpha).
    Witness inputs are checked against the plan order and flagged on
    mismatch.
    """
    which, spec = _k_params(kind, pair)
    plan = plan_alpha if which == "alpha" else plan_beta
    if isinstance(f, LizorkinWitness):
        if abs(f.order.alpha - plan.alpha) > 1e-12:
            warnings.warn(
                f"witness realized at order {f.order.alpha} fed to the {kind} operator "
                f"(expects order {plan.alpha})",
                stacklevel=2,
            )
        if np.array_equal(f.values.grid, plan.x_nodes):
            f = f.values
        else:
            f = f.fn(plan.x_nodes)
    return apply_multiplier_fn(plan, f, spec)


def _masked_max_rel(reference: np.ndarray, candidate: np.ndarray) -> tuple[float, float, int]:
    reference = np.asarray(reference)
    candidate = np.asarray(candidate)
    mask = np.abs(reference) > _MASK_LEVEL * np.max(np.abs(reference))
    abs_err = float(np.max(np.abs(candidate - reference)))
    rel = float(np.max(np.abs(candidate[mask] - reference[mask]) / np.abs(reference[mask])))
    return abs_err, rel, int(np.count_nonzero(mask))


def _u_max_for(plan: TransformPlan) -> float:
    # witnesses are at double-precision zero well before the grid boundary,
    # and the synthesis is only resolved out to y ~ half_width
    return plan.half_width**2



def _ts_grid_cached(pair, plan_alpha, witness, u_max, shared):
    """Dual-Sonine image of a witness on the alpha x-grid, computed once per
    (witness, plan) within a suite run."""
    if shared is None:
        return dual_sonine_grid(pair, witness.fn, plan_alpha.x_nodes, u_max=u_max)
    key = ("ts", id(witness.fn), id(plan_alpha))
    if key not in shared:
        shared[key] = dual_sonine_grid(pair, witness.fn, plan_alpha.x_nodes, u_max=u_max)
    return shared[key]


def inversion_check(
    pair: SoninePair,
    plan_alpha: TransformPlan,
    plan_beta: TransformPlan,
    witness: LizorkinWitness,
    order: str,
    thin: int = 3,
    shared: Optional[dict] = None,
) -> IdentityReport:
    """Run one reconstruction pipeline and compare against the witness.

    Orders (composition applied right to left to the witness):
      * 's-k1-ts':  sonine o alpha-full o dual-sonine,  witness at beta;
      * 'ts-k2-s':  dual-sonine o beta-full o sonine,   witness at alpha;
      * 'k1-ts-s':  alpha-full o dual-sonine o sonine,  witness at alpha;
      * 'k2-s-ts':  beta-full o sonine o dual-sonine,   witness at beta.

    Errors are reported where the witness exceeds 1e-3 of its peak.
    """
    start = time.perf_counter()
    w_fn = witness.fn
    u_max = _u_max_for(plan_beta)

    if order == "s-k1-ts":
        ts_values = _ts_grid_cached(pair, plan_alpha, witness, u_max, shared)
        k_img = k_operator("alpha-full", pair, plan_alpha, plan_beta, GridFunction(plan_alpha.x_nodes, ts_values, "schwartz"))
        ref_grid, ref_vals = witness.plan.x_nodes, witness.values.values
        mask = np.abs(ref_vals) > _MASK_LEVEL * np.max(np.abs(ref_vals))
        points = ref_grid[mask][::thin]
        reference = ref_vals[mask][::thin]
        recon = sonine_grid(pair, k_img, points)
    elif order == "ts-k2-s":
        s_values = sonine_grid(pair, w_fn, plan_beta.x_nodes)
        k_img = k_operator("beta-full", pair, plan_alpha, plan_beta, GridFunction(plan_beta.x_nodes, s_values, "schwartz"))
        ref_grid, ref_vals = witness.plan.x_nodes, witness.values.values
        mask = np.abs(ref_vals) > _MASK_LEVEL * np.max(np.abs(ref_vals))
        points = ref_grid[mask][::thin]
        reference = ref_vals[mask][::thin]
        recon = dual_sonine_grid(pair, k_img, points, u_max=u_max)
    elif order == "k1-ts-s":
        s_values = sonine_grid(pair, w_fn, plan_beta.x_nodes)
        s_fn = SpectralFunction.from_spectrum(plan_beta, forward(plan_beta, s_values).values)
        ts_values = dual_sonine_grid(pair, s_fn, plan_alpha.x_nodes, u_max=u_max)
        k_img = k_operator("alpha-full", pair, plan_alpha, plan_beta, GridFunction(plan_alpha.x_nodes, ts_values, "schwartz"))
        ref_vals = witness.values.values
        mask = np.abs(ref_vals) > _MASK_LEVEL * np.max(np.abs(ref_vals))
        points = plan_alpha.x_nodes[mask][::thin]
        reference = ref_vals[mask][::thin]
        recon = k_img(points)
    elif order == "k2-s-ts":
        ts_values = _ts_grid_cached(pair, plan_alpha, witness, u_max, shared)
        ts_fn = SpectralFunction.from_spectrum(plan_alpha, forward(plan_alpha, ts_values).values)
        s_values = sonine_grid(pair, ts_fn, plan_beta.x_nodes)
        k_img = k_operator("beta-full", pair, plan_alpha, plan_beta, GridFunction(plan_beta.x_nodes, s_values, "schwartz"))
        ref_vals = witness.values.values
        mask = np.abs(ref_vals) > _MASK_LEVEL * np.max(np.abs(ref_vals))
        points = plan_beta.x_nodes[mask][::thin]
        reference = ref_vals[mask][::thin]
        recon = k_img(points)
    else:
        raise ValueError(f"unknown pipeline order {order!r}; expected one of {INVERSION_ORDERS}")

    rel = float(np.max(np.abs(recon - reference) / np.abs(reference)))
    return IdentityReport(
        name=f"inversion-{order}",
        params={"alpha": pair.a, "beta": pair.b, "m": witness.m, "flat": witness.flat},
        grid_summary=f"{points.size} masked points (level {_MASK_LEVEL})",
        max_abs_err=float(np.max(np.abs(recon - reference))),
        max_rel_err=rel,
        elapsed=time.perf_counter() - start,
    )


def multiplier_commutation_check(
    pair: SoninePair,
    plan_alpha: TransformPlan,
    plan_beta: TransformPlan,
    witness: LizorkinWitness,
    shared: Optional[dict] = None,
) -> IdentityReport:
    """alpha-full o dual-sonine = dual-sonine o beta-full on a beta-witness."""
    start = time.perf_counter()
    u_max = _u_max_for(plan_beta)
    ts_values = _ts_grid_cached(pair, plan_alpha, witness, u_max, shared)
    lhs_img = k_operator("alpha-full", pair, plan_alpha, plan_beta, GridFunction(plan_alpha.x_nodes, ts_values, "schwartz"))
    lhs = lhs_img(plan_alpha.x_nodes)

    k2_img = k_operator("beta-full", pair, plan_alpha, plan_beta, witness)
    rhs = dual_sonine_grid(pair, k2_img, plan_alpha.x_nodes, u_max=u_max)

    abs_err, rel, n_mask = _masked_max_rel(lhs, rhs)
    return IdentityReport(
        name="multiplier-commutation",
        params={"alpha": pair.a, "beta": pair.b, "m": witness.m},
        grid_summary=f"{n_mask} masked points of {plan_alpha.x_nodes.size}",
        max_abs_err=abs_err,
        max_rel_err=rel,
        elapsed=time.perf_counter() - start,
    )


def plancherel_dual_check(
    pair: SoninePair,
    plan_alpha: TransformPlan,
    plan_beta: TransformPlan,
    witness: LizorkinWitness,
    shared: Optional[dict] = None,
) -> IdentityReport:
    """Weighted norm of a beta-witness against the alpha-weighted norm of the
    half-power image of its dual-Sonine transform."""
    start = time.perf_counter()
    lhs = float(np.real(plan_beta.integrate_x(np.abs(witness.values.values) ** 2)))
    ts_values = _ts_grid_cached(pair, plan_alpha, witness, _u_max_for(plan_beta), shared)
    k3_img = k_operator("alpha-half", pair, plan_alpha, plan_beta, GridFunction(plan_alpha.x_nodes, ts_values, "schwartz"))
    rhs = float(np.real(plan_alpha.integrate_x(np.abs(k3_img(plan_alpha.x_nodes)) ** 2)))
    abs_err = abs(lhs - rhs)
    rel = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    return IdentityReport(
        name="plancherel-dual",
        params={"alpha": pair.a, "beta": pair.b, "m": witness.m, "lhs": lhs, "rhs": rhs},
        grid_summary=f"x-rules {plan_alpha.x_nodes.size}/{plan_beta.x_nodes.size}",
        max_abs_err=abs_err,
        max_rel_err=rel,
        elapsed=time.perf_counter() - start,
    )
