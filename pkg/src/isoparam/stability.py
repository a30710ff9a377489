"""Distances to the Steiner disk and the stability bounds built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .curve_model import (
    TWO_PI,
    PlanePoint,
    SupportFourier,
    eval_support,
    require_convex,
    trig_extremum,
)
from .errors import ConditionNotMet, UndefinedConstantError
from .inequality import ParamSet, check_conditions, eval_W
from .oracle import periodic_quadrature
from .quantities import QuantitySet, full_quantities


class Stability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INDETERMINATE = "indeterminate"


def steiner_point_quadrature(curve: SupportFourier, M: int = 1024) -> PlanePoint:
    """Steiner point by quadrature of ``(1/pi) * int p(t) (cos t, sin t) dt``."""
    t = TWO_PI * np.arange(M) / M
    p = eval_support(curve, t)
    return PlanePoint(periodic_quadrature(p * np.cos(t)) / math.pi, periodic_quadrature(p * np.sin(t)) / math.pi)


def steiner_disk(curve: SupportFourier):
    """``(center, radius)`` of the Steiner disk: first harmonic and ``L/2pi``."""
    return PlanePoint(curve.a[0], curve.b[0]), curve.a0


def steiner_support(curve: SupportFourier) -> SupportFourier:
    center, radius = steiner_disk(curve)
    return SupportFourier.disk(radius, center)


def _padded(curve, N):
    a = np.zeros(N)
    b = np.zeros(N)
    a[: curve.N] = curve.a
    b[: curve.N] = curve.b
    return a, b


def _difference(A: SupportFourier, B: SupportFourier):
    N = max(A.N, B.N)
    aA, bA = _padded(A, N)
    aB, bB = _padded(B, N)
    return A.a0 - B.a0, aA - aB, bA - bB


def h1_distance(A: SupportFourier, B: SupportFourier) -> float:
    """``max_t |p_A(t) - p_B(t)|`` by grid scan with Newton polish."""
    c0, da, db = _difference(A, B)
    grid = max(1024, 32 * len(da))
    hi, _, _ = trig_extremum(c0, da, db, kind="max", grid_size=grid)
    lo, _, _ = trig_extremum(c0, da, db, kind="min", grid_size=grid)
    return max(hi, -lo, 0.0)


def h2_distance_sq(A: SupportFourier, B: SupportFourier) -> float:
    """``int |p_A - p_B|^2 dt`` via Parseval on the coefficient differences."""
    c0, da, db = _difference(A, B)
    return math.pi * math.fsum([2 * c0 * c0, *(da * da), *(db * db)])


def h2_distance_sq_quadrature(A: SupportFourier, B: SupportFourier, M: int | None = None) -> float:
    M = M or max(1024, 32 * max(A.N, B.N))
    t = TWO_PI * np.arange(M) / M
    return periodic_quadrature((eval_support(A, t) - eval_support(B, t)) ** 2)


def stability_constants(params: ParamSet):
    """``(C2, C3)``: constants of the sup-norm and L2 stability bounds."""
    D = check_conditions(params).D
    if not D > 0:
        raise UndefinedConstantError(f"stability constants need D > 0, got D = {D}")
    return max(1.0, 3.0 / (2.0 * D)), TWO_PI / (3.0 * D)


def classify_stability(params: ParamSet) -> Stability:
    cond = check_conditions(params)
    if cond.ok_1_13:
        return Stability.STABLE
    p = params
    if cond.ok_1_9 and cond.D == 0 and p.zeta == 0 and p.xi == 0 and p.lambda_ == 0:
        return Stability.UNSTABLE
    return Stability.INDETERMINATE


@dataclass(frozen=True)
class StabilityReport:
    steiner_center: PlanePoint
    steiner_radius: float
    h1: float
    h1_sq: float
    h2_sq: float
    W: float
    C2: float
    C3: float
    bound_1_14_ok: bool
    bound_1_15_ok: bool
    classification: Stability
    tol: float


def verify_stability(
    params: ParamSet, curve: SupportFourier, tol: float = 1e-8, quantities: QuantitySet | None = None
) -> StabilityReport:
    """Check both stability bounds for one curve.

    The curve is recentred at its Steiner point first; W is translation
    invariant, and the distances are taken to the disk of radius ``L/2pi``
    centred there. ``tol`` is relative to ``max(1, C*W)``. Precomputed
    ``quantities`` of the curve may be passed to skip recomputation.
    """
    cond = check_conditions(params)
    if not cond.ok_1_13:
        failed = cond.failed_lines() or ["D > 0"]
        raise ConditionNotMet(f"stability bounds need strict conditions; failed: {failed[0]}", line=failed[0])
    require_convex(curve)
    center, radius = steiner_disk(curve)
    K = curve.centered()
    S = SupportFourier.disk(radius)
    q = quantities if quantities is not None else full_quantities(K)
    W = eval_W(params, q).W
    C2, C3 = stability_constants(params)
    h1 = h1_distance(K, S)
    h2_sq = h2_distance_sq(K, S)
    ok14 = h1 * h1 <= C2 * W + tol * max(1.0, C2 * W)
    ok15 = h2_sq <= C3 * W + tol * max(1.0, C3 * W)
    return StabilityReport(
        steiner_center=center,
        steiner_radius=radius,
        h1=h1,
        h1_sq=h1 * h1,
        h2_sq=h2_sq,
        W=W,
        C2=C2,
        C3=C3,
        bound_1_14_ok=bool(ok14),
        bound_1_15_ok=bool(ok15),
        classification=classify_stability(params),
        tol=tol,
    )


@dataclass(frozen=True)
class InstabilityWitness:
    curve: SupportFourier
    W: float
    h2_sq: float


def instability_witness(params: ParamSet, eps: float) -> InstabilityWitness:
    """Non-disk curve ``1 + eps*cos(2t)`` on which W vanishes but h2 does not."""
    if classify_stability(params) is not Stability.UNSTABLE:
        raise ConditionNotMet("witness needs a parameter set in the unstable regime")
    if not 0 < eps < 1 / 3:
        raise ValueError(f"eps must lie in (0, 1/3), got {eps}")
    curve = SupportFourier(1.0, [0.0, eps], [0.0, 0.0])
    W = eval_W(params, full_quantities(curve)).W
    return InstabilityWitness(curve, W, h2_distance_sq(curve, steiner_support(curve)))
