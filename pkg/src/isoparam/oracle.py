"""Brute-force ground truth from sampled boundary and evolute traces.

Nothing here uses the Fourier closed forms: lengths and areas come from line
integrals over the sampled curves, curvature from the parametric formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .curve_model import (
    TWO_PI,
    SupportFourier,
    boundary_derivative,
    boundary_point,
    eval_support,
    evolute_derivative,
    evolute_point,
    require_convex,
)
from .quantities import (
    NUMERICAL_FIELDS,
    SPECTRAL_FIELDS,
    QuantitySet,
    circumradius_inradius,
    full_quantities,
    spectral_quantities,
)


@dataclass(frozen=True)
class SampledTrace:
    thetas: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray
    rho: np.ndarray
    rho_beta: np.ndarray


def periodic_quadrature(samples, period=TWO_PI) -> float:
    """Trapezoidal rule for equispaced samples of a periodic function.

    Exact for trigonometric polynomials of degree below ``len(samples)``;
    higher frequencies alias onto lower ones.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        raise ValueError("need at least two samples")
    return period * float(np.mean(samples))


def _parametric_curvature(d1, d2):
    cross = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    speed = np.hypot(d1[:, 0], d1[:, 1])
    return cross / speed**3, speed


def sample_trace(curve: SupportFourier, M: int) -> SampledTrace:
    if M < 256:
        raise ValueError("trace needs at least 256 samples")
    thetas = TWO_PI * np.arange(M) / M
    g1 = boundary_derivative(curve, thetas, 1)
    g2 = boundary_derivative(curve, thetas, 2)
    kappa, _ = _parametric_curvature(g1, g2)
    rho_beta = np.abs(eval_support(curve, thetas, 1) + eval_support(curve, thetas, 3))
    return SampledTrace(
        thetas=thetas,
        gamma=boundary_point(curve, thetas),
        beta=evolute_point(curve, thetas),
        rho=1.0 / kappa,
        rho_beta=rho_beta,
    )


def _green_area(pts, vel):
    # 1/2 * closed integral of (x dy - y dx)
    return 0.5 * periodic_quadrature(pts[:, 0] * vel[:, 1] - pts[:, 1] * vel[:, 0])


def _rho_at(curve, t):
    t = np.atleast_1d(t)
    kappa, _ = _parametric_curvature(boundary_derivative(curve, t, 1), boundary_derivative(curve, t, 2))
    return float(1.0 / kappa[0])


def _bounded_extreme(curve, thetas, rho, kind):
    sign = 1.0 if kind == "max" else -1.0
    j = int(np.argmax(sign * rho))
    h = TWO_PI / len(thetas)
    res = minimize_scalar(
        lambda t: -sign * _rho_at(curve, t),
        bounds=(thetas[j] - h, thetas[j] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    cand = float(sign * -res.fun)
    return cand if sign * cand >= sign * rho[j] else float(rho[j])


def oracle_quantities(curve: SupportFourier, M: int | None = None) -> QuantitySet:
    """All quantities by quadrature over an ``M``-point trace."""
    require_convex(curve)
    if M is None:
        M = max(2048, 32 * curve.N)
    if M < 32 * curve.N:
        raise ValueError(f"M must be at least 32*N = {32 * curve.N}")
    tr = sample_trace(curve, M)
    g1 = boundary_derivative(curve, tr.thetas, 1)
    g2 = boundary_derivative(curve, tr.thetas, 2)
    kappa, speed = _parametric_curvature(g1, g2)
    A_tilde = _green_area(tr.beta, evolute_derivative(curve, tr.thetas, 1))
    fit = circumradius_inradius(curve, directions=2 * max(1024, 32 * curve.N))
    return QuantitySet(
        L=periodic_quadrature(speed),
        A=_green_area(tr.gamma, g1),
        A_tilde=A_tilde,
        A_tilde_abs=abs(A_tilde),
        int_rho_sq=periodic_quadrature(tr.rho**2),
        int_rho_beta_sq=periodic_quadrature(tr.rho_beta**2),
        rho_e=fit.rho_e,
        rho_i=fit.rho_i,
        rho_M=_bounded_extreme(curve, tr.thetas, tr.rho, "max"),
        rho_m=_bounded_extreme(curve, tr.thetas, tr.rho, "min"),
        int_kappa_sq_ds=periodic_quadrature(kappa**2 * speed),
        provenance="oracle",
    )


@dataclass(frozen=True)
class CrossCheckReport:
    deltas: dict
    rel_tol: float
    passed: bool


def cross_check(curve: SupportFourier, rel_tol: float = 1e-9, M: int | None = None) -> CrossCheckReport:
    """Compare the spectral/numerical channel against the oracle, field by field.

    Deltas are ``|x - y| / max(1, |y|)`` with ``y`` the oracle value.
    """
    closed = spectral_quantities(curve)
    full = full_quantities(curve)
    ref = oracle_quantities(curve, M)
    deltas = {}
    for name in SPECTRAL_FIELDS:
        x, y = getattr(closed, name), getattr(ref, name)
        deltas[name] = abs(x - y) / max(1.0, abs(y))
    for name in NUMERICAL_FIELDS:
        x, y = getattr(full, name), getattr(ref, name)
        deltas[name] = abs(x - y) / max(1.0, abs(y))
    passed = all(math.isfinite(d) and d <= rel_tol for d in deltas.values())
    return CrossCheckReport(deltas, rel_tol, passed)
