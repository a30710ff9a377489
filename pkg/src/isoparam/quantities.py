"""The ten geometric quantities entering the parametric functional.

Closed forms from the Fourier coefficients cover length, area, evolute area
and the two curvature-radius energies. Circumradius, inradius, curvature
radius extremes and the total squared curvature are computed numerically.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog, root

from .curve_model import (
    TWO_PI,
    PlanePoint,
    SupportFourier,
    curvature_coeffs,
    curvature_radius,
    require_convex,
    trig_eval,
    trig_extremum,
    trig_local_extrema,
)
from .errors import SolverError

SPECTRAL_FIELDS = ("L", "A", "A_tilde", "A_tilde_abs", "int_rho_sq", "int_rho_beta_sq")
NUMERICAL_FIELDS = ("rho_e", "rho_i", "rho_M", "rho_m", "int_kappa_sq_ds")


@dataclass(frozen=True)
class QuantitySet:
    """Geometric quantities of one curve.

    Fields filled only by numerical routines are ``None`` when
    ``provenance == "spectral"``.
    """

    L: float
    A: float
    A_tilde: float
    A_tilde_abs: float
    int_rho_sq: float
    int_rho_beta_sq: float
    rho_e: float | None = None
    rho_i: float | None = None
    rho_M: float | None = None
    rho_m: float | None = None
    int_kappa_sq_ds: float | None = None
    provenance: str = "spectral"

    def as_dict(self) -> dict:
        return asdict(self)

    def invariant_violations(self, tol_rel: float = 1e-9) -> list[str]:
        """Names of violated sanity invariants (empty when all hold)."""
        bad = []
        if not self.L > 0:
            bad.append("L > 0")
        if not self.A > 0:
            bad.append("A > 0")
        if self.A_tilde_abs != abs(self.A_tilde):
            bad.append("A_tilde_abs = |A_tilde|")
        if self.int_rho_beta_sq < 0:
            bad.append("int_rho_beta_sq >= 0")
        if self.L**2 - 4 * math.pi * self.A < -tol_rel * self.L**2:
            bad.append("L^2 - 4 pi A >= 0")
        if self.provenance != "spectral":
            if not self.rho_M >= self.rho_m > 0:
                bad.append("rho_M >= rho_m > 0")
            if not self.rho_e >= self.rho_i > 0:
                bad.append("rho_e >= rho_i > 0")
            if not self.int_kappa_sq_ds > 0:
                bad.append("int_kappa_sq_ds > 0")
        return bad


def _mode_energy(curve: SupportFourier):
    n = np.arange(2, curve.N + 1, dtype=float)
    e = np.asarray(curve.a[1:]) ** 2 + np.asarray(curve.b[1:]) ** 2
    return n, e


def spectral_quantities(curve: SupportFourier) -> QuantitySet:
    require_convex(curve)
    n, e = _mode_energy(curve)
    a0 = curve.a0
    pi = math.pi
    n2 = n * n
    A = pi * a0 * a0 - (pi / 2) * math.fsum((n2 - 1) * e)
    A_tilde = (pi / 2) * math.fsum((n2 - n2 * n2) * e)
    return QuantitySet(
        L=TWO_PI * a0,
        A=A,
        A_tilde=A_tilde,
        A_tilde_abs=abs(A_tilde),
        int_rho_sq=2 * pi * a0 * a0 + pi * math.fsum((n2 - 1) ** 2 * e),
        int_rho_beta_sq=pi * math.fsum(n2 * (n2 - 1) ** 2 * e),
        provenance="spectral",
    )


def extremal_curvature_radii(curve: SupportFourier, grid_size: int | None = None):
    """``(rho_M, rho_m)``: global max and min of ``rho = p + p''``."""
    require_convex(curve)
    coeffs = curvature_coeffs(curve)
    rho_M, _, _ = trig_extremum(*coeffs, kind="max", grid_size=grid_size)
    rho_m, _, _ = trig_extremum(*coeffs, kind="min", grid_size=grid_size)
    return rho_M, rho_m


class CircleFit(NamedTuple):
    rho_e: float
    rho_i: float
    center_e: PlanePoint
    center_i: PlanePoint


def _lp_center(c0, a, b, thetas):
    # min r  s.t.  q(t) - c.u(t) <= r  for t in thetas
    q = trig_eval(c0, a, b, thetas)
    A_ub = np.column_stack([-np.cos(thetas), -np.sin(thetas), -np.ones(len(thetas))])
    res = linprog(c=[0.0, 0.0, 1.0], A_ub=A_ub, b_ub=-q, bounds=[(None, None)] * 3, method="highs")
    if not res.success:
        raise SolverError(f"minimax LP failed: {res.message}")
    return res.x[:2], float(res.x[2])


def _shifted(c0, a, b, c):
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    a[0] -= c[0]
    b[0] -= c[1]
    return c0, a, b


def _max_over_theta(c0, a, b, c, grid):
    t, v = trig_local_extrema(*_shifted(c0, a, b, c), kind="max", grid_size=grid)
    order = np.argsort(-v)
    return t[order], v[order]


def _kkt_newton(c0, a, b, c, r, active):
    """Solve the optimality system with the given active directions.

    Unknowns are the centre, the radius and the active angles; each active
    angle is a stationary point of ``q - c.u`` with value ``r``. With two
    actives the normals must also be antipodal.
    """
    k = len(active)

    def resid(x):
        cx, cy, rr = x[:3]
        th = x[3:]
        ca = _shifted(c0, a, b, (cx, cy))
        f = [trig_eval(*ca, th, 0) - rr, trig_eval(*ca, th, 1)]
        if k == 2:
            f.append([math.sin(th[1] - th[0])])
        return np.concatenate(f)

    def jac(x):
        cx, cy, _ = x[:3]
        th = x[3:]
        ca = _shifted(c0, a, b, (cx, cy))
        d1 = trig_eval(*ca, th, 1)
        d2 = trig_eval(*ca, th, 2)
        J = np.zeros((2 * k + (k == 2), 3 + k))
        J[:k, 0], J[:k, 1], J[:k, 2] = -np.cos(th), -np.sin(th), -1.0
        J[k : 2 * k, 0], J[k : 2 * k, 1] = np.sin(th), -np.cos(th)
        J[np.arange(k), 3 + np.arange(k)] = d1
        J[k + np.arange(k), 3 + np.arange(k)] = d2
        if k == 2:
            cd = math.cos(th[1] - th[0])
            J[4, 3], J[4, 4] = -cd, cd
        return J

    x0 = np.r_[c, r, active]
    sol = root(resid, x0, jac=jac, method="hybr")
    if not sol.success:
        return None
    th = sol.x[3:]
    u = np.column_stack([np.cos(th), np.sin(th)])
    # the origin must lie in the convex hull of the active normals
    if k == 2:
        if u[0] @ u[1] > -1 + 1e-9:
            return None
    else:
        w = np.linalg.lstsq(np.vstack([u.T, np.ones(3)]), np.r_[0.0, 0.0, 1.0], rcond=None)[0]
        if np.any(w < -1e-9):
            return None
    return sol.x[:2], float(sol.x[2])


def _outer_minimax(c0, a, b, directions, grid, rounds=4):
    """``min_c max_t (q(t) - c.u(t))`` for a trigonometric polynomial ``q``.

    A direction-discretized LP gives a starting centre; an active-set Newton
    solve on the optimality system then lands on the continuous optimum. The
    problem is convex, so a Newton point whose exact maximum matches its
    radius and whose multipliers are non-negative is globally optimal. If no
    candidate certifies, the true maximizing directions are added to the LP
    (exchange) and the cycle repeats. Every candidate centre is scored by the
    exact maximum, so the returned radius is always attained there.
    """
    thetas = TWO_PI * np.arange(directions) / directions
    best_c, best_r, r_lp = None, math.inf, -math.inf
    for _ in range(rounds):
        c, r_lp = _lp_center(c0, a, b, thetas)
        t_loc, v_loc = _max_over_theta(c0, a, b, c, grid)
        if v_loc[0] < best_r:
            best_c, best_r = c, float(v_loc[0])
        tight = 1e-13 * max(1.0, abs(best_r))
        if best_r - r_lp <= tight:
            return best_c, best_r
        for k in (2, 3):
            for combo in _candidate_sets(t_loc, v_loc, k):
                sol = _kkt_newton(c0, a, b, c, float(v_loc[0]), t_loc[list(combo)])
                if sol is None:
                    continue
                c_new, r_new = sol
                _, v = _max_over_theta(c0, a, b, c_new, grid)
                if v[0] < best_r:
                    best_c, best_r = c_new, float(v[0])
                if abs(v[0] - r_new) <= tight:
                    return best_c, best_r
        near = v_loc >= r_lp - 1e-9 * max(1.0, abs(r_lp))
        thetas = np.unique(np.concatenate([thetas, t_loc[near]]))
    if not math.isfinite(best_r):
        raise SolverError("minimax solve produced no feasible centre", bracket=(r_lp, best_r))
    return best_c, best_r


def _candidate_sets(t, v, k, pool=5):
    # the highest local maxima are the only plausible active directions
    return combinations(range(min(pool, len(t))), k)


def _solve_radius(curve, directions, kind):
    grid = max(directions, 32 * curve.N)
    a = np.asarray(curve.a, dtype=float)
    b = np.asarray(curve.b, dtype=float)
    if kind == "outer":
        c, r = _outer_minimax(curve.a0, a, b, directions, grid)
    else:
        # max_c min_t (p - c.u) = -min_c' max_t (-p - c'.u) with c' = -c
        c, r = _outer_minimax(-curve.a0, -a, -b, directions, grid)
        c, r = -c, -r
    if not (math.isfinite(r) and r > 0):
        raise SolverError(f"{kind} radius solve produced {r}", bracket=(None, r))
    return PlanePoint(float(c[0]) + 0.0, float(c[1]) + 0.0), r


def circumradius_inradius(curve: SupportFourier, directions: int | None = None) -> CircleFit:
    """Smallest enclosing and largest inscribed circles.

    Both are linear minimax problems in the centre ``c`` over the support
    inequalities ``p(t) - c.(cos t, sin t) <= r`` (resp. ``>= r``). The centre
    is not unique for some bodies (e.g. constant width); any optimizer may be
    returned.
    """
    require_convex(curve)
    if directions is None:
        directions = max(1024, 32 * curve.N)
    ce, rho_e = _solve_radius(curve, directions, "outer")
    ci, rho_i = _solve_radius(curve, directions, "inner")
    return CircleFit(rho_e, rho_i, ce, ci)


def total_squared_curvature(curve: SupportFourier, nodes: int | None = None) -> float:
    """Integral of ``kappa^2 ds``, i.e. of ``1 / rho`` over the normal angle."""
    require_convex(curve)
    M = nodes or max(1024, 32 * curve.N)
    thetas = TWO_PI * np.arange(M) / M
    return TWO_PI * float(np.mean(1.0 / curvature_radius(curve, thetas)))


def full_quantities(curve: SupportFourier) -> QuantitySet:
    spectral = spectral_quantities(curve)
    rho_M, rho_m = extremal_curvature_radii(curve)
    fit = circumradius_inradius(curve)
    fields = {k: getattr(spectral, k) for k in SPECTRAL_FIELDS}
    return QuantitySet(
        **fields,
        rho_e=fit.rho_e,
        rho_i=fit.rho_i,
        rho_M=rho_M,
        rho_m=rho_m,
        int_kappa_sq_ds=total_squared_curvature(curve),
        provenance="mixed",
    )
