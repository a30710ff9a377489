"""Convex bodies represented by truncated Fourier support functions.

A body is stored as ``p(t) = a0 + sum_n (a[n-1] cos(n t) + b[n-1] sin(n t))``
with ``t`` the angle of the outward normal. Everything downstream (boundary,
evolute, curvature radius, distances) is evaluated from these coefficients.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import NotConvexError, ReducedAccuracyWarning

TWO_PI = 2.0 * math.pi


class PlanePoint(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class SupportFourier:
    """Truncated Fourier support function of a planar convex body.

    Parameters
    ----------
    a0 : float
        Mean support value (equals ``L / 2pi``).
    a, b : sequence of float
        Cosine and sine coefficients for harmonics ``n = 1..N``.
    margin : float, optional
        Lower bound the curvature radius must clear for the convexity
        certificate. Defaults to ``1e-3 * a0``.
    """

    a0: float
    a: tuple = ()
    b: tuple = ()
    margin: float | None = field(default=None, compare=False)

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        n = max(len(a), len(b), 1)
        a += (0.0,) * (n - len(a))
        b += (0.0,) * (n - len(b))
        a0 = float(self.a0)
        if not all(math.isfinite(v) for v in (a0, *a, *b)):
            raise ValueError("support coefficients must be finite")
        if a0 <= 0:
            raise ValueError(f"a0 must be positive, got {a0}")
        margin = 1e-3 * a0 if self.margin is None else float(self.margin)
        if not math.isfinite(margin):
            raise ValueError("margin must be finite")
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "margin", margin)

    @cached_property
    def certificate(self) -> ConvexityCertificate:
        """Default-grid convexity certificate; computed once per instance."""
        return check_convexity(self)

    @property
    def N(self) -> int:
        return len(self.a)

    @property
    def cos_coeffs(self) -> np.ndarray:
        return np.array(self.a)

    @property
    def sin_coeffs(self) -> np.ndarray:
        return np.array(self.b)

    @classmethod
    def disk(cls, radius=1.0, center=(0.0, 0.0), N=1):
        a = [0.0] * N
        b = [0.0] * N
        a[0], b[0] = center
        return cls(radius, a, b)

    def translate(self, dx, dy) -> SupportFourier:
        """Support function of the body shifted by ``(dx, dy)``."""
        a = list(self.a)
        b = list(self.b)
        a[0] += dx
        b[0] += dy
        return SupportFourier(self.a0, a, b, self.margin)

    def centered(self) -> SupportFourier:
        """Copy with the first harmonic removed (Steiner point at the origin)."""
        return SupportFourier(self.a0, (0.0,) + self.a[1:], (0.0,) + self.b[1:], self.margin)

    def to_dict(self) -> dict:
        return {"a0": self.a0, "cos": list(self.a), "sin": list(self.b), "margin": self.margin}

    @classmethod
    def from_dict(cls, data: dict) -> SupportFourier:
        try:
            a0 = data["a0"]
        except KeyError:
            raise ValueError("curve object needs an 'a0' field") from None
        for key in ("cos", "sin"):
            if not isinstance(data.get(key, []), list):
                raise ValueError(f"'{key}' must be an array of numbers")
        return cls(a0, data.get("cos", []), data.get("sin", []), data.get("margin"))


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} in input")


def loads_curve(text: str) -> SupportFourier:
    data = json.loads(text, parse_constant=_reject_constant)
    if not isinstance(data, dict):
        raise ValueError("curve file must hold a single JSON object")
    return SupportFourier.from_dict(data)


def dumps_curve(curve: SupportFourier) -> str:
    # json uses repr() for floats, which round-trips exactly
    return json.dumps(curve.to_dict(), sort_keys=True, allow_nan=False)


def load_curve(path) -> SupportFourier:
    return loads_curve(Path(path).read_text())


def save_curve(curve: SupportFourier, path) -> None:
    Path(path).write_text(dumps_curve(curve) + "\n")


# -- trigonometric polynomial kernels -------------------------------------


def reduce_angle(theta):
    return np.mod(theta, TWO_PI)


def trig_eval(c0, a, b, theta, order=0):
    """Evaluate the ``order``-th derivative of a trigonometric polynomial.

    Works for any non-negative order; ``theta`` may be scalar or array.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    t = reduce_angle(np.asarray(theta, dtype=float))
    n = np.arange(1, a.size + 1, dtype=float)
    nt = np.multiply.outer(t, n)
    c, s = np.cos(nt), np.sin(nt)
    w = n**order
    # d^k/dt^k of (a cos + b sin) cycles with period 4 in k
    k = order % 4
    if k == 0:
        terms = c @ (w * a) + s @ (w * b)
    elif k == 1:
        terms = -s @ (w * a) + c @ (w * b)
    elif k == 2:
        terms = -(c @ (w * a)) - s @ (w * b)
    else:
        terms = s @ (w * a) - c @ (w * b)
    if order == 0:
        terms = terms + c0
    if np.ndim(terms) == 0:
        return float(terms)
    return terms


def default_grid(N: int, per_harmonic: int = 16, floor: int = 512) -> int:
    return max(floor, per_harmonic * N)


def _newton_polish(c0, a, b, t0, cell, sign, iters=30):
    """Polish extrema of ``sign * f`` (maxima) from starting angles ``t0``.

    Returns refined angles and a mask of starts that converged inside their
    grid cell to a point no worse than the start.
    """
    t0 = np.atleast_1d(np.asarray(t0, dtype=float))
    t = t0.copy()
    ok = np.ones(t.shape, dtype=bool)
    done = np.zeros(t.shape, dtype=bool)
    for _ in range(iters):
        d1 = trig_eval(c0, a, b, t, 1)
        d2 = trig_eval(c0, a, b, t, 2)
        d1, d2 = np.atleast_1d(d1), np.atleast_1d(d2)
        done |= d1 == 0
        concave = sign * d2 < 0
        ok &= concave | done
        step = np.where(concave & ~done, d1 / np.where(d2 == 0, 1.0, d2), 0.0)
        t = t - step
        ok &= np.abs(t - t0) <= cell
        done |= np.abs(step) <= 1e-12
        if np.all(done | ~ok):
            break
    ok &= done
    f0 = np.atleast_1d(trig_eval(c0, a, b, t0))
    f1 = np.atleast_1d(trig_eval(c0, a, b, t))
    ok &= sign * f1 >= sign * f0 - 1e-15 * max(1.0, float(np.max(np.abs(f0))))
    return np.where(ok, t, t0), ok


def trig_extremum(c0, a, b, kind="min", grid_size=None):
    """Global minimum or maximum of a trigonometric polynomial.

    Equispaced scan followed by Newton polish of ``f' = 0`` from the grid
    argbest. Returns ``(value, theta, polished)``; on polish failure the grid
    value is returned with ``polished=False`` and a warning is issued.
    """
    sign = 1.0 if kind == "max" else -1.0
    G = grid_size or default_grid(len(a))
    thetas = TWO_PI * np.arange(G) / G
    vals = trig_eval(c0, a, b, thetas)
    j = int(np.argmax(sign * vals))
    t, ok = _newton_polish(c0, a, b, thetas[j], TWO_PI / G, sign)
    t = float(reduce_angle(t[0]))
    if not ok[0]:
        warnings.warn(
            f"extremum polish failed near theta={thetas[j]:.6g}; using grid value",
            ReducedAccuracyWarning,
            stacklevel=2,
        )
        return float(vals[j]), float(thetas[j]), False
    return trig_eval(c0, a, b, t), t, True


def trig_local_extrema(c0, a, b, kind="max", grid_size=None):
    """All polished local maxima (or minima) found on the scan grid.

    Returns ``(thetas, values)`` arrays; unpolishable points keep grid values.
    """
    sign = 1.0 if kind == "max" else -1.0
    G = grid_size or default_grid(len(a))
    thetas = TWO_PI * np.arange(G) / G
    vals = sign * trig_eval(c0, a, b, thetas)
    peaks = (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    idx = np.flatnonzero(peaks)
    t, _ = _newton_polish(c0, a, b, thetas[idx], TWO_PI / G, sign)
    t = reduce_angle(t)
    return t, np.atleast_1d(trig_eval(c0, a, b, t))


def curvature_coeffs(curve: SupportFourier):
    """Coefficients of ``rho = p + p''`` as a trigonometric polynomial."""
    n = np.arange(1, curve.N + 1, dtype=float)
    f = 1.0 - n**2
    return curve.a0, f * curve.cos_coeffs, f * curve.sin_coeffs


# -- public operations -------------------------------------------------------


def eval_support(curve: SupportFourier, theta, order: int = 0):
    """Value or derivative (order 0..3) of the support function at ``theta``."""
    if order not in (0, 1, 2, 3):
        raise ValueError(f"order must be one of 0, 1, 2, 3; got {order!r}")
    return trig_eval(curve.a0, curve.a, curve.b, theta, order)


def curvature_radius(curve: SupportFourier, theta):
    return eval_support(curve, theta, 0) + eval_support(curve, theta, 2)


def _as_point(xy):
    if np.ndim(xy[0]) == 0:
        return PlanePoint(float(xy[0]), float(xy[1]))
    return np.column_stack(xy)


def boundary_point(curve: SupportFourier, theta):
    """Boundary point with outward normal angle ``theta``.

    Scalar input gives a :class:`PlanePoint`; array input an ``(M, 2)`` array.
    """
    p = eval_support(curve, theta, 0)
    dp = eval_support(curve, theta, 1)
    c, s = np.cos(theta), np.sin(theta)
    return _as_point((p * c - dp * s, p * s + dp * c))


def evolute_point(curve: SupportFourier, theta):
    """Centre of curvature at normal angle ``theta``."""
    dp = eval_support(curve, theta, 1)
    d2p = eval_support(curve, theta, 2)
    c, s = np.cos(theta), np.sin(theta)
    return _as_point((-dp * s - d2p * c, dp * c - d2p * s))


_COS_CYCLE = ((np.cos, 1.0), (np.sin, -1.0), (np.cos, -1.0), (np.sin, 1.0))
_SIN_CYCLE = ((np.sin, 1.0), (np.cos, 1.0), (np.sin, -1.0), (np.cos, -1.0))


def _leibniz(curve, theta, k, terms):
    # k-th derivative of sum(coef * p^(j) * trig) by the product rule
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape)
    for coef, j, trig in terms:
        cycle = _COS_CYCLE if trig == "cos" else _SIN_CYCLE
        for i in range(k + 1):
            fn, sgn = cycle[(k - i) % 4]
            pj = trig_eval(curve.a0, curve.a, curve.b, theta, j + i)
            out = out + coef * math.comb(k, i) * sgn * pj * fn(theta)
    return out


_GAMMA = (
    ((1.0, 0, "cos"), (-1.0, 1, "sin")),
    ((1.0, 0, "sin"), (1.0, 1, "cos")),
)
_BETA = (
    ((-1.0, 1, "sin"), (-1.0, 2, "cos")),
    ((1.0, 1, "cos"), (-1.0, 2, "sin")),
)


def boundary_derivative(curve: SupportFourier, theta, k: int) -> np.ndarray:
    """``d^k gamma / d theta^k`` as an ``(M, 2)`` array, by the product rule."""
    return np.column_stack([_leibniz(curve, theta, k, t) for t in _GAMMA])


def evolute_derivative(curve: SupportFourier, theta, k: int) -> np.ndarray:
    return np.column_stack([_leibniz(curve, theta, k, t) for t in _BETA])


class ConvexityCertificate(NamedTuple):
    min_rho: float
    argmin_theta: float
    passed: bool


def check_convexity(curve: SupportFourier, grid_size: int | None = None, margin: float | None = None):
    """Certify ``min rho > margin`` on a scan grid refined by Newton polish."""
    if grid_size is None:
        grid_size = default_grid(curve.N)
    if grid_size < 8 * curve.N:
        raise ValueError(f"grid_size must be at least 8*N = {8 * curve.N}, got {grid_size}")
    if margin is None:
        margin = curve.margin
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducedAccuracyWarning)
        val, theta, _ = trig_extremum(*curvature_coeffs(curve), kind="min", grid_size=grid_size)
    return ConvexityCertificate(val, theta, bool(val > margin))


def require_convex(curve: SupportFourier) -> None:
    cert = curve.certificate
    if not cert.passed:
        raise NotConvexError(
            f"curve is not strictly convex: min curvature radius {cert.min_rho:.6g} "
            f"at theta={cert.argmin_theta:.6g} does not exceed margin {curve.margin:.3g}"
        )


def is_disk(curve: SupportFourier, tol: float = 1e-12) -> bool:
    energy = math.fsum(v * v for v in curve.a[1:] + curve.b[1:])
    return energy <= tol * tol


def random_convex_curve(seed: int, max_harmonic: int = 8, decay: float = 2.5, margin: float = 0.1) -> SupportFourier:
    """Seeded random strictly convex curve with ``a0 = 1`` and no first harmonic.

    Harmonic ``n`` is drawn uniformly from ``[-n^-decay, n^-decay]``. When the
    draw is not convex enough, all harmonics are shrunk by the common factor
    that puts the minimum curvature radius exactly at ``margin``.
    """
    if max_harmonic < 2:
        raise ValueError("max_harmonic must be at least 2")
    if not decay > 2:
        raise ValueError("decay must exceed 2")
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    n = np.arange(2, max_harmonic + 1, dtype=float)
    scale = n**-decay
    a = rng.uniform(-1.0, 1.0, n.size) * scale
    b = rng.uniform(-1.0, 1.0, n.size) * scale
    curve = SupportFourier(1.0, np.r_[0.0, a], np.r_[0.0, b])
    cert = check_convexity(curve, margin=margin)
    if not cert.passed:
        # rho = 1 + s * r(theta) is affine in s, so min rho scales exactly
        s = (1.0 - margin) / (1.0 - cert.min_rho)
        curve = SupportFourier(1.0, np.r_[0.0, s * a], np.r_[0.0, s * b])
    return curve
