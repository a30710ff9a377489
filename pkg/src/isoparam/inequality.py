"""The eight-parameter functional W, its conditions and Fourier lower bounds.

``W = alpha*int(rho^2) + delta*L^2 + mu*A + sigma*|A~| + eta*int(rho_beta^2)
      + lambda*(rho_e - rho_i)^2 + xi*(rho_M - rho_m)^2 + zeta*int(kappa^2 ds)``
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import astuple, dataclass, fields
from pathlib import Path

import numpy as np

from .curve_model import SupportFourier, require_convex
from .errors import ConditionNotMet
from .quantities import QuantitySet, full_quantities

PI = math.pi
PARAM_NAMES = ("alpha", "delta", "mu", "sigma", "eta", "lambda", "xi", "zeta")
TERM_NAMES = (
    "alpha*int_rho_sq",
    "delta*L^2",
    "mu*A",
    "sigma*|A_tilde|",
    "eta*int_rho_beta_sq",
    "lambda*(rho_e-rho_i)^2",
    "xi*(rho_M-rho_m)^2",
    "zeta*int_kappa_sq_ds",
)

# forms are zero when they vanish up to this many roundings of their addends
_ZERO_ULPS = 64


@dataclass(frozen=True)
class ParamSet:
    alpha: float
    delta: float
    mu: float
    sigma: float
    eta: float
    lambda_: float
    xi: float
    zeta: float

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise ValueError(f"parameter {f.name} must be finite")
            object.__setattr__(self, f.name, v)

    @classmethod
    def of(cls, values) -> ParamSet:
        return cls(*values)

    def as_tuple(self) -> tuple:
        return astuple(self)

    def to_dict(self) -> dict:
        return dict(zip(PARAM_NAMES, self.as_tuple()))


def _form(*addends):
    """Sum of addends with a rounding-error scale for deciding sign."""
    value = math.fsum(addends)
    scale = _ZERO_ULPS * sys.float_info.epsilon * math.fsum(abs(x) for x in addends)
    return value, scale


def _nonneg(form):
    value, scale = form
    return value >= -scale


def _positive(form):
    value, scale = form
    return value > scale


def _zero(form):
    value, scale = form
    return abs(value) <= scale


def discriminant_form(p: ParamSet):
    return _form(
        6 * PI * p.alpha, -PI * p.mu, 4 * PI * p.sigma, 24 * PI * p.eta, 4 * p.lambda_, 4 * p.xi, -12 * PI * p.zeta
    )


@dataclass(frozen=True)
class ConditionReport:
    ok_1_9: bool
    ok_1_11: bool
    ok_1_12: bool
    ok_1_13: bool
    ok_3_2: bool
    D: float
    residuals: dict
    lines: dict

    def failed_lines(self) -> list[str]:
        """Lines of the base condition block that do not hold."""
        return [line for line, ok in self.lines.items() if not ok]


def check_conditions(params: ParamSet) -> ConditionReport:
    """Evaluate every condition block on a parameter set.

    Linear forms are summed exactly (``math.fsum``) and compared against zero
    with a tolerance of a few roundings of their addends, so presets whose
    forms vanish in exact arithmetic are recognised as zero. Raw values are
    returned in ``residuals``.
    """
    p = params
    a0_block = _form(2 * p.alpha, 4 * PI * p.delta, p.mu, -4 * p.zeta)
    n2_coeff = _form(2 * p.alpha, p.sigma, -2 * p.eta, -4 * p.zeta)
    disk_form = _form(2 * p.alpha, 4 * PI * p.delta, p.mu)
    n2_no_zeta = _form(2 * p.alpha, p.sigma, -2 * p.eta)
    D = discriminant_form(p)

    base = p.eta >= 0 and p.xi >= 0 and p.zeta >= 0 and p.lambda_ <= 0
    base = base and _nonneg(a0_block) and _nonneg(n2_coeff)
    ok_1_9 = base and _nonneg(D)
    ok_1_13 = base and _positive(D)
    ok_1_11 = _zero(disk_form) and p.zeta == 0
    ok_1_12 = p.lambda_**2 + p.xi**2 + p.zeta**2 > 0
    ok_3_2 = (
        p.eta >= 0
        and p.xi >= 0
        and p.lambda_ <= 0
        and p.lambda_**2 + p.xi**2 > 0
        and p.zeta == 0
        and _zero(disk_form)
        and _nonneg(n2_no_zeta)
        and _nonneg(D)
    )
    residuals = {
        "eta": p.eta,
        "xi": p.xi,
        "zeta": p.zeta,
        "-lambda": -p.lambda_,
        "2alpha+4pi*delta+mu-4zeta": a0_block[0],
        "2alpha+sigma-2eta-4zeta": n2_coeff[0],
        "2alpha+4pi*delta+mu": disk_form[0],
        "D": D[0],
    }
    lines = {
        "eta >= 0": p.eta >= 0,
        "xi >= 0": p.xi >= 0,
        "zeta >= 0": p.zeta >= 0,
        "lambda <= 0": p.lambda_ <= 0,
        "2alpha + 4pi delta + mu - 4zeta >= 0": _nonneg(a0_block),
        "2alpha + sigma - 2eta - 4zeta >= 0": _nonneg(n2_coeff),
        "D >= 0": _nonneg(D),
    }
    D_value = 0.0 if _zero(D) else D[0]
    return ConditionReport(ok_1_9, ok_1_11, ok_1_12, ok_1_13, ok_3_2, D_value, residuals, lines)


def f_poly(params: ParamSet, n: int) -> float:
    """Spectral weight of mode ``n`` in the Fourier expansion of W."""
    if n < 2:
        raise ValueError(f"f is defined for n >= 2, got {n}")
    p = params
    n2 = float(n) * n
    return math.fsum(
        [
            2 * p.eta * n2 * n2,
            (2 * p.alpha + p.sigma - 2 * p.eta - 4 * p.zeta) * n2,
            -2 * p.alpha - p.mu + 4 * p.lambda_ / PI + 4 * p.xi / PI + 4 * p.zeta,
        ]
    )


@dataclass(frozen=True)
class InequalityReport:
    W: float
    terms: dict
    fourier_bound: float | None = None
    uniform_bound: float | None = None
    chain_ok: bool | None = None
    tol: float | None = None

    @property
    def scale(self) -> float:
        return max(1.0, math.fsum(abs(v) for v in self.terms.values()))


def eval_W(params: ParamSet, q: QuantitySet) -> InequalityReport:
    p = params
    values = (
        p.alpha * q.int_rho_sq,
        p.delta * q.L**2,
        p.mu * q.A,
        p.sigma * q.A_tilde_abs,
        p.eta * q.int_rho_beta_sq,
        p.lambda_ * (q.rho_e - q.rho_i) ** 2,
        p.xi * (q.rho_M - q.rho_m) ** 2,
        p.zeta * q.int_kappa_sq_ds,
    )
    terms = dict(zip(TERM_NAMES, values))
    return InequalityReport(W=math.fsum(values), terms=terms)


def fourier_lower_bound(params: ParamSet, curve: SupportFourier):
    """``(fourier_bound, uniform_bound)`` from the mode energies of ``curve``."""
    e = np.asarray(curve.a[1:]) ** 2 + np.asarray(curve.b[1:]) ** 2
    fb = (PI / 2) * math.fsum((n * n - 1) * f_poly(params, n) * e[n - 2] for n in range(2, curve.N + 1))
    D = check_conditions(params).D
    ub = 1.5 * D * math.fsum(e)
    return fb, ub


def verify_chain(
    params: ParamSet, curve: SupportFourier, tol: float = 1e-8, quantities: QuantitySet | None = None
) -> InequalityReport:
    """Check ``W >= fourier_bound >= uniform_bound >= 0`` on one curve.

    ``tol`` is relative to ``max(1, sum |terms|)``.
    """
    cond = check_conditions(params)
    if not cond.ok_1_9:
        line = cond.failed_lines()[0]
        raise ConditionNotMet(f"parameter set violates condition: {line}", line=line)
    require_convex(curve)
    q = quantities if quantities is not None else full_quantities(curve)
    rep = eval_W(params, q)
    fb, ub = fourier_lower_bound(params, curve)
    t = tol * rep.scale
    ok = rep.W >= fb - t and fb >= ub - t and ub >= -t
    return InequalityReport(rep.W, rep.terms, fb, ub, bool(ok), t)


PRESET_NAMES = (
    "iso_1_1",
    "rev_1_5",
    "py_1_6",
    "gao_1_7",
    "gao_1_8",
    "cor_3_3",
    "cor_3_4",
    "cor_3_5",
    "cor_3_6",
    "panxu",
)


def preset(name: str, epsilon: float | None = None) -> ParamSet:
    """Named parameter vectors recovering known inequalities."""
    if name == "cor_3_6":
        if epsilon is None:
            raise ValueError("preset cor_3_6 requires epsilon")
        if not 0 <= epsilon <= 0.5:
            raise ValueError(f"epsilon must lie in [0, 1/2], got {epsilon}")
        return ParamSet(0, 0, 0, 1, epsilon, -2 * PI, PI, 0)
    table = {
        "iso_1_1": (0, 1, -4 * PI, 0, 0, 0, 0, 0),
        "rev_1_5": (0, -1, 4 * PI, 4 * PI, 0, 0, 0, 0),
        "py_1_6": (PI, -1, 2 * PI, 0, 0, 0, 0, 0),
        "gao_1_7": (0, -1, 4 * PI, PI, 0, 0, 0, 0),
        "gao_1_8": (PI, -1, 2 * PI, -PI, 0, 0, 0, 0),
        "cor_3_3": (0, 2, -20, 8, 2, 0, 0, 1),
        "cor_3_4": (3, (8 - 8 * PI) / PI, 32 * PI - 38, 2 * PI - 8, PI - 1, 0, 0, 0),
        "cor_3_5": (1, -13 / 7, 52 * PI / 7 - 2, -PI / 7, 0.75, 0, 0, 0),
    }
    table["panxu"] = table["rev_1_5"]
    try:
        return ParamSet.of(table[name])
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}") from None


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} in input")


def params_from_dict(data: dict) -> ParamSet:
    if "preset" in data:
        return preset(data["preset"], data.get("epsilon"))
    missing = [k for k in PARAM_NAMES if k not in data]
    if missing:
        raise ValueError(f"parameter object missing keys: {', '.join(missing)}")
    return ParamSet(*(data[k] for k in PARAM_NAMES))


def load_params(path) -> ParamSet:
    data = json.loads(Path(path).read_text(), parse_constant=_reject_constant)
    if not isinstance(data, dict):
        raise ValueError("parameter file must hold a single JSON object")
    return params_from_dict(data)


@dataclass(frozen=True)
class ClassicalReport:
    isoperimetric: bool
    bonnesen: bool
    bottema: bool
    lemma_l1: bool
    gage: bool
    gaps: dict

    @property
    def all_hold(self) -> bool:
        return self.isoperimetric and self.bonnesen and self.bottema and self.lemma_l1 and self.gage


def classical_checks(q: QuantitySet, tol: float = 1e-8) -> ClassicalReport:
    """Five classical inequalities on one quantity set.

    Each gap is ``lhs - rhs`` oriented so that the inequality reads
    ``gap >= 0``; it holds when ``gap >= -tol * max(1, |lhs|, |rhs|)``.
    """
    deficit = q.L**2 - 4 * PI * q.A
    pairs = {
        "isoperimetric": (q.L**2, 4 * PI * q.A),
        "bonnesen": (deficit, PI**2 * (q.rho_e - q.rho_i) ** 2),
        "bottema": (PI**2 * (q.rho_M - q.rho_m) ** 2, deficit),
        "lemma_l1": (q.int_kappa_sq_ds, 3 * q.L - 4 * q.A - 4 * q.A_tilde_abs),
        "gage": (q.int_kappa_sq_ds, PI * q.L / q.A),
    }
    gaps, flags = {}, {}
    for name, (lhs, rhs) in pairs.items():
        gaps[name] = lhs - rhs
        flags[name] = gaps[name] >= -tol * max(1.0, abs(lhs), abs(rhs))
    return ClassicalReport(gaps=gaps, **flags)
