import json
import math

import numpy as np
import pytest

from conftest import random_params
from isoparam import (
    ConditionNotMet,
    ParamSet,
    SupportFourier,
    check_conditions,
    classical_checks,
    eval_W,
    f_poly,
    fourier_lower_bound,
    full_quantities,
    preset,
    random_convex_curve,
    verify_chain,
)
from isoparam.inequality import PRESET_NAMES, load_params, params_from_dict

PI = math.pi
ISO = ParamSet(0, 1, -4 * PI, 0, 0, 0, 0, 0)
REV = ParamSet(0, -1, 4 * PI, 4 * PI, 0, 0, 0, 0)
COR33 = ParamSet(0, 2, -20, 8, 2, 0, 0, 1)
ZERO = ParamSet(0, 0, 0, 0, 0, 0, 0, 0)
LAMBDA_POS = ParamSet(0, 0, 0, 0, 0, 1, 0, 0)


class TestConditions:
    def test_iso(self):
        c = check_conditions(ISO)
        assert c.ok_1_9 and c.ok_1_11 and not c.ok_1_12
        assert c.D == pytest.approx(4 * PI**2, rel=1e-15)

    def test_all_zero(self):
        c = check_conditions(ZERO)
        assert c.ok_1_9 and not c.ok_1_13
        assert c.D == 0

    def test_positive_lambda(self):
        c = check_conditions(LAMBDA_POS)
        assert not c.ok_1_9
        assert c.failed_lines() == ["lambda <= 0"]

    def test_flags_are_python_bools(self):
        c = check_conditions(preset("cor_3_4"))
        for flag in (c.ok_1_9, c.ok_1_11, c.ok_1_12, c.ok_1_13, c.ok_3_2):
            assert type(flag) is bool

    def test_cor_3_4_on_boundary(self):
        c = check_conditions(preset("cor_3_4"))
        assert c.ok_1_9 and c.ok_1_11 and not c.ok_1_13
        assert c.D == 0.0
        assert abs(c.residuals["D"]) < 1e-12

    def test_cor_3_6_block(self):
        c = check_conditions(preset("cor_3_6", 0.25))
        assert c.ok_1_9 and c.ok_3_2 and c.ok_1_13

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_presets_admissible(self, name):
        p = preset(name, 0.25 if name == "cor_3_6" else None)
        assert check_conditions(p).ok_1_9


class TestFPoly:
    def test_cor_3_3(self):
        assert f_poly(COR33, 2) == pytest.approx(88, rel=1e-15)
        assert f_poly(COR33, 3) == pytest.approx(348, rel=1e-15)

    def test_iso(self):
        assert f_poly(ISO, 2) == pytest.approx(4 * PI, rel=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 17])
    def test_zero(self, n):
        assert f_poly(ZERO, n) == 0

    @pytest.mark.parametrize("n", [1, 0, -3])
    def test_rejects_low_modes(self, n):
        with pytest.raises(ValueError):
            f_poly(ISO, n)

    def test_f2_equals_D_over_pi(self, rng):
        for _ in range(1000):
            p = random_params(rng)
            D = check_conditions(p).D
            assert PI * f_poly(p, 2) == pytest.approx(D, rel=1e-12, abs=1e-12)

    def test_monotone_under_base_block(self, rng):
        for _ in range(200):
            p = random_params(rng)
            vals = [f_poly(p, n) for n in range(2, 65)]
            for lo, hi in zip(vals, vals[1:]):
                assert hi >= lo - 1e-12 * max(1.0, abs(lo))


class TestEvalW:
    def test_iso_disk(self, disk):
        assert eval_W(ISO, full_quantities(disk)).W == pytest.approx(0.0, abs=1e-14)

    def test_iso_oval(self, oval):
        W = eval_W(ISO, full_quantities(oval)).W
        assert W == pytest.approx(0.06 * PI**2, rel=1e-12)
        assert W == pytest.approx(0.592176, abs=1e-6)

    def test_rev_oval(self, oval):
        W = eval_W(REV, full_quantities(oval)).W
        assert W == pytest.approx(0.18 * PI**2, rel=1e-12)
        assert W == pytest.approx(1.776529, abs=1e-6)

    def test_terms(self, oval):
        rep = eval_W(ISO, full_quantities(oval))
        assert len(rep.terms) == 8
        assert math.fsum(rep.terms.values()) == rep.W
        # L^2 = 4pi^2 and 4pi*A = 3.94pi^2
        assert rep.scale == pytest.approx(7.94 * PI**2, rel=1e-12)


class TestFourierBound:
    @pytest.mark.parametrize("name", ["iso_1_1", "cor_3_3", "py_1_6"])
    def test_disk(self, disk, name):
        assert fourier_lower_bound(preset(name), disk) == (0.0, 0.0)

    def test_rev_oval(self, oval):
        fb, ub = fourier_lower_bound(REV, oval)
        assert fb == pytest.approx(0.18 * PI**2, rel=1e-13)
        assert ub == pytest.approx(0.18 * PI**2, rel=1e-13)

    def test_cor_3_3_trefoil(self, trefoil):
        fb, ub = fourier_lower_bound(COR33, trefoil)
        assert fb == pytest.approx(3.48 * PI, rel=1e-13)
        assert fb == pytest.approx(10.93274, abs=1e-5)
        assert ub == pytest.approx(0.33 * PI, rel=1e-13)
        assert ub == pytest.approx(1.036726, abs=1e-6)
        assert fb >= ub


class TestVerifyChain:
    def test_iso_random(self):
        for seed in range(100):
            rep = verify_chain(ISO, random_convex_curve(seed))
            assert rep.chain_ok, seed

    def test_py_disk(self, disk):
        rep = verify_chain(preset("py_1_6"), disk)
        assert rep.W == pytest.approx(0.0, abs=1e-13)
        assert rep.chain_ok

    def test_rejects_bad_params(self, oval):
        with pytest.raises(ConditionNotMet) as exc:
            verify_chain(LAMBDA_POS, oval)
        assert exc.value.line == "lambda <= 0"

    def test_accepts_precomputed_quantities(self, oval):
        q = full_quantities(oval)
        assert verify_chain(REV, oval, quantities=q) == verify_chain(REV, oval)

    def test_random_params(self, rng):
        for seed in range(60):
            rep = verify_chain(random_params(rng), random_convex_curve(seed, 6))
            assert rep.chain_ok, seed


class TestPresets:
    def test_iso(self):
        assert preset("iso_1_1").as_tuple() == (0, 1, -4 * PI, 0, 0, 0, 0, 0)

    def test_cor_3_3(self):
        assert preset("cor_3_3").as_tuple() == (0, 2, -20, 8, 2, 0, 0, 1)

    def test_panxu_is_reverse(self):
        assert preset("panxu") == preset("rev_1_5")

    def test_cor_3_6_needs_epsilon(self):
        with pytest.raises(ValueError):
            preset("cor_3_6")
        with pytest.raises(ValueError):
            preset("cor_3_6", 0.6)

    def test_unknown(self):
        with pytest.raises(ValueError, match="unknown preset"):
            preset("nope")

    def test_params_dict_forms(self, tmp_path):
        assert params_from_dict({"preset": "cor_3_6", "epsilon": 0.25}) == preset("cor_3_6", 0.25)
        path = tmp_path / "p.json"
        path.write_text(json.dumps(preset("cor_3_3").to_dict()))
        assert load_params(path) == COR33

    def test_params_dict_errors(self, tmp_path):
        with pytest.raises(ValueError, match="missing"):
            params_from_dict({"alpha": 1})
        path = tmp_path / "p.json"
        path.write_text('{"alpha": NaN, "delta": 0, "mu": 0, "sigma": 0, "eta": 0, "lambda": 0, "xi": 0, "zeta": 0}')
        with pytest.raises(ValueError):
            load_params(path)
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_params(path)

    def test_non_finite_param(self):
        with pytest.raises(ValueError):
            ParamSet(math.inf, 0, 0, 0, 0, 0, 0, 0)


def _special_cases(q):
    L, A, At, R2 = q.L, q.A, q.A_tilde_abs, q.int_rho_sq
    return {
        "iso_1_1": L * L - 4 * PI * A,
        "rev_1_5": 4 * PI * (A + At) - L * L,
        "py_1_6": PI * R2 - L * L + 2 * PI * A,
        "gao_1_7": 4 * PI * A + PI * At - L * L,
        "gao_1_8": PI * R2 - L * L + 2 * PI * A - PI * At,
    }


def test_special_case_identities():
    for seed in range(40):
        q = full_quantities(random_convex_curve(seed))
        for name, expected in _special_cases(q).items():
            rep = eval_W(preset(name), q)
            assert rep.W == pytest.approx(expected, rel=1e-10, abs=1e-12 * rep.scale), (seed, name)


def test_cor_3_3_unit_disk(disk):
    assert eval_W(COR33, full_quantities(disk)).W == pytest.approx(8 * PI**2 - 18 * PI, abs=1e-8)


def test_disk_equality_when_disk_form_vanishes(rng):
    names = [n for n in PRESET_NAMES if n != "cor_3_3"]
    for _ in range(20):
        d = SupportFourier.disk(rng.uniform(0.5, 2), tuple(rng.uniform(-1, 1, 2)))
        q = full_quantities(d)
        for name in names:
            p = preset(name, 0.25 if name == "cor_3_6" else None)
            assert check_conditions(p).ok_1_11, name
            rep = eval_W(p, q)
            assert abs(rep.W) <= 1e-9 * rep.scale, name


class TestClassical:
    def test_disk(self, disk):
        rep = classical_checks(full_quantities(disk))
        assert rep.all_hold
        assert rep.gaps["bonnesen"] == pytest.approx(0.0, abs=1e-12)
        assert rep.gaps["isoperimetric"] == pytest.approx(0.0, abs=1e-12)

    def test_oval(self, oval):
        q = full_quantities(oval)
        rep = classical_checks(q)
        assert rep.all_hold
        assert rep.gaps["bonnesen"] == pytest.approx(0.02 * PI**2, rel=1e-10)
        assert rep.gaps["bonnesen"] == pytest.approx(0.197392, abs=1e-6)
        assert PI**2 * (q.rho_M - q.rho_m) ** 2 == pytest.approx(0.36 * PI**2, rel=1e-10)

    def test_random(self):
        for seed in range(100):
            assert classical_checks(full_quantities(random_convex_curve(seed))).all_hold, seed

    def test_detects_violation(self, oval):
        from dataclasses import replace

        q = replace(full_quantities(oval), rho_e=2.0)
        rep = classical_checks(q)
        assert not rep.bonnesen and not rep.all_hold
