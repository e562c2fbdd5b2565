import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freudquad import (
    SpaceWeight,
    WCETable,
    basis_matrix,
    gauss_rule,
    slope_fit,
    tensor_wce,
    wce_bound,
    wce_me2,
    wce_series,
)

PI = math.pi


def geometric_space(t: float) -> SpaceWeight:
    return SpaceWeight.mod_exp2(PI * (1.0 - 1.0 / t))


class TestWceMe2:
    def test_empty_rule(self):
        with pytest.warns(UserWarning):
            val = wce_me2(np.array([]), np.array([]), 1.25)
        assert val == pytest.approx(1.0 / (math.sqrt(2.0) * 1.25), rel=1e-15)

    def test_invalid_t(self, basis2):
        rule = gauss_rule(basis2, 3)
        with pytest.raises(ValueError):
            wce_me2(rule.nodes, rule.omega, 1.0)

    def test_cross_path_small(self, basis2, basis2_deep):
        rule = gauss_rule(basis2, 3)
        v_kernel = wce_me2(rule.nodes, rule.omega, 1.25)
        v_series = wce_series(
            rule.nodes, rule.omega, basis2_deep, geometric_space(1.25), start=6
        )
        assert v_kernel == pytest.approx(v_series, rel=1e-12)

    def test_cross_path_sweep(self, basis2, basis2_deep):
        for t in (1.25, 50.0 / 49.0):
            space = geometric_space(t)
            for n in (3, 9, 15, 21):
                rule = gauss_rule(basis2, n)
                v_kernel = wce_me2(rule.nodes, rule.omega, t)
                v_series = wce_series(
                    rule.nodes, rule.omega, basis2_deep, space, start=2 * n
                )
                assert v_kernel == pytest.approx(v_series, rel=1e-12)

    def test_never_significantly_negative(self, basis2):
        for n in range(3, 42, 2):
            rule = gauss_rule(basis2, n)
            assert wce_me2(rule.nodes, rule.omega, 1.25) > -1e-12

    def test_slope_below_theory_ceiling(self, basis2):
        ns = list(range(3, 42, 2))
        vals = [wce_me2(*(lambda r: (r.nodes, r.omega))(gauss_rule(basis2, n)), 1.25)
                for n in ns]
        slope, _ = slope_fit(ns, np.log10(vals))
        assert slope <= -2.0 * math.log10(1.25) + 0.02


class TestWceSeries:
    def test_positive_and_decreasing(self, basis2):
        space = SpaceWeight.polynomial(3.0)
        prev = None
        for n in range(3, 42, 2):
            rule = gauss_rule(basis2, n)
            val = wce_series(rule.nodes, rule.omega, basis2, space, start=2 * n,
                             k_max=599)
            assert val > 0.0
            if prev is not None:
                assert val < prev
            prev = val

    def test_start_beyond_truncation_is_zero(self, basis2):
        rule = gauss_rule(basis2, 5)
        space = SpaceWeight.polynomial(3.0)
        assert wce_series(rule.nodes, rule.omega, basis2, space, start=200,
                          k_max=150) == 0.0

    def test_exactness_makes_low_modes_irrelevant(self, basis2, basis2_deep):
        # starting at 0 instead of 2n changes nothing for an exact rule
        rule = gauss_rule(basis2, 9)
        space = geometric_space(1.25)
        v_tail = wce_series(rule.nodes, rule.omega, basis2_deep, space, start=18)
        v_full = wce_series(rule.nodes, rule.omega, basis2_deep, space, start=0)
        assert abs(v_full - v_tail) < 1e-18 + 1e-12 * v_tail

    def test_nonnegative_by_construction(self, basis2):
        rule = gauss_rule(basis2, 7)
        space = SpaceWeight.polynomial(2.0)
        assert wce_series(rule.nodes, rule.omega, basis2, space, start=14,
                          k_max=400) >= 0.0


class TestWceBound:
    def test_zero(self):
        assert wce_bound(0.0, 1.0) == 0.0

    def test_invalid(self):
        with pytest.raises(ValueError):
            wce_bound(1.0, 0.0)
        with pytest.raises(ValueError):
            wce_bound(-1.0, 1.0)


class TestTensorWce:
    def test_dimension_one_collapse(self):
        assert tensor_wce(0.123, 2.0 ** -0.25, 1.0, 1) == pytest.approx(0.123, rel=1e-15)

    def test_exact_rule_stays_exact(self):
        assert tensor_wce(0.0, 2.0 ** -0.25, 1.0, 5) == 0.0

    def test_brute_force_2d(self, basis2):
        rule = gauss_rule(basis2, 5)
        space = SpaceWeight.polynomial(3.0)
        K = 400
        H = basis_matrix(basis2, rule.nodes, K)
        q = H @ rule.omega
        lam = (1.0 + np.arange(K + 1)) ** 3.0
        w1 = float(np.sum(q[10:] ** 2 / lam[10:]))
        c = 2.0 ** -0.25
        brute = 0.0
        for k1 in range(K + 1):
            for k2 in range(K + 1):
                err = q[k1] * q[k2] - (c * c if (k1 == 0 and k2 == 0) else 0.0)
                brute += err * err / (lam[k1] * lam[k2])
        closed = tensor_wce(w1, c, 1.0, 2)
        assert closed == pytest.approx(brute, rel=1e-10)

    @given(w=st.floats(1e-20, 1e3), d=st.integers(1, 7))
    @settings(max_examples=40, deadline=None)
    def test_matches_high_precision_binomial(self, w, d):
        import mpmath as mp

        got = tensor_wce(w, 2.0 ** -0.25, 1.0, d)
        with mp.workdps(40):
            base = mp.mpf(2.0 ** -0.25) ** 2
            ref = float((base + mp.mpf(w)) ** d - base ** d)
        assert got > 0
        assert got == pytest.approx(ref, rel=1e-13)

    @given(w=st.floats(1e-12, 10.0), d=st.integers(1, 6))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_one_dim_error(self, w, d):
        a = tensor_wce(w, 2.0 ** -0.25, 1.0, d)
        b = tensor_wce(2.0 * w, 2.0 ** -0.25, 1.0, d)
        assert b > a > 0

    def test_invalid(self):
        with pytest.raises(ValueError):
            tensor_wce(0.1, 2.0 ** -0.25, 1.0, 0)
        with pytest.raises(ValueError):
            tensor_wce(-0.1, 2.0 ** -0.25, 1.0, 2)


class TestSlopeFit:
    def test_examples(self):
        assert slope_fit([0.0, 1.0], [0.0, -1.0]) == pytest.approx((-1.0, 0.0))
        slope, intercept = slope_fit([1.0, 2.0, 3.0], [2.0, 4.0, 6.0])
        assert slope == pytest.approx(2.0, rel=1e-14)
        assert intercept == pytest.approx(0.0, abs=1e-13)

    def test_degenerate(self):
        with pytest.raises(ValueError):
            slope_fit([2.0, 2.0], [1.0, 5.0])
        with pytest.raises(ValueError):
            slope_fit([1.0], [1.0])

    @given(
        slope=st.floats(-5, 5),
        intercept=st.floats(-5, 5),
    )
    @settings(max_examples=40, deadline=None)
    def test_recovers_affine(self, slope, intercept):
        xs = np.array([0.0, 0.7, 1.9, 3.2])
        ys = slope * xs + intercept
        got_slope, got_intercept = slope_fit(xs, ys)
        assert got_slope == pytest.approx(slope, abs=1e-9)
        assert got_intercept == pytest.approx(intercept, abs=1e-9)


class TestWCETable:
    def test_clamps_tiny_negative(self):
        table = WCETable.from_rows({}, [3, 5, 7], [1e-2, -1e-16, 1e-4], axis="n")
        assert table.wce[1] == 0.0
        assert table.clamped == (5,)
        # fit used only the positive rows
        assert len(table.ns) == 3

    def test_rejects_significant_negative(self):
        with pytest.raises(ValueError):
            WCETable.from_rows({}, [3], [-1e-3], axis="n")

    def test_axis_validation(self):
        with pytest.raises(ValueError):
            WCETable.from_rows({}, [3, 5], [1.0, 0.1], axis="loglog")

    def test_csv_round_trip(self):
        table = WCETable.from_rows({}, [3, 5], [0.1234567890123456789, 3e-15], axis="n")
        lines = table.to_csv().strip().splitlines()
        assert lines[0] == "n,wce,log10_wce"
        for line, expected in zip(lines[1:], table.wce):
            parsed = float(line.split(",")[1])
            assert parsed == expected  # bit-identical after 17 significant digits

    def test_summary_schema(self):
        table = WCETable.from_rows({"space": "mse2", "seed": 7}, [3, 5], [1.0, 0.1],
                                   axis="n", theory_slope=-0.2)
        summary = table.summary()
        assert set(summary) == {
            "space", "params", "axis", "rows", "slope", "intercept",
            "theory_slope", "seed", "tool_version",
        }
        assert summary["seed"] == 7
        assert summary["space"] == "mse2"
