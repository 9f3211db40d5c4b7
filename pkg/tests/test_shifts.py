import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from xishift import (
    ConfigError,
    DegenerateError,
    EvalSettings,
    PoleError,
    ShiftConfig,
    eta_completed,
    f_z,
    f_z_critical,
    hyp1f1,
    make_config,
    moment_closed_form,
    moment_numeric,
    moment_params,
    moment_series_rhs,
    polar_shift,
    validate_config,
)
from xishift.shifts import dominant_index, fz_line_vec

from ._oracles import ZETA_ZEROS

RNG = np.random.default_rng(99)
HARDY = make_config([1.0], [0.0], 0.0)
TWO_TERM = make_config([1.0, 0.5], [0.0, 1.0], 0.3 + 0.1j)


class TestConfig:
    def test_hardy_is_valid(self):
        assert validate_config(HARDY) is HARDY
        assert dominant_index(HARDY) == 0

    def test_duplicate_shifts_rejected(self):
        with pytest.raises(ConfigError):
            make_config([1.0, 0.5], [0.3, 0.3], 0.0)

    def test_tied_maximum_rejected(self):
        with pytest.raises(ConfigError):
            make_config([1.0, 0.5], [0.3, -0.3], 0.0)

    def test_zero_coefficient_rejected(self):
        with pytest.raises(ConfigError):
            make_config([1.0, 0.0], [0.1, 0.2], 0.0)

    def test_z_outside_region_rejected(self):
        with pytest.raises(ConfigError):
            make_config([1.0], [0.0], 2.0 + 2.0j)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(ShiftConfig((1.0,), (0.0, 1.0), 0.0))

    def test_dominant_index(self):
        cfg = make_config([1.0, 1.0, 1.0], [0.5, -2.0, 1.0], 0.0)
        assert dominant_index(cfg) == 1


class TestFz:
    def test_hardy_reduction_is_twice_eta(self):
        for s in (0.3 + 7.0j, 0.8 - 2.5j, 0.5 + 14.0j):
            got = f_z(s, HARDY).value
            ref = 2.0 * eta_completed(s).value
            assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref)), s

    def test_bracket_conjugacy_on_line(self):
        s, lam, z = 0.5 + 3.0j, 0.7, 0.4 + 0.2j
        first = hyp1f1((1 - (s + 1j * lam)) / 2.0, 0.5, z * z / 4.0).value
        second = hyp1f1(
            (1 - (s.conjugate() - 1j * lam)) / 2.0, 0.5, z.conjugate() ** 2 / 4.0
        ).value
        assert abs(second - first.conjugate()) < 1e-12

    def test_bracket_conjugacy_off_line(self):
        # at general s the two confluent factors are still a conjugate pair
        # in the combined (s, z) -> (conj s, conj z) sense
        s, lam, z = 0.3 + 2.0j, 0.4, 0.2 + 0.3j
        f1 = hyp1f1((1 - (s + 1j * lam)) / 2.0, 0.5, z * z / 4.0).value
        f1_mirror = hyp1f1(
            (1 - (s.conjugate() - 1j * lam)) / 2.0, 0.5, z.conjugate() ** 2 / 4.0
        ).value
        assert abs(f1_mirror - f1.conjugate()) < 1e-12

    def test_two_term_hand_assembly(self):
        s = 0.5 + 5.0j
        z = TWO_TERM.z
        total = 0.0j
        for c, lam in zip(TWO_TERM.coefficients, TWO_TERM.shifts):
            sj = s + 1j * lam
            bracket = (
                hyp1f1((1 - sj) / 2.0, 0.5, z * z / 4.0).value
                + hyp1f1((1 - (s.conjugate() - 1j * lam)) / 2.0, 0.5,
                         z.conjugate() ** 2 / 4.0).value
            )
            total += c * eta_completed(sj).value * bracket
        got = f_z(s, TWO_TERM).value
        assert abs(got - total) <= 1e-11 * max(1.0, abs(total))

    def test_pole_error(self):
        with pytest.raises(PoleError):
            f_z(complex(0.0, -0.3), make_config([1.0], [0.3], 0.0))

    def test_tail_bound_enters_error(self):
        cfg = make_config([1.0], [0.0], 0.0, tail_bound=0.125)
        base = f_z(0.5 + 2.0j, HARDY)
        padded = f_z(0.5 + 2.0j, cfg)
        assert padded.abs_err_est > base.abs_err_est

    def test_z_zero_reduction_pointwise(self):
        cfg = make_config([0.7, -0.2], [0.1, 1.3], 0.0)
        for t in (1.0, 8.0, 20.0):
            s = 0.5 + 1j * t
            got = f_z(s, cfg).value
            ref = 2.0 * sum(
                c * eta_completed(s + 1j * lam).value
                for c, lam in zip(cfg.coefficients, cfg.shifts)
            )
            assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))


class TestCriticalLine:
    def test_hardy_vanishes_at_zeta_zero(self):
        assert abs(f_z_critical(ZETA_ZEROS[0], HARDY)) < 1e-5

    def test_matches_re_fz(self):
        cfg = make_config([1.0, -0.5], [0.2, 0.9], 0.5)
        for t in (2.0, 14.1, 33.3):
            a = f_z_critical(t, cfg)
            b = f_z(0.5 + 1j * t, cfg).value.real
            assert abs(a - b) <= 1e-12 * (1.0 + abs(a))

    def test_reality_residue_bound_on_grids(self):
        for cfg in (HARDY, TWO_TERM, make_config([1.0, 0.5, 0.25], [0.0, 1.0, 2.0], 0.5 + 0.25j)):
            ts = np.linspace(0.0, 40.0, 401)
            re, im, _ = fz_line_vec(ts, cfg)
            assert np.all(np.abs(im) <= 1e-9 * (1.0 + np.hypot(re, im))), cfg

    def test_term_cross_check(self):
        cfg = make_config([1.0, -0.5], [0.2, 0.9], 0.5 + 0.25j)
        t = 2.0
        z = cfg.z
        ref = 2.0 * sum(
            c * eta_completed(0.5 + 1j * (t + lam)).value.real
            * hyp1f1((1 - 2j * (t + lam)) / 4.0, 0.5, z * z / 4.0).value.real
            for c, lam in zip(cfg.coefficients, cfg.shifts)
        )
        assert abs(f_z_critical(t, cfg) - ref) <= 1e-10 * (1.0 + abs(ref))


class TestPolarAndParams:
    def test_polar_examples(self):
        ps = polar_shift(0.0)
        assert ps.r == pytest.approx(0.5) and ps.theta == pytest.approx(math.pi / 2)
        ps = polar_shift(0.5)
        assert ps.r == pytest.approx(math.sqrt(2) / 2) and ps.theta == pytest.approx(3 * math.pi / 4)
        ps = polar_shift(-0.5)
        assert ps.theta == pytest.approx(math.pi / 4)

    @hyp_settings(max_examples=200, deadline=None)
    @given(st.floats(-10, 10))
    def test_polar_round_trip(self, lam):
        ps = polar_shift(lam)
        back = ps.r * cmath.exp(1j * ps.theta)
        assert abs(back - (0.5j - lam)) < 1e-14 * (1.0 + abs(lam))
        assert 0.0 < ps.theta < math.pi

    def test_moment_params_examples(self):
        p = moment_params(0.0)
        assert (p.u, p.v, p.w, p.beta) == (1.0, 0.0, 1.0, 0.0)
        p = moment_params(1.0)
        assert p.v == 0.0 and p.beta == 0.0
        assert p.u == pytest.approx(1.0 + math.exp(0.125) * math.sinh(0.125))

    @hyp_settings(max_examples=200, deadline=None)
    @given(st.floats(-1.2, 1.2), st.floats(-1.2, 1.2))
    def test_moment_params_consistency(self, x, y):
        z = complex(x, y)
        try:
            p = moment_params(z)
        except DegenerateError:
            return
        assert abs(p.w - math.hypot(p.u, p.v)) < 1e-14
        assert abs(p.w * math.cos(p.beta) - p.u) < 5e-14
        assert abs(p.w * math.sin(p.beta) - p.v) < 5e-14
        assert 0.0 <= p.beta < 2.0 * math.pi

    def test_degenerate_w(self):
        z = math.sqrt(2.0 * math.pi) * (1.0 + 1.0j)  # e^(z^2/4) = -1
        with pytest.raises(DegenerateError):
            moment_params(z)


class TestMoments:
    def test_closed_form_hardy(self):
        got = moment_closed_form(0, HARDY)
        assert abs(got + 4.0 * math.pi * math.cos(math.pi / 8.0)) < 1e-12

    def test_closed_form_real_z_prefactor(self):
        # for real z the closed form factorizes into (1 + e^(z^2/8) sinh(z^2/8))
        # times the z = 0 cosine sum
        cfg = make_config([1.0, 0.5], [0.0, 1.0], 0.7)
        m = 1
        pref = 1.0 + math.exp(0.7**2 / 8.0) * math.sinh(0.7**2 / 8.0)
        base = sum(
            c * math.exp(-math.pi * lam / 4.0) * polar_shift(lam).r ** (2 * m)
            * math.cos(math.pi / 8.0 + 2 * m * polar_shift(lam).theta)
            for c, lam in zip(cfg.coefficients, cfg.shifts)
        )
        assert abs(moment_closed_form(m, cfg) - pref * (-4.0 * math.pi) * base) < 1e-12

    def test_closed_form_assembled_complex_z(self):
        cfg = make_config([1.0, 0.5], [0.0, 1.0], 0.3 + 0.1j)
        p = moment_params(cfg.z)
        total = 0.0
        for c, lam in zip(cfg.coefficients, cfg.shifts):
            ps = polar_shift(lam)
            total += c * math.exp(-math.pi * lam / 4.0) * ps.r ** 2 * math.cos(
                math.pi / 8.0 + p.beta + 2.0 * ps.theta
            )
        assert moment_closed_form(1, cfg) == pytest.approx(-4.0 * math.pi * p.w * total)

    def test_series_identity_two_term(self):
        st_q = EvalSettings(quad_abs_tol=1e-9)
        cfg = make_config([1.0, 0.5], [0.0, 1.0], 0.3 - 0.2j)
        for m, tol in ((0, 1e-5), (1, 1e-4)):
            lhs = moment_numeric(m, 0.2, cfg, st_q)
            rhs = moment_series_rhs(m, 0.2, cfg)
            assert abs(lhs - rhs) < tol, (m, lhs, rhs)

    def test_linearity_in_coefficients(self):
        st_q = EvalSettings(quad_abs_tol=1e-9)
        cfg1 = make_config([1.0, 0.5], [0.0, 1.0], 0.3 - 0.2j)
        cfg2 = make_config([2.0, 1.0], [0.0, 1.0], 0.3 - 0.2j)
        v1 = moment_numeric(0, 0.1, cfg1, st_q)
        v2 = moment_numeric(0, 0.1, cfg2, st_q)
        assert abs(v2 - 2.0 * v1) <= 1e-12 * (1.0 + abs(v2))
