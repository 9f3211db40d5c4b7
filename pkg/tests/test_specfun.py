import cmath
import math

import numpy as np
import pytest

from xishift import (
    AccuracyError,
    DivergenceError,
    EvalSettings,
    ParameterError,
    PoleError,
    big_xi,
    eta_completed,
    gamma_c,
    hyp1f1,
    hyp1f1_asym_residual,
    rho_real,
    xi_c,
    zeta_c,
)

from ._oracles import (
    GAMMA_QUARTER,
    GAMMA_TABLE,
    HYP1F1_TABLE,
    XI_HALF,
    ZETA_HALF,
    ZETA_TABLE,
    ZETA_ZEROS,
    alternating_zeta,
)

RNG = np.random.default_rng(20260810)


class TestGamma:
    def test_half(self):
        assert abs(gamma_c(0.5).value - math.sqrt(math.pi)) < 1e-14

    def test_factorial(self):
        assert abs(gamma_c(5.0).value - 24.0) < 1e-12

    def test_quarter_vs_oracle(self):
        got = gamma_c(0.25)
        assert abs(got.value - GAMMA_QUARTER) <= max(got.abs_err_est, 1e-13)

    def test_frozen_table_and_error_honesty(self):
        for s, ref in GAMMA_TABLE.items():
            got = gamma_c(s)
            assert abs(got.value - ref) <= got.abs_err_est + 4e-16 * abs(ref), s

    def test_conjugate_symmetry(self):
        for _ in range(50):
            s = complex(RNG.uniform(-3, 4), RNG.uniform(-20, 20))
            if abs(s.imag) < 0.2:
                continue
            a = gamma_c(s).value
            b = gamma_c(s.conjugate()).value
            assert abs(b - a.conjugate()) <= 1e-12 * abs(a)

    def test_poles(self):
        for s in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                gamma_c(s)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma_c(200.0)


class TestZeta:
    def test_basel(self):
        assert abs(zeta_c(2.0).value - math.pi**2 / 6.0) < 1e-13

    def test_zero_point(self):
        assert abs(zeta_c(0.0).value - (-0.5)) < 1e-13

    def test_half_vs_alternating_oracle(self):
        got = zeta_c(0.5).value
        assert abs(got - alternating_zeta(0.5)) < 1e-12
        assert abs(got - ZETA_HALF) < 1e-12

    def test_alternating_oracle_on_strip(self):
        for s in (0.5 + 3j, 0.3 - 7.5j, 1.2 + 0.4j, 2.0 + 25j):
            got = zeta_c(s).value
            assert abs(got - alternating_zeta(s)) < 1e-11 * max(1.0, abs(got)), s

    def test_frozen_table_and_error_honesty(self):
        for s, ref in ZETA_TABLE.items():
            got = zeta_c(s)
            assert abs(got.value - ref) <= got.abs_err_est + 4e-16 * abs(ref), s

    def test_pole(self):
        with pytest.raises(PoleError):
            zeta_c(1.0)

    def test_accuracy_error_when_budget_exceeded(self):
        with pytest.raises(AccuracyError):
            zeta_c(0.5 + 1e7j)
        with pytest.raises(AccuracyError):
            zeta_c(0.5 + 40j, EvalSettings(max_terms=16))

    def test_conjugate_symmetry(self):
        for _ in range(30):
            s = complex(RNG.uniform(0, 3), RNG.uniform(0.5, 40))
            a = zeta_c(s).value
            b = zeta_c(s.conjugate()).value
            assert abs(b - a.conjugate()) <= 1e-11 * abs(a)


class TestEta:
    def test_functional_equation_sample(self):
        for _ in range(40):
            s = complex(RNG.uniform(0.2, 0.8), RNG.uniform(-30, 30))
            if abs(s) < 1e-3 or abs(s - 1.0) < 1e-3:
                continue
            e1 = eta_completed(s).value
            e2 = eta_completed(1.0 - s).value
            assert abs(e1 - e2) <= 1e-9 * max(1.0, abs(e1))

    def test_value_at_two(self):
        assert abs(eta_completed(2.0).value - math.pi / 6.0) < 1e-13

    def test_first_zero(self):
        assert abs(eta_completed(complex(0.5, ZETA_ZEROS[0])).value) < 1e-6

    def test_poles(self):
        for s in (0.0, 1.0):
            with pytest.raises(PoleError):
                eta_completed(s)

    def test_conjugate_symmetry(self):
        s = 0.7 + 9.3j
        assert abs(
            eta_completed(s.conjugate()).value - eta_completed(s).value.conjugate()
        ) < 1e-13 * abs(eta_completed(s).value)


class TestXiFamily:
    def test_removable_points(self):
        assert xi_c(0.0).value == 0.5
        assert xi_c(1.0).value == 0.5
        assert xi_c(1e-9).value == 0.5

    def test_half(self):
        got = xi_c(0.5)
        assert abs(got.value - XI_HALF) < 1e-12

    def test_big_xi_even_and_zero(self):
        assert abs(big_xi(3.7) - big_xi(-3.7)) <= 1e-12 * abs(big_xi(3.7))
        assert abs(big_xi(0.0) - XI_HALF) < 1e-12
        assert abs(big_xi(ZETA_ZEROS[0])) < 1e-6

    def test_rho_even_and_zero(self):
        assert abs(rho_real(5.1) - rho_real(-5.1)) <= 1e-12 * abs(rho_real(5.1))
        assert abs(rho_real(ZETA_ZEROS[0])) < 1e-6

    def test_conjugate_symmetry(self):
        s = 0.4 + 6.2j
        a = xi_c(s).value
        assert abs(xi_c(s.conjugate()).value - a.conjugate()) <= 1e-12 * abs(a)

    def test_definitional_identity(self):
        # Xi(t) = (1/2)(1/2 + it)(-1/2 + it) rho(t)
        t = 3.0
        s_plus = complex(0.5, t)
        lhs = big_xi(t)
        rhs = (0.5 * s_plus * (s_plus - 1.0) * rho_real(t)).real
        assert abs(lhs - rhs) < 1e-10
        # and xi(s) = (1/2) s (s-1) eta(s) off the line
        s = 0.3 + 2.2j
        assert abs(xi_c(s).value - 0.5 * s * (s - 1) * eta_completed(s).value) < 1e-12

    def test_exponential_decay_bound(self):
        # |Xi(t)| e^(pi t/4) / t^6 stays below its t=20 value onward
        vals = [abs(big_xi(t)) * math.exp(math.pi * t / 4.0) / t**6 for t in (20, 30, 40, 50)]
        assert all(v <= vals[0] * (1 + 1e-9) for v in vals[1:])


class TestHyp1F1:
    def test_empty_series(self):
        got = hyp1f1(0.3 + 0.7j, 0.5, 0.0)
        assert got.value == 1.0 and got.abs_err_est == 0.0

    def test_equal_parameters_give_exp(self):
        got = hyp1f1(0.5, 0.5, 1.0)
        assert abs(got.value - math.e) < 1e-13

    def test_kummer_transformation_spec_point(self):
        a, b, w = 0.3 + 0.7j, 0.5, 0.2 - 0.4j
        lhs = hyp1f1(a, b, w).value
        rhs = cmath.exp(w) * hyp1f1(b - a, b, -w).value
        assert abs(lhs - rhs) < 1e-10

    def test_kummer_invariance_random(self):
        for _ in range(100):
            a = complex(*RNG.uniform(-5, 5, 2) * np.sqrt(0.5))
            w = complex(*RNG.uniform(-5, 5, 2) * np.sqrt(0.5))
            b = complex(RNG.uniform(0.3, 3.0), RNG.uniform(-1, 1))
            lhs = hyp1f1(a, b, w).value
            rhs = cmath.exp(w) * hyp1f1(b - a, b, -w).value
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs)), (a, b, w)

    def test_frozen_table_and_error_honesty(self):
        for (a, b, w), ref in HYP1F1_TABLE.items():
            got = hyp1f1(a, b, w)
            assert abs(got.value - ref) <= got.abs_err_est + 4e-16 * abs(ref), (a, b, w)

    def test_polynomial_termination(self):
        # a a nonpositive integer truncates the series exactly
        got = hyp1f1(-3.0, 0.5, 2.5)
        brute = sum(
            math.prod(-3.0 + i for i in range(n)) * 2.5**n
            / (math.prod(0.5 + i for i in range(n)) * math.factorial(n))
            for n in range(4)
        )
        assert abs(got.value - brute) < 1e-13

    def test_parameter_error(self):
        for b in (0.0, -1.0, -6.0):
            with pytest.raises(ParameterError):
                hyp1f1(0.3, b, 0.1)

    def test_divergence_error(self):
        with pytest.raises(DivergenceError):
            hyp1f1(1.0, 0.5, 30.0, EvalSettings(max_terms=16))


class TestAsymptoticResidual:
    def test_z_zero_collapses(self):
        assert hyp1f1_asym_residual(10.0, 0.0) == 0.0

    def test_bounded_family(self):
        vals = [hyp1f1_asym_residual(complex(0, -t), 0.5) for t in (10.0, 20.0, 40.0)]
        assert all(math.isfinite(v) for v in vals)
        assert max(vals) < 5.0

    def test_growth_comparison(self):
        z = 0.3 + 0.1j
        r25 = hyp1f1_asym_residual(25.0, z)
        r100 = hyp1f1_asym_residual(100.0, z)
        assert math.isfinite(r25) and r25 < 10.0 * max(r100, 0.1)

    def test_domain(self):
        from xishift import DomainError

        with pytest.raises(DomainError):
            hyp1f1_asym_residual(1.0, 0.3)
