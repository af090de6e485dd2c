"""Special functions: values against independent oracles, bound brackets."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rieszmax.errors import DomainError
from rieszmax.specfun import (BoundCheck, QuadratureConfig, bessel_envelope,
                              bessel_j, gautschi_bounds, log_gamma,
                              sine_integral, stirling_bounds)

# Oracle values, frozen.  J_{1/2}(1) from the closed form sqrt(2/(pi t)) sin t;
# the others from an independent Bessel implementation; Si(pi) from
# high-precision quadrature of sin(s)/s.
J_HALF_AT_1 = 0.6713967071418031
J_2_AT_5 = 0.04656511627775229
J_5_AT_10 = -0.2340615281867936
J_3_AT_7_5 = -0.2580609131934603
SI_AT_PI = 1.8519370519824658
GAMMA_5_OVER_4_5 = 2.0633219055460805


class TestQuadratureConfig:
    def test_defaults_valid(self):
        q = QuadratureConfig()
        assert q.abs_tol > 0 and q.tail_tol > 0 and q.max_panels >= 8

    @pytest.mark.parametrize("kwargs", [
        {"abs_tol": 0.0}, {"abs_tol": -1e-9}, {"tail_tol": 0.0},
        {"max_panels": 7},
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureConfig(**kwargs)


class TestBoundCheck:
    def test_compare_holds(self):
        chk = BoundCheck.compare(1.0, 0.5, 2.0)
        assert chk.holds and chk.margin == 1.5

    def test_compare_fails(self):
        chk = BoundCheck.compare(1.0, -3.0, 2.0)
        assert not chk.holds and chk.margin == -1.0


class TestBesselJ:
    def test_j0_at_zero_is_one(self):
        assert bessel_j(0.0, 0.0) == 1.0

    def test_positive_order_at_zero_is_zero(self):
        assert bessel_j(2.0, 0.0) == 0.0

    def test_half_order_closed_form(self):
        assert bessel_j(0.5, 1.0) == pytest.approx(J_HALF_AT_1, abs=1e-8)

    @pytest.mark.parametrize("nu, t, expected", [
        (2.0, 5.0, J_2_AT_5),
        (5.0, 10.0, J_5_AT_10),
        (3.0, 7.5, J_3_AT_7_5),
    ])
    def test_oracle_values(self, nu, t, expected):
        assert bessel_j(nu, t) == pytest.approx(expected, abs=1e-8)

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            bessel_j(-0.5, 1.0)

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            bessel_j(1.0, -1.0)

    def test_large_argument(self):
        # stays accurate deep into the oscillatory regime
        val = bessel_j(2.0, 200.0)
        assert abs(val) <= 1.0
        assert val == pytest.approx(0.014894394548741308, abs=1e-7)

    def test_recurrence_derivative_identity(self):
        # d/dt (J_nu(t) / t^nu) = -J_{nu+1}(t) / t^nu
        nu, t, h = 2.0, 3.0, 1e-5
        lhs = (bessel_j(nu, t + h) / (t + h) ** nu
               - bessel_j(nu, t - h) / (t - h) ** nu) / (2 * h)
        rhs = -bessel_j(nu + 1.0, t) / t ** nu
        assert lhs == pytest.approx(rhs, abs=1e-5)

    @settings(max_examples=40, deadline=None)
    @given(nu=st.floats(0.0, 20.0), t=st.floats(0.0, 50.0))
    def test_unit_bound(self, nu, t):
        assert abs(bessel_j(nu, t)) <= 1.0 + 1e-10


class TestBesselEnvelope:
    def test_zero_argument(self):
        assert bessel_envelope(2.0, 0.0) == 0.0

    def test_direct_formula_value(self):
        expected = 2100.0 * (4.0 / (4.0 * math.gamma(2.5)
                                    * math.sqrt(2.0 * math.pi))) \
            * (math.exp(-2.0 / math.sqrt(2.0)) + math.exp(-0.4))
        assert bessel_envelope(2.0, 2.0) == pytest.approx(expected, rel=1e-12)

    def test_nonpositive_order_rejected(self):
        with pytest.raises(DomainError):
            bessel_envelope(0.0, 1.0)

    @pytest.mark.parametrize("nu", [2.0, 3.0, 5.0, 10.0])
    def test_dominates_bessel_on_sample(self, nu):
        for t in np.linspace(0.0, 30.0, 16):
            assert abs(bessel_j(nu, float(t))) \
                <= bessel_envelope(nu, float(t)) + 1e-12

    def test_no_overflow_large_parameters(self):
        assert math.isfinite(bessel_envelope(64.0, 1e4))


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)

    def test_at_half(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)),
                                               rel=1e-12)

    def test_half_integer_recursion(self):
        assert log_gamma(2.5) == pytest.approx(
            math.log(3.0 * math.sqrt(math.pi) / 4.0), rel=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)


class TestStirlingBounds:
    @pytest.mark.parametrize("x, gamma_x", [
        (1.0, 1.0),
        (0.5, math.sqrt(math.pi)),
        (10.0, 362880.0),
    ])
    def test_brackets_gamma(self, x, gamma_x):
        lower, upper = stirling_bounds(x)
        assert lower <= gamma_x <= upper

    def test_known_values_at_one(self):
        lower, upper = stirling_bounds(1.0)
        assert lower == pytest.approx(math.sqrt(2.0 * math.pi) / math.e,
                                      rel=1e-12)
        assert upper == pytest.approx(lower * math.exp(1.0 / 12.0), rel=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            stirling_bounds(-1.0)


class TestGautschiBounds:
    def test_half_integer_case(self):
        lower, upper = gautschi_bounds(1.0, 0.5)
        assert lower == pytest.approx(1.0)
        assert upper == pytest.approx(math.sqrt(2.0))
        assert lower < 2.0 / math.sqrt(math.pi) < upper

    def test_x4_case(self):
        lower, upper = gautschi_bounds(4.0, 0.5)
        assert lower == pytest.approx(2.0)
        assert upper == pytest.approx(math.sqrt(5.0))
        assert lower < GAMMA_5_OVER_4_5 < upper

    def test_s_near_one(self):
        lower, upper = gautschi_bounds(1.0, 0.999)
        assert lower < 1.001 and upper < 1.001
        assert lower <= math.gamma(2.0) / math.gamma(1.999) <= upper

    @pytest.mark.parametrize("s", [0.0, 1.0, -0.5, 2.0])
    def test_invalid_s_rejected(self, s):
        with pytest.raises(DomainError):
            gautschi_bounds(1.0, s)

    @settings(max_examples=40, deadline=None)
    @given(x=st.floats(0.01, 50.0), s=st.floats(0.01, 0.99))
    def test_brackets_gamma_ratio(self, x, s):
        lower, upper = gautschi_bounds(x, s)
        ratio = math.exp(log_gamma(x + 1.0) - log_gamma(x + s))
        assert lower <= ratio * (1 + 1e-12)
        assert ratio <= upper * (1 + 1e-12)


class TestSineIntegral:
    def test_at_zero(self):
        assert sine_integral(0.0) == 0.0

    def test_asymptote(self):
        assert abs(sine_integral(100.0) - math.pi / 2.0) <= 0.011

    def test_at_pi(self):
        assert sine_integral(math.pi) == pytest.approx(SI_AT_PI, rel=1e-10)

    def test_vectorized(self):
        out = sine_integral(np.array([0.0, math.pi]))
        assert out.shape == (2,)
        assert out[1] == pytest.approx(SI_AT_PI, rel=1e-10)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            sine_integral(-1.0)
