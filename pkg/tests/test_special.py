import math

import numpy as np
import pytest
from scipy import integrate

from lattice_casimir.errors import ConvergenceError, DomainError
from lattice_casimir.special import (
    QuadratureSpec,
    bessel_i,
    bessel_k,
    dilog,
    integrate_semiinfinite,
)


class TestBessel:
    def test_k0_integral_representation(self):
        # K_0(x) = int_0^inf exp(-x cosh t) dt
        for x in (0.3, 1.0, 4.0):
            ref, _ = integrate.quad(lambda t: math.exp(-x * math.cosh(t)), 0, 30)
            assert bessel_k(0, x) == pytest.approx(ref, rel=1e-12)

    def test_recurrence(self):
        # K_{v+1}(x) = K_{v-1}(x) + (2v/x) K_v(x); I with the minus sign
        for v in (1.0, 2.5):
            for x in (0.5, 2.0, 10.0):
                assert bessel_k(v + 1, x) == pytest.approx(
                    bessel_k(v - 1, x) + 2 * v / x * bessel_k(v, x), rel=1e-12
                )
                assert bessel_i(v + 1, x) == pytest.approx(
                    bessel_i(v - 1, x) - 2 * v / x * bessel_i(v, x), rel=1e-10
                )

    def test_wronskian(self):
        # I_v(x) K_{v+1}(x) + I_{v+1}(x) K_v(x) = 1/x
        for v in (0.0, 0.5, 3.0):
            for x in (0.2, 1.7, 8.0):
                w = bessel_i(v, x) * bessel_k(v + 1, x) + bessel_i(v + 1, x) * bessel_k(v, x)
                assert w == pytest.approx(1.0 / x, rel=1e-12)

    def test_half_integer_closed_form(self):
        # K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
        for x in (0.4, 3.0):
            assert bessel_k(0.5, x) == pytest.approx(
                math.sqrt(math.pi / (2 * x)) * math.exp(-x), rel=1e-13
            )

    def test_scaled_consistency(self):
        x = 30.0
        assert bessel_k(1, x, scaled=True) == pytest.approx(
            bessel_k(1, x) * math.exp(x), rel=1e-10
        )
        assert bessel_i(1, x, scaled=True) == pytest.approx(
            bessel_i(1, x) * math.exp(-x), rel=1e-10
        )

    def test_scaled_no_overflow(self):
        assert np.isfinite(bessel_k(0, 1e4, scaled=True))
        assert np.isfinite(bessel_i(0, 1e4, scaled=True))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bessel_k(-1, 1.0)
        with pytest.raises(DomainError):
            bessel_k(0, 0.0)
        with pytest.raises(DomainError):
            bessel_i(0, -1.0)


class TestDilog:
    def test_series(self):
        # Li2(x) = sum x^n / n^2
        for x in (0.1, 0.5, 0.9):
            ref = sum(x**n / n**2 for n in range(1, 2000))
            assert dilog(x) == pytest.approx(ref, rel=1e-12)

    def test_endpoints(self):
        assert dilog(0.0) == 0.0
        with pytest.raises(DomainError):
            dilog(1.0)
        with pytest.raises(DomainError):
            dilog(-0.1)


class TestQuadrature:
    def test_exponential(self):
        v, err = integrate_semiinfinite(lambda x: math.exp(-x), QuadratureSpec())
        assert v == pytest.approx(1.0, rel=1e-10)
        assert err < 1e-6

    def test_power_tail(self):
        # int_0^inf dx/(1+x^2) = pi/2
        v, _ = integrate_semiinfinite(lambda x: 1.0 / (1.0 + x * x), QuadratureSpec())
        assert v == pytest.approx(math.pi / 2, rel=1e-8)

    def test_log_endpoint(self):
        # int_0^inf ln(1 - e^{-x}) dx = -pi^2/6
        v, _ = integrate_semiinfinite(
            lambda x: math.log1p(-math.exp(-x)), QuadratureSpec(adaptive_tol=1e-10)
        )
        assert v == pytest.approx(-math.pi**2 / 6, rel=1e-8)

    def test_scale_invariance(self):
        f = lambda x: x * math.exp(-0.01 * x)
        v, _ = integrate_semiinfinite(f, QuadratureSpec(), scale=100.0)
        assert v == pytest.approx(1e4, rel=1e-8)

    def test_error_estimate_scales_with_tol(self):
        f = lambda x: math.exp(-x) * math.sin(3 * x) ** 2
        _, e1 = integrate_semiinfinite(f, QuadratureSpec(adaptive_tol=1e-6))
        _, e2 = integrate_semiinfinite(f, QuadratureSpec(adaptive_tol=5e-7))
        assert e2 < e1

    def test_worker_determinism(self):
        f = lambda x: math.exp(-x) / (1.0 + x)
        v1, _ = integrate_semiinfinite(f, QuadratureSpec(workers=1))
        v4, _ = integrate_semiinfinite(f, QuadratureSpec(workers=4))
        assert v1 == v4  # bit-identical ordered reduction

    def test_nonconvergence_raises_with_estimate(self):
        # a discontinuity placed at an irrational point defeats the
        # panel budget at an absurd tolerance
        f = lambda x: 1.0 if x < math.pi else math.exp(-x)
        spec = QuadratureSpec(adaptive_tol=1e-15, max_rounds=3, max_panels=8)
        with pytest.raises(ConvergenceError) as exc:
            integrate_semiinfinite(f, spec)
        assert exc.value.estimate is not None

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(xi_order=2)
        with pytest.raises(DomainError):
            QuadratureSpec(adaptive_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(workers=0)
        with pytest.raises(DomainError):
            integrate_semiinfinite(lambda x: 0.0, QuadratureSpec(), scale=-1.0)
