import math

import numpy as np
import pytest
from scipy import integrate, special

from latcrit import GammaDomainError, exp1, upper_gamma


def gamma_quadrature(a: float, x: float) -> float:
    """Adaptive-quadrature oracle for the upper incomplete gamma."""
    val, err = integrate.quad(lambda t: math.exp(-t) * t ** (a - 1.0), x, np.inf,
                              limit=400, epsabs=1e-300, epsrel=1e-13)
    assert err < 1e-11 * abs(val)
    return val


class TestClosedForms:
    @pytest.mark.parametrize("x", [0.1, 1.0, 3.7, 25.0])
    def test_a_equals_one(self, x):
        assert abs(upper_gamma(1.0, x) - math.exp(-x)) < 1e-13 * math.exp(-x)

    def test_small_x_limit_is_gamma(self):
        assert abs(upper_gamma(3.0, 1e-13) - 2.0) < 1e-11

    def test_exp1_at_one(self):
        oracle = gamma_quadrature(0.0, 1.0)
        assert abs(exp1(1.0) - oracle) < 1e-12
        assert abs(upper_gamma(0.0, 1.0) - oracle) < 1e-12

    def test_a_two_integration_by_parts(self):
        # Gamma(2, x) = (x + 1) e^{-x}
        for x in (0.2, 2.0, 9.0):
            assert abs(upper_gamma(2.0, x) - (x + 1) * math.exp(-x)) < 1e-14


class TestQuadratureGrid:
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.5, 3.0, 3.5])
    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 3.0, 10.0, 30.0])
    def test_relative_accuracy(self, a, x):
        oracle = gamma_quadrature(a, x)
        assert abs(upper_gamma(a, x) - oracle) <= 1e-12 * abs(oracle)

    @pytest.mark.parametrize("a", [0.5, 1.5, 3.0])
    @pytest.mark.parametrize("x", [0.3, 2.0, 8.0])
    def test_against_scipy(self, a, x):
        ref = float(special.gammaincc(a, x) * special.gamma(a))
        assert abs(upper_gamma(a, x) - ref) <= 1e-12 * abs(ref)


class TestNegativeOrder:
    # downward recurrence cancels one digit per unit of |a| near x ~ |a|;
    # the analytic-continuation paths only need ~1e-10 here
    @pytest.mark.parametrize("a", [-0.5, -1.5, -2.0])
    @pytest.mark.parametrize("x", [0.5, 2.0, 11.0])
    def test_recurrence_against_quadrature(self, a, x):
        oracle = gamma_quadrature(a, x)
        assert abs(upper_gamma(a, x) - oracle) <= 1e-10 * abs(oracle)

    @pytest.mark.parametrize("x", [0.5, 2.0, 11.0])
    def test_near_zero_order(self, x):
        # the zeta derivative oracle evaluates at a = +-1e-4
        oracle = gamma_quadrature(-1e-4, x)
        assert abs(upper_gamma(-1e-4, x) - oracle) <= 1e-9 * abs(oracle)


class TestDomain:
    def test_rejects_nonpositive_x(self):
        with pytest.raises(GammaDomainError):
            upper_gamma(1.0, 0.0)
        with pytest.raises(GammaDomainError):
            upper_gamma(1.0, -2.0)

    def test_both_branches_agree_at_crossover(self):
        for a in (0.7, 2.0, 3.5):
            x = a + 1.0
            from latcrit.specfun import _lower_series, _upper_cf
            lo = math.gamma(a) - _lower_series(a, x * (1 - 1e-13))
            hi = _upper_cf(a, x * (1 + 1e-13))
            assert abs(lo - hi) < 1e-12 * abs(hi)
