from fractions import Fraction

import pytest

from latcrit import (
    GramMatrix,
    HarmonicPoly,
    QSeries,
    double,
    enumerate_layers,
    harm2_basis,
    orthosum_A1,
    theta_product,
    theta_series,
    vanishing_report,
)
from latcrit.catalog import load_catalog

I2 = GramMatrix([[1, 0], [0, 1]])
A2 = GramMatrix([[2, 1], [1, 2]])
A1 = GramMatrix([[2]])


class TestQSeries:
    def test_rejects_off_grid_exponent(self):
        with pytest.raises(ValueError):
            QSeries({Fraction(1, 3): 1}, 5)

    def test_rejects_beyond_truncation(self):
        with pytest.raises(ValueError):
            QSeries({6: 1}, 5)

    def test_drops_zero_coefficients(self):
        s = QSeries({1: 0, 2: 3}, 5)
        assert s.coeffs == ((Fraction(2), Fraction(3)),)

    def test_str(self):
        s = QSeries({0: 1, 1: 2, 4: 2}, 9)
        assert str(s) == "1 + 2*q + 2*q^4"

    def test_json_round_trip(self):
        s = QSeries({0: 1, Fraction(3, 2): Fraction(-5, 2)}, 4)
        assert QSeries.from_json(s.to_json()) == s


class TestThetaSeries:
    def test_a1_classical(self):
        s = theta_series(A1, None, 9)
        assert str(s) == "1 + 2*q + 2*q^4 + 2*q^9"

    def test_a2_truncated(self):
        s = theta_series(A2, None, 2)
        assert s.coeff(0) == 1 and s.coeff(1) == 6 and s.coeff(2) == 0

    def test_odd_lattice_half_integer_exponents(self):
        s = theta_series(I2, None, 3)
        assert s.coeff(Fraction(1, 2)) == 4
        assert s.coeff(1) == 4

    def test_weighted_series_of_scaled_z2_vanishes(self):
        q = double(I2)
        for P in harm2_basis(2):
            assert theta_series(q, P, 20).is_zero()

    def test_coefficient_cardinality_identity(self):
        for name in ("sta3", "stb6", "stc12"):
            q = load_catalog().by_name(name).gram
            s = theta_series(q, None, 6)
            spec = enumerate_layers(q, 12)
            for lay in spec.layers:
                assert s.coeff(lay.norm / 2) == lay.cardinality

    def test_requires_integral(self):
        with pytest.raises(ValueError):
            theta_series(GramMatrix([["1/2", 0], [0, 1]]), None, 2)


class TestThetaProduct:
    def test_multiplicativity_a2_a1(self):
        lhs = theta_series(orthosum_A1(A2), None, 20)
        rhs = theta_product(theta_series(A2, None, 20), theta_series(A1, None, 20))
        assert lhs == rhs

    def test_multiplicativity_a1_a1(self):
        q = GramMatrix([[2, 0], [0, 2]])
        lhs = theta_series(q, None, 25)
        a1 = theta_series(A1, None, 25)
        assert lhs == theta_product(a1, a1)

    def test_identity_element(self):
        one = QSeries({0: 1}, 30)
        s = theta_series(A2, None, 12)
        assert theta_product(s, one) == s

    def test_truncation_is_min(self):
        a = QSeries({0: 1, 2: 1}, 8)
        b = QSeries({0: 1, 3: 1}, 5)
        p = theta_product(a, b)
        assert p.truncation == 5
        assert p.coeff(5) == 1 and p.coeff(2) == 1


class TestVanishingReport:
    def test_ste10a_doubled_all_vanish(self):
        q = double(load_catalog().by_name("ste10a").gram)
        rep = vanishing_report(q, 2, 60)
        assert len(rep) == 61
        assert all(flag for _, flag in rep)

    def test_diag24_fails_at_first_exponent(self):
        rep = vanishing_report(GramMatrix([[2, 0], [0, 4]]), 2, 5)
        flags = dict(rep)
        assert flags[0] is True
        assert flags[1] is False  # layer (x,x)=2 is {+-e1}

    def test_exponent_zero_vacuous(self):
        rep = vanishing_report(double(I2), 2, 3)
        assert rep[0] == (0, True)

    def test_matches_per_layer_verdicts(self):
        from latcrit import is_2_design_moment

        q = GramMatrix([[2, 0], [0, 4]])
        rep = dict(vanishing_report(q, 2, 6))
        spec = enumerate_layers(q, 12)
        for lay in spec.layers:
            k = int(lay.norm) // 2
            assert rep[k] == is_2_design_moment(lay, q)

    def test_requires_even(self):
        with pytest.raises(ValueError):
            vanishing_report(I2, 2, 4)
        with pytest.raises(ValueError):
            vanishing_report(double(I2), 4, 4)
