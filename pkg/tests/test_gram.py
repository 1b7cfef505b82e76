from fractions import Fraction

import numpy as np
import pytest

from latcrit import (
    GramError,
    GramMatrix,
    ParityError,
    TangentDirection,
    determinant,
    double,
    exp_map,
    gram_from_json,
    gram_from_text,
    gram_inverse,
    is_even,
    level,
    orthosum_A1,
    tangent_project,
)
from latcrit.catalog import load_catalog

from helpers import bareiss_determinant, random_rational_spd

I2 = GramMatrix([[1, 0], [0, 1]])
A2 = GramMatrix([[2, 1], [1, 2]])
A1 = GramMatrix([[2]])


def cofactor_inverse_2x2(Q: GramMatrix):
    (a, b), (_, d) = Q.entries
    det = a * d - b * b
    return [[d / det, -b / det], [-b / det, a / det]]


class TestConstruction:
    def test_rejects_asymmetric(self):
        with pytest.raises(GramError):
            GramMatrix([[1, 2], [0, 1]])

    def test_rejects_indefinite(self):
        with pytest.raises(GramError):
            GramMatrix([[1, 2], [2, 1]])

    def test_rejects_nonsquare(self):
        with pytest.raises(GramError):
            GramMatrix([[1, 0, 0], [0, 1, 0]])

    def test_accepts_rational_strings(self):
        q = GramMatrix([["1/2", 0], [0, "3/2"]])
        assert q.entries[0][0] == Fraction(1, 2)


class TestInverse:
    def test_identity(self):
        I3 = GramMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert gram_inverse(I3) == I3

    def test_diagonal(self):
        assert gram_inverse(GramMatrix([[1, 0], [0, 2]])) == GramMatrix([["1", 0], [0, "1/2"]])

    def test_a2_against_cofactor_oracle(self):
        assert gram_inverse(A2) == GramMatrix(cofactor_inverse_2x2(A2))
        assert gram_inverse(A2).entries[0][0] == Fraction(2, 3)

    def test_involution_on_random_rationals(self):
        rng = np.random.default_rng(3)
        for n in (2, 3, 4):
            for _ in range(4):
                Q = random_rational_spd(n, rng)
                assert gram_inverse(gram_inverse(Q)) == Q

    def test_det_of_inverse_is_reciprocal(self):
        for e in load_catalog().entries[:10]:
            assert determinant(gram_inverse(e.gram)) == 1 / determinant(e.gram)


class TestDeterminant:
    def test_identity(self):
        for n in (1, 2, 5):
            assert determinant(GramMatrix([[int(i == j) for j in range(n)]
                                           for i in range(n)])) == 1

    def test_a2_cofactor(self):
        assert determinant(A2) == 2 * 2 - 1 * 1 == 3

    def test_catalog_against_bareiss_oracle(self):
        cat = load_catalog()
        assert determinant(cat.by_name("stc12").gram) == 4
        for e in cat.entries:
            assert determinant(e.gram) == bareiss_determinant(e.gram.entries)


class TestParityAndLevel:
    def test_is_even_examples(self):
        assert not is_even(I2)
        assert is_even(A2)
        q = load_catalog().by_name("ste10a").gram
        assert not is_even(q)           # odd diagonal 3
        assert is_even(double(q))

    def test_non_integral_is_not_even(self):
        assert not is_even(GramMatrix([["1/2", 0], [0, "1/2"]]))

    def level_oracle(self, Q):
        # increasing search straight from the definition
        qinv = gram_inverse(Q)
        l = 1
        while True:
            scaled = [[v * l for v in row] for row in qinv.entries]
            if all(v.denominator == 1 for row in scaled for v in row) and all(
                int(scaled[i][i]) % 2 == 0 for i in range(Q.n)
            ):
                return l
            l += 1

    def test_level_examples(self):
        assert level(A1) == 4 == self.level_oracle(A1)
        twoA2 = GramMatrix([[4, 2], [2, 4]])
        assert level(twoA2) == 6 == self.level_oracle(twoA2)
        assert level(double(load_catalog().by_name("ste10a").gram)) == 20

    def test_level_rejects_odd(self):
        with pytest.raises(ParityError):
            level(I2)

    def test_level_of_double_is_twice(self):
        # exhaustively over the embedded catalogue, on the even working form
        for e in load_catalog().entries:
            work = e.gram if is_even(e.gram) else double(e.gram)
            assert level(double(work)) == 2 * level(work)


class TestBlockOps:
    def test_double(self):
        assert double(I2) == GramMatrix([[2, 0], [0, 2]])

    def test_double_of_integral_is_even(self):
        for e in load_catalog().entries:
            assert is_even(double(e.gram))
            level(double(e.gram))  # never raises

    def test_orthosum(self):
        assert orthosum_A1(A2) == GramMatrix([[2, 1, 0], [1, 2, 0], [0, 0, 2]])

    def test_orthosum_determinant_doubles(self):
        q = load_catalog().by_name("stb6").gram  # A3
        assert determinant(orthosum_A1(q)) == 2 * determinant(q)

    def test_orthosum_preserves_parity(self):
        for name in ("stb6", "ste10a"):
            q = load_catalog().by_name(name).gram
            assert is_even(orthosum_A1(q)) == is_even(q)


class TestExpMap:
    def test_zero_direction(self):
        H = TangentDirection(base=A2, H=np.zeros((2, 2)))
        assert np.allclose(exp_map(A2, H, 1.0), A2.to_float(), atol=1e-15)

    def test_commuting_diagonal(self):
        H = TangentDirection(base=I2, H=np.diag([1.0, -1.0]))
        out = exp_map(I2, H, 0.3)
        expect = np.diag([np.exp(0.3), np.exp(-0.3)])
        assert np.allclose(out, expect, atol=1e-14)
        assert abs(np.linalg.det(out) - 1.0) < 1e-14

    def test_offdiagonal_against_series_oracle(self):
        Hm = np.array([[0.0, 1.0], [1.0, 0.0]])
        H = TangentDirection(base=I2, H=Hm)
        out = exp_map(I2, H, 0.1)
        # truncated power series of expm(0.1 * Hm)
        series = np.eye(2)
        term = np.eye(2)
        for k in range(1, 30):
            term = term @ (0.1 * Hm) / k
            series = series + term
        assert np.allclose(out, series, atol=1e-14)
        assert abs(out[0, 1] - np.sinh(0.1)) < 1e-14
        assert np.allclose(out, out.T, atol=1e-14)

    def test_det_preserved_for_tangent_directions(self):
        rng = np.random.default_rng(11)
        for Q in (A2, GramMatrix([[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 2, 1], [1, 1, 1, 2]])):
            d0 = float(determinant(Q))
            for _ in range(5):
                S = rng.standard_normal((Q.n, Q.n))
                H = tangent_project(Q, 0.5 * (S + S.T))
                t = float(rng.uniform(-0.5, 0.5))
                d = np.linalg.det(exp_map(Q, H, t))
                assert abs(d - d0) / d0 < 1e-10

    def test_base_mismatch_rejected(self):
        H = TangentDirection(base=I2, H=np.zeros((2, 2)))
        with pytest.raises(GramError):
            exp_map(A2, H, 1.0)


class TestTangentProject:
    def test_parallel_component_removed(self):
        qinv = gram_inverse(A2).to_float()
        H = tangent_project(A2, 3.7 * qinv)
        assert np.allclose(H.H, 0.0, atol=1e-14)

    def test_idempotent_and_linear(self):
        rng = np.random.default_rng(5)
        S1 = rng.standard_normal((2, 2))
        S1 = 0.5 * (S1 + S1.T)
        S2 = rng.standard_normal((2, 2))
        S2 = 0.5 * (S2 + S2.T)
        P1 = tangent_project(A2, S1).H
        assert np.allclose(tangent_project(A2, P1).H, P1, atol=1e-14)
        combo = tangent_project(A2, 2.0 * S1 - 3.0 * S2).H
        assert np.allclose(combo, 2.0 * P1 - 3.0 * tangent_project(A2, S2).H, atol=1e-13)

    def test_worked_example(self):
        out = tangent_project(I2, np.array([[2.0, 0.0], [0.0, 0.0]]))
        assert np.allclose(out.H, np.diag([1.0, -1.0]), atol=1e-15)

    def test_direction_validation(self):
        with pytest.raises(GramError):
            TangentDirection(base=I2, H=np.array([[1.0, 0.0], [0.0, 1.0]]))


class TestSerialization:
    def test_json_round_trip(self):
        q = GramMatrix([["1/2", "-1/4"], ["-1/4", "2"]], name="demo")
        back = gram_from_json(q.to_json())
        assert back == q and back.name == "demo"

    def test_plain_text_format(self):
        q = gram_from_text("2\n2 1\n1 2\n")
        assert q == A2

    def test_text_with_rationals(self):
        q = gram_from_text("2  1/2 0  0 3/2")
        assert q.entries[1][1] == Fraction(3, 2)

    def test_json_dimension_check(self):
        with pytest.raises(GramError):
            gram_from_json('{"n": 3, "gram": [[1, 0], [0, 1]]}')
