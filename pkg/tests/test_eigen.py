import random

import pytest

from isofusion.algebra import basis_vector, build_algebra, indicator_vector, left_regular_matrix
from isofusion.eigen import (
    CyclotomicVerdict,
    cyclotomic_verdict,
    is_diagonalizable,
    matrix_minimal_polynomial,
    minimal_polynomial,
)
from isofusion.engine import fused_algebra, trivial_partition
from isofusion.partitions import normalize
from isofusion.polynomials import (
    PolynomialError,
    cyclotomic_polynomial,
    divides,
    parse_polynomial,
    poly,
)
from isofusion.schemes import algebra_from_relations

from oracles import charpoly_faddeev, random_scheme_corpus


@pytest.fixture(scope="module")
def pentagon(request):
    c5 = request.getfixturevalue("c5")
    return fused_algebra(c5, normalize([[0], [1, 4], [2, 3]], 5))


class TestMinimalPolynomial:
    def test_c2_involution(self, c2):
        assert minimal_polynomial(c2, basis_vector(2, 1)) == parse_polynomial("x^2 - 1")

    def test_pentagon_class(self, pentagon):
        mp = minimal_polynomial(pentagon, basis_vector(3, 1))
        assert mp == parse_polynomial("x^3 - x^2 - 3x + 2")

    def test_trivial_fusion_element(self, c5):
        t = fused_algebra(c5, trivial_partition(c5))
        assert minimal_polynomial(t, basis_vector(2, 1)) == parse_polynomial("x^2 - 3x - 4")

    def test_identity_element(self, c5):
        e = indicator_vector(5, c5.identity_support)
        assert minimal_polynomial(c5, e) == parse_polynomial("x - 1")

    def test_divides_characteristic_polynomial(self):
        for m in random_scheme_corpus(777, 5, max_rank=8):
            alg = algebra_from_relations(m)
            rng = random.Random(m.order * 31 + m.rank)
            i = rng.randrange(alg.rank)
            v = basis_vector(alg.rank, i)
            mp = minimal_polynomial(alg, v)
            cp = charpoly_faddeev(left_regular_matrix(alg, v))
            assert divides(mp, cp)


class TestIsDiagonalizable:
    def test_c2(self, c2):
        assert is_diagonalizable(c2, basis_vector(2, 1))

    def test_nilpotent(self):
        alg = build_algebra({(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1}, {0}, rank=2)
        assert not is_diagonalizable(alg, basis_vector(2, 1))

    def test_pentagon(self, pentagon):
        assert is_diagonalizable(pentagon, basis_vector(3, 1))


class TestCyclotomicVerdict:
    def test_quadratic_rule(self):
        v = cyclotomic_verdict(parse_polynomial("x^2 + x - 1"))
        assert v.value == "cyclotomic"

    def test_x3_minus_3(self):
        v = cyclotomic_verdict(parse_polynomial("x^3 - 3"))
        assert v.value == "noncyclotomic"
        assert "-243" in v.reason

    def test_x3_plus_3(self):
        assert cyclotomic_verdict(parse_polynomial("x^3 + 3")).value == "noncyclotomic"

    def test_cyclic_cubic_is_cyclotomic(self):
        # x^3 - 3x + 1 generates the real subfield of Q(zeta_9)
        assert cyclotomic_verdict(parse_polynomial("x^3 - 3x + 1")).value == "cyclotomic"

    def test_degree_four_unknown(self):
        assert cyclotomic_verdict(parse_polynomial("x^4 - 2")).value == "unknown"

    def test_reducible_rejected(self):
        with pytest.raises(PolynomialError, match="reducible"):
            cyclotomic_verdict(parse_polynomial("x^2 - 1"))

    def test_cyclotomic_sweep(self):
        for n in range(1, 101):
            verdict = cyclotomic_verdict(cyclotomic_polynomial(n))
            assert verdict.value == "cyclotomic", n


def test_annihilation_is_always_asserted(c5):
    # matrix_minimal_polynomial re-checks g(M) = 0 column by column; a wrong
    # matrix (non-square) is rejected outright
    with pytest.raises(ValueError):
        matrix_minimal_polynomial([[1, 0], [0]])


def test_matrix_minimal_polynomial_jordan_block():
    m = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert matrix_minimal_polynomial(m) == poly([0, 0, 0, 1])
