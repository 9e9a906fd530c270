import random
from fractions import Fraction

import pytest

from matroid_hodge.linalg import (SparseEchelon, bareiss_rank, determinant, integer_kernel,
                                  integral_quotient, is_positive_definite, maximize,
                                  nullspace, signature, smith_form, solve)
from matroid_hodge.polynomial import IntPolynomial

import oracles


def random_matrix(rng, rows, cols, lo=-3, hi=3):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_determinant_and_rank_match_oracle():
    rng = random.Random(1)
    for n in range(1, 7):
        a = random_matrix(rng, n, n)
        assert determinant(a) == oracles.det(a)
        assert (bareiss_rank(a) == n) == (oracles.det(a) != 0)
    assert bareiss_rank([[1, 2], [2, 4]]) == 1


def test_nullspace_and_solve():
    rng = random.Random(2)
    for _ in range(20):
        a = random_matrix(rng, 3, 5)
        for v in nullspace(a, 5):
            assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in a)
        assert len(nullspace(a, 5)) == 5 - bareiss_rank(a)
        x = [rng.randint(-2, 2) for _ in range(5)]
        b = [sum(p * q for p, q in zip(row, x)) for row in a]
        y = solve(a, b)
        assert [sum(p * q for p, q in zip(row, y)) for row in a] == b
    assert solve([[1, 1], [1, 1]], [0, 1]) is None


def test_sparse_echelon_normal_form_is_canonical():
    rng = random.Random(3)
    for _ in range(20):
        rows = [{j: v for j, v in enumerate(r) if v} for r in random_matrix(rng, 3, 6)]
        ech = SparseEchelon(rows, range(6))
        assert ech.rank == bareiss_rank([[r.get(j, 0) for j in range(6)] for r in rows])
        for row in rows:
            assert ech.normal_form(dict(row)) == {}
        # adding a relation does not change the normal form
        vec = {j: rng.randint(-2, 2) for j in range(6)}
        shifted = dict(vec)
        for j, v in rows[0].items():
            shifted[j] = shifted.get(j, 0) + 5 * v
        assert ech.normal_form(vec) == ech.normal_form(shifted)


def test_integer_kernel_is_a_lattice_basis():
    a = [[2, 4, 6]]
    k = integer_kernel(a, 3)
    assert len(k) == 2
    for v in k:
        assert sum(x * y for x, y in zip(a[0], v)) == 0
    # (1, 1, -1) has gcd 1 coefficients and lies in the kernel: it must be an
    # integer combination of the basis
    m = [[k[0][i], k[1][i]] for i in range(3)]
    sol = solve(m, [1, 1, -1])
    assert sol is not None and all(Fraction(x).denominator == 1 for x in sol)


def test_smith_form_and_integral_quotient():
    invariants, _ = smith_form([[2, 0], [0, 3]], 2)
    assert sorted(abs(x) for x in invariants) == [1, 6]
    torsion, gens = integral_quotient([{0: 2}], 2)
    assert torsion == [2] and len(gens) == 1
    torsion, gens = integral_quotient([{0: 1, 1: -1}], 3)
    assert torsion == [] and len(gens) == 2


@pytest.mark.parametrize("seed", range(12))
def test_signature_matches_descartes_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    b = random_matrix(rng, n, n)
    a = [[b[i][j] + b[j][i] for j in range(n)] for i in range(n)]
    if seed % 3 == 0:
        for i in range(n):
            a[i][i] = 0  # exercise the zero-diagonal branch
    assert signature(a) == oracles.descartes_signature(a)


def test_signature_hyperbolic_and_zero():
    assert signature([[0, 1], [1, 0]]) == (1, 1, 0)
    assert signature([[0, 0], [0, 0]]) == (0, 0, 2)


def test_positive_definite():
    assert is_positive_definite([[2, 1], [1, 2]])
    assert not is_positive_definite([[1, 2], [2, 1]])
    assert not is_positive_definite([[0, 0], [0, 1]])
    assert is_positive_definite([])


def test_maximize():
    opt, x = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert opt == Fraction(14, 5) and x == [Fraction(8, 5), Fraction(6, 5)]
    assert maximize([1], [[-1]], [0]) == (None, None)


def test_polynomial_arithmetic():
    p = IntPolynomial([-1, 1])  # x - 1
    q = p * p
    assert q.coefficients == (1, -2, 1)
    assert q(3) == 4
    quotient, remainder = q.divide_linear(1)
    assert quotient == p and remainder == 0
    assert (q - q).coefficients == ()
    assert q.shift(2).coefficients == (0, 0, 1, -2, 1)
    assert str(IntPolynomial([2, -3, 1])) == "x^2 - 3*x + 2"
