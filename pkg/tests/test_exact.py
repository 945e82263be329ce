import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from cellres.exact import (
    affine_hull_dim,
    format_rational,
    invariant_factors,
    nullspace,
    parse_rational,
    rank_over_rationals,
    smith_normal_form,
    solve,
    sparse_rank,
)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(M):
    return int(sympy.Matrix(M).det())


small_matrices = st.integers(1, 5).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda m: st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


def test_snf_identity():
    assert smith_normal_form([[1, 0], [0, 1]]).factors == (1, 1)


def test_snf_already_diagonal():
    S = smith_normal_form([[2, 0], [0, 0]])
    assert S.factors == (2,)
    assert S.rank == 1


def test_snf_hand_example():
    # det = -8 and gcd of entries = 2, so the factors are 2 and 8/2 = 4
    assert smith_normal_form([[2, 4], [6, 8]]).factors == (2, 4)


@given(small_matrices)
def test_snf_witnesses_reconstruct_diagonal(M):
    S = smith_normal_form(M)
    D = matmul(matmul([list(r) for r in S.left], M), [list(r) for r in S.right])
    n, m = len(M), len(M[0])
    for i in range(n):
        for j in range(m):
            want = S.factors[i] if i == j and i < len(S.factors) else 0
            assert D[i][j] == want
    assert abs(det(S.left)) == 1 and abs(det(S.right)) == 1
    for a, b in zip(S.factors, S.factors[1:]):
        assert b % a == 0
    assert all(f > 0 for f in S.factors)


def test_snf_randomized_against_sympy():
    rng = random.Random(5)
    for _ in range(120):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-5, 5) for _ in range(m)] for _ in range(n)]
        ours = smith_normal_form(M).factors
        theirs = tuple(abs(int(x)) for x in sympy_factors(sympy.Matrix(M), domain=sympy.ZZ) if x != 0)
        assert ours == theirs
        assert invariant_factors(M) == ours
        assert rank_over_rationals(M) == len(ours) == sympy.Matrix(M).rank()


def test_rank_examples():
    assert rank_over_rationals([[0, 0], [0, 0]]) == 0
    assert rank_over_rationals([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert rank_over_rationals([[1, 2], [2, 4]]) == 1


@given(small_matrices)
def test_sparse_rank_matches_dense(M):
    cols = [{i: M[i][j] for i in range(len(M)) if M[i][j]} for j in range(len(M[0]))]
    assert sparse_rank(cols) == rank_over_rationals(M)


def test_affine_hull_dim_examples():
    assert affine_hull_dim([(1, 2)]) == 0
    assert affine_hull_dim([(0, 0), (1, 1), (3, 3)]) == 1
    assert affine_hull_dim([(0, 0), (1, 0), (0, 1)]) == 2
    with pytest.raises(ValueError):
        affine_hull_dim([])


def test_rational_strings_round_trip():
    for s, q in [("3/6", Fraction(1, 2)), ("-4/2", Fraction(-2)), ("7", Fraction(7)), ("0/5", Fraction(0))]:
        assert parse_rational(s) == q
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("0.5")


@given(st.integers(-50, 50), st.integers(-50, 50).filter(bool))
def test_rationals_are_reduced(p, q):
    x = parse_rational(f"{p}/{q}") * Fraction(3, 7) + Fraction(1, 3)
    from math import gcd

    assert x.denominator > 0 and gcd(abs(x.numerator), x.denominator) == 1


def test_solve_and_nullspace():
    M = [[1, 2, 3], [2, 4, 6]]
    ns = nullspace(M, 3)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)
    assert solve([[1, 1], [1, -1]], [3, 1]) == (2, 1)
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
