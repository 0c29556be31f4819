import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from repdiff.lattice import (
    AbelianInvariants,
    IntMatrix,
    LatticeSolver,
    cokernel_invariants,
    determinant,
    hermite_normal_form,
    integer_kernel,
    lattices_equal,
    matrix_rank,
    smith_diagonal,
    smith_normal_form,
    smith_with_inverse,
    solve_integer,
)

from oracles import frac_det, smith_invariants_oracle


@st.composite
def matrices(draw, max_dim=5, lo=-20, hi=20):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m))
    return IntMatrix.from_rows(rows)


def _unimodular(M: IntMatrix) -> bool:
    return abs(frac_det(M.tolist())) == 1


# -- golden examples -------------------------------------------------------------------------


def test_snf_small_example():
    A = IntMatrix.from_rows([[2, 4], [6, 8]])
    U, S, V = smith_normal_form(A)
    assert S == IntMatrix.from_rows([[2, 0], [0, 4]])
    assert U @ A @ V == S


def test_snf_identity():
    I = IntMatrix.identity(3)
    assert smith_normal_form(I)[1] == I


def test_kernel_of_row_of_ones():
    K = integer_kernel(IntMatrix.from_rows([[1, 1, 1]]))
    assert sorted(map(tuple, K.columns())) == [(0, 1, -1), (1, 0, -1)]


def test_cokernel_invariants_examples():
    assert str(cokernel_invariants(IntMatrix.from_rows([[2, 0], [0, 3]]))) == "Z/6"
    assert str(cokernel_invariants(IntMatrix.from_rows([[2], [0], [0]]))) == "Z^2 + Z/2"
    assert str(cokernel_invariants(IntMatrix.identity(2))) == "0"
    assert cokernel_invariants(IntMatrix(3, 0)) == AbelianInvariants(3)


def test_abelian_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (4, 2))
    with pytest.raises(ValueError):
        AbelianInvariants(-1)
    assert AbelianInvariants.from_diagonal(3, [1, 6]) == AbelianInvariants(1, (6,))
    assert AbelianInvariants(2, (3,)).to_dict() == {"free_rank": 2, "torsion": [3]}


def test_solver_rejects_non_lattice_vector():
    A = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve_integer(A, [1, 0]) is None
    assert solve_integer(A, [4, -3]) == [2, -1]
    assert LatticeSolver(A).contains([2, 3])


# -- fixture text format ------------------------------------------------------------------


def test_fixture_round_trip():
    A = IntMatrix.from_rows([[1, -2, 3], [0, 4, -5]])
    assert IntMatrix.parse_text(A.to_text()) == A


@pytest.mark.parametrize("text", ["", "2 2\n1 2 3", "2 x\n1 2", "1 1\n1.5", "-1 2\n"])
def test_fixture_parse_errors(text):
    with pytest.raises(ValueError):
        IntMatrix.parse_text(text)


# -- properties ---------------------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_snf_postconditions(A):
    U, S, V, Uinv = smith_with_inverse(A)
    assert U @ A @ V == S
    assert S.is_diagonal()
    d = S.diagonal()
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[: len(nz)] == nz  # zeros trail
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert _unimodular(U) and _unimodular(V)
    assert U @ Uinv == IntMatrix.identity(A.rows)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_matches_minor_gcd_oracle(A):
    assert smith_normal_form(A)[1].diagonal() == smith_invariants_oracle(A.tolist())
    assert smith_diagonal(A) == smith_invariants_oracle(A.tolist())


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=4))
def test_snf_agrees_with_sympy(A):
    expected = sympy_snf(Matrix(A.tolist()))
    ours = smith_normal_form(A)[1]
    # sympy may report negative units; compare absolute diagonals
    assert [abs(x) for x in ours.diagonal()] == [abs(expected[i, i]) for i in range(min(A.shape))]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_is_unimodular_column_transform(A):
    H, V = hermite_normal_form(A)
    assert A @ V == H
    assert _unimodular(V)
    assert lattices_equal(H, A)
    r = matrix_rank(A)
    assert all(not any(c) for c in H.columns()[r:])


@settings(max_examples=150, deadline=None)
@given(matrices(max_dim=4, lo=-4, hi=4))
def test_kernel_is_saturated(A):
    K = integer_kernel(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - matrix_rank(A)
    # every small integer kernel vector is an integer combination of K
    solver = LatticeSolver(K) if K.cols else None
    for x in itertools.product(range(-2, 3), repeat=A.cols):
        if any(x) and not any(A @ list(x)):
            assert solver is not None and solver.solve(list(x)) is not None


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solver_round_trip(A, data):
    x = data.draw(st.lists(st.integers(-9, 9), min_size=A.cols, max_size=A.cols))
    b = A @ x
    y = solve_integer(A, b)
    assert y is not None and A @ y == b


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4))
def test_determinant_matches_fraction_oracle(A):
    if A.rows != A.cols:
        return
    assert determinant(A) == frac_det(A.tolist())


@settings(max_examples=60, deadline=None)
@given(st.integers(2 ** 64, 2 ** 80), st.integers(2 ** 64, 2 ** 80))
def test_huge_entries(a, b):
    A = IntMatrix.from_rows([[a, 0], [0, b]])
    S = smith_normal_form(A)[1]
    from math import gcd

    g = gcd(a, b)
    assert S.diagonal() == [g, a // g * b]
