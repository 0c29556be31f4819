from math import comb

import pytest

from repdiff.homological import (
    base_change_diagonal,
    compare_tor_with_kahler,
    corrupted_koszul,
    diagonal_map,
    homology_from_matrices,
    homology_piece,
    infer_free_rank,
    koszul_complex,
    resolution_check,
    tor_self,
)
from repdiff.lattice import AbelianInvariants, IntMatrix


def test_homology_of_small_complexes():
    two = IntMatrix.from_rows([[2]])
    assert homology_from_matrices([1, 1], [None, two]) == [AbelianInvariants(0, (2,)), AbelianInvariants(0)]
    zero = IntMatrix.from_rows([[0]])
    assert homology_from_matrices([1, 1], [None, zero]) == [AbelianInvariants(1), AbelianInvariants(1)]
    # Z --(1,1)--> Z^2 --(1 -1)--> Z : exact in the middle
    d2 = IntMatrix.from_rows([[1], [1]])
    d1 = IntMatrix.from_rows([[1, -1]])
    assert homology_from_matrices([1, 2, 1], [None, d1, d2]) == [AbelianInvariants(0), AbelianInvariants(0), AbelianInvariants(0)]


def test_homology_rejects_non_complex():
    d2 = IntMatrix.from_rows([[1], [0]])
    d1 = IntMatrix.from_rows([[1, 0]])
    with pytest.raises(ValueError):
        homology_from_matrices([1, 2, 1], [None, d1, d2])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_koszul_is_complex(n):
    C = koszul_complex(n)
    assert C.is_complex()
    assert list(C.ranks) == [comb(n, i) for i in range(n + 1)]


@pytest.mark.parametrize("n", [1, 2])
def test_koszul_resolves_diagonal(n):
    v = resolution_check(koszul_complex(n), range(7))
    assert v.ok, v.failures


@pytest.mark.parametrize("n", [1, 2])
def test_corrupted_koszul_fails(n):
    v = resolution_check(corrupted_koszul(n), range(4))
    assert not v.ok
    assert any("augmentation" in f for f in v.failures)


def test_corrupted_base_change_keeps_a_nonzero_entry():
    C = base_change_diagonal(corrupted_koszul(1))
    (entry,) = C.differentials[0][0]
    assert C.ring.format(entry) == "-x1"
    # and the honest complex collapses to zero differentials
    clean = base_change_diagonal(koszul_complex(2))
    assert all(e.is_zero() for row in clean.differentials[0] for e in row)


def test_diagonal_map_identifies_variables():
    phi = diagonal_map(2)
    x1, x2, y1, y2 = phi.source.gens()
    assert phi(x1 - y1).is_zero()
    assert phi(x2 * y2) == phi(x2) ** 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tor_ranks(n):
    tor = tor_self(n, range(5))
    assert tor.ranks == [comb(n, i) for i in range(n + 1)]
    assert tor.total_rank == 2 ** n
    assert tor.generator_shifts == [{i: comb(n, i)} for i in range(n + 1)]


def test_tor_pieces_are_free_and_match_omega():
    assert compare_tor_with_kahler(2, range(6)).ok
    bad = compare_tor_with_kahler(2, range(6), shift_offset=1)
    assert not bad.ok and bad.mismatches


def test_homology_piece_of_base_changed_complex():
    C = base_change_diagonal(koszul_complex(2))
    # zero differentials: homology is the chain groups; degree 2 has ranks 3, 2*2, 1
    assert homology_piece(C, 2) == [AbelianInvariants(3), AbelianInvariants(4), AbelianInvariants(1)]


def test_infer_free_rank():
    pieces = {0: AbelianInvariants(1), 1: AbelianInvariants(2), 2: AbelianInvariants(3)}
    assert infer_free_rank(2, range(3), pieces) == (1, {0: 1})
    assert infer_free_rank(2, range(2), {0: AbelianInvariants(0, (2,)), 1: AbelianInvariants(0)})[0] is None
    with pytest.raises(ValueError):
        infer_free_rank(2, [0, 2], pieces)
