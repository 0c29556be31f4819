from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from repdiff.poly import Polynomial, laurent_ring
from repdiff.weyl import (
    PSU3_LAMBDA,
    GroupAction,
    WeightBox,
    act_on_poly,
    burnside_orbit_count,
    generator_ring,
    hypersurface_change_of_variables,
    invariant_basis,
    is_invariant,
    orbit_sum,
    relation_kernel,
    subring_membership,
    substitute,
    weight_box,
    weyl_psu3,
    weyl_su,
)

from oracles import brute_orbits, lambda_orbit_maps

PSU3, Z1, Z2, Z3 = weyl_psu3()


def su_lambda(n):
    """x_i = lambda_i for i < n, lambda_n eliminated."""
    return [tuple(int(i == k) for i in range(n)) for k in range(n - 1)]


# -- group structure ------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_su_group_order_and_closure(n):
    action, chars = weyl_su(n)
    assert action.order == factorial(n)
    assert action.is_closed()
    assert len(chars) == n - 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_su_action_matches_lambda_permutations(n):
    action, _ = weyl_su(n)
    maps = lambda_orbit_maps(su_lambda(n))
    box = WeightBox.closure(action, 2)
    for a in box.points:
        assert set(action.orbit(a)) == {m(a) for m in maps}


def test_psu3_action_matches_lambda_permutations():
    maps = lambda_orbit_maps(list(PSU3_LAMBDA))
    for a in WeightBox.closure(PSU3, 3).points:
        assert set(PSU3.orbit(a)) == {m(a) for m in maps}


def test_psu3_generator_matrices():
    s1, s2 = (PSU3.elements[g] for g in PSU3.generators)
    assert s1 == ((-1, 3), (0, 1))
    assert s2 == ((-1, 0), (-1, 1))
    assert PSU3.order == 6


def test_invalid_group_inputs():
    R = laurent_ring(["x"])
    with pytest.raises(ValueError):
        GroupAction.generated_by(R, [((2,),)])
    with pytest.raises(IndexError):
        PSU3.matrix(99)


# -- orbit sums and invariants ----------------------------------------------------------------


def test_psu3_generators_term_for_term():
    R = PSU3.ring
    assert Z1 == R.parse("X1 + X1^-1 + X1*X2 + X1^-1*X2^-1 + X1^2*X2 + X1^-2*X2^-1")
    assert Z2 == R.parse("X2 + X1^3*X2 + X1^-3*X2^-2")
    assert Z3 == R.parse("X2^-1 + X1^-3*X2^-1 + X1^3*X2^2")
    assert orbit_sum(PSU3, (1, 0)) == Z1
    assert orbit_sum(PSU3, (0, 1)) == Z2
    assert orbit_sum(PSU3, (0, -1)) == Z3
    assert all(is_invariant(PSU3, z) for z in (Z1, Z2, Z3))


def test_su_characters_are_elementary_symmetric_in_lambda():
    action, chars = weyl_su(3)
    R = action.ring
    assert chars[0] == R.parse("x1 + x2 + x1^-1*x2^-1")
    assert chars[1] == R.parse("x1*x2 + x1^-1 + x2^-1")


laurent2 = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-9, 9), max_size=5).map(
    lambda t: Polynomial(2, t)
)


@settings(max_examples=100, deadline=None)
@given(laurent2, laurent2, st.integers(0, 5))
def test_action_is_ring_automorphism(a, b, g):
    assert act_on_poly(PSU3, g, a * b) == act_on_poly(PSU3, g, a) * act_on_poly(PSU3, g, b)
    assert act_on_poly(PSU3, g, a + b) == act_on_poly(PSU3, g, a) + act_on_poly(PSU3, g, b)


@settings(max_examples=60, deadline=None)
@given(laurent2, st.integers(0, 5), st.integers(0, 5))
def test_action_composes(a, g, h):
    gh = PSU3.table[g][h]
    assert act_on_poly(PSU3, g, act_on_poly(PSU3, h, a)) == act_on_poly(PSU3, gh, a)


@settings(max_examples=60, deadline=None)
@given(laurent2)
def test_orbit_averages_are_invariant(a):
    total = sum((act_on_poly(PSU3, g, a) for g in range(PSU3.order)), Polynomial.zero(2))
    assert is_invariant(PSU3, total)


# -- boxes -------------------------------------------------------------------------------------


@pytest.mark.parametrize("make", [lambda: weyl_su(3)[0], lambda: weyl_su(4)[0], lambda: PSU3], ids=["su3", "su4", "psu3"])
@pytest.mark.parametrize("radius", [1, 2, 4])
def test_burnside_matches_brute_force(make, radius):
    action = make()
    for mode in ("interior", "closure"):
        box = weight_box(action, radius, mode)
        assert box.is_stable(action)
        maps = [lambda a, M=M: tuple(sum(r[j] * a[j] for j in range(len(a))) for r in M) for M in action.elements]
        n_orbits = len(brute_orbits(box.points, maps))
        assert burnside_orbit_count(action, box) == n_orbits == len(invariant_basis(action, box))


def test_interior_box_is_inside_coordinate_box():
    box = WeightBox.interior(PSU3, 6)
    assert all(max(map(abs, a)) <= 6 for a in box.points)
    assert len(box) == 43
    closure = WeightBox.closure(PSU3, 2)
    assert any(max(map(abs, a)) > 2 for a in closure.points)
    with pytest.raises(ValueError):
        weight_box(PSU3, 2, "sphere")


# -- membership and relations ------------------------------------------------------------------


def test_membership_certificate_example():
    f = orbit_sum(PSU3, (2, 2))
    cert = subring_membership(f, [Z1, Z2, Z3], 4)
    assert cert is not None
    assert substitute(cert, [Z1, Z2, Z3]) == f
    G = generator_ring(3, ["Z1", "Z2", "Z3"])
    assert G.format(subring_membership(orbit_sum(PSU3, (0, 2)), [Z1, Z2, Z3], 2)) == "Z2^2 - 2*Z3"


def test_non_invariant_has_no_certificate():
    X1 = PSU3.ring.var("X1")
    assert subring_membership(X1, [Z1, Z2, Z3], 4) is None


def test_su_characters_have_no_relations():
    _, chars = weyl_su(3)
    assert relation_kernel(chars, 4) == []


def test_psu3_single_cubic_relation():
    rels = relation_kernel([Z1, Z2, Z3], 3)
    assert len(rels) == 1
    assert substitute(rels[0], [Z1, Z2, Z3]).is_zero()
    change = hypersurface_change_of_variables(rels[0])
    assert change is not None
    X, Y, Z = change["X"], change["Y"], change["Z"]
    assert (X ** 3 - Y * Z) * change["sign"] == rels[0]


def test_change_of_variables_recovers_planted_shift():
    G = generator_ring(3)
    u, v, w = G.gens()
    X, Y, Z = u + 2, v - u * 3 + 1, w + u * 5 - 4
    rel = X ** 3 - Y * Z
    change = hypersurface_change_of_variables(rel)
    assert change is not None and (change["X"] ** 3 - change["Y"] * change["Z"]) * change["sign"] == rel
    assert hypersurface_change_of_variables(u ** 3 + v ** 2) is None


def test_su2_small_box_invariants():
    action, _ = weyl_su(2)
    R = action.ring
    basis = invariant_basis(action, WeightBox.interior(action, 2))
    assert {R.format(f) for f in basis} == {"1", "x + x^-1", "x^2 + x^-2"}
    assert invariant_basis(action, WeightBox.empty()) == []


def test_identity_group_fixes_every_form():
    from repdiff.descent import invariant_form_basis

    R = laurent_ring(["x1", "x2"])
    trivial = GroupAction.generated_by(R, [((1, 0), (0, 1))])
    box = WeightBox.closure(trivial, 1)
    assert len(invariant_form_basis(trivial, 1, box)) == 2 * len(box)
