"""Acceptance criteria, one test per criterion.

Each criterion is a plain function returning ``(ok, detail)``. Under pytest
the verdict lines are printed in the terminal summary (see conftest.py);
``python tests/test_acceptance.py`` prints them directly.
"""

from __future__ import annotations

import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import random_poly, smith_invariants_oracle  # noqa: E402

from repdiff.descent import compare_jstar_image  # noqa: E402
from repdiff.homological import compare_tor_with_kahler, corrupted_koszul, koszul_complex, resolution_check, tor_self  # noqa: E402
from repdiff.lattice import AbelianInvariants, IntMatrix, smith_with_inverse  # noqa: E402
from repdiff.modules import d_function, de_rham_d, graded_piece, omega, torsion_graded  # noqa: E402
from repdiff.poly import RingMap, hypersurface_ring, laurent_ring, polynomial_ring  # noqa: E402
from repdiff.weyl import (  # noqa: E402
    GeneratorExpansion,
    WeightBox,
    generator_ring,
    hypersurface_change_of_variables,
    invariant_basis,
    relation_kernel,
    substitute,
    weyl_psu3,
    weyl_su,
)

RESULTS: dict[int, tuple[bool, str]] = {}
SEED = 20240601


def record(n: int, ok: bool, detail: str) -> tuple[bool, str]:
    RESULTS[n] = (ok, detail)
    return ok, detail


# -- criteria ----------------------------------------------------------------------------------


def criterion_1():
    parts, ok = [], True
    for n in (1, 2, 3):
        t0 = time.perf_counter()
        tor = tor_self(n, range(7))
        dt = time.perf_counter() - t0
        good = tor.ranks == [comb(n, i) for i in range(n + 1)] and tor.total_rank == 2 ** n and dt < 60
        ok &= good
        parts.append(f"n={n} ranks={tor.ranks} total={tor.total_rank} {dt:.1f}s")
    return record(1, ok, "; ".join(parts))


def criterion_2():
    parts, ok = [], True
    for n in (1, 2, 3):
        v = compare_tor_with_kahler(n, range(7))
        ok &= v.ok
        parts.append(f"n={n} pieces={v.compared} mismatches={len(v.mismatches)}")
    return record(2, ok, "; ".join(parts))


def criterion_3():
    parts, ok = [], True
    for n in (1, 2):
        good = resolution_check(koszul_complex(n), range(7))
        bad = resolution_check(corrupted_koszul(n), range(7))
        ok &= good.ok and not bad.ok
        parts.append(f"n={n} resolution={good.ok} corrupted_rejected={not bad.ok}")
    return record(3, ok, "; ".join(parts))


def criterion_4():
    parts, ok = [], True
    for n, ps in ((2, (1,)), (3, (1, 2))):
        action, chars = weyl_su(n)
        for p in ps:
            reps = [compare_jstar_image(action, chars, p, WeightBox.interior(action, r)) for r in range(1, 7)]
            good = all(r.equal for r in reps)
            ok &= good
            parts.append(f"SU({n}) p={p} radii 1..6 equal={good} ranks={[r.invariant_rank for r in reps]}")
    return record(4, ok, "; ".join(parts))


def criterion_5():
    action, Z1, Z2, Z3 = weyl_psu3()
    R = action.ring
    formulas = (
        "X1 + X1^-1 + X1*X2 + X1^-1*X2^-1 + X1^2*X2 + X1^-2*X2^-1",
        "X2 + X1^3*X2 + X1^-3*X2^-2",
        "X2^-1 + X1^-3*X2^-1 + X1^3*X2^2",
    )
    match = [R.parse(f) for f in formulas] == [Z1, Z2, Z3]
    basis = invariant_basis(action, WeightBox.interior(action, 6))
    expansion = GeneratorExpansion([Z1, Z2, Z3], 4)
    certified = 0
    for f in basis:
        cert = expansion.solve(f)
        if cert is not None and substitute(cert, [Z1, Z2, Z3]) == f:
            certified += 1
    ok = match and certified == len(basis)
    return record(5, ok, f"formulas_match={match} certified={certified}/{len(basis)} at degree<=4")


def criterion_6():
    _, Z1, Z2, Z3 = weyl_psu3()
    gens = [Z1, Z2, Z3]
    rels = relation_kernel(gens, 3)
    G = generator_ring(3, ["Z1", "Z2", "Z3"])
    if len(rels) != 1:
        return record(6, False, f"found {len(rels)} relations")
    g = rels[0]
    vanishes = substitute(g, gens).is_zero()
    change = hypersurface_change_of_variables(g)
    desc = "none"
    if change is not None:
        desc = f"X={G.format(change['X'])}, Y={G.format(change['Y'])}, Z={G.format(change['Z'])}, sign={change['sign']}"
    return record(6, vanishes and change is not None, f"relation={G.format(g)}; vanishes={vanishes}; change: {desc}")


def criterion_7():
    B = hypersurface_ring()
    O2, O3 = omega(B, 2), omega(B, 3)
    expected = {8: AbelianInvariants(1), 10: AbelianInvariants(1), 12: AbelianInvariants(0, (3,))}
    top_ok, torsion_ok, mismatches = True, True, []
    for d in range(15):
        top = graded_piece(O3, d).invariants
        top_ok &= top == expected.get(d, AbelianInvariants(0))
        tors = torsion_graded(O2, d).invariants
        if tors != top:
            torsion_ok = False
            mismatches.append(f"weight {d}: T(Omega2)={tors} Omega3={top}")
    detail = f"omega3_pieces={'ok' if top_ok else 'WRONG'}; torsion_match={torsion_ok}"
    if mismatches:
        detail += " (" + "; ".join(mismatches) + ")"
    return record(7, top_ok and torsion_ok, detail)


def _snf_property(rng: random.Random, count: int) -> tuple[bool, str]:
    for k in range(count):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)])
        U, S, V, Uinv = smith_with_inverse(A)
        d = S.diagonal()
        nz = [x for x in d if x]
        if not (
            U @ A @ V == S
            and S.is_diagonal()
            and U @ Uinv == IntMatrix.identity(m)
            and d[: len(nz)] == nz
            and all(x > 0 for x in nz)
            and all(b % a == 0 for a, b in zip(nz, nz[1:]))
            and d == smith_invariants_oracle(A.tolist())
        ):
            return False, f"matrix #{k} {A.tolist()}"
    return True, f"{count} matrices"


def _differential_property(rng: random.Random, count: int) -> tuple[bool, str]:
    rings = [
        ("Z[x,y,z]", polynomial_ring(["x", "y", "z"]), False),
        ("B", hypersurface_ring(), False),
        ("Laurent", laurent_ring(["x1", "x2", "x3"]), True),
    ]
    for name, R, laurent in rings:
        O1 = omega(R, 1)
        d1, d2 = de_rham_d(R, 1), de_rham_d(R, 2)
        for _ in range(count):
            a, b = (R.normal_form(random_poly(rng, 3, 2 if laurent else 3, 4, laurent)) for _ in range(2))
            lhs = d_function(R, R.normal_form(a * b))
            rhs = [x + y for x, y in zip(O1.scale(a, d_function(R, b)), O1.scale(b, d_function(R, a)))]
            if not O1.is_zero(tuple(l - r for l, r in zip(lhs, rhs))):
                return False, f"Leibniz fails in {name}"
            if not d1.target.is_zero(d1(d_function(R, a))):
                return False, f"d(d f) != 0 in {name}"
            form = tuple(R.normal_form(random_poly(rng, 3, 2, 3, laurent)) for _ in range(3))
            if not d2.target.is_zero(d2(d1(form))):
                return False, f"d(d w) != 0 in {name}"
    return True, f"Leibniz and d^2=0 on {count} samples x {len(rings)} rings"


def _ring_property(rng: random.Random, count: int) -> tuple[bool, str]:
    B = hypersurface_ring()
    L = laurent_ring(["x1", "x2"])
    for name, R, nv, laurent in (("B", B, 3, False), ("Laurent", L, 2, True)):
        nf = R.normal_form
        for _ in range(count):
            a, b, c = (nf(random_poly(rng, nv, 3, 4, laurent)) for _ in range(3))
            if nf(nf(a * b) * c) != nf(a * nf(b * c)) or nf(a * (b + c)) != nf(a * b + a * c) or nf(a * b) != nf(b * a):
                return False, f"ring axiom fails in {name}"
    action, Z1, Z2, Z3 = weyl_psu3()
    phi = RingMap(generator_ring(3), action.ring, (Z1, Z2, Z3))
    for _ in range(count):
        a, b = (random_poly(rng, 3, 2, 3, False, 5) for _ in range(2))
        if phi(a * b) != phi(a) * phi(b) or phi(a + b) != phi(a) + phi(b):
            return False, "ring map is not a homomorphism"
    return True, f"axioms and homomorphism on {count} samples"


def criterion_8():
    rng = random.Random(SEED)
    t0 = time.perf_counter()
    checks = [_snf_property(rng, 1000), _differential_property(rng, 200), _ring_property(rng, 200)]
    ok = all(c[0] for c in checks)
    return record(8, ok, "; ".join(c[1] for c in checks) + f"; {time.perf_counter() - t0:.1f}s")


CRITERIA = {
    1: ("Tor rank law", criterion_1),
    2: ("Tor matches Kahler forms", criterion_2),
    3: ("Koszul resolution", criterion_3),
    4: ("invariant descent", criterion_4),
    5: ("PSU(3) generators", criterion_5),
    6: ("PSU(3) relation", criterion_6),
    7: ("hypersurface differentials", criterion_7),
    8: ("property suites", criterion_8),
}


def format_line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n} ({CRITERIA[n][0]}): {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance_criterion(n):
    ok, detail = CRITERIA[n][1]()
    print(format_line(n))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, (_, fn) in CRITERIA.items():
        fn()
        print(format_line(n), flush=True)
        failed += not RESULTS[n][0]
    sys.exit(1 if failed else 0)
