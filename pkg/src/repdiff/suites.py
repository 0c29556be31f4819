"""Verification suites behind the command line.

Each suite returns a :class:`SuiteReport`; the CLI only parses flags and
renders reports.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb, factorial
from typing import Any, Callable, Iterable, Sequence

from .descent import compare_jstar_image, format_form
from .homological import (
    compare_tor_with_kahler,
    corrupted_koszul,
    koszul_complex,
    resolution_check,
    tor_self,
)
from .lattice import AbelianInvariants
from .modules import graded_piece, omega, torsion_graded
from .poly import Polynomial, hypersurface_ring
from .weyl import (
    GeneratorExpansion,
    WeightBox,
    burnside_orbit_count,
    generator_ring,
    hypersurface_change_of_variables,
    invariant_basis,
    is_invariant,
    orbit_sum,
    relation_kernel,
    substitute,
    weyl_psu3,
    weyl_su,
)

PASS, FAIL, RECORDED = "pass", "fail", "recorded"


@dataclass
class Check:
    name: str
    status: str
    details: Any = None


@dataclass
class SuiteReport:
    suite: str
    params: dict
    checks: list[Check] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return PASS if all(c.status != FAIL for c in self.checks) else FAIL

    def add(self, name: str, ok: bool | None, details: Any = None) -> Check:
        status = RECORDED if ok is None else (PASS if ok else FAIL)
        check = Check(name, status, details)
        self.checks.append(check)
        return check

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": [asdict(c) for c in self.checks],
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"suite: {self.suite}"]
        lines.append("params: " + ", ".join(f"{k}={v}" for k, v in self.params.items()))
        width = max((len(c.name) for c in self.checks), default=4)
        for c in self.checks:
            detail = c.details if isinstance(c.details, str) else json.dumps(c.details)
            lines.append(f"  [{c.status:8}] {c.name:<{width}}  {detail}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Bounds:
    """Default sizes; each suite finishes in seconds at these values."""

    box: int = 6
    max_degree: int = 14
    membership_degree: int = 4
    torsion_power: int = 3
    resolution_degree: int = 6
    relation_degree: int = 3
    jobs: int = 1


def _pmap(fn: Callable, items: Iterable, jobs: int) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- SU(n) ------------------------------------------------------------------------------


def su_tor(rank: int, bounds: Bounds) -> SuiteReport:
    n = rank
    degrees = list(range(bounds.max_degree + 1))
    res_degrees = list(range(min(bounds.max_degree, bounds.resolution_degree) + 1))
    report = SuiteReport("su.tor", {"rank": n, "max_degree": bounds.max_degree, "resolution_degree": res_degrees[-1]})
    tor = tor_self(n, degrees)
    expected = [comb(n, i) for i in range(n + 1)]
    report.add("tor_ranks_binomial", tor.ranks == expected, {"ranks": tor.ranks, "expected": expected})
    report.add("tor_total_rank", tor.total_rank == 2 ** n, {"total_rank": tor.total_rank, "expected": 2 ** n})
    shifts_ok = all(g == {i: comb(n, i)} for i, g in enumerate(tor.generator_shifts))
    report.add("tor_generator_shifts", shifts_ok, [{str(k): v for k, v in g.items()} for g in tor.generator_shifts])
    v = compare_tor_with_kahler(n, degrees, tor=tor)
    report.add("tor_matches_kahler", v.ok, {"pieces_compared": v.compared, "mismatches": v.mismatches})
    bad = compare_tor_with_kahler(n, degrees, shift_offset=1, tor=tor)
    report.add("kahler_shift_negative_control", not bad.ok, {"mismatches_found": len(bad.mismatches)})
    res = resolution_check(koszul_complex(n), res_degrees)
    report.add("koszul_resolution", res.ok, {"degrees": res_degrees, "failures": res.failures})
    corrupt = resolution_check(corrupted_koszul(n), res_degrees)
    report.add("corrupted_resolution_negative_control", not corrupt.ok, {"failures_found": len(corrupt.failures)})
    return report


def _membership_bound(gens: Sequence[Polynomial], invariants: Sequence[Polynomial]) -> int:
    """Degree at which every invariant can be reached by leading-term elimination.

    Top weights (under a separating functional) of the generators form a basis
    of the dominant cone for SU(n); the degree of an orbit sum is the sum of
    the coordinates of its top weight in that basis.
    """
    from .descent import _choose_functional, _top
    from fractions import Fraction

    phi = _choose_functional(gens)
    tops = [_top(g, phi) for g in gens]
    r = len(tops)
    best = 0
    for f in invariants:
        if f.is_constant():
            continue
        t = _top(f, phi)
        # solve sum c_i tops_i = t over Q
        M = [[Fraction(tops[j][i]) for j in range(r)] + [Fraction(t[i])] for i in range(r)]
        for c in range(r):
            p = next(k for k in range(c, r) if M[k][c] != 0)
            M[c], M[p] = M[p], M[c]
            M[c] = [x / M[c][c] for x in M[c]]
            for k in range(r):
                if k != c and M[k][c] != 0:
                    M[k] = [a - M[k][c] * b for a, b in zip(M[k], M[c])]
        coords = [M[i][r] for i in range(r)]
        best = max(best, int(sum(coords)))
    return best


def su_invariants(rank: int, bounds: Bounds) -> SuiteReport:
    n = rank + 1
    action, chars = weyl_su(n)
    box = WeightBox.interior(action, bounds.box)
    report = SuiteReport("su.invariants", {"rank": rank, "group": f"SU({n})", "box": bounds.box, "box_mode": "interior", "relation_degree": bounds.membership_degree})
    R = action.ring
    report.add("weyl_group_order", action.order == factorial(n), {"order": action.order})
    report.add("fundamental_characters_invariant", all(is_invariant(action, c) for c in chars), [R.format(c) for c in chars])
    basis = invariant_basis(action, box)
    burnside = burnside_orbit_count(action, box)
    report.add("invariant_basis_burnside", len(basis) == burnside, {"basis_size": len(basis), "burnside": burnside, "box_points": len(box)})
    degree = _membership_bound(chars, basis)
    expansion = GeneratorExpansion(chars, degree)
    failures = []
    for f in basis:
        cert = expansion.solve(f)
        if cert is None or substitute(cert, chars) != f:
            failures.append(R.format(f))
    report.add("invariants_generated", not failures, {"membership_degree": degree, "certified": len(basis) - len(failures), "failures": failures})
    rels = relation_kernel(chars, bounds.membership_degree)
    G = generator_ring(len(chars))
    report.add("no_relations", not rels, {"degree": bounds.membership_degree, "relations": [G.format(r) for r in rels]})
    return report


def su_descent(rank: int, bounds: Bounds) -> SuiteReport:
    n = rank + 1
    action, chars = weyl_su(n)
    report = SuiteReport("su.descent", {"rank": rank, "group": f"SU({n})", "box": bounds.box, "box_mode": "interior"})
    tasks = [(p, radius) for p in range(rank + 1) for radius in range(1, bounds.box + 1)]

    def run(task):
        p, radius = task
        return compare_jstar_image(action, chars, p, WeightBox.interior(action, radius))

    results = _pmap(run, tasks, bounds.jobs)
    for p in range(rank + 1):
        reps = [r for (pp, _), r in zip(tasks, results) if pp == p]
        ok = all(r.equal for r in reps)
        report.add(
            f"forms_p{p}_equal_jstar_image",
            ok,
            [
                {"radius": r.radius, "rank": r.invariant_rank, "image_rank": r.image_rank, "inv_in_image": r.invariants_in_image, "image_in_inv": r.image_in_invariants}
                for r in reps
            ],
        )
    return report


# -- PSU(3) ---------------------------------------------------------------------------------

PSU3_S1 = ((-1, 3), (0, 1))  # X1 -> X1^-1, X2 -> X1^3 X2
PSU3_S2 = ((-1, 0), (-1, 1))  # X1 -> X1^-1 X2^-1, X2 -> X2


def psu3_generators(bounds: Bounds) -> SuiteReport:
    action, Z1, Z2, Z3 = weyl_psu3()
    R = action.ring
    box = WeightBox.interior(action, bounds.box)
    report = SuiteReport("psu3.generators", {"box": bounds.box, "box_mode": "interior", "membership_degree": bounds.membership_degree})
    gens = [action.elements[g] for g in action.generators]
    report.add("weyl_generators_from_lambda", gens == [PSU3_S1, PSU3_S2], {"s1": gens[0], "s2": gens[1]})
    report.add("weyl_group_order", action.order == 6, {"order": action.order})
    orbit_ok = orbit_sum(action, (1, 0)) == Z1 and orbit_sum(action, (0, 1)) == Z2 and orbit_sum(action, (0, -1)) == Z3
    report.add("generators_are_orbit_sums", orbit_ok, {"Z1": R.format(Z1), "Z2": R.format(Z2), "Z3": R.format(Z3)})
    report.add("generators_invariant", all(is_invariant(action, z) for z in (Z1, Z2, Z3)))
    basis = invariant_basis(action, box)
    burnside = burnside_orbit_count(action, box)
    report.add("invariant_basis_burnside", len(basis) == burnside, {"basis_size": len(basis), "burnside": burnside, "box_points": len(box)})
    expansion = GeneratorExpansion([Z1, Z2, Z3], bounds.membership_degree)
    G = generator_ring(3, ["Z1", "Z2", "Z3"])
    certs, failures = {}, []
    for f in basis:
        cert = expansion.solve(f)
        if cert is None or substitute(cert, [Z1, Z2, Z3]) != f:
            failures.append(R.format(f))
        else:
            certs[R.format(f)] = G.format(cert)
    report.add(
        "invariants_generated",
        not failures,
        {"degree": bounds.membership_degree, "certified": len(certs), "failures": failures, "certificates": certs},
    )
    return report


def psu3_relation(bounds: Bounds) -> SuiteReport:
    action, Z1, Z2, Z3 = weyl_psu3()
    gens = [Z1, Z2, Z3]
    G = generator_ring(3, ["Z1", "Z2", "Z3"])
    report = SuiteReport("psu3.relation", {"relation_degree": bounds.relation_degree, "principality_degree": bounds.membership_degree})
    rels = relation_kernel(gens, bounds.relation_degree)
    report.add("single_relation", len(rels) == 1, [G.format(r) for r in rels])
    if not rels:
        return report
    g = rels[0]
    report.add("relation_vanishes", substitute(g, gens).is_zero())
    change = hypersurface_change_of_variables(g)
    if change is None:
        report.add("change_of_variables", False, "no affine substitution to X^3 - Y*Z found")
    else:
        report.add(
            "change_of_variables",
            True,
            {
                "X": G.format(change["X"]),
                "Y": G.format(change["Y"]),
                "Z": G.format(change["Z"]),
                "relation": f"{'' if change['sign'] == 1 else '-'}(X^3 - Y*Z)",
            },
        )
    D = bounds.membership_degree
    higher = relation_kernel(gens, D)
    from .lattice import IntMatrix, lattices_equal
    from .poly import monomials_up_to

    expansion_exps = monomials_up_to(3, D)
    index = {e: i for i, e in enumerate(expansion_exps)}

    def vec(P: Polynomial) -> list[int]:
        out = [0] * len(expansion_exps)
        for e, c in P.items():
            out[index[e]] = c
        return out

    multiples = [g.shift(m) for m in monomials_up_to(3, D - 3)] if D >= 3 else []
    A = IntMatrix.from_columns([vec(r) for r in higher], len(expansion_exps))
    B = IntMatrix.from_columns([vec(r) for r in multiples], len(expansion_exps))
    report.add("relation_ideal_principal", lattices_equal(A, B), {"degree": D, "relations": len(higher), "multiples": len(multiples)})
    return report


EXPECTED_OMEGA3 = {8: AbelianInvariants(1), 10: AbelianInvariants(1), 12: AbelianInvariants(0, (3,))}


def _pieces(M, degrees, jobs):
    return _pmap(lambda d: graded_piece(M, d), degrees, jobs)


def psu3_omega(bounds: Bounds) -> SuiteReport:
    B = hypersurface_ring()
    degrees = list(range(bounds.max_degree + 1))
    report = SuiteReport("psu3.omega", {"ring": "Z[X,Y,Z]/(X^3 - Y*Z)", "weights": {"X": 2, "Y": 3, "Z": 3}, "max_degree": bounds.max_degree})
    for p in range(3):
        pieces = _pieces(omega(B, p), degrees, bounds.jobs)
        report.add(f"omega{p}_pieces", None, {str(r.degree): str(r.invariants) for r in pieces})
    pieces = _pieces(omega(B, 3), degrees, bounds.jobs)
    got = {r.degree: r.invariants for r in pieces}
    mismatches = [
        f"{d}: got {got[d]}, expected {EXPECTED_OMEGA3.get(d, AbelianInvariants(0))}"
        for d in degrees
        if got[d] != EXPECTED_OMEGA3.get(d, AbelianInvariants(0))
    ]
    report.add(
        "omega3_pieces",
        not mismatches,
        {"nonzero": {str(r.degree): {"group": str(r.invariants), "basis": list(r.generators)} for r in pieces if not r.invariants.is_trivial}, "mismatches": mismatches},
    )
    return report


def psu3_torsion(bounds: Bounds) -> SuiteReport:
    B = hypersurface_ring()
    degrees = list(range(bounds.max_degree + 1))
    report = SuiteReport("psu3.torsion", {"max_degree": bounds.max_degree, "torsion_power": bounds.torsion_power})
    O2, O3 = omega(B, 2), omega(B, 3)
    tors = _pmap(lambda d: torsion_graded(O2, d, None, bounds.torsion_power), degrees, bounds.jobs)
    top = _pieces(O3, degrees, bounds.jobs)
    rows = {}
    mismatches = []
    rational = []
    for t, o in zip(tors, top):
        rows[str(t.degree)] = {"T(omega2)": str(t.invariants), "omega3": str(o.invariants), "torsion_basis": list(t.generators)}
        if t.invariants != o.invariants:
            mismatches.append(t.degree)
        if t.invariants.free_rank != o.invariants.free_rank:
            rational.append(t.degree)
    report.add("multipliers", None, {"multipliers": list(tors[0].multipliers) if tors else [], "power": bounds.torsion_power})
    report.add("omega3_iso_torsion_omega2", not mismatches, {"pieces": {k: v for k, v in rows.items() if v["T(omega2)"] != "0" or v["omega3"] != "0"}, "mismatched_degrees": mismatches})
    report.add("omega3_iso_torsion_omega2_after_inverting_3", not rational, {"mismatched_degrees": rational})
    return report


def psu3_descent(bounds: Bounds) -> SuiteReport:
    """Exploratory: the descent comparison for the non-simply-connected case."""
    action, Z1, Z2, Z3 = weyl_psu3()
    report = SuiteReport("psu3.descent", {"box": bounds.box, "box_mode": "interior"})
    for p in range(3):
        rep = compare_jstar_image(action, [Z1, Z2, Z3], p, WeightBox.interior(action, bounds.box))
        details = rep.to_dict()
        details["missing"] = details["missing"][:5]
        report.add(f"forms_p{p}_vs_jstar_image", None, details)
    return report


SU_SUITES = {"tor": su_tor, "invariants": su_invariants, "lemma52": su_descent}
PSU3_SUITES = {
    "generators": psu3_generators,
    "relation": psu3_relation,
    "omega": psu3_omega,
    "torsion": psu3_torsion,
    "lemma52": psu3_descent,
}
