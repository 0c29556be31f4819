"""Independent reference computations used by the tests.

Nothing here imports the algorithms under test; only plain data types
(Polynomial, IntMatrix) cross the boundary.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

import sympy

from repdiff.poly import Polynomial


# -- determinants and Smith invariants ------------------------------------------------------


def frac_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    assert det.denominator == 1
    return int(det)


def minor_gcds(A: list[list[int]]) -> list[int]:
    """D_k = gcd of all k x k minors, for k = 1..min(m, n)."""
    m, n = len(A), len(A[0]) if A else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, frac_det([[A[i][j] for j in cols] for i in rows]))
                if g == 1:
                    break
            if g == 1:
                break
        out.append(g)
    return out


def smith_invariants_oracle(A: list[list[int]]) -> list[int]:
    """Diagonal d_k = D_k / D_{k-1}, zero once D_k vanishes."""
    out, prev = [], 1
    for Dk in minor_gcds(A):
        if Dk == 0:
            out.append(0)
            prev = 0
            continue
        out.append(Dk // prev)
        prev = Dk
    return out


# -- polynomials ------------------------------------------------------------------------------


def to_sympy(f: Polynomial, syms):
    return sum((c * sympy.Mul(*[s ** e for s, e in zip(syms, exps)]) for exps, c in f.items()), sympy.Integer(0))


def from_sympy(expr, syms) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return Polynomial(len(syms), {tuple(int(e) for e in m): int(c) for m, c in poly.terms()})


def random_poly(rng: random.Random, nvars: int, max_exp: int = 3, terms: int = 4, laurent: bool = False, coeff: int = 9) -> Polynomial:
    lo = -max_exp if laurent else 0
    t = {}
    for _ in range(rng.randint(0, terms)):
        e = tuple(rng.randint(lo, max_exp) for _ in range(nvars))
        t[e] = rng.randint(-coeff, coeff)
    return Polynomial(nvars, t)


def hilbert_coefficients(weights, relation_degrees, top: int) -> list[int]:
    """Coefficients of prod(1 - t^r) / prod(1 - t^w) up to t^top (complete intersection)."""
    series = [1] + [0] * top
    for w in weights:
        for d in range(w, top + 1):
            series[d] += series[d - w]
    for r in relation_degrees:
        series = [series[d] - (series[d - r] if d >= r else 0) for d in range(top + 1)]
    return series


# -- Weyl groups as permutations of lambda ------------------------------------------------


def _solve_rational(B: list[list[int]], v: list[int]) -> tuple[int, ...] | None:
    """Integer a with sum_k a_k B[k] == v, or None; B is square and invertible."""
    M = sympy.Matrix([list(col) for col in zip(*B)])
    sol = M.solve(sympy.Matrix(v))
    if any(not x.is_integer for x in sol):
        return None
    return tuple(int(x) for x in sol)


def lambda_orbit_maps(lambda_exponents: list[tuple[int, ...]]):
    """Maps on character weights induced by permuting lambda_1..lambda_n.

    ``lambda_exponents[k]`` gives the lambda-exponents of the k-th torus
    variable (lambda_n may be present or eliminated; vectors are compared
    modulo (1, ..., 1)).
    """
    n = len(lambda_exponents[0])

    def normalize(v):
        return [x - v[-1] for x in v]

    B = [normalize(list(v))[:-1] for v in lambda_exponents]

    maps = []
    for perm in permutations(range(n)):
        def act(a, perm=perm):
            lam = [0] * n
            for k, ak in enumerate(a):
                for i, e in enumerate(lambda_exponents[k]):
                    lam[i] += ak * e
            moved = [0] * n
            for i, x in enumerate(lam):
                moved[perm[i]] = x
            return _solve_rational(B, normalize(moved)[:-1])
        maps.append(act)
    return maps


def brute_orbits(points, maps) -> set[frozenset]:
    return {frozenset(m(a) for m in maps) for a in points}
