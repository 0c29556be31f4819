"""Finite groups acting on character lattices by monomial substitution.

An element g acts on a Laurent monomial by ``g . X^a = X^(M_g a)``. Weyl groups
are built from permutations of the eigenvalues ``lambda_1..lambda_n`` of a
diagonal matrix (with ``lambda_1 ... lambda_n = 1``) and transported to the
torus coordinates, so the only hard-coded input is how each coordinate is
written in the lambdas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .lattice import IntMatrix, LatticeSolver, integer_kernel
from .poly import Exponents, Polynomial, RingPresentation, laurent_ring, monomials_up_to, polynomial_ring

Matrix = tuple[tuple[int, ...], ...]


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))) for i in range(len(A)))


def _apply(M: Matrix, a: Sequence[int]) -> Exponents:
    return tuple(sum(r[j] * a[j] for j in range(len(a))) for r in M)


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class GroupAction:
    """A finite matrix group acting on the exponent lattice of a Laurent ring."""

    ring: RingPresentation
    elements: tuple[Matrix, ...]
    generators: tuple[int, ...]
    identity: int
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = field(default=())

    @classmethod
    def generated_by(cls, ring: RingPresentation, gens: Sequence[Matrix], names: Sequence[str] = ()) -> GroupAction:
        n = ring.nvars
        if ring.relations or not all(v.laurent for v in ring.variables):
            raise ValueError("group actions are defined on Laurent rings without relations")
        gens = [tuple(tuple(int(x) for x in r) for r in g) for g in gens]
        for g in gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise ValueError("generator matrix has the wrong size")
            det = _det(g)
            if det not in (1, -1):
                raise ValueError(f"generator {g} is not invertible over Z")
        ident = _identity(n)
        elements = [ident]
        index = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    gh = _matmul(g, h)
                    if gh not in index:
                        index[gh] = len(elements)
                        elements.append(gh)
                        nxt.append(gh)
                        if len(elements) > 100000:
                            raise ValueError("generated group is too large (infinite?)")
            frontier = nxt
        table = tuple(tuple(index[_matmul(a, b)] for b in elements) for a in elements)
        gen_idx = tuple(index[g] for g in gens)
        return cls(ring, tuple(elements), gen_idx, 0, table, tuple(names))

    @property
    def order(self) -> int:
        return len(self.elements)

    def matrix(self, g: int) -> Matrix:
        if not 0 <= g < len(self.elements):
            raise IndexError(f"invalid group element index {g}")
        return self.elements[g]

    def act_exponent(self, g: int, a: Sequence[int]) -> Exponents:
        return _apply(self.matrix(g), a)

    def is_closed(self) -> bool:
        index = {m: i for i, m in enumerate(self.elements)}
        return all(
            index.get(_matmul(a, b)) == self.table[i][j]
            for i, a in enumerate(self.elements)
            for j, b in enumerate(self.elements)
        )

    def orbit(self, a: Sequence[int]) -> tuple[Exponents, ...]:
        """Orbit of an exponent vector, largest first in the ring's canonical order."""
        a = tuple(a)
        seen = {a}
        stack = [a]
        gens = [self.elements[g] for g in self.generators]
        while stack:
            x = stack.pop()
            for M in gens:
                y = _apply(M, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return tuple(sorted(seen, key=self.ring.order_key, reverse=True))

    def stabilizer_size(self, a: Sequence[int]) -> int:
        a = tuple(a)
        return sum(1 for M in self.elements if _apply(M, a) == a)


def _det(M: Matrix) -> int:
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det(tuple(r[:j] + r[j + 1:] for r in M[1:])) for j in range(n) if M[0][j])


def act_on_poly(action: GroupAction, g: int, f: Polynomial) -> Polynomial:
    M = action.matrix(g)
    if f.nvars != action.ring.nvars:
        raise ValueError("polynomial is not over the acted-on ring")
    return Polynomial(f.nvars, {_apply(M, m): c for m, c in f.items()})


def orbit_sum(action: GroupAction, m: Sequence[int]) -> Polynomial:
    return Polynomial(action.ring.nvars, {a: 1 for a in action.orbit(m)})


def is_invariant(action: GroupAction, f: Polynomial) -> bool:
    return all(act_on_poly(action, g, f) == f for g in action.generators)


# -- lambda coordinates -------------------------------------------------------------


def _reduce_lambda(v: Sequence[int]) -> tuple[int, ...]:
    # lambda_1 ... lambda_n = 1: drop the last coordinate after normalising it to 0
    return tuple(x - v[-1] for x in v[:-1])


def _inverse(B: list[list[int]]) -> list[list[Fraction]]:
    n = len(B)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(B)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def weyl_from_lambda(names: Sequence[str], lambda_exponents: Sequence[Sequence[int]]) -> GroupAction:
    """Symmetric group on ``lambda_1..lambda_n`` transported to torus coordinates.

    ``lambda_exponents[i]`` is the exponent vector (length n) of coordinate i
    as a monomial in the lambdas. The generators are the adjacent
    transpositions; their matrices must come out integral.
    """
    n = len(lambda_exponents[0])
    r = len(names)
    if r != n - 1:
        raise ValueError("need rank = n - 1 torus coordinates")
    B = [[_reduce_lambda(v)[i] for v in lambda_exponents] for i in range(r)]  # columns = coordinates
    Binv = _inverse(B)
    gens = []
    labels = []
    for k in range(n - 1):
        cols = []
        for v in lambda_exponents:
            w = list(v)
            w[k], w[k + 1] = w[k + 1], w[k]
            red = _reduce_lambda(w)
            coords = [sum(Binv[i][j] * red[j] for j in range(r)) for i in range(r)]
            if any(c.denominator != 1 for c in coords):
                raise ValueError("permutation does not preserve the coordinate lattice")
            cols.append([int(c) for c in coords])
        gens.append(tuple(tuple(cols[j][i] for j in range(r)) for i in range(r)))
        labels.append(f"s{k + 1}")
    ring = laurent_ring(names)
    return GroupAction.generated_by(ring, gens, labels)


def lambda_character(action_ring: RingPresentation, lambda_exponents: Sequence[Sequence[int]], lam: Sequence[int]) -> Polynomial | None:
    """Express ``lambda^lam`` in torus coordinates, or None if it is not a character of the torus."""
    n = len(lam)
    r = n - 1
    B = [[_reduce_lambda(v)[i] for v in lambda_exponents] for i in range(r)]
    Binv = _inverse(B)
    red = _reduce_lambda(lam)
    coords = [sum(Binv[i][j] * red[j] for j in range(r)) for i in range(r)]
    if any(c.denominator != 1 for c in coords):
        return None
    return Polynomial.monomial([int(c) for c in coords])


def weyl_su(n: int) -> tuple[GroupAction, list[Polynomial]]:
    """Weyl group of SU(n) on ``Z[x_1^{+-1}..x_{n-1}^{+-1}]`` plus the fundamental characters.

    Coordinates are ``x_i = lambda_i`` with ``lambda_n = (x_1 ... x_{n-1})^{-1}``;
    the fundamental characters are the elementary symmetric functions
    ``e_1..e_{n-1}`` of the lambdas.
    """
    if n < 2:
        raise ValueError("SU(n) needs n >= 2")
    names = ["x"] if n == 2 else [f"x{i + 1}" for i in range(n - 1)]
    lam = [[int(i == j) for j in range(n)] for i in range(n - 1)]
    action = weyl_from_lambda(names, lam)
    r = n - 1
    lambdas = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        lambdas.append(_reduce_lambda(e))
    chars = []
    for k in range(1, n):
        terms: dict = {}
        for S in combinations(range(n), k):
            m = tuple(sum(lambdas[i][j] for i in S) for j in range(r))
            terms[m] = terms.get(m, 0) + 1
        chars.append(Polynomial(r, terms))
    return action, chars


PSU3_LAMBDA = ((-1, 1, 0), (3, 0, 0))  # X1 = lambda2/lambda1, X2 = lambda1^3


def weyl_psu3() -> tuple[GroupAction, Polynomial, Polynomial, Polynomial]:
    """Weyl group of PSU(3) on ``Z[X1^{+-1}, X2^{+-1}]`` and the generators Z1, Z2, Z3."""
    action = weyl_from_lambda(["X1", "X2"], PSU3_LAMBDA)
    R = action.ring
    Z1 = R.parse("X1 + X1^-1 + X1*X2 + X1^-1*X2^-1 + X1^2*X2 + X1^-2*X2^-1")
    Z2 = R.parse("X2 + X1^3*X2 + X1^-3*X2^-2")
    Z3 = R.parse("X2^-1 + X1^-3*X2^-1 + X1^3*X2^2")
    return action, Z1, Z2, Z3


# -- weight boxes and invariants ------------------------------------------------------


@dataclass(frozen=True)
class WeightBox:
    """A finite W-stable set of exponent vectors."""

    points: frozenset
    radius: int | None = None

    @classmethod
    def interior(cls, action: GroupAction, radius: int) -> WeightBox:
        """Union of the orbits lying entirely inside the coordinate box ``|a_i| <= radius``."""
        pts = set()
        for a in _coordinate_box(action.ring.nvars, radius):
            if a in pts:
                continue
            orb = action.orbit(a)
            if all(max(map(abs, b), default=0) <= radius for b in orb):
                pts.update(orb)
        return cls(frozenset(pts), radius)

    @classmethod
    def closure(cls, action: GroupAction, radius: int) -> WeightBox:
        """Coordinate box closed under the action."""
        pts = set()
        for a in _coordinate_box(action.ring.nvars, radius):
            if a not in pts:
                pts.update(action.orbit(a))
        return cls(frozenset(pts), radius)

    @classmethod
    def empty(cls) -> WeightBox:
        return cls(frozenset(), 0)

    def __contains__(self, a) -> bool:
        return tuple(a) in self.points

    def __len__(self) -> int:
        return len(self.points)

    def is_stable(self, action: GroupAction) -> bool:
        return all(action.act_exponent(g, a) in self.points for a in self.points for g in action.generators)

    def orbits(self, action: GroupAction) -> list[tuple[Exponents, ...]]:
        """Orbits in the box, ordered by their largest element (descending)."""
        seen = set()
        out = []
        for a in sorted(self.points, key=action.ring.order_key, reverse=True):
            if a in seen:
                continue
            orb = action.orbit(a)
            seen.update(orb)
            out.append(orb)
        return out


def _coordinate_box(r: int, radius: int):
    if r == 0:
        yield ()
        return
    for head in range(-radius, radius + 1):
        for tail in _coordinate_box(r - 1, radius):
            yield (head,) + tail


def weight_box(action: GroupAction, radius: int, mode: str = "interior") -> WeightBox:
    if mode == "interior":
        return WeightBox.interior(action, radius)
    if mode == "closure":
        return WeightBox.closure(action, radius)
    raise ValueError(f"unknown box mode {mode!r}")


def invariant_basis(action: GroupAction, box: WeightBox) -> list[Polynomial]:
    """One orbit sum per orbit in the box: a Z-basis of the invariants of its span."""
    return [Polynomial(action.ring.nvars, {a: 1 for a in orb}) for orb in box.orbits(action)]


def burnside_orbit_count(action: GroupAction, box: WeightBox) -> int:
    fixed = sum(1 for M in action.elements for a in box.points if _apply(M, a) == a)
    q, r = divmod(fixed, action.order)
    if r:
        raise AssertionError("Burnside count is not an integer; box is not stable")
    return q


# -- subring membership and relations ------------------------------------------------


def generator_ring(k: int, names: Sequence[str] | None = None) -> RingPresentation:
    if names is None:
        names = ["u", "v", "w"][:k] if k <= 3 else [f"u{i + 1}" for i in range(k)]
    return polynomial_ring(names)


class GeneratorExpansion:
    """All monomials in the generators up to a total degree, expanded in the ambient ring."""

    def __init__(self, gens: Sequence[Polynomial], max_degree: int):
        if not gens:
            raise ValueError("need at least one generator")
        nv = gens[0].nvars
        if any(g.nvars != nv for g in gens):
            raise ValueError("generators live in different rings")
        self.gens = list(gens)
        self.max_degree = max_degree
        self.exponents = monomials_up_to(len(gens), max_degree)
        cache: dict[Exponents, Polynomial] = {(0,) * len(gens): Polynomial.constant(1, nv)}
        for e in sorted(self.exponents, key=sum):
            if e in cache:
                continue
            i = next(j for j, x in enumerate(e) if x)
            prev = list(e)
            prev[i] -= 1
            cache[e] = cache[tuple(prev)] * self.gens[i]
        self.values = [cache[e] for e in self.exponents]
        support = set()
        for v in self.values:
            support.update(v.terms)
        self.rows = sorted(support)
        self.row_index = {m: i for i, m in enumerate(self.rows)}
        cols = [[0] * len(self.rows) for _ in self.values]
        for j, v in enumerate(self.values):
            for m, c in v.items():
                cols[j][self.row_index[m]] = c
        self.matrix = IntMatrix.from_columns(cols, len(self.rows))
        self._solver: LatticeSolver | None = None

    def vector(self, f: Polynomial) -> list[int] | None:
        out = [0] * len(self.rows)
        for m, c in f.items():
            i = self.row_index.get(m)
            if i is None:
                return None
            out[i] = c
        return out

    def coefficients_to_poly(self, coeffs: Sequence[int], ring: RingPresentation | None = None) -> Polynomial:
        k = len(self.gens)
        return Polynomial(k, {e: c for e, c in zip(self.exponents, coeffs) if c})

    def solve(self, f: Polynomial) -> Polynomial | None:
        vec = self.vector(f)
        if vec is None:
            return None
        if self._solver is None:
            self._solver = LatticeSolver(self.matrix)
        x = self._solver.solve(vec)
        if x is None:
            return None
        return self.coefficients_to_poly(x)

    def relations(self) -> list[Polynomial]:
        K = integer_kernel(self.matrix)
        return [self.coefficients_to_poly(col) for col in K.columns()]


def substitute(P: Polynomial, gens: Sequence[Polynomial]) -> Polynomial:
    """Evaluate a polynomial in generator variables at the given ring elements."""
    nv = gens[0].nvars
    out = Polynomial.zero(nv)
    for e, c in P.items():
        term = Polynomial.constant(c, nv)
        for g, k in zip(gens, e):
            if k:
                term = term * g ** k
        out = out + term
    return out


def subring_membership(f: Polynomial, gens: Sequence[Polynomial], max_degree: int) -> Polynomial | None:
    """Integer polynomial P of total degree <= max_degree with ``P(gens) == f``, or None.

    None only means no certificate exists within the degree bound.
    """
    cert = GeneratorExpansion(gens, max_degree).solve(f)
    if cert is not None and substitute(cert, gens) != f:
        raise AssertionError("membership certificate failed re-verification")
    return cert


def relation_kernel(gens: Sequence[Polynomial], max_degree: int) -> list[Polynomial]:
    """Z-basis (Hermite-reduced) of polynomial relations of total degree <= max_degree."""
    rels = GeneratorExpansion(gens, max_degree).relations()
    for r in rels:
        if not substitute(r, gens).is_zero():
            raise AssertionError("relation does not vanish on substitution")
    return rels


def hypersurface_change_of_variables(relation: Polynomial) -> dict | None:
    """Find an affine substitution carrying a cubic relation in (u, v, w) to ``X^3 - Y*Z``.

    Looks for ``X = u_a + s``, ``Y = u_b + p*u_a + q``, ``Z = u_c + p'*u_a + q'``
    (with ``(a, b, c)`` a permutation and an overall sign) such that the relation
    equals ``sign * (X^3 - Y*Z)``. The shifts are read off from the coefficients
    of the relation and the whole identity is then checked by expansion.
    Returns a dict of the substitution or None.
    """
    if relation.nvars != 3:
        return None
    from itertools import permutations

    for sign in (1, -1):
        g = relation * sign
        for a, b, c in permutations(range(3)):
            def mono(**exps):
                m = [0, 0, 0]
                for idx, e in exps.items():
                    m[{"a": a, "b": b, "c": c}[idx]] += e
                return tuple(m)

            if g.coeff(mono(a=3)) != 1 or g.coeff(mono(b=1, c=1)) != -1:
                continue
            p = -g.coeff(mono(a=1, c=1))  # Y*Z contributes p*u_a*u_c
            pp = -g.coeff(mono(a=1, b=1))
            q = -g.coeff(mono(c=1))
            qq = -g.coeff(mono(b=1))
            num = g.coeff(mono(a=2)) + p * pp
            if num % 3:
                continue
            s = num // 3
            u = [Polynomial.variable(i, 3) for i in range(3)]
            X = u[a] + s
            Y = u[b] + u[a] * p + q
            Z = u[c] + u[a] * pp + qq
            if X ** 3 - Y * Z == g:
                return {"sign": sign, "X": X, "Y": Y, "Z": Z, "order": (a, b, c)}
    return None
