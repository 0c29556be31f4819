"""Finitely presented graded modules and Kähler differentials.

A module is ``B^gens / (relation columns)`` over a :class:`RingPresentation`.
For graded rings every computation is done one graded piece at a time: a
piece is a finitely generated abelian group computed exactly by assembling
an integer matrix on monomial bases and reading off its Smith form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .lattice import (
    AbelianInvariants,
    IntMatrix,
    LatticeSolver,
    cokernel_invariants,
    column_basis,
    integer_kernel,
    smith_with_inverse,
)
from .poly import INHOMOGENEOUS, Polynomial, RingPresentation, format_terms, normal_form

Element = tuple[Polynomial, ...]


class UnsupportedGrading(ValueError):
    """Raised when a graded piece would be infinite (Laurent directions)."""


def _wedge_label(names: Sequence[str], subset: Sequence[int]) -> str:
    if not subset:
        return "1"
    return "^".join(f"d{names[i]}" for i in subset)


@dataclass(frozen=True)
class FPModule:
    """``ring^n / span(relations)``; ``relations`` is a tuple of columns."""

    ring: RingPresentation
    gen_shifts: tuple[int, ...]
    relations: tuple[Element, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        ring = self.ring
        n = len(self.gen_shifts)
        object.__setattr__(self, "gen_shifts", tuple(self.gen_shifts))
        cols = []
        for col in self.relations:
            if len(col) != n:
                raise ValueError("relation column has the wrong length")
            col = tuple(normal_form(e, ring) for e in col)
            if any(not e.is_zero() for e in col):
                cols.append(col)
        object.__setattr__(self, "relations", tuple(cols))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i + 1}" for i in range(n)))
        elif len(self.labels) != n:
            raise ValueError("one label per generator")
        if ring.graded and not ring.is_laurent:
            self.relation_degrees  # validates homogeneity

    @property
    def ngens(self) -> int:
        return len(self.gen_shifts)

    @property
    def rel_matrix(self) -> tuple[tuple[Polynomial, ...], ...]:
        """Relations as rows-by-columns: entry [i][j] is generator i of relation j."""
        return tuple(tuple(col[i] for col in self.relations) for i in range(self.ngens))

    @cached_property
    def relation_degrees(self) -> tuple[int, ...]:
        out = []
        for col in self.relations:
            degs = set()
            for j, e in enumerate(col):
                if e.is_zero():
                    continue
                w = self.ring.weight_of(e)
                if w is INHOMOGENEOUS:
                    raise ValueError(f"relation entry {self.ring.format(e)} is not homogeneous")
                degs.add(w + self.gen_shifts[j])
            if len(degs) != 1:
                raise ValueError(f"relation column is not homogeneous (degrees {sorted(degs)})")
            out.append(degs.pop())
        return tuple(out)

    def zero(self) -> Element:
        return tuple(self.ring.zero() for _ in range(self.ngens))

    def basis_element(self, j: int, coeff: Polynomial | None = None) -> Element:
        out = list(self.zero())
        out[j] = coeff if coeff is not None else self.ring.one()
        return tuple(out)

    def reduce(self, elem: Sequence[Polynomial]) -> Element:
        return tuple(normal_form(e, self.ring) for e in elem)

    def format(self, elem: Sequence[Polynomial]) -> str:
        parts = []
        for lab, e in zip(self.labels, elem):
            if e.is_zero():
                continue
            text = self.ring.format(e)
            parts.append(f"({text})*{lab}" if len(e) > 1 else _scale_label(text, lab))
        return " + ".join(parts) if parts else "0"

    # -- graded pieces --------------------------------------------------------

    def _require_graded(self) -> None:
        if self.ring.is_laurent or not self.ring.graded:
            raise UnsupportedGrading("graded pieces need a positively graded ring without Laurent variables")

    def piece_basis(self, degree: int) -> list[tuple[int, tuple[int, ...]]]:
        self._require_graded()
        return [(j, mu) for j, s in enumerate(self.gen_shifts) for mu in self.ring.standard_monomials(degree - s)]

    def piece_labels(self, degree: int) -> list[str]:
        names = self.ring.names
        out = []
        for j, mu in self.piece_basis(degree):
            mono = format_terms([mu], {mu: 1}, names)
            out.append(self.labels[j] if mono == "1" else f"{mono}*{self.labels[j]}")
        return out

    def element_vector(self, elem: Sequence[Polynomial], degree: int) -> list[int]:
        """Coordinates of a homogeneous element of the given degree in :meth:`piece_basis`."""
        basis = self.piece_basis(degree)
        index = {b: i for i, b in enumerate(basis)}
        vec = [0] * len(basis)
        for j, e in enumerate(self.reduce(elem)):
            for mu, c in e.items():
                i = index.get((j, mu))
                if i is None:
                    raise ValueError(f"element has a term outside degree {degree}")
                vec[i] = c
        return vec

    def vector_element(self, vec: Sequence[int], degree: int) -> Element:
        terms: list[dict] = [{} for _ in range(self.ngens)]
        for (j, mu), c in zip(self.piece_basis(degree), vec):
            if c:
                terms[j][mu] = c
        return tuple(Polynomial(self.ring.nvars, t) for t in terms)

    def relation_matrix(self, degree: int) -> IntMatrix:
        """Columns span the relations in the given degree, in :meth:`piece_basis` coordinates."""
        basis = self.piece_basis(degree)
        index = {b: i for i, b in enumerate(basis)}
        cols = []
        for col, t in zip(self.relations, self.relation_degrees):
            for nu in self.ring.standard_monomials(degree - t):
                vec = [0] * len(basis)
                for j, e in enumerate(col):
                    if e.is_zero():
                        continue
                    for mu, c in normal_form(e.shift(nu), self.ring).items():
                        vec[index[(j, mu)]] += c
                cols.append(vec)
        return IntMatrix.from_columns(cols, len(basis))

    def homogeneous_components(self, elem: Sequence[Polynomial]) -> dict[int, Element]:
        self._require_graded()
        parts: dict[int, list[dict]] = {}
        for j, e in enumerate(self.reduce(elem)):
            for mu, c in e.items():
                d = self.ring.degree(mu) + self.gen_shifts[j]
                parts.setdefault(d, [{} for _ in range(self.ngens)])[j][mu] = c
        return {d: tuple(Polynomial(self.ring.nvars, t) for t in ts) for d, ts in sorted(parts.items())}

    def is_zero(self, elem: Sequence[Polynomial]) -> bool:
        """Whether the element's class vanishes in the module."""
        elem = self.reduce(elem)
        if all(e.is_zero() for e in elem):
            return True
        if not self.relations:
            return False
        self._require_graded()
        for d, comp in self.homogeneous_components(elem).items():
            if LatticeSolver(self.relation_matrix(d)).solve(self.element_vector(comp, d)) is None:
                return False
        return True

    def scale(self, f: Polynomial, elem: Sequence[Polynomial]) -> Element:
        return tuple(normal_form(f * e, self.ring) for e in elem)


def _scale_label(coeff_text: str, label: str) -> str:
    if coeff_text == "1":
        return label
    if coeff_text == "-1":
        return f"-{label}"
    return f"{coeff_text}*{label}"


def add_elements(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> Element:
    return tuple(x + y for x, y in zip(a, b))


def sub_elements(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> Element:
    return tuple(x - y for x, y in zip(a, b))


# -- module maps -------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleMap:
    """Ring-linear map given by a matrix (rows: target generators, columns: source generators)."""

    source: FPModule
    target: FPModule
    matrix: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self):
        if len(self.matrix) != self.target.ngens or any(len(r) != self.source.ngens for r in self.matrix):
            raise ValueError("matrix shape does not match source/target generators")

    def __call__(self, elem: Sequence[Polynomial]) -> Element:
        out = []
        for row in self.matrix:
            acc = self.target.ring.zero()
            for a, e in zip(row, elem):
                if not a.is_zero() and not e.is_zero():
                    acc = acc + a * e
            out.append(normal_form(acc, self.target.ring))
        return tuple(out)

    def is_well_defined(self) -> bool:
        """Every source relation maps into the target relations (checked per graded degree)."""
        return all(self.target.is_zero(self(col)) for col in self.source.relations)


def multiplication_map(M: FPModule, f: Polynomial) -> ModuleMap:
    n = M.ngens
    z = M.ring.zero()
    return ModuleMap(M, M, tuple(tuple(f if i == j else z for j in range(n)) for i in range(n)))


# -- differentials ------------------------------------------------------------------


def kahler_presentation(ring: RingPresentation) -> FPModule:
    """Omega^1: free on dx_i modulo the Jacobian column of each relation."""
    n = ring.nvars
    cols = tuple(tuple(normal_form(rel.derivative(i), ring) for i in range(n)) for rel in ring.relations)
    labels = tuple(f"d{name}" for name in ring.names)
    return FPModule(ring, ring.weights, cols, labels)


def _merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    # sign of the shuffle sorting the concatenation a + b (both sorted, disjoint)
    inv = 0
    for x in a:
        inv += sum(1 for y in b if y < x)
    return -1 if inv % 2 else 1


def exterior_power(M: FPModule, p: int) -> FPModule:
    """Lambda^p M: generators are p-subsets of M's generators, relations are rel ^ (p-1)-subsets."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    ring = M.ring
    n = M.ngens
    subsets = list(combinations(range(n), p))
    index = {s: i for i, s in enumerate(subsets)}
    shifts = tuple(sum(M.gen_shifts[i] for i in s) for s in subsets)
    labels = tuple("^".join(M.labels[i] for i in s) if s else "1" for s in subsets)
    if p == 0:
        return FPModule(ring, (0,), (), ("1",))
    rels = []
    for col in M.relations:
        for J in combinations(range(n), p - 1):
            out = [ring.zero() for _ in subsets]
            for j, e in enumerate(col):
                if e.is_zero() or j in J:
                    continue
                merged = tuple(sorted((j,) + J))
                sign = _merge_sign((j,), J)
                out[index[merged]] = out[index[merged]] + e * sign
            rels.append(tuple(out))
    return FPModule(ring, shifts, tuple(rels), labels)


def omega(ring: RingPresentation, p: int) -> FPModule:
    return exterior_power(kahler_presentation(ring), p)


@dataclass(frozen=True)
class DeRham:
    """``d: Omega^p -> Omega^{p+1}``, ``d(b * dx_I) = db ^ dx_I``. Additive, not ring-linear."""

    ring: RingPresentation
    p: int
    source: FPModule = field(init=False)
    target: FPModule = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "source", omega(self.ring, self.p))
        object.__setattr__(self, "target", omega(self.ring, self.p + 1))

    def __call__(self, elem: Sequence[Polynomial]) -> Element:
        n = self.ring.nvars
        src = list(combinations(range(n), self.p))
        tgt_index = {s: i for i, s in enumerate(combinations(range(n), self.p + 1))}
        out = [self.ring.zero() for _ in tgt_index]
        for I, b in zip(src, elem):
            if b.is_zero():
                continue
            for j in range(n):
                if j in I:
                    continue
                db = b.derivative(j)
                if db.is_zero():
                    continue
                merged = tuple(sorted((j,) + I))
                out[tgt_index[merged]] = out[tgt_index[merged]] + db * _merge_sign((j,), I)
        return tuple(normal_form(e, self.ring) for e in out)


def de_rham_d(ring: RingPresentation, p: int) -> DeRham:
    if p < 0:
        raise ValueError("p must be nonnegative")
    return DeRham(ring, p)


def d_function(ring: RingPresentation, f: Polynomial) -> Element:
    """The 1-form df."""
    return de_rham_d(ring, 0)((f,))


# -- graded piece reports --------------------------------------------------------------


@dataclass(frozen=True)
class GradedPieceReport:
    degree: int
    invariants: AbelianInvariants
    generators: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "free_rank": self.invariants.free_rank,
            "torsion": list(self.invariants.torsion),
            "basis": list(self.generators),
        }


def _format_vector(vec: Sequence[int], labels: Sequence[str]) -> str:
    parts = []
    for c, lab in zip(vec, labels):
        if not c:
            continue
        body = lab if abs(c) == 1 else f"{abs(c)}*{lab}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def _quotient_generators(R: IntMatrix, ambient: IntMatrix | None, labels: Sequence[str]) -> tuple[AbelianInvariants, tuple[str, ...]]:
    """Invariants and generator descriptions of ``Z^rows / span(R)``.

    If ``ambient`` is given, the coordinates of ``R`` are with respect to the
    columns of ``ambient`` and generators are described in ``labels`` via it.
    """
    _, S, _, Uinv = smith_with_inverse(R)
    diag = S.diagonal()
    inv = AbelianInvariants.from_diagonal(R.rows, diag)
    gens = []
    for i in range(R.rows):
        d = abs(diag[i]) if i < len(diag) else 0
        if d == 1:
            continue
        vec = Uinv.column(i)
        if ambient is not None:
            vec = ambient @ vec
        text = _format_vector(vec, labels)
        gens.append(text if d == 0 else f"{text} (order {d})")
    return inv, tuple(gens)


def graded_piece(M: FPModule, degree: int) -> GradedPieceReport:
    """Abelian group M_degree with descriptions of its cyclic generators."""
    labels = M.piece_labels(degree)
    R = M.relation_matrix(degree)
    inv, gens = _quotient_generators(R, None, labels)
    if inv != cokernel_invariants(R):
        raise AssertionError("Smith form disagreement")
    return GradedPieceReport(degree, inv, gens)


def default_multipliers(ring: RingPresentation) -> list[Polynomial]:
    """Variables and nonconstant Jacobian entries of the relations, deduplicated up to sign."""
    out: list[Polynomial] = []
    seen = set()
    cands = list(ring.gens())
    for rel in ring.relations:
        cands.extend(normal_form(rel.derivative(i), ring) for i in range(ring.nvars))
    for f in cands:
        if f.is_zero() or f.is_constant():
            continue
        key = f if f.coeff(ring.leading_monomial(f)) > 0 else -f
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


@dataclass(frozen=True)
class TorsionCertificate:
    multiplier: str
    power: int
    vector: tuple[int, ...]


@dataclass(frozen=True)
class TorsionReport(GradedPieceReport):
    certificates: tuple[TorsionCertificate, ...] = ()
    multipliers: tuple[str, ...] = ()
    max_power: int = 0

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["multipliers"] = list(self.multipliers)
        out["max_power"] = self.max_power
        return out


def _multiplication_matrix(M: FPModule, f: Polynomial, degree: int) -> tuple[IntMatrix, int]:
    w = M.ring.weight_of(f)
    if w is INHOMOGENEOUS or w is None:
        raise ValueError("multipliers must be nonzero and homogeneous")
    target = degree + w
    tbasis = M.piece_basis(target)
    tindex = {b: i for i, b in enumerate(tbasis)}
    cols = []
    for j, mu in M.piece_basis(degree):
        vec = [0] * len(tbasis)
        for m, c in normal_form(f.shift(mu), M.ring).items():
            vec[tindex[(j, m)]] += c
        cols.append(vec)
    return IntMatrix.from_columns(cols, len(tbasis)), target


def torsion_graded(
    M: FPModule,
    degree: int,
    multipliers: Sequence[Polynomial] | None = None,
    max_power: int = 3,
) -> TorsionReport:
    """Subgroup of M_degree of elements killed by ``f^k`` for a listed f and ``k <= max_power``.

    Sound: each spanning element carries a re-verified certificate. Complete
    only relative to the multiplier list and the power bound.
    """
    ring = M.ring
    if multipliers is None:
        multipliers = default_multipliers(ring)
    basis_labels = M.piece_labels(degree)
    a = len(basis_labels)
    R_d = M.relation_matrix(degree)
    spanning: list[list[int]] = [R_d.column(j) for j in range(R_d.cols)]
    certs: list[TorsionCertificate] = []
    for f in multipliers:
        fk = f ** max_power
        phi, target = _multiplication_matrix(M, fk, degree)
        R_e = M.relation_matrix(target)
        K = integer_kernel(phi.hstack(R_e))
        solver = LatticeSolver(R_e)
        label = ring.format(f)
        for col in K.columns():
            v = col[:a]
            if not any(v):
                continue
            if solver.solve(phi @ v) is None:
                raise AssertionError("torsion certificate failed re-verification")
            certs.append(TorsionCertificate(label, max_power, tuple(v)))
            spanning.append(v)
    if a == 0:
        inv = AbelianInvariants(0)
        return TorsionReport(degree, inv, (), (), (), tuple(ring.format(f) for f in multipliers), max_power)
    L = column_basis(IntMatrix.from_columns(spanning, a)) if spanning else IntMatrix(a, 0)
    lsolver = LatticeSolver(L)
    coords = []
    for j in range(R_d.cols):
        y = lsolver.solve(R_d.column(j))
        if y is None:
            raise AssertionError("relations are not contained in the torsion lattice")
        coords.append(y)
    C = IntMatrix.from_columns(coords, L.cols) if coords else IntMatrix(L.cols, 0)
    inv, gens = _quotient_generators(C, L, basis_labels)
    return TorsionReport(
        degree,
        inv,
        gens,
        (f"complete relative to multipliers and power <= {max_power}",),
        tuple(certs),
        tuple(ring.format(f) for f in multipliers),
        max_power,
    )


def verify_torsion_certificate(M: FPModule, degree: int, cert: TorsionCertificate) -> bool:
    f = M.ring.parse(cert.multiplier)
    elem = M.vector_element(cert.vector, degree)
    return M.is_zero(M.scale(f ** cert.power, elem))
