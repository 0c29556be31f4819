"""Chain complexes of graded free modules, the Koszul resolution, and Tor.

Homology is computed one graded degree at a time: each differential becomes
an integer matrix between monomial bases and ``H = ker / im`` is read off
with integer kernels and Smith forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .lattice import AbelianInvariants, IntMatrix, LatticeSolver, cokernel_invariants, integer_kernel
from .modules import graded_piece, omega
from .poly import Polynomial, RingMap, RingPresentation, normal_form, polynomial_ring

PolyMatrix = tuple[tuple[Polynomial, ...], ...]


def _compose_is_zero(ring: RingPresentation, d_low: PolyMatrix, d_high: PolyMatrix) -> bool:
    for i in range(len(d_low)):
        for j in range(len(d_high[0]) if d_high else 0):
            acc = ring.zero()
            for k in range(len(d_high)):
                a, b = d_low[i][k], d_high[k][j]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            if not normal_form(acc, ring).is_zero():
                return False
    return True


@dataclass(frozen=True)
class ChainComplex:
    """``C_top -> ... -> C_1 -> C_0`` of graded free modules.

    ``differentials[r - 1]`` is ``d_r: C_r -> C_{r-1}`` as a matrix with
    ``ranks[r-1]`` rows and ``ranks[r]`` columns; ``shifts[r]`` lists the
    degrees of the generators of ``C_r``.
    """

    ring: RingPresentation
    ranks: tuple[int, ...]
    differentials: tuple[PolyMatrix, ...]
    shifts: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[str, ...], ...] = ()
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(self.differentials) != len(self.ranks) - 1:
            raise ValueError("need one differential per positive level")
        for r, d in enumerate(self.differentials, start=1):
            if len(d) != self.ranks[r - 1] or any(len(row) != self.ranks[r] for row in d):
                raise ValueError(f"d_{r} has the wrong shape")
        if self.validate and not self.is_complex():
            raise ValueError("d o d != 0")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def is_complex(self) -> bool:
        return all(
            _compose_is_zero(self.ring, self.differentials[r - 1], self.differentials[r])
            for r in range(1, self.length)
        )

    def piece_basis(self, level: int, degree: int) -> list[tuple[int, tuple[int, ...]]]:
        return [
            (j, mu) for j, s in enumerate(self.shifts[level]) for mu in self.ring.standard_monomials(degree - s)
        ]

    def piece_differential(self, r: int, degree: int) -> IntMatrix:
        """Integer matrix of ``d_r`` restricted to the given degree."""
        src = self.piece_basis(r, degree)
        tgt = self.piece_basis(r - 1, degree)
        tindex = {b: i for i, b in enumerate(tgt)}
        d = self.differentials[r - 1]
        cols = []
        for j, mu in src:
            vec = [0] * len(tgt)
            for i in range(self.ranks[r - 1]):
                e = d[i][j]
                if e.is_zero():
                    continue
                for m, c in normal_form(e.shift(mu), self.ring).items():
                    k = tindex.get((i, m))
                    if k is None:
                        raise ValueError("differential is not homogeneous")
                    vec[k] += c
            cols.append(vec)
        return IntMatrix.from_columns(cols, len(tgt))


def homology_from_matrices(dims: Sequence[int], maps: Sequence[IntMatrix | None]) -> list[AbelianInvariants]:
    """``H_r = ker(maps[r]) / im(maps[r+1])`` where ``maps[r]: Z^dims[r] -> Z^dims[r-1]``.

    ``maps[0]`` may be None (zero map out of C_0).
    """
    out = []
    top = len(dims) - 1
    for r in range(len(dims)):
        n = dims[r]
        D = maps[r] if r < len(maps) else None
        if D is None or D.cols == 0:
            K = IntMatrix.identity(n)
        else:
            K = integer_kernel(D)
        incoming = maps[r + 1] if r < top else None
        if incoming is None or incoming.cols == 0 or K.cols == 0:
            out.append(AbelianInvariants(K.cols))
            continue
        solver = LatticeSolver(K)
        coords = []
        for col in incoming.columns():
            y = solver.solve(col)
            if y is None:
                raise ValueError("image is not contained in the kernel (d o d != 0)")
            coords.append(y)
        out.append(cokernel_invariants(IntMatrix.from_columns(coords, K.cols)))
    return out


def homology_piece(C: ChainComplex, degree: int) -> list[AbelianInvariants]:
    dims = [len(C.piece_basis(r, degree)) for r in range(C.length + 1)]
    maps: list[IntMatrix | None] = [None]
    maps.extend(C.piece_differential(r, degree) for r in range(1, C.length + 1))
    return homology_from_matrices(dims, maps)


# -- Koszul complex --------------------------------------------------------------------


def koszul_ring(n: int) -> RingPresentation:
    return polynomial_ring([f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)])


def diagonal_ring(n: int) -> RingPresentation:
    return polynomial_ring([f"x{i + 1}" for i in range(n)])


def koszul_complex(n: int, entries: Sequence[Polynomial] | None = None) -> ChainComplex:
    """Koszul complex on ``x_i - y_i`` over ``Z[x_1..x_n, y_1..y_n]``.

    Level r is free on the wedges ``e_I`` (|I| = r, shift r) and
    ``d(e_I) = sum_k (-1)^k (x_{i_k} - y_{i_k}) e_{I - i_k}``. ``entries``
    replaces the sequence ``x_i - y_i`` (used for negative controls).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ring = koszul_ring(n)
    if entries is None:
        entries = [ring.var(i) - ring.var(n + i) for i in range(n)]
    levels = [list(combinations(range(n), r)) for r in range(n + 1)]
    diffs = []
    for r in range(1, n + 1):
        index = {I: i for i, I in enumerate(levels[r - 1])}
        mat = [[ring.zero() for _ in levels[r]] for _ in levels[r - 1]]
        for j, I in enumerate(levels[r]):
            for k, i in enumerate(I):
                J = I[:k] + I[k + 1:]
                mat[index[J]][j] = entries[i] * (-1 if k % 2 else 1)
        diffs.append(tuple(tuple(row) for row in mat))
    shifts = tuple(tuple(r for _ in levels[r]) for r in range(n + 1))
    labels = tuple(tuple("^".join(f"e{i + 1}" for i in I) or "1" for I in levels[r]) for r in range(n + 1))
    return ChainComplex(ring, tuple(len(l) for l in levels), tuple(diffs), shifts, labels)


def corrupted_koszul(n: int) -> ChainComplex:
    """Koszul complex on ``x_1 - 2 y_1, x_2 - y_2, ...``: still a complex, not a resolution of R."""
    ring = koszul_ring(n)
    entries = [ring.var(i) - ring.var(n + i) for i in range(n)]
    entries[0] = ring.var(0) - ring.var(n) * 2
    return koszul_complex(n, entries)


def diagonal_map(n: int) -> RingMap:
    """``Z[x, y] -> Z[x]``, ``x_i -> x_i``, ``y_i -> x_i`` (the augmentation onto R)."""
    src, tgt = koszul_ring(n), diagonal_ring(n)
    return RingMap(src, tgt, tuple(tgt.gens()) * 2)


@dataclass
class ResolutionVerdict:
    ok: bool
    degrees: list[int]
    homology: dict[int, list[str]]
    augmentation_ok: dict[int, bool]
    euler_ok: dict[int, bool]
    failures: list[str]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "degrees": self.degrees,
            "homology": {str(d): h for d, h in self.homology.items()},
            "failures": self.failures,
        }


def resolution_check(C: ChainComplex, degrees: Sequence[int], augmentation: RingMap | None = None) -> ResolutionVerdict:
    """Check ``... -> C_1 -> C_0 -> R -> 0`` is exact in each listed degree.

    ``augmentation`` maps C_0 (assumed rank 1, shift 0) onto the target ring;
    for the Koszul complex it is the diagonal map. Positive homological
    degrees must have zero homology; at C_0 the kernel of the augmentation
    must equal the image of d_1 and the augmentation must be onto.
    """
    if not C.ring.graded or C.ring.is_laurent:
        raise ValueError("resolution_check needs a graded complex")
    if augmentation is None:
        n = C.ring.nvars // 2
        augmentation = diagonal_map(n)
    if C.ranks[0] != 1 or C.shifts[0] != (0,):
        raise ValueError("augmentation needs C_0 free of rank one in degree 0")
    R = augmentation.target
    homology, aug_ok, euler_ok, failures = {}, {}, {}, []
    for d in degrees:
        dims = [len(R.standard_monomials(d))] + [len(C.piece_basis(r, d)) for r in range(C.length + 1)]
        src0 = C.piece_basis(0, d)
        tgt = R.standard_monomials(d)
        tindex = {m: i for i, m in enumerate(tgt)}
        cols = []
        for _, mu in src0:
            vec = [0] * len(tgt)
            for m, c in augmentation(Polynomial.monomial(mu)).items():
                vec[tindex[m]] += c
            cols.append(vec)
        eps = IntMatrix.from_columns(cols, len(tgt))
        # augmented complex: index 0 is R, index r + 1 is C_r
        maps: list[IntMatrix | None] = [None, eps]
        maps.extend(C.piece_differential(r, d) for r in range(1, C.length + 1))
        if C.length and not (eps @ maps[2]).is_zero():
            failures.append(f"degree {d}: augmentation does not vanish on the image of d_1")
            H_plain = homology_from_matrices(dims[1:], [None] + maps[2:])
            homology[d] = [str(h) for h in H_plain]
            aug_ok[d] = False
            euler_ok[d] = False
            continue
        H = homology_from_matrices(dims, maps)
        homology[d] = [str(h) for h in H[1:]]
        aug_ok[d] = H[0].is_trivial and H[1].is_trivial
        chi = sum((-1) ** r * dims[r + 1] for r in range(C.length + 1))
        euler_ok[d] = chi == dims[0]
        for r, h in enumerate(H[1:]):
            if not h.is_trivial:
                failures.append(f"degree {d}: homology at C_{r} (augmented) is {h}")
        if not H[0].is_trivial:
            failures.append(f"degree {d}: augmentation not onto ({H[0]})")
        if not euler_ok[d]:
            failures.append(f"degree {d}: Euler characteristic {chi} != {dims[0]}")
    return ResolutionVerdict(not failures, list(degrees), homology, aug_ok, euler_ok, failures)


def base_change_diagonal(C: ChainComplex) -> ChainComplex:
    """Apply ``y_i -> x_i`` to every differential entry."""
    n2 = C.ring.nvars
    names = C.ring.names
    n = n2 // 2
    expected = tuple(f"x{i + 1}" for i in range(n)) + tuple(f"y{i + 1}" for i in range(n))
    if n2 % 2 or names != expected:
        raise ValueError(f"expected variables {expected}, got {names}")
    phi = diagonal_map(n)
    diffs = tuple(tuple(tuple(phi(e) for e in row) for row in d) for d in C.differentials)
    return ChainComplex(phi.target, C.ranks, diffs, C.shifts, C.labels, validate=C.validate)


# -- Tor ------------------------------------------------------------------------------------


@dataclass
class TorTable:
    n: int
    degrees: list[int]
    pieces: dict[tuple[int, int], AbelianInvariants]
    ranks: list[int | None]
    generator_shifts: list[dict[int, int]]

    @property
    def total_rank(self) -> int | None:
        if any(r is None for r in self.ranks):
            return None
        return sum(self.ranks)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "degrees": self.degrees,
            "ranks": self.ranks,
            "total_rank": self.total_rank,
            "generator_shifts": [{str(k): v for k, v in g.items()} for g in self.generator_shifts],
            "pieces": [
                {"homological_degree": i, "degree": d, **inv.to_dict()}
                for (i, d), inv in sorted(self.pieces.items())
            ],
        }


def free_module_piece_rank(nvars: int, shift: int, degree: int) -> int:
    e = degree - shift
    return comb(e + nvars - 1, nvars - 1) if e >= 0 else 0


def infer_free_rank(nvars: int, degrees: Sequence[int], pieces: dict[int, AbelianInvariants]) -> tuple[int | None, dict[int, int]]:
    """Generator counts of a shifted free module over ``Z[x_1..x_n]`` matching the piece ranks.

    Degrees must be contiguous from 0. Returns (None, partial) when the pieces
    cannot come from a free module (torsion, or a negative generator count).
    """
    degrees = sorted(degrees)
    if degrees != list(range(degrees[0], degrees[-1] + 1)) or degrees[0] != 0:
        raise ValueError("free-rank inference needs contiguous degrees starting at 0")
    gens: dict[int, int] = {}
    for d in degrees:
        inv = pieces[d]
        if inv.torsion:
            return None, gens
        expected = sum(g * free_module_piece_rank(nvars, s, d) for s, g in gens.items())
        extra = inv.free_rank - expected
        if extra < 0:
            return None, gens
        if extra:
            gens[d] = extra
    return sum(gens.values()), gens


def tor_self(n: int, degrees: Sequence[int]) -> TorTable:
    """``Tor^{R (x) R}(R, R)`` for ``R = Z[x_1..x_n]`` via the base-changed Koszul complex."""
    C = base_change_diagonal(koszul_complex(n))
    pieces: dict[tuple[int, int], AbelianInvariants] = {}
    for d in degrees:
        for i, h in enumerate(homology_piece(C, d)):
            pieces[(i, d)] = h
    ranks: list[int | None] = []
    shifts = []
    for i in range(n + 1):
        rank, gens = infer_free_rank(n, degrees, {d: pieces[(i, d)] for d in degrees})
        ranks.append(rank)
        shifts.append(gens)
    return TorTable(n, list(degrees), pieces, ranks, shifts)


@dataclass
class TorKahlerVerdict:
    ok: bool
    n: int
    compared: int
    mismatches: list[str]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "n": self.n, "compared": self.compared, "mismatches": self.mismatches}


def compare_tor_with_kahler(n: int, degrees: Sequence[int], shift_offset: int = 0, tor: TorTable | None = None) -> TorKahlerVerdict:
    """Compare Tor_i pieces with graded pieces of ``Omega^i`` of ``Z[x_1..x_n]``.

    ``shift_offset`` moves the Omega side by that many degrees (a nonzero
    value is a deliberately wrong convention).
    """
    tor = tor if tor is not None else tor_self(n, degrees)
    R = diagonal_ring(n)
    mismatches = []
    compared = 0
    for i in range(n + 1):
        Om = omega(R, i)
        for d in degrees:
            lhs = tor.pieces[(i, d)]
            rhs = graded_piece(Om, d + shift_offset).invariants
            compared += 1
            if lhs != rhs:
                mismatches.append(f"i={i} degree={d}: Tor={lhs} Omega={rhs}")
    return TorKahlerVerdict(not mismatches, n, compared, mismatches)
