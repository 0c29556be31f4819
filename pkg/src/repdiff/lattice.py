"""Exact integer linear algebra: Hermite/Smith normal forms, kernels, solving.

Everything works on arbitrary-precision Python ints. Matrices are small
(graded pieces), so the layout is dense; the column-echelon routines store
matrices column-major because every operation they do is a column operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix. Treated as immutable once built."""

    __slots__ = ("rows", "cols", "_data", "_sparse")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence[int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = [[0] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"entries do not match shape {rows}x{cols}")
            self._data = [[int(x) for x in r] for r in data]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, x in enumerate(col):
                m._data[i][j] = int(x)
        return m

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        m = cls(n, n)
        for i in range(n):
            m._data[i][i] = 1
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> list[int]:
        return list(self._data[i])

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self._data]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_columns(self._data, self.cols) if self.rows else IntMatrix(self.cols, 0)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            out = [[sum(a * b for a, b in zip(r, c) if a and b) for c in ocols] for r in self._data]
            return IntMatrix(self.rows, other.cols, out)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        sparse = getattr(self, "_sparse", None)
        if sparse is None:
            sparse = [[(j, a) for j, a in enumerate(r) if a] for r in self._data]
            self._sparse = sparse
        return [sum(a * vec[j] for j, a in r) for r in sparse]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}, {self.cols}, {self._data})"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self._data) for j, x in enumerate(r) if i != j)

    def diagonal(self) -> list[int]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols, [a + b for a, b in zip(self._data, other._data)])

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(" ".join(str(x) for x in r) for r in self._data)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_text(cls, text: str) -> IntMatrix:
        """Fixture format: ``rows cols`` then row-major integers."""
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("missing 'rows cols' header")
        try:
            nums = [int(t) for t in tokens]
        except ValueError as exc:
            raise ValueError(f"non-integer token: {exc}") from None
        rows, cols = nums[0], nums[1]
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        body = nums[2:]
        if len(body) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
        return cls(rows, cols, [body[i * cols:(i + 1) * cols] for i in range(rows)])


def determinant(A: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = A.rows
    if n != A.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pk - M[i][k] * M[k][j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk`` and each ``d >= 2``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_diagonal(cls, rows: int, diagonal: Iterable[int]) -> AbelianInvariants:
        diag = [abs(d) for d in diagonal if d]
        return cls(rows - len(diag), tuple(sorted(d for d in diag if d > 1)))


# -- column echelon / Hermite form ------------------------------------------------


def _col_axpy(dst: list[int], src: list[int], q: int) -> None:
    """dst -= q * src"""
    for i, x in enumerate(src):
        if x:
            dst[i] -= q * x


@dataclass
class ColumnEchelon:
    """``A @ V == H`` with V unimodular and H in column Hermite form.

    ``H`` is column-major; ``pivots[k]`` is the row of the leading entry of
    column k for k < rank, and columns k >= rank of H are zero.
    """

    rows: int
    cols: int
    H: list[list[int]]
    V: list[list[int]]
    pivots: list[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def column_echelon(A: IntMatrix, track: bool = True, reduce: bool = True) -> ColumnEchelon:
    m, n = A.rows, A.cols
    H = A.columns()
    V = [[1 if i == j else 0 for i in range(n)] for j in range(n)] if track else []
    pivots: list[int] = []
    k = 0
    for r in range(m):
        if k == n:
            break
        while True:
            nz = [j for j in range(k, n) if H[j][r]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(H[j][r]), j))
            if j0 != k:
                H[k], H[j0] = H[j0], H[k]
                if track:
                    V[k], V[j0] = V[j0], V[k]
            p = H[k][r]
            done = True
            for j in range(k + 1, n):
                if H[j][r]:
                    q = H[j][r] // p
                    _col_axpy(H[j], H[k], q)
                    if track:
                        _col_axpy(V[j], V[k], q)
                    if H[j][r]:
                        done = False
            if done:
                break
        if not H[k][r]:
            continue
        if H[k][r] < 0:
            H[k] = [-x for x in H[k]]
            if track:
                V[k] = [-x for x in V[k]]
        if reduce:
            p = H[k][r]
            for j in range(k):
                q = H[j][r] // p
                if q:
                    _col_axpy(H[j], H[k], q)
                    if track:
                        _col_axpy(V[j], V[k], q)
        pivots.append(r)
        k += 1
    return ColumnEchelon(m, n, H, V, pivots)


def hermite_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style HNF: returns ``(H, V)`` with ``A @ V == H``, V unimodular."""
    ech = column_echelon(A)
    H = IntMatrix.from_columns(ech.H, A.rows) if A.cols else IntMatrix(A.rows, 0)
    V = IntMatrix.from_columns(ech.V, A.cols) if A.cols else IntMatrix(0, 0)
    return H, V


def column_basis(A: IntMatrix) -> IntMatrix:
    """Canonical basis (HNF columns) of the lattice spanned by A's columns."""
    ech = column_echelon(A, track=False)
    return IntMatrix.from_columns(ech.H[: ech.rank], A.rows)


def integer_kernel(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{v : A v = 0}``, in canonical Hermite form."""
    ech = column_echelon(A)
    K = ech.V[ech.rank:]
    if not K:
        return IntMatrix(A.cols, 0)
    return column_basis(IntMatrix.from_columns(K, A.cols))


class LatticeSolver:
    """Repeated integer solves ``A x = b`` against a fixed A."""

    def __init__(self, A: IntMatrix):
        self.A = A
        self._ech = column_echelon(A)

    @property
    def rank(self) -> int:
        return self._ech.rank

    def solve(self, b: Sequence[int]) -> list[int] | None:
        A, ech = self.A, self._ech
        if len(b) != A.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
        res = [int(x) for x in b]
        y = [0] * A.cols
        for k, r in enumerate(ech.pivots):
            if not res[r]:
                continue
            q, rem = divmod(res[r], ech.H[k][r])
            if rem:
                return None
            y[k] = q
            _col_axpy(res, ech.H[k], q)
        if any(res):
            return None
        x = [0] * A.cols
        for k, yk in enumerate(y):
            if yk:
                for i, v in enumerate(ech.V[k]):
                    if v:
                        x[i] += yk * v
        if A @ x != list(b):
            raise AssertionError("integer solve produced a wrong certificate")
        return x

    def contains(self, b: Sequence[int]) -> bool:
        return self.solve(b) is not None


def solve_integer(A: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Some integer x with ``A x = b``, or None if no integer solution exists."""
    return LatticeSolver(A).solve(b)


# -- Smith normal form -------------------------------------------------------------


def _snf(A: IntMatrix, track: bool):
    m, n = A.rows, A.cols
    S = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    Uinv = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def row_axpy(dst: int, src: int, q: int):
        # row_dst -= q * row_src ; U tracks the same, Uinv gets col_src += q col_dst
        Sd, Ss = S[dst], S[src]
        for j in range(n):
            if Ss[j]:
                Sd[j] -= q * Ss[j]
        if track:
            Ud, Us = U[dst], U[src]
            for j in range(m):
                if Us[j]:
                    Ud[j] -= q * Us[j]
            for row in Uinv:
                if row[dst]:
                    row[src] += q * row[dst]

    def col_axpy(dst: int, src: int, q: int):
        for row in S:
            if row[src]:
                row[dst] -= q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    def row_swap(a: int, b: int):
        S[a], S[b] = S[b], S[a]
        if track:
            U[a], U[b] = U[b], U[a]
            for row in Uinv:
                row[a], row[b] = row[b], row[a]

    def col_swap(a: int, b: int):
        for row in S:
            row[a], row[b] = row[b], row[a]
        if track:
            for row in V:
                row[a], row[b] = row[b], row[a]

    def row_neg(a: int):
        S[a] = [-x for x in S[a]]
        if track:
            U[a] = [-x for x in U[a]]
            for row in Uinv:
                row[a] = -row[a]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Si = S[i]
            for j in range(t, n):
                x = Si[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // p
                    row_axpy(i, t, q)
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // p
                    col_axpy(j, t, q)
                    if S[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
                cands += [(abs(S[t][j]), t, j) for j in range(t, n) if S[t][j]]
                _, i, j = min(cands)
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
                continue
            if not track:
                break  # diagonal is normalized afterwards
            # divisibility: every remaining entry must be a multiple of the pivot
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if S[t][t] < 0:
            row_neg(t)
        t += 1
    return S, U, V, Uinv


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """``(U, S, V)`` with ``U @ A @ V == S`` diagonal, ``d1 | d2 | ...``, U and V unimodular."""
    S, U, V, _ = _snf(A, track=True)
    return IntMatrix(A.rows, A.rows, U), IntMatrix(A.rows, A.cols, S), IntMatrix(A.cols, A.cols, V)


def smith_with_inverse(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """Like :func:`smith_normal_form` but also returns ``U^{-1}``."""
    S, U, V, Uinv = _snf(A, track=True)
    m = A.rows
    return IntMatrix(m, m, U), IntMatrix(A.rows, A.cols, S), IntMatrix(A.cols, A.cols, V), IntMatrix(m, m, Uinv)


def smith_diagonal(A: IntMatrix) -> list[int]:
    S, _, _, _ = _snf(A, track=False)
    diag = [abs(S[i][i]) for i in range(min(A.rows, A.cols))]
    nz = [d for d in diag if d]
    # diag(a, b) ~ diag(gcd, lcm) restores the divisibility chain
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            g = gcd(nz[i], nz[j])
            nz[i], nz[j] = g, nz[i] // g * nz[j]
    return nz + [0] * (len(diag) - len(nz))


def cokernel_invariants(A: IntMatrix) -> AbelianInvariants:
    """Invariants of ``Z^rows / column-span(A)``."""
    return AbelianInvariants.from_diagonal(A.rows, smith_diagonal(A))


def matrix_rank(A: IntMatrix) -> int:
    return column_echelon(A, track=False, reduce=False).rank


def lattice_contains(basis: IntMatrix, vectors: IntMatrix) -> bool:
    """Whether every column of ``vectors`` lies in the Z-span of ``basis``'s columns."""
    solver = LatticeSolver(basis)
    return all(solver.contains(v) for v in vectors.columns())


def lattices_equal(A: IntMatrix, B: IntMatrix) -> bool:
    return lattice_contains(A, B) and lattice_contains(B, A)
