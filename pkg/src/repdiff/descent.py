"""Invariant differential forms on a torus and the image of the invariant subring's forms.

Forms over a Laurent ring ``Z[x_1^{+-1}..x_r^{+-1}]`` are free on the wedges
``dx_I``. Internally they are written in the logarithmic frame
``dlog x_I = x_I^{-1} dx_I``: a form ``x^a dlog x_I`` has fine weight ``a``,
the group acts on weights by ``a -> M a`` and on the frame linearly by the
``p x p`` minors of M, so every W-stable weight box is preserved and the
action stays integral. Both frames span the same Z-lattice because the x_i
are units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .lattice import IntMatrix, LatticeSolver, column_basis, integer_kernel
from .modules import d_function
from .poly import Polynomial, RingPresentation, monomials_up_to
from .weyl import GroupAction, WeightBox, _apply, act_on_poly, orbit_sum

LogForm = dict  # {(weight, subset): coefficient}


def _minor(M, rows: Sequence[int], cols: Sequence[int]) -> int:
    sub = [[M[i][j] for j in cols] for i in rows]
    n = len(sub)
    if n == 0:
        return 1
    if n == 1:
        return sub[0][0]
    total = 0
    for j in range(n):
        if sub[0][j]:
            rest = [r[:j] + r[j + 1:] for r in sub[1:]]
            total += (-1) ** j * sub[0][j] * _minor(rest, range(n - 1), range(n - 1))
    return total


def subsets(r: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(r), p))


def to_log(form: Sequence[Polynomial], r: int, p: int) -> LogForm:
    out = {}
    for I, coeff in zip(subsets(r, p), form):
        for b, c in coeff.items():
            a = list(b)
            for i in I:
                a[i] += 1
            out[(tuple(a), I)] = c
    return out


def from_log(form: LogForm, r: int, p: int) -> tuple[Polynomial, ...]:
    index = {I: k for k, I in enumerate(subsets(r, p))}
    terms: list[dict] = [{} for _ in index]
    for (a, I), c in form.items():
        if not c:
            continue
        b = list(a)
        for i in I:
            b[i] -= 1
        terms[index[I]][tuple(b)] = terms[index[I]].get(tuple(b), 0) + c
    return tuple(Polynomial(r, t) for t in terms)


def act_log(action: GroupAction, g: int, form: LogForm, p: int) -> LogForm:
    M = action.matrix(g)
    r = action.ring.nvars
    out: dict = {}
    for (a, I), c in form.items():
        Ma = _apply(M, a)
        for J in subsets(r, p):
            m = _minor(M, J, I)
            if m:
                key = (Ma, J)
                out[key] = out.get(key, 0) + m * c
    return {k: v for k, v in out.items() if v}


def act_on_form(action: GroupAction, g: int, form: Sequence[Polynomial], p: int) -> tuple[Polynomial, ...]:
    r = action.ring.nvars
    return from_log(act_log(action, g, to_log(form, r, p), p), r, p)


# -- exterior algebra on free modules ---------------------------------------------------


def wedge(alpha: dict, beta: dict, nvars: int) -> dict:
    """Wedge of forms given as ``{subset: Polynomial}`` in the dx frame."""
    out: dict = {}
    for I, f in alpha.items():
        for J, g in beta.items():
            if set(I) & set(J):
                continue
            inv = sum(1 for x in I for y in J if y < x)
            K = tuple(sorted(I + J))
            term = f * g * (-1 if inv % 2 else 1)
            out[K] = out[K] + term if K in out else term
    return {k: v for k, v in out.items() if not v.is_zero()}


def as_dict(form: Sequence[Polynomial], r: int, p: int) -> dict:
    return {I: f for I, f in zip(subsets(r, p), form) if not f.is_zero()}


def as_tuple(form: dict, r: int, p: int) -> tuple[Polynomial, ...]:
    return tuple(form.get(I, Polynomial.zero(r)) for I in subsets(r, p))


def differential_of(ring: RingPresentation, f: Polynomial) -> dict:
    return as_dict(d_function(ring, f), ring.nvars, 1)


def jstar_product(ring: RingPresentation, gens: Sequence[Polynomial], m: Sequence[int], I: Sequence[int]) -> tuple[Polynomial, ...]:
    """``j^*(u^m du_I) = gens^m * d(gens_{i1}) ^ ... ^ d(gens_{ip})`` as a dx-frame form."""
    r = ring.nvars
    coeff = Polynomial.constant(1, r)
    for g, k in zip(gens, m):
        if k:
            coeff = coeff * g ** k
    form = {(): coeff}
    for i in I:
        form = wedge(form, differential_of(ring, gens[i]), r)
    return as_tuple(form, r, len(I))


# -- invariant forms ----------------------------------------------------------------------


def invariant_form_basis(action: GroupAction, p: int, box: WeightBox) -> list[tuple[Polynomial, ...]]:
    """Z-basis of the W-fixed p-forms whose log-frame weights lie in the box."""
    r = action.ring.nvars
    if p > r:
        return []
    if p == 0:
        return [(f,) for f in _orbit_sums(action, box)]
    frame = subsets(r, p)
    basis = []
    for orb in box.orbits(action):
        coords = [(a, I) for a in orb for I in frame]
        index = {c: k for k, c in enumerate(coords)}
        rows = []
        for g in action.generators:
            block = [[0] * len(coords) for _ in coords]
            for k, (a, I) in enumerate(coords):
                for key, c in act_log(action, g, {(a, I): 1}, p).items():
                    block[index[key]][k] += c
                block[k][k] -= 1
            rows.extend(block)
        K = integer_kernel(IntMatrix.from_rows(rows, len(coords)))
        for col in K.columns():
            basis.append(from_log({coords[k]: c for k, c in enumerate(col) if c}, r, p))
    return basis


def _orbit_sums(action: GroupAction, box: WeightBox) -> list[Polynomial]:
    return [orbit_sum(action, orb[0]) for orb in box.orbits(action)]


# -- comparison with the image of the invariant subring's forms ---------------------------


@dataclass
class JStarReport:
    p: int
    radius: int | None
    box_size: int
    invariant_rank: int
    image_rank: int
    invariants_in_image: bool
    image_in_invariants: bool
    products_used: int
    degree_bound: int
    products_invariant: bool
    missing: list[str] = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.invariants_in_image and self.image_in_invariants and self.products_invariant

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "radius": self.radius,
            "box_size": self.box_size,
            "invariant_rank": self.invariant_rank,
            "image_rank": self.image_rank,
            "invariants_in_image": self.invariants_in_image,
            "image_in_invariants": self.image_in_invariants,
            "products_invariant": self.products_invariant,
            "products_used": self.products_used,
            "degree_bound": self.degree_bound,
            "missing": self.missing,
        }


def _choose_functional(gens: Sequence[Polynomial]) -> tuple[int, ...]:
    r = gens[0].nvars
    spread = 1 + 2 * max((abs(x) for g in gens for m in g.terms for x in m), default=1)
    phi = tuple(spread ** i for i in range(r))
    for g in gens:
        vals = sorted((sum(a * b for a, b in zip(phi, m)) for m in g.terms), reverse=True)
        if len(vals) > 1 and vals[0] == vals[1]:
            raise ValueError("functional does not separate a generator's top weight")
        if vals[0] <= 0:
            raise ValueError("generator has no positive top weight")
    return phi


def _top(g: Polynomial, phi) -> tuple[int, ...]:
    return max(g.terms, key=lambda m: sum(a * b for a, b in zip(phi, m)))


def jstar_products(gens: Sequence[Polynomial], p: int, box: WeightBox) -> tuple[list[tuple[tuple[int, ...], tuple[int, ...]]], int]:
    """Products ``u^m du_I`` whose predicted top weight is not above the box.

    With a functional ``phi`` separating every generator's top weight, the top
    weight of ``gens^m d(gens_I)`` is ``sum m_i top_i + sum_{i in I} top_i``.
    For generators of a polynomial ring whose top weights form a lattice
    basis, no cancellation can occur between top terms of distinct products,
    so any image element supported in the box is a combination of products
    whose top weight has ``phi`` at most the box maximum.
    """
    phi = _choose_functional(gens)
    tops = [_top(g, phi) for g in gens]
    tvals = [sum(a * b for a, b in zip(phi, t)) for t in tops]
    fmax = max((sum(a * b for a, b in zip(phi, w)) for w in box.points), default=-1)
    k = len(gens)
    if fmax < 0:
        return [], 0
    bound = fmax // min(tvals)
    out = []
    for I in combinations(range(k), p):
        base = sum(tvals[i] for i in I)
        for m in monomials_up_to(k, bound):
            if base + sum(c * t for c, t in zip(m, tvals)) <= fmax:
                out.append((m, I))
    return out, bound


def compare_jstar_image(action: GroupAction, gens: Sequence[Polynomial], p: int, box: WeightBox) -> JStarReport:
    """Compare the invariant p-forms in the box with ``j^*(Omega^p)`` intersected with the box.

    Both lattices consist of W-invariant forms, and an invariant form is
    determined by its coefficients at one representative weight per orbit,
    so the comparison is done in those coordinates. The image lattice is
    ``span(products) ∩ box``: products are combined by the kernel of their
    out-of-box coordinates.
    """
    ring = action.ring
    r = ring.nvars
    inv = invariant_form_basis(action, p, box)
    if p > r:
        return JStarReport(p, box.radius, len(box), 0, 0, True, True, 0, 0, True)
    frame = subsets(r, p)
    rep_cache: dict = {}

    def rep(a):
        hit = rep_cache.get(a)
        if hit is None:
            orb = action.orbit(a)
            for b in orb:
                rep_cache[b] = orb[0]
            hit = orb[0]
        return hit

    products, bound = jstar_products(gens, p, box)
    prod_forms = [jstar_product(ring, gens, m, I) for m, I in products]
    products_invariant = all(
        act_on_form(action, g, f, p) == f for f in prod_forms for g in action.generators
    )

    def projected(form) -> dict:
        return {(a, I): c for (a, I), c in to_log(form, r, p).items() if rep(a) == a}

    prod_proj = [projected(f) for f in prod_forms]
    in_rows = [(a, I) for orb in box.orbits(action) for a in orb[:1] for I in frame]
    in_index = {k: i for i, k in enumerate(in_rows)}
    out_keys = sorted({k for f in prod_proj for k in f if k not in in_index})
    out_index = {k: i for i, k in enumerate(out_keys)}

    n = len(prod_proj)
    A_in = [[0] * n for _ in in_rows]
    A_out = [[0] * n for _ in out_keys]
    for j, f in enumerate(prod_proj):
        for k, c in f.items():
            if k in in_index:
                A_in[in_index[k]][j] = c
            else:
                A_out[out_index[k]][j] = c
    A_in_m = IntMatrix(len(in_rows), n, A_in)
    if out_keys:
        K = integer_kernel(IntMatrix(len(out_keys), n, A_out))
    else:
        K = IntMatrix.identity(n)
    image = column_basis(A_in_m @ K) if K.cols else IntMatrix(len(in_rows), 0)

    inv_vecs = []
    for f in inv:
        lf = projected(f)
        vec = [0] * len(in_rows)
        for k, c in lf.items():
            vec[in_index[k]] = c
        inv_vecs.append(vec)
    inv_mat = IntMatrix.from_columns(inv_vecs, len(in_rows)) if inv_vecs else IntMatrix(len(in_rows), 0)

    img_solver = LatticeSolver(image)
    inv_solver = LatticeSolver(inv_mat)
    missing = []
    inv_in_img = True
    for f, v in zip(inv, inv_vecs):
        if img_solver.solve(v) is None:
            inv_in_img = False
            missing.append(_format_form(ring, f, p))
    img_in_inv = all(inv_solver.contains(c) for c in image.columns())
    return JStarReport(
        p=p,
        radius=box.radius,
        box_size=len(box),
        invariant_rank=inv_solver.rank,
        image_rank=image.cols,
        invariants_in_image=inv_in_img,
        image_in_invariants=img_in_inv,
        products_used=n,
        degree_bound=bound,
        products_invariant=products_invariant,
        missing=missing,
    )


def _format_form(ring: RingPresentation, form: Sequence[Polynomial], p: int) -> str:
    r = ring.nvars
    parts = []
    for I, f in zip(subsets(r, p), form):
        if f.is_zero():
            continue
        lab = "^".join(f"d{ring.names[i]}" for i in I) or "1"
        parts.append(f"({ring.format(f)})*{lab}")
    return " + ".join(parts) if parts else "0"


format_form = _format_form
