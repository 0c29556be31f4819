"""Sparse multivariate Laurent polynomials over the integers.

A :class:`Polynomial` is a map from exponent tuples to nonzero Python ints.
It only knows its variable count; names, Laurent flags, weights, the monomial
order and any relations live on a :class:`RingPresentation`.

>>> R = laurent_ring(["x"])
>>> chi = R.parse("x + x^-1")
>>> R.format(chi * chi)
'x^2 + 2 + x^-2'
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Exponents = tuple[int, ...]


class Polynomial:
    """Immutable sparse polynomial with exact integer coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponents, int] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError(f"monomial {exps} does not have {nvars} exponents")
                if c:
                    clean[tuple(exps)] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> Polynomial:
        # caller guarantees: no zero coefficients, correct lengths
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c: int, nvars: int) -> Polynomial:
        return cls._raw(nvars, {(0,) * nvars: int(c)} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> Polynomial:
        exps = tuple(exps)
        return cls._raw(len(exps), {exps: int(coeff)} if coeff else {})

    @classmethod
    def variable(cls, i: int, nvars: int) -> Polynomial:
        exps = [0] * nvars
        exps[i] = 1
        return cls.monomial(exps)

    @property
    def terms(self) -> Mapping[Exponents, int]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Exponents]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_unit_monomial(self) -> bool:
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1)

    def _check(self, other: Polynomial) -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, int):
            return Polynomial.constant(other, self.nvars)
        self._check(other)
        return other

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            big, small = dict(other._terms), self._terms
        else:
            big, small = dict(self._terms), other._terms
        for m, c in small.items():
            s = big.get(m, 0) + c
            if s:
                big[m] = s
            else:
                big.pop(m, None)
        return Polynomial._raw(self.nvars, big)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, int):
            if not other:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw(self.nvars, {m: c * other for m, c in self._terms.items()})
        self._check(other)
        out: dict[Exponents, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            if not self.is_unit_monomial():
                raise ValueError("negative power of a non-unit")
            ((m, c),) = self._terms.items()
            return Polynomial.monomial(tuple(-e * (-k) for e in m), c ** (-k))
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exps: Sequence[int], coeff: int = 1) -> Polynomial:
        """Multiply by the monomial ``coeff * x^exps``."""
        if not coeff:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(m, exps)): c * coeff for m, c in self._terms.items()},
        )

    def map_exponents(self, fn) -> Polynomial:
        out: dict[Exponents, int] = {}
        for m, c in self._terms.items():
            m2 = tuple(fn(m))
            out[m2] = out.get(m2, 0) + c
        return Polynomial(self.nvars, out)

    def derivative(self, i: int) -> Polynomial:
        """Formal partial derivative; valid for negative exponents too."""
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                m2 = list(m)
                m2[i] = e - 1
                out[tuple(m2)] = c * e
        return Polynomial._raw(self.nvars, out)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        names = [f"x{i + 1}" for i in range(self.nvars)]
        keyed = sorted(self._terms, key=lambda m: (sum(m), m), reverse=True)
        return f"Polynomial({format_terms(keyed, self._terms, names)!r})"


def format_terms(order: Iterable[Exponents], terms: Mapping[Exponents, int], names: Sequence[str]) -> str:
    parts: list[str] = []
    for m in order:
        c = terms[m]
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Variable:
    name: str
    laurent: bool = False
    weight: int = 1


class Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INHOMOGENEOUS"


INHOMOGENEOUS = Inhomogeneous()


class MalformedRing(ValueError):
    pass


@dataclass(frozen=True)
class RingPresentation:
    """``Z[x_1..x_n, optional inverses] / (relations)``.

    Each relation must have a leading monomial (largest in :meth:`order_key`)
    with coefficient +-1 and nonnegative exponents; rewriting that monomial
    is then a terminating reduction. Laurent variables and relations are not
    mixed.
    """

    variables: tuple[Variable, ...]
    relations: tuple[Polynomial, ...] = ()
    graded: bool = True

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", tuple(self.relations))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise MalformedRing(f"duplicate variable names {names}")
        if self.relations and self.is_laurent:
            raise MalformedRing("relations are not supported in Laurent rings")
        for rel in self.relations:
            if rel.nvars != self.nvars:
                raise MalformedRing("relation has wrong variable count")
            if rel.is_zero():
                raise MalformedRing("zero relation")
            lead = self.leading_monomial(rel)
            if rel.coeff(lead) not in (1, -1):
                raise MalformedRing(f"relation {self.format(rel)} is not monic")
            if any(e < 0 for e in lead):
                raise MalformedRing("leading monomial must have nonnegative exponents")
            if self.graded and not self.is_laurent and self.weight_of(rel) is INHOMOGENEOUS:
                raise MalformedRing(f"relation {self.format(rel)} is not homogeneous")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.weight for v in self.variables)

    @property
    def is_laurent(self) -> bool:
        return any(v.laurent for v in self.variables)

    @cached_property
    def _leads(self) -> tuple[tuple[Exponents, int, Polynomial], ...]:
        return tuple((self.leading_monomial(r), r.coeff(self.leading_monomial(r)), r) for r in self.relations)

    def degree(self, exps: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def order_key(self, exps: Sequence[int]):
        """Graded-lexicographic key: weighted degree, then exponents."""
        return (self.degree(exps), tuple(exps))

    def leading_monomial(self, f: Polynomial) -> Exponents:
        return max(f.terms, key=self.order_key)

    def sorted_monomials(self, f: Polynomial) -> list[Exponents]:
        return sorted(f.terms, key=self.order_key, reverse=True)

    def var(self, name_or_index) -> Polynomial:
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        return Polynomial.variable(i, self.nvars)

    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(Polynomial.variable(i, self.nvars) for i in range(self.nvars))

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.nvars)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.nvars)

    def check(self, f: Polynomial) -> None:
        if f.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {f.nvars} vs {self.nvars}")
        for m in f.terms:
            for v, e in zip(self.variables, m):
                if e < 0 and not v.laurent:
                    raise ValueError(f"negative exponent on non-Laurent variable {v.name}")

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def weight_of(self, f: Polynomial):
        return weight_of(f, self)

    def format(self, f: Polynomial) -> str:
        return format_terms(self.sorted_monomials(f), f.terms, self.names)

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self)

    def standard_monomials(self, degree: int) -> tuple[Exponents, ...]:
        """Monomials of the given weighted degree not divisible by any leading monomial."""
        return _standard_monomials(self, degree)

    def is_domain_hint(self) -> bool:
        return len(self.relations) <= 1


@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism given by the images of the source variables."""

    source: RingPresentation
    target: RingPresentation
    images: tuple[Polynomial, ...]
    check_relations: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.nvars:
            raise ValueError("need one image per source variable")
        for v, img in zip(self.source.variables, self.images):
            self.target.check(img)
            if v.laurent and not _is_unit(img, self.target):
                raise ValueError(f"Laurent variable {v.name} must map to a unit of the target")
        if self.check_relations:
            for rel in self.source.relations:
                if not apply_map(self, rel).is_zero():
                    raise ValueError(f"relation {self.source.format(rel)} does not map to zero")

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_map(self, f)


def _is_unit(f: Polynomial, ring: RingPresentation) -> bool:
    if not f.is_unit_monomial():
        return False
    (exps,) = f.terms
    return all(e == 0 or v.laurent for e, v in zip(exps, ring.variables))


# -- operations --------------------------------------------------------------


def poly_arith(op: str, a: Polynomial, b: Polynomial | None = None) -> Polynomial:
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def _divides(lead: Exponents, m: Exponents) -> bool:
    return all(a <= b for a, b in zip(lead, m))


def normal_form(f: Polynomial, ring: RingPresentation) -> Polynomial:
    """Rewrite leading monomials of the relations until no term is reducible."""
    if f.nvars != ring.nvars:
        raise ValueError(f"variable count mismatch: {f.nvars} vs {ring.nvars}")
    leads = ring._leads
    if not leads:
        return f
    terms = dict(f.terms)
    key = ring.order_key
    while True:
        reducible = [m for m in terms if any(_divides(lead, m) for lead, _, _ in leads)]
        if not reducible:
            return Polynomial._raw(ring.nvars, terms)
        m = max(reducible, key=key)
        c = terms[m]
        for lead, lc, rel in leads:
            if _divides(lead, m):
                break
        q = tuple(a - b for a, b in zip(m, lead))
        scale = -c * lc  # lc is +-1, so c / lc == c * lc
        for rm, rc in rel.terms.items():
            mm = tuple(a + b for a, b in zip(rm, q))
            s = terms.get(mm, 0) + scale * rc
            if s:
                terms[mm] = s
            else:
                terms.pop(mm, None)


def apply_map(m: RingMap, f: Polynomial) -> Polynomial:
    if f.nvars != m.source.nvars:
        raise ValueError(f"variable count mismatch: {f.nvars} vs {m.source.nvars}")
    nt = m.target.nvars
    cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in cache:
            img = m.images[i]
            if e < 0 and not img.is_unit_monomial():
                raise ValueError(f"non-unit image for inverted variable {m.source.names[i]}")
            cache[key] = img ** e
        return cache[key]

    out = Polynomial.zero(nt)
    for exps, c in f.items():
        term = Polynomial.constant(c, nt)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        out = out + term
    return normal_form(out, m.target)


def weight_of(f: Polynomial, ring: RingPresentation):
    """Common weight of all terms, ``INHOMOGENEOUS``, or ``None`` for zero.

    Laurent rings use the fine grading: the weight is the exponent vector.
    """
    if f.is_zero():
        return None
    if ring.is_laurent:
        ws = set(f.terms)
    else:
        ws = {ring.degree(m) for m in f.terms}
    if len(ws) != 1:
        return INHOMOGENEOUS
    return ws.pop()


def homogeneous_parts(f: Polynomial, ring: RingPresentation) -> dict[int, Polynomial]:
    parts: dict[int, dict] = {}
    for m, c in f.items():
        parts.setdefault(ring.degree(m), {})[m] = c
    return {d: Polynomial(ring.nvars, t) for d, t in sorted(parts.items())}


def _compositions(weights: tuple[int, ...], degree: int) -> Iterator[tuple[int, ...]]:
    if not weights:
        if degree == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    if w <= 0:
        raise ValueError("graded pieces need positive weights")
    for e in range(degree // w, -1, -1):
        for tail in _compositions(rest, degree - e * w):
            yield (e,) + tail


_STD_CACHE: dict = {}


def _standard_monomials(ring: RingPresentation, degree: int) -> tuple[Exponents, ...]:
    if ring.is_laurent:
        raise ValueError("graded pieces of a Laurent ring are infinite in the coarse grading")
    key = (ring, degree)
    hit = _STD_CACHE.get(key)
    if hit is not None:
        return hit
    if degree < 0:
        out: tuple = ()
    else:
        leads = [lead for lead, _, _ in ring._leads]
        mons = [m for m in _compositions(ring.weights, degree) if not any(_divides(l, m) for l in leads)]
        mons.sort(key=ring.order_key, reverse=True)
        out = tuple(mons)
    _STD_CACHE[key] = out
    return out


# -- constructors --------------------------------------------------------------


def polynomial_ring(names: Sequence[str], weights: Sequence[int] | None = None, relations: Sequence[str] = ()) -> RingPresentation:
    weights = list(weights) if weights is not None else [1] * len(names)
    base = RingPresentation(tuple(Variable(n, False, w) for n, w in zip(names, weights)))
    if not relations:
        return base
    rels = tuple(parse_poly(r, base) for r in relations)
    return RingPresentation(base.variables, rels)


def laurent_ring(names: Sequence[str]) -> RingPresentation:
    return RingPresentation(tuple(Variable(n, True, 1) for n in names))


def hypersurface_ring() -> RingPresentation:
    """``Z[X,Y,Z]/(X^3 - Y*Z)`` with weights X:2, Y:3, Z:3."""
    return polynomial_ring(["X", "Y", "Z"], [2, 3, 3], ["X^3 - Y*Z"])


# -- text format ---------------------------------------------------------------

_SIGN_SPLIT = re.compile(r"(?<!\^)\s*([+-])\s*")


def _split_terms(text: str) -> list[tuple[int, str]]:
    pieces = _SIGN_SPLIT.split(text.strip())
    out, sign = [], 1
    for piece in pieces:
        if piece in ("+", "-"):
            sign = -sign if piece == "-" else sign
            continue
        if piece.strip():
            out.append((sign, piece.strip()))
        sign = 1
    return out


def parse_poly(text: str, ring: RingPresentation) -> Polynomial:
    """Inverse of :meth:`RingPresentation.format`."""
    n = ring.nvars
    index = {name: i for i, name in enumerate(ring.names)}
    terms: dict[Exponents, int] = {}
    text = text.strip()
    if text == "0":
        return Polynomial.zero(n)
    for sign, body in _split_terms(text):
        coeff = sign
        exps = [0] * n
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term {body!r}")
            if factor.lstrip("-").isdigit():
                coeff *= int(factor)
                continue
            name, _, e = factor.partition("^")
            name = name.strip()
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            exps[index[name]] += int(e) if e else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    f = Polynomial(n, terms)
    ring.check(f)
    return f


def monomials_up_to(nvars: int, max_degree: int) -> list[Exponents]:
    """Exponent tuples of total degree <= max_degree, degree-major then lex descending."""
    out = []
    for d in range(max_degree + 1):
        out.extend(sorted((m for m in product(range(d + 1), repeat=nvars) if sum(m) == d), reverse=True))
    return out
