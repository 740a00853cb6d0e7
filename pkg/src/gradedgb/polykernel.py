"""Multivariate polynomial kernel over exact rationals, graded by total degree.

Polynomials are sparse maps from exponent tuples to nonzero ``Fraction``
coefficients; no floating point appears anywhere.  Module vectors are tuples
of polynomials.  The homogeneous layer (syzygies, membership with expression,
normal forms) is computed classically: the input vectors are tagged with unit
cofactor slots, a Groebner basis of the tagged vectors is computed under the
degrevlex / position-over-term order, and syzygy rows or division cofactors
are read off the tag block.  The tagged bases are cached per kernel instance
behind a lock, so repeated membership queries against the same generators pay
for one basis computation.
"""

from __future__ import annotations

import heapq
import itertools
import threading
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .core import HomogeneousKernel, ShiftedFreeModule, ZeroElementError

MAX_VARIABLES = 8


class VariableMismatchError(ValueError):
    """Operands are defined over different variable sets."""


class Monomial:
    """Exponent vector with multiplication, divisibility and lcm."""

    __slots__ = ("exponents", "degree")

    def __init__(self, exponents: Sequence[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be non-negative")
        self.exponents = exps
        self.degree = sum(exps)

    @classmethod
    def one(cls, nvars: int) -> "Monomial":
        return cls((0,) * nvars)

    def __mul__(self, other: "Monomial") -> "Monomial":
        _check_nvars(self, other)
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other: "Monomial") -> bool:
        _check_nvars(self, other)
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        _check_nvars(self, other)
        return Monomial(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def lcm(self, other: "Monomial") -> "Monomial":
        _check_nvars(self, other)
        return Monomial(tuple(max(a, b) for a, b in zip(self.exponents, other.exponents)))

    @property
    def is_one(self) -> bool:
        return self.degree == 0

    def key(self):
        """Degrevlex sort key: bigger key means bigger monomial."""
        return (self.degree, tuple(-e for e in reversed(self.exponents)))

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"Monomial{self.exponents}"


def _check_nvars(a, b):
    if len(a.exponents) != len(b.exponents):
        raise VariableMismatchError("monomials over different variable sets")


class MonomialOrder:
    """Degrevlex on monomials, extended position-over-term to module terms.

    Position over term with basis priority: any term in slot i beats every
    term in slot j > i; ties within a slot are broken by degrevlex.  This is
    a multiplicative total order and a well-order on each finite degree
    slice, and the slot priority makes the trailing block of a tagged vector
    an elimination block.
    """

    @staticmethod
    def monomial_key(mono: Monomial):
        return mono.key()

    @staticmethod
    def term_key(position: int, mono: Monomial):
        return (-position, mono.key())


class Polynomial:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None, _clean: bool = True):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = {}
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    if len(mono.exponents) != nvars:
                        raise VariableMismatchError("term over wrong variable set")
                    self.terms[mono] = coeff
        else:
            self.terms = terms
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {Monomial.one(nvars): Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {Monomial(exps): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise VariableMismatchError("polynomials over different variable sets")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        res = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = res.get(mono, 0) + coeff
            if s:
                res[mono] = s
            else:
                res.pop(mono, None)
        return Polynomial(self.nvars, res, _clean=False)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        res = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = res.get(mono, 0) - coeff
            if s:
                res[mono] = s
            else:
                res.pop(mono, None)
        return Polynomial(self.nvars, res, _clean=False)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()}, _clean=False)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            res: dict[Monomial, Fraction] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    prod = m1 * m2
                    s = res.get(prod, 0) + c1 * c2
                    if s:
                        res[prod] = s
                    else:
                        res.pop(prod, None)
            return Polynomial(self.nvars, res, _clean=False)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, scalar) -> "Polynomial":
        scalar = Fraction(scalar)
        if not scalar:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars,
                          {m: c * scalar for m, c in self.terms.items()}, _clean=False)

    def term_mul(self, coeff: Fraction, mono: Monomial) -> "Polynomial":
        if not coeff:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars,
                          {m * mono: c * coeff for m, c in self.terms.items()}, _clean=False)

    def total_degree(self) -> int:
        if not self.terms:
            raise ZeroElementError("the zero polynomial has no degree")
        return max(m.degree for m in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        degrees = {m.degree for m in self.terms}
        return len(degrees) <= 1

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        out: dict[int, dict] = {}
        for mono, coeff in self.terms.items():
            out.setdefault(mono.degree, {})[mono] = coeff
        return {d: Polynomial(self.nvars, t, _clean=False) for d, t in out.items()}

    def leading(self) -> tuple[Monomial, Fraction]:
        """Leading term under degrevlex."""
        if not self.terms:
            raise ZeroElementError("the zero polynomial has no leading term")
        mono = max(self.terms, key=MonomialOrder.monomial_key)
        return mono, self.terms[mono]

    def sort_key(self):
        items = sorted(self.terms.items(),
                       key=lambda mc: MonomialOrder.monomial_key(mc[0]), reverse=True)
        return tuple((m.key(), c.numerator, c.denominator) for m, c in items)

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        names = tuple(f"x{i}" for i in range(self.nvars))
        return format_polynomial(self, names)


class PolyVector:
    """Tuple of polynomials; doubles as module payload and syzygy row."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Sequence[Polynomial]):
        self.entries = tuple(entries)
        self._hash = None

    @classmethod
    def zero(cls, nvars: int, rank: int) -> "PolyVector":
        return cls(tuple(Polynomial.zero(nvars) for _ in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: "PolyVector") -> "PolyVector":
        return PolyVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "PolyVector") -> "PolyVector":
        return PolyVector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "PolyVector":
        return PolyVector(tuple(-a for a in self.entries))

    def scale(self, scalar) -> "PolyVector":
        return PolyVector(tuple(a.scale(scalar) for a in self.entries))

    def ring_mul(self, poly: Polynomial) -> "PolyVector":
        return PolyVector(tuple(poly * a for a in self.entries))

    def term_mul(self, coeff: Fraction, mono: Monomial) -> "PolyVector":
        return PolyVector(tuple(a.term_mul(coeff, mono) for a in self.entries))

    def terms(self) -> Iterator[tuple[int, Monomial, Fraction]]:
        for pos, poly in enumerate(self.entries):
            for mono, coeff in poly.terms.items():
                yield pos, mono, coeff

    def leading_term(self) -> tuple[int, Monomial, Fraction]:
        """Leading term under the position-over-term order."""
        best = None
        best_key = None
        for pos, poly in enumerate(self.entries):
            if not poly.terms:
                continue
            mono, coeff = poly.leading()
            key = MonomialOrder.term_key(pos, mono)
            if best_key is None or key > best_key:
                best, best_key = (pos, mono, coeff), key
        if best is None:
            raise ZeroElementError("the zero vector has no leading term")
        return best

    def monic(self) -> "PolyVector":
        _, _, coeff = self.leading_term()
        if coeff == 1:
            return self
        return self.scale(Fraction(1, 1) / coeff)

    def sort_key(self):
        return tuple(a.sort_key() for a in self.entries)

    def __eq__(self, other):
        return isinstance(other, PolyVector) and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        return "[" + ", ".join(repr(a) for a in self.entries) + "]"


# ---------------------------------------------------------------------------
# classical Groebner machinery (internal to the kernel)
# ---------------------------------------------------------------------------

def _divide_remainder(f: PolyVector, basis: Sequence[PolyVector],
                      leads: Sequence[tuple[int, Monomial, Fraction]]) -> PolyVector:
    """Remainder of ``f`` on division by ``basis`` (first divisor wins)."""
    nvars = f.entries[0].nvars if f.entries else 0
    work = f
    rem_entries = [dict() for _ in range(f.rank)]
    while not work.is_zero:
        pos, mono, coeff = work.leading_term()
        for g, (gpos, gmono, gcoeff) in zip(basis, leads):
            if gpos == pos and gmono.divides(mono):
                work = work - g.term_mul(coeff / gcoeff, mono / gmono)
                break
        else:
            rem_entries[pos][mono] = rem_entries[pos].get(mono, 0) + coeff
            head = PolyVector.zero(nvars, f.rank)
            entries = list(head.entries)
            entries[pos] = Polynomial(nvars, {mono: coeff}, _clean=False)
            work = work - PolyVector(entries)
    return PolyVector(tuple(Polynomial(nvars, t) for t in rem_entries))


def _s_pair(f: PolyVector, g: PolyVector,
            flead: tuple[int, Monomial, Fraction],
            glead: tuple[int, Monomial, Fraction]) -> PolyVector:
    _, fmono, fcoeff = flead
    _, gmono, gcoeff = glead
    lcm = fmono.lcm(gmono)
    return (f.term_mul(Fraction(1, 1) / fcoeff, lcm / fmono)
            - g.term_mul(Fraction(1, 1) / gcoeff, lcm / gmono))


def _classical_gb(vectors: Sequence[PolyVector]) -> tuple[PolyVector, ...]:
    """Reduced Groebner basis under degrevlex / position-over-term.

    Deterministic: pairs are processed by (lcm degree, i, j); the result is
    interreduced, monic and sorted by leading term.
    """
    basis: list[PolyVector] = []
    leads: list[tuple[int, Monomial, Fraction]] = []
    seen = set()
    for v in vectors:
        if v.is_zero or v in seen:
            continue
        v = v.monic()
        seen.add(v)
        basis.append(v)
        leads.append(v.leading_term())
    pairs: list[tuple[int, int, int]] = []
    for j in range(len(basis)):
        for i in range(j):
            if leads[i][0] == leads[j][0]:
                lcm = leads[i][1].lcm(leads[j][1])
                heapq.heappush(pairs, (lcm.degree, i, j))
    while pairs:
        _, i, j = heapq.heappop(pairs)
        s = _s_pair(basis[i], basis[j], leads[i], leads[j])
        if s.is_zero:
            continue
        r = _divide_remainder(s, basis, leads)
        if r.is_zero:
            continue
        r = r.monic()
        basis.append(r)
        leads.append(r.leading_term())
        new = len(basis) - 1
        for i in range(new):
            if leads[i][0] == leads[new][0]:
                lcm = leads[i][1].lcm(leads[new][1])
                heapq.heappush(pairs, (lcm.degree, i, new))
    return _interreduce(basis)


def _interreduce(basis: Sequence[PolyVector]) -> tuple[PolyVector, ...]:
    """Minimalize leading terms, then tail-reduce to the reduced basis."""
    items = sorted((v for v in basis if not v.is_zero),
                   key=lambda v: (MonomialOrder.term_key(*v.leading_term()[:2]), v.sort_key()))
    kept: list[PolyVector] = []
    kept_leads: list[tuple[int, Monomial, Fraction]] = []
    for v in items:
        pos, mono, _ = lead = v.leading_term()
        if any(gpos == pos and gmono.divides(mono) for gpos, gmono, _ in kept_leads):
            continue
        kept.append(v)
        kept_leads.append(lead)
    changed = True
    while changed:
        changed = False
        for idx in range(len(kept)):
            others = kept[:idx] + kept[idx + 1:]
            other_leads = kept_leads[:idx] + kept_leads[idx + 1:]
            r = _divide_remainder(kept[idx], others, other_leads)
            r = r.monic()
            if r != kept[idx]:
                kept[idx] = r
                kept_leads[idx] = r.leading_term()
                changed = True
    kept.sort(key=lambda v: (MonomialOrder.term_key(*v.leading_term()[:2]), v.sort_key()))
    return tuple(kept)


# ---------------------------------------------------------------------------
# the kernel
# ---------------------------------------------------------------------------

class PolynomialKernel(HomogeneousKernel):
    """Rational polynomial ring in up to 8 named variables, total-degree graded."""

    def __init__(self, variables: Sequence[str]):
        variables = tuple(str(v) for v in variables)
        if not variables:
            raise ValueError("at least one variable is required")
        if len(variables) > MAX_VARIABLES:
            raise ValueError(f"at most {MAX_VARIABLES} variables are supported")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        self.variables = variables
        self.nvars = len(variables)
        self._lock = threading.Lock()
        self._tagged_cache: dict = {}
        self._relations_cache: dict = {}
        self._ring = None

    def __eq__(self, other):
        return isinstance(other, PolynomialKernel) and self.variables == other.variables

    def __hash__(self):
        return hash(("PolynomialKernel", self.variables))

    def __repr__(self):
        return f"PolynomialKernel({', '.join(self.variables)})"

    # -- construction helpers -------------------------------------------

    def ring(self) -> ShiftedFreeModule:
        if self._ring is None:
            self._ring = ShiftedFreeModule(self, (0,))
        return self._ring

    def polynomial(self, terms: dict) -> Polynomial:
        """Build a polynomial from ``{exponent tuple: coefficient}``."""
        return Polynomial(self.nvars,
                          {Monomial(e): Fraction(c) for e, c in terms.items()})

    def constant(self, value) -> Polynomial:
        return Polynomial.constant(self.nvars, value)

    def variable(self, name: str) -> Polynomial:
        return Polynomial.variable(self.nvars, self.variables.index(name))

    def ring_element(self, poly: Polynomial):
        return self.ring().element_from_vector(PolyVector((poly,)))

    def monomial_element(self, mono: Monomial):
        return self.ring().element_from_vector(
            PolyVector((Polynomial(self.nvars, {mono: Fraction(1)}, _clean=False),)))

    # -- kernel contract -------------------------------------------------

    def zero_vector(self, rank: int) -> PolyVector:
        return PolyVector.zero(self.nvars, rank)

    def is_zero_vector(self, vec: PolyVector) -> bool:
        return vec.is_zero

    def add_vectors(self, a: PolyVector, b: PolyVector) -> PolyVector:
        return a + b

    def negate_vector(self, a: PolyVector) -> PolyVector:
        return -a

    def scale_vector(self, a: PolyVector, scalar: Fraction) -> PolyVector:
        return a.scale(scalar)

    def multiply(self, ring_vec: PolyVector, module_vec: PolyVector) -> PolyVector:
        if ring_vec.rank != 1:
            raise ValueError("ring payloads have rank 1")
        return module_vec.ring_mul(ring_vec.entries[0])

    def decompose(self, vec: PolyVector, shifts: Sequence[int]) -> dict[int, PolyVector]:
        if vec.rank != len(shifts):
            raise ValueError("vector rank does not match the module")
        split: dict[int, list[Polynomial]] = {}
        for slot, poly in enumerate(vec.entries):
            for d, part in poly.homogeneous_components().items():
                row = split.setdefault(
                    d + shifts[slot], [Polynomial.zero(self.nvars)] * len(shifts))
                row[slot] = part
        return {d: PolyVector(tuple(row)) for d, row in split.items()}

    def _tagged_basis(self, vecs: tuple[PolyVector, ...],
                      shifts: tuple[int, ...]) -> tuple[PolyVector, ...]:
        """Cached reduced basis of the vectors tagged with unit cofactor slots."""
        key = (vecs, shifts)
        with self._lock:
            cached = self._tagged_cache.get(key)
        if cached is not None:
            return cached
        k = len(vecs)
        tagged = []
        for i, v in enumerate(vecs):
            tag = [Polynomial.zero(self.nvars)] * k
            tag[i] = Polynomial.constant(self.nvars, 1)
            tagged.append(PolyVector(v.entries + tuple(tag)))
        basis = _classical_gb(tagged)
        with self._lock:
            self._tagged_cache[key] = basis
        return basis

    def h_syzygies(self, vecs: Sequence[PolyVector], degrees: Sequence[int],
                   shifts: Sequence[int]) -> list[PolyVector]:
        vecs = tuple(vecs)
        if not vecs:
            return []
        rank = len(shifts)
        for v, d in zip(vecs, degrees):
            if v.is_zero:
                raise ZeroElementError("syzygy generators must be nonzero")
        basis = self._tagged_basis(vecs, tuple(shifts))
        rows = []
        for g in basis:
            if all(not p for p in g.entries[:rank]):
                rows.append(PolyVector(g.entries[rank:]))
        def row_degree(row: PolyVector) -> int:
            for i, entry in enumerate(row.entries):
                if entry:
                    return entry.total_degree() + degrees[i]
            return 0
        rows.sort(key=lambda row: (row_degree(row), row.sort_key()))
        return rows

    def h_member_express(self, target: PolyVector, target_degree: int,
                         vecs: Sequence[PolyVector], degrees: Sequence[int],
                         shifts: Sequence[int]) -> tuple[PolyVector, ...] | None:
        if target.is_zero:
            raise ZeroElementError("membership target must be nonzero")
        vecs = tuple(vecs)
        if not vecs:
            return None
        rank = len(shifts)
        k = len(vecs)
        basis = self._tagged_basis(vecs, tuple(shifts))
        leads = [g.leading_term() for g in basis]
        padded = PolyVector(target.entries
                            + tuple(Polynomial.zero(self.nvars) for _ in range(k)))
        rem = _divide_remainder(padded, basis, leads)
        if any(rem.entries[:rank]):
            return None
        coeffs = tuple(PolyVector((-rem.entries[rank + i],)) for i in range(k))
        return coeffs

    def h_normal_form(self, vec: PolyVector, relations: Sequence[PolyVector],
                      shifts: Sequence[int]) -> PolyVector:
        relations = tuple(relations)
        if not relations or vec.is_zero:
            return vec
        key = (relations, tuple(shifts))
        with self._lock:
            basis = self._relations_cache.get(key)
        if basis is None:
            basis = _classical_gb(relations)
            with self._lock:
                self._relations_cache[key] = basis
        leads = [g.leading_term() for g in basis]
        return _divide_remainder(vec, basis, leads)

    def vector_sort_key(self, vec: PolyVector):
        return vec.sort_key()

    def monic_scale(self, vec: PolyVector) -> Fraction:
        if vec.is_zero:
            return Fraction(1)
        _, _, coeff = vec.leading_term()
        return Fraction(1, 1) / coeff

    def format_vector(self, vec: PolyVector, rank: int) -> str:
        if rank == 1:
            return format_polynomial(vec.entries[0], self.variables)
        return "[" + ", ".join(format_polynomial(p, self.variables)
                               for p in vec.entries) + "]"

    # -- extras used by the oracle and the CLI ----------------------------

    def monomials_of_degree(self, degree: int) -> list[Monomial]:
        out = []
        for combo in itertools.combinations_with_replacement(range(self.nvars), degree):
            exps = [0] * self.nvars
            for idx in combo:
                exps[idx] += 1
            out.append(Monomial(exps))
        out.sort(key=MonomialOrder.monomial_key)
        return out

    def monomials_up_to(self, degree: int) -> list[Monomial]:
        out = []
        for d in range(degree + 1):
            out.extend(self.monomials_of_degree(d))
        return out

    def vector_terms(self, vec: PolyVector):
        return vec.terms()


# ---------------------------------------------------------------------------
# formatting and variable adjunction
# ---------------------------------------------------------------------------

def format_coefficient(coeff: Fraction) -> str:
    return str(coeff)


def format_monomial(mono: Monomial, variables: Sequence[str]) -> str:
    parts = []
    for name, exp in zip(variables, mono.exponents):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    return "*".join(parts)


def format_polynomial(poly: Polynomial, variables: Sequence[str]) -> str:
    if not poly.terms:
        return "0"
    items = sorted(poly.terms.items(),
                   key=lambda mc: MonomialOrder.monomial_key(mc[0]), reverse=True)
    pieces = []
    for mono, coeff in items:
        mono_str = format_monomial(mono, variables)
        mag = coeff if coeff > 0 else -coeff
        if not mono_str:
            body = format_coefficient(mag)
        elif mag == 1:
            body = mono_str
        else:
            body = f"{format_coefficient(mag)}*{mono_str}"
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def append_variable(kernel: PolynomialKernel, name: str | None = None) -> PolynomialKernel:
    """A kernel with one extra variable appended."""
    if name is None:
        for candidate in ("t", "u", "w", "v", "s", "r", "q", "p"):
            if candidate not in kernel.variables:
                name = candidate
                break
        else:
            raise ValueError("no free variable name available")
    if name in kernel.variables:
        raise ValueError(f"variable {name!r} already present")
    return PolynomialKernel(kernel.variables + (name,))


def embed_polynomial(poly: Polynomial, target: PolynomialKernel) -> Polynomial:
    pad = target.nvars - poly.nvars
    if pad < 0:
        raise VariableMismatchError("target kernel has fewer variables")
    return Polynomial(target.nvars,
                      {Monomial(m.exponents + (0,) * pad): c
                       for m, c in poly.terms.items()}, _clean=False)


def embed_element(x, target_module: ShiftedFreeModule):
    """Re-read a graded element in a module over a larger variable set."""
    target_kernel = target_module.kernel
    comps = {}
    for comp in x.components():
        comps[comp.degree] = PolyVector(tuple(
            embed_polynomial(p, target_kernel) for p in comp.payload.entries))
    return target_module.element(comps)
