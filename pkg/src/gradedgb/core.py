"""Degree calculus for graded elements of shifted free modules.

Everything in this module is driven by the grading alone: an element is a
finitely supported sum of homogeneous components indexed by integer degree,
its degree is the top of the support, and its initial term is the component
sitting there.  The payload of a component is an opaque homogeneous value
owned by a homogeneous kernel; the :class:`HomogeneousKernel` contract at the
bottom of this module is the extension point concrete graded rings implement.

Values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

Degree = int


class ZeroElementError(ValueError):
    """Degree / initial term of the zero element is undefined."""


class AmbientMismatchError(ValueError):
    """Operands live in different modules or over different kernels."""


class LowerBoundError(ValueError):
    """A component was placed below the module's lower degree bound."""


class HomogeneousKernel(ABC):
    """Contract every concrete graded ring must satisfy.

    A kernel owns the homogeneous layer: component arithmetic, homogeneous
    syzygies and homogeneous membership-with-expression.  Payloads are
    homogeneous vectors of a given rank; a rank-1 payload doubles as a ring
    scalar.  The degree bookkeeping (shifts, supports) is done by the caller;
    the kernel only ever sees homogeneous data.
    """

    @abstractmethod
    def zero_vector(self, rank: int) -> Any:
        """The zero payload of the given rank."""

    @abstractmethod
    def is_zero_vector(self, vec: Any) -> bool:
        ...

    @abstractmethod
    def add_vectors(self, a: Any, b: Any) -> Any:
        ...

    @abstractmethod
    def negate_vector(self, a: Any) -> Any:
        ...

    @abstractmethod
    def scale_vector(self, a: Any, scalar: Fraction) -> Any:
        ...

    @abstractmethod
    def multiply(self, ring_vec: Any, module_vec: Any) -> Any:
        """Product of a rank-1 ring payload with a module payload."""

    @abstractmethod
    def decompose(self, vec: Any, shifts: Sequence[int]) -> dict[int, Any]:
        """Split a raw vector into homogeneous payloads keyed by degree."""

    @abstractmethod
    def h_syzygies(self, vecs: Sequence[Any], degrees: Sequence[int],
                   shifts: Sequence[int]) -> list[Any]:
        """A finite homogeneous generating set of the syzygies of ``vecs``.

        Each returned row is a rank-``len(vecs)`` vector of homogeneous ring
        scalars ``c`` with ``sum(c[i] * vecs[i]) == 0``.  The list is empty
        when there are no syzygies.
        """

    @abstractmethod
    def h_member_express(self, target: Any, target_degree: int,
                         vecs: Sequence[Any], degrees: Sequence[int],
                         shifts: Sequence[int]) -> tuple[Any, ...] | None:
        """Express a homogeneous target over homogeneous generators.

        On success returns rank-1 ring payloads ``a`` with exact degrees
        ``target_degree - degrees[i]`` and ``sum(a[i] * vecs[i]) == target``;
        returns ``None`` when the target is not in the span.
        """

    @abstractmethod
    def h_normal_form(self, vec: Any, relations: Sequence[Any],
                      shifts: Sequence[int]) -> Any:
        """Canonical representative of ``vec`` modulo homogeneous relations."""

    @abstractmethod
    def vector_sort_key(self, vec: Any):
        """Total, deterministic sort key for payloads of equal rank."""

    @abstractmethod
    def monic_scale(self, vec: Any) -> Fraction:
        """Scalar ``c`` such that ``c * vec`` has leading coefficient 1."""

    @abstractmethod
    def format_vector(self, vec: Any, rank: int) -> str:
        ...


@dataclass(frozen=True)
class HomogeneousComponent:
    """A single homogeneous piece of a graded element."""

    degree: int
    payload: Any


class ShiftedFreeModule:
    """Free module with basis vectors declared homogeneous of given degrees.

    ``shifts[i]`` is the degree of the i-th basis vector; a payload entry of
    ring degree d in slot i contributes to module degree ``d + shifts[i]``.
    The ring itself is the rank-1 module with shift 0 (see ``ring_of``).
    Components below ``lower_bound`` are rejected on insertion.
    """

    __slots__ = ("kernel", "shifts", "_hash")

    def __init__(self, kernel: HomogeneousKernel, shifts: Sequence[int]):
        shifts = tuple(int(s) for s in shifts)
        if not shifts:
            raise ValueError("a module needs at least one basis vector")
        self.kernel = kernel
        self.shifts = shifts
        self._hash = hash((kernel, shifts))

    @property
    def rank(self) -> int:
        return len(self.shifts)

    @property
    def lower_bound(self) -> int:
        return min(self.shifts)

    @property
    def is_ring(self) -> bool:
        return self.shifts == (0,)

    @property
    def free(self) -> "ShiftedFreeModule":
        return self

    def __eq__(self, other):
        return (isinstance(other, ShiftedFreeModule)
                and self.kernel == other.kernel and self.shifts == other.shifts)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ShiftedFreeModule(shifts={self.shifts})"

    def canonical_components(self, components: Mapping[int, Any]) -> dict[int, Any]:
        """Validated sparse form: no zero payloads, nothing below the bound."""
        out: dict[int, Any] = {}
        for d, payload in components.items():
            if self.kernel.is_zero_vector(payload):
                continue
            if d < self.lower_bound:
                raise LowerBoundError(
                    f"component of degree {d} below module lower bound {self.lower_bound}")
            out[int(d)] = payload
        return out

    def element(self, components: Mapping[int, Any]) -> "GradedElement":
        return GradedElement(self, components)

    def element_from_vector(self, vec: Any) -> "GradedElement":
        return GradedElement(self, self.kernel.decompose(vec, self.shifts))

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def h_syzygies(self, payloads, degrees):
        return self.kernel.h_syzygies(payloads, degrees, self.shifts)

    def h_member_express(self, target, target_degree, payloads, degrees):
        return self.kernel.h_member_express(
            target, target_degree, payloads, degrees, self.shifts)

    def standard_coords(self, max_degree: int):
        """Coordinates ``(degree, position, monomial)`` up to ``max_degree``."""
        coords = []
        for pos, shift in enumerate(self.shifts):
            if max_degree - shift < 0:
                continue
            for mono in self.kernel.monomials_up_to(max_degree - shift):
                coords.append((mono.degree + shift, pos, mono))
        return coords


def ring_of(kernel: HomogeneousKernel) -> ShiftedFreeModule:
    """The kernel's ring viewed as the rank-1 free module with shift 0."""
    return ShiftedFreeModule(kernel, (0,))


class GradedElement:
    """Finitely supported sum of homogeneous components.

    Canonical sparse form: no zero payloads are stored, the zero element has
    empty support, and equality is component-wise.  Arithmetic delegates to
    the kernel; ``ring_element * module_element`` is the module action.
    """

    __slots__ = ("module", "_components", "_hash")

    def __init__(self, module, components: Mapping[int, Any]):
        self.module = module
        self._components = module.canonical_components(components)
        self._hash = None

    # -- structure -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._components

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._components))

    def components(self) -> tuple[HomogeneousComponent, ...]:
        return tuple(HomogeneousComponent(d, self._components[d])
                     for d in sorted(self._components))

    def component(self, degree: int) -> Any | None:
        """Payload at the given degree, or None."""
        return self._components.get(degree)

    def degree(self) -> int:
        if not self._components:
            raise ZeroElementError("the zero element has no degree")
        return max(self._components)

    def initial_term(self) -> HomogeneousComponent:
        d = self.degree()
        return HomogeneousComponent(d, self._components[d])

    def homogeneous_part(self, degree: int) -> "GradedElement":
        payload = self._components.get(degree)
        if payload is None:
            return self.module.zero()
        return GradedElement(self.module, {degree: payload})

    @property
    def is_homogeneous(self) -> bool:
        return len(self._components) <= 1

    def vector(self) -> Any:
        """All components summed into one raw kernel vector."""
        kernel = self.module.kernel
        acc = kernel.zero_vector(self.module.free.rank)
        for d in sorted(self._components):
            acc = kernel.add_vectors(acc, self._components[d])
        return acc

    def with_module(self, module) -> "GradedElement":
        """The same component data re-homed (e.g. quotient class -> free lift)."""
        return GradedElement(module, dict(self._components))

    # -- arithmetic ------------------------------------------------------

    def _check_same_module(self, other: "GradedElement"):
        if self.module != other.module:
            raise AmbientMismatchError("elements live in different modules")

    def __add__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check_same_module(other)
        kernel = self.module.kernel
        comps = dict(self._components)
        for d, payload in other._components.items():
            comps[d] = kernel.add_vectors(comps[d], payload) if d in comps else payload
        return GradedElement(self.module, comps)

    def __sub__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        kernel = self.module.kernel
        return GradedElement(
            self.module, {d: kernel.negate_vector(p) for d, p in self._components.items()})

    def scale(self, scalar) -> "GradedElement":
        scalar = Fraction(scalar)
        if scalar == 0:
            return self.module.zero()
        kernel = self.module.kernel
        return GradedElement(
            self.module, {d: kernel.scale_vector(p, scalar) for d, p in self._components.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GradedElement):
            if self.module.kernel != other.module.kernel:
                raise AmbientMismatchError("elements over different kernels")
            if getattr(self.module, "is_ring", False):
                return _module_action(self, other)
            if getattr(other.module, "is_ring", False):
                return _module_action(other, self)
            raise AmbientMismatchError("one factor must be a ring element")
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, GradedElement)
                and self.module == other.module
                and self._components == other._components)

    def __hash__(self):
        if self._hash is None:
            items = tuple((d, self._components[d]) for d in sorted(self._components))
            self._hash = hash((self.module, items))
        return self._hash

    def __repr__(self):
        kernel = self.module.kernel
        return kernel.format_vector(self.vector(), self.module.free.rank)


def _module_action(ring_elt: GradedElement, module_elt: GradedElement) -> GradedElement:
    kernel = module_elt.module.kernel
    comps: dict[int, Any] = {}
    for dr, pr in ring_elt._components.items():
        for dm, pm in module_elt._components.items():
            prod = kernel.multiply(pr, pm)
            d = dr + dm
            comps[d] = kernel.add_vectors(comps[d], prod) if d in comps else prod
    return GradedElement(module_elt.module, comps)


def degree(x: GradedElement) -> int:
    """Top of the support of a nonzero graded element."""
    return x.degree()


def initial_term(x: GradedElement) -> HomogeneousComponent:
    """The component of ``x`` at ``degree(x)``."""
    return x.initial_term()


def is_reduced_expression(y: GradedElement,
                          terms: Iterable[tuple[GradedElement, GradedElement]]) -> bool:
    """Whether ``y == sum(a * x)`` with ``deg(a) + deg(x) <= deg(y)`` throughout.

    Zero coefficients are skipped; zero targets or generators are rejected
    because their degree is undefined.
    """
    if y.is_zero:
        raise ZeroElementError("target of a reduced expression must be nonzero")
    bound = y.degree()
    total = y.module.zero()
    for a, x in terms:
        if x.is_zero:
            raise ZeroElementError("generators must be nonzero")
        if a.is_zero:
            continue
        if a.degree() + x.degree() > bound:
            return False
        total = total + a * x
    return total == y
