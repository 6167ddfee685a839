# services/lattice_service.py
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from domain.algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    imaginary_quadratic,
    is_squarefree,
    quaternion_algebra,
    rationals,
    squarefree_decomposition,
)
from domain.errors import DomainError, InvariantViolation
from domain.models import FiniteAbelianInvariants
from domain.orders import Lattice, OrderStruct, Vec
from utils.intmat import hnf_columns, rational_inverse, rational_rank, rational_solve, smith_invariants

log = logging.getLogger(__name__)

__all__ = [
    "BUILTIN_NAMES",
    "canonical_basis",
    "quotient_invariants",
    "lattice_index",
    "contains",
    "order_from_basis",
    "builtin_order",
    "ideal_closure",
    "ideal_columns",
    "order_sublattice",
    "quotient_by_columns",
    "order_key",
]

BUILTIN_NAMES = ("Z", "I1", "I2", "I3", "I7", "I11", "L", "O2", "O3", "O5")

ElementLike = Union[AlgebraElement, Sequence]


# ─────────────────────────────────────────────────────────────
# Helpers
# ─────────────────────────────────────────────────────────────

def _as_element(descriptor: AlgebraDescriptor, x: ElementLike) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        if x.descriptor != descriptor:
            raise DomainError(f"descriptor mismatch: {x.descriptor.spec} vs {descriptor.spec}")
        return x
    return descriptor.element(*[Fraction(c) for c in x])


def _is_integral(values: Iterable[Fraction]) -> bool:
    return all(Fraction(v).denominator == 1 for v in values)


def _saturate(order: OrderStruct, columns: Tuple[Vec, ...]) -> Tuple[Vec, ...]:
    """Close a sublattice (order coordinates) under left and right multiplication by the basis."""
    n = order.rank
    basis = [order.basis_vector(i) for i in range(n)]
    rounds = 0
    while True:
        rounds += 1
        products: List[Vec] = list(columns)
        for c in columns:
            for b in basis:
                products.append(order.mul(b, c))
                products.append(order.mul(c, b))
        nxt = hnf_columns(products, n)
        if nxt == columns:
            log.debug("ideal saturation in %s stabilized after %d rounds", order.label, rounds)
            return columns
        columns = nxt


# ─────────────────────────────────────────────────────────────
# Lattices
# ─────────────────────────────────────────────────────────────

def canonical_basis(descriptor: AlgebraDescriptor, vectors: Iterable[ElementLike]) -> Lattice:
    """Canonical form of the Z-span of `vectors`.

    The lattice is scaled by the smallest denominator that makes it integral
    and then put in Hermite normal form, so equal lattices give equal values.
    """
    elements = [_as_element(descriptor, v) for v in vectors]
    dim = descriptor.dimension
    if not elements:
        return Lattice(descriptor, 1, ())
    den = lcm(*[c.denominator for e in elements for c in e.coords])
    columns = hnf_columns([[int(c * den) for c in e.coords] for e in elements], dim)
    if not columns:
        return Lattice(descriptor, 1, ())
    g = den
    for col in columns:
        for x in col:
            g = gcd(g, x)
    return Lattice(descriptor, den // g, tuple(tuple(x // g for x in col) for col in columns))


def _coordinates_in(ambient: Lattice, element: AlgebraElement) -> Optional[List[Fraction]]:
    return rational_solve([b.coords for b in ambient.basis], element.coords)


def contains(lattice: Lattice, element: ElementLike) -> bool:
    x = _as_element(lattice.descriptor, element)
    if x.is_zero():
        return True
    coords = _coordinates_in(lattice, x)
    return coords is not None and _is_integral(coords)


def quotient_invariants(ambient: Lattice, sub: Lattice) -> FiniteAbelianInvariants:
    """Invariants of ambient/sub via the Smith form of the inclusion matrix."""
    if ambient.descriptor != sub.descriptor:
        raise DomainError("lattices live in different algebras")
    rows: List[List[int]] = []
    for b in sub.basis:
        coords = _coordinates_in(ambient, b)
        if coords is None or not _is_integral(coords):
            raise DomainError(f"{b} is not in the ambient lattice; sub is not contained in ambient")
        rows.append([int(c) for c in coords])
    invariants = smith_invariants(rows) if rows else []
    return FiniteAbelianInvariants(
        torsion=tuple(d for d in invariants if d > 1),
        free_rank=ambient.rank - sub.rank,
    )


def lattice_index(ambient: Lattice, sub: Lattice) -> Optional[int]:
    """|ambient/sub|, or None when the quotient is infinite."""
    return quotient_invariants(ambient, sub).order


def quotient_by_columns(rank: int, columns: Sequence[Vec]) -> FiniteAbelianInvariants:
    """Invariants of Z^rank / span(columns), columns in order coordinates."""
    invariants = smith_invariants([list(c) for c in columns]) if columns else []
    return FiniteAbelianInvariants(
        torsion=tuple(d for d in invariants if d > 1),
        free_rank=rank - len(invariants),
    )


# ─────────────────────────────────────────────────────────────
# Orders
# ─────────────────────────────────────────────────────────────

def order_from_basis(
    descriptor: AlgebraDescriptor,
    basis: Sequence[ElementLike],
    name: str = "",
) -> OrderStruct:
    """Validate that `basis` spans an order and cache its integer structure constants."""
    elements = tuple(_as_element(descriptor, b) for b in basis)
    n = descriptor.dimension
    if len(elements) != n or rational_rank([list(e.coords) for e in elements]) != n:
        raise DomainError(f"not an order: basis of {descriptor.spec} must have {n} independent elements")

    # columns of the basis matrix are the basis elements
    matrix = [[elements[j].coords[i] for j in range(n)] for i in range(n)]
    to_coords = tuple(tuple(row) for row in rational_inverse(matrix))

    def coords_of(x: AlgebraElement) -> Tuple[Fraction, ...]:
        return tuple(sum((m * c for m, c in zip(row, x.coords)), Fraction(0)) for row in to_coords)

    one = coords_of(descriptor.one())
    if not _is_integral(one):
        raise DomainError(f"not an order: 1 is not in the lattice spanned by {[str(e) for e in elements]}")

    structure = []
    for i, bi in enumerate(elements):
        row = []
        for j, bj in enumerate(elements):
            c = coords_of(bi * bj)
            if not _is_integral(c):
                raise DomainError(f"not an order: ({bi})*({bj}) = {bi * bj} is not in the lattice")
            row.append(tuple((k, int(v)) for k, v in enumerate(c) if v))
        structure.append(tuple(row))

    traces = [e.trace() for e in elements]
    gram2 = [[(elements[i] + elements[j]).norm() - elements[i].norm() - elements[j].norm() for j in range(n)] for i in range(n)]
    for i in range(n):
        gram2[i][i] = 2 * elements[i].norm()
    if not _is_integral(traces) or not all(_is_integral(r) for r in gram2):
        raise InvariantViolation(f"order in {descriptor.spec} has non-integral traces or norms")

    order = OrderStruct(
        descriptor=descriptor,
        basis=elements,
        name=name,
        lattice=canonical_basis(descriptor, elements),
        structure=tuple(structure),
        to_coords=to_coords,
        traces=tuple(int(t) for t in traces),
        gram2=tuple(tuple(int(x) for x in r) for r in gram2),
        one=tuple(int(c) for c in one),
    )
    log.debug("built order %s with basis %s", order.label, [str(e) for e in elements])
    return order


def _ring_of_integers(d: int, name: str) -> OrderStruct:
    if d <= 0 or not is_squarefree(d):
        raise DomainError(f"ring of integers needs a positive square-free d, got {d}")
    A = imaginary_quadratic(d)
    w = A.basis_element(1)
    second = (A.one() + w) * Fraction(1, 2) if d % 4 == 3 else w
    return order_from_basis(A, [A.one(), second], name)


def _quadratic_suborder(d: int) -> OrderStruct:
    if d <= 0:
        raise DomainError(f"Z[sqrt(-d)] needs d > 0, got {d}")
    f, d0 = squarefree_decomposition(d)
    A = imaginary_quadratic(d0)
    return order_from_basis(A, [A.one(), A.basis_element(1) * f], f"Zsqrt:{d}")


@lru_cache(maxsize=None)
def builtin_order(name: str) -> OrderStruct:
    """Orders with the bases used throughout: I_d, Z[sqrt(-d)], L, O2, O3, O5."""
    name = name.strip()
    if name == "Z":
        Q = rationals()
        return order_from_basis(Q, [Q.one()], "Z")
    if name in ("I1", "I2", "I3", "I7", "I11"):
        return _ring_of_integers(int(name[1:]), name)
    if name.startswith("Iq:"):
        try:
            d = int(name[3:])
        except ValueError:
            raise DomainError(f"unknown order: {name!r}")
        return _ring_of_integers(d, name)
    if name.startswith("Zsqrt:"):
        try:
            d = abs(int(name[6:]))
        except ValueError:
            raise DomainError(f"unknown order: {name!r}")
        return _quadratic_suborder(d)

    half, quarter = Fraction(1, 2), Fraction(1, 4)
    if name in ("L", "O2"):
        H = quaternion_algebra(-1, -1)
        one, i, j, k = (H.basis_element(t) for t in range(4))
        last = k if name == "L" else (one + i + j + k) * half
        return order_from_basis(H, [one, i, j, last], name)
    if name == "O3":
        H = quaternion_algebra(-1, -3)
        one, i, j, k = (H.basis_element(t) for t in range(4))
        return order_from_basis(H, [one, i, (one + j) * half, (i + k) * half], name)
    if name == "O5":
        H = quaternion_algebra(-2, -5)
        one, i, j, k = (H.basis_element(t) for t in range(4))
        return order_from_basis(
            H,
            [one, (one + i + j) * half, (2 * one + i - k) * quarter, (2 * one + 3 * i + k) * quarter],
            name,
        )
    raise DomainError(f"unknown order: {name!r}")


# ─────────────────────────────────────────────────────────────
# Ideals
# ─────────────────────────────────────────────────────────────

def ideal_columns(order: OrderStruct, generators: Iterable[Vec]) -> Tuple[Vec, ...]:
    """Two-sided ideal generated by `generators`, as HNF columns in order coordinates."""
    start = hnf_columns(list(generators), order.rank)
    if not start:
        return ()
    return _saturate(order, start)


def order_sublattice(order: OrderStruct, columns: Sequence[Vec]) -> Lattice:
    return canonical_basis(order.descriptor, [order.element(c) for c in columns])


def ideal_closure(order: OrderStruct, generators: Iterable[ElementLike]) -> Lattice:
    coords = []
    for g in generators:
        x = _as_element(order.descriptor, g)
        if not order.contains_element(x):
            raise DomainError(f"generator {x} lies outside {order.label}")
        coords.append(order.coords(x))
    return order_sublattice(order, ideal_columns(order, coords))


def order_key(order: OrderStruct) -> Dict[str, object]:
    lattice = order.lattice or canonical_basis(order.descriptor, order.basis)
    return {
        "descriptor": order.descriptor.spec,
        "denominator": lattice.denominator,
        "columns": [list(c) for c in lattice.columns],
    }
