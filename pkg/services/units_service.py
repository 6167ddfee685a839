# services/units_service.py
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import floor, isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational

from domain.algebra import AlgebraElement
from domain.errors import DomainError, InvariantViolation
from domain.models import FiniteAbelianInvariants, FiniteGroupTable, UnitGroup
from domain.orders import OrderStruct, Vec
from services import catalog_service, group_service
from utils.intmat import integer_det, rational_rank, smith_invariants

from config import IDENTIFY_MAX_ORDER

log = logging.getLogger(__name__)

__all__ = [
    "ellipsoid_points",
    "short_vector_coords",
    "short_vectors",
    "unit_group",
    "identify_group",
    "unit_abelianization",
    "derived_units",
    "inv_of_order",
    "rational_span",
    "unit_generators",
    "center_size",
    "element_orders",
    "order_isomorphic",
]

UnitLike = Union[Vec, AlgebraElement]


# ─────────────────────────────────────────────────────────────
# Enumeration in the norm form
# ─────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def _ldl(order: OrderStruct) -> Tuple[Tuple[Tuple[Fraction, ...], ...], Tuple[Fraction, ...]]:
    """Exact LDL^T of the norm form's Gram matrix in order coordinates."""
    n = order.rank
    gram = Matrix(n, n, lambda i, j: Rational(order.gram2[i][j], 2))
    L, D = gram.LDLdecomposition(hermitian=False)
    to_f = lambda q: Fraction(int(q.p), int(q.q))
    lower = tuple(tuple(to_f(L[i, j]) for j in range(n)) for i in range(n))
    diag = tuple(to_f(D[i, i]) for i in range(n))
    if any(d <= 0 for d in diag):
        raise DomainError(f"norm form of {order.label} is not positive definite")
    return lower, diag


def ellipsoid_points(
    order: OrderStruct,
    bound: Fraction,
    center: Optional[Sequence[Fraction]] = None,
    strict: bool = False,
) -> Iterator[Vec]:
    """Integer x with N(x - center) <= bound (or < bound when strict).

    Fincke-Pohst over the exact LDL^T factors: coordinates are fixed from the
    last one down, each ranging over an exactly computed interval.
    """
    lower, diag = _ldl(order)
    n = order.rank
    target = [Fraction(c) for c in center] if center is not None else [Fraction(0)] * n
    bound = Fraction(bound)
    x = [0] * n

    def level(i: int, remaining: Fraction) -> Iterator[Vec]:
        c = target[i] - sum((lower[j][i] * (x[j] - target[j]) for j in range(i + 1, n)), Fraction(0))
        span = isqrt(floor(remaining / diag[i])) + 1
        base = floor(c)
        for xi in range(base - span, base + span + 2):
            used = diag[i] * (xi - c) ** 2
            if used > remaining:
                continue
            x[i] = xi
            rest = remaining - used
            if i == 0:
                if not strict or rest > 0:
                    yield tuple(x)
            else:
                yield from level(i - 1, rest)

    if bound < 0:
        return
    yield from level(n - 1, bound)


@lru_cache(maxsize=None)
def short_vector_coords(order: OrderStruct, t: int) -> Tuple[Vec, ...]:
    if t <= 0:
        raise DomainError(f"short vectors need a positive norm, got {t}")
    if not order.descriptor.is_definite:
        raise DomainError(f"{order.label} is not definite; its norm form has infinitely many solutions")
    found = sorted(x for x in ellipsoid_points(order, Fraction(t)) if order.norm(x) == t)
    log.debug("%s: %d elements of norm %d", order.label, len(found), t)
    return tuple(found)


def short_vectors(order: OrderStruct, t: int) -> List[AlgebraElement]:
    """All x in the order with N(x) = t, sorted by order coordinates."""
    return [order.element(x) for x in short_vector_coords(order, t)]


# ─────────────────────────────────────────────────────────────
# Unit groups
# ─────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def unit_group(order: OrderStruct) -> UnitGroup:
    if not order.descriptor.is_definite:
        raise DomainError(
            f"{order.label}: unit group is infinite (orders have finite unit groups only in "
            "Q, imaginary quadratic fields and totally definite quaternion algebras)"
        )
    elements = short_vector_coords(order, 1)
    index = {u: i for i, u in enumerate(elements)}
    table = []
    for u in elements:
        row = []
        for v in elements:
            w = order.mul(u, v)
            if w not in index:
                raise InvariantViolation(f"{order.label}: product of units {order.format(u)}, {order.format(v)} is not a unit")
            row.append(index[w])
        table.append(tuple(row))
    group = FiniteGroupTable(
        tuple(table),
        tuple(order.format(u) for u in elements),
        label=f"U({order.label})",
        provenance="units",
    )
    if order.one not in index:
        raise InvariantViolation(f"{order.label}: 1 is missing from the unit enumeration")
    for u in elements:
        if order.conj(u) not in index:
            raise InvariantViolation(f"{order.label}: inverse of {order.format(u)} is missing")
    group_service.validate(group)
    return UnitGroup(order, elements, group)


def _as_table(g: Union[UnitGroup, FiniteGroupTable]) -> FiniteGroupTable:
    return g.group if isinstance(g, UnitGroup) else g


def identify_group(g: Union[UnitGroup, FiniteGroupTable]) -> str:
    """C_n, Q8, SL(2,3), C3:C4, or "other"."""
    G = _as_table(g)
    if G.n > IDENTIFY_MAX_ORDER:
        return "other"
    if max(G.orders) == G.n:
        return f"C{G.n}"
    for name in ("Q8", "SL(2,3)", "C3:C4"):
        H = catalog_service.build_group(name)
        if H.n == G.n and group_service.is_isomorphic(G, H):
            return name
    return "other"


def derived_units(units: UnitGroup) -> Tuple[Vec, ...]:
    D = group_service.derived_subgroup(units.group)
    return tuple(units.elements[i] for i in sorted(D))


def unit_abelianization(units: Union[UnitGroup, FiniteGroupTable]) -> FiniteAbelianInvariants:
    return group_service.abelianization_invariants(_as_table(units))


def unit_generators(units: UnitGroup) -> List[Vec]:
    return [units.elements[i] for i in group_service.generating_set(units.group)]


def center_size(units: UnitGroup) -> int:
    return len(group_service.center(units.group))


def element_orders(units: UnitGroup) -> Dict[int, int]:
    return dict(sorted(group_service.element_order_counts(units.group).items()))


# ─────────────────────────────────────────────────────────────
# inv_O and spans
# ─────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def inv_of_order(order: OrderStruct) -> int:
    """Largest number of units that extend to a Z-basis of the order.

    A set of k vectors extends to a basis iff its k invariant factors are all 1.
    """
    units = unit_group(order).elements
    reps: List[Vec] = []
    for u in units:
        if order.neg(u) not in reps:
            reps.append(u)
    for k in range(min(order.rank, len(reps)), 0, -1):
        for subset in combinations(reps, k):
            invariants = smith_invariants([list(u) for u in subset])
            if len(invariants) == k and all(d == 1 for d in invariants):
                log.debug("%s: inv = %d via %s", order.label, k, [order.format(u) for u in subset])
                return k
    raise InvariantViolation(f"{order.label}: not even 1 extends to a basis")


def rational_span(order: OrderStruct, subset: Sequence[UnitLike]) -> int:
    rows = []
    for u in subset:
        v = order.coords(u) if isinstance(u, AlgebraElement) else tuple(u)
        rows.append([Fraction(c) for c in v])
    return rational_rank(rows) if rows else 0


# ─────────────────────────────────────────────────────────────
# Ring isomorphism of orders
# ─────────────────────────────────────────────────────────────

def _bilinear(order: OrderStruct, x: Vec, y: Vec) -> int:
    g = order.gram2
    return sum(xi * g[i][j] * yj for i, xi in enumerate(x) if xi for j, yj in enumerate(y) if yj)


def order_isomorphic(first: OrderStruct, second: OrderStruct) -> bool:
    """Search for a unital ring isomorphism first -> second.

    An isomorphism extends to the algebras and preserves norm and trace, so
    each basis element goes to an element of the same norm and trace.
    """
    n = first.rank
    if n != second.rank:
        return False
    if unit_group(first).size != unit_group(second).size:
        return False
    if abs(integer_det([list(r) for r in first.gram2])) != abs(integer_det([list(r) for r in second.gram2])):
        return False

    candidates: List[List[Vec]] = []
    for i in range(n):
        norm = first.gram2[i][i] // 2
        trace = first.traces[i]
        candidates.append([y for y in short_vector_coords(second, norm) if second.trace(y) == trace])

    def images_of(x: Vec, images: Sequence[Vec]) -> Vec:
        out = second.zero
        for c, y in zip(x, images):
            if c:
                out = second.add(out, second.scale(c, y))
        return out

    def is_ring_map(images: Sequence[Vec]) -> bool:
        if images_of(first.one, images) != second.one:
            return False
        for i in range(n):
            for j in range(n):
                lhs = second.mul(images[i], images[j])
                rhs = second.zero
                for k, c in first.structure[i][j]:
                    rhs = second.add(rhs, second.scale(c, images[k]))
                if lhs != rhs:
                    return False
        return abs(integer_det([list(y) for y in images])) == 1

    def search(images: List[Vec]) -> bool:
        i = len(images)
        if i == n:
            return is_ring_map(images)
        for y in candidates[i]:
            if all(_bilinear(second, y, images[j]) == first.gram2[i][j] for j in range(i)):
                if search(images + [y]):
                    return True
        return False

    return search([])
