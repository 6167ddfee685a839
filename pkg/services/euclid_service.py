# services/euclid_service.py
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import floor
from typing import List, Optional, Tuple

from domain.errors import DivisionByZero, DomainError, InvariantViolation
from domain.orders import OrderStruct, Vec
from domain.words import Matrix2, Word
from services import lattice_service, units_service
from services.words_service import diag_letter, e_letter, eval_word

log = logging.getLogger(__name__)

__all__ = ["EUCLIDEAN_ORDERS", "euclidean_reference", "euclid_divide", "ge2_decompose"]

# norm-Euclidean orders among the builtins
EUCLIDEAN_ORDERS = ("Z", "I1", "I2", "I3", "I7", "I11", "O2", "O3", "O5")


@lru_cache(maxsize=None)
def euclidean_reference(order: OrderStruct) -> Optional[str]:
    """Name of the norm-Euclidean builtin this order is isomorphic to, if any."""
    if order.name in EUCLIDEAN_ORDERS:
        return order.name
    if not order.descriptor.is_definite:
        return None
    for name in EUCLIDEAN_ORDERS:
        candidate = lattice_service.builtin_order(name)
        if candidate.rank == order.rank and units_service.order_isomorphic(order, candidate):
            return name
    return None


def _require_euclidean(order: OrderStruct) -> None:
    if euclidean_reference(order) is None:
        raise DomainError(f"{order.label} is not norm-Euclidean here (supported: {', '.join(EUCLIDEAN_ORDERS)})")


def _nearest(order: OrderStruct, target: Tuple[Fraction, ...], remainder) -> Tuple[Vec, Vec]:
    """q near `target` with N(remainder(q)) minimal among the candidates tried."""
    rounded = tuple(floor(c + Fraction(1, 2)) for c in target)
    best = (rounded, remainder(rounded))
    for shift in product((-1, 0, 1), repeat=order.rank):
        q = tuple(a + s for a, s in zip(rounded, shift))
        r = remainder(q)
        if order.norm(r) < order.norm(best[1]):
            best = (q, r)
    return best


def euclid_divide(order: OrderStruct, a: Vec, b: Vec, side: str = "left") -> Tuple[Vec, Vec]:
    """a = q b + r (side="left") or a = b q + r (side="right") with N(r) < N(b).

    q rounds a b^-1 (resp. b^-1 a) coordinate-wise, then the +-1 neighbourhood
    is searched; as a last resort every lattice point within norm distance 1
    of the exact quotient is enumerated.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    _require_euclidean(order)
    if not any(b):
        raise DivisionByZero("division by zero in euclid_divide")
    a, b = tuple(a), tuple(b)
    if not any(a):
        return order.zero, order.zero

    x, y = order.element(a), order.element(b)
    exact = x * y.inverse() if side == "left" else y.inverse() * x
    target = order.rational_coords(exact)

    if side == "left":
        remainder = lambda q: order.sub(a, order.mul(q, b))
    else:
        remainder = lambda q: order.sub(a, order.mul(b, q))

    q, r = _nearest(order, target, remainder)
    nb = order.norm(b)
    if order.norm(r) >= nb:
        # N(r) = N(target - q) N(b): look for q with N(target - q) < 1
        candidates = list(units_service.ellipsoid_points(order, Fraction(1), center=target, strict=True))
        if not candidates:
            raise InvariantViolation(f"{order.label}: no quotient with N(r) < N(b) for a={order.format(a)}, b={order.format(b)}")
        q = min(candidates, key=lambda c: (order.norm(remainder(c)), c))
        r = remainder(q)
        log.debug("%s: division fell back to enumeration (%d candidates)", order.label, len(candidates))
    return q, r


def ge2_decompose(order: OrderStruct, m: Matrix2) -> Word:
    """A word in E- and Diag-letters evaluating to m, by Euclidean row reduction.

    E(x) on the left sends the first column (u, v) to (x u + v, -u); with
    v = q u + r and x = -q the top entry drops in norm until it is 0. The
    remaining upper triangular [[w, b], [0, d]] is [w, d] E(0) E(w^-1 b)^-1.
    """
    _require_euclidean(order)
    applied: List[Vec] = []
    current = m
    u, v = m.a, m.c
    if not any(u) and not any(v):
        raise DomainError("matrix is not invertible over the order (zero first column)")

    def apply(x: Vec) -> None:
        nonlocal current
        applied.append(x)
        current = Matrix2(
            order.add(order.mul(x, current.a), current.c),
            order.add(order.mul(x, current.b), current.d),
            order.neg(current.a),
            order.neg(current.b),
        )

    while any(current.c):
        if not any(current.a):
            # (0, v) -> (v, 0)
            apply(order.zero)
            continue
        q, _ = euclid_divide(order, current.c, current.a, side="left")
        apply(order.neg(q))

    w, top_right, d = current.a, current.b, current.d
    if not (order.is_unit(w) and order.is_unit(d)):
        raise DomainError("matrix is not invertible over the order")

    word: List = [e_letter(x).inverted() for x in applied]
    if (w, d) != (order.one, order.one):
        word.append(diag_letter(w, d))
    y = order.mul(order.unit_inverse(w), top_right)
    if any(y):
        # [[1, y], [0, 1]] = E(0) E(y)^-1
        word.extend([e_letter(order.zero), e_letter(y).inverted()])

    result = tuple(word)
    if eval_word(order, result) != m:
        raise InvariantViolation(f"{order.label}: decomposition does not evaluate back to the input")
    return result
