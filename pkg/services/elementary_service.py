# services/elementary_service.py
from __future__ import annotations

import logging
from itertools import permutations
from random import Random
from typing import Dict, List, Optional, Tuple

from domain.errors import DomainError, InvariantViolation
from domain.orders import OrderStruct, Vec
from services.words_service import random_element

from config import SAMPLES, SEED

log = logging.getLogger(__name__)

__all__ = ["elementary", "commutator", "expected_commutator", "elementary_commutator_check"]

MatrixN = Tuple[Tuple[Vec, ...], ...]


# ─────────────────────────────────────────────────────────────
# n x n matrices over an order
# ─────────────────────────────────────────────────────────────

def _identity(order: OrderStruct, n: int) -> MatrixN:
    return tuple(tuple(order.one if i == j else order.zero for j in range(n)) for i in range(n))


def _mul(order: OrderStruct, x: MatrixN, y: MatrixN) -> MatrixN:
    n = len(x)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            total = order.zero
            for k in range(n):
                if any(x[i][k]) and any(y[k][j]):
                    total = order.add(total, order.mul(x[i][k], y[k][j]))
            row.append(total)
        rows.append(tuple(row))
    return tuple(rows)


def elementary(order: OrderStruct, n: int, i: int, j: int, r: Vec) -> MatrixN:
    """e_ij(r) = I + r E_ij (0-based indices)."""
    if i == j:
        raise DomainError("e_ij needs i != j")
    rows = [list(row) for row in _identity(order, n)]
    rows[i][j] = tuple(r)
    return tuple(tuple(row) for row in rows)


def commutator(order: OrderStruct, n: int, x: Tuple[int, int, Vec], y: Tuple[int, int, Vec]) -> MatrixN:
    """(x, y) = x^-1 y^-1 x y for elementary x, y; e_ij(r)^-1 = e_ij(-r)."""
    (i, j, r), (k, l, s) = x, y
    return _mul(order, _mul(order, elementary(order, n, i, j, order.neg(r)), elementary(order, n, k, l, order.neg(s))),
                _mul(order, elementary(order, n, i, j, r), elementary(order, n, k, l, s)))


def expected_commutator(order: OrderStruct, n: int, k: int, l: int, s: Vec, i: int, j: int, r: Vec) -> Tuple[str, MatrixN]:
    """(e_kl(s), e_ij(r)) for |{i, j, k, l}| > 2."""
    if j != k and i != l:
        return "trivial", _identity(order, n)
    if j == k and i != l:
        return "e_il(-rs)", elementary(order, n, i, l, order.neg(order.mul(r, s)))
    if j != k and i == l:
        return "e_kj(sr)", elementary(order, n, k, j, order.mul(s, r))
    raise DomainError("index set of size 2 is outside the commutator formula")


def _index_pairs(n: int) -> List[Tuple[int, int]]:
    return list(permutations(range(n), 2))


def _admissible(first: Tuple[int, int], second: Tuple[int, int]) -> bool:
    return len({*first, *second}) > 2


def _iterated(order: OrderStruct, n: int, i: int, k: int, t: Vec) -> MatrixN:
    # (x_{i,i+1}(t), x_{i+1,i+2}(1), ..., x_{i+k-1,i+k}(1)), left-normed, indices mod n
    value = elementary(order, n, i, (i + 1) % n, t)
    inverse = elementary(order, n, i, (i + 1) % n, order.neg(t))
    for step in range(1, k):
        a, b = (i + step) % n, (i + step + 1) % n
        y, y_inv = elementary(order, n, a, b, order.one), elementary(order, n, a, b, order.neg(order.one))
        # (v, y) = v^-1 y^-1 v y and its inverse y^-1 v^-1 y v
        value, inverse = (
            _mul(order, _mul(order, inverse, y_inv), _mul(order, value, y)),
            _mul(order, _mul(order, y_inv, inverse), _mul(order, y, value)),
        )
    return value


def elementary_commutator_check(
    order: OrderStruct,
    n: int = 3,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> Dict[str, int]:
    """Commutator formulas for elementary matrices in E_n(O), n in {3, 4}.

    Every admissible index quadruple is checked once, then `samples` random
    quadruples with random ring elements; finally x_{i,i+k}(t) is rebuilt as
    an iterated commutator of superdiagonal generators.
    """
    if n not in (3, 4):
        raise DomainError(f"elementary checks support n = 3 or 4, got {n}")
    samples = SAMPLES if samples is None else samples
    seed = SEED if seed is None else seed
    rng = Random(seed)
    pairs = _index_pairs(n)
    quadruples = [(p, q) for p in pairs for q in pairs if _admissible(p, q)]
    checked: Dict[str, int] = {}

    def check(kl: Tuple[int, int], ij: Tuple[int, int], s: Vec, r: Vec) -> None:
        (k, l), (i, j) = kl, ij
        case, expected = expected_commutator(order, n, k, l, s, i, j, r)
        if commutator(order, n, (k, l, s), (i, j, r)) != expected:
            raise InvariantViolation(
                f"{order.label}: (e_{k + 1}{l + 1}(s), e_{i + 1}{j + 1}(r)) != {case} "
                f"for s={order.format(s)}, r={order.format(r)}"
            )
        checked[case] = checked.get(case, 0) + 1

    for kl, ij in quadruples:
        check(kl, ij, random_element(order, rng), random_element(order, rng))
    for _ in range(samples):
        kl, ij = rng.choice(quadruples)
        check(kl, ij, random_element(order, rng), random_element(order, rng))

    for i in range(n):
        for k in range(1, n):
            t = random_element(order, rng)
            if _iterated(order, n, i, k, t) != elementary(order, n, i, (i + k) % n, t):
                raise InvariantViolation(f"{order.label}: x_{i + 1},{(i + k) % n + 1}(t) is not the iterated commutator")
            checked["iterated"] = checked.get("iterated", 0) + 1
    log.debug("%s E_%d commutator checks: %s", order.label, n, checked)
    return checked
