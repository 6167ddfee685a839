# services/abelianization_service.py
from __future__ import annotations

import logging
from collections import deque
from functools import lru_cache
from typing import Dict, List, Set, Tuple

from domain.errors import InvariantViolation
from domain.models import FiniteAbelianInvariants, Ge2AbReport, MSubgroupReport, RankReport
from domain.orders import Lattice, OrderStruct, Vec
from services import group_service, lattice_service, units_service
from utils.intmat import hnf_columns, in_column_span

log = logging.getLogger(__name__)

__all__ = [
    "FINITE_E2_ORDERS",
    "m_subgroup",
    "m_columns",
    "abelian_shortcut_span",
    "n_ideal",
    "n_columns",
    "e2_abelianization",
    "ge2_abelianization",
    "ge2_mod_e2",
    "rank_and_finiteness",
    "diagonal_e2_check",
]

# orders whose E2 has finite abelianization, up to isomorphism
FINITE_E2_ORDERS = ("Z", "I1", "I3", "L", "O2", "O3")


# ─────────────────────────────────────────────────────────────
# Helpers
# ─────────────────────────────────────────────────────────────

def _commutator_value(order: OrderStruct, a: Vec, b: Vec) -> Vec:
    # 3 (a + 1)(b + 1)
    return order.scale(3, order.mul(order.add(a, order.one), order.add(b, order.one)))


def _loop_generators(order: OrderStruct) -> Tuple[List[Vec], Dict[str, int]]:
    """Generators of the sums of 3(a+1)(b+1) over sequences whose commutators multiply to 1.

    States are elements of U' reached from 1 by right multiplication with
    c(a, b) = a^-1 b^-1 a b; an edge s -> s c(a, b) carries 3(a+1)(b+1). With a
    BFS potential p, the closed-walk sums are spanned by p(s) + v - p(s c).
    """
    units = units_service.unit_group(order)
    G = units.group
    t, inv = G.table, G.inverses
    labels: Dict[Tuple[int, Vec], None] = {}
    for a in range(G.n):
        for b in range(G.n):
            c = t[t[inv[a]][inv[b]]][t[a][b]]
            labels[(c, _commutator_value(order, units.elements[a], units.elements[b]))] = None
    edges = list(labels)

    potential: Dict[int, Vec] = {G.identity: order.zero}
    queue = deque([G.identity])
    generators: Set[Vec] = set()
    edge_count = 0
    while queue:
        s = queue.popleft()
        for c, v in edges:
            nxt = t[s][c]
            edge_count += 1
            reached = order.add(potential[s], v)
            if nxt not in potential:
                potential[nxt] = reached
                queue.append(nxt)
            else:
                g = order.sub(reached, potential[nxt])
                if any(g):
                    generators.add(g)
    stats = {"states": len(potential), "edges": edge_count, "labels": len(edges)}
    log.debug("%s loop graph: %s", order.label, stats)
    return sorted(generators), stats


# ─────────────────────────────────────────────────────────────
# M and N
# ─────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def m_subgroup(order: OrderStruct) -> MSubgroupReport:
    """The additive subgroup M with E2(O)^ab = O/M."""
    units = units_service.unit_group(order).elements
    basis = [order.basis_vector(i) for i in range(order.rank)]

    type1 = sorted({
        g for a in units for e in basis
        if any(g := order.sub(order.mul(order.mul(a, e), a), e))
    })
    type2, stats = _loop_generators(order)
    type3 = sorted({order.scale(2 * order.trace(x) + 6, order.one) for x in units_service.short_vector_coords(order, 2)})
    type4 = sorted({order.scale(3 * order.trace(x), order.one) for x in units_service.short_vector_coords(order, 3)})

    columns = hnf_columns(type1 + type2 + type3 + type4, order.rank)
    for u in units:
        if not in_column_span(order.scale(12, u), columns):
            raise InvariantViolation(f"{order.label}: 12*({order.format(u)}) is not in M")

    return MSubgroupReport(
        order_name=order.label,
        generators_type1=tuple(type1),
        generators_type2=tuple(type2),
        generators_type3=tuple(t for t in type3 if any(t)),
        generators_type4=tuple(t for t in type4 if any(t)),
        columns=columns,
        lattice=lattice_service.order_sublattice(order, columns),
        loop_graph_stats=stats,
    )


def m_columns(order: OrderStruct) -> Tuple[Vec, ...]:
    return m_subgroup(order).columns


def abelian_shortcut_span(order: OrderStruct) -> Tuple[Vec, ...]:
    """Span of every 3(a+1)(b+1); equals the type-(2) part when U(O) is abelian."""
    units = units_service.unit_group(order).elements
    values = [_commutator_value(order, a, b) for a in units for b in units]
    return hnf_columns(values, order.rank)


@lru_cache(maxsize=None)
def n_columns(order: OrderStruct) -> Tuple[Vec, ...]:
    units = units_service.unit_group(order).elements
    return lattice_service.ideal_columns(order, [order.sub(u, order.one) for u in units])


def n_ideal(order: OrderStruct) -> Lattice:
    """Two-sided ideal generated by u - 1 over all units u."""
    return lattice_service.order_sublattice(order, n_columns(order))


def e2_abelianization(order: OrderStruct) -> FiniteAbelianInvariants:
    return lattice_service.quotient_by_columns(order.rank, m_columns(order))


def ge2_mod_e2(order: OrderStruct) -> FiniteAbelianInvariants:
    """GE2(O)/E2(O) is U(O)^ab."""
    return units_service.unit_abelianization(units_service.unit_group(order))


def ge2_abelianization(order: OrderStruct) -> Ge2AbReport:
    o_mod_n = lattice_service.quotient_by_columns(order.rank, n_columns(order))
    if not o_mod_n.is_finite or (o_mod_n.exponent or 1) > 2:
        raise InvariantViolation(f"{order.label}: O/N = {o_mod_n.describe()} is not an elementary abelian 2-group")
    u_ab = ge2_mod_e2(order)
    collapsed = o_mod_n.is_trivial

    certificate = ""
    if collapsed:
        units = units_service.unit_group(order)
        if 3 in units.group.orders:
            certificate = "N = O: a unit of order 3 exists"
        else:
            certificate = "N = O"
    return Ge2AbReport(
        order_name=order.label,
        o_mod_n=o_mod_n,
        u_ab=u_ab,
        total_order=(o_mod_n.order or 1) * (u_ab.order or 1),
        collapsed=collapsed,
        certificate=certificate,
    )


# ─────────────────────────────────────────────────────────────
# Rank formula and the finiteness conditions
# ─────────────────────────────────────────────────────────────

def _ring_generated(order: OrderStruct, elements: List[Vec]) -> Tuple[Vec, ...]:
    columns = hnf_columns(elements, order.rank)
    while True:
        products = list(columns) + [order.mul(a, b) for a in columns for b in columns]
        nxt = hnf_columns(products, order.rank)
        if nxt == columns:
            return columns
        columns = nxt


def _is_whole_order(order: OrderStruct, columns: Tuple[Vec, ...]) -> bool:
    return lattice_service.quotient_by_columns(order.rank, columns).is_trivial


def rank_and_finiteness(order: OrderStruct) -> RankReport:
    rank = order.rank
    inv = units_service.inv_of_order(order)
    e2 = e2_abelianization(order)
    if e2.free_rank != rank - inv:
        raise InvariantViolation(
            f"{order.label}: rank of E2(O)^ab is {e2.free_rank}, expected rank O - inv_O = {rank} - {inv}"
        )

    matched = None
    for name in FINITE_E2_ORDERS:
        candidate = lattice_service.builtin_order(name)
        if candidate.rank == rank and units_service.order_isomorphic(order, candidate):
            matched = name
            break

    units = list(units_service.unit_group(order).elements)
    conditions = {
        "a": e2.is_finite,
        "b": matched is not None,
        "c": inv == rank,
        "d": _is_whole_order(order, _ring_generated(order, units)),
        "e": _is_whole_order(order, hnf_columns(units, rank)),
    }
    if len(set(conditions.values())) != 1:
        raise InvariantViolation(f"{order.label}: finiteness conditions disagree: {conditions}")
    return RankReport(
        order_name=order.label,
        rank=rank,
        inv=inv,
        e2_ab=e2,
        finite=e2.is_finite,
        conditions=conditions,
        matched_builtin=matched,
    )


# ─────────────────────────────────────────────────────────────
# Diagonal matrices in E2(O)
# ─────────────────────────────────────────────────────────────

def diagonal_e2_check(order: OrderStruct) -> Dict[str, int]:
    """Diagonals of E2(O) are exactly [a, b] with b a in U(O)'.

    The group generated by all D(mu) and [c, 1] with c in U' must have
    |U| * |U'| elements and consist of pairs with b a in U'.
    """
    units = units_service.unit_group(order)
    G = units.group
    t, inv = G.table, G.inverses
    derived = group_service.derived_subgroup(G)
    gens = [(m, inv[m]) for m in range(G.n)] + [(c, G.identity) for c in derived]

    seen = {(G.identity, G.identity)}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = (t[x[0]][g[0]], t[x[1]][g[1]])
            if y not in seen:
                seen.add(y)
                queue.append(y)

    expected = G.n * len(derived)
    if len(seen) != expected:
        raise InvariantViolation(f"{order.label}: diagonal part of E2 has {len(seen)} elements, expected {expected}")
    for a, b in seen:
        if t[b][a] not in derived:
            raise InvariantViolation(f"{order.label}: diagonal [{G.names[a]}, {G.names[b]}] has b*a outside U'")
    return {"units": G.n, "derived": len(derived), "diagonals": len(seen)}
