# services/decision_service.py
"""Decisions about fixed-point properties.

Group side: U(ZG) has HFA (equivalently FAb, (T), HFR) iff G is cut and has
no quotient in the forbidden catalog. Order side: FA for E2(O) and the Borel
subgroup B2(O), and the eigenvalue criterion for the GRK amalgams.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy import divisors, factorint, legendre_symbol, totient

from domain.algebra import QUADRATIC, QUATERNION, RATIONALS, AlgebraDescriptor
from domain.errors import DomainError, InvariantViolation
from domain.models import (
    ComponentFlags,
    ExceptionalClassification,
    FaProfile,
    FiniteGroupTable,
    GrkResult,
    HfaDecision,
    OddOrderReport,
)
from domain.orders import OrderStruct
from services import catalog_service, group_service, lattice_service, units_service
from utils.intmat import charpoly_factors

log = logging.getLogger(__name__)

__all__ = [
    "FA_E2_ORDERS",
    "decide_hfa",
    "decide_odd_order",
    "hilbert_symbol",
    "ramified_primes",
    "exceptional_type",
    "component_predicates",
    "decide_fa_e2",
    "decide_hfa_e2",
    "decide_fa_borel",
    "grk_criterion",
    "fa_profile",
    "cut_division_span",
    "dirichlet_unit_rank",
]

FA_E2_ORDERS = ("I3", "O2", "O3")
GRK_MODES = ("D2", "DE2")

TYPE_I = "TypeI"
TYPE_II = "TypeII"

# division algebras D with M2(D) an exceptional component
_EKVG_QUADRATIC = (1, 2, 3)
_EKVG_QUATERNION = {(2,): "H2", (3,): "H3", (5,): "H5"}

_CUT_DIVISION_SPANS = {
    "1": "Q", "C2": "Q", "C3": "Q(sqrt(-3))", "C4": "Q(sqrt(-1))", "C6": "Q(sqrt(-3))",
    "C3:C4": "H3", "Q8": "H2", "SL(2,3)": "H2",
}


# ─────────────────────────────────────────────────────────────
# U(ZG): HFA and friends
# ─────────────────────────────────────────────────────────────

def decide_hfa(G: FiniteGroupTable) -> HfaDecision:
    """HFA for U(ZG): G is cut and maps onto none of the forbidden groups."""
    if not group_service.is_cut(G):
        return HfaDecision(G.label, hfa=False, cut=False, forbidden_witness=None, certificate="not cut")

    normals = group_service.normal_subgroups(G)
    for name in catalog_service.FORBIDDEN:
        if G.n % catalog_service.ORDERS[name]:
            continue
        H = catalog_service.build_group(name)
        onto, kernel = group_service.maps_onto(G, H, recognizer=catalog_service.recognizer(name), normals=normals)
        if onto:
            return HfaDecision(
                G.label,
                hfa=False,
                cut=True,
                forbidden_witness=name,
                certificate=f"quotient by a normal subgroup of order {len(kernel)} is {name}",
            )
    return HfaDecision(G.label, hfa=True, cut=True, forbidden_witness=None, certificate="cut, no forbidden quotient")


def decide_odd_order(G: FiniteGroupTable, assert_no_type_ii: bool = False) -> OddOrderReport:
    """Without type-(II) exceptional components HFA, FAb and cut coincide."""
    if G.n % 2 == 0 and not assert_no_type_ii:
        log.warning("%s has even order %d; refusing the odd-order shortcut", G.label, G.n)
        raise DomainError(
            f"{G.label} has even order {G.n}; pass assert_no_type_ii when QG has no type (II) exceptional component"
        )
    return OddOrderReport(G.label, G.n, asserted_no_type_ii=assert_no_type_ii, cut=group_service.is_cut(G))


# ─────────────────────────────────────────────────────────────
# Exceptional components
# ─────────────────────────────────────────────────────────────

def _split_power(a: int, p: int) -> Tuple[int, int]:
    e = 0
    while a % p == 0:
        a //= p
        e += 1
    return e, a


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """(a, b)_p for nonzero integers a, b and a prime p."""
    alpha, u = _split_power(a, p)
    beta, v = _split_power(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    return sign * legendre_symbol(u % p, p) ** beta * legendre_symbol(v % p, p) ** alpha


def ramified_primes(descriptor: AlgebraDescriptor) -> Tuple[int, ...]:
    """Finite primes where (u, v / Q) is a division algebra."""
    if descriptor.kind != QUATERNION:
        return ()
    u, v = descriptor.params
    candidates = sorted(set(factorint(2 * u * v)))
    ramified = tuple(p for p in candidates if hilbert_symbol(u, v, p) == -1)
    # definite, so infinity ramifies too; the total is even
    if len(ramified) % 2 == 0:
        raise InvariantViolation(f"{descriptor}: {len(ramified)} finite ramified primes for a definite algebra")
    return ramified


def _ekvg_name(descriptor: AlgebraDescriptor) -> Optional[str]:
    if descriptor.kind == RATIONALS:
        return "Q"
    if descriptor.kind == QUADRATIC:
        d = descriptor.params[0]
        return f"Q(sqrt(-{d}))" if d in _EKVG_QUADRATIC else None
    return _EKVG_QUATERNION.get(ramified_primes(descriptor))


def exceptional_type(descriptor: AlgebraDescriptor, n: int) -> ExceptionalClassification:
    """Whether M_n(D) is an exceptional component, and of which type."""
    if n < 1:
        raise DomainError(f"matrix size must be positive, got {n}")
    ramified = ramified_primes(descriptor)
    catalog_name = _ekvg_name(descriptor)

    if n == 1:
        if not descriptor.is_commutative and not descriptor.is_definite:
            kind, reason = TYPE_I, "non-commutative division algebra, not totally definite"
        elif descriptor.is_commutative:
            kind, reason = None, "commutative"
        else:
            kind, reason = None, "totally definite quaternion algebra"
    elif n == 2:
        # every supported D has an order with finite unit group
        kind, reason = TYPE_II, f"M2 over {descriptor}, whose orders have finite unit groups"
    else:
        kind, reason = None, f"matrix size {n} > 2"

    in_catalog = kind == TYPE_II and catalog_name is not None
    if in_catalog:
        reason += f"; catalog entry M2({catalog_name})"
    return ExceptionalClassification(str(descriptor), n, kind, in_catalog, reason, ramified)


def component_predicates(G: FiniteGroupTable) -> ComponentFlags:
    """M2(Q) and M2(H5) components of QG, detected through quotients."""
    normals = group_service.normal_subgroups(G)
    witnesses: Dict[str, str] = {}

    has_m2q = False
    for name in ("D8", "S3"):
        onto, _ = group_service.maps_onto(G, catalog_service.build_group(name), normals=normals)
        if onto:
            has_m2q = True
            witnesses["M2(Q)"] = name
            break

    has_m2h5 = False
    if G.n % catalog_service.ORDERS["G240_90"] == 0:
        has_m2h5, _ = group_service.maps_onto(
            G,
            catalog_service.build_group("G240_90"),
            recognizer=catalog_service.recognizer("G240_90"),
            normals=normals,
        )
    if has_m2h5:
        witnesses["M2(H5)"] = "G240_90"

    solvable = group_service.is_solvable(G)
    if solvable and has_m2h5:
        raise InvariantViolation(f"{G.label} is solvable but maps onto G240_90")
    return ComponentFlags(G.label, has_m2q, has_m2h5, solvable, witnesses)


# ─────────────────────────────────────────────────────────────
# Orders: E2, B2 and the GRK amalgams
# ─────────────────────────────────────────────────────────────

def _isomorphic_builtin(order: OrderStruct, names: Tuple[str, ...]) -> Optional[str]:
    for name in names:
        candidate = lattice_service.builtin_order(name)
        if candidate.rank == order.rank and units_service.order_isomorphic(order, candidate):
            return name
    return None


@lru_cache(maxsize=None)
def decide_fa_e2(order: OrderStruct) -> bool:
    """E2(O) has FA exactly for I3, O2 and O3."""
    units_service.unit_group(order)
    matched = _isomorphic_builtin(order, FA_E2_ORDERS)
    log.debug("%s: FA(E2) reference %s", order.label, matched)
    return matched is not None


def decide_hfa_e2(order: OrderStruct) -> bool:
    # E2(O) never has HFA for a definite order, O3 included
    units_service.unit_group(order)
    return False


def decide_fa_borel(order: OrderStruct) -> bool:
    """B2(O) has FA iff U(O) is not C2."""
    return units_service.identify_group(units_service.unit_group(order)) != "C2"


def _action_matrix(order: OrderStruct, mu, nu) -> List[List[int]]:
    # column j holds nu^-1 e_j mu
    nu_inv = order.unit_inverse(nu)
    columns = [order.mul(order.mul(nu_inv, order.basis_vector(j)), mu) for j in range(order.rank)]
    return [[columns[j][i] for j in range(order.rank)] for i in range(order.rank)]


def grk_criterion(order: OrderStruct, mode: str = "D2") -> GrkResult:
    """First diagonal [mu, nu] whose action x -> nu^-1 x mu has no rational eigenvalue.

    The conjugation action x -> u1 x u2^-1 of [u1, u2] is the action of
    [u2^-1, u1^-1] here, and (u1 u2)^-1 lies in U(O)' exactly when u1 u2 does,
    so both conventions search the same set of maps in either mode.

    D2 mode ranges over all unit pairs, DE2 mode over the pairs lying in
    E2(O), i.e. with mu nu in U(O)'.
    """
    if mode not in GRK_MODES:
        raise DomainError(f"mode must be one of {GRK_MODES}, got {mode!r}")
    units = units_service.unit_group(order)
    G = units.group
    derived = group_service.derived_subgroup(G)

    checked = 0
    for a in range(G.n):
        for b in range(G.n):
            if mode == "DE2" and G.mul(a, b) not in derived:
                continue
            mu, nu = units.elements[a], units.elements[b]
            checked += 1
            factors = charpoly_factors(_action_matrix(order, mu, nu))
            if all(f.degree() > 1 for f, _ in factors):
                described = tuple(f"({f.as_expr()})^{e}" for f, e in factors)
                log.debug("%s %s: witness [%s, %s] after %d candidates", order.label, mode, G.names[a], G.names[b], checked)
                return GrkResult(order.label, mode, (order.format(mu), order.format(nu)), described, checked)
    return GrkResult(order.label, mode, None, (), checked)


# ─────────────────────────────────────────────────────────────
# Profiles and oracles
# ─────────────────────────────────────────────────────────────

def fa_profile(G: FiniteGroupTable) -> FaProfile:
    """What is known about FA for U(ZG)."""
    decision = decide_hfa(G)
    reasons: List[str] = []
    notes: List[str] = []
    if not decision.cut:
        reasons.append("not cut: infinitely many central units")
    if group_service.is_solvable(G):
        flags = component_predicates(G)
        if flags.has_M2Q:
            reasons.append(f"solvable and maps onto {flags.witnesses['M2(Q)']}")
    if reasons:
        fa = "false"
    elif decision.hfa:
        fa = "true"
        notes.append("HFA implies FA")
    else:
        fa = "open"
        notes.append(f"HFA fails ({decision.certificate}); FA is not decided")
    return FaProfile(G.label, fa, decision.hfa, tuple(reasons), notes=notes)


def cut_division_span(G: FiniteGroupTable) -> Optional[str]:
    """Q-span of G inside a division algebra, for the cut groups that embed in one."""
    for name, span in _CUT_DIVISION_SPANS.items():
        H = catalog_service.build_group(name)
        if H.n == G.n and group_service.is_isomorphic(G, H):
            return span
    return None


def dirichlet_unit_rank(n: int) -> int:
    """Rank of the central units of ZC_n: sum over d | n of phi(d)/2 - 1 where phi(d) > 2."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return sum(int(totient(d)) // 2 - 1 for d in divisors(n) if totient(d) > 2)
