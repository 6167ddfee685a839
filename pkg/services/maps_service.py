# services/maps_service.py
"""The homomorphisms out of GE2(O) and E2(O) used for the abelianizations.

phi: GE2(O) -> U(O)^ab,  E(x) -> 1,        [a, b] -> ab
psi: E2(O)  -> (O/N, +), E(x) -> x - 1 + N
tau: E2(O)  -> (O/M, +), E(x) -> x - 3 + M
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from domain.errors import DomainError
from domain.orders import OrderStruct, Vec
from domain.words import Word
from services import abelianization_service, group_service, units_service
from utils.intmat import reduce_mod_columns

__all__ = ["MapValues", "phi", "psi", "tau", "abelianization_maps"]


@dataclass(frozen=True)
class MapValues:
    phi: Vec
    psi: Vec
    tau: Vec


def _coset_representative(order: OrderStruct, unit: Vec) -> Vec:
    units = units_service.unit_group(order)
    G = units.group
    s = units.index_of(unit)
    derived = group_service.derived_subgroup(G)
    return min(units.elements[G.mul(s, c)] for c in derived)


def phi(order: OrderStruct, word: Word) -> Vec:
    """Class of the word in U(O)^ab, as the smallest unit of its coset of U(O)'."""
    value = order.one
    for letter in word:
        if letter.is_e:
            continue
        mu, nu = letter.params
        prod = order.mul(mu, nu)
        if not order.is_unit(prod):
            raise DomainError(f"[{order.format(mu)}, {order.format(nu)}] needs unit entries")
        value = order.mul(value, order.unit_inverse(prod) if letter.inverse else prod)
    return _coset_representative(order, value)


def _additive(order: OrderStruct, word: Word, shift: int, columns: Tuple[Vec, ...], name: str) -> Vec:
    total = order.zero
    offset = order.scale(shift, order.one)
    for letter in word:
        if not letter.is_e:
            raise DomainError(f"{name} is defined on E2(O) only; the word contains a diagonal letter")
        value = order.sub(letter.params[0], offset)
        total = order.sub(total, value) if letter.inverse else order.add(total, value)
    return reduce_mod_columns(total, columns)


def psi(order: OrderStruct, word: Word) -> Vec:
    return _additive(order, word, 1, abelianization_service.n_columns(order), "psi")


def tau(order: OrderStruct, word: Word) -> Vec:
    return _additive(order, word, 3, abelianization_service.m_columns(order), "tau")


def abelianization_maps(order: OrderStruct, word: Word) -> MapValues:
    """phi, psi and tau of one E2-word."""
    return MapValues(phi=phi(order, word), psi=psi(order, word), tau=tau(order, word))
