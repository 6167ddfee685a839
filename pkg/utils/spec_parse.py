# utils/spec_parse.py
"""Text specs for algebras, orders and groups.

Orders:  Z | I1 | I2 | I3 | I7 | I11 | L | O2 | O3 | O5
         Iq:<d>      ring of integers of Q(sqrt(-d)), d square-free
         Zsqrt:<d>   Z[sqrt(-d)]
         quat:<u>,<v>   Z{1, i, j, k} in (u, v / Q), or the given basis
         Qi:<d>      Q(sqrt(-d)) with an explicit basis
Groups:  builtin names (C6, S3, SL(2,3), G16_6, ...)
         perm:[[1,0,2],[0,2,1]]   permutation generators (images of 0..n-1)
         table:[[0,1],[1,0]]      explicit multiplication table
Bases are JSON lists of coordinate lists; coordinates are ints or "p/q".
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import List, Optional, Union

from pydantic import TypeAdapter, ValidationError

from domain.algebra import AlgebraDescriptor, descriptor_from_name, imaginary_quadratic, quaternion_algebra, rationals
from domain.errors import DomainError, SpecParseError
from domain.models import FiniteGroupTable
from domain.orders import OrderStruct, Vec
from domain.words import Matrix2
from services import catalog_service, group_service, lattice_service

__all__ = [
    "parse_descriptor",
    "parse_basis",
    "parse_order_spec",
    "parse_group_spec",
    "parse_element",
    "parse_matrix",
]

_QUADRATIC = re.compile(r"^(?P<kind>Iq|Zsqrt|Qi):(?P<d>[^,]*)$")
_QUATERNION = re.compile(r"^quat:(?P<u>[^,]*),(?P<v>[^,]*)$")
_INT = re.compile(r"^-?\d+$")

_Coordinate = Union[int, str]
_BASIS = TypeAdapter(List[List[_Coordinate]])
_ROWS = TypeAdapter(List[List[int]])


# ─────────────────────────────────────────────────────────────
# Helpers
# ─────────────────────────────────────────────────────────────

def _int_at(text: str, token: str, offset: int, positive: bool = False) -> int:
    if not _INT.match(token.strip()):
        raise SpecParseError(f"expected an integer, got {token!r}", text, offset)
    value = int(token)
    if positive and value <= 0:
        raise SpecParseError(f"d must be positive, got {value}", text, offset)
    return value


def _json_at(text: str, payload: str, offset: int, adapter: TypeAdapter):
    try:
        raw = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"malformed JSON: {exc.msg}", text, offset + exc.pos)
    try:
        return adapter.validate_python(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise SpecParseError(f"bad value at [{where}]: {first['msg']}", text, offset)


def _fraction(text: str, value: _Coordinate) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"bad rational coordinate {value!r}", text)


# ─────────────────────────────────────────────────────────────
# Algebras and orders
# ─────────────────────────────────────────────────────────────

def parse_descriptor(text: str) -> AlgebraDescriptor:
    """Q, Qi:<d>, quat:<u>,<v>, or one of the named algebras H2, H3, H5."""
    spec = text.strip()
    if spec == "Q":
        return rationals()
    if spec in ("H2", "H3", "H5"):
        return descriptor_from_name(spec)
    m = _QUADRATIC.match(spec)
    if m and m.group("kind") == "Qi":
        return imaginary_quadratic(_int_at(text, m.group("d"), m.start("d"), positive=True))
    m = _QUATERNION.match(spec)
    if m:
        u = _int_at(text, m.group("u"), m.start("u"))
        v = _int_at(text, m.group("v"), m.start("v"))
        return quaternion_algebra(u, v)
    raise SpecParseError("unknown algebra", text, 0)


def parse_basis(text: str, dimension: int) -> List[List[Fraction]]:
    rows = _json_at(text, text, 0, _BASIS)
    basis = [[_fraction(text, c) for c in row] for row in rows]
    if len(basis) != dimension or any(len(row) != dimension for row in basis):
        raise SpecParseError(f"basis must be {dimension} vectors of {dimension} coordinates", text, 0)
    return basis


def parse_order_spec(text: str, basis: Optional[str] = None) -> OrderStruct:
    """An order from its spec; `basis` overrides the default basis of quat:/Qi: specs."""
    spec = text.strip()
    if not spec:
        raise SpecParseError("empty order spec", text, 0)
    if spec in lattice_service.BUILTIN_NAMES:
        if basis is not None:
            raise SpecParseError(f"{spec} is a builtin; it takes no basis", text, 0)
        return lattice_service.builtin_order(spec)

    m = _QUADRATIC.match(spec)
    if m and m.group("kind") in ("Iq", "Zsqrt"):
        d = _int_at(text, m.group("d"), m.start("d"), positive=True)
        if m.group("kind") == "Iq":
            try:
                return lattice_service.builtin_order(f"Iq:{d}")
            except DomainError as exc:
                raise SpecParseError(str(exc), text, m.start("d"))
        return lattice_service.builtin_order(f"Zsqrt:{d}")

    if spec.startswith(("quat:", "Qi:")):
        descriptor = parse_descriptor(spec)
        if basis is None:
            vectors = [descriptor.basis_element(i) for i in range(descriptor.dimension)]
        else:
            vectors = [descriptor.element(*row) for row in parse_basis(basis, descriptor.dimension)]
        return lattice_service.order_from_basis(descriptor, vectors, spec)

    raise SpecParseError("unknown order (expected a builtin, Iq:<d>, Zsqrt:<d>, quat:<u>,<v> or Qi:<d>)", text, 0)


# ─────────────────────────────────────────────────────────────
# Groups
# ─────────────────────────────────────────────────────────────

def parse_group_spec(text: str) -> FiniteGroupTable:
    spec = text.strip()
    offset = len(text) - len(text.lstrip())
    if spec.startswith("perm:"):
        images = _json_at(text, spec[5:], offset + 5, _ROWS)
        return group_service.from_permutations(images, label=spec)
    if spec.startswith("table:"):
        rows = _json_at(text, spec[6:], offset + 6, _ROWS)
        return group_service.from_table(rows, label="table")
    if not spec:
        raise SpecParseError("empty group spec", text, 0)
    try:
        return catalog_service.build_group(spec)
    except DomainError as exc:
        if str(exc).startswith("unknown group"):
            raise SpecParseError(str(exc), text, offset)
        raise


# ─────────────────────────────────────────────────────────────
# Elements and matrices over an order
# ─────────────────────────────────────────────────────────────

_Entry = Union[int, List[int]]
_ENTRY = TypeAdapter(_Entry)
_MATRIX = TypeAdapter(List[List[_Entry]])


def _entry(order: OrderStruct, text: str, value: _Entry) -> Vec:
    # an integer n is n*1; a list holds the coordinates in the order basis
    if isinstance(value, int):
        return order.scale(value, order.one)
    if len(value) != order.rank:
        raise SpecParseError(f"{order.label} elements need {order.rank} coordinates, got {len(value)}", text, 0)
    return tuple(value)


def parse_element(order: OrderStruct, text: str) -> Vec:
    return _entry(order, text, _json_at(text, text, 0, _ENTRY))


def parse_matrix(order: OrderStruct, text: str) -> Matrix2:
    rows = _json_at(text, text, 0, _MATRIX)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise SpecParseError("matrix must be [[a, b], [c, d]]", text, 0)
    (a, b), (c, d) = rows
    return Matrix2(*(_entry(order, text, x) for x in (a, b, c, d)))
