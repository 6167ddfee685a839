# testing/test_units_service.py
import pytest

from domain.errors import DomainError
from services import lattice_service, units_service
from utils.spec_parse import parse_order_spec


@pytest.mark.parametrize(
    "name, structure, size",
    [
        ("Z", "C2", 2),
        ("I1", "C4", 4),
        ("I2", "C2", 2),
        ("I3", "C6", 6),
        ("L", "Q8", 8),
        ("O2", "SL(2,3)", 24),
        ("O3", "C3:C4", 12),
        ("O5", "C6", 6),
    ],
)
def test_unit_groups_of_builtins(builtin, name, structure, size):
    units = units_service.unit_group(builtin(name))
    assert units.size == size
    assert units_service.identify_group(units) == structure


def test_short_vectors_of_hurwitz_order(builtin):
    O2 = builtin("O2")
    assert len(units_service.short_vector_coords(O2, 2)) == 24
    assert len(units_service.short_vector_coords(O2, 3)) == 96
    assert len(units_service.short_vector_coords(builtin("I1"), 2)) == 4
    assert units_service.short_vector_coords(builtin("Z"), 2) == ()


@pytest.mark.parametrize(
    "name, inv",
    [("Z", 1), ("I1", 2), ("I2", 1), ("I3", 2), ("I7", 1), ("L", 4), ("O2", 4), ("O3", 4), ("O5", 2)],
)
def test_inv_of_builtins(builtin, name, inv):
    assert units_service.inv_of_order(builtin(name)) == inv


def test_unit_details(builtin):
    units = units_service.unit_group(builtin("O2"))
    assert units_service.center_size(units) == 2
    assert units_service.element_orders(units) == {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
    assert units_service.unit_abelianization(units).torsion == (3,)
    assert len(units_service.derived_units(units)) == 8


def test_order_isomorphism(builtin):
    assert units_service.order_isomorphic(parse_order_spec("Zsqrt:1"), builtin("I1"))
    assert not units_service.order_isomorphic(builtin("L"), builtin("O2"))
    assert not units_service.order_isomorphic(builtin("O3"), builtin("O2"))
    assert not units_service.order_isomorphic(builtin("I1"), builtin("I3"))


def test_rational_span_of_units(builtin):
    O5 = builtin("O5")
    units = units_service.unit_group(O5).elements
    assert units_service.rational_span(O5, units) == 2
    O2 = builtin("O2")
    assert units_service.rational_span(O2, units_service.unit_group(O2).elements) == 4


def test_ellipsoid_points_are_centered(builtin):
    I1 = builtin("I1")
    from fractions import Fraction

    center = (Fraction(1, 2), Fraction(1, 2))
    points = set(units_service.ellipsoid_points(I1, Fraction(1), center=center, strict=True))
    assert points == {(0, 0), (1, 0), (0, 1), (1, 1)}
