# testing/test_lattice_service.py
from fractions import Fraction

import pytest

from domain.algebra import quaternion_algebra
from domain.errors import DomainError
from services import lattice_service


def test_builtin_ranks(builtin):
    ranks = {name: builtin(name).rank for name in lattice_service.BUILTIN_NAMES}
    assert ranks == {"Z": 1, "I1": 2, "I2": 2, "I3": 2, "I7": 2, "I11": 2, "L": 4, "O2": 4, "O3": 4, "O5": 4}


def test_lipschitz_has_index_two_in_hurwitz(builtin):
    L, O2 = builtin("L"), builtin("O2")
    assert lattice_service.lattice_index(O2.lattice, L.lattice) == 2
    half = O2.descriptor.element(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert lattice_service.contains(O2.lattice, half)
    assert not lattice_service.contains(L.lattice, half)


def test_canonical_basis_ignores_the_spanning_set():
    H = quaternion_algebra(-1, -1)
    one, i, j, k = (H.basis_element(t) for t in range(4))
    a = lattice_service.canonical_basis(H, [one, i, j, k])
    b = lattice_service.canonical_basis(H, [one + i, i, j + k, k, one + i + j])
    assert a == b


def test_non_order_is_rejected():
    H = quaternion_algebra(-1, -1)
    one, i, j, k = (H.basis_element(t) for t in range(4))
    with pytest.raises(DomainError):
        lattice_service.order_from_basis(H, [one, i * Fraction(1, 2), j, k])


def test_two_sided_ideal_generated_by_two(builtin):
    O2 = builtin("O2")
    columns = lattice_service.ideal_columns(O2, [O2.scale(2, O2.one)])
    assert lattice_service.quotient_by_columns(O2.rank, columns).torsion == (2, 2, 2, 2)


def test_quadratic_suborders(builtin):
    z4 = builtin("Zsqrt:4")
    assert z4.descriptor.params == (1,)
    assert z4.norm(z4.basis_vector(1)) == 4
    assert builtin("Zsqrt:1") == builtin("I1")
    with pytest.raises(DomainError):
        builtin("Iq:8")


def test_order_key_is_json_shaped(builtin):
    key = lattice_service.order_key(builtin("I3"))
    assert key["descriptor"] == "Qi:3"
    assert key["denominator"] == 2
