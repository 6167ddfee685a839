# testing/test_algebra.py
from fractions import Fraction

import pytest

from domain.algebra import (
    descriptor_from_name,
    format_rational,
    imaginary_quadratic,
    invert,
    quaternion_algebra,
    rationals,
    squarefree_decomposition,
    trace_form,
)
from domain.errors import DivisionByZero, DomainError


def test_quaternion_units_multiply_like_hamilton():
    H = quaternion_algebra(-1, -1)
    one, i, j, k = (H.basis_element(t) for t in range(4))
    assert i * j == k
    assert j * i == -k
    assert i * i == -one
    assert (i * j) * k == i * (j * k)


def test_norm_trace_and_inverse():
    H = quaternion_algebra(-2, -5)
    x = H.element(1, Fraction(1, 2), 2, -1)
    assert x.norm() == 1 + Fraction(1, 4) * 2 + 4 * 5 + 10
    assert x.trace() == 2
    assert x * x.inverse() == H.one()
    assert x.inverse() * x == H.one()


def test_norm_is_multiplicative_in_quadratic_field():
    K = imaginary_quadratic(7)
    x, y = K.element(3, 1), K.element(-2, 5)
    assert (x * y).norm() == x.norm() * y.norm()
    assert trace_form(x, x) == x.norm()


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        invert(rationals().zero())
    with pytest.raises(DivisionByZero):
        rationals().one() / 0


def test_indefinite_or_malformed_descriptors_are_refused():
    with pytest.raises(DomainError):
        quaternion_algebra(1, -1)
    with pytest.raises(DomainError):
        imaginary_quadratic(4)


def test_named_algebras_and_specs():
    assert descriptor_from_name("H3").params == (-1, -3)
    assert descriptor_from_name("Q").spec == "Q"
    assert imaginary_quadratic(2).spec == "Qi:2"
    assert quaternion_algebra(-2, -5).spec == "quat:-2,-5"
    with pytest.raises(DomainError):
        descriptor_from_name("H7")


def test_helpers():
    assert squarefree_decomposition(12) == (2, 3)
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(6, 3)) == "2"
