# testing/test_euclid_service.py
from random import Random

import pytest

from domain.errors import DivisionByZero, DomainError
from services import euclid_service, words_service
from domain.words import Matrix2
from utils.spec_parse import parse_order_spec


def test_left_division_in_gaussian_integers(builtin):
    I1 = builtin("I1")
    a, b = (7, 3), (2, 1)
    q, r = euclid_service.euclid_divide(I1, a, b)
    assert I1.add(I1.mul(q, b), r) == a
    assert I1.norm(r) < I1.norm(b)


@pytest.mark.parametrize("name", ["I3", "I11", "O2", "O3", "O5"])
@pytest.mark.parametrize("side", ["left", "right"])
def test_division_remainder_is_smaller(builtin, name, side):
    order = builtin(name)
    rng = Random(11)
    for _ in range(20):
        a = words_service.random_element(order, rng, 9)
        b = words_service.random_element(order, rng, 4)
        if not any(b):
            continue
        q, r = euclid_service.euclid_divide(order, a, b, side=side)
        product = order.mul(q, b) if side == "left" else order.mul(b, q)
        assert order.add(product, r) == a
        assert order.norm(r) < order.norm(b)


def test_division_errors(builtin):
    I1 = builtin("I1")
    with pytest.raises(DivisionByZero):
        euclid_service.euclid_divide(I1, (1, 1), (0, 0))
    with pytest.raises(DomainError):
        euclid_service.euclid_divide(I1, (1, 1), (1, 0), side="middle")
    with pytest.raises(DomainError):
        euclid_service.euclid_divide(builtin("L"), builtin("L").one, builtin("L").one)


def test_euclidean_reference_up_to_isomorphism(builtin):
    assert euclid_service.euclidean_reference(parse_order_spec("Zsqrt:1")) == "I1"
    assert euclid_service.euclidean_reference(builtin("O2")) == "O2"
    assert euclid_service.euclidean_reference(builtin("L")) is None
    assert euclid_service.euclidean_reference(parse_order_spec("Iq:19")) is None


@pytest.mark.parametrize("name", ["Z", "I1", "I3", "O2", "O3"])
def test_ge2_decompose_recovers_matrix(builtin, name):
    order = builtin(name)
    rng = Random(5)
    for _ in range(10):
        m = words_service.eval_word(order, words_service.random_word(order, 6, rng))
        word = euclid_service.ge2_decompose(order, m)
        assert words_service.eval_word(order, word) == m


def test_ge2_decompose_rejects_non_invertible(builtin):
    Z = builtin("Z")
    with pytest.raises(DomainError):
        euclid_service.ge2_decompose(Z, Matrix2((2,), (0,), (0,), (1,)))
    with pytest.raises(DomainError):
        euclid_service.ge2_decompose(Z, Matrix2((0,), (1,), (0,), (1,)))


@pytest.mark.slow
@pytest.mark.parametrize("name", euclid_service.EUCLIDEAN_ORDERS)
def test_ge2_decompose_many_words(builtin, name):
    order = builtin(name)
    rng = Random(0)
    for _ in range(100):
        m = words_service.eval_word(order, words_service.random_word(order, None, rng))
        assert words_service.eval_word(order, euclid_service.ge2_decompose(order, m)) == m
