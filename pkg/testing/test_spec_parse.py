# testing/test_spec_parse.py
import pytest

from domain.errors import DomainError, SpecParseError
from services import words_service
from services.lattice_service import order_key
from utils.spec_parse import (
    parse_basis,
    parse_descriptor,
    parse_element,
    parse_group_spec,
    parse_matrix,
    parse_order_spec,
)

HURWITZ_BASIS = '[["1/2","1/2","1/2","1/2"],[0,1,0,0],[0,0,1,0],[0,0,0,1]]'


def test_order_specs_match_builtins(builtin):
    assert parse_order_spec("Iq:3") == builtin("I3")
    assert parse_order_spec("quat:-1,-1") == builtin("L")
    assert parse_order_spec(" O3 ") == builtin("O3")


def test_hurwitz_basis_gives_the_builtin_lattice(builtin):
    parsed = parse_order_spec("quat:-1,-1", HURWITZ_BASIS)
    assert parsed.basis != builtin("O2").basis
    assert order_key(parsed) == order_key(builtin("O2"))


@pytest.mark.parametrize("spec", ["", "Iq:0", "Iq:4", "Iq:x", "Zsqrt:-2", "foo", "quat:1"])
def test_bad_order_specs(spec):
    with pytest.raises(SpecParseError):
        parse_order_spec(spec)


def test_parse_error_position():
    with pytest.raises(SpecParseError) as info:
        parse_order_spec("Zsqrt:x")
    assert info.value.position == 6


def test_builtin_takes_no_basis():
    with pytest.raises(SpecParseError):
        parse_order_spec("I1", "[[1,0],[0,1]]")


def test_indefinite_quaternion_algebra():
    with pytest.raises(DomainError):
        parse_order_spec("quat:1,-1")


def test_basis_that_is_not_an_order():
    with pytest.raises(DomainError):
        parse_order_spec("quat:-1,-1", '[[1,0,0,0],[0,"1/2",0,0],[0,0,1,0],[0,0,0,1]]')


@pytest.mark.parametrize("text", ["[[1,2]]", '[[1,"a/b"],[0,1]]', "[[1,0],[0,1", '{"a": 1}'])
def test_bad_bases(text):
    with pytest.raises(SpecParseError):
        parse_basis(text, 2)


def test_descriptors():
    assert parse_descriptor("Q").dimension == 1
    assert parse_descriptor("Qi:7").dimension == 2
    assert parse_descriptor("H3").dimension == 4
    for text in ("Qi:-2", "H7", "quat:a,b"):
        with pytest.raises(SpecParseError):
            parse_descriptor(text)


def test_group_specs():
    assert parse_group_spec("perm:[[1,0,2],[0,2,1]]").n == 6
    assert parse_group_spec("table:[[0,1],[1,0]]").n == 2
    assert parse_group_spec("SL(2,3)").n == 24


def test_bad_group_specs():
    with pytest.raises(SpecParseError) as info:
        parse_group_spec("perm:[[1,0")
    assert info.value.position >= 5
    with pytest.raises(SpecParseError):
        parse_group_spec("Nope")
    with pytest.raises(SpecParseError):
        parse_group_spec("")
    with pytest.raises(DomainError):
        parse_group_spec("D7")
    with pytest.raises(DomainError):
        parse_group_spec("table:[[0,1],[0,1]]")


def test_elements_and_matrices(builtin):
    I1 = builtin("I1")
    assert parse_element(I1, "3") == (3, 0)
    assert parse_element(I1, "[1,2]") == (1, 2)
    assert parse_matrix(I1, "[[1,0],[0,1]]") == words_service.identity(I1)
    assert parse_matrix(I1, "[[[0,1],0],[0,[0,-1]]]") == words_service.diagonal(I1, (0, 1), (0, -1))
    for text in ("[1,2,3]", "x"):
        with pytest.raises(SpecParseError):
            parse_element(I1, text)
    with pytest.raises(SpecParseError):
        parse_matrix(I1, "[[1,0]]")
