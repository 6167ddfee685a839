# testing/test_maps_service.py
import pytest

from domain.errors import DomainError
from services import maps_service, units_service, words_service


def test_values_on_integers(builtin):
    Z = builtin("Z")
    word = (words_service.e_letter((4,)),)
    assert maps_service.tau(Z, word) == (1,)
    assert maps_service.psi(Z, word) == (1,)
    assert maps_service.phi(Z, word) == (1,)
    assert maps_service.tau(Z, (words_service.e_letter((4,)).inverted(),)) == (11,)


def test_phi_of_diagonals(builtin):
    Z = builtin("Z")
    assert maps_service.phi(Z, (words_service.diag_letter((-1,), (1,)),)) == (-1,)
    O2 = builtin("O2")
    for u in units_service.unit_group(O2).elements:
        assert maps_service.phi(O2, (words_service.d_letter(O2, u),)) == maps_service.phi(O2, ())


def test_additive_maps_need_e2_words(builtin):
    Z = builtin("Z")
    with pytest.raises(DomainError):
        maps_service.psi(Z, (words_service.diag_letter((-1,), (-1,)),))
    with pytest.raises(DomainError):
        maps_service.tau(Z, (words_service.diag_letter((-1,), (-1,)),))


@pytest.mark.parametrize("name", ["I1", "I3", "O2"])
def test_tau_kills_alpha_relators(builtin, name):
    order = builtin(name)
    for n in (2, 3):
        for a in units_service.short_vector_coords(order, n):
            lhs, rhs = words_service.alpha_relator(order, a)
            assert not any(maps_service.tau(order, lhs + words_service.inverse_word(rhs)))


def test_abelianization_maps_bundle(builtin):
    Z = builtin("Z")
    values = maps_service.abelianization_maps(Z, words_service.e_word([(4,), (5,)]))
    assert values.tau == (3,)
    assert values.psi == (1,)
    assert values.phi == (1,)
