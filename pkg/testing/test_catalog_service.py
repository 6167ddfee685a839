# testing/test_catalog_service.py
import pytest

from domain.errors import DomainError
from services import catalog_service as catalog
from services import group_service as groups


@pytest.mark.parametrize("name", [n for n in catalog.FORBIDDEN if n != "G384_618"])
def test_forbidden_models_match_presentations(name):
    entry = catalog.catalog_entry(name)
    G = catalog.build_group(name)
    assert G.n == entry.order == catalog.ORDERS[name]
    assert catalog.relations_hold(G, entry.presentation, entry.images)


@pytest.mark.slow
def test_largest_forbidden_group():
    G = catalog.build_group("G384_618")
    assert G.n == 384
    assert groups.is_solvable(G)


def test_g240_90_is_not_solvable():
    assert not groups.is_solvable(catalog.build_group("G240_90"))


def test_recognizer():
    is_q8 = catalog.recognizer("Q8")
    assert is_q8(catalog.build_group("Q8"))
    assert not is_q8(catalog.build_group("D8"))
    assert not is_q8(catalog.build_group("C8"))


def test_presentation_witness():
    text = catalog.PRESENTATIONS["S3"]
    assert catalog.presentation_witness(catalog.build_group("S3"), text) is not None
    assert catalog.presentation_witness(catalog.build_group("C6"), text) is None


def test_parse_presentation_chains():
    chains = catalog.parse_presentation("r^4 = s^2 = 1, r^s = r^-1")
    assert [len(chain) for chain in chains] == [3, 2]


@pytest.mark.parametrize("name", ["G16_13", "G32_50"])
def test_central_products(name):
    assert catalog.central_product_check(name)


def test_central_product_unknown():
    with pytest.raises(DomainError):
        catalog.central_product_check("D8")


def test_catalog_entry_unknown():
    with pytest.raises(DomainError):
        catalog.catalog_entry("C5")
