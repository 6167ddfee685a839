# testing/test_group_service.py
import pytest

from domain.errors import DomainError
from services import group_service as groups
from services.catalog_service import build_group


def test_small_group_invariants():
    S3, Q8 = build_group("S3"), build_group("Q8")
    assert len(groups.conjugacy_classes(S3)) == 3
    assert len(groups.derived_subgroup(Q8)) == 2
    assert len(groups.center(Q8)) == 2
    assert groups.abelianization_invariants(S3).torsion == (2,)
    assert groups.abelianization_invariants(Q8).torsion == (2, 2)
    assert groups.abelianization_invariants(build_group("SL(2,3)")).torsion == (3,)


def test_normal_subgroups_and_quotient():
    G = build_group("SL(2,3)")
    assert [len(N) for N in groups.normal_subgroups(G)] == [1, 2, 8, 24]
    N = next(N for N in groups.normal_subgroups(G) if len(N) == 8)
    assert groups.is_isomorphic(groups.quotient(G, N), build_group("C3"))


def test_quotient_needs_normal_subgroup():
    S3 = build_group("S3")
    s = next(g for g in range(S3.n) if S3.element_order(g) == 2)
    with pytest.raises(DomainError):
        groups.quotient(S3, groups.subgroup_closure(S3, [s]))


def test_isomorphism():
    assert not groups.is_isomorphic(build_group("D8"), build_group("Q8"))
    assert not groups.is_isomorphic(build_group("G16_6"), build_group("G16_13"))
    assert groups.is_isomorphic(build_group("C2xC3"), build_group("C6"))
    assert groups.is_isomorphic(build_group("S3"), build_group("D6"))


def test_maps_onto():
    found, kernel = groups.maps_onto(build_group("SL(2,3)"), build_group("C3"))
    assert found and len(kernel) == 8
    assert groups.maps_onto(build_group("Q8"), build_group("S3")) == (False, None)
    assert groups.maps_onto(build_group("Q8"), build_group("C2xC2"))[0]
    assert not groups.maps_onto(build_group("Q8"), build_group("C4"))[0]


@pytest.mark.parametrize("n", range(1, 13))
def test_cyclic_cut_groups(n):
    assert groups.is_cut(build_group(f"C{n}")) == (n in (1, 2, 3, 4, 6))


def test_cut_examples():
    assert groups.is_cut(build_group("S3"))
    assert groups.is_cut(build_group("SL(2,3)"))
    assert not groups.is_cut(build_group("C3xC5"))


def test_solvability():
    assert groups.is_solvable(build_group("SL(2,3)"))
    assert not groups.is_solvable(build_group("A5"))
    assert not groups.is_solvable(build_group("SL(2,5)"))


def test_from_permutations_and_tables():
    G = groups.from_permutations([[1, 2, 0], [1, 0, 2]])
    assert G.n == 6
    assert groups.is_isomorphic(G, build_group("S3"))
    C2 = groups.from_table([[0, 1], [1, 0]])
    assert C2.is_abelian() and C2.n == 2


@pytest.mark.parametrize(
    "rows",
    [[[0, 1], [0, 1]], [[0, 1, 2], [1, 2]], [[0, 5], [1, 0]], []],
)
def test_bad_tables(rows):
    with pytest.raises(DomainError):
        groups.from_table(rows)


def test_non_associative_latin_square():
    rows = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(DomainError):
        groups.from_table(rows)


def test_describe():
    info = groups.describe(build_group("Q8"))
    assert info["order"] == 8
    assert info["abelian"] is False
    assert info["classes"] == 5
    assert info["element_orders"] == {1: 1, 2: 1, 4: 6}
    assert info["abelianization"] == "C2 x C2"


@pytest.mark.parametrize("name", ["D7", "C0", "nope"])
def test_unknown_builtins(name):
    with pytest.raises(DomainError):
        build_group(name)
