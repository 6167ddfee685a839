# testing/test_abelianization_service.py
import pytest

from services import abelianization_service as ab
from utils.intmat import hnf_columns
from utils.spec_parse import parse_order_spec


def test_e2_of_integers_is_cyclic_of_order_12(builtin):
    e2 = ab.e2_abelianization(builtin("Z"))
    assert e2.torsion == (12,)
    assert e2.free_rank == 0
    assert ab.m_columns(builtin("Z")) == ((12,),)


@pytest.mark.parametrize("name", ["Z", "I1", "I3", "L", "O2", "O3"])
def test_finite_e2_abelianization(builtin, name):
    report = ab.rank_and_finiteness(builtin(name))
    assert report.finite
    assert report.e2_ab.is_finite
    assert all(report.conditions.values())
    assert report.matched_builtin == name


@pytest.mark.parametrize("name, rank, inv", [("I2", 2, 1), ("I7", 2, 1), ("I11", 2, 1), ("O5", 4, 2)])
def test_rank_formula_for_infinite_cases(builtin, name, rank, inv):
    report = ab.rank_and_finiteness(builtin(name))
    assert not report.finite
    assert report.rank == rank
    assert report.inv == inv
    assert report.e2_ab.free_rank == rank - inv
    assert not any(report.conditions.values())
    assert report.matched_builtin is None


def test_rank_formula_for_non_maximal_order():
    report = ab.rank_and_finiteness(parse_order_spec("Zsqrt:3"))
    assert report.e2_ab.free_rank == 1
    assert not report.finite


@pytest.mark.parametrize("d", range(1, 11))
def test_rank_formula_over_quadratic_orders(d):
    report = ab.rank_and_finiteness(parse_order_spec(f"Zsqrt:{d}"))
    assert report.rank == 2
    assert report.inv == (2 if d == 1 else 1)
    assert report.e2_ab.free_rank == report.rank - report.inv
    assert report.finite == (d == 1)
    expected = {1: (2, 2), 2: (6,)}.get(d, (12,))
    assert report.e2_ab.torsion == expected


def test_twelve_units_lie_in_m(builtin):
    report = ab.m_subgroup(builtin("O2"))
    assert report.loop_graph_stats["states"] == 8
    assert report.columns == ab.m_columns(builtin("O2"))


def test_abelian_shortcut_matches_loop_generators(builtin):
    I1 = builtin("I1")
    report = ab.m_subgroup(I1)
    assert hnf_columns(list(report.generators_type2), I1.rank) == ab.abelian_shortcut_span(I1)


@pytest.mark.parametrize(
    "name, total, collapsed",
    [("Z", 4, False), ("O2", 3, True), ("O3", 4, True), ("O5", 6, True)],
)
def test_ge2_abelianization(builtin, name, total, collapsed):
    report = ab.ge2_abelianization(builtin(name))
    assert report.total_order == total
    assert report.collapsed is collapsed
    assert (report.o_mod_n.exponent or 1) <= 2


def test_ge2_of_integers():
    report = ab.ge2_abelianization(parse_order_spec("Z"))
    assert report.o_mod_n.torsion == (2,)
    assert report.u_ab.torsion == (2,)
    assert report.certificate == ""


def test_collapse_certificate_names_order_three_unit(builtin):
    assert "order 3" in ab.ge2_abelianization(builtin("O2")).certificate


def test_diagonal_part_of_e2(builtin):
    assert ab.diagonal_e2_check(builtin("O2")) == {"units": 24, "derived": 8, "diagonals": 192}
    assert ab.diagonal_e2_check(builtin("I1")) == {"units": 4, "derived": 1, "diagonals": 4}
