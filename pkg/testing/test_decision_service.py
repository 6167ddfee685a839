# testing/test_decision_service.py
import pytest

from domain.errors import DomainError
from services import catalog_service, decision_service as ds, units_service
from services.catalog_service import build_group
from utils.spec_parse import parse_descriptor, parse_group_spec, parse_order_spec

FAST_FORBIDDEN = [n for n in catalog_service.FORBIDDEN if n not in ("G240_90", "G384_618")]


# ─────────────────────────────────────────────────────────────
# Group side
# ─────────────────────────────────────────────────────────────

@pytest.mark.parametrize("name", FAST_FORBIDDEN)
def test_forbidden_groups_fail_hfa(name):
    decision = ds.decide_hfa(build_group(name))
    assert decision.cut
    assert not decision.hfa
    assert decision.forbidden_witness in catalog_service.FORBIDDEN


@pytest.mark.slow
@pytest.mark.parametrize("name", ["G240_90", "G384_618"])
def test_large_forbidden_groups_fail_hfa(name):
    decision = ds.decide_hfa(build_group(name))
    assert decision.cut and not decision.hfa


@pytest.mark.parametrize("name", ["C1", "C2", "C3", "C4", "C6", "Q8"])
def test_hfa_groups(name):
    decision = ds.decide_hfa(build_group(name))
    assert decision.hfa
    assert decision.certificate == "cut, no forbidden quotient"
    assert decision.as_labels()["T"] and decision.as_labels()["fab"]


def test_non_cut_group():
    decision = ds.decide_hfa(build_group("C5"))
    assert not decision.hfa and not decision.cut
    assert decision.certificate == "not cut"


def test_hfa_certificate_names_kernel():
    decision = ds.decide_hfa(build_group("S3"))
    assert decision.forbidden_witness == "S3"
    assert decision.certificate == "quotient by a normal subgroup of order 1 is S3"


def test_odd_order_shortcut():
    assert not ds.decide_odd_order(build_group("C7")).cut
    assert ds.decide_odd_order(build_group("C3")).cut
    frobenius = parse_group_spec("perm:[[1,2,3,4,5,6,0],[0,2,4,6,1,3,5]]")
    assert frobenius.n == 21
    report = ds.decide_odd_order(frobenius)
    assert report.cut
    assert report.as_labels()["hfa"]


def test_odd_order_refuses_even_groups():
    with pytest.raises(DomainError):
        ds.decide_odd_order(build_group("D8"))
    report = ds.decide_odd_order(build_group("D8"), assert_no_type_ii=True)
    assert report.asserted_no_type_ii and report.cut


def test_component_predicates():
    flags = ds.component_predicates(build_group("D8"))
    assert flags.has_M2Q and flags.witnesses["M2(Q)"] == "D8"
    flags = ds.component_predicates(build_group("C6"))
    assert not flags.has_M2Q and not flags.has_M2H5
    flags = ds.component_predicates(build_group("SL(2,3)"))
    assert flags.solvable and not flags.has_M2Q and not flags.has_M2H5


@pytest.mark.parametrize("name, fa", [("S3", "false"), ("Q8", "true"), ("SL(2,3)", "open"), ("C5", "false")])
def test_fa_profile(name, fa):
    profile = ds.fa_profile(build_group(name))
    assert profile.fa == fa
    assert "E2(ZG)" in profile.never_fa


def test_cut_division_span():
    assert ds.cut_division_span(build_group("Q8")) == "H2"
    assert ds.cut_division_span(build_group("C6")) == "Q(sqrt(-3))"
    assert ds.cut_division_span(build_group("C3:C4")) == "H3"
    assert ds.cut_division_span(build_group("S3")) is None


@pytest.mark.parametrize("n", range(1, 25))
def test_dirichlet_rank_matches_cut(n):
    assert (ds.dirichlet_unit_rank(n) == 0) == (n in (1, 2, 3, 4, 6))


def test_dirichlet_rank_values():
    assert ds.dirichlet_unit_rank(5) == 1
    assert ds.dirichlet_unit_rank(12) == 1
    with pytest.raises(DomainError):
        ds.dirichlet_unit_rank(0)


# ─────────────────────────────────────────────────────────────
# Exceptional components
# ─────────────────────────────────────────────────────────────

def test_hilbert_symbol():
    assert ds.hilbert_symbol(-1, -1, 2) == -1
    assert ds.hilbert_symbol(-1, -1, 3) == 1
    assert ds.hilbert_symbol(2, 3, 3) == -1
    assert ds.hilbert_symbol(1, 7, 7) == 1


@pytest.mark.parametrize(
    "spec, primes",
    [("H2", (2,)), ("H3", (3,)), ("H5", (5,)), ("quat:-1,-7", (7,)), ("Qi:3", ()), ("Q", ())],
)
def test_ramified_primes(spec, primes):
    assert ds.ramified_primes(parse_descriptor(spec)) == primes


def test_exceptional_types():
    result = ds.exceptional_type(parse_descriptor("Qi:2"), 2)
    assert result.kind == "TypeII" and result.in_catalog
    result = ds.exceptional_type(parse_descriptor("Qi:5"), 2)
    assert result.kind == "TypeII" and not result.in_catalog
    assert ds.exceptional_type(parse_descriptor("H2"), 2).in_catalog
    assert not ds.exceptional_type(parse_descriptor("quat:-1,-7"), 2).in_catalog
    assert ds.exceptional_type(parse_descriptor("H2"), 1).kind is None
    assert ds.exceptional_type(parse_descriptor("Q"), 1).reason == "commutative"
    assert ds.exceptional_type(parse_descriptor("Q"), 3).kind is None
    with pytest.raises(DomainError):
        ds.exceptional_type(parse_descriptor("Q"), 0)


# ─────────────────────────────────────────────────────────────
# Order side
# ─────────────────────────────────────────────────────────────

@pytest.mark.parametrize("name", ["Z", "I1", "I2", "I3", "L", "O2", "O3", "O5"])
def test_fa_for_e2(builtin, name):
    assert ds.decide_fa_e2(builtin(name)) == (name in ("I3", "O2", "O3"))
    assert not ds.decide_hfa_e2(builtin(name))


def test_fa_for_e2_up_to_isomorphism():
    assert ds.decide_fa_e2(parse_order_spec("Iq:3"))


@pytest.mark.parametrize("name, fa", [("Z", False), ("I2", False), ("I7", False), ("I11", False), ("I1", True), ("O2", True)])
def test_fa_for_borel(builtin, name, fa):
    assert ds.decide_fa_borel(builtin(name)) is fa


def test_fa_for_borel_non_maximal():
    assert not ds.decide_fa_borel(parse_order_spec("Zsqrt:5"))


@pytest.mark.parametrize(
    "name, mode, found",
    [
        ("I1", "D2", True), ("I3", "D2", True), ("L", "D2", True), ("O2", "D2", True),
        ("O3", "D2", True), ("O5", "D2", True), ("O5", "DE2", False), ("O2", "DE2", True),
        ("Z", "D2", False), ("Z", "DE2", False),
    ],
)
def test_grk_criterion(builtin, name, mode, found):
    result = ds.grk_criterion(builtin(name), mode)
    assert result.found is found
    assert result.candidates_checked > 0
    if found:
        assert result.charpoly_factors


def test_grk_mode_checked(builtin):
    with pytest.raises(DomainError):
        ds.grk_criterion(builtin("Z"), "E2")


@pytest.mark.parametrize("name", ["O2", "O5"])
def test_action_matches_conjugation_convention(builtin, name):
    order = builtin(name)
    units = units_service.unit_group(order).elements
    for u1 in units:
        for u2 in units:
            u2_inv = order.unit_inverse(u2)
            columns = [order.mul(order.mul(u1, order.basis_vector(j)), u2_inv) for j in range(order.rank)]
            conj = [[columns[j][i] for j in range(order.rank)] for i in range(order.rank)]
            assert ds._action_matrix(order, u2_inv, order.unit_inverse(u1)) == conj
