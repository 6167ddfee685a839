# testing/test_words_service.py
from random import Random

import pytest

from domain.errors import DomainError, SpecParseError
from services import words_service as ws


def test_e_zero_squares_to_minus_identity(builtin):
    Z = builtin("Z")
    word = ws.parse_word(Z, "E(0);E(0)")
    assert ws.eval_word(Z, word) == ws.mat_neg(Z, ws.identity(Z))


def test_parse_word_letters(builtin):
    I1 = builtin("I1")
    word = ws.parse_word(I1, "E(1,1);D(-1);[1,-1];inv(E(2))^2")
    assert len(word) == 5
    assert word[0] == ws.e_letter((1, 1))
    assert word[1] == ws.diag_letter((-1, 0), (-1, 0))
    assert word[2] == ws.diag_letter((1, 0), (-1, 0))
    assert word[3].inverse and word[4].inverse
    assert ws.parse_word(I1, ws.format_word(I1, word)) == word


@pytest.mark.parametrize("text", ["E(1,2,3)", "E(1", "D(2)", "F(1)", "E(1)^x"])
def test_parse_word_errors(builtin, text):
    with pytest.raises(SpecParseError):
        ws.parse_word(builtin("I1"), text)


def test_inverse_letter_evaluates_to_inverse(builtin):
    I3 = builtin("I3")
    word = ws.parse_word(I3, "E(2,1);inv(E(2,1))")
    assert ws.eval_word(I3, word) == ws.identity(I3)


def test_diagonal_needs_units(builtin):
    Z = builtin("Z")
    with pytest.raises(DomainError):
        ws.eval_word(Z, (ws.diag_letter((2,), (1,)),))


def test_relation_suite_counts(builtin):
    report = ws.verify_relation_suite(builtin("I1"), samples=20, seed=1)
    assert report.checked["R4"] == 1
    assert report.checked["R2"] == 4
    assert report.checked["R8"] == 16
    assert report.checked["R3"] == 20 + 16
    assert report.checked["R1"] == 20
    assert report.total == sum(report.checked.values())


def test_relation_suite_rejects_negative_samples(builtin):
    with pytest.raises(DomainError):
        ws.verify_relation_suite(builtin("Z"), samples=-1)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["Z", "I1", "I2", "I3", "I7", "I11", "L", "O2", "O3", "O5"])
def test_relation_suite_full(builtin, name):
    report = ws.verify_relation_suite(builtin(name), samples=1000, seed=0)
    assert report.checked["R6"] == 1000


@pytest.mark.parametrize(
    "name, counts",
    [("Z", {2: 0, 3: 0}), ("I1", {2: 4, 3: 0}), ("L", {2: 24, 3: 32}), ("O2", {2: 24, 3: 96})],
)
def test_alpha_relations(builtin, name, counts):
    report = ws.alpha_relations(builtin(name))
    assert report.counts == counts
    assert report.verified == sum(counts.values())


def test_to_canonical_removes_interior_zero(builtin):
    Z = builtin("Z")
    canon, right = ws.to_canonical(Z, ws.e_word([(2,), (0,), (3,)]))
    assert canon == ws.e_word([(5,)])
    assert right == ((-1,), (-1,))


@pytest.mark.parametrize("name", ["Z", "I1", "O2"])
def test_to_canonical_preserves_value(builtin, name):
    order = builtin(name)
    rng = Random(7)
    for _ in range(10):
        word = ws.random_word(order, 8, rng)
        canon, right = ws.to_canonical(order, word)
        assert ws.eval_word(order, canon + (ws.diag_letter(*right),)) == ws.eval_word(order, word)
        for letter in canon[1:-1]:
            t = letter.params[0]
            assert any(t) and not order.is_unit(t)


def test_b_sequence_and_measure(builtin):
    Z = builtin("Z")
    assert ws.b_sequence(Z, ws.e_word([(2,), (3,), (4,)])) == [(1,), (2,), (5,)]
    assert ws.measure(Z, [(2,), (3,), (4,)]) == (25, 3)
    assert ws.measure(Z, []) == (0, 0)
    with pytest.raises(DomainError):
        ws.b_sequence(Z, (ws.diag_letter((1,), (1,)),))


def test_reduce_e_zero_squared(builtin):
    Z = builtin("Z")
    seen = []
    trace = ws.reduce_relation(Z, ws.parse_word(Z, "E(0);E(0)"), on_step=seen.append)
    assert [s.rule for s in trace.steps] == ["expand", "R4"]
    assert seen == trace.steps
    assert trace.terminated
    assert trace.final_diag == ((1,), (1,))


def test_expand_step_keeps_the_full_word(builtin):
    Z = builtin("Z")
    word = ws.parse_word(Z, "E(2);D(-1);inv(E(2))")
    trace = ws.reduce_relation(Z, word)
    expand = trace.steps[0]
    assert expand.rule == "expand"
    assert ws.parse_word(Z, expand.source) == word
    assert all(step.source is None for step in trace.steps[1:])


def test_reduce_rejects_non_relations(builtin):
    Z = builtin("Z")
    with pytest.raises(DomainError):
        ws.reduce_relation(Z, ws.parse_word(Z, "E(1)"))


def test_reduce_alpha_relator(builtin):
    I1 = builtin("I1")
    lhs, rhs = ws.alpha_relator(I1, (1, 1))
    trace = ws.reduce_relation(I1, lhs + ws.inverse_word(rhs))
    assert trace.terminated
    for step in trace.descent_steps:
        assert (step.m_after, step.h_after) < (step.m, step.h)


@pytest.mark.parametrize("name", ["Z", "I1", "O2"])
def test_reduce_small_corpus(builtin, name):
    order = builtin(name)
    for word in ws.relation_corpus(order, size=5, max_length=20, seed=2):
        assert ws.reduce_relation(order, word).terminated


@pytest.mark.slow
@pytest.mark.parametrize("name", ["Z", "I1", "I3", "L", "O2", "O3", "O5"])
def test_reduce_full_corpus(builtin, name):
    order = builtin(name)
    for word in ws.relation_corpus(order, size=200, seed=0):
        assert ws.reduce_relation(order, word).terminated


def test_corpus_words_are_relations(builtin):
    I3 = builtin("I3")
    corpus = ws.relation_corpus(I3, size=8, max_length=16, seed=4)
    assert len(corpus) == 8
    assert corpus == ws.relation_corpus(I3, size=8, max_length=16, seed=4)
    for word in corpus:
        assert len(word) <= 16
        assert ws.eval_word(I3, word) == ws.identity(I3)


def test_corpus_needs_room(builtin):
    with pytest.raises(DomainError):
        ws.relation_corpus(builtin("Z"), size=1, max_length=3)
