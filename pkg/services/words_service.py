# services/words_service.py
"""Words in the generators E(x) and [mu, nu] of GE2(O).

Matrices follow E(x) = (x 1 // -1 0) and [mu, nu] = diag(mu, nu). A word is
kept symbolically (formal inverses included) and only multiplied out by
`eval_word`. `reduce_relation` rewrites a relation into the empty relation
using the universal relations and the relators (E(a~)E(a))^n = E(0)^2 for
N(a) = n in {2, 3}, recording every step.
"""
from __future__ import annotations

import logging
import re
from random import Random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from domain.errors import DomainError, InvariantViolation, SpecParseError
from domain.models import AlphaReport, RelationSuiteReport
from domain.orders import OrderStruct, Vec
from domain.words import DIAG, E, Letter, Matrix2, ReductionStep, ReductionTrace, Word
from services import units_service

from config import COORD_RANGE, CORPUS_MAX_LENGTH, CORPUS_SIZE, SAMPLES, SEED, WORD_LENGTH

log = logging.getLogger(__name__)

__all__ = [
    "RELATIONS",
    "identity",
    "mat_mul",
    "mat_neg",
    "diagonal",
    "e_matrix",
    "e_letter",
    "diag_letter",
    "d_letter",
    "e_word",
    "inverse_word",
    "letter_matrix",
    "eval_word",
    "parse_word",
    "format_word",
    "random_element",
    "random_word",
    "verify_relation_suite",
    "alpha_relator",
    "alpha_relations",
    "to_canonical",
    "b_sequence",
    "measure",
    "reduce_relation",
    "relation_corpus",
]

MAX_REDUCTION_STEPS = 100_000

Pair = Tuple[Vec, Vec]


# ─────────────────────────────────────────────────────────────
# Matrices
# ─────────────────────────────────────────────────────────────

def identity(order: OrderStruct) -> Matrix2:
    return Matrix2(order.one, order.zero, order.zero, order.one)


def mat_mul(order: OrderStruct, x: Matrix2, y: Matrix2) -> Matrix2:
    m, a = order.mul, order.add
    return Matrix2(
        a(m(x.a, y.a), m(x.b, y.c)),
        a(m(x.a, y.b), m(x.b, y.d)),
        a(m(x.c, y.a), m(x.d, y.c)),
        a(m(x.c, y.b), m(x.d, y.d)),
    )


def mat_neg(order: OrderStruct, x: Matrix2) -> Matrix2:
    return Matrix2(*(order.neg(v) for v in x.entries))


def diagonal(order: OrderStruct, mu: Vec, nu: Vec) -> Matrix2:
    return Matrix2(tuple(mu), order.zero, order.zero, tuple(nu))


def e_matrix(order: OrderStruct, x: Vec) -> Matrix2:
    return Matrix2(tuple(x), order.one, order.neg(order.one), order.zero)


# ─────────────────────────────────────────────────────────────
# Letters and words
# ─────────────────────────────────────────────────────────────

def e_letter(x: Sequence[int]) -> Letter:
    return Letter(E, (tuple(x),))


def diag_letter(mu: Sequence[int], nu: Sequence[int]) -> Letter:
    return Letter(DIAG, (tuple(mu), tuple(nu)))


def d_letter(order: OrderStruct, mu: Vec) -> Letter:
    """D(mu) = [mu, mu^-1]."""
    return diag_letter(mu, order.unit_inverse(mu))


def e_word(ts: Sequence[Vec]) -> Word:
    return tuple(e_letter(t) for t in ts)


def inverse_word(word: Word) -> Word:
    return tuple(letter.inverted() for letter in reversed(word))


def _diag_params(order: OrderStruct, letter: Letter) -> Pair:
    mu, nu = letter.params
    if letter.inverse:
        return order.unit_inverse(mu), order.unit_inverse(nu)
    if not (order.is_unit(mu) and order.is_unit(nu)):
        raise DomainError(f"[{order.format(mu)}, {order.format(nu)}] needs unit entries")
    return mu, nu


def letter_matrix(order: OrderStruct, letter: Letter) -> Matrix2:
    if letter.is_e:
        x = letter.params[0]
        if letter.inverse:
            # E(x)^-1 = E(0) E(-x) E(0)
            z = e_matrix(order, order.zero)
            return mat_mul(order, mat_mul(order, z, e_matrix(order, order.neg(x))), z)
        return e_matrix(order, x)
    return diagonal(order, *_diag_params(order, letter))


def eval_word(order: OrderStruct, word: Word) -> Matrix2:
    out = identity(order)
    for letter in word:
        out = mat_mul(order, out, letter_matrix(order, letter))
    return out


# ─────────────────────────────────────────────────────────────
# Text format: E(x);D(u);[a,b];inv(...), optional ^k
# ─────────────────────────────────────────────────────────────

_TOKEN = re.compile(r"(?P<name>inv|E|D)|(?P<int>-?\d+)|(?P<op>[()\[\],;^])")


class _WordParser:
    def __init__(self, order: OrderStruct, text: str):
        self.order = order
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m:
                raise SpecParseError("unexpected character in word", text, pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), pos))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, value: Optional[str] = None) -> Tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise SpecParseError("unexpected end of word", self.text, len(self.text))
        if value is not None and tok[1] != value:
            raise SpecParseError(f"expected {value!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Word:
        word = self.word()
        tok = self.peek()
        if tok is not None:
            raise SpecParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return word

    def word(self) -> Word:
        letters: List[Letter] = []
        while self.peek() is not None and self.peek()[1] != ")":
            letters.extend(self.factor())
            if self.peek() is not None and self.peek()[1] == ";":
                self.take(";")
        return tuple(letters)

    def factor(self) -> Word:
        word = self.atom()
        if self.peek() is not None and self.peek()[1] == "^":
            self.take("^")
            tok = self.take()
            if tok[0] != "int":
                raise SpecParseError("exponent must be an integer", self.text, tok[2])
            k = int(tok[1])
            word = (inverse_word(word) if k < 0 else word) * abs(k)
        return word

    def atom(self) -> Word:
        tok = self.take()
        if tok[1] == "E":
            return (e_letter(self.element_args()),)
        if tok[1] == "D":
            x = self.element_args()
            if not self.order.is_unit(x):
                raise SpecParseError("D(u) needs a unit", self.text, tok[2])
            return (d_letter(self.order, x),)
        if tok[1] == "inv":
            self.take("(")
            inner = self.word()
            self.take(")")
            return inverse_word(inner)
        if tok[1] == "[":
            mu = self.element()
            self.take(",")
            nu = self.element()
            self.take("]")
            return (diag_letter(mu, nu),)
        raise SpecParseError(f"unexpected {tok[1]!r}", self.text, tok[2])

    def element_args(self) -> Vec:
        self.take("(")
        coords = self.coords()
        self.take(")")
        return coords

    def element(self) -> Vec:
        tok = self.peek()
        if tok is not None and tok[1] == "(":
            return self.element_args()
        return self.coords(single=True)

    def coords(self, single: bool = False) -> Vec:
        start = self.peek()
        values = [self.integer()]
        while not single and self.peek() is not None and self.peek()[1] == ",":
            self.take(",")
            values.append(self.integer())
        if len(values) == 1:
            return self.order.scale(values[0], self.order.one)
        if len(values) != self.order.rank:
            raise SpecParseError(
                f"expected 1 or {self.order.rank} coordinates, got {len(values)}", self.text, start[2]
            )
        return tuple(values)

    def integer(self) -> int:
        tok = self.take()
        if tok[0] != "int":
            raise SpecParseError("expected an integer", self.text, tok[2])
        return int(tok[1])


def parse_word(order: OrderStruct, text: str) -> Word:
    """Parse `E(1,1);D(-1);[1,-1];inv(E(2))^2`.

    A single integer inside E(...), D(...) or [.,.] is that rational integer;
    otherwise the coordinates are in the order basis.
    """
    return _WordParser(order, text).parse()


def _format_element(order: OrderStruct, x: Vec) -> str:
    return ",".join(str(c) for c in x)


def format_word(order: OrderStruct, word: Word) -> str:
    parts = []
    for letter in word:
        if letter.is_e:
            text = f"E({_format_element(order, letter.params[0])})"
        else:
            mu, nu = letter.params
            if order.norm(mu) == 1 and nu == order.conj(mu):
                text = f"D({_format_element(order, mu)})"
            elif order.rank == 1:
                text = f"[{mu[0]},{nu[0]}]"
            else:
                text = f"[({_format_element(order, mu)}),({_format_element(order, nu)})]"
        parts.append(f"inv({text})" if letter.inverse else text)
    return ";".join(parts)


def random_element(order: OrderStruct, rng: Random, coord_range: Optional[int] = None) -> Vec:
    c = COORD_RANGE if coord_range is None else coord_range
    return tuple(rng.randint(-c, c) for _ in range(order.rank))


def random_word(order: OrderStruct, length: Optional[int], rng: Random) -> Word:
    """E-letters with small coordinates, some unit diagonals, some formal inverses."""
    units = units_service.unit_group(order).elements if order.descriptor.is_definite else (order.one, order.neg(order.one))
    letters = []
    for _ in range(WORD_LENGTH if length is None else length):
        if rng.random() < 0.15:
            letter = diag_letter(rng.choice(units), rng.choice(units))
        else:
            letter = e_letter(random_element(order, rng))
        if rng.random() < 0.2:
            letter = letter.inverted()
        letters.append(letter)
    return tuple(letters)


# ─────────────────────────────────────────────────────────────
# Universal relations R1-R8 and the relators (alpha)
# ─────────────────────────────────────────────────────────────

def _zero(order: OrderStruct) -> Letter:
    return e_letter(order.zero)


def _r1(order, x, y):
    return (e_letter(x), _zero(order), e_letter(y)), (_zero(order), _zero(order), e_letter(order.add(x, y)))


def _r2(order, mu):
    return (e_letter(mu), e_letter(order.unit_inverse(mu)), e_letter(mu)), (_zero(order), _zero(order), d_letter(order, mu))


def _r3(order, x, mu, nu):
    moved = order.mul(order.mul(order.unit_inverse(nu), x), mu)
    return (e_letter(x), diag_letter(mu, nu)), (diag_letter(nu, mu), e_letter(moved))


def _r3_prime(order, x, mu):
    return (e_letter(x), d_letter(order, mu)), (d_letter(order, order.unit_inverse(mu)), e_letter(order.mul(order.mul(mu, x), mu)))


def _r4(order):
    return (_zero(order), _zero(order)), (d_letter(order, order.neg(order.one)),)


def _r5(order, x):
    # E(x) E(0) E(-x) E(0) = I; E(x)^-1 itself is evaluated through this identity
    return (e_letter(x), _zero(order), e_letter(order.neg(x)), _zero(order)), ()


def _r6(order, x, y, z):
    return (e_letter(x), e_letter(y).inverted(), e_letter(z)), (e_letter(order.add(order.sub(x, y), z)),)


def _r7(order, x, alpha, y):
    ai = order.unit_inverse(alpha)
    return (
        (e_letter(x), e_letter(alpha), e_letter(y)),
        (e_letter(order.sub(x, ai)), d_letter(order, alpha), e_letter(order.sub(y, ai))),
    )


def _r8(order, u, v):
    ui, vi = order.unit_inverse(u), order.unit_inverse(v)
    c = order.mul(order.mul(ui, vi), order.mul(u, v))
    return (diag_letter(c, order.one),), (d_letter(order, ui), d_letter(order, vi), d_letter(order, order.mul(u, v)))


# name -> (builder, number of ring parameters, number of unit parameters)
RELATIONS: Dict[str, Tuple[Callable[..., Tuple[Word, Word]], int, int]] = {
    "R1": (_r1, 2, 0),
    "R2": (_r2, 0, 1),
    "R3": (_r3, 1, 2),
    "R3'": (_r3_prime, 1, 1),
    "R4": (_r4, 0, 0),
    "R5": (_r5, 1, 0),
    "R6": (_r6, 3, 0),
    # x, alpha, y: drawn in _relation_args
    "R7": (_r7, 2, 1),
    "R8": (_r8, 0, 2),
}


def _relation_args(name: str, order: OrderStruct, rng: Random, units: Sequence[Vec]) -> tuple:
    if name == "R7":
        return (random_element(order, rng), rng.choice(units), random_element(order, rng))
    _, n_ring, n_units = RELATIONS[name]
    return tuple(random_element(order, rng) for _ in range(n_ring)) + tuple(rng.choice(units) for _ in range(n_units))


def verify_relation_suite(
    order: OrderStruct,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> RelationSuiteReport:
    """Check R1-R8 as matrix identities: sampled parameters, then every unit parameter."""
    samples = SAMPLES if samples is None else samples
    seed = SEED if seed is None else seed
    if samples < 0:
        raise DomainError(f"samples must be non-negative, got {samples}")
    units = units_service.unit_group(order).elements
    rng = Random(seed)
    report = RelationSuiteReport(order_name=order.label, samples=samples, seed=seed)

    def check(name: str, args: tuple) -> None:
        lhs, rhs = RELATIONS[name][0](order, *args)
        if eval_word(order, lhs) != eval_word(order, rhs):
            raise InvariantViolation(
                f"{order.label}: {name} fails: {format_word(order, lhs)} != {format_word(order, rhs)}"
            )
        report.checked[name] = report.checked.get(name, 0) + 1

    for _ in range(samples):
        for name in ("R1", "R3", "R3'", "R5", "R6", "R7"):
            check(name, _relation_args(name, order, rng, units))

    check("R4", ())
    for mu in units:
        check("R2", (mu,))
        check("R3'", (random_element(order, rng), mu))
        check("R7", (random_element(order, rng), mu, random_element(order, rng)))
        for nu in units:
            check("R3", (random_element(order, rng), mu, nu))
            check("R8", (mu, nu))
    log.debug("%s relation suite: %s", order.label, report.checked)
    return report


def alpha_relator(order: OrderStruct, a: Vec) -> Tuple[Word, Word]:
    """(E(a~) E(a))^n = E(0)^2 with n = N(a)."""
    n = order.norm(a)
    lhs = (e_letter(order.conj(a)), e_letter(a)) * n
    return lhs, (_zero(order), _zero(order))


def alpha_relations(order: OrderStruct) -> AlphaReport:
    counts: Dict[int, int] = {}
    verified = 0
    minus_one = mat_neg(order, identity(order))
    for n in (2, 3):
        found = units_service.short_vector_coords(order, n)
        counts[n] = len(found)
        for a in found:
            lhs, _ = alpha_relator(order, a)
            if eval_word(order, lhs) != minus_one:
                raise InvariantViolation(f"{order.label}: (E(a~)E(a))^{n} != -I for a = {order.format(a)}")
            verified += 1
    return AlphaReport(order_name=order.label, counts=counts, verified=verified)


# ─────────────────────────────────────────────────────────────
# Canonical forms
# ─────────────────────────────────────────────────────────────

def _pair_mul(order: OrderStruct, x: Pair, y: Pair) -> Pair:
    return order.mul(x[0], y[0]), order.mul(x[1], y[1])


def _pair_inv(order: OrderStruct, x: Pair) -> Pair:
    return order.unit_inverse(x[0]), order.unit_inverse(x[1])


def _pair_neg(order: OrderStruct, x: Pair) -> Pair:
    return order.neg(x[0]), order.neg(x[1])


def _expand(order: OrderStruct, word: Word) -> Tuple[List[Vec], Pair]:
    """Parameters t and a diagonal R with E(t_1)...E(t_l) R = eval(word)."""
    ts: List[Vec] = []
    p, q = order.one, order.one

    def push(x: Vec) -> None:
        nonlocal p, q
        # [p, q] E(x) = E(p x q^-1) [q, p]
        ts.append(order.mul(order.mul(p, x), order.unit_inverse(q)))
        p, q = q, p

    for letter in word:
        if letter.is_e:
            x = letter.params[0]
            if letter.inverse:
                push(order.zero)
                push(order.neg(x))
                push(order.zero)
            else:
                push(x)
        else:
            mu, nu = _diag_params(order, letter)
            p, q = order.mul(p, mu), order.mul(q, nu)
    return ts, (p, q)


def _eliminate_once(order: OrderStruct, ts: List[Vec]) -> Optional[Tuple[str, List[Vec], Pair]]:
    """One interior zero (R1) or unit (R7) removed: E(ts) = E(new) * delta."""
    for i in range(1, len(ts) - 1):
        t = ts[i]
        if not any(t):
            new = ts[: i - 1] + [order.add(ts[i - 1], ts[i + 1])] + ts[i + 2:]
            return "R1", new, (order.neg(order.one), order.neg(order.one))
        if order.is_unit(t):
            ti = order.unit_inverse(t)
            new = ts[: i - 1] + [order.sub(ts[i - 1], ti)]
            mu, nu = t, ti
            for s in [order.sub(ts[i + 1], ti)] + ts[i + 2:]:
                new.append(order.mul(order.mul(mu, s), order.unit_inverse(nu)))
                mu, nu = nu, mu
            return "R7", new, (mu, nu)
    return None


def to_canonical(order: OrderStruct, word: Word) -> Tuple[Word, Pair]:
    """E(t_1)...E(t_l) and [p, q] with eval(word) = E(t_1)...E(t_l) [p, q].

    Interior t_i are neither 0 nor units. Making t_1 non-zero needs a
    conjugation, which only `reduce_relation` applies.
    """
    ts, right = _expand(order, word)
    while (step := _eliminate_once(order, ts)) is not None:
        _, ts, delta = step
        right = _pair_mul(order, delta, right)
    return e_word(ts), right


def _b_values(order: OrderStruct, ts: Sequence[Vec]) -> List[Vec]:
    if not ts:
        return []
    a, b = ts[0], order.one
    out = [b]
    for t in ts[1:]:
        # b_{i+1} = a_i, a_{i+1} = a_i t_{i+1} - b_i
        a, b = order.sub(order.mul(a, t), b), a
        out.append(b)
    return out


def b_sequence(order: OrderStruct, word: Word) -> List[Vec]:
    """(1,2)-entries of the prefixes E(t_1)...E(t_i)."""
    if any(not letter.is_e or letter.inverse for letter in word):
        raise DomainError("b_sequence needs a word of plain E-letters")
    return _b_values(order, [letter.params[0] for letter in word])


def measure(order: OrderStruct, ts: Sequence[Vec]) -> Tuple[int, int]:
    """(m, h): largest |b_i|^2 and the last (1-based) index attaining it."""
    norms = [order.norm(b) for b in _b_values(order, ts)]
    if not norms:
        return 0, 0
    m = max(norms)
    return m, max(i for i, n in enumerate(norms, 1) if n == m)


# ─────────────────────────────────────────────────────────────
# Relation reduction
# ─────────────────────────────────────────────────────────────

def reduce_relation(
    order: OrderStruct,
    word: Word,
    on_step: Optional[Callable[[ReductionStep], None]] = None,
) -> ReductionTrace:
    """Reduce a relation to the empty one by canonicalization and norm descent.

    The state is a relation E(t_1)...E(t_l) = D. After canonicalization the
    largest |b_h| sits over t = t_h with |t|^2 in {2, 3}; the matching
    (alpha)-relator is substituted for E(t), which lowers (m, h).
    """
    if not order.descriptor.is_definite:
        raise DomainError(f"{order.label}: relation reduction needs a definite order")
    value = eval_word(order, word)
    if not value.is_diagonal():
        raise DomainError(f"{order.label}: not a relation, the word evaluates to a non-diagonal matrix")

    trace = ReductionTrace(order_name=order.label, relation_value=(value.a, value.d))
    ts, right = _expand(order, word)
    dv = _pair_mul(order, (value.a, value.d), _pair_inv(order, right))

    def record(rule: str, before: Sequence[Vec], after: Sequence[Vec], source: Optional[str] = None, **measures) -> None:
        if eval_word(order, e_word(after)) != diagonal(order, *dv):
            raise InvariantViolation(f"{order.label}: evaluation changed at step {len(trace.steps)} ({rule})")
        step = ReductionStep(rule=rule, before=tuple(before), after=tuple(after), diag=dv, source=source, **measures)
        trace.steps.append(step)
        if on_step is not None:
            on_step(step)

    record("expand", [letter.params[0] for letter in word if letter.is_e], ts, source=format_word(order, word))

    for _ in range(MAX_REDUCTION_STEPS):
        eliminated = _eliminate_once(order, ts)
        if eliminated is not None:
            rule, new, delta = eliminated
            dv = _pair_mul(order, dv, _pair_inv(order, delta))
            record(rule, ts, new)
            ts = new
            continue

        length = len(ts)
        if length == 0:
            if dv != (order.one, order.one):
                raise InvariantViolation(f"{order.label}: empty relation with diagonal {dv}")
            trace.final_diag = dv
            log.debug("%s: reduced in %d steps (%d descents)", order.label, len(trace.steps), len(trace.descent_steps))
            return trace
        if length == 1:
            raise InvariantViolation(f"{order.label}: relation of length 1 cannot be diagonal")
        if length == 2:
            if any(ts[0]) or any(ts[1]):
                raise InvariantViolation(f"{order.label}: length-2 relation with non-zero entries")
            # E(0)^2 = -I
            dv = _pair_neg(order, dv)
            record("R4", ts, [])
            ts = []
            continue

        if not any(ts[0]):
            # conjugate by E(t_1): E(t_2)...E(t_l) E(a^-1 t_1 b) = [b, a]
            alpha, beta = dv
            new = ts[1:] + [order.mul(order.mul(order.unit_inverse(alpha), ts[0]), beta)]
            dv = (beta, alpha)
            record("rotate", ts, new)
            ts = new
            continue

        m, h = measure(order, ts)
        if h < 2 or h >= length:
            raise InvariantViolation(f"{order.label}: maximum of |b_i| at position {h} of {length}")
        t = ts[h - 1]
        n = order.norm(t)
        if n not in (2, 3):
            raise DomainError(
                f"{order.label}: descent obstruction, |t_{h}|^2 = {n} (the input is not a relation over a qualifying order)"
            )
        tb = order.conj(t)
        middle = [order.neg(t)] if n == 2 else [order.neg(t), order.neg(tb), order.neg(t)]
        new = ts[: h - 2] + [order.sub(ts[h - 2], tb)] + middle + [order.sub(ts[h], tb)] + ts[h + 1:]
        dv = _pair_neg(order, dv)
        m_after, h_after = measure(order, new)
        if (m_after, h_after) >= (m, h):
            raise InvariantViolation(f"{order.label}: measure did not drop: {(m, h)} -> {(m_after, h_after)}")
        record(f"norm-{n}", ts, new, m=m, h=h, m_after=m_after, h_after=h_after)
        ts = new

    raise InvariantViolation(f"{order.label}: reduction did not finish within {MAX_REDUCTION_STEPS} steps")


# ─────────────────────────────────────────────────────────────
# Relation corpora
# ─────────────────────────────────────────────────────────────

def _random_relator(order: OrderStruct, rng: Random, units: Sequence[Vec], alpha_params: Sequence[Vec]) -> Word:
    if alpha_params and rng.random() < 0.4:
        lhs, rhs = alpha_relator(order, rng.choice(alpha_params))
    else:
        name = rng.choice(sorted(RELATIONS))
        lhs, rhs = RELATIONS[name][0](order, *_relation_args(name, order, rng, units))
    return lhs + inverse_word(rhs)


def relation_corpus(
    order: OrderStruct,
    size: Optional[int] = None,
    max_length: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[Word]:
    """Products of conjugated relators; every word evaluates to I."""
    size = CORPUS_SIZE if size is None else size
    max_length = CORPUS_MAX_LENGTH if max_length is None else max_length
    seed = SEED if seed is None else seed
    if max_length < 4:
        raise DomainError(f"corpus words need max_length >= 4, got {max_length}")
    units = units_service.unit_group(order).elements
    alpha_params = units_service.short_vector_coords(order, 2) + units_service.short_vector_coords(order, 3)
    rng = Random(seed)
    one = identity(order)

    corpus: List[Word] = []
    while len(corpus) < size:
        word: Word = ()
        for _ in range(4 * max_length):
            relator = _random_relator(order, rng, units, alpha_params)
            room = (max_length - len(word) - len(relator)) // 2
            if room < 0:
                if word:
                    break
                continue
            g = random_word(order, rng.randint(0, min(3, room)), rng)
            word = word + g + relator + inverse_word(g)
            if rng.random() < 0.3:
                break
        if not word:
            continue
        if eval_word(order, word) != one:
            raise InvariantViolation(f"{order.label}: corpus word does not evaluate to I: {format_word(order, word)}")
        corpus.append(word)
    return corpus
