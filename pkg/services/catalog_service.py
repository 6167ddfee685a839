# services/catalog_service.py
"""Builtin finite groups, the ten forbidden quotients and their presentations.

Each forbidden group is built as a concrete model (matrices over a prime
field, quaternion units, semidirect products) and then checked against its
presentation: every relation holds for the chosen generator images, the
images generate, and the order is the stated one.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from domain.errors import DomainError, SpecParseError
from domain.models import FiniteGroupTable
from services import group_service as groups

log = logging.getLogger(__name__)

__all__ = [
    "FORBIDDEN",
    "PRESENTATIONS",
    "CatalogEntry",
    "parse_presentation",
    "evaluate",
    "relations_hold",
    "presentation_witness",
    "build_group",
    "build_model",
    "catalog_entry",
    "recognizer",
    "central_product_check",
]

FORBIDDEN = (
    "D8", "S3", "G16_6", "G16_13", "Q8xC3", "SL(2,3)",
    "G32_50", "G96_202", "G240_90", "G384_618",
)

_Q8 = "i^4 = 1, i^2 = j^2, i^j = i^-1"

PRESENTATIONS: Dict[str, str] = {
    "D8": "r^4 = s^2 = 1, r^s = r^-1",
    "S3": "r^3 = s^2 = 1, r^s = r^-1",
    "Q8": _Q8,
    "Q8xC3": f"{_Q8}, c^3 = 1, (i,c) = (j,c) = 1",
    "SL(2,3)": f"{_Q8}, b^3 = 1, i^b = j, j^b = ij",
    "G16_6": "a^8 = b^2 = 1, a^b = a^5",
    "G16_13": "a^4 = b^2 = c^2 = 1 = (a,b) = (a,c), b^c = a^2b",
    "G32_50": "i^4 = 1, i^2 = j^2, i^j = i^-1, a^2 = 1, (i,a) = (j,a) = 1, b^2 = 1, "
              "i^b = i^-1, j^b = j^-1, a^b = i^2a",
    "G96_202": "i^4=1, i^2=j^2, i^j=i^-1, b^3=1, i^b=j, j^b=ij, t^2=1, (i,t)=(j,t)=(b,t)=1, "
               "a^2=1, (i,a)=(j,a)=(b,a)=1, t^a=i^2t",
    "G240_90": "x^3=y^5=z^2=1, (x,z)=(y,z)=1, (xy)^2=z, a^2=1, (z,a)=1, x^a=x^2, y^a=(xy^3)^2",
    "G384_618": "i1^4=1, i1^2=j1^2, i1^j1=i1^-1, i2^4=1, i2^2=j2^2, i2^j2=i2^-1, "
                "(i1,i2)=(i1,j2)=(j1,i2)=(j1,j2)=1, a^6=1, "
                "i1^a=j2^-1, j1^a=(i2j2)^-1, i2^a=j1^-1, j2^a=(i1j1)^-1",
}

ORDERS = {
    "D8": 8, "S3": 6, "Q8": 8, "Q8xC3": 24, "SL(2,3)": 24, "G16_6": 16, "G16_13": 16,
    "G32_50": 32, "G96_202": 96, "G240_90": 240, "G384_618": 384,
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    order: int
    presentation: str
    images: Dict[str, int]


# ─────────────────────────────────────────────────────────────
# Presentations
# ─────────────────────────────────────────────────────────────

_TOKEN = re.compile(r"\s*(?:(?P<name>[a-z][0-9]*)|(?P<int>-?\d+)|(?P<op>[\^(),=]))")

# AST nodes: ("one",) ("gen", name) ("mul", [nodes]) ("pow", node, k)
#            ("conj", node, node) ("comm", node, node)


class _PresentationParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise SpecParseError("unexpected character in presentation", text, pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, value: Optional[str] = None) -> Tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise SpecParseError("unexpected end of presentation", self.text, len(self.text))
        if value is not None and tok[1] != value:
            raise SpecParseError(f"expected {value!r}", self.text, tok[2])
        self.i += 1
        return tok

    def relations(self) -> List[List[tuple]]:
        out = [self.chain()]
        while self.peek() is not None:
            self.take(",")
            out.append(self.chain())
        return out

    def chain(self) -> List[tuple]:
        parts = [self.word()]
        while self.peek() is not None and self.peek()[1] == "=":
            self.take("=")
            parts.append(self.word())
        if len(parts) < 2:
            tok = self.peek()
            raise SpecParseError("relation needs '='", self.text, tok[2] if tok else len(self.text))
        return parts

    def word(self) -> tuple:
        factors = [self.factor()]
        while self.peek() is not None and (self.peek()[0] == "name" or self.peek()[1] == "("
                                           or (self.peek()[0] == "int" and self.peek()[1] == "1")):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else ("mul", factors)

    def factor(self) -> tuple:
        node = self.atom()
        while self.peek() is not None and self.peek()[1] == "^":
            self.take("^")
            tok = self.take()
            if tok[0] == "int":
                node = ("pow", node, int(tok[1]))
            elif tok[0] == "name":
                node = ("conj", node, ("gen", tok[1]))
            else:
                raise SpecParseError("exponent must be an integer or a generator", self.text, tok[2])
        return node

    def atom(self) -> tuple:
        tok = self.take()
        if tok[0] == "name":
            return ("gen", tok[1])
        if tok[0] == "int":
            if tok[1] != "1":
                raise SpecParseError("only 1 may stand alone", self.text, tok[2])
            return ("one",)
        if tok[1] == "(":
            first = self.word()
            if self.peek() is not None and self.peek()[1] == ",":
                self.take(",")
                second = self.word()
                self.take(")")
                return ("comm", first, second)
            self.take(")")
            return first
        raise SpecParseError(f"unexpected {tok[1]!r}", self.text, tok[2])


@lru_cache(maxsize=None)
def _parsed(text: str) -> Tuple[Tuple[tuple, ...], ...]:
    return tuple(tuple(r) for r in _PresentationParser(text).relations())


def parse_presentation(text: str) -> List[List[tuple]]:
    """Relations as chains of expression trees; `a = b = 1` is one chain."""
    return [list(r) for r in _parsed(text)]


def _names(node: tuple, out: List[str]) -> None:
    kind = node[0]
    if kind == "gen":
        if node[1] not in out:
            out.append(node[1])
    elif kind == "mul":
        for f in node[1]:
            _names(f, out)
    elif kind == "pow":
        _names(node[1], out)
    elif kind in ("conj", "comm"):
        _names(node[1], out)
        _names(node[2], out)


def generator_names(text: str) -> List[str]:
    out: List[str] = []
    for chain in _parsed(text):
        for node in chain:
            _names(node, out)
    return out


def evaluate(G: FiniteGroupTable, node: tuple, images: Dict[str, int]) -> int:
    t = G.table
    kind = node[0]
    if kind == "one":
        return G.identity
    if kind == "gen":
        return images[node[1]]
    if kind == "mul":
        out = G.identity
        for f in node[1]:
            out = t[out][evaluate(G, f, images)]
        return out
    if kind == "pow":
        return G.power(evaluate(G, node[1], images), node[2])
    inv = G.inverses
    x = evaluate(G, node[1], images)
    y = evaluate(G, node[2], images)
    if kind == "conj":
        return t[t[inv[y]][x]][y]
    # (x, y) = x^-1 y^-1 x y
    return t[t[inv[x]][inv[y]]][t[x][y]]


def _chain_holds(G: FiniteGroupTable, chain: Sequence[tuple], images: Dict[str, int]) -> bool:
    values = {evaluate(G, node, images) for node in chain}
    return len(values) == 1


def relations_hold(G: FiniteGroupTable, text: str, images: Dict[str, int]) -> bool:
    return all(_chain_holds(G, chain, images) for chain in _parsed(text))


def _power_bounds(text: str) -> Dict[str, int]:
    # x^k = 1 bounds the order of x
    bounds: Dict[str, int] = {}
    for chain in _parsed(text):
        if not any(node == ("one",) for node in chain):
            continue
        for node in chain:
            if node[0] == "pow" and node[1][0] == "gen" and node[2] > 0:
                bounds[node[1][1]] = node[2]
    return bounds


def presentation_witness(
    G: FiniteGroupTable,
    text: str,
    hints: Optional[Dict[str, int]] = None,
    orders: Optional[Dict[str, int]] = None,
) -> Optional[Dict[str, int]]:
    """Generator images in G that satisfy every relation and generate G.

    Relations are checked as soon as all of their generators are assigned.
    `hints` pins images; `orders` gives exact element orders.
    """
    names = generator_names(text)
    hints = hints or {}
    orders = orders or {}
    bounds = _power_bounds(text)
    chains = _parsed(text)
    position = {n: k for k, n in enumerate(names)}
    ready: Dict[int, List[Sequence[tuple]]] = {k: [] for k in range(len(names))}
    for chain in chains:
        # a = b = 1 splits into a = 1 and b = 1 so each part is tested early
        if ("one",) in chain:
            parts = [(node, ("one",)) for node in chain if node != ("one",)]
        else:
            parts = list(zip(chain, chain[1:]))
        for part in parts:
            used: List[str] = []
            for node in part:
                _names(node, used)
            ready[max((position[n] for n in used), default=0)].append(part)

    element_orders = [G.element_order(g) for g in range(G.n)]

    def candidates(name: str) -> List[int]:
        if name in hints:
            return [hints[name]]
        if name in orders:
            return [g for g in range(G.n) if element_orders[g] == orders[name]]
        if name in bounds:
            return [g for g in range(G.n) if bounds[name] % element_orders[g] == 0]
        return list(range(G.n))

    pools = [candidates(n) for n in names]
    images: Dict[str, int] = {}

    def search(k: int) -> Optional[Dict[str, int]]:
        if k == len(names):
            if len(groups.subgroup_closure(G, images.values())) == G.n:
                return dict(images)
            return None
        name = names[k]
        for g in pools[k]:
            images[name] = g
            if all(_chain_holds(G, chain, images) for chain in ready[k]):
                found = search(k + 1)
                if found is not None:
                    return found
        images.pop(name, None)
        return None

    return search(0)


# ─────────────────────────────────────────────────────────────
# Concrete models
# ─────────────────────────────────────────────────────────────

Mat = Tuple[int, int, int, int]


def _mat_mul(p: int) -> Callable[[Mat, Mat], Mat]:
    def mul(x: Mat, y: Mat) -> Mat:
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
    return mul


def _mat_inv(p: int, x: Mat) -> Mat:
    a, b, c, d = x
    det_inv = pow((a * d - b * c) % p, -1, p)
    return ((d * det_inv) % p, (-b * det_inv) % p, (-c * det_inv) % p, (a * det_inv) % p)


def _special_linear(p: int) -> List[Mat]:
    return [m for m in product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]


Quat = Tuple[int, int, int, int]


def _hamilton(x: Quat, y: Quat) -> Quat:
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


_Q_ONE, _Q_I, _Q_J = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)
_Q8_ELEMENTS = [tuple(s * (1 if k == t else 0) for t in range(4)) for k in range(4) for s in (1, -1)]


def _semidirect(sigma_inv: Callable[[Hashable, int], Hashable], mul_n: Callable, m: int):
    # (n1, e1)(n2, e2) = (n1 * sigma^(-e1)(n2), e1 + e2), so x^b = sigma(x)
    def mul(x, y):
        return (mul_n(x[0], sigma_inv(y[0], x[1])), (x[1] + y[1]) % m)
    return mul


def _table(label: str, elements: Sequence, mul: Callable, images: Dict[str, Hashable], name=str):
    G = groups.from_elements(list(elements), mul, label, name=name, provenance="model")
    index = {x: i for i, x in enumerate(elements)}
    return G, {k: index[v] for k, v in images.items()}


def _cyclic(n: int) -> FiniteGroupTable:
    G, _ = _table(f"C{n}", range(n), lambda a, b: (a + b) % n, {})
    return G


def _dihedral(order: int, label: str):
    n = order // 2
    elements = [(k, e) for e in range(2) for k in range(n)]
    mul = lambda x, y: ((x[0] + (-1) ** x[1] * y[0]) % n, (x[1] + y[1]) % 2)
    return _table(label, elements, mul, {"r": (1, 0), "s": (0, 1)})


def _q8():
    return _table("Q8", _Q8_ELEMENTS, _hamilton, {"i": _Q_I, "j": _Q_J})


def _q8_x_c3():
    elements = [(q, c) for q in _Q8_ELEMENTS for c in range(3)]
    mul = lambda x, y: (_hamilton(x[0], y[0]), (x[1] + y[1]) % 3)
    return _table("Q8xC3", elements, mul, {"i": (_Q_I, 0), "j": (_Q_J, 0), "c": (_Q_ONE, 1)})


_SL3_I: Mat = (0, 2, 1, 0)
_SL3_J: Mat = (1, 1, 1, 2)
_SL3_MINUS: Mat = (2, 0, 0, 2)


def _sl23():
    return _table("SL(2,3)", _special_linear(3), _mat_mul(3), {"i": _SL3_I, "j": _SL3_J})


def _c3_c4():
    elements = [(n, e) for e in range(4) for n in range(3)]
    mul = _semidirect(lambda n, e: (n * (-1) ** e) % 3, lambda a, b: (a + b) % 3, 4)
    return _table("C3:C4", elements, mul, {})


def _g16_6():
    elements = [(x, e) for e in range(2) for x in range(8)]
    mul = _semidirect(lambda x, e: (x * 5 ** e) % 8, lambda a, b: (a + b) % 8, 2)
    return _table("G16_6", elements, mul, {"a": (1, 0), "b": (0, 1)})


def _g16_13():
    def sigma(n, e):
        x, y = n
        return ((x + 2 * y * e) % 4, y)
    elements = [((x, y), e) for e in range(2) for y in range(2) for x in range(4)]
    mul = _semidirect(sigma, lambda a, b: ((a[0] + b[0]) % 4, (a[1] + b[1]) % 2), 2)
    return _table("G16_13", elements, mul, {"a": ((1, 0), 0), "b": ((0, 1), 0), "c": ((0, 0), 1)})


def _g32_50():
    # sigma(q, e) = (k q k^-1 * (-1)^e, e): i -> i^-1, j -> j^-1, a -> i^2 a
    def sigma(n, e):
        if not e:
            return n
        (a, b, c, d), s = n
        sign = -1 if s else 1
        return ((sign * a, -sign * b, -sign * c, sign * d), s)
    mul_n = lambda x, y: (_hamilton(x[0], y[0]), (x[1] + y[1]) % 2)
    elements = [((q, s), e) for e in range(2) for s in range(2) for q in _Q8_ELEMENTS]
    images = {"i": ((_Q_I, 0), 0), "j": ((_Q_J, 0), 0), "a": ((_Q_ONE, 1), 0), "b": ((_Q_ONE, 0), 1)}
    return _table("G32_50", elements, _semidirect(sigma, mul_n, 2), images)


def _g96_202():
    mul3 = _mat_mul(3)

    def sigma(n, e):
        x, s = n
        return (mul3(x, _SL3_MINUS) if (e % 2 and s) else x, s)
    mul_n = lambda x, y: (mul3(x[0], y[0]), (x[1] + y[1]) % 2)
    elements = [((x, s), e) for e in range(2) for s in range(2) for x in _special_linear(3)]
    images = {
        "i": ((_SL3_I, 0), 0),
        "j": ((_SL3_J, 0), 0),
        "t": (((1, 0, 0, 1), 1), 0),
        "a": (((1, 0, 0, 1), 0), 1),
    }
    return _table("G96_202", elements, _semidirect(sigma, mul_n, 2), images)


_SL5_M: Mat = (0, 1, 2, 0)


def _g240_90():
    mul5 = _mat_mul(5)
    m_inv = _mat_inv(5, _SL5_M)

    # sigma = conjugation by m; m^2 is scalar so sigma is an involution
    def sigma(x, e):
        return mul5(mul5(m_inv, x), _SL5_M) if e % 2 else x
    elements = [(x, e) for e in range(2) for x in _special_linear(5)]
    images = {"z": ((4, 0, 0, 4), 0), "a": ((1, 0, 0, 1), 1)}
    return _table("G240_90", elements, _semidirect(sigma, mul5, 2), images)


def _psi(q: Quat) -> Quat:
    # i -> -j, j -> -k, k -> i
    a, b, c, d = q
    return (a, d, -b, -c)


def _g384_618():
    def sigma_power(n, e):
        q1, q2 = n
        # sigma(q1, q2) = (psi(q2), psi(q1)); applied (-e mod 6) times
        for _ in range((-e) % 6):
            q1, q2 = _psi(q2), _psi(q1)
        return (q1, q2)
    mul_n = lambda x, y: (_hamilton(x[0], y[0]), _hamilton(x[1], y[1]))
    elements = [((q1, q2), e) for e in range(6) for q2 in _Q8_ELEMENTS for q1 in _Q8_ELEMENTS]
    images = {
        "i1": ((_Q_I, _Q_ONE), 0),
        "j1": ((_Q_J, _Q_ONE), 0),
        "i2": ((_Q_ONE, _Q_I), 0),
        "j2": ((_Q_ONE, _Q_J), 0),
        "a": ((_Q_ONE, _Q_ONE), 1),
    }
    return _table("G384_618", elements, _semidirect(sigma_power, mul_n, 6), images)


def _named_permutation_group(label: str, group) -> FiniteGroupTable:
    elements = sorted(group.generate(), key=lambda p: p.array_form)
    G = groups.from_elements(elements, lambda a, b: a * b, label, name=lambda p: str(p.cyclic_form))
    return FiniteGroupTable(G.table, G.names, label, "permutations")


def _sl25() -> FiniteGroupTable:
    G, _ = _table("SL(2,5)", _special_linear(5), _mat_mul(5), {})
    return G


_MODELS: Dict[str, Callable[[], Tuple[FiniteGroupTable, Dict[str, int]]]] = {
    "D8": lambda: _dihedral(8, "D8"),
    "S3": lambda: _dihedral(6, "S3"),
    "Q8": _q8,
    "Q8xC3": _q8_x_c3,
    "SL(2,3)": _sl23,
    "C3:C4": _c3_c4,
    "G16_6": _g16_6,
    "G16_13": _g16_13,
    "G32_50": _g32_50,
    "G96_202": _g96_202,
    "G240_90": _g240_90,
    "G384_618": _g384_618,
}


@lru_cache(maxsize=None)
def build_model(name: str) -> Tuple[FiniteGroupTable, Tuple[Tuple[str, int], ...]]:
    """Model of a named group plus generator images for its presentation.

    Images not fixed by the model are completed by a witness search, then the
    full presentation, generation and the order are verified.
    """
    if name not in _MODELS:
        raise DomainError(f"no model for {name!r}")
    G, images = _MODELS[name]()
    text = PRESENTATIONS.get(name)
    if text is not None:
        if set(images) != set(generator_names(text)):
            witness = presentation_witness(G, text, hints=images)
            if witness is None:
                raise DomainError(f"{name}: model admits no generators satisfying its presentation")
            images = witness
        if not relations_hold(G, text, images):
            raise DomainError(f"{name}: presentation relations fail in the model")
        if len(groups.subgroup_closure(G, images.values())) != G.n:
            raise DomainError(f"{name}: presentation generators do not generate the model")
        if G.n != ORDERS[name]:
            raise DomainError(f"{name}: model has order {G.n}, expected {ORDERS[name]}")
    groups.validate(G)
    log.debug("built %s (order %d)", name, G.n)
    return G, tuple(sorted(images.items()))


def catalog_entry(name: str) -> CatalogEntry:
    if name not in PRESENTATIONS:
        raise DomainError(f"{name!r} has no presentation in the catalog")
    G, images = build_model(name)
    return CatalogEntry(name, ORDERS[name], PRESENTATIONS[name], dict(images))


def recognizer(name: str) -> Callable[[FiniteGroupTable], bool]:
    """Test for 'isomorphic to the catalog group `name`' on groups of its order.

    A group Q with |Q| = |H| that contains images satisfying the presentation
    of H and generating Q is a quotient of H of the same order, hence H itself.
    """
    G, images = build_model(name)
    text = PRESENTATIONS[name]
    orders = {k: G.element_order(v) for k, v in images}

    def test(Q: FiniteGroupTable) -> bool:
        if Q.n != G.n:
            return False
        return presentation_witness(Q, text, orders=orders) is not None
    return test


def _direct_product(factors: Sequence[FiniteGroupTable], label: str) -> FiniteGroupTable:
    elements = list(product(*[range(F.n) for F in factors]))
    mul = lambda x, y: tuple(F.table[a][b] for F, a, b in zip(factors, x, y))
    return groups.from_elements(elements, mul, label, provenance="direct product")


_CYCLIC = re.compile(r"^C(\d+)$")
_DIHEDRAL = re.compile(r"^D(\d+)$")


@lru_cache(maxsize=None)
def build_group(name: str) -> FiniteGroupTable:
    """Builtin group by name: C<n>, D<2n>, S3, S4, A4, A5, Q8, C3:C4, SL(2,3),
    SL(2,5), the catalog groups G16_6 ... G384_618, and direct products AxB."""
    name = name.strip()
    if name in ("1", "C1"):
        return _cyclic(1)
    if name in _MODELS:
        return build_model(name)[0]
    m = _CYCLIC.match(name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise DomainError("C<n> needs n >= 1")
        return _cyclic(n)
    m = _DIHEDRAL.match(name)
    if m:
        order = int(m.group(1))
        if order < 2 or order % 2:
            raise DomainError(f"D<2n> needs an even order, got {order}")
        return _dihedral(order, name)[0]
    if name == "S4":
        return _named_permutation_group("S4", SymmetricGroup(4))
    if name == "A4":
        return _named_permutation_group("A4", AlternatingGroup(4))
    if name == "A5":
        return _named_permutation_group("A5", AlternatingGroup(5))
    if name == "SL(2,5)":
        return _sl25()
    if "x" in name:
        factors = [build_group(part) for part in name.split("x")]
        return _direct_product(factors, name)
    raise DomainError(f"unknown group: {name!r}")


def central_product_check(name: str) -> bool:
    """G16_13 is D8 o C4 and G32_50 is Q8 o D8 (central products)."""
    if name == "G16_13":
        D8, C4 = build_group("D8"), build_group("C4")
        P = _direct_product([D8, C4], "D8xC4")
        r2 = D8.power(_dihedral(8, "D8")[1]["r"], 2)
        z = (r2, 2)
    elif name == "G32_50":
        Q8, D8 = build_group("Q8"), build_group("D8")
        P = _direct_product([Q8, D8], "Q8xD8")
        minus = Q8.power(_q8()[1]["i"], 2)
        r2 = D8.power(_dihedral(8, "D8")[1]["r"], 2)
        z = (minus, r2)
    else:
        raise DomainError(f"no central product description for {name!r}")
    elements = list(product(*[range(F.n) for F in ([D8, C4] if name == "G16_13" else [Q8, D8])]))
    N = groups.subgroup_closure(P, [elements.index(z)])
    return groups.is_isomorphic(groups.quotient(P, N), build_group(name))
