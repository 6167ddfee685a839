# domain/algebra.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, List, Tuple, Union

from sympy import factorint

from domain.errors import DivisionByZero, DomainError, InvariantViolation

__all__ = [
    "RATIONALS",
    "QUADRATIC",
    "QUATERNION",
    "AlgebraDescriptor",
    "AlgebraElement",
    "rationals",
    "imaginary_quadratic",
    "quaternion_algebra",
    "descriptor_from_name",
    "is_squarefree",
    "squarefree_decomposition",
    "multiply",
    "conjugate",
    "reduced_norm",
    "reduced_trace",
    "invert",
    "trace_form",
    "format_rational",
]

RATIONALS = "rationals"
QUADRATIC = "quadratic"
QUATERNION = "quaternion"

Rational = Union[int, Fraction]
# e_a * e_b = coefficient * e_index
BasisProduct = Tuple[int, int]


# ──────────────────────────────────────────────
# Integer helpers
# ──────────────────────────────────────────────
def is_squarefree(n: int) -> bool:
    return n > 0 and all(e == 1 for e in factorint(n).values())


def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """Return (f, d0) with n = f**2 * d0 and d0 square-free."""
    if n <= 0:
        raise DomainError(f"expected a positive integer, got {n}")
    f, d0 = 1, 1
    for p, e in factorint(n).items():
        f *= p ** (e // 2)
        if e % 2:
            d0 *= p
    return f, d0


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ──────────────────────────────────────────────
# Multiplication tables
# ──────────────────────────────────────────────
@lru_cache(maxsize=None)
def _multiplication_table(kind: str, params: Tuple[int, ...]) -> Tuple[Tuple[BasisProduct, ...], ...]:
    if kind == RATIONALS:
        return (((1, 0),),)
    if kind == QUADRATIC:
        (d,) = params
        # basis (1, w) with w^2 = -d
        return (
            ((1, 0), (1, 1)),
            ((1, 1), (-d, 0)),
        )
    u, v = params
    # basis (1, i, j, k): i^2 = u, j^2 = v, ij = k = -ji
    return (
        ((1, 0), (1, 1), (1, 2), (1, 3)),
        ((1, 1), (u, 0), (1, 3), (u, 2)),
        ((1, 2), (-1, 3), (v, 0), (-v, 1)),
        ((1, 3), (-u, 2), (v, 1), (-u * v, 0)),
    )


def _check_table(descriptor: "AlgebraDescriptor") -> None:
    table = descriptor.table
    n = descriptor.dimension
    for a in range(n):
        if table[0][a] != (1, a) or table[a][0] != (1, a):
            raise InvariantViolation(f"{descriptor.spec}: basis element 1 is not neutral")
    for a, b, c in product(range(n), repeat=3):
        c1, k1 = table[a][b]
        c2, k2 = table[k1][c]
        c3, k3 = table[b][c]
        c4, k4 = table[a][k3]
        if (c1 * c2, k2) != (c3 * c4, k4):
            raise InvariantViolation(
                f"{descriptor.spec}: multiplication table is not associative at {(a, b, c)}"
            )
    if descriptor.kind == QUATERNION:
        u, v = descriptor.params
        if table[1][1] != (u, 0) or table[2][2] != (v, 0):
            raise InvariantViolation(f"{descriptor.spec}: i^2 = u, j^2 = v fails")
        if table[1][2] != (1, 3) or table[2][1] != (-1, 3):
            raise InvariantViolation(f"{descriptor.spec}: ij = k = -ji fails")


# ──────────────────────────────────────────────
# Descriptor
# ──────────────────────────────────────────────
@dataclass(frozen=True)
class AlgebraDescriptor:
    """One of Q, Q(sqrt(-d)) or the definite quaternion algebra (u, v / Q)."""

    kind: str
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        params = tuple(int(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if self.kind == RATIONALS:
            if params:
                raise DomainError("Q takes no parameters")
        elif self.kind == QUADRATIC:
            if len(params) != 1 or not is_squarefree(params[0]):
                raise DomainError(f"Q(sqrt(-d)) needs a positive square-free d, got {params}")
        elif self.kind == QUATERNION:
            if len(params) != 2:
                raise DomainError(f"quaternion algebra needs (u, v), got {params}")
            if params[0] >= 0 or params[1] >= 0:
                raise DomainError(
                    f"quaternion algebra ({params[0]},{params[1]}/Q) is not totally definite; "
                    "its orders have infinite unit groups and are not supported"
                )
        else:
            raise DomainError(f"unknown algebra kind: {self.kind!r}")
        _check_table(self)

    # ---- shape ----
    @property
    def dimension(self) -> int:
        return {RATIONALS: 1, QUADRATIC: 2, QUATERNION: 4}[self.kind]

    @property
    def labels(self) -> Tuple[str, ...]:
        if self.kind == RATIONALS:
            return ("1",)
        if self.kind == QUADRATIC:
            return ("1", f"sqrt(-{self.params[0]})")
        return ("1", "i", "j", "k")

    @property
    def table(self) -> Tuple[Tuple[BasisProduct, ...], ...]:
        return _multiplication_table(self.kind, self.params)

    @property
    def basis_norms(self) -> Tuple[int, ...]:
        """N(e_a) for each basis element; the norm form is diagonal in this basis."""
        if self.kind == RATIONALS:
            return (1,)
        if self.kind == QUADRATIC:
            return (1, self.params[0])
        u, v = self.params
        return (1, -u, -v, u * v)

    @property
    def is_commutative(self) -> bool:
        return self.kind != QUATERNION

    @property
    def is_definite(self) -> bool:
        # indefinite parameters are refused at construction
        return True

    @property
    def spec(self) -> str:
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == QUADRATIC:
            return f"Qi:{self.params[0]}"
        return f"quat:{self.params[0]},{self.params[1]}"

    def __str__(self) -> str:
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == QUADRATIC:
            return f"Q(sqrt(-{self.params[0]}))"
        return f"({self.params[0]},{self.params[1]}/Q)"

    # ---- element constructors ----
    def element(self, *coords: Rational) -> "AlgebraElement":
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        return AlgebraElement(self, tuple(Fraction(c) for c in coords))

    def scalar(self, r: Rational) -> "AlgebraElement":
        return self.element(*([Fraction(r)] + [Fraction(0)] * (self.dimension - 1)))

    def one(self) -> "AlgebraElement":
        return self.scalar(1)

    def zero(self) -> "AlgebraElement":
        return self.scalar(0)

    def basis_element(self, index: int) -> "AlgebraElement":
        coords = [0] * self.dimension
        coords[index] = 1
        return self.element(*coords)


def rationals() -> AlgebraDescriptor:
    return AlgebraDescriptor(RATIONALS)


def imaginary_quadratic(d: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(QUADRATIC, (d,))


def quaternion_algebra(u: int, v: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(QUATERNION, (u, v))


_NAMED = {
    "Q": (RATIONALS, ()),
    "H2": (QUATERNION, (-1, -1)),
    "H3": (QUATERNION, (-1, -3)),
    "H5": (QUATERNION, (-2, -5)),
}


def descriptor_from_name(name: str) -> AlgebraDescriptor:
    """Named algebras used by the exceptional-component catalog."""
    if name in _NAMED:
        kind, params = _NAMED[name]
        return AlgebraDescriptor(kind, params)
    raise DomainError(f"unknown algebra name: {name!r}")


# ──────────────────────────────────────────────
# Elements
# ──────────────────────────────────────────────
@dataclass(frozen=True)
class AlgebraElement:
    descriptor: AlgebraDescriptor
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != self.descriptor.dimension:
            raise DomainError(
                f"{self.descriptor.spec} expects {self.descriptor.dimension} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    def _same(self, other: "AlgebraElement") -> None:
        if other.descriptor != self.descriptor:
            raise DomainError(
                f"descriptor mismatch: {self.descriptor.spec} vs {other.descriptor.spec}"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            other = self.descriptor.scalar(other)
        self._same(other)
        return AlgebraElement(self.descriptor, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.descriptor, tuple(-a for a in self.coords))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            other = self.descriptor.scalar(other)
        return self + (-other)

    def __rsub__(self, other: Rational) -> "AlgebraElement":
        return self.descriptor.scalar(other) - self

    def __mul__(self, other: Union["AlgebraElement", Rational]) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            r = Fraction(other)
            return AlgebraElement(self.descriptor, tuple(a * r for a in self.coords))
        self._same(other)
        table = self.descriptor.table
        out = [Fraction(0)] * self.descriptor.dimension
        for a, x in enumerate(self.coords):
            if not x:
                continue
            row = table[a]
            for b, y in enumerate(other.coords):
                if not y:
                    continue
                coef, k = row[b]
                out[k] += coef * x * y
        return AlgebraElement(self.descriptor, tuple(out))

    def __rmul__(self, other: Rational) -> "AlgebraElement":
        return self * other

    def __truediv__(self, other: Union["AlgebraElement", Rational]) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return self * other.inverse()
        if other == 0:
            raise DivisionByZero("division by zero")
        return self * (Fraction(1) / Fraction(other))

    # ---- structure ----
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_scalar(self) -> bool:
        return not any(self.coords[1:])

    def conjugate(self) -> "AlgebraElement":
        return AlgebraElement(self.descriptor, (self.coords[0],) + tuple(-a for a in self.coords[1:]))

    def norm(self) -> Fraction:
        return sum((c * c * n for c, n in zip(self.coords, self.descriptor.basis_norms)), Fraction(0))

    def trace(self) -> Fraction:
        # x + conj(x), read as a rational
        return 2 * self.coords[0]

    def inverse(self) -> "AlgebraElement":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("cannot invert 0")
        return self.conjugate() * (Fraction(1) / n)

    def __str__(self) -> str:
        parts: List[str] = []
        for c, label in zip(self.coords, self.descriptor.labels):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if label == "1":
                body = format_rational(mag)
            elif mag == 1:
                body = label
            else:
                body = f"{format_rational(mag)}*{label}"
            parts.append(f"{sign} {body}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


# ─── Public API ───
def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def conjugate(x: AlgebraElement) -> AlgebraElement:
    return x.conjugate()


def reduced_norm(x: AlgebraElement) -> Fraction:
    return x.norm()


def reduced_trace(x: AlgebraElement) -> Fraction:
    return x.trace()


def invert(x: AlgebraElement) -> AlgebraElement:
    return x.inverse()


def trace_form(x: AlgebraElement, y: AlgebraElement) -> Fraction:
    """Bilinear form of the norm: (N(x+y) - N(x) - N(y)) / 2."""
    return ((x + y).norm() - x.norm() - y.norm()) / 2


def sum_elements(descriptor: AlgebraDescriptor, items: Iterable[AlgebraElement]) -> AlgebraElement:
    total = descriptor.zero()
    for item in items:
        total = total + item
    return total
