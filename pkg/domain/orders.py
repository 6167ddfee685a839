# domain/orders.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from domain.algebra import AlgebraDescriptor, AlgebraElement
from domain.errors import DomainError

__all__ = ["Vec", "Lattice", "OrderStruct"]

# coordinates of an order element in the order's own basis
Vec = Tuple[int, ...]


@dataclass(frozen=True)
class Lattice:
    """Z-lattice in an algebra, stored canonically.

    `columns` are integer vectors in algebra coordinates, scaled by
    `denominator`, in Hermite normal form; equal lattices compare equal.
    """

    descriptor: AlgebraDescriptor
    denominator: int
    columns: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.columns)

    @property
    def basis(self) -> List[AlgebraElement]:
        d = Fraction(1, self.denominator)
        return [AlgebraElement(self.descriptor, tuple(c * d for c in col)) for col in self.columns]

    def is_full_rank(self) -> bool:
        return self.rank == self.descriptor.dimension


@dataclass(frozen=True)
class OrderStruct:
    """A full-rank order with integer structure constants in its own basis.

    Order elements are handled as integer coordinate tuples (Vec); all of the
    arithmetic below stays in Z. `to_coords` converts algebra coordinates to
    order coordinates (the inverse of the basis matrix).
    """

    descriptor: AlgebraDescriptor
    basis: Tuple[AlgebraElement, ...]
    name: str = field(default="", compare=False)
    lattice: Optional[Lattice] = field(default=None, compare=False, repr=False)
    structure: Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...] = field(default=(), compare=False, repr=False)
    to_coords: Tuple[Tuple[Fraction, ...], ...] = field(default=(), compare=False, repr=False)
    traces: Vec = field(default=(), compare=False, repr=False)
    gram2: Tuple[Vec, ...] = field(default=(), compare=False, repr=False)
    one: Vec = field(default=(), compare=False, repr=False)

    # ---- shape ----
    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def zero(self) -> Vec:
        return (0,) * self.rank

    def basis_vector(self, index: int) -> Vec:
        v = [0] * self.rank
        v[index] = 1
        return tuple(v)

    @property
    def label(self) -> str:
        return self.name or f"order in {self.descriptor}"

    # ---- arithmetic on coordinate tuples ----
    def add(self, x: Vec, y: Vec) -> Vec:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Vec, y: Vec) -> Vec:
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x: Vec) -> Vec:
        return tuple(-a for a in x)

    def scale(self, k: int, x: Vec) -> Vec:
        return tuple(k * a for a in x)

    def mul(self, x: Vec, y: Vec) -> Vec:
        out = [0] * self.rank
        structure = self.structure
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = structure[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = xi * yj
                for k, c in row[j]:
                    out[k] += s * c
        return tuple(out)

    def trace(self, x: Vec) -> int:
        return sum(a * t for a, t in zip(x, self.traces))

    def norm(self, x: Vec) -> int:
        g = self.gram2
        total = 0
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = g[i]
            total += xi * sum(row[j] * xj for j, xj in enumerate(x) if xj)
        return total // 2

    def conj(self, x: Vec) -> Vec:
        # conj(x) = Tr(x) * 1 - x
        return self.sub(self.scale(self.trace(x), self.one), x)

    def is_unit(self, x: Vec) -> bool:
        return self.norm(x) == 1

    def unit_inverse(self, u: Vec) -> Vec:
        if self.norm(u) != 1:
            raise DomainError(f"{self.format(u)} is not a unit of {self.label}")
        return self.conj(u)

    def power(self, x: Vec, k: int) -> Vec:
        out = self.one
        for _ in range(k):
            out = self.mul(out, x)
        return out

    # ---- conversions ----
    def element(self, x: Sequence[int]) -> AlgebraElement:
        total = [Fraction(0)] * self.descriptor.dimension
        for a, b in zip(x, self.basis):
            if a:
                for k, c in enumerate(b.coords):
                    total[k] += a * c
        return AlgebraElement(self.descriptor, tuple(total))

    def rational_coords(self, a: AlgebraElement) -> Tuple[Fraction, ...]:
        if a.descriptor != self.descriptor:
            raise DomainError(f"descriptor mismatch: {a.descriptor.spec} vs {self.descriptor.spec}")
        return tuple(sum((m * c for m, c in zip(row, a.coords)), Fraction(0)) for row in self.to_coords)

    def contains_element(self, a: AlgebraElement) -> bool:
        return all(c.denominator == 1 for c in self.rational_coords(a))

    def coords(self, a: AlgebraElement) -> Vec:
        rc = self.rational_coords(a)
        if any(c.denominator != 1 for c in rc):
            raise DomainError(f"{a} does not lie in {self.label}")
        return tuple(int(c) for c in rc)

    def format(self, x: Vec) -> str:
        return str(self.element(x))

    def coord_table(self) -> Dict[str, List[str]]:
        return {str(i): [str(c) for c in b.coords] for i, b in enumerate(self.basis)}
