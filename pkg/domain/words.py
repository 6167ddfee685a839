# domain/words.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from domain.orders import Vec

__all__ = ["E", "DIAG", "Letter", "Word", "Matrix2", "ReductionStep", "ReductionTrace"]

E = "E"
DIAG = "Diag"


@dataclass(frozen=True)
class Letter:
    """E(x) or Diag(mu, nu), possibly as a formal inverse.

    Parameters are coordinate vectors in the ambient order. D(mu) is stored
    as Diag(mu, mu^-1).
    """

    kind: str
    params: Tuple[Vec, ...]
    inverse: bool = False

    def __post_init__(self):
        expected = 1 if self.kind == E else 2
        if self.kind not in (E, DIAG) or len(self.params) != expected:
            raise ValueError(f"malformed letter: {self.kind}{self.params}")

    @property
    def is_e(self) -> bool:
        return self.kind == E

    def inverted(self) -> "Letter":
        return Letter(self.kind, self.params, not self.inverse)


Word = Tuple[Letter, ...]


@dataclass(frozen=True)
class Matrix2:
    """2x2 matrix over an order, entries as coordinate vectors."""

    a: Vec
    b: Vec
    c: Vec
    d: Vec

    @property
    def entries(self) -> Tuple[Vec, Vec, Vec, Vec]:
        return (self.a, self.b, self.c, self.d)

    def is_diagonal(self) -> bool:
        return not any(self.b) and not any(self.c)


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    before: Tuple[Vec, ...]
    after: Tuple[Vec, ...]
    m: Optional[int] = None
    h: Optional[int] = None
    # measure of the word produced by a descent substitution, before re-canonicalization
    m_after: Optional[int] = None
    h_after: Optional[int] = None
    # right-hand diagonal of the relation after this step
    diag: Optional[Tuple[Vec, Vec]] = None
    # full input word, letters and markers included; set on the expand step
    source: Optional[str] = None


@dataclass
class ReductionTrace:
    order_name: str
    relation_value: Tuple[Vec, Vec]
    steps: List[ReductionStep] = field(default_factory=list)
    final_diag: Optional[Tuple[Vec, Vec]] = None

    @property
    def descent_steps(self) -> List[ReductionStep]:
        return [s for s in self.steps if s.rule.startswith("norm-")]

    @property
    def terminated(self) -> bool:
        return self.final_diag is not None
