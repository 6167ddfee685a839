# domain/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Dict, List, Optional, Tuple

from domain.orders import Lattice, OrderStruct, Vec

__all__ = [
    "FiniteAbelianInvariants",
    "FiniteGroupTable",
    "UnitGroup",
    "MSubgroupReport",
    "Ge2AbReport",
    "RankReport",
    "RelationSuiteReport",
    "AlphaReport",
    "HfaDecision",
    "OddOrderReport",
    "ExceptionalClassification",
    "ComponentFlags",
    "GrkResult",
    "FaProfile",
]


@dataclass(frozen=True)
class FiniteAbelianInvariants:
    """Z^free_rank x C_d1 x C_d2 x ... with d1 | d2 | ..., every d > 1."""

    torsion: Tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        torsion = tuple(sorted(int(d) for d in self.torsion if int(d) != 1))
        object.__setattr__(self, "torsion", torsion)
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {torsion}")

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        return prod(self.torsion) if self.is_finite else None

    @property
    def exponent(self) -> Optional[int]:
        if not self.is_finite:
            return None
        return self.torsion[-1] if self.torsion else 1

    @property
    def is_trivial(self) -> bool:
        return self.is_finite and not self.torsion

    def describe(self) -> str:
        parts = [f"C{d}" for d in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "1"


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given by its index multiplication table.

    Element 0 need not be the identity; `identity` and `inverses` are read off
    the table. Validation (associativity, inverses) lives in group_service.
    """

    table: Tuple[Tuple[int, ...], ...]
    names: Tuple[str, ...] = ()
    label: str = field(default="", compare=False)
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.table)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.table)

    @cached_property
    def identity(self) -> int:
        for e in range(self.n):
            if self.table[e][e] == e:
                return e
        raise ValueError("table has no identity element")

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        e = self.identity
        out = []
        for g in range(self.n):
            row = self.table[g]
            out.append(next(h for h in range(self.n) if row[h] == e))
        return tuple(out)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverses[g], -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][g]
        return out

    @cached_property
    def orders(self) -> Tuple[int, ...]:
        e = self.identity
        out = []
        for g in range(self.n):
            x, k = g, 1
            while x != e:
                x = self.table[x][g]
                k += 1
            out.append(k)
        return tuple(out)

    def element_order(self, g: int) -> int:
        return self.orders[g]

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.n) for b in range(a + 1, self.n))


@dataclass(frozen=True)
class UnitGroup:
    """U(O) as coordinate vectors of the order plus their multiplication table."""

    order: OrderStruct
    elements: Tuple[Vec, ...]
    group: FiniteGroupTable

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return self.elements.index(self.order.one)

    def index_of(self, x: Vec) -> int:
        return self.elements.index(tuple(x))


@dataclass(frozen=True)
class MSubgroupReport:
    order_name: str
    generators_type1: Tuple[Vec, ...]
    generators_type2: Tuple[Vec, ...]
    generators_type3: Tuple[Vec, ...]
    generators_type4: Tuple[Vec, ...]
    # HNF columns of M in order coordinates
    columns: Tuple[Vec, ...]
    lattice: Lattice
    loop_graph_stats: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Ge2AbReport:
    order_name: str
    o_mod_n: FiniteAbelianInvariants
    u_ab: FiniteAbelianInvariants
    total_order: int
    collapsed: bool
    certificate: str = ""


@dataclass(frozen=True)
class RankReport:
    order_name: str
    rank: int
    inv: int
    e2_ab: FiniteAbelianInvariants
    finite: bool
    # (a) .. (e), keyed by letter
    conditions: Dict[str, bool] = field(default_factory=dict)
    matched_builtin: Optional[str] = None


@dataclass
class RelationSuiteReport:
    order_name: str
    samples: int
    seed: int
    checked: Dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.checked.values())


@dataclass(frozen=True)
class AlphaReport:
    order_name: str
    counts: Dict[int, int]
    verified: int


@dataclass(frozen=True)
class HfaDecision:
    group: str
    hfa: bool
    cut: bool
    forbidden_witness: Optional[str]
    certificate: str
    cut_criterion: str = "g^j conjugate to g or g^-1 for all j coprime to ord(g)"

    # (T), HFR and FAb coincide with HFA for unit groups of integral group rings
    @property
    def fab(self) -> bool:
        return self.hfa

    @property
    def T(self) -> bool:
        return self.hfa

    @property
    def hfr(self) -> bool:
        return self.hfa

    def as_labels(self) -> Dict[str, object]:
        return {
            "hfa": self.hfa,
            "fab": self.fab,
            "T": self.T,
            "hfr": self.hfr,
            "cut": self.cut,
            "forbidden_witness": self.forbidden_witness,
            "certificate": self.certificate,
            "cut_criterion": self.cut_criterion,
        }


@dataclass(frozen=True)
class OddOrderReport:
    group: str
    order: int
    asserted_no_type_ii: bool
    cut: bool

    def as_labels(self) -> Dict[str, object]:
        return {
            "hfa": self.cut,
            "fab": self.cut,
            "finite_abelianization": self.cut,
            "cut": self.cut,
        }


@dataclass(frozen=True)
class ExceptionalClassification:
    descriptor: str
    n: int
    kind: Optional[str]
    in_catalog: bool
    reason: str
    ramified_primes: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ComponentFlags:
    group: str
    has_M2Q: bool
    has_M2H5: bool
    solvable: bool
    witnesses: Dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class GrkResult:
    order_name: str
    mode: str
    witness: Optional[Tuple[str, str]]
    charpoly_factors: Tuple[str, ...] = ()
    candidates_checked: int = 0

    @property
    def found(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class FaProfile:
    group: str
    fa: str
    hfa: bool
    reasons: Tuple[str, ...] = ()
    never_fa: Tuple[str, ...] = ("GE2(ZG)", "E2(ZG)", "B2(ZG)")
    notes: List[str] = field(default_factory=list)
