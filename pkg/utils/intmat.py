# utils/intmat.py
"""Thin wrappers over sympy's exact matrix machinery.

Vectors are plain tuples; a lattice is handed around as a tuple of integer
column vectors. Nothing here uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import Poly, Rational, Symbol
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, invariant_factors

__all__ = [
    "IntVec",
    "hnf_columns",
    "smith_invariants",
    "integer_rank",
    "integer_det",
    "rational_rank",
    "rational_inverse",
    "rational_solve",
    "reduce_mod_columns",
    "in_column_span",
    "charpoly_has_rational_root",
    "charpoly_factors",
    "mat_vec",
]

IntVec = Tuple[int, ...]

_X = Symbol("x")


# ──────────────── Internal helpers ────────────────
def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _zz_matrix(rows: Sequence[Sequence[int]]) -> DomainMatrix:
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (n_rows, n_cols), ZZ)


def _qq_matrix(rows: Sequence[Sequence[Fraction]]) -> DomainMatrix:
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    return DomainMatrix(
        [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows],
        (n_rows, n_cols),
        QQ,
    )


def _columns_to_rows(columns: Sequence[Sequence[int]], dim: int) -> List[List[int]]:
    return [[int(col[i]) for col in columns] for i in range(dim)]


def _pivot(col: Sequence[int]) -> int:
    for i in range(len(col) - 1, -1, -1):
        if col[i]:
            return i
    return -1


# ─── Public API ───
def hnf_columns(columns: Sequence[Sequence[int]], dim: int) -> Tuple[IntVec, ...]:
    """Canonical basis (Hermite normal form) of the Z-span of integer vectors.

    Zero vectors are dropped; an all-zero input gives the rank-0 lattice ().
    Each returned column has a positive last non-zero entry (its pivot) and
    pivots are pairwise distinct.
    """
    nonzero = [tuple(int(x) for x in c) for c in columns if any(c)]
    if not nonzero:
        return ()
    H = hermite_normal_form(_zz_matrix(_columns_to_rows(nonzero, dim)))
    rows = H.to_list()
    n_cols = H.shape[1]
    out: List[IntVec] = []
    for j in range(n_cols):
        col = tuple(int(rows[i][j]) for i in range(dim))
        if not any(col):
            continue
        if col[_pivot(col)] < 0:
            col = tuple(-x for x in col)
        out.append(col)
    return tuple(out)


def smith_invariants(rows: Sequence[Sequence[int]]) -> List[int]:
    """Non-zero invariant factors d1 | d2 | ... of an integer matrix (absolute values)."""
    if not rows or not rows[0]:
        return []
    factors = invariant_factors(_zz_matrix(rows))
    return sorted(abs(int(f)) for f in factors if int(f) != 0)


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _zz_matrix(rows).convert_to(QQ).rank()


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    return int(_zz_matrix(rows).det())


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _qq_matrix(rows).rank()


def rational_inverse(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    inv = _qq_matrix(rows).inv()
    return [[_to_fraction(x) for x in row] for row in inv.to_list()]


def rational_solve(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Coordinates c with sum c_j * columns[j] == target, or None.

    The columns must be linearly independent.
    """
    dim = len(target)
    n = len(columns)
    if n == 0:
        return [] if not any(target) else None
    aug = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(dim)]
    reduced, pivots = _qq_matrix(aug).rref()
    if n in pivots:
        return None
    rows = reduced.to_list()
    out = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        out[p] = _to_fraction(rows[r][n])
    return out


def reduce_mod_columns(vec: Sequence[int], columns: Sequence[Sequence[int]]) -> IntVec:
    """Canonical representative of vec modulo the span of HNF columns."""
    out = [int(x) for x in vec]
    for col in sorted(columns, key=_pivot, reverse=True):
        p = _pivot(col)
        q = out[p] // col[p]
        if q:
            out = [a - q * b for a, b in zip(out, col)]
    return tuple(out)


def in_column_span(vec: Sequence[int], columns: Sequence[Sequence[int]]) -> bool:
    return not any(reduce_mod_columns(vec, columns))


def mat_vec(rows: Sequence[Sequence[Fraction]], vec: Sequence) -> Tuple[Fraction, ...]:
    return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in rows)


def charpoly_factors(rows: Sequence[Sequence[int]]) -> List[Tuple[Poly, int]]:
    """Irreducible factors over Q of the characteristic polynomial."""
    coeffs = _zz_matrix(rows).convert_to(QQ).charpoly()
    poly = Poly([Rational(int(c.numerator), int(c.denominator)) for c in coeffs], _X, domain=QQ)
    _, factors = poly.factor_list()
    return factors


def charpoly_has_rational_root(rows: Sequence[Sequence[int]]) -> bool:
    return any(f.degree() == 1 for f, _ in charpoly_factors(rows))
