# services/group_service.py
from __future__ import annotations

import logging
import random
from collections import Counter, deque
from math import gcd
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.combinatorics import Permutation, PermutationGroup

from domain.errors import DomainError
from domain.models import FiniteAbelianInvariants, FiniteGroupTable

from config import ASSOC_FULL_CHECK_MAX, ASSOC_SAMPLE_TRIPLES, MAX_GROUP_ORDER, SEED

log = logging.getLogger(__name__)

__all__ = [
    "from_elements",
    "from_generators",
    "from_permutations",
    "from_table",
    "validate",
    "generating_set",
    "subgroup_closure",
    "conjugacy_classes",
    "class_index",
    "derived_subgroup",
    "center",
    "normal_closure",
    "is_normal",
    "normal_subgroups",
    "quotient",
    "abelianization_invariants",
    "element_order_counts",
    "is_solvable",
    "is_isomorphic",
    "find_isomorphism",
    "maps_onto",
    "is_cut",
    "describe",
]

Subgroup = FrozenSet[int]


# ─────────────────────────────────────────────────────────────
# Construction
# ─────────────────────────────────────────────────────────────

def from_elements(
    elements: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    label: str = "",
    name: Callable[[Hashable], str] = str,
    provenance: str = "",
) -> FiniteGroupTable:
    index = {x: i for i, x in enumerate(elements)}
    table = []
    for a in elements:
        row = []
        for b in elements:
            c = mul(a, b)
            if c not in index:
                raise DomainError(f"{label or 'group'}: product of {name(a)} and {name(b)} leaves the element set")
            row.append(index[c])
        table.append(tuple(row))
    return FiniteGroupTable(tuple(table), tuple(name(x) for x in elements), label, provenance)


def from_generators(
    generators: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
    label: str = "",
    name: Callable[[Hashable], str] = str,
    max_order: Optional[int] = None,
) -> FiniteGroupTable:
    """Close `generators` under `mul` (breadth first) and tabulate the result."""
    limit = max_order or MAX_GROUP_ORDER
    seen = {identity: 0}
    elements = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = mul(x, s)
            if y not in seen:
                if len(elements) >= limit:
                    raise DomainError(f"{label or 'group'} has more than {limit} elements")
                seen[y] = len(elements)
                elements.append(y)
                queue.append(y)
    log.debug("closed %s: %d elements", label or "group", len(elements))
    return from_elements(elements, mul, label, name, provenance="generators")


def from_permutations(images: Sequence[Sequence[int]], label: str = "") -> FiniteGroupTable:
    if not images:
        raise DomainError("perm: needs at least one generator")
    degree = max(len(p) for p in images)
    try:
        gens = [Permutation(list(p), size=degree) for p in images]
    except ValueError as exc:
        raise DomainError(f"invalid permutation generator: {exc}")
    group = PermutationGroup(gens)
    if group.order() > MAX_GROUP_ORDER:
        raise DomainError(f"permutation group of order {group.order()} exceeds {MAX_GROUP_ORDER}")
    elements = sorted(group.generate(), key=lambda p: p.array_form)
    table = from_elements(
        elements,
        lambda a, b: a * b,
        label or "perm",
        name=lambda p: str(p.cyclic_form),
    )
    table = FiniteGroupTable(table.table, table.names, table.label, "permutations")
    validate(table)
    return table


def from_table(rows: Sequence[Sequence[int]], label: str = "") -> FiniteGroupTable:
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DomainError("explicit table must be square and non-empty")
    if any(not (0 <= int(x) < n) for r in rows for x in r):
        raise DomainError("explicit table has entries out of range")
    table = FiniteGroupTable(tuple(tuple(int(x) for x in r) for r in rows), label=label or "table", provenance="table")
    validate(table)
    return table


def _light_test(G: FiniteGroupTable, generators: Sequence[int]) -> bool:
    # (x s) y == x (s y) for every generator s implies associativity
    t = G.table
    for s in generators:
        ts = t[s]
        for x in range(G.n):
            xs = t[x][s]
            row_xs, row_x = t[xs], t[x]
            for y in range(G.n):
                if row_xs[y] != row_x[ts[y]]:
                    return False
    return True


def validate(G: FiniteGroupTable) -> None:
    """Identity, two-sided inverses and associativity of a table.

    Associativity is verified completely (Light's test over a generating set)
    up to ASSOC_FULL_CHECK_MAX elements and on sampled triples above that.
    """
    n = G.n
    t = G.table
    try:
        e = G.identity
    except ValueError:
        raise DomainError(f"{G.label or 'table'}: no identity element")
    if any(t[e][x] != x or t[x][e] != x for x in range(n)):
        raise DomainError(f"{G.label or 'table'}: element {e} is not a two-sided identity")
    for x in range(n):
        if sorted(t[x]) != list(range(n)):
            raise DomainError(f"{G.label or 'table'}: row {x} is not a permutation")
        if sorted(t[y][x] for y in range(n)) != list(range(n)):
            raise DomainError(f"{G.label or 'table'}: column {x} is not a permutation")
    if n <= ASSOC_FULL_CHECK_MAX:
        ok = _light_test(G, _magma_generators(G))
    else:
        rng = random.Random(SEED)
        ok = True
        for _ in range(ASSOC_SAMPLE_TRIPLES):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[a][b]][c] != t[a][t[b][c]]:
                ok = False
                break
    if not ok:
        raise DomainError(f"{G.label or 'table'}: multiplication is not associative")


def _magma_generators(G: FiniteGroupTable) -> List[int]:
    # right-normed products of the chosen elements reach every element
    t = G.table
    e = G.identity
    reached = {e}
    gens: List[int] = []
    for g in range(G.n):
        if g in reached:
            continue
        gens.append(g)
        queue = deque(reached)
        while queue:
            x = queue.popleft()
            for s in gens:
                y = t[x][s]
                if y not in reached:
                    reached.add(y)
                    queue.append(y)
    return gens


# ─────────────────────────────────────────────────────────────
# Subgroups and classes
# ─────────────────────────────────────────────────────────────

def subgroup_closure(G: FiniteGroupTable, generators: Iterable[int]) -> Subgroup:
    gens = list(dict.fromkeys(generators))
    t = G.table
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = t[x][s]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def generating_set(G: FiniteGroupTable, within: Optional[Iterable[int]] = None) -> List[int]:
    """Greedy generating set, trying elements of large order first."""
    pool = sorted(within if within is not None else range(G.n), key=lambda g: (-G.element_order(g), g))
    target = len(set(pool)) if within is not None else G.n
    gens: List[int] = []
    current: Subgroup = frozenset([G.identity])
    for g in pool:
        if len(current) == target:
            break
        if g in current:
            continue
        gens.append(g)
        current = subgroup_closure(G, gens)
    return gens


def conjugacy_classes(G: FiniteGroupTable) -> List[Tuple[int, ...]]:
    t = G.table
    inv = G.inverses
    seen = set()
    classes = []
    for g in range(G.n):
        if g in seen:
            continue
        cls = sorted({t[t[h][g]][inv[h]] for h in range(G.n)})
        seen.update(cls)
        classes.append(tuple(cls))
    return classes


def class_index(G: FiniteGroupTable) -> Dict[int, int]:
    return {g: i for i, cls in enumerate(conjugacy_classes(G)) for g in cls}


def derived_subgroup(G: FiniteGroupTable, within: Optional[Subgroup] = None) -> Subgroup:
    t = G.table
    inv = G.inverses
    H = sorted(within) if within is not None else range(G.n)
    commutators = {t[t[inv[a]][inv[b]]][t[a][b]] for a in H for b in H}
    return subgroup_closure(G, commutators)


def center(G: FiniteGroupTable) -> Subgroup:
    t = G.table
    return frozenset(z for z in range(G.n) if all(t[z][g] == t[g][z] for g in range(G.n)))


def normal_closure(G: FiniteGroupTable, elements: Iterable[int]) -> Subgroup:
    t = G.table
    inv = G.inverses
    conjugates = {t[t[h][x]][inv[h]] for x in elements for h in range(G.n)}
    return subgroup_closure(G, conjugates)


def is_normal(G: FiniteGroupTable, N: Iterable[int]) -> bool:
    N = frozenset(N)
    t = G.table
    inv = G.inverses
    return all(t[t[h][x]][inv[h]] in N for x in N for h in range(G.n))


def normal_subgroups(G: FiniteGroupTable) -> List[Subgroup]:
    """All normal subgroups: joins of normal closures of single classes."""
    t = G.table
    minimal = {normal_closure(G, [cls[0]]) for cls in conjugacy_classes(G)}
    found = set(minimal) | {frozenset([G.identity])}
    frontier = list(found)
    while frontier:
        fresh = []
        for A in frontier:
            for B in minimal:
                if B <= A:
                    continue
                # product of two normal subgroups is their join
                join = frozenset(t[a][b] for a in A for b in B)
                if join not in found:
                    found.add(join)
                    fresh.append(join)
        frontier = fresh
    return sorted(found, key=lambda N: (len(N), sorted(N)))


def quotient(G: FiniteGroupTable, N: Iterable[int]) -> FiniteGroupTable:
    N = frozenset(N)
    if not is_normal(G, N):
        raise DomainError("quotient by a subgroup that is not normal")
    t = G.table
    coset_of: Dict[int, int] = {}
    reps: List[int] = []
    for g in range(G.n):
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for x in N:
            coset_of[t[g][x]] = idx
    table = tuple(tuple(coset_of[t[a][b]] for b in reps) for a in reps)
    names = tuple(f"{G.names[r]}N" for r in reps)
    return FiniteGroupTable(table, names, f"{G.label}/N", "quotient")


# ─────────────────────────────────────────────────────────────
# Invariants
# ─────────────────────────────────────────────────────────────

def element_order_counts(G: FiniteGroupTable) -> Counter:
    return Counter(G.element_order(g) for g in range(G.n))


def abelianization_invariants(G: FiniteGroupTable) -> FiniteAbelianInvariants:
    """Invariant factors of G/G'.

    For each prime p the sizes |A[p^k]| of the p^k-torsion of A = G/G' are
    counted as |{g : g^(p^k) in G'}| / |G'|; their successive ratios give the
    p-primary part.
    """
    D = derived_subgroup(G)
    m = G.n // len(D)
    elementary: List[int] = []
    for p, e in factorint(m).items():
        sizes = [1]
        k = 1
        while sizes[-1] < p ** e:
            pk = p ** k
            count = sum(1 for g in range(G.n) if G.power(g, pk) in D) // len(D)
            sizes.append(count)
            k += 1
        # number of cyclic factors of order >= p^k
        at_least = []
        for k in range(1, len(sizes)):
            ratio = sizes[k] // sizes[k - 1]
            at_least.append(_log(ratio, p))
        for k, c in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            elementary.extend([p ** k] * (c - nxt))
    return _invariant_factors(elementary)


def _log(x: int, p: int) -> int:
    k = 0
    while x > 1:
        x //= p
        k += 1
    return k


def _invariant_factors(elementary: List[int]) -> FiniteAbelianInvariants:
    by_prime: Dict[int, List[int]] = {}
    for q in elementary:
        p = min(factorint(q))
        by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            factors[length - 1 - i] *= q
    return FiniteAbelianInvariants(tuple(factors), 0)


def is_solvable(G: FiniteGroupTable) -> bool:
    current: Subgroup = frozenset(range(G.n))
    while len(current) > 1:
        nxt = derived_subgroup(G, current)
        if nxt == current:
            return False
        current = nxt
    return True


def _derived_lengths(G: FiniteGroupTable) -> Tuple[int, ...]:
    sizes = []
    current: Subgroup = frozenset(range(G.n))
    while True:
        nxt = derived_subgroup(G, current)
        sizes.append(len(nxt))
        if nxt == current or len(nxt) == 1:
            return tuple(sizes)
        current = nxt


def _screen(G: FiniteGroupTable) -> Tuple:
    classes = conjugacy_classes(G)
    return (
        G.n,
        G.is_abelian(),
        tuple(sorted(element_order_counts(G).items())),
        tuple(sorted(len(c) for c in classes)),
        len(center(G)),
        _derived_lengths(G),
    )


# ─────────────────────────────────────────────────────────────
# Isomorphism
# ─────────────────────────────────────────────────────────────

def _extend_hom(
    G: FiniteGroupTable,
    H: FiniteGroupTable,
    gens: Sequence[int],
    images: Sequence[int],
) -> Optional[Dict[int, int]]:
    """Extend gens -> images to <gens> along a BFS; None on an inconsistency."""
    tg, th = G.table, H.table
    phi = {G.identity: H.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for s, fs in zip(gens, images):
            y = tg[x][s]
            fy = th[fx][fs]
            known = phi.get(y)
            if known is None:
                phi[y] = fy
                queue.append(y)
            elif known != fy:
                return None
    return phi


def find_isomorphism(G: FiniteGroupTable, H: FiniteGroupTable) -> Optional[Dict[int, int]]:
    if _screen(G) != _screen(H):
        return None
    gens = generating_set(G)
    g_cls = class_index(G)
    h_cls = class_index(H)
    g_sizes = Counter(g_cls.values())
    h_sizes = Counter(h_cls.values())

    def signature(X, cls, sizes, g):
        return (X.element_order(g), sizes[cls[g]])

    candidates = [
        [h for h in range(H.n) if signature(H, h_cls, h_sizes, h) == signature(G, g_cls, g_sizes, s)]
        for s in gens
    ]

    def search(k: int, images: List[int]) -> Optional[Dict[int, int]]:
        phi = _extend_hom(G, H, gens[:k], images)
        if phi is None or len(set(phi.values())) != len(phi):
            return None
        if k == len(gens):
            return phi if len(phi) == G.n else None
        for h in candidates[k]:
            found = search(k + 1, images + [h])
            if found is not None:
                return found
        return None

    return search(0, [])


def is_isomorphic(G: FiniteGroupTable, H: FiniteGroupTable) -> bool:
    return find_isomorphism(G, H) is not None


def maps_onto(
    G: FiniteGroupTable,
    H: FiniteGroupTable,
    recognizer: Optional[Callable[[FiniteGroupTable], bool]] = None,
    normals: Optional[Sequence[Subgroup]] = None,
) -> Tuple[bool, Optional[Subgroup]]:
    """Whether G has a quotient isomorphic to H; also returns the kernel.

    `recognizer` replaces the isomorphism test on candidate quotients (the
    catalog passes a presentation check). `normals` may carry a precomputed
    normal_subgroups(G).
    """
    if G.n > MAX_GROUP_ORDER:
        raise DomainError(f"group of order {G.n} exceeds the bound {MAX_GROUP_ORDER} for quotient enumeration")
    if G.n % H.n:
        return False, None
    index = G.n // H.n
    test = recognizer or (lambda Q: is_isomorphic(Q, H))
    for N in (normal_subgroups(G) if normals is None else normals):
        if len(N) != index:
            continue
        if test(quotient(G, N)):
            log.debug("%s maps onto %s with kernel of order %d", G.label, H.label, len(N))
            return True, N
    return False, None


def is_cut(G: FiniteGroupTable) -> bool:
    """g^j is conjugate to g or g^-1 for every j coprime to the order of g."""
    cls = class_index(G)
    inv = G.inverses
    for g in range(G.n):
        m = G.element_order(g)
        allowed = {cls[g], cls[inv[g]]}
        for j in range(2, m):
            if gcd(j, m) == 1 and cls[G.power(g, j)] not in allowed:
                return False
    return True


def describe(G: FiniteGroupTable) -> Dict[str, object]:
    return {
        "label": G.label,
        "order": G.n,
        "abelian": G.is_abelian(),
        "classes": len(conjugacy_classes(G)),
        "center": len(center(G)),
        "derived": len(derived_subgroup(G)),
        "solvable": is_solvable(G),
        "element_orders": dict(sorted(element_order_counts(G).items())),
        "abelianization": abelianization_invariants(G).describe(),
    }
