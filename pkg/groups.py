"""
Finite permutation groups.

A group here stands in for the Galois group acting through a finite
quotient. Permutations are tuples p with p[i] the image of point i, and
products are read left to right: g·h means "first g, then h". That is the
order in which row vectors get acted on, so a lattice action satisfies
action(g·h) = action(g)·action(h).
"""
import logging
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import isprime

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = int(os.environ.get("SPECIAL_MAX_GROUP_ORDER", 64))
MAX_DEGREE = int(os.environ.get("SPECIAL_MAX_DEGREE", 128))

Perm = Tuple[int, ...]


class OrderCapExceeded(ValueError):
    pass


class NotAPermutation(ValueError):
    pass


class DegreeCapExceeded(ValueError):
    pass


def compose(g: Perm, h: Perm) -> Perm:
    """g then h."""
    return tuple(h[x] for x in g)


def _check_perm(p: Sequence[int], degree: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise NotAPermutation(f"{list(p)} is not a permutation of 0..{degree - 1}")
    return p


class FiniteGroup:
    def __init__(self, degree: int, generators: Sequence[Perm],
                 elements: List[Perm], parents: List[Optional[Tuple[int, int]]]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        # parents[i] = (j, s): element i = element j · generator s (BFS tree)
        self.parents = tuple(parents)
        self.index: Dict[Perm, int] = {p: i for i, p in enumerate(elements)}
        self.identity_index = 0

    @classmethod
    def from_generators(cls, degree: int, generators: Iterable[Sequence[int]],
                        max_order: Optional[int] = None,
                        max_degree: Optional[int] = None) -> "FiniteGroup":
        cap = MAX_GROUP_ORDER if max_order is None else max_order
        degree_cap = MAX_DEGREE if max_degree is None else max_degree
        if degree < 1:
            raise NotAPermutation("a permutation group needs at least one point")
        if degree > degree_cap:
            raise DegreeCapExceeded(f"degree {degree} exceeds the cap of {degree_cap}")
        gens = [_check_perm(g, degree) for g in generators]
        identity = tuple(range(degree))
        elements = [identity]
        parents: List[Optional[Tuple[int, int]]] = [None]
        seen = {identity: 0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for s, gen in enumerate(gens):
                p = compose(elements[i], gen)
                if p not in seen:
                    if len(elements) >= cap:
                        raise OrderCapExceeded(f"group order exceeds the cap of {cap}")
                    seen[p] = len(elements)
                    elements.append(p)
                    parents.append((i, s))
                    queue.append(seen[p])
        logger.debug(f"closure of {len(gens)} generators on {degree} points: order {len(elements)}")
        return cls(degree, gens, elements, parents)

    @property
    def order(self) -> int:
        return len(self.elements)

    def generator_index(self, s: int) -> int:
        return self.index[self.generators[s]]

    @cached_property
    def mul_table(self) -> Tuple[Tuple[int, ...], ...]:
        idx = self.index
        return tuple(tuple(idx[compose(g, h)] for h in self.elements) for g in self.elements)

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        e = self.identity_index
        table = self.mul_table
        return tuple(row.index(e) for row in table)

    def mul(self, i: int, j: int) -> int:
        return self.mul_table[i][j]

    def inv(self, i: int) -> int:
        return self.inverses[i]

    def closure(self, generators: Iterable[int]) -> Tuple[int, ...]:
        """Sorted element indices of the subgroup generated by `generators`."""
        gens = [g for g in set(generators) if g != self.identity_index]
        table = self.mul_table
        found = {self.identity_index}
        queue = deque([self.identity_index])
        while queue:
            i = queue.popleft()
            row = table[i]
            for g in gens:
                j = row[g]
                if j not in found:
                    found.add(j)
                    queue.append(j)
        return tuple(sorted(found))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity_index,))

    def subgroup(self, generators: Iterable[int]) -> "Subgroup":
        return Subgroup(self, self.closure(generators))

    def subgroup_from_perms(self, perms: Iterable[Sequence[int]]) -> "Subgroup":
        indices = []
        for p in perms:
            p = _check_perm(p, self.degree)
            if p not in self.index:
                raise NotAPermutation(f"{list(p)} is not an element of the group")
            indices.append(self.index[p])
        return self.subgroup(indices)

    def right_cosets(self, H: "Subgroup") -> List[Tuple[int, Tuple[int, ...]]]:
        """Right cosets Hx as (representative x, sorted members), in element order."""
        cosets = []
        assigned = set()
        for x in range(self.order):
            if x in assigned:
                continue
            members = tuple(sorted(self.mul(h, x) for h in H.elements))
            assigned.update(members)
            cosets.append((x, members))
        return cosets

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.degree == other.degree
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.degree, self.generators))

    def __repr__(self):
        return f"FiniteGroup(degree={self.degree}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, i: int) -> bool:
        return i in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1

    def generators(self) -> Tuple[int, ...]:
        """Greedy generating set: walk the elements, keep each one not yet generated."""
        gens: List[int] = []
        current = {self.parent.identity_index}
        for g in self.elements:
            if g not in current:
                gens.append(g)
                current = set(self.parent.closure(gens))
        return tuple(gens)

    def perms(self) -> List[Perm]:
        return [self.parent.elements[i] for i in self.elements]

    def to_dict(self) -> dict:
        return {"order": self.order, "elements": [list(p) for p in self.perms()]}


def subgroups(G: FiniteGroup) -> List[Subgroup]:
    """All subgroups, each once, sorted by order then element indices."""
    start = G.closure([])
    found: Dict[Tuple[int, ...], Tuple[int, ...]] = {start: ()}
    queue = deque([start])
    while queue:
        elems = queue.popleft()
        gens = found[elems]
        quotient = G.order // len(elems)
        if quotient == 1:
            continue
        if isprime(quotient):
            # Lagrange: nothing fits strictly between S and G
            whole = tuple(range(G.order))
            if whole not in found:
                found[whole] = G.whole().generators()
            continue
        members = set(elems)
        for g in range(G.order):
            if g in members:
                continue
            joined = G.closure(gens + (g,))
            if joined not in found:
                found[joined] = gens + (g,)
                queue.append(joined)
    result = sorted(found, key=lambda e: (len(e), e))
    logger.debug(f"{G!r} has {len(result)} subgroups")
    return [Subgroup(G, e) for e in result]


# ─── Named groups ───────────────────────────────────────────────────────────

def trivial_group() -> FiniteGroup:
    return FiniteGroup.from_generators(1, [])


def cyclic(n: int, max_order: Optional[int] = None) -> FiniteGroup:
    cap = MAX_GROUP_ORDER if max_order is None else max_order
    if n < 1:
        raise ValueError(f"cyclic group of order {n}")
    if n > cap:
        raise OrderCapExceeded(f"cyclic group of order {n} exceeds the cap of {cap}")
    if n > MAX_DEGREE:
        raise DegreeCapExceeded(f"degree {n} exceeds the cap of {MAX_DEGREE}")
    return FiniteGroup.from_generators(n, [tuple((i + 1) % n for i in range(n))], max_order=cap)


def symmetric(n: int, max_order: Optional[int] = None) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"symmetric group on {n} points")
    gens = []
    if n >= 2:
        gens.append((1, 0) + tuple(range(2, n)))
        gens.append(tuple((i + 1) % n for i in range(n)))
    return FiniteGroup.from_generators(n, gens, max_order=max_order)


def dihedral(n: int, max_order: Optional[int] = None) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    if n < 3:
        raise ValueError("dihedral groups start at the triangle")
    rotation = tuple((i + 1) % n for i in range(n))
    reflection = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_generators(n, [rotation, reflection], max_order=max_order)


def klein_four() -> FiniteGroup:
    return FiniteGroup.from_generators(4, [(1, 0, 3, 2), (2, 3, 0, 1)])


def alternating4() -> FiniteGroup:
    return FiniteGroup.from_generators(4, [(1, 2, 0, 3), (1, 0, 3, 2)])


def direct_product(G1: FiniteGroup, G2: FiniteGroup,
                   max_order: Optional[int] = None) -> FiniteGroup:
    d1, d2 = G1.degree, G2.degree
    gens = [g + tuple(range(d1, d1 + d2)) for g in G1.generators]
    gens += [tuple(range(d1)) + tuple(d1 + x for x in h) for h in G2.generators]
    return FiniteGroup.from_generators(d1 + d2, gens, max_order=max_order)
