"""
Integral representations of finite groups (G-lattices).

A lattice of rank r carries one unimodular r×r matrix per group generator,
acting on row vectors from the right. Element matrices are built along
the BFS tree of the group, and the constructor checks that they satisfy
action(g·h) = action(g)·action(h).

When every generator acts by a permutation matrix, the lattice keeps the
permutations themselves and builds matrices only on demand. Covers of
rank in the hundreds stay manageable that way.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from groups import FiniteGroup, Perm, Subgroup, compose, subgroups
from intlinalg import (
    DiophantineCertificate,
    IntMatrix,
    block_diag,
    diophantine_certificate,
    hnf_basis,
    in_row_span,
    inverse_unimodular,
    kernel_basis,
    rank,
    snf,
    solve_linear,
)

logger = logging.getLogger(__name__)

MAX_RANK = int(os.environ.get("SPECIAL_MAX_RANK", 12))


class GroupMismatch(ValueError):
    pass


class InvalidAction(ValueError):
    pass


class RankCapExceeded(ValueError):
    pass


def permutation_matrix(perm: Sequence[int]) -> IntMatrix:
    n = len(perm)
    return IntMatrix(n, n, (1 if perm[i] == j else 0 for i in range(n) for j in range(n)))


def check_rank(M: "GLattice", max_rank: Optional[int] = None):
    cap = MAX_RANK if max_rank is None else max_rank
    if M.rank > cap:
        raise RankCapExceeded(f"lattice rank {M.rank} exceeds the cap of {cap}")


class GLattice:
    def __init__(self, group: FiniteGroup, rank: int, generator_matrices: Sequence[IntMatrix]):
        if len(generator_matrices) != len(group.generators):
            raise InvalidAction(
                f"{len(generator_matrices)} matrices for {len(group.generators)} generators")
        for s, a in enumerate(generator_matrices):
            if a.shape != (rank, rank):
                raise InvalidAction(f"generator {s}: matrix of shape {a.shape}, expected {(rank, rank)}")
        self.group = group
        self.rank = rank
        self.generator_matrices = tuple(generator_matrices)
        self._cache: Dict[int, IntMatrix] = {}
        self.perms: Optional[Tuple[Perm, ...]] = None

        if all(a.is_permutation() for a in generator_matrices):
            self._build_permutations()
        else:
            self._build_matrices()

    def _build_permutations(self):
        G = self.group
        gen_perms = [a.permutation() for a in self.generator_matrices]
        perms: List[Perm] = [tuple(range(self.rank))]
        for parent in G.parents[1:]:
            j, s = parent
            perms.append(compose(perms[j], gen_perms[s]))
        for e in range(G.order):
            for s, gp in enumerate(gen_perms):
                if perms[G.mul(e, G.generator_index(s))] != compose(perms[e], gp):
                    raise InvalidAction(
                        f"generator permutations do not define an action (element {e}, generator {s})")
        self.perms = tuple(perms)

    def _build_matrices(self):
        G = self.group
        for s, a in enumerate(self.generator_matrices):
            if not a.is_unimodular():
                raise InvalidAction(f"generator {s}: matrix is not invertible over Z")
        mats = [IntMatrix.identity(self.rank)]
        for parent in G.parents[1:]:
            j, s = parent
            mats.append(mats[j] @ self.generator_matrices[s])
        for e in range(G.order):
            for s, a in enumerate(self.generator_matrices):
                if mats[G.mul(e, G.generator_index(s))] != mats[e] @ a:
                    raise InvalidAction(
                        f"generator matrices do not define an action (element {e}, generator {s})")
        self._cache = dict(enumerate(mats))

    def action(self, g: int) -> IntMatrix:
        if g not in self._cache:
            self._cache[g] = permutation_matrix(self.perms[g])
        return self._cache[g]

    def is_permutation_lattice(self) -> bool:
        """Permutation lattice in the given basis."""
        return self.perms is not None

    def orbits(self, H: Subgroup) -> List[List[int]]:
        """Orbits of H on the basis, for permutation lattices; sorted by least index."""
        if self.perms is None:
            raise ValueError("orbits are only defined for permutation lattices")
        seen = [False] * self.rank
        result = []
        for i in range(self.rank):
            if seen[i]:
                continue
            orbit = sorted({self.perms[h][i] for h in H.elements})
            for j in orbit:
                seen[j] = True
            result.append(orbit)
        return result

    def __eq__(self, other):
        return (isinstance(other, GLattice) and self.group == other.group
                and self.rank == other.rank
                and self.generator_matrices == other.generator_matrices)

    def __hash__(self):
        return hash((self.group, self.rank, self.generator_matrices))

    def __repr__(self):
        return f"GLattice(rank={self.rank}, group={self.group!r})"


@dataclass(frozen=True)
class AbelianInvariants:
    """Finitely generated abelian group Z^free_rank ⊕ ⊕ Z/t, factors > 1 and dividing."""
    torsion: Tuple[int, ...] = ()
    free_rank: int = 0

    @classmethod
    def from_factors(cls, factors: Sequence[int], free_rank: int = 0) -> "AbelianInvariants":
        return cls(tuple(f for f in factors if f > 1), free_rank)

    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


# ─── Constructors ──────────────────────────────────────────────────────────

def trivial_lattice(G: FiniteGroup, rank: int = 1) -> GLattice:
    return GLattice(G, rank, [IntMatrix.identity(rank)] * len(G.generators))


def sign_lattice(G: FiniteGroup, signs: Sequence[int]) -> GLattice:
    """Rank one, generator s acting by signs[s] ∈ {1, -1}."""
    if any(x not in (1, -1) for x in signs):
        raise InvalidAction(f"signs must be ±1, got {list(signs)}")
    return GLattice(G, 1, [IntMatrix(1, 1, [x]) for x in signs])


def _coset_action(G: FiniteGroup, H: Subgroup):
    cosets = G.right_cosets(H)
    coset_of = [0] * G.order
    for c, (_, members) in enumerate(cosets):
        for x in members:
            coset_of[x] = c
    gen_perms = []
    for s in range(len(G.generators)):
        g = G.generator_index(s)
        gen_perms.append(tuple(coset_of[G.mul(rep, g)] for rep, _ in cosets))
    return cosets, coset_of, gen_perms


def permutation_lattice(G: FiniteGroup, H: Subgroup) -> GLattice:
    """Z[G/H] on the right cosets Hx; g sends Hx to Hxg."""
    if H.parent != G:
        raise GroupMismatch("subgroup belongs to another group")
    cosets, _, gen_perms = _coset_action(G, H)
    return GLattice(G, len(cosets), [permutation_matrix(p) for p in gen_perms])


def regular_lattice(G: FiniteGroup) -> GLattice:
    return permutation_lattice(G, G.trivial_subgroup())


def augmentation_kernel(G: FiniteGroup, H: Subgroup) -> GLattice:
    """Kernel of Z[G/H] → Z, basis e_i − e_last."""
    cosets, _, gen_perms = _coset_action(G, H)
    last = len(cosets) - 1
    mats = []
    for p in gen_perms:
        rows = []
        for i in range(last):
            row = [0] * last
            if p[i] != last:
                row[p[i]] += 1
            if p[last] != last:
                row[p[last]] -= 1
            rows.append(row)
        mats.append(IntMatrix.from_rows(rows, last))
    return GLattice(G, last, mats)


def norm_quotient(G: FiniteGroup, H: Subgroup) -> GLattice:
    """Z[G/H] modulo the norm element, basis the images of e_0..e_{last-1}."""
    cosets, _, gen_perms = _coset_action(G, H)
    last = len(cosets) - 1
    mats = []
    for p in gen_perms:
        rows = []
        for i in range(last):
            if p[i] == last:
                rows.append([-1] * last)
            else:
                rows.append([1 if j == p[i] else 0 for j in range(last)])
        mats.append(IntMatrix.from_rows(rows, last))
    return GLattice(G, last, mats)


def dual(M: GLattice) -> GLattice:
    """Hom(M, Z): g acts by the transpose of action(g⁻¹)."""
    G = M.group
    mats = [M.action(G.inv(G.generator_index(s))).T for s in range(len(G.generators))]
    return GLattice(G, M.rank, mats)


def direct_sum(M1: GLattice, M2: GLattice) -> GLattice:
    if M1.group != M2.group:
        raise GroupMismatch("direct sum of lattices over different groups")
    mats = [block_diag(a, b) for a, b in zip(M1.generator_matrices, M2.generator_matrices)]
    return GLattice(M1.group, M1.rank + M2.rank, mats)


def conjugate(M: GLattice, P: IntMatrix) -> GLattice:
    """Same lattice in the basis given by the rows of the unimodular P."""
    if P.shape != (M.rank, M.rank):
        raise InvalidAction(f"basis change of shape {P.shape} for rank {M.rank}")
    Pinv = inverse_unimodular(P)
    return GLattice(M.group, M.rank, [P @ a @ Pinv for a in M.generator_matrices])


# ─── Invariants and cohomology ─────────────────────────────────────────────

def fixed_sublattice(H: Subgroup, M: GLattice) -> IntMatrix:
    """HNF basis of M^H, as rows."""
    if H.parent != M.group:
        raise GroupMismatch("subgroup belongs to another group")
    if M.is_permutation_lattice():
        rows = []
        for orbit in M.orbits(H):
            row = [0] * M.rank
            for j in orbit:
                row[j] = 1
            rows.append(row)
        return IntMatrix.from_rows(rows, M.rank)
    gens = H.generators()
    if not gens:
        return IntMatrix.identity(M.rank)
    stacked = None
    for h in gens:
        block = M.action(h) - IntMatrix.identity(M.rank)
        stacked = block if stacked is None else stacked.hstack(block)
    return kernel_basis(stacked)


def h1(H: Subgroup, M: GLattice, max_rank: Optional[int] = None) -> AbelianInvariants:
    """First cohomology H¹(H, M) as Z¹/B¹.

    A cocycle is c: H → M with c(g·h) = c(g)·action(h) + c(h). It is
    determined by its values on a generating set, so the linear conditions
    are imposed on pairs (g, s) with s running over the generators of H.
    """
    if H.parent != M.group:
        raise GroupMismatch("subgroup belongs to another group")
    check_rank(M, max_rank)
    G = M.group
    r = M.rank
    others = [h for h in H.elements if h != G.identity_index]
    if r == 0 or not others:
        return AbelianInvariants()
    pos = {h: k * r for k, h in enumerate(others)}
    n = len(others) * r
    gens = H.generators()

    columns = []
    for g in others:
        for s in gens:
            a = M.action(s)
            gs = G.mul(g, s)
            for j in range(r):
                col = [0] * n
                if gs in pos:
                    col[pos[gs] + j] += 1
                for i in range(r):
                    col[pos[g] + i] -= a[i, j]
                col[pos[s] + j] -= 1
                columns.append(col)
    if columns:
        constraints = IntMatrix.from_rows(columns, n).T
        cocycles = kernel_basis(constraints)
    else:
        cocycles = IntMatrix.identity(n)

    coords = []
    for i in range(r):
        m = [1 if k == i else 0 for k in range(r)]
        boundary = []
        for h in others:
            image = M.action(h).vector_times(m)
            boundary.extend(x - y for x, y in zip(image, m))
        y = solve_linear(cocycles.T, boundary)
        if y is None:
            raise AssertionError("coboundary outside the cocycle lattice")
        coords.append(y)
    dec = snf(IntMatrix.from_rows(coords, cocycles.rows))
    free = cocycles.rows - dec.rank
    if free:
        raise AssertionError(f"H^1 of a finite group with free rank {free}")
    result = AbelianInvariants.from_factors(dec.invariant_factors)
    logger.debug(f"H^1(order {H.order}, rank {r}) = {result}")
    return result


@dataclass(frozen=True)
class CohomologyTest:
    holds: bool
    subgroup: Optional[Subgroup] = None
    invariants: Optional[AbelianInvariants] = None

    def to_dict(self) -> dict:
        if self.holds:
            return {"holds": True}
        return {"holds": False, "subgroup": self.subgroup.to_dict(), "h1": str(self.invariants)}


def is_coflasque(M: GLattice, max_rank: Optional[int] = None) -> CohomologyTest:
    """H¹(H, M) = 0 for every subgroup H; on failure the smallest offending H."""
    check_rank(M, max_rank)
    for H in subgroups(M.group):
        if H.is_trivial():
            continue
        inv = h1(H, M, max_rank=max_rank)
        if not inv.is_trivial():
            return CohomologyTest(False, H, inv)
    return CohomologyTest(True)


def is_flasque(M: GLattice, max_rank: Optional[int] = None) -> CohomologyTest:
    return is_coflasque(dual(M), max_rank=max_rank)


# ─── Coflasque cover and invertibility ─────────────────────────────────────

@dataclass(frozen=True)
class CoverSummand:
    """One copy of Z[G/H]; the coset He maps to `generator` ∈ M^H."""
    subgroup: Subgroup
    generator: Tuple[int, ...]
    cosets: Tuple[Tuple[int, Tuple[int, ...]], ...]
    coset_of: Tuple[int, ...]
    offset: int


@dataclass(frozen=True)
class PermutationCover:
    cover_lattice: GLattice
    projection: IntMatrix
    summands: Tuple[CoverSummand, ...] = field(repr=False)

    @property
    def summand_tags(self) -> List[Tuple[Subgroup, int]]:
        counts: Dict[Tuple[int, ...], int] = {}
        order: List[Subgroup] = []
        for s in self.summands:
            if s.subgroup.elements not in counts:
                counts[s.subgroup.elements] = 0
                order.append(s.subgroup)
            counts[s.subgroup.elements] += 1
        return [(H, counts[H.elements]) for H in order]


def coflasque_cover(M: GLattice, verify: bool = True) -> PermutationCover:
    """P = ⊕_H Z[G/H]^(rank M^H) → M, onto on fixed points of every subgroup."""
    G = M.group
    summands: List[CoverSummand] = []
    projection: List[Tuple[int, ...]] = []
    offset = 0
    gen_perms: List[List[int]] = [[] for _ in G.generators]
    for H in subgroups(G):
        fixed = fixed_sublattice(H, M)
        if fixed.rows == 0:
            continue
        cosets, coset_of, perms = _coset_action(G, H)
        for w in (fixed.row(k) for k in range(fixed.rows)):
            summands.append(CoverSummand(H, w, tuple(cosets), tuple(coset_of), offset))
            for rep, _ in cosets:
                projection.append(M.action(rep).vector_times(w))
            for s, p in enumerate(perms):
                gen_perms[s].extend(offset + c for c in p)
            offset += len(cosets)
    cover = GLattice(G, offset, [permutation_matrix(p) for p in gen_perms])
    result = PermutationCover(cover, IntMatrix.from_rows(projection, M.rank), tuple(summands))
    logger.debug(f"coflasque cover of rank {offset} over {len(summands)} summands for {M!r}")
    if verify and not verify_cover(result, M):
        raise AssertionError("coflasque cover failed verification")
    return result


def verify_cover(cover: PermutationCover, M: GLattice) -> bool:
    """Equivariant, onto M, and onto M^H for every subgroup H."""
    P, pi = cover.cover_lattice, cover.projection
    G = M.group
    for s in range(len(G.generators)):
        g = G.generator_index(s)
        a = M.action(g)
        perm = P.perms[g]
        for i in range(P.rank):
            if pi.row(perm[i]) != a.vector_times(pi.row(i)):
                return False
    if M.rank and hnf_basis(pi) != IntMatrix.identity(M.rank):
        return False
    for H in subgroups(G):
        target = fixed_sublattice(H, M)
        if target.rows == 0:
            continue
        image = []
        for orbit in P.orbits(H):
            v = [0] * M.rank
            for i in orbit:
                v = [x + y for x, y in zip(v, pi.row(i))]
            image.append(v)
        image_m = IntMatrix.from_rows(image, M.rank)
        if rank(image_m) != target.rows:
            return False
        if not all(in_row_span(image_m, target.row(k)) for k in range(target.rows)):
            return False
    return True


@dataclass(frozen=True)
class InvertibilityTest:
    holds: bool
    cover: PermutationCover
    section: Optional[IntMatrix] = None
    certificate: Optional[DiophantineCertificate] = None

    def to_dict(self) -> dict:
        out = {"invertible": self.holds, "cover_rank": self.cover.cover_lattice.rank}
        if self.section is not None:
            out["section"] = self.section.to_lists()
        if self.certificate is not None:
            out["certificate"] = {"multiplier": list(self.certificate.multiplier),
                                  "modulus": self.certificate.modulus}
        return out


def _orbit_section(M: GLattice, cover: PermutationCover) -> IntMatrix:
    """Section for a permutation lattice: each basis orbit maps onto its own summand."""
    G = M.group
    whole = G.whole()
    rows: List[Optional[List[int]]] = [None] * M.rank
    for orbit in M.orbits(whole):
        i0 = orbit[0]
        stab = tuple(g for g in range(G.order) if M.perms[g][i0] == i0)
        unit = tuple(1 if j == i0 else 0 for j in range(M.rank))
        summand = next(s for s in cover.summands
                       if s.subgroup.elements == stab and s.generator == unit)
        for x in range(G.order):
            j = M.perms[x][i0]
            if rows[j] is None:
                row = [0] * cover.cover_lattice.rank
                row[summand.offset + summand.coset_of[x]] = 1
                rows[j] = row
    return IntMatrix.from_rows(rows, cover.cover_lattice.rank)


def _section_system(M: GLattice, cover: PermutationCover):
    """Candidate equivariant maps M → P, one per summand and H-fixed functional.

    A map Z[G/H] → Z that is equivariant on the dual side is the same as an
    H-invariant functional u, and composing with the summand generator w
    gives the endomorphism Σ_x action(x⁻¹)·uᵀ·w·action(x) of M.
    """
    G = M.group
    r = M.rank
    Md = dual(M)
    candidates = []
    seen = set()
    functionals: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
    for summand in cover.summands:
        key_h = summand.subgroup.elements
        if key_h not in functionals:
            functionals[key_h] = _rows(fixed_sublattice(summand.subgroup, Md))
        for u in functionals[key_h]:
            total = [[0] * r for _ in range(r)]
            columns = []
            for rep, _ in summand.cosets:
                col = M.action(G.inv(rep)).times_vector(u)
                row = M.action(rep).vector_times(summand.generator)
                columns.append(col)
                for i in range(r):
                    if col[i]:
                        for j in range(r):
                            total[i][j] += col[i] * row[j]
            key = tuple(x for line in total for x in line)
            if key in seen or not any(key):
                continue
            seen.add(key)
            candidates.append((key, summand, columns))
    return candidates


def _rows(m: IntMatrix):
    return [m.row(k) for k in range(m.rows)]


def is_invertible(M: GLattice, max_rank: Optional[int] = None) -> InvertibilityTest:
    """Does the coflasque cover split equivariantly? On success the section, else a certificate."""
    check_rank(M, max_rank)
    cover = coflasque_cover(M)
    P = cover.cover_lattice
    if M.rank == 0:
        return InvertibilityTest(True, cover, section=IntMatrix.zeros(0, P.rank))

    if M.is_permutation_lattice():
        section = _orbit_section(M, cover)
    else:
        candidates = _section_system(M, cover)
        target = [1 if i == j else 0 for i in range(M.rank) for j in range(M.rank)]
        system = IntMatrix.from_rows([key for key, _, _ in candidates], len(target)).T
        logger.debug(f"section system: {system.rows} equations in {system.cols} unknowns")
        y = solve_linear(system, target) if candidates else None
        if y is None:
            cert = diophantine_certificate(system, target)
            if cert is None or not cert.check(system, target):
                raise AssertionError("unsolvable section system without a certificate")
            return InvertibilityTest(False, cover, certificate=cert)
        rows = [[0] * P.rank for _ in range(M.rank)]
        for yk, (_, summand, columns) in zip(y, candidates):
            if not yk:
                continue
            for c, col in enumerate(columns):
                for i in range(M.rank):
                    rows[i][summand.offset + c] += yk * col[i]
        section = IntMatrix.from_rows(rows, P.rank)

    if not _check_section(M, cover, section):
        raise AssertionError("section failed verification")
    return InvertibilityTest(True, cover, section=section)


def _check_section(M: GLattice, cover: PermutationCover, section: IntMatrix) -> bool:
    if section @ cover.projection != IntMatrix.identity(M.rank):
        return False
    G = M.group
    P = cover.cover_lattice
    for s in range(len(G.generators)):
        g = G.generator_index(s)
        moved = M.action(g) @ section
        perm = P.perms[g]
        for i in range(P.rank):
            if moved.column(perm[i]) != section.column(i):
                return False
    return True
