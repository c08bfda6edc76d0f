import itertools

import pytest
from sympy import Matrix, factorint, multiplicity

from glattice import (
    AbelianInvariants,
    GLattice,
    GroupMismatch,
    InvalidAction,
    RankCapExceeded,
    augmentation_kernel,
    coflasque_cover,
    direct_sum,
    dual,
    fixed_sublattice,
    h1,
    is_coflasque,
    is_flasque,
    is_invertible,
    norm_quotient,
    permutation_lattice,
    regular_lattice,
    sign_lattice,
    trivial_lattice,
    verify_cover,
)
from groups import (
    FiniteGroup,
    alternating4,
    cyclic,
    dihedral,
    direct_product,
    klein_four,
    subgroups,
    symmetric,
    trivial_group,
)
from intlinalg import IntMatrix


def killed_by(H, M, k):
    """|H¹(H, M)[k]| = |(M/kM)^H| / k^(rank M^H), counted point by point."""
    gens = [M.action(h) for h in H.generators()]
    fixed_mod_k = 0
    for v in itertools.product(range(k), repeat=M.rank):
        if all(all((x - y) % k == 0 for x, y in zip(a.vector_times(v), v)) for a in gens):
            fixed_mod_k += 1
    if gens:
        stacked = Matrix.hstack(*[Matrix(a.to_lists()) - Matrix.eye(M.rank) for a in gens])
        invariant_rank = M.rank - stacked.rank()
    else:
        invariant_rank = M.rank
    count, rem = divmod(fixed_mod_k, k ** invariant_rank)
    assert rem == 0
    return count


def h1_order_by_enumeration(H, M):
    return killed_by(H, M, H.order)


def h1_elementary_divisors_by_enumeration(H, M):
    """Cyclic p-factors of order at least p^j number log_p(|A[p^j]| / |A[p^(j-1)]|)."""
    out = []
    for p, e in factorint(H.order).items():
        sizes = [killed_by(H, M, p ** j) for j in range(e + 1)]
        at_least = [multiplicity(p, sizes[j] // sizes[j - 1]) for j in range(1, e + 1)] + [0]
        for j in range(1, e + 1):
            out += [p ** j] * (at_least[j - 1] - at_least[j])
    return sorted(out)


def elementary_divisors(inv: AbelianInvariants):
    return sorted(p ** e for d in inv.torsion for p, e in factorint(d).items())


# ─── Construction ───

def test_permutation_lattice_shapes():
    c2 = cyclic(2)
    P = regular_lattice(c2)
    assert P.rank == 2 and P.is_permutation_lattice()
    assert P.action(1) == IntMatrix.from_rows([[0, 1], [1, 0]])
    s3 = symmetric(3)
    H = next(H for H in subgroups(s3) if H.order == 2)
    assert permutation_lattice(s3, H).rank == 3


def test_action_is_a_homomorphism(library):
    for name, M in library:
        G = M.group
        for g in range(G.order):
            for h in range(G.order):
                assert M.action(G.mul(g, h)) == M.action(g) @ M.action(h), name


def test_rejects_invalid_actions():
    with pytest.raises(InvalidAction):
        GLattice(cyclic(3), 1, [IntMatrix(1, 1, [-1])])
    with pytest.raises(InvalidAction):
        GLattice(cyclic(2), 1, [IntMatrix(1, 1, [2])])
    with pytest.raises(InvalidAction):
        GLattice(cyclic(2), 2, [IntMatrix.identity(3)])


def test_direct_sum_needs_one_group():
    with pytest.raises(GroupMismatch):
        direct_sum(trivial_lattice(cyclic(2)), trivial_lattice(cyclic(3)))


def test_dual_is_an_involution(library):
    for name, M in library:
        assert dual(dual(M)) == M, name


def test_fixed_sublattice_examples():
    c2 = cyclic(2)
    whole = c2.whole()
    assert fixed_sublattice(whole, regular_lattice(c2)).to_lists() == [[1, 1]]
    assert fixed_sublattice(whole, sign_lattice(c2, [-1])).rows == 0
    sign_plus = direct_sum(sign_lattice(c2, [-1]), trivial_lattice(c2))
    assert fixed_sublattice(whole, sign_plus).to_lists() == [[0, 1]]


# ─── Cohomology ───

def test_h1_of_sign_is_z2():
    c2 = cyclic(2)
    M = sign_lattice(c2, [-1])
    assert h1(c2.whole(), M) == AbelianInvariants((2,))
    assert str(h1(c2.whole(), M)) == "Z/2"
    assert h1_order_by_enumeration(c2.whole(), M) == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_h1_of_regular_cyclic_vanishes(n):
    G = cyclic(n)
    M = regular_lattice(G)
    assert h1(G.whole(), M).is_trivial()
    assert h1_order_by_enumeration(G.whole(), M) == 1


def test_h1_of_augmentation_kernel_over_c3():
    G = cyclic(3)
    M = augmentation_kernel(G, G.trivial_subgroup())
    assert h1(G.whole(), M) == AbelianInvariants((3,))
    assert h1_order_by_enumeration(G.whole(), M) == 3


def test_h1_matches_enumeration_on_library(library):
    for name, M in library:
        if M.rank > 4:
            continue
        for H in subgroups(M.group):
            if H.order ** M.rank > 5000:
                continue
            expected = h1_elementary_divisors_by_enumeration(H, M)
            assert elementary_divisors(h1(H, M)) == expected, (name, H.order)


def test_h1_separates_z4_from_z2_squared():
    c2 = cyclic(2)
    two_signs = direct_sum(sign_lattice(c2, [-1]), sign_lattice(c2, [-1]))
    assert h1(c2.whole(), two_signs) == AbelianInvariants((2, 2))
    assert h1_elementary_divisors_by_enumeration(c2.whole(), two_signs) == [2, 2]

    c4 = cyclic(4)
    M = augmentation_kernel(c4, c4.trivial_subgroup())
    assert h1(c4.whole(), M) == AbelianInvariants((4,))
    assert h1_elementary_divisors_by_enumeration(c4.whole(), M) == [4]

    v4 = klein_four()
    J = norm_quotient(v4, v4.trivial_subgroup())
    assert h1(v4.whole(), J) == AbelianInvariants((2, 2))
    assert h1_elementary_divisors_by_enumeration(v4.whole(), J) == [2, 2]
    K = augmentation_kernel(v4, v4.trivial_subgroup())
    assert h1(v4.whole(), K) == AbelianInvariants((4,))
    assert h1_elementary_divisors_by_enumeration(v4.whole(), K) == [4]


def test_h1_respects_rank_cap():
    G = cyclic(2)
    M = trivial_lattice(G, 3)
    with pytest.raises(RankCapExceeded):
        h1(G.whole(), M, max_rank=2)


def test_flasque_and_coflasque_obstructions():
    c2 = cyclic(2)
    sign = sign_lattice(c2, [-1])
    co = is_coflasque(sign)
    assert not co.holds and co.subgroup.order == 2 and str(co.invariants) == "Z/2"
    assert is_flasque(sign).holds is False
    assert is_coflasque(regular_lattice(c2)).holds
    assert is_flasque(trivial_lattice(c2)).holds


# ─── Covers and invertibility ───

def test_coflasque_cover_verifies(library):
    for name, M in library:
        cover = coflasque_cover(M)
        assert verify_cover(cover, M), name
        assert cover.cover_lattice.is_permutation_lattice()


def test_cover_summand_tags_over_c2():
    c2 = cyclic(2)
    cover = coflasque_cover(regular_lattice(c2))
    tags = [(H.order, count) for H, count in cover.summand_tags]
    assert tags == [(1, 2), (2, 1)]


def test_invertibility_examples():
    c2 = cyclic(2)
    assert is_invertible(regular_lattice(c2)).holds
    assert is_invertible(trivial_lattice(c2, 3)).holds
    sign_plus = direct_sum(sign_lattice(c2, [-1]), trivial_lattice(c2))
    test = is_invertible(sign_plus)
    assert not test.holds
    assert test.certificate is not None and test.section is None


def test_invertibility_coherence(library):
    assert len(library) >= 20
    for name, M in library:
        inv = is_invertible(M)
        if inv.holds:
            assert is_flasque(M).holds and is_coflasque(M).holds, name
            assert inv.section @ inv.cover.projection == IntMatrix.identity(M.rank), name
        assert is_invertible(dual(M)).holds == inv.holds, name


def test_permutation_lattices_have_sections(library):
    for name, M in library:
        if not M.is_permutation_lattice():
            continue
        test = is_invertible(M)
        assert test.holds, name
        assert test.section @ test.cover.projection == IntMatrix.identity(M.rank), name


def test_norm_quotient_of_klein_four_is_not_invertible():
    v4 = klein_four()
    J = norm_quotient(v4, v4.trivial_subgroup())
    assert not is_flasque(J).holds
    assert not is_invertible(J).holds


def test_invertibility_respects_rank_cap():
    with pytest.raises(RankCapExceeded):
        is_invertible(trivial_lattice(cyclic(2), 4), max_rank=3)


def test_direct_sums_are_invertible_exactly_when_both_parts_are(library):
    invertible = {name: is_invertible(M).holds for name, M in library}
    for (n1, M1), (n2, M2) in itertools.combinations_with_replacement(library, 2):
        if M1.group != M2.group or M1.rank + M2.rank > 6:
            continue
        expected = invertible[n1] and invertible[n2]
        assert is_invertible(direct_sum(M1, M2)).holds == expected, (n1, n2)


def small_groups():
    """One group of each isomorphism type of order at most 12."""
    quaternion = FiniteGroup.from_generators(8, [(1, 3, 5, 6, 2, 7, 0, 4), (2, 4, 3, 7, 6, 1, 5, 0)])
    dicyclic = FiniteGroup.from_generators(7, [(1, 2, 0, 3, 4, 5, 6), (0, 2, 1, 4, 5, 6, 3)])
    return [
        trivial_group(),
        *[cyclic(n) for n in range(2, 13)],
        klein_four(),
        symmetric(3),
        direct_product(cyclic(4), cyclic(2)),
        direct_product(klein_four(), cyclic(2)),
        dihedral(4),
        quaternion,
        direct_product(cyclic(3), cyclic(3)),
        dihedral(5),
        direct_product(cyclic(2), cyclic(6)),
        dihedral(6),
        alternating4(),
        dicyclic,
    ]


def test_small_groups_have_the_expected_orders():
    orders = sorted(G.order for G in small_groups())
    assert orders == sorted([1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8,
                             9, 9, 10, 10, 11, 12, 12, 12, 12, 12])


def test_every_permutation_lattice_is_invertible():
    for G in small_groups():
        for H in subgroups(G):
            M = permutation_lattice(G, H)
            test = is_invertible(M)
            assert test.holds, (G.order, H.order)
            assert test.section @ test.cover.projection == IntMatrix.identity(M.rank)
