import random

import pytest

from groups import (
    DegreeCapExceeded,
    FiniteGroup,
    NotAPermutation,
    OrderCapExceeded,
    alternating4,
    compose,
    cyclic,
    dihedral,
    direct_product,
    klein_four,
    subgroups,
    symmetric,
    trivial_group,
)


def brute_force_closure(degree, gens):
    identity = tuple(range(degree))
    found = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(p, g)
                if q not in found:
                    found.add(q)
                    nxt.append(q)
        frontier = nxt
    return found


def test_compose_reads_left_to_right():
    g = (1, 0, 2)
    h = (0, 2, 1)
    # point 0: g sends it to 1, then h sends 1 to 2
    assert compose(g, h)[0] == 2


@pytest.mark.parametrize("factory, order", [
    (lambda: cyclic(6), 6),
    (lambda: symmetric(3), 6),
    (lambda: symmetric(4), 24),
    (lambda: dihedral(4), 8),
    (klein_four, 4),
    (alternating4, 12),
    (trivial_group, 1),
    (lambda: direct_product(cyclic(2), cyclic(3)), 6),
])
def test_orders(factory, order):
    assert factory().order == order


@pytest.mark.parametrize("factory, count", [
    (lambda: cyclic(6), 4),
    (lambda: cyclic(1), 1),
    (lambda: symmetric(3), 6),
    (klein_four, 5),
    (lambda: dihedral(4), 10),
    (alternating4, 10),
    (lambda: symmetric(4), 30),
])
def test_subgroup_counts(factory, count):
    subs = subgroups(factory())
    assert len(subs) == count
    assert subs[0].is_trivial() and subs[-1].order == subs[-1].parent.order
    assert [H.order for H in subs] == sorted(H.order for H in subs)


def test_subgroups_are_closed_and_generated():
    G = symmetric(4)
    for H in subgroups(G):
        members = set(H.elements)
        for a in H.elements:
            assert G.inv(a) in members
            for b in H.elements:
                assert G.mul(a, b) in members
        assert G.closure(H.generators()) == H.elements


def test_closure_matches_brute_force():
    rng = random.Random(3)
    for _ in range(50):
        degree = rng.randint(1, 5)
        gens = []
        for _ in range(rng.randint(0, 2)):
            p = list(range(degree))
            rng.shuffle(p)
            gens.append(tuple(p))
        G = FiniteGroup.from_generators(degree, gens, max_order=120)
        assert set(G.elements) == brute_force_closure(degree, gens)
        assert G.elements[0] == tuple(range(degree))


def test_multiplication_table_is_consistent():
    G = dihedral(5)
    for i in range(G.order):
        assert G.mul(i, G.inv(i)) == G.identity_index
        for j in range(G.order):
            assert G.elements[G.mul(i, j)] == compose(G.elements[i], G.elements[j])


def test_right_cosets_partition_the_group():
    G = symmetric(3)
    H = next(H for H in subgroups(G) if H.order == 2)
    cosets = G.right_cosets(H)
    assert len(cosets) == 3
    covered = sorted(x for _, members in cosets for x in members)
    assert covered == list(range(G.order))
    for rep, members in cosets:
        assert rep in members


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        cyclic(65)
    with pytest.raises(OrderCapExceeded):
        symmetric(5)
    assert symmetric(5, max_order=120).order == 120


def test_rejects_non_permutations():
    with pytest.raises(NotAPermutation):
        FiniteGroup.from_generators(3, [(0, 0, 1)])
    with pytest.raises(NotAPermutation):
        cyclic(3).subgroup_from_perms([(1, 0, 2)])


def test_equality_is_by_generators():
    assert cyclic(4) == FiniteGroup.from_generators(4, [(1, 2, 3, 0)])
    assert cyclic(4) != klein_four()


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        FiniteGroup.from_generators(10 ** 12, [])
    with pytest.raises(DegreeCapExceeded):
        cyclic(10 ** 12, max_order=10 ** 12)
    assert FiniteGroup.from_generators(200, [], max_degree=200).order == 1
