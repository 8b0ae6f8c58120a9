from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dimquot.catalog import builtin
from dimquot.exactlinalg import lattice_from_generators
from dimquot.group import (
    NotNormal,
    commutator_subgroup,
    join,
    normal_subgroups,
    subgroup,
)
from dimquot.groupring import (
    ClosureViolation,
    IdealTuple,
    RingError,
    augmentation_ideal,
    bd_ideal,
    dimension_subgroup,
    e_idl_cube,
    group_ring,
    ideal_from_lattice,
    ideal_generated,
    ideal_intersect,
    ideal_product,
    ideal_sum,
    integers,
    is_good_tuple,
    modg_ideal,
    scalar_ideal,
    structure_ring,
    symmetric_ideal,
    zero_ring,
)

from oracles import aug_spanning_set, coset_sums_vanish, gr_mul, naive_dimension_subgroup, naive_hnf, naive_product_hnf


def closed(ideal) -> bool:
    ring = ideal.ambient
    for row in ideal.lattice.basis:
        for i in range(ring.rank):
            e = ring.basis_element(i)
            if ring.multiply(row, e) not in ideal or ring.multiply(e, row) not in ideal:
                return False
    return True


@pytest.fixture(scope="module")
def c2():
    g = builtin("C2")
    ring = group_ring(g)
    return g, ring, augmentation_ideal(ring, g.whole)


@pytest.fixture(scope="module")
def s3():
    g = builtin("S3")
    ring = group_ring(g)
    a3 = next(s for s in normal_subgroups(g) if s.order == 3)
    return g, ring, a3


# -- rings ---------------------------------------------------------------------


def test_group_ring_examples(c2, s3):
    triv = integers()
    assert triv.rank == 1 and triv.multiply([1], [1]) == (1,)
    g, ring, _ = c2
    t = ring.basis_element(1)
    assert ring.multiply(t, t) == (1, 0)
    g3, ring3, _ = s3
    for i, j in itertools.product(range(6), repeat=2):
        prod = ring3.multiply(ring3.basis_element(i), ring3.basis_element(j))
        assert prod == ring3.basis_element(g3.mult[i][j])


def test_group_ring_product_matches_definition():
    g = builtin("D4")
    ring = group_ring(g)
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = rng.integers(-3, 4, size=(2, 8)).tolist()
        assert list(ring.multiply(x, y)) == gr_mul(g, x, y)


def test_structure_ring_associativity_checked():
    # e0*e0 = e1, everything else zero: associative
    t = np.zeros((2, 2, 2), dtype=np.int64)
    t[0, 0, 1] = 1
    structure_ring(t)
    # e0*e0 = e0 + e1, e0*e1 = e1, e1*e0 = 0 is not associative
    bad = np.zeros((2, 2, 2), dtype=np.int64)
    bad[0, 0] = [1, 1]
    bad[0, 1] = [0, 1]
    with pytest.raises(RingError):
        structure_ring(bad)


def test_zero_ring_products_vanish():
    r = zero_ring(3)
    assert r.multiply([1, 2, 3], [4, 5, 6]) == (0, 0, 0)


def test_closure_violation():
    ring = group_ring(builtin("C2"))
    with pytest.raises(ClosureViolation):
        ideal_from_lattice(ring, lattice_from_generators([[1, 0]], 2))


# -- ideals ----------------------------------------------------------------------


def test_augmentation_examples(c2, s3):
    g, ring, delta = c2
    assert augmentation_ideal(ring, g.trivial).lattice.is_zero
    assert delta.lattice.basis == ((1, -1),)
    assert (-1, 1) in delta
    g3, ring3, _ = s3
    assert augmentation_ideal(ring3, g3.whole).rank == 5


def test_augmentation_requires_normal(s3):
    g, ring, _ = s3
    with pytest.raises(NotNormal):
        augmentation_ideal(ring, subgroup(g, [2]))


def test_product_examples(c2):
    g, ring, delta = c2
    assert ideal_product(delta, ring.zero()) == ring.zero()
    two_delta = ideal_product(delta, delta)
    assert two_delta.lattice.basis == ((2, -2),)
    assert closed(two_delta)


def test_symmetric_ideal_examples(c2):
    g, ring, delta = c2
    assert symmetric_ideal([delta, delta]) == bd_ideal(delta, delta)
    assert symmetric_ideal([delta] * 3).lattice.basis == ((2, -2),)


def test_symmetric_ideal_with_zero_member(s3):
    g, ring, a3 = s3
    r, s, z = augmentation_ideal(ring, a3), augmentation_ideal(ring, g.whole), ring.zero()
    got = symmetric_ideal([r, s, z])
    # direct expansion: only the split {r, s} | {z} has a zero side
    rs_z = ideal_intersect(r, s)
    direct = ideal_sum(bd_ideal(r, ideal_intersect(s, z)), bd_ideal(s, ideal_intersect(r, z)))
    direct = ideal_sum(direct, bd_ideal(z, rs_z))
    assert got == direct == ring.zero()


def test_symmetric_ideal_range(c2):
    g, ring, delta = c2
    with pytest.raises(RingError):
        symmetric_ideal([delta])


def test_dimension_subgroup_examples(c2, s3):
    g, ring, delta = c2
    assert dimension_subgroup(g, ideal_product(delta, delta)).order == 1
    assert dimension_subgroup(g, ring.zero()).order == 1
    g3, ring3, a3 = s3
    r, s = augmentation_ideal(ring3, a3), augmentation_ideal(ring3, g3.whole)
    d = dimension_subgroup(g3, bd_ideal(r, s))
    assert d == a3 == commutator_subgroup(a3, g3.whole)
    assert d.normal


def test_dimension_subgroup_wrong_ring(c2, s3):
    g, ring, delta = c2
    with pytest.raises(RingError):
        dimension_subgroup(s3[0], delta)


def test_modg_with_zero_t_is_bd(s3):
    g, ring, a3 = s3
    r, s = augmentation_ideal(ring, a3), augmentation_ideal(ring, g.whole)
    assert modg_ideal(r, s, ring.zero()) == bd_ideal(r, s)


def test_bd_of_equal_ideals(s3):
    g, ring, _ = s3
    r = augmentation_ideal(ring, g.whole)
    assert bd_ideal(r, r) == ideal_product(r, r)


def test_ideal_generated_and_scalar():
    z = integers()
    assert ideal_generated(z, [[6], [10]]).lattice.basis == ((2,),)
    ring = group_ring(builtin("C3"))
    i = ideal_generated(ring, [[1, 0, 0]])
    assert i == ring.full()
    assert scalar_ideal(ring, 4).lattice.basis == ((4, 0, 0), (0, 4, 0), (0, 0, 4))


# -- goodness and the cube -------------------------------------------------------


def zideal(m):
    return ideal_generated(integers(), [[m]])


def test_principal_ideal_triple_is_good():
    t = IdealTuple(integers(), (zideal(2), zideal(3), zideal(4)))
    assert is_good_tuple(t).good


def test_zero_ring_triple_is_not_good():
    ring = zero_ring(2)
    i, j, k = (ideal_generated(ring, [v]) for v in ([1, 0], [0, 1], [1, 1]))
    res = is_good_tuple(IdealTuple(ring, (i, j, k)))
    assert not res.good
    assert res.witness == ((2, 3), (), 1)


def test_goodness_limit():
    with pytest.raises(RingError):
        is_good_tuple(IdealTuple(integers(), (zideal(2),) * 6))


def test_e_idl_two_by_two():
    t = IdealTuple(integers(), (zideal(2), zideal(3)))
    cube = e_idl_cube(t)
    assert len(cube) == 9
    assert (cube[((), (1, 2))].invariant_factors, cube[((), (1, 2))].free_rank) == ((), 1)
    assert cube[((1, 2), ())].order == 1
    assert cube[((1,), ())].invariant_factors == (2,)
    assert cube[((2,), (1,))].invariant_factors == (3,)
    assert cube[((), ())].free_rank == 1 and not cube[((), ())].invariant_factors


def test_e_idl_all_zero(s3):
    g, ring, _ = s3
    cube = e_idl_cube(IdealTuple(ring, (ring.zero(), ring.zero())))
    for (alpha, beta), entry in cube.items():
        if beta:
            assert entry.order == 1
        else:
            assert entry.free_rank == 6 and not entry.invariant_factors


# -- properties ----------------------------------------------------------------

PROPERTY_GROUPS = ["C4", "C2xC2", "S3", "D4", "Q8", "C6", "C2^3"]


def normal_ideals(n):
    def build(name):
        g = builtin(name)
        ring = group_ring(g)
        subs = normal_subgroups(g)
        return st.tuples(
            st.just(g),
            st.lists(st.sampled_from(subs), min_size=n, max_size=n).map(
                lambda ss: [augmentation_ideal(ring, s) for s in ss]
            ),
        )

    return st.sampled_from(PROPERTY_GROUPS).flatmap(build)


@pytest.mark.parametrize("name", ["C2", "C6", "C2xC2", "S3", "D4", "Q8", "A4", "C2^3", "C3^2", "D5"])
def test_augmentation_rank_is_order_minus_cosets(name):
    g = builtin(name)
    ring = group_ring(g)
    for r in normal_subgroups(g):
        a = augmentation_ideal(ring, r)
        assert a.rank == g.order - g.order // r.order
        assert closed(a)


@given(normal_ideals(3))
def test_product_associative_and_distributive(case):
    g, (a, b, c) = case
    assert ideal_product(ideal_product(a, b), c) == ideal_product(a, ideal_product(b, c))
    assert ideal_product(a, ideal_sum(b, c)) == ideal_sum(ideal_product(a, b), ideal_product(a, c))
    assert ideal_product(ideal_sum(a, b), c) == ideal_sum(ideal_product(a, c), ideal_product(b, c))


@given(normal_ideals(2))
def test_results_are_two_sided(case):
    g, (a, b) = case
    for ideal in (ideal_product(a, b), ideal_sum(a, b), ideal_intersect(a, b), bd_ideal(a, b)):
        assert closed(ideal)


@given(st.integers(2, 4).flatmap(normal_ideals), st.randoms(use_true_random=False))
def test_symmetric_ideal_permutation_invariant(case, rnd):
    g, ideals = case
    sym = symmetric_ideal(ideals)
    shuffled = list(ideals)
    rnd.shuffle(shuffled)
    assert symmetric_ideal(shuffled) == sym
    total = ideals[0]
    for i in ideals[1:]:
        total = ideal_sum(total, i)
    assert sym <= total
    meet = ideals[0]
    for i in ideals[1:]:
        meet = ideal_intersect(meet, i)
    # each summand is a product of two ideals, hence lies in the intersection
    assert sym <= meet


@given(normal_ideals(2))
def test_two_fold_symmetric_ideal_is_bd(case):
    g, (a, b) = case
    assert symmetric_ideal([a, b]) == bd_ideal(a, b)


@given(normal_ideals(2))
def test_dimension_subgroup_inclusions(case):
    g, (a, b) = case
    a2, b2 = ideal_product(a, a), ideal_product(b, b)
    da, db = dimension_subgroup(g, a2), dimension_subgroup(g, b2)
    s = dimension_subgroup(g, ideal_sum(a2, b2))
    assert join([da, db]).members <= s.members
    assert commutator_subgroup(da, db).members <= dimension_subgroup(g, bd_ideal(a2, b2)).members
    if a2 <= b2:
        assert da.members <= db.members


def _cube_orders_consistent(t):
    cube = e_idl_cube(t)
    n = t.n
    for (alpha, beta), entry in cube.items():
        for k in range(1, n + 1):
            if k in alpha or k in beta:
                continue
            sub = cube[(alpha, tuple(sorted(beta + (k,))))]
            quo = cube[(tuple(sorted(alpha + (k,))), beta)]
            assert entry.free_rank == sub.free_rank + quo.free_rank
            if entry.free_rank == 0:
                assert entry.order == sub.order * quo.order


@given(st.lists(st.integers(0, 12), min_size=2, max_size=3))
def test_principal_ideal_tuples_good_and_exact(ms):
    t = IdealTuple(integers(), tuple(zideal(m) for m in ms))
    assert is_good_tuple(t).good
    _cube_orders_consistent(t)


@given(normal_ideals(3))
def test_good_augmentation_triples_have_exact_cube_rows(case):
    g, ideals = case
    t = IdealTuple(ideals[0].ambient, tuple(ideals))
    if is_good_tuple(t).good:
        _cube_orders_consistent(t)


# -- oracles ---------------------------------------------------------------------


@pytest.mark.parametrize("name", ["C4", "C2xC2", "S3", "D4"])
def test_product_and_dimension_subgroup_match_oracles(name):
    g = builtin(name)
    ring = group_ring(g)
    subs = normal_subgroups(g)
    for r, s in itertools.combinations_with_replacement(subs, 2):
        a, b = augmentation_ideal(ring, r), augmentation_ideal(ring, s)
        span_a, span_b = aug_spanning_set(g, r.members), aug_spanning_set(g, s.members)
        assert naive_hnf(span_a, g.order) == a.lattice.basis
        assert naive_product_hnf(g, span_a, span_b) == ideal_product(a, b).lattice.basis
        bd = bd_ideal(a, b)
        assert naive_dimension_subgroup(g, [list(v) for v in bd.lattice.basis]) == dimension_subgroup(g, bd).members


def test_augmentation_membership_matches_coset_criterion():
    g = builtin("S3")
    ring = group_ring(g)
    rng = random.Random(5)
    for r in normal_subgroups(g):
        a = augmentation_ideal(ring, r)
        for _ in range(50):
            v = [rng.randint(-2, 2) for _ in range(6)]
            # nudge half of the samples into the ideal
            if rng.random() < 0.5:
                v[0] -= sum(v)
            assert (tuple(v) in a) == coset_sums_vanish(g, r.members, v)
