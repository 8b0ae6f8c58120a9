"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[acceptance N] PASS|FAIL ...`` line.
"""
from __future__ import annotations

import itertools
import json
import math
import random
import time

import numpy as np
import pytest

from dimquot.abgroup import (
    AbSquare,
    FgAbelianGroup,
    exponent,
    exterior_square,
    is_pullback,
    is_pushout,
    phi,
    pullback_square,
    pushout_square,
    random_hom,
    tensor,
    whitehead_gamma,
)
from dimquot.catalog import builtin
from dimquot.crossed import (
    crossed_cube_check,
    cube_from_ideal_tuple,
    failed_axioms,
    finite_ideals,
    with_h,
    zero_h,
)
from dimquot.exactlinalg import contains_many, lattice_from_generators, lattice_intersect, lattice_sum
from dimquot.group import normal_subgroups
from dimquot.groupring import (
    IdealTuple,
    augmentation_ideal,
    bd_ideal,
    dimension_subgroup,
    group_ring,
    ideal_generated,
    ideal_product,
    integers,
    is_good_tuple,
    scalar_ideal,
    zero_ring,
)
from dimquot.report import ReportDocument, render_report
from dimquot.verify import (
    BUILTIN_CORPUS,
    PASS,
    TWO_GROUPS_16,
    CorpusConfig,
    check_bd,
    check_modg,
    run_corpus,
    sweep_free_example,
)

from oracles import aug_spanning_set, naive_dimension_subgroup, naive_hnf, naive_product_hnf

SMALL_GROUPS = [name for name in BUILTIN_CORPUS if builtin(name).order <= 8]
GAMMA_UNIVERSE = [
    c for k in (1, 2, 3) for c in itertools.combinations_with_replacement((2, 3, 4, 5, 6, 8, 9), k)
]


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def corpus_report():
    start = time.perf_counter()
    rep = run_corpus(CorpusConfig(checks=("exp2", "bd", "modg")))
    return rep, time.perf_counter() - start


def _by_check(rep, check):
    return [r for r in rep.records if r.check == check]


def _sides_json(rec) -> bytes:
    d, n = rec.sides
    return json.dumps([sorted(d.members), sorted(n.members), rec.d_order, rec.norm_order]).encode()


# 1 -------------------------------------------------------------------------------


def test_exponent_two_over_corpus(corpus_report, verdict):
    rep, elapsed = corpus_report
    recs = _by_check(rep, "exp2")
    bad = [r for r in recs if r.verdict != PASS or r.quotient is None or r.quotient["exponent"] not in (1, 2)]
    squares = all(r.detail["squares_in_n"] for r in recs)
    big = {r.group["name"] for r in recs if r.group["order"] > 16}
    ok = len(recs) >= 500 and not bad and squares and big
    verdict(1, ok, f"exp2: {len(recs)} triples, {len(bad)} failures, sampled groups {sorted(big)}, {elapsed:.1f}s")


# 2 -------------------------------------------------------------------------------


def test_bd_equality_over_corpus(corpus_report, verdict):
    rep, _ = corpus_report
    recs = _by_check(rep, "bd")
    bad = [r for r in recs if r.verdict != PASS or r.d_order != r.norm_order]
    verdict(2, len(recs) >= 300 and not bad, f"bd: {len(recs)} pairs, {len(bad)} failures")


# 3 -------------------------------------------------------------------------------


def test_modg_equality_and_bd_agreement(corpus_report, verdict):
    rep, _ = corpus_report
    recs = _by_check(rep, "modg")
    bad = [r for r in recs if r.verdict != PASS]
    mismatched = 0
    trivial_t = 0
    for name in BUILTIN_CORPUS:
        g = builtin(name)
        if g.order > 16:
            continue
        for r, s in itertools.combinations_with_replacement(normal_subgroups(g), 2):
            trivial_t += 1
            if _sides_json(check_modg(g, r, s, g.trivial)) != _sides_json(check_bd(g, r, s)):
                mismatched += 1
    ok = recs and not bad and not mismatched
    verdict(3, ok, f"modg: {len(recs)} triples, {len(bad)} failures; T=1 vs bd: {trivial_t} pairs, {mismatched} differ")


# 4 and 5 ----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def gamma_universe():
    rows = []
    for orders in GAMMA_UNIVERSE:
        a = FgAbelianGroup.from_cyclic(orders)
        rows.append((orders, a, whitehead_gamma(a), whitehead_gamma(a, "closed")))
    return rows


def test_gamma_calculus(gamma_universe, verdict):
    cyclic = all(
        whitehead_gamma(FgAbelianGroup.from_cyclic((n,))).order == math.gcd(2 * n, n * n) for n in range(1, 13)
    )
    disagree = [orders for orders, _, pres, closed in gamma_universe if pres != closed]
    ok = cyclic and not disagree
    verdict(4, ok, f"gamma: cyclic n=1..12 {'ok' if cyclic else 'wrong'}; {len(gamma_universe)} groups, {len(disagree)} disagree")


def test_phi_suite(gamma_universe, verdict):
    bad = []
    for orders, a, g, _ in gamma_universe:
        p = phi(a)
        if exponent(p) not in (1, 2) or p.order * tensor(a, a).order != g.order * exterior_square(a).order:
            bad.append(orders)
    verdict(5, not bad, f"phi: {len(gamma_universe)} groups, {len(bad)} failures")


# 6 -------------------------------------------------------------------------------


def _random_ideal(ring, rng):
    k = rng.randint(1, 2)
    return ideal_generated(ring, [[rng.randint(-2, 2) for _ in range(ring.rank)] for _ in range(k)])


def _mixed_ideal(g, ring, rng):
    pick = rng.random()
    if pick < 0.4:
        return augmentation_ideal(ring, rng.choice(normal_subgroups(g)))
    if pick < 0.55:
        return scalar_ideal(ring, rng.randint(0, 4))
    return _random_ideal(ring, rng)


def _distributive(ideals) -> bool:
    """I_i ∩ (I_j + I_k) = I_i∩I_j + I_i∩I_k for every i, on raw lattices."""
    n = ideals[0].lattice.ambient_rank
    for i in range(3):
        j, k = (x for x in range(3) if x != i)
        a, b, c = (ideals[x].lattice for x in (i, j, k))
        left = lattice_intersect(a, lattice_sum(b, c))
        parts = list(lattice_intersect(a, b).basis) + list(lattice_intersect(a, c).basis)
        if left.basis != naive_hnf(parts, n):
            return False
    return True


def test_goodness(verdict):
    rng = random.Random(2024)
    groups = [builtin(name) for name in SMALL_GROUPS]
    pairs_bad = 0
    for _ in range(100):
        g = rng.choice(groups)
        ring = group_ring(g)
        if not is_good_tuple(IdealTuple(ring, (_random_ideal(ring, rng), _random_ideal(ring, rng)))).good:
            pairs_bad += 1
    disagree = 0
    good_count = 0
    for _ in range(200):
        g = rng.choice(groups)
        ring = group_ring(g)
        ideals = tuple(_mixed_ideal(g, ring, rng) for _ in range(3))
        good = is_good_tuple(IdealTuple(ring, ideals)).good
        good_count += good
        disagree += good != _distributive(ideals)
    z = zero_ring(2)
    counter = IdealTuple(z, tuple(ideal_generated(z, [v]) for v in ([1, 0], [0, 1], [1, 1])))
    rejected = not is_good_tuple(counter).good
    ok = pairs_bad == 0 and disagree == 0 and rejected and 0 < good_count < 200
    verdict(
        6,
        ok,
        f"goodness: 100 pairs, {pairs_bad} not good; 200 triples ({good_count} good), "
        f"{disagree} disagree with distributivity; counterexample {'rejected' if rejected else 'accepted'}",
    )


# 7 -------------------------------------------------------------------------------


def test_symmetric_inclusions(verdict):
    rep = run_corpus(CorpusConfig(checks=("incl", "aux")))
    counts = {c: len(_by_check(rep, c)) for c in ("incl2", "incl3", "incl4", "aux")}
    bad = [r for r in rep.records if r.verdict != PASS]
    ok = all(counts.values()) and not bad
    verdict(7, ok, f"inclusions: {counts}, {len(bad)} failures")


# 8 -------------------------------------------------------------------------------

SQUARE_GROUPS = [FgAbelianGroup()] + [
    FgAbelianGroup.from_cyclic(c) for c in GAMMA_UNIVERSE if len(c) <= 2 and math.prod(c) <= 36
]


def _square(seed: int) -> AbSquare:
    rng = random.Random(seed)
    kind = seed % 4
    a, b, c, d = (rng.choice(SQUARE_GROUPS) for _ in range(4))
    if kind in (0, 2):
        s = pushout_square(random_hom(a, b, rng), random_hom(a, c, rng))
        if kind == 2:
            h = random_hom(s.D, d, rng)
            s = AbSquare(s.f, s.g, h.compose(s.g_prime), h.compose(s.f_prime))
    else:
        s = pullback_square(random_hom(b, d, rng), random_hom(c, d, rng))
        if kind == 3:
            h = random_hom(a, s.A, rng)
            s = AbSquare(s.f.compose(h), s.g.compose(h), s.g_prime, s.f_prime)
    return s


def test_square_criteria(verdict):
    inconsistent = 0
    tally = {"pushout": 0, "pullback": 0}
    for seed in range(200):
        s = _square(seed)
        po, pb = is_pushout(s), is_pullback(s)
        if not (po.consistent and pb.consistent):
            inconsistent += 1
            continue
        tally["pushout"] += po.verdict
        tally["pullback"] += pb.verdict
    ok = inconsistent == 0 and 0 < tally["pushout"] < 200 and 0 < tally["pullback"] < 200
    verdict(8, ok, f"squares: 200 generated, {inconsistent} with disagreeing criteria, verdict counts {tally}")


# 9 -------------------------------------------------------------------------------


def _coset_matrix(g, members):
    rows, seen = [], set()
    for h in range(g.order):
        if h not in seen:
            coset = {g.mult[h][x] for x in members}
            seen |= coset
            rows.append([1 if y in coset else 0 for y in range(g.order)])
    return np.array(rows, dtype=np.int64)


def test_oracle_equivalence(verdict):
    failures = []
    instances = 0
    for name in SMALL_GROUPS:
        g = builtin(name)
        ring = group_ring(g)
        box = np.array(list(itertools.product((-1, 0, 1), repeat=g.order)), dtype=np.int64)
        subs = normal_subgroups(g)
        cosets = {s.members: _coset_matrix(g, s.members) for s in subs}
        spans = {s.members: aug_spanning_set(g, s.members) for s in subs}
        for r, s in itertools.combinations_with_replacement(subs, 2):
            instances += 1
            a, b = augmentation_ideal(ring, r), augmentation_ideal(ring, s)
            inter = lattice_intersect(a.lattice, b.lattice)
            expect = np.all(box @ cosets[r.members].T == 0, axis=1) & np.all(box @ cosets[s.members].T == 0, axis=1)
            if not np.array_equal(contains_many(inter, box), expect):
                failures.append(("intersect", name))
            prod = naive_product_hnf(g, spans[r.members], spans[s.members])
            if prod != ideal_product(a, b).lattice.basis:
                failures.append(("product", name))
            for ideal in (bd_ideal(a, b), ideal_product(a, b)):
                gens = [list(v) for v in ideal.lattice.basis]
                if naive_dimension_subgroup(g, gens) != dimension_subgroup(g, ideal).members:
                    failures.append(("dimension", name))
        # intersections of random lattices against their enumerated spans
        rng = random.Random(name)
        for _ in range(5):
            n = g.order
            x = lattice_from_generators([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n)
            y = lattice_from_generators([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n)
            inter = lattice_intersect(x, y)
            pts = box[np.flatnonzero(contains_many(x, box) & contains_many(y, box))]
            if not np.all(contains_many(inter, pts)) or not np.all(contains_many(x, np.array(inter.basis).reshape(-1, n))):
                failures.append(("random intersect", name))
    verdict(9, not failures, f"oracles: {len(SMALL_GROUPS)} groups, {instances} subgroup pairs, failures {failures[:3]}")


# 10 ------------------------------------------------------------------------------

CUBE_RINGS = [("Z", m) for m in range(2, 9)] + [("C2", 2), ("C2", 3), ("C3", 2)]


def test_crossed_cubes(verdict):
    cubes = 0
    failing = []
    for name, m in CUBE_RINGS:
        ring = integers() if name == "Z" else group_ring(builtin(name))
        for triple in itertools.combinations_with_replacement(finite_ideals(ring, m), 3):
            t = IdealTuple(ring, triple)
            if not is_good_tuple(t).good:
                continue
            cubes += 1
            failed = failed_axioms(crossed_cube_check(cube_from_ideal_tuple(t, m)))
            if failed:
                failing.append((name, m, failed))
    z = integers()
    two = next(i for i in finite_ideals(z, 8) if i.lattice.basis == ((2,),))
    d = cube_from_ideal_tuple(IdealTuple(z, (two,)), 8)
    fixture = failed_axioms(crossed_cube_check(with_h(d, zero_h(d))))
    ok = cubes > 0 and not failing and fixture == ["h(a@a') = aa'"]
    verdict(10, ok, f"crossed cubes: {cubes} from good triples, {len(failing)} failing; corrupted h fails {fixture}")


# 11 ------------------------------------------------------------------------------


def test_free_example_probe(verdict):
    records, stats, assignments = [], {}, 0
    for name in TWO_GROUPS_16:
        sweep = sweep_free_example(builtin(name))
        records += sweep.records
        assignments += sweep.assignments
        stats[name] = {"surjective": sweep.surjective, "rank_counts": sweep.rank_counts}
    doc = json.loads(
        render_report(ReportDocument({"targets": list(TWO_GROUPS_16)}, records, statistics=stats), deterministic=True)
    )
    bad = [r for r in records if r.verdict != PASS or r.quotient is None or r.quotient["exponent"] not in (1, 2)]
    ok = not bad and doc.get("statistics") and doc["summary"]["fail"] == 0
    nontrivial = sum(1 for r in records if r.quotient and r.quotient["exponent"] == 2)
    verdict(
        11,
        bool(ok),
        f"probe: {len(TWO_GROUPS_16)} targets, {assignments} assignments, {len(records)} distinct images, "
        f"{len(bad)} failures, {nontrivial} with nontrivial quotient",
    )
