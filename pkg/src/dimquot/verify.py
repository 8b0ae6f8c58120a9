"""Identity checks over finite groups, and the corpus harness that runs them."""
from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .catalog import builtin
from .exactlinalg import quotient_invariants
from .group import (
    CONNECTIVITY_CONVENTION,
    FiniteGroup,
    GroupError,
    QuotientStructure,
    Subgroup,
    commutator_subgroup,
    generate,
    intersect,
    intersect_all,
    is_connected_tuple,
    normal_closure,
    normal_subgroups,
    quotient_structure,
    subgroup_as_group,
    subgroup_product,
    symmetric_commutator,
)
from .groupring import (
    AmbientRing,
    CubeEntry,
    Ideal,
    augmentation_ideal,
    bd_ideal,
    dimension_subgroup,
    group_ring,
    ideal_product,
    ideal_sum,
    intersect_all as ideal_intersect_all,
    modg_ideal,
    symmetric_ideal,
)

PASS, FAIL, INAPPLICABLE = "pass", "fail", "inapplicable"
CHECKS = ("exp2", "bd", "modg", "incl", "aux")
SUBGROUP_NAMES = ("R", "S", "T", "U", "V", "W")


@dataclass
class VerificationRecord:
    check: str
    group: dict
    subgroups: list[dict]
    d_order: int | None
    norm_order: int | None
    quotient: dict | None
    verdict: str
    detail: dict = field(default_factory=dict)
    timing: float = 0.0
    # live subgroups behind the numbers; never serialized
    sides: tuple = field(default=(), compare=False, repr=False)

    def to_json(self, deterministic: bool = False) -> dict:
        detail = dict(self.detail)
        detail["elapsed_s"] = 0.0 if deterministic else round(self.timing, 6)
        return {
            "check": self.check,
            "group": self.group,
            "subgroups": self.subgroups,
            "d_order": self.d_order,
            "norm_order": self.norm_order,
            "quotient": self.quotient,
            "verdict": self.verdict,
            "detail": detail,
        }


def describe_group(g: FiniteGroup) -> dict:
    return {"name": g.name or "?", "order": g.order}


def describe_subgroups(subs: Sequence[Subgroup], names: Sequence[str] | None = None) -> list[dict]:
    names = names or SUBGROUP_NAMES
    out = []
    for nm, s in zip(names, subs):
        g = s.parent
        out.append({"name": nm, "order": s.order, "generators": [g.label(x) for x in s.generators()]})
    return out


def describe_quotient(q: QuotientStructure | None) -> dict | None:
    if q is None:
        return None
    factors = list(q.invariant_factors) if q.invariant_factors is not None else None
    return {"invariant_factors": factors, "exponent": q.exponent, "abelian": q.abelian}


@lru_cache(maxsize=None)
def _aug(g: FiniteGroup, r: Subgroup) -> Ideal:
    return augmentation_ideal(group_ring(g), r)


def _record(check, g, subs, d, n, verdict, detail, start, quotient=None, names=None) -> VerificationRecord:
    return VerificationRecord(
        check=check,
        group=describe_group(g),
        subgroups=describe_subgroups(subs, names),
        d_order=d.order if d is not None else None,
        norm_order=n.order if n is not None else None,
        quotient=describe_quotient(quotient),
        verdict=verdict,
        detail=detail,
        timing=time.perf_counter() - start,
        sides=(d, n),
    )


def _quotient_if_contained(g, d, n):
    return quotient_structure(g, d, n) if n.members <= d.members else None


def check_exponent2(g: FiniteGroup, r: Subgroup, s: Subgroup, t: Subgroup) -> VerificationRecord:
    """D(G,‖r,s,t‖)/‖R,S,T‖ has exponent dividing 2, and g² ∈ ‖R,S,T‖ for each g in D."""
    start = time.perf_counter()
    n = symmetric_commutator([r, s, t])
    d = dimension_subgroup(g, symmetric_ideal([_aug(g, r), _aug(g, s), _aug(g, t)]))
    contained = n.members <= d.members
    pointwise = all(g.mult[x][x] in n.members for x in d.members)
    q = _quotient_if_contained(g, d, n)
    ok = contained and pointwise and q is not None and 2 % q.exponent == 0
    detail = {"n_in_d": contained, "squares_in_n": pointwise}
    if not ok:
        detail["reason"] = "N not contained in D" if not contained else "quotient exponent does not divide 2"
    return _record("exp2", g, [r, s, t], d, n, PASS if ok else FAIL, detail, start, q)


def _bd_sides(g, r, s):
    d = dimension_subgroup(g, bd_ideal(_aug(g, r), _aug(g, s)))
    return d, commutator_subgroup(r, s)


def check_bd(g: FiniteGroup, r: Subgroup, s: Subgroup) -> VerificationRecord:
    """D(G, rs+sr) = [R,S]."""
    start = time.perf_counter()
    d, n = _bd_sides(g, r, s)
    ok = d.members == n.members
    detail = {"equal": ok}
    if not ok:
        detail["reason"] = "dimension subgroup differs from commutator"
    return _record("bd", g, [r, s], d, n, PASS if ok else FAIL, detail, start, _quotient_if_contained(g, d, n))


def check_modg(g: FiniteGroup, r: Subgroup, s: Subgroup, t: Subgroup) -> VerificationRecord:
    """D(G, rs+sr+(r∩s)t+t(r∩s)) = [R,S][R∩S,T]; for T = 1 also compared with the two-subgroup case."""
    start = time.perf_counter()
    d = dimension_subgroup(g, modg_ideal(_aug(g, r), _aug(g, s), _aug(g, t)))
    n = subgroup_product(commutator_subgroup(r, s), commutator_subgroup(intersect(r, s), t))
    ok = d.members == n.members
    detail = {"equal": ok}
    if t.order == 1:
        bd_d, bd_n = _bd_sides(g, r, s)
        agree = bd_d.members == d.members and bd_n.members == n.members
        detail["bd_agreement"] = agree
        ok = ok and agree
    if not ok:
        detail["reason"] = "sides differ" if not detail["equal"] else "disagrees with the two-subgroup case"
    return _record("modg", g, [r, s, t], d, n, PASS if ok else FAIL, detail, start, _quotient_if_contained(g, d, n))


def check_inclusion_n(g: FiniteGroup, subs: Sequence[Subgroup], connectivity: bool = True) -> VerificationRecord:
    """‖R_1..R_n‖ ⊆ D(G, ‖r_1..r_n‖) for 2 <= n <= 4."""
    if not 2 <= len(subs) <= 4:
        raise GroupError("inclusion check takes 2 to 4 subgroups")
    start = time.perf_counter()
    n = symmetric_commutator(list(subs))
    d = dimension_subgroup(g, symmetric_ideal([_aug(g, x) for x in subs]))
    ok = n.members <= d.members
    detail = {"n": len(subs), "contained": ok}
    if connectivity:
        detail["connected"] = is_connected_tuple(list(subs))
        detail["connectivity_convention"] = CONNECTIVITY_CONVENTION
    if not ok:
        detail["reason"] = "symmetric commutator not inside dimension subgroup"
    q = _quotient_if_contained(g, d, n)
    return _record(f"incl{len(subs)}", g, list(subs), d, n, PASS if ok else FAIL, detail, start, q)


def check_aux_inclusions(g: FiniteGroup, a: Ideal, b: Ideal, names=("a", "b")) -> VerificationRecord:
    """D(a)D(b) ⊆ D(a+b) and [D(a), D(b)] ⊆ D(ab+ba)."""
    start = time.perf_counter()
    da, db = dimension_subgroup(g, a), dimension_subgroup(g, b)
    prod_ok = subgroup_product(da, db).members <= dimension_subgroup(g, ideal_sum(a, b)).members
    comm = commutator_subgroup(da, db)
    d = dimension_subgroup(g, bd_ideal(a, b))
    comm_ok = comm.members <= d.members
    ok = prod_ok and comm_ok
    detail = {"product_inclusion": prod_ok, "commutator_inclusion": comm_ok}
    return _record("aux", g, [da, db], d, comm, PASS if ok else FAIL, detail, start, names=[f"D({x})" for x in names])


def generalized_quotient(g: FiniteGroup, subs: Sequence[Subgroup]) -> QuotientStructure:
    """(K_0 ∩ … ∩ K_n) / ‖K_0, …, K_n‖."""
    return quotient_structure(g, intersect_all(list(subs)), symmetric_commutator(list(subs)))


def generalized_ideal_quotient(ring: AmbientRing, ideals: Sequence[Ideal]) -> CubeEntry:
    """(k_0 ∩ … ∩ k_n) / ‖k_0, …, k_n‖ as an abelian group."""
    top = ideal_intersect_all(ring, list(ideals))
    factors, free = quotient_invariants(symmetric_ideal(list(ideals)).lattice, top.lattice)
    return CubeEntry(tuple(factors), free)


def kernel_of_dimension_map(g: FiniteGroup, subs: Sequence[Subgroup]) -> VerificationRecord:
    """Compare A = (∩R_i)/‖R‖ with its subgroup B = D(G, ‖r‖)/‖R‖.

    ‖r‖ lies in every r_i and D(G, r_i) = R_i, so B ⊆ A; B is the generalized
    dimension quotient and, for three subgroups, must have exponent dividing 2.
    """
    start = time.perf_counter()
    subs = list(subs)
    n = symmetric_commutator(subs)
    top = intersect_all(subs)
    d = dimension_subgroup(g, symmetric_ideal([_aug(g, x) for x in subs]))
    nested = n.members <= d.members <= top.members
    a_q = quotient_structure(g, top, n)
    b_q = quotient_structure(g, d, n) if nested else None
    ok = nested and (len(subs) != 3 or (b_q is not None and 2 % b_q.exponent == 0))
    detail = {
        "nested": nested,
        "a_quotient": describe_quotient(a_q),
        "relative_order": a_q.order // b_q.order if b_q else None,
    }
    return _record("kernel", g, subs, d, n, PASS if ok else FAIL, detail, start, b_q)


# -- the free-group example through finite quotients ------------------------


@dataclass(frozen=True)
class QuotientHom:
    """Images of the free generators a, b, c in a finite group."""

    target: FiniteGroup
    a: int
    b: int
    c: int

    @property
    def image(self) -> frozenset:
        return generate(self.target, [self.a, self.b, self.c])

    @property
    def surjective(self) -> bool:
        return len(self.image) == self.target.order

    def normal_generators(self) -> dict[str, list[int]]:
        g, a, b, c = self.target, self.a, self.b, self.c
        bc = g.mult[b][g.inv[c]]
        return {"R": [g.mult[a][a], c], "S": [a, bc], "T": [a, b]}


def probe_free_example(hom: QuotientHom) -> VerificationRecord:
    """Push R = ⟨a², c⟩, S = ⟨a, bc⁻¹⟩, T = ⟨a, b⟩ into the image and run the exponent-2 check."""
    g = hom.target
    warning = None
    image = hom.image
    if len(image) != g.order:
        warning = "images do not generate the target; working in the image subgroup"
        h, members = subgroup_as_group(Subgroup(g, image), name=f"{g.name}.image")
        pos = {x: k for k, x in enumerate(members)}
        gens = {k: [pos[x] for x in v] for k, v in hom.normal_generators().items()}
    else:
        h, gens = g, hom.normal_generators()
    subs = [normal_closure(h, gens[k]) for k in ("R", "S", "T")]
    rec = check_exponent2(h, *subs)
    rec.check = "probe-free"
    rec.detail["images"] = {k: g.label(x) for k, x in zip("abc", (hom.a, hom.b, hom.c))}
    rec.detail["quotient_rank"] = int(round(math.log2(rec.d_order // rec.norm_order))) if rec.verdict == PASS else None
    if warning:
        rec.detail["warning"] = warning
    return rec


@dataclass
class ProbeSweep:
    target: str
    assignments: int
    surjective: int
    records: list[VerificationRecord]
    rank_counts: dict[int, int]


def sweep_free_example(g: FiniteGroup, surjective_only: bool = True) -> ProbeSweep:
    """All homomorphisms F(a,b,c) → G (optionally only onto ones), grouped by the induced (R, S, T)."""
    seen: dict[tuple, VerificationRecord] = {}
    counts: Counter = Counter()
    total = onto = 0
    for a, b, c in itertools.product(range(g.order), repeat=3):
        total += 1
        hom = QuotientHom(g, a, b, c)
        is_onto = hom.surjective
        onto += is_onto
        if surjective_only and not is_onto:
            continue
        key = tuple(normal_closure(g, v).members for v in hom.normal_generators().values()) if is_onto else None
        if key is not None and key in seen:
            counts[key] += 1
            continue
        rec = probe_free_example(hom)
        if key is not None:
            seen[key] = rec
            counts[key] += 1
        else:
            seen[("nonsurjective", a, b, c)] = rec
            counts[("nonsurjective", a, b, c)] += 1
    records = []
    ranks: Counter = Counter()
    for key, rec in seen.items():
        rec.detail["assignments"] = counts[key]
        records.append(rec)
        ranks[rec.detail["quotient_rank"]] += counts[key]
    return ProbeSweep(g.name, total, onto, records, dict(sorted(ranks.items(), key=lambda kv: (kv[0] is None, kv[0] or 0))))


# -- corpus -----------------------------------------------------------------

BUILTIN_CORPUS = (
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16",
    "C2xC2", "C2xC4", "C2^3", "C3^2", "S3", "S4", "A4", "D4", "D5", "D6", "Q8", "Heis27",
)
TWO_GROUPS_16 = ("C2", "C4", "C8", "C16", "C2xC2", "C2xC4", "C2^3", "D4", "Q8")


@dataclass(frozen=True)
class CorpusConfig:
    groups: tuple[str, ...] = BUILTIN_CORPUS
    checks: tuple[str, ...] = ("exp2", "bd", "modg", "incl")
    seed: int = 0
    max_triples: int = 500
    max_pairs: int = 500
    class_subset_size: int = 2
    full_enum_order: int = 16
    incl_n: tuple[int, ...] = (2, 3, 4)
    max_incl_tuples: int = 60
    connectivity: bool = True

    def to_json(self) -> dict:
        return {
            "groups": list(self.groups),
            "checks": list(self.checks),
            "seed": self.seed,
            "max_triples": self.max_triples,
            "max_pairs": self.max_pairs,
            "class_subset_size": self.class_subset_size,
            "full_enum_order": self.full_enum_order,
            "incl_n": list(self.incl_n),
            "max_incl_tuples": self.max_incl_tuples,
        }


@dataclass
class Corpus:
    """Groups with their designated normal-subgroup families."""

    entries: list[tuple[FiniteGroup, list[Subgroup]]]

    @classmethod
    def build(cls, config: CorpusConfig) -> Corpus:
        entries = []
        for name in config.groups:
            g = builtin(name)
            full = g.order <= config.full_enum_order
            subs = normal_subgroups(g, None if full else config.class_subset_size)
            if not all(s.normal for s in subs):
                raise GroupError(f"corpus family for {name} contains a non-normal subgroup")
            entries.append((g, subs))
        return cls(entries)


def _bounded(items: list, cap: int, rng: random.Random) -> list:
    if len(items) <= cap:
        return items
    keep = sorted(rng.sample(range(len(items)), cap))
    return [items[i] for i in keep]


def corpus_tuples(subs: list[Subgroup], check: str, config: CorpusConfig, group_name: str) -> list[tuple]:
    """Deterministic instance list for one check on one group."""
    rng = random.Random(f"{config.seed}:{group_name}:{check}")
    if check == "exp2":
        return _bounded(list(itertools.combinations_with_replacement(subs, 3)), config.max_triples, rng)
    if check == "bd":
        return _bounded(list(itertools.combinations_with_replacement(subs, 2)), config.max_pairs, rng)
    if check == "modg":
        triples = [(r, s, t) for r, s in itertools.combinations_with_replacement(subs, 2) for t in subs]
        return _bounded(triples, config.max_triples, rng)
    if check.startswith("incl"):
        k = int(check[4:])
        return _bounded(list(itertools.combinations_with_replacement(subs, k)), config.max_incl_tuples, rng)
    if check == "aux":
        return _bounded(list(itertools.combinations_with_replacement(subs, 2)), config.max_pairs, rng)
    raise ValueError(f"unknown check {check!r}")


def _run_one(check: str, g: FiniteGroup, inst: tuple, config: CorpusConfig) -> VerificationRecord:
    if check == "exp2":
        return check_exponent2(g, *inst)
    if check == "bd":
        return check_bd(g, *inst)
    if check == "modg":
        return check_modg(g, *inst)
    if check.startswith("incl"):
        return check_inclusion_n(g, inst, connectivity=config.connectivity)
    if check == "aux":
        r, s = inst
        a, b = _aug(g, r), _aug(g, s)
        # squares of augmentation ideals give dimension subgroups that are not just R and S
        return check_aux_inclusions(g, ideal_product(a, a), ideal_product(b, b), names=("r^2", "s^2"))
    raise ValueError(f"unknown check {check!r}")


@dataclass
class CorpusReport:
    config: CorpusConfig
    records: list[VerificationRecord]

    @property
    def summary(self) -> dict:
        c = Counter(r.verdict for r in self.records)
        return {PASS: c[PASS], FAIL: c[FAIL], INAPPLICABLE: c[INAPPLICABLE]}


def expand_checks(checks: Sequence[str], incl_n: Sequence[int]) -> list[str]:
    out = []
    for c in checks:
        if c == "incl":
            out += [f"incl{k}" for k in incl_n]
        elif c in CHECKS or (c.startswith("incl") and c[4:].isdigit()):
            out.append(c)
        else:
            raise ValueError(f"unknown check {c!r}; known: {', '.join(CHECKS)}")
    return out


def run_corpus(config: CorpusConfig, progress=None) -> CorpusReport:
    """Run the selected checks over the corpus, in corpus order then check order."""
    checks = expand_checks(config.checks, config.incl_n)
    corpus = Corpus.build(config)
    records = []
    for g, subs in corpus.entries:
        for check in checks:
            for inst in corpus_tuples(subs, check, config, g.name):
                records.append(_run_one(check, g, inst, config))
            if progress:
                progress(g, check)
    return CorpusReport(config, records)
