"""Finite crossed n-cubes of rings given by explicit tables, and an exhaustive axiom checker."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exactlinalg import contains_many
from .groupring import AmbientRing, Ideal, IdealTuple, ideal_generated, ideal_sum, scalar_ideal

PAIRING_CAP = 10_000

AXIOMS = (
    "mu_i a = a if i not in beta",
    "mu_i mu_j = mu_j mu_i",
    "mu_i h(a@b) = h(mu_i a@b) = h(a@mu_i b)",
    "h(a@b) = h(mu_i a@b) = h(a@mu_i b) if i in beta & beta'",
    "h(a@a') = aa'",
    "h(h(a@b)@c) = h(a@h(b@c))",
    "mu_i additive",
    "h biadditive",
)


class MalformedCube(ValueError):
    pass


Beta = frozenset


def beta_key(beta) -> str:
    return "".join(str(i) for i in sorted(beta))


def parse_beta(key: str) -> frozenset:
    return frozenset(int(c) for c in key)


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite (possibly non-unital) ring on element labels 0..size-1."""

    add: np.ndarray
    mul: np.ndarray
    zero: int = 0
    names: tuple[str, ...] = ()

    def __post_init__(self):
        add = np.asarray(self.add, dtype=np.int64)
        mul = np.asarray(self.mul, dtype=np.int64)
        n = add.shape[0] if add.ndim == 2 else -1
        if n <= 0 or add.shape != (n, n) or mul.shape != (n, n):
            raise MalformedCube("ring tables must be square and of equal size")
        if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
            raise MalformedCube("ring table entry out of range")
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(n)))
        elif len(self.names) != n:
            raise MalformedCube("names must match ring size")

    @property
    def size(self) -> int:
        return self.add.shape[0]

    def label(self, x: int) -> str:
        return self.names[x]

    def structure_errors(self) -> list[str]:
        """Ring-axiom violations of the tables themselves (empty if fine)."""
        a, m, z, idx = self.add, self.mul, self.zero, np.arange(self.size)
        out = []
        if not (np.array_equal(a[z], idx) and np.array_equal(a[:, z], idx)):
            out.append("zero is not an additive identity")
        if not np.array_equal(a, a.T):
            out.append("addition not commutative")
        if not np.array_equal(a[a, :], a[:, a]):
            out.append("addition not associative")
        if not np.all((a == z).any(axis=1)):
            out.append("missing additive inverses")
        if not np.array_equal(m[m, :], m[:, m]):
            out.append("multiplication not associative")
        # m[x, a[y, w]] == a[m[x, y], m[x, w]]
        if not np.array_equal(m[:, a], a[m[:, :, None], m[:, None, :]]):
            out.append("left distributivity fails")
        if not np.array_equal(m[a, :], a[m[:, None, :], m[None, :, :]]):
            out.append("right distributivity fails")
        return out


@dataclass(frozen=True, eq=False)
class CrossedCubeData:
    """Rings R_β, maps μ_i: R_β → R_{β∖{i}} and pairings h: R_β × R_β′ → R_{β∪β′}.

    Index sets β are frozensets of 1-based integers; ``mu`` is keyed by (i, β)
    and ``h`` by (β, β′).
    """

    n: int
    rings: Mapping[frozenset, FiniteRing]
    mu: Mapping[tuple[int, frozenset], np.ndarray]
    h: Mapping[tuple[frozenset, frozenset], np.ndarray]
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        betas = all_betas(self.n)
        if set(self.rings) != set(betas):
            raise MalformedCube("rings must be given for every subset of {1..n}")
        mu, h = {}, {}
        for beta in betas:
            src = self.rings[beta]
            for i in range(1, self.n + 1):
                table = self._table(self.mu, (i, beta), (src.size,), self.rings[beta - {i}].size, "mu")
                mu[(i, beta)] = table
            for beta2 in betas:
                other = self.rings[beta2]
                if src.size * other.size > PAIRING_CAP:
                    raise MalformedCube(f"pairing domain exceeds {PAIRING_CAP} elements")
                h[(beta, beta2)] = self._table(
                    self.h, (beta, beta2), (src.size, other.size), self.rings[beta | beta2].size, "h"
                )
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "h", h)
        for beta in betas:
            errs = self.rings[beta].structure_errors()
            if errs:
                raise MalformedCube(f"R_{{{beta_key(beta)}}}: {errs[0]}")

    @staticmethod
    def _table(tables, key, shape, target_size, what):
        if key not in tables:
            raise MalformedCube(f"missing {what} table for {key}")
        t = np.asarray(tables[key], dtype=np.int64)
        if t.shape != shape:
            raise MalformedCube(f"{what} table {key} has shape {t.shape}, expected {shape}")
        if t.size and (t.min() < 0 or t.max() >= target_size):
            raise MalformedCube(f"{what} table {key} has entries outside the target ring")
        return t


def all_betas(n: int) -> list[frozenset]:
    """Subsets of {1..n}, largest first, then lexicographic."""
    subsets = [frozenset(c) for k in range(n, -1, -1) for c in itertools.combinations(range(1, n + 1), k)]
    return subsets


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    passed: bool
    witness: str | None = None
    checked: int = 0


def _first(mask: np.ndarray):
    bad = np.argwhere(~mask)
    return None if bad.size == 0 else tuple(int(v) for v in bad[0])


def _fmt(parts) -> str:
    return ", ".join(f"{k}={v}" for k, v in parts)


def crossed_cube_check(d: CrossedCubeData) -> list[AxiomVerdict]:
    """Check every axiom family exhaustively; each verdict carries the first counterexample."""
    betas = all_betas(d.n)
    idx = range(1, d.n + 1)
    R, mu, h = d.rings, d.mu, d.h
    found: dict[str, str] = {}
    counts = dict.fromkeys(AXIOMS, 0)

    def record(axiom, mask, describe):
        counts[axiom] += int(mask.size)
        if axiom not in found:
            at = _first(mask)
            if at is not None:
                found[axiom] = describe(at)

    def el(beta, x):
        return f"{R[beta].label(x)} in R{{{beta_key(beta)}}}"

    for beta in betas:
        for i in idx:
            if i not in beta:
                mask = mu[(i, beta)] == np.arange(R[beta].size)
                record(AXIOMS[0], mask, lambda at: _fmt([("i", i), ("a", el(beta, at[0]))]))
    for beta in betas:
        for i in idx:
            for j in idx:
                lhs = mu[(i, beta - {j})][mu[(j, beta)]]
                rhs = mu[(j, beta - {i})][mu[(i, beta)]]
                record(AXIOMS[1], lhs == rhs, lambda at: _fmt([("i", i), ("j", j), ("a", el(beta, at[0]))]))
    for beta in betas:
        for beta2 in betas:
            hb = h[(beta, beta2)]
            for i in idx:
                t0 = (beta | beta2) - {i}
                t1 = (beta - {i}) | beta2
                t2 = beta | (beta2 - {i})
                v0 = mu[(i, beta | beta2)][hb]
                v1 = h[(beta - {i}, beta2)][mu[(i, beta)], :]
                v2 = h[(beta, beta2 - {i})][:, mu[(i, beta2)]]
                desc = lambda at: _fmt([("i", i), ("a", el(beta, at[0])), ("b", el(beta2, at[1]))])
                if t0 == t1:
                    record(AXIOMS[2], v0 == v1, desc)
                if t1 == t2:
                    record(AXIOMS[2], v1 == v2, desc)
                if t0 == t2 and t0 != t1:
                    record(AXIOMS[2], v0 == v2, desc)
                if i in beta and i in beta2:
                    record(AXIOMS[3], (hb == v1) & (hb == v2), desc)
    for beta in betas:
        mask = h[(beta, beta)] == R[beta].mul
        record(AXIOMS[4], mask, lambda at: _fmt([("a", el(beta, at[0])), ("a'", el(beta, at[1]))]))
    for b1 in betas:
        for b2 in betas:
            h12 = h[(b1, b2)]
            for b3 in betas:
                left = h[(b1 | b2, b3)][h12[:, :, None], np.arange(R[b3].size)[None, None, :]]
                right = h[(b1, b2 | b3)][np.arange(R[b1].size)[:, None, None], h[(b2, b3)][None, :, :]]
                record(
                    AXIOMS[5],
                    left == right,
                    lambda at: _fmt([("a", el(b1, at[0])), ("b", el(b2, at[1])), ("c", el(b3, at[2]))]),
                )
    for beta in betas:
        add = R[beta].add
        for i in idx:
            m = mu[(i, beta)]
            tgt = R[beta - {i}].add
            mask = m[add] == tgt[m[:, None], m[None, :]]
            record(AXIOMS[6], mask, lambda at: _fmt([("i", i), ("a", el(beta, at[0])), ("a'", el(beta, at[1]))]))
    for b1 in betas:
        for b2 in betas:
            hb, tgt = h[(b1, b2)], R[b1 | b2].add
            a1, a2 = R[b1].add, R[b2].add
            left = hb[a1]  # h(a+a', b) indexed [a, a', b]
            right = tgt[hb[:, None, :], hb[None, :, :]]
            record(AXIOMS[7], left == right, lambda at: _fmt([("a", el(b1, at[0])), ("a'", el(b1, at[1])), ("b", el(b2, at[2]))]))
            left = hb[:, a2]  # h(a, b+b') indexed [a, b, b']
            right = tgt[hb[:, :, None], hb[:, None, :]]
            record(AXIOMS[7], left == right, lambda at: _fmt([("a", el(b1, at[0])), ("b", el(b2, at[1])), ("b'", el(b2, at[2]))]))
    return [AxiomVerdict(a, a not in found, found.get(a), counts[a]) for a in AXIOMS]


def failed_axioms(verdicts: list[AxiomVerdict]) -> list[str]:
    return [v.axiom for v in verdicts if not v.passed]


# -- cubes induced by ideal tuples -------------------------------------------


def _residues(ring: AmbientRing, ideal: Ideal, modulus: int) -> np.ndarray:
    """Coordinate vectors in [0, modulus)^rank lying in the ideal, in lexicographic order."""
    if modulus ** ring.rank > PAIRING_CAP:
        raise MalformedCube("residue ring too large to tabulate")
    grid = np.array(list(itertools.product(range(modulus), repeat=ring.rank)), dtype=np.int64).reshape(-1, ring.rank)
    return grid[contains_many(ideal.lattice, grid)]


def _ring_of(ring: AmbientRing, elems: np.ndarray, modulus: int) -> FiniteRing:
    lookup = {tuple(v): k for k, v in enumerate(elems.tolist())}
    add = [[lookup[tuple((x + y) % modulus)] for y in elems] for x in elems]
    prods = ring.products(elems, elems) % modulus
    mul = np.array([lookup[tuple(v)] for v in prods.tolist()]).reshape(len(elems), len(elems))
    names = tuple(_name(v) for v in elems.tolist())
    return FiniteRing(np.array(add), mul, 0, names)


def _name(v) -> str:
    return str(v[0]) if len(v) == 1 else "(" + ",".join(str(x) for x in v) + ")"


def cube_from_ideal_tuple(t: IdealTuple, modulus: int) -> CrossedCubeData:
    """The discrete cube of a tuple of ideals containing modulus·R, read in R/modulus.

    R_β = I(β)/mR, μ_i is the inclusion I(β) ⊆ I(β∖{i}), and h is multiplication
    (I(β)·I(β′) ⊆ I(β∪β′) for two-sided ideals).
    """
    ring, n = t.ambient, t.n
    base = scalar_ideal(ring, modulus)
    for k, ideal in enumerate(t.ideals, 1):
        if not base <= ideal:
            raise MalformedCube(f"ideal {k} does not contain {modulus}·R")
    betas = all_betas(n)
    elems = {b: _residues(ring, t.meet(b), modulus) for b in betas}
    lookups = {b: {tuple(v): k for k, v in enumerate(e.tolist())} for b, e in elems.items()}
    rings = {b: _ring_of(ring, elems[b], modulus) for b in betas}
    mu = {}
    for b in betas:
        for i in range(1, n + 1):
            mu[(i, b)] = np.array([lookups[b - {i}][tuple(v)] for v in elems[b].tolist()], dtype=np.int64)
    h = {}
    for b1 in betas:
        for b2 in betas:
            prods = ring.products(elems[b1], elems[b2]) % modulus
            lk = lookups[b1 | b2]
            h[(b1, b2)] = np.array([lk[tuple(v)] for v in prods.tolist()], dtype=np.int64).reshape(
                len(elems[b1]), len(elems[b2])
            )
    return CrossedCubeData(n, rings, mu, h, name=f"{ring.name} mod {modulus}")


def finite_ideals(ring: AmbientRing, modulus: int) -> list[Ideal]:
    """All ideals of R/modulus, as ideals of R containing modulus·R (sorted by rank, then basis)."""
    base = scalar_ideal(ring, modulus)
    grid = np.array(list(itertools.product(range(modulus), repeat=ring.rank)), dtype=np.int64)
    principal = {ideal_sum(ideal_generated(ring, [list(v)]), base) for v in grid.tolist()}
    found = set(principal)
    frontier = list(principal)
    while frontier:
        new = []
        for a in frontier:
            for b in principal:
                c = ideal_sum(a, b)
                if c not in found:
                    found.add(c)
                    new.append(c)
        frontier = new
    return sorted(found, key=lambda i: (i.lattice.rank, i.lattice.basis))


def with_h(d: CrossedCubeData, h: Mapping, name: str = "") -> CrossedCubeData:
    """The same rings and μ with the pairings replaced."""
    return CrossedCubeData(d.n, d.rings, d.mu, h, name=name or d.name)


def zero_h(d: CrossedCubeData) -> dict:
    return {k: np.full_like(v, d.rings[k[0] | k[1]].zero) for k, v in d.h.items()}
