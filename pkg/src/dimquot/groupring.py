"""Two-sided ideals of finite-rank rings, chiefly integral group rings ℤ[G].

An ideal is a row lattice in ℤ^rank, kept in canonical HNF, so ideal
equality is basis equality.  Index sets for tuples of ideals (α, β, k) are
1-based throughout, matching ⟨n⟩ = {1, …, n}.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactlinalg import (
    Lattice,
    contains_many,
    lattice_from_generators,
    lattice_intersect,
    lattice_sum,
    quotient_invariants,
)
from .group import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    NotNormal,
    OrderCapExceeded,
    Subgroup,
    partitions,
    verified,
)

# Re-verify two-sided closure of every ideal an operation returns.
CHECK_CLOSURE = True

_INT64_BUDGET = 1 << 62


class RingError(ValueError):
    pass


class ClosureViolation(RingError):
    """A lattice that should be a two-sided ideal is not closed under multiplication."""


@dataclass(frozen=True, eq=False)
class AmbientRing:
    """ℤ^rank with a bilinear product of basis vectors.

    Group rings keep only the group; other rings carry a structure tensor
    ``structure[i, j]`` = coordinates of e_i·e_j.
    """

    rank: int
    group: FiniteGroup | None = None
    structure: np.ndarray | None = None
    name: str = ""

    def __repr__(self) -> str:
        return f"AmbientRing({self.name or '?'}, rank={self.rank})"

    def products(self, xs, ys) -> np.ndarray:
        """All products x·y for rows x of ``xs`` and y of ``ys`` (x-major order)."""
        X = _arr(xs, self.rank)
        Y = _arr(ys, self.rank)
        p, q, n = X.shape[0], Y.shape[0], self.rank
        if p == 0 or q == 0:
            return np.zeros((0, n), dtype=np.int64)
        bound = _amax(X) * _amax(Y) * n * (n if self.group is None else 1)
        if self.group is None and self.structure is not None:
            bound *= max(1, _amax(self.structure))
        dtype = np.int64 if bound < _INT64_BUDGET else object
        X, Y = X.astype(dtype), Y.astype(dtype)
        if self.group is not None:
            H = self._left_shift
            out = np.empty((p, q, n), dtype=dtype)
            for j in range(q):
                out[:, j, :] = X @ Y[j][H]
            return out.reshape(p * q, n)
        T = self.structure.astype(dtype).reshape(n, n * n)
        XT = (X @ T).reshape(p, n, n)
        out = np.empty((p, q, n), dtype=dtype)
        for j in range(q):
            out[:, j, :] = np.einsum("pjk,j->pk", XT, Y[j]) if dtype != object else _contract(XT, Y[j])
        return out.reshape(p * q, n)

    @property
    def _left_shift(self) -> np.ndarray:
        # (e_g · y)[k] = y[g⁻¹k]
        cached = self.__dict__.get("_shift")
        if cached is None:
            g = self.group
            cached = np.array([[g.mult[g.inv[a]][k] for k in range(g.order)] for a in range(g.order)])
            object.__setattr__(self, "_shift", cached)
        return cached

    def multiply(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.products([list(x)], [list(y)])[0])

    def basis_element(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.rank))

    def full(self) -> Ideal:
        return Ideal(self, Lattice.full(self.rank))

    def zero(self) -> Ideal:
        return Ideal(self, Lattice.zero(self.rank))


def _contract(XT, y):
    return np.tensordot(XT, y, axes=([1], [0]))


def _arr(rows, n: int) -> np.ndarray:
    if isinstance(rows, Lattice):
        rows = [list(r) for r in rows.basis]
    if isinstance(rows, np.ndarray):
        return rows.reshape(-1, n)
    rows = [list(r) for r in rows]
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    a = np.array(rows, dtype=object)
    return a.astype(np.int64) if _amax(a) < (1 << 62) else a


def _amax(a) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(a.max())), abs(int(a.min())))


def group_ring(g: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> AmbientRing:
    if g.order > cap:
        raise OrderCapExceeded(f"group order {g.order} exceeds cap {cap}")
    return _group_ring_cached(g)


@lru_cache(maxsize=None)
def _group_ring_cached(g: FiniteGroup) -> AmbientRing:
    return AmbientRing(g.order, group=g, name=f"Z[{g.name or '?'}]")


def structure_ring(structure, name: str = "", check: bool = True) -> AmbientRing:
    """Ring from a structure tensor; associativity checked on basis pairs (sampled above rank 64)."""
    T = np.array(structure, dtype=object)
    n = T.shape[0]
    if T.shape != (n, n, n):
        raise RingError("structure tensor must have shape (n, n, n)")
    ring = AmbientRing(n, structure=T.astype(np.int64), name=name)
    if check:
        eye = np.eye(n, dtype=np.int64)
        pairs = list(itertools.product(range(n), repeat=2))
        if n > 64:
            pairs = random.Random(0).sample(pairs, 256)
        for i, j in pairs:
            left = ring.products(ring.products(eye[i:i + 1], eye[j:j + 1]), eye)
            right = ring.products(eye[i:i + 1], ring.products(eye[j:j + 1], eye))
            if not np.array_equal(left, right):
                raise RingError("structure tensor is not associative")
    return ring


def zero_ring(n: int) -> AmbientRing:
    return AmbientRing(n, structure=np.zeros((n, n, n), dtype=np.int64), name=f"Z^{n} (zero product)")


def integers() -> AmbientRing:
    """ℤ, as the group ring of the trivial group."""
    return _integers()


@lru_cache(maxsize=None)
def _integers() -> AmbientRing:
    from .group import group_from_table

    return AmbientRing(1, group=group_from_table([[0]], name="1"), name="Z")


@dataclass(frozen=True)
class Ideal:
    ambient: AmbientRing
    lattice: Lattice

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def __contains__(self, v) -> bool:
        return bool(contains_many(self.lattice, [list(v)])[0])

    def __le__(self, other: Ideal) -> bool:
        return bool(np.all(contains_many(other.lattice, [list(r) for r in self.lattice.basis])))


def _is_closed(ring: AmbientRing, lat: Lattice) -> bool:
    if lat.is_zero:
        return True
    eye = np.eye(ring.rank, dtype=np.int64)
    basis = lat.array()
    left = ring.products(eye, basis)
    right = ring.products(basis, eye)
    return bool(np.all(contains_many(lat, np.vstack([left, right]))))


def _make(ring: AmbientRing, lat: Lattice) -> Ideal:
    if CHECK_CLOSURE and not _is_closed(ring, lat):
        raise ClosureViolation("result is not a two-sided ideal")
    return Ideal(ring, lat)


def _same(*ideals: Ideal) -> AmbientRing:
    ring = ideals[0].ambient
    if any(i.ambient is not ring for i in ideals):
        raise RingError("ideals live in different rings")
    return ring


def ideal_from_lattice(ring: AmbientRing, lat: Lattice) -> Ideal:
    """Wrap a lattice, raising ``ClosureViolation`` if it is not two-sided."""
    if not _is_closed(ring, lat):
        raise ClosureViolation("lattice is not a two-sided ideal")
    return Ideal(ring, lat)


def ideal_generated(ring: AmbientRing, elements: Sequence[Sequence[int]]) -> Ideal:
    """Smallest two-sided ideal containing the elements (rings need not be unital)."""
    lat = lattice_from_generators([list(e) for e in elements], ring.rank)
    eye = np.eye(ring.rank, dtype=np.int64)
    while True:
        basis = lat.array()
        grown = lattice_from_generators(
            np.vstack([basis, ring.products(eye, basis), ring.products(basis, eye)]) if lat.rank else basis,
            ring.rank,
        )
        if grown == lat:
            return Ideal(ring, lat)
        lat = grown


def scalar_ideal(ring: AmbientRing, m: int) -> Ideal:
    """m·R, the kernel of reduction mod m."""
    return Ideal(ring, lattice_from_generators(m * np.eye(ring.rank, dtype=np.int64), ring.rank))


@lru_cache(maxsize=4096)
def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    ring = _same(a, b)
    return _make(ring, lattice_sum(a.lattice, b.lattice))


@lru_cache(maxsize=4096)
def ideal_intersect(a: Ideal, b: Ideal) -> Ideal:
    ring = _same(a, b)
    return _make(ring, lattice_intersect(a.lattice, b.lattice))


def sum_all(ring: AmbientRing, ideals: Sequence[Ideal]) -> Ideal:
    out = ring.zero()
    for i in ideals:
        out = ideal_sum(out, i)
    return out


def intersect_all(ring: AmbientRing, ideals: Sequence[Ideal]) -> Ideal:
    out = ring.full()
    for i in ideals:
        out = ideal_intersect(out, i)
    return out


@lru_cache(maxsize=4096)
def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    """Span of pairwise products of basis rows; enough because both factors are two-sided."""
    ring = _same(a, b)
    if a.lattice.is_zero or b.lattice.is_zero:
        return ring.zero()
    rows = ring.products(a.lattice.array(), b.lattice.array())
    return _make(ring, lattice_from_generators(rows, ring.rank))


def _require_group_ring(ring: AmbientRing, g: FiniteGroup):
    if ring.group is not g:
        raise RingError("ring is not the group ring of this group")


@lru_cache(maxsize=4096)
def augmentation_ideal(ring: AmbientRing, r: Subgroup) -> Ideal:
    """(R − 1)ℤ[G], spanned by (x − 1)g for x ∈ R, g ∈ G."""
    g = r.parent
    _require_group_ring(ring, g)
    if not r.normal:
        raise NotNormal("augmentation ideal needs a normal subgroup")
    rows = []
    for x in sorted(r.members):
        if x == 0:
            continue
        for h in range(g.order):
            v = [0] * g.order
            v[g.mult[x][h]] += 1
            v[h] -= 1
            rows.append(v)
    return _make(ring, lattice_from_generators(rows, g.order))


def bd_ideal(r: Ideal, s: Ideal) -> Ideal:
    """rs + sr."""
    return ideal_sum(ideal_product(r, s), ideal_product(s, r))


def modg_ideal(r: Ideal, s: Ideal, t: Ideal) -> Ideal:
    """rs + sr + (r∩s)t + t(r∩s)."""
    rs = ideal_intersect(r, s)
    return ideal_sum(bd_ideal(r, s), bd_ideal(rs, t))


def symmetric_ideal(ideals: Sequence[Ideal]) -> Ideal:
    """‖a_1,…,a_n‖: sum over splits {I, J} of (∩_I a)(∩_J a) + (∩_J a)(∩_I a)."""
    n = len(ideals)
    if not 2 <= n <= 6:
        raise RingError("symmetric ideal product needs 2 <= n <= 6 ideals")
    ring = _same(*ideals)
    cache: dict[tuple[int, ...], Ideal] = {}

    def inter(idx):
        if idx not in cache:
            cache[idx] = intersect_all(ring, [ideals[i] for i in idx])
        return cache[idx]

    return sum_all(ring, [bd_ideal(inter(i), inter(j)) for i, j in partitions(n)])


def dimension_subgroup(g: FiniteGroup, a: Ideal) -> Subgroup:
    """D(G, a) = {x ∈ G : x − 1 ∈ a}."""
    _require_group_ring(a.ambient, g)
    vecs = np.zeros((g.order, g.order), dtype=np.int64)
    for x in range(1, g.order):
        vecs[x, x] = 1
        vecs[x, 0] = -1
    inside = contains_many(a.lattice, vecs)
    members = frozenset(int(x) for x in np.flatnonzero(inside)) | {0}
    return verified(Subgroup(g, members))


# -- tuples of ideals -------------------------------------------------------


@dataclass(frozen=True)
class IdealTuple:
    ambient: AmbientRing
    ideals: tuple[Ideal, ...]

    def __post_init__(self):
        object.__setattr__(self, "ideals", tuple(self.ideals))
        if any(i.ambient is not self.ambient for i in self.ideals):
            raise RingError("ideal tuple must share one ambient ring")

    @property
    def n(self) -> int:
        return len(self.ideals)

    def meet(self, beta) -> Ideal:
        """I(β) = ∩_{i∈β} I_i, with I(∅) the whole ring."""
        return intersect_all(self.ambient, [self.ideals[i - 1] for i in sorted(beta)])

    def sum_over(self, alpha, beta) -> Ideal:
        """Σ_{i∈α} I(β ∪ {i}), the empty sum being zero."""
        return sum_all(self.ambient, [self.meet(set(beta) | {i}) for i in sorted(alpha)])


def disjoint_pairs(n: int):
    """All (α, β) of disjoint subsets of {1..n}, as sorted tuples."""
    for labels in itertools.product((0, 1, -1), repeat=n):
        alpha = tuple(i + 1 for i, x in enumerate(labels) if x == 1)
        beta = tuple(i + 1 for i, x in enumerate(labels) if x == -1)
        yield alpha, beta


@dataclass(frozen=True)
class Goodness:
    good: bool
    witness: tuple[tuple[int, ...], tuple[int, ...], int] | None = None

    def __bool__(self) -> bool:
        return self.good


def is_good_tuple(t: IdealTuple) -> Goodness:
    """Check I(β∪{k}) ∩ Σ_{i∈α} I(β∪{i}) = Σ_{i∈α} I(β∪{k,i}) for all disjoint α, β and k ∉ α∪β."""
    n = t.n
    if n > 5:
        raise RingError("goodness enumeration is limited to n <= 5")
    for alpha, beta in disjoint_pairs(n):
        if not alpha:
            continue
        for k in range(1, n + 1):
            if k in alpha or k in beta:
                continue
            left = ideal_intersect(t.meet(set(beta) | {k}), t.sum_over(alpha, beta))
            right = t.sum_over(alpha, set(beta) | {k})
            if left.lattice != right.lattice:
                return Goodness(False, (alpha, beta, k))
    return Goodness(True)


@dataclass(frozen=True)
class CubeEntry:
    invariant_factors: tuple[int, ...]
    free_rank: int

    @property
    def order(self):
        if self.free_rank:
            return float("inf")
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def e_idl_cube(t: IdealTuple) -> dict[tuple[tuple[int, ...], tuple[int, ...]], CubeEntry]:
    """E(α, β) = I(β) / Σ_{i∈α} I(β∪{i}) for every disjoint pair (α, β)."""
    if t.n > 4:
        raise RingError("E_idl table is limited to n <= 4")
    table = {}
    for alpha, beta in disjoint_pairs(t.n):
        factors, free = quotient_invariants(t.sum_over(alpha, beta).lattice, t.meet(beta).lattice)
        table[(alpha, beta)] = CubeEntry(tuple(factors), free)
    return dict(sorted(table.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0])))
