"""Finite groups by multiplication table, and the normal-subgroup calculus.

Elements are indices ``0..order-1`` with 0 the identity.  Permutation groups
are closed breadth-first from the generators (in input order), which fixes
the indexing.  Products follow "left then right": for permutations,
``x*y`` applies ``x`` first.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

DEFAULT_ORDER_CAP = 128

# Adopted reading of the connectivity definition, echoed into reports.
CONNECTIVITY_CONVENTION = "tuples of length <= 2 are connected; n >= 3 requires the product/intersection equality"


class GroupError(ValueError):
    pass


class OrderCapExceeded(GroupError):
    pass


class NotNormal(GroupError):
    pass


class ParentMismatch(GroupError):
    pass


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(q[i] for i in p)


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    """1-based cycles to a 0-based image tuple."""
    img = list(range(degree))
    seen = set()
    for cyc in cycles:
        for x in cyc:
            if x < 1 or x > degree:
                raise GroupError(f"point {x} outside 1..{degree}")
            if x in seen:
                raise GroupError(f"repeated point {x} in cycle notation")
            seen.add(x)
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b - 1
    return tuple(img)


def perm_to_cycles(p: Sequence[int]) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mult: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    gen_names: tuple[str, ...] = ()
    gen_elements: tuple[int, ...] = ()
    perms: tuple[tuple[int, ...], ...] | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.mult)
        if n == 0 or any(len(r) != n for r in self.mult):
            raise GroupError("multiplication table must be square and nonempty")
        if any(self.mult[0][x] != x or self.mult[x][0] != x for x in range(n)):
            raise GroupError("element 0 must be a two-sided identity")
        if any(self.mult[x][self.inv[x]] != 0 or self.mult[self.inv[x]][x] != 0 for x in range(n)):
            raise GroupError("inverse table is wrong")
        if n <= 64:
            m = self.mult
            for x, y, z in itertools.product(range(n), repeat=3):
                if m[m[x][y]][z] != m[x][m[y][z]]:
                    raise GroupError("multiplication is not associative")

    @property
    def order(self) -> int:
        return len(self.mult)

    def __len__(self) -> int:
        return len(self.mult)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def generator(self, name: str) -> int:
        try:
            return self.gen_elements[self.gen_names.index(name)]
        except ValueError:
            raise GroupError(f"unknown generator {name!r}") from None

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv[x], -k
        r = 0
        while k:
            if k & 1:
                r = self.mult[r][x]
            x = self.mult[x][x]
            k >>= 1
        return r

    def commutator(self, x: int, y: int) -> int:
        m, i = self.mult, self.inv
        return m[m[i[x]][i[y]]][m[x][y]]

    def conjugate(self, x: int, g: int) -> int:
        """g⁻¹ x g."""
        return self.mult[self.mult[self.inv[g]][x]][g]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mult[y][x]
            k += 1
        return k

    def label(self, x: int) -> str:
        if self.perms is not None:
            return perm_to_cycles(self.perms[x])
        return str(x)

    @cached_property
    def conjugacy_classes(self) -> list[list[int]]:
        seen, classes = set(), []
        for x in range(self.order):
            if x in seen:
                continue
            cls = sorted({self.conjugate(x, g) for g in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, frozenset(range(self.order)), True)

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, frozenset([0]), True)

    def is_abelian(self) -> bool:
        return all(self.mult[x][y] == self.mult[y][x] for x in range(self.order) for y in range(x))


def group_from_table(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    n = len(table)
    mult = tuple(tuple(int(x) for x in r) for r in table)
    if any(len(r) != n or any(not 0 <= x < n for x in r) for r in mult):
        raise GroupError("table entries must be element indices")
    inv = []
    for x in range(n):
        ys = [y for y in range(n) if mult[x][y] == 0]
        if len(ys) != 1:
            raise GroupError(f"element {x} has no unique inverse")
        inv.append(ys[0])
    return FiniteGroup(mult, tuple(inv), name=name)


def group_from_permutations(
    generators: Mapping[str, Sequence[int]] | Sequence[tuple[str, Sequence[int]]],
    cap: int = DEFAULT_ORDER_CAP,
    name: str = "",
) -> FiniteGroup:
    """Close named 0-based permutations breadth-first into a multiplication table."""
    items = list(generators.items()) if isinstance(generators, Mapping) else list(generators)
    names = [n for n, _ in items]
    if len(set(names)) != len(names):
        raise GroupError("repeated generator name")
    degrees = {len(p) for _, p in items}
    if len(degrees) > 1:
        raise GroupError("generators have different degrees")
    degree = degrees.pop() if degrees else 1
    gens = []
    for nm, p in items:
        p = tuple(int(x) for x in p)
        if sorted(p) != list(range(degree)):
            raise GroupError(f"generator {nm!r} is not a permutation")
        gens.append(p)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        for g in gens:
            y = _compose(elems[i], g)
            if y not in index:
                if len(elems) >= cap:
                    raise OrderCapExceeded(f"group order exceeds cap {cap}")
                index[y] = len(elems)
                elems.append(y)
        i += 1
    mult = tuple(tuple(index[_compose(x, y)] for y in elems) for x in elems)
    inv = []
    for x in elems:
        xi = [0] * degree
        for a, b in enumerate(x):
            xi[b] = a
        inv.append(index[tuple(xi)])
    return FiniteGroup(
        mult, tuple(inv), tuple(names), tuple(index[g] for g in gens), tuple(elems), name
    )


@dataclass(frozen=True)
class Word:
    """A product of generator powers, e.g. ``b c^-1`` is ((b, 1), (c, -1))."""

    letters: tuple[tuple[str, int], ...] = ()

    def __str__(self) -> str:
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters) or "1"


def evaluate_word(g: FiniteGroup, w: Word) -> int:
    r = 0
    for name, e in w.letters:
        r = g.mult[r][g.power(g.generator(name), e)]
    return r


# -- subgroups --------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=True, hash=True)
    members: frozenset = frozenset()
    normal: bool = field(default=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __le__(self, other: Subgroup) -> bool:
        return self.members <= other.members

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, normal={self.normal})"

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def generators(self) -> list[int]:
        """A small generating set, greedy in element-index order."""
        gens, cur = [], {0}
        for x in self.sorted():
            if len(cur) == self.order:
                break
            if x not in cur:
                gens.append(x)
                _extend(self.parent, cur, gens)
        return gens


def _extend(g: FiniteGroup, members: set, gens: list[int]) -> None:
    """Close ``members`` (containing 0) under right multiplication by ``gens``, in place."""
    mult = g.mult
    frontier = list(members)
    while frontier:
        new = []
        for y in frontier:
            row = mult[y]
            for s in gens:
                z = row[s]
                if z not in members:
                    members.add(z)
                    new.append(z)
        frontier = new


def generate(g: FiniteGroup, seeds: Iterable[int]) -> frozenset:
    members, gens = {0}, []
    for x in seeds:
        if x not in members:
            gens.append(x)
            _extend(g, members, gens)
    return frozenset(members)


def subgroup(g: FiniteGroup, seeds: Iterable[int]) -> Subgroup:
    members = generate(g, seeds)
    return Subgroup(g, members, _is_normal(g, members))


def _is_normal(g: FiniteGroup, members: frozenset) -> bool:
    gens = list(g.gen_elements) or list(range(g.order))
    return all(g.conjugate(x, s) in members for x in members for s in gens)


def verified(s: Subgroup) -> Subgroup:
    """Check closure and (re)compute the normality flag."""
    g, m = s.parent, s.members
    if 0 not in m or any(g.inv[x] not in m for x in m) or any(g.mult[x][y] not in m for x in m for y in m):
        raise GroupError("member set is not a subgroup")
    return Subgroup(g, m, _is_normal(g, m))


def _require_normal(*subs: Subgroup):
    for s in subs:
        if not s.normal:
            raise NotNormal("subgroup is not normal")


def _same_parent(*subs: Subgroup) -> FiniteGroup:
    g = subs[0].parent
    if any(s.parent is not g for s in subs):
        raise ParentMismatch("subgroups live in different groups")
    return g


def normal_closure(g: FiniteGroup, seeds: Iterable[int]) -> Subgroup:
    seeds = set(seeds)
    conj = {g.conjugate(x, h) for x in seeds for h in range(g.order)}
    return Subgroup(g, generate(g, sorted(conj)), True)


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    g = _same_parent(a, b)
    return Subgroup(g, a.members & b.members, a.normal and b.normal)


def intersect_all(subs: Sequence[Subgroup]) -> Subgroup:
    out = subs[0]
    for s in subs[1:]:
        out = intersect(out, s)
    return out


def subgroup_product(a: Subgroup, b: Subgroup) -> Subgroup:
    g = _same_parent(a, b)
    if not (a.normal or b.normal):
        prod = {g.mult[x][y] for x in a.members for y in b.members}
        if len(prod) * len(a.members & b.members) != a.order * b.order or not _is_set_subgroup(g, prod):
            raise GroupError("set product of two non-normal subgroups is not a subgroup")
        return verified(Subgroup(g, frozenset(prod)))
    if b <= a:
        return a
    if a <= b:
        return b
    members = frozenset(g.mult[x][y] for x in a.members for y in b.members)
    return Subgroup(g, members, a.normal and b.normal or _is_normal(g, members))


def _is_set_subgroup(g: FiniteGroup, s: set) -> bool:
    return all(g.mult[x][y] in s for x in s for y in s)


def join(subs: Sequence[Subgroup]) -> Subgroup:
    """Product of normal subgroups."""
    g = _same_parent(*subs)
    out = g.trivial
    for s in subs:
        out = subgroup_product(out, s)
    return out


def commutator_subgroup(a: Subgroup, b: Subgroup) -> Subgroup:
    g = _same_parent(a, b)
    if a.order == 1 or b.order == 1:
        return g.trivial
    cur, gens = {0}, []
    comm = g.commutator
    for x in a.members:
        for y in b.members:
            c = comm(x, y)
            if c not in cur:
                gens.append(c)
                _extend(g, cur, gens)
    cur = frozenset(cur)
    normal = (a.normal and b.normal) or _is_normal(g, cur)
    return Subgroup(g, cur, normal)


def partitions(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Unordered splits of {0..n-1} into two nonempty parts; the part holding 0 comes first."""
    out = []
    rest = list(range(1, n))
    for r in range(0, n - 1):
        for extra in itertools.combinations(rest, r):
            first = (0,) + extra
            second = tuple(i for i in range(n) if i not in first)
            out.append((first, second))
    return out


def symmetric_commutator(subs: Sequence[Subgroup]) -> Subgroup:
    """‖R_1,…,R_n‖: join of [∩_I R_i, ∩_J R_j] over splits into two nonempty parts."""
    n = len(subs)
    if not 2 <= n <= 6:
        raise GroupError("symmetric commutator needs 2 <= n <= 6 subgroups")
    _same_parent(*subs)
    _require_normal(*subs)
    cache: dict[tuple[int, ...], Subgroup] = {}

    def inter(idx):
        if idx not in cache:
            cache[idx] = intersect_all([subs[i] for i in idx])
        return cache[idx]

    return join([commutator_subgroup(inter(i), inter(j)) for i, j in partitions(n)])


def is_connected_tuple(subs: Sequence[Subgroup]) -> bool:
    """Connectivity predicate; see ``CONNECTIVITY_CONVENTION`` for short tuples."""
    _same_parent(*subs)
    _require_normal(*subs)
    n = len(subs)
    if n <= 2:
        return True
    idx = range(n)
    products = {}
    for r in range(1, n + 1):
        for J in itertools.combinations(idx, r):
            products[J] = join([subs[j] for j in J])
    for r in range(2, n + 1):
        for I in itertools.combinations(idx, r):
            meet = intersect_all([subs[i] for i in I])
            for J, pj in products.items():
                left = subgroup_product(meet, pj)
                right = intersect_all([subgroup_product(subs[i], pj) for i in I])
                if left.members != right.members:
                    return False
    return True


# -- quotients --------------------------------------------------------------


@dataclass(frozen=True)
class QuotientStructure:
    order: int
    exponent: int
    abelian: bool
    invariant_factors: tuple[int, ...] | None


def abelian_invariants_from_orders(order: int, power_counts) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from |A[p^k]| counts.

    ``power_counts(p, k)`` returns the number of elements killed by p^k.
    """
    from .abgroup import _prime_powers

    chains = {}
    for p, e in _prime_powers(order).items():
        logs, k = [0], 1
        while logs[-1] < e:
            c = power_counts(p, k)
            logs.append(round(math.log(c, p)))
            k += 1
        # number of cyclic factors of exponent >= k is logs[k] - logs[k-1]
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        exps = []
        for k in range(len(at_least)):
            exact = at_least[k] - (at_least[k + 1] if k + 1 < len(at_least) else 0)
            exps += [k + 1] * exact
        chains[p] = sorted(exps)
    length = max((len(v) for v in chains.values()), default=0)
    factors = [1] * length
    for p, exps in chains.items():
        exps = [0] * (length - len(exps)) + exps
        for i, x in enumerate(exps):
            factors[i] *= p**x
    return tuple(factors)


def quotient_structure(g: FiniteGroup, d: Subgroup, n: Subgroup) -> QuotientStructure:
    """Structure of D/N for N normal in G and N ⊆ D."""
    _same_parent(d, n)
    _require_normal(n)
    if not n.members <= d.members:
        raise GroupError("N is not contained in D")
    coset_of = {}
    reps = []
    for x in sorted(d.members):
        if x in coset_of:
            continue
        k = len(reps)
        reps.append(x)
        for y in n.members:
            coset_of[g.mult[x][y]] = k
    q = len(reps)
    mult = [[coset_of[g.mult[a][b]] for b in reps] for a in reps]
    orders = []
    for i in range(q):
        k, y = 1, i
        while y != 0:
            y = mult[y][i]
            k += 1
        orders.append(k)
    expo = math.lcm(*orders) if orders else 1
    abelian = all(mult[i][j] == mult[j][i] for i in range(q) for j in range(i))
    factors = None
    if abelian:
        factors = abelian_invariants_from_orders(q, lambda p, k: sum(1 for o in orders if (p**k) % o == 0))
    return QuotientStructure(q, expo, abelian, factors)


def normal_subgroups(g: FiniteGroup, max_subset: int | None = None) -> list[Subgroup]:
    """Normal subgroups as normal closures of sets of conjugacy-class representatives.

    ``max_subset=None`` closes under joins and so finds every normal subgroup.
    """
    reps = [c[0] for c in g.conjugacy_classes if c[0] != 0]
    found: dict[frozenset, Subgroup] = {}
    if max_subset is None:
        found[g.trivial.members] = g.trivial
        minimal = [normal_closure(g, [r]) for r in reps]
        frontier = [g.trivial]
        while frontier:
            new = []
            for s in frontier:
                for m in minimal:
                    t = subgroup_product(s, m)
                    if t.members not in found:
                        found[t.members] = t
                        new.append(t)
            frontier = new
    else:
        for r in range(0, max_subset + 1):
            for combo in itertools.combinations(reps, r):
                s = normal_closure(g, combo)
                found.setdefault(s.members, s)
    return sorted(found.values(), key=lambda s: (s.order, sorted(s.members)))


def subgroup_as_group(s: Subgroup, name: str = "") -> tuple[FiniteGroup, list[int]]:
    """The subgroup as a group in its own right, with the embedding into the parent."""
    g = s.parent
    members = s.sorted()
    pos = {x: k for k, x in enumerate(members)}
    mult = tuple(tuple(pos[g.mult[x][y]] for y in members) for x in members)
    inv = tuple(pos[g.inv[x]] for x in members)
    perms = tuple(g.perms[x] for x in members) if g.perms is not None else None
    return FiniteGroup(mult, inv, perms=perms, name=name or f"{g.name}.sub{len(members)}"), members
