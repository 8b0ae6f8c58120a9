"""Finitely generated abelian groups and the quadratic functor calculus.

A group is stored in invariant-factor form; its canonical generators are the
torsion generators (in factor order) followed by the free ones.  Kernels,
cokernels and the square criteria are evaluated on *subquotients* ``top/bottom``
of a free group ``Z^k``, where everything reduces to lattice arithmetic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactlinalg import (
    Lattice,
    DimensionError,
    lattice_coordinates,
    lattice_from_generators,
    lattice_sum,
    left_kernel,
    quotient_invariants,
    smith_with_transform,
)

INFINITE = math.inf


class InfiniteGroupError(ValueError):
    """An operation that needs a finite group received one with free rank."""


class NonCommutingSquare(ValueError):
    pass


class CriteriaDisagree(AssertionError):
    """Equivalent criteria for a square returned different verdicts."""


def _prime_powers(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_of(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of finite cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError("cyclic orders must be positive")
        for p, e in _prime_powers(n).items():
            by_prime.setdefault(p, []).append(e)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for p, exps in by_prime.items():
        exps = sorted(exps)
        exps = [0] * (length - len(exps)) + exps
        for i, e in enumerate(exps):
            factors[i] *= p**e
    return tuple(factors)


@dataclass(frozen=True)
class FgAbelianGroup:
    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"invariant factors must form a divisor chain: {f}")

    @classmethod
    def from_cyclic(cls, orders: Sequence[int] = (), free_rank: int = 0) -> FgAbelianGroup:
        """Group ⊕ Z/n over ``orders`` plus a free part; orders of 0 count as free."""
        free = free_rank + sum(1 for n in orders if n == 0)
        fin = [n for n in orders if n != 0]
        return cls(free, tuple(d for d in invariant_factors_of(fin) if d > 1))

    @classmethod
    def cyclic(cls, n: int) -> FgAbelianGroup:
        return cls.from_cyclic([n])

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 for free ones."""
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self):
        if not self.is_finite:
            return INFINITE
        return math.prod(self.invariant_factors)

    def relation_lattice(self) -> Lattice:
        k = self.ngens
        return lattice_from_generators(
            [[d if j == i else 0 for j in range(k)] for i, d in enumerate(self.invariant_factors)], k
        )

    def normalize(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % m if m else int(x) for x, m in zip(v, self.moduli))

    def elements(self) -> list[tuple[int, ...]]:
        """All elements in mixed-radix order (last coordinate fastest)."""
        if not self.is_finite:
            raise InfiniteGroupError("cannot enumerate an infinite group")
        return [tuple(t) for t in itertools.product(*(range(d) for d in self.invariant_factors))]

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    orders = [d for g in groups for d in g.invariant_factors]
    return FgAbelianGroup.from_cyclic(orders, sum(g.free_rank for g in groups))


def exponent(a: FgAbelianGroup):
    if not a.is_finite:
        return INFINITE
    return a.invariant_factors[-1] if a.invariant_factors else 1


@dataclass(frozen=True)
class AbHom:
    """Homomorphism given by the images of the canonical source generators."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(self.target.normalize(r) for r in self.matrix)
        if len(m) != self.source.ngens or any(len(r) != self.target.ngens for r in m):
            raise DimensionError("matrix shape does not match source/target")
        object.__setattr__(self, "matrix", m)
        rel = self.target.relation_lattice()
        for d, row in zip(self.source.moduli, m):
            if d and (tuple(d * x for x in row) not in rel):
                raise ValueError("matrix does not respect source relations")

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.target.ngens
        for x, row in zip(v, self.matrix):
            if x:
                for j, y in enumerate(row):
                    out[j] += x * y
        return self.target.normalize(out)

    def compose(self, first: AbHom) -> AbHom:
        """``self ∘ first``."""
        if first.target != self.source:
            raise DimensionError("cannot compose: target/source mismatch")
        return AbHom(first.source, self.target, tuple(self(r) for r in first.matrix))

    @classmethod
    def zero(cls, source: FgAbelianGroup, target: FgAbelianGroup) -> AbHom:
        return cls(source, target, tuple((0,) * target.ngens for _ in range(source.ngens)))

    @classmethod
    def identity(cls, a: FgAbelianGroup) -> AbHom:
        return cls(a, a, tuple(tuple(int(i == j) for j in range(a.ngens)) for i in range(a.ngens)))


# -- subquotients -----------------------------------------------------------


@dataclass(frozen=True)
class Subquotient:
    """The group ``top / bottom`` for lattices ``bottom ⊆ top ⊆ Z^k``."""

    top: Lattice
    bottom: Lattice

    @classmethod
    def of(cls, a: FgAbelianGroup) -> Subquotient:
        return cls(Lattice.full(a.ngens), a.relation_lattice())

    def structure(self) -> FgAbelianGroup:
        factors, free = quotient_invariants(self.bottom, self.top)
        return FgAbelianGroup(free, tuple(factors))


def _image(l: Lattice, m: Sequence[Sequence[int]], ncols: int) -> Lattice:
    if l.is_zero:
        return Lattice.zero(ncols)
    a = np.array([list(r) for r in l.basis], dtype=object) @ np.array([list(r) for r in m], dtype=object).reshape(
        l.ambient_rank, ncols
    )
    return lattice_from_generators([list(r) for r in a], ncols)


def _preimage(l: Lattice, m: Sequence[Sequence[int]], target: Lattice) -> Lattice:
    """``{x ∈ l : x M ∈ target}``."""
    k, n = l.ambient_rank, target.ambient_rank
    if l.is_zero:
        return l
    lb = np.array([list(r) for r in l.basis], dtype=object)
    img = lb @ np.array([list(r) for r in m], dtype=object).reshape(k, n)
    rows = [list(r) for r in img] + [[-x for x in r] for r in target.basis]
    ker = left_kernel(rows, n)
    if not ker:
        return Lattice.zero(k)
    coeffs = np.array([r[: l.rank] for r in ker], dtype=object)
    return lattice_from_generators([list(r) for r in coeffs @ lb], k)


@dataclass(frozen=True)
class SubquotientMap:
    source: Subquotient
    target: Subquotient
    matrix: tuple[tuple[int, ...], ...]

    def kernel_top(self) -> Lattice:
        return _preimage(self.source.top, self.matrix, self.target.bottom)

    def is_injective(self) -> bool:
        return self.kernel_top() == self.source.bottom

    def is_surjective(self) -> bool:
        n = self.target.top.ambient_rank
        im = lattice_sum(_image(self.source.top, self.matrix, n), self.target.bottom)
        return im == self.target.top

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def kernel_sq(h: AbHom) -> Subquotient:
    src = Subquotient.of(h.source)
    return Subquotient(_preimage(src.top, h.matrix, h.target.relation_lattice()), src.bottom)


def cokernel_sq(h: AbHom) -> Subquotient:
    n = h.target.ngens
    bottom = lattice_sum(_image(Lattice.full(h.source.ngens), h.matrix, n), h.target.relation_lattice())
    return Subquotient(Lattice.full(n), bottom)


def kernel(h: AbHom) -> FgAbelianGroup:
    return kernel_sq(h).structure()


def cokernel(h: AbHom) -> FgAbelianGroup:
    return cokernel_sq(h).structure()


def image(h: AbHom) -> FgAbelianGroup:
    n = h.target.ngens
    top = lattice_sum(_image(Lattice.full(h.source.ngens), h.matrix, n), h.target.relation_lattice())
    return Subquotient(top, h.target.relation_lattice()).structure()


def is_injective(h: AbHom) -> bool:
    return kernel_sq(h).top == h.source.relation_lattice()


def is_surjective(h: AbHom) -> bool:
    return cokernel_sq(h).bottom == Lattice.full(h.target.ngens)


# -- presentations ----------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Result of reducing a presentation: the group and the generator images.

    ``projection[j]`` holds the canonical coordinates of presentation generator
    ``j``; ``lifts[t]`` is a preimage (in presentation generators) of canonical
    generator ``t``.
    """

    group: FgAbelianGroup
    projection: tuple[tuple[int, ...], ...]
    lifts: tuple[tuple[int, ...], ...]


def _present_lattice(rel: Lattice) -> Presentation:
    n = rel.ambient_rank
    diag, V, Vi = smith_with_transform([list(r) for r in rel.basis], n, transform=True)
    moduli = diag + [0] * (n - len(diag))
    keep = [t for t, d in enumerate(moduli) if d != 1]
    group = FgAbelianGroup(n - len(diag), tuple(d for d in diag if d != 1))
    projection = tuple(group.normalize([V[j][t] for t in keep]) for j in range(n))
    lifts = tuple(tuple(Vi[t]) for t in keep)
    return Presentation(group, projection, lifts)


def ab_from_presentation(generator_count: int, relations: Sequence[Sequence[int]]) -> Presentation:
    """Cokernel of the relation rows, in invariant-factor form."""
    if any(len(r) != generator_count for r in relations):
        raise DimensionError("relation length differs from generator count")
    return _present_lattice(lattice_from_generators([list(r) for r in relations], generator_count))


def tensor(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    orders = [math.gcd(m, n) for m in a.invariant_factors for n in b.invariant_factors]
    orders += list(b.invariant_factors) * a.free_rank + list(a.invariant_factors) * b.free_rank
    return FgAbelianGroup.from_cyclic(orders, a.free_rank * b.free_rank)


def _tensor_square_presentation(a: FgAbelianGroup) -> Presentation:
    """A⊗A on generators e_i⊗e_j (index ``i*k + j``) with gcd relations."""
    k = a.ngens
    rels = []
    for i, m in enumerate(a.moduli):
        for j, n in enumerate(a.moduli):
            g = math.gcd(m, n)
            if g:
                row = [0] * (k * k)
                row[i * k + j] = g
                rels.append(row)
    return ab_from_presentation(k * k, rels) if rels else _present_lattice(Lattice.zero(k * k))


# -- Whitehead's quadratic functor -----------------------------------------


def _gamma_cyclic(n: int) -> int:
    return math.gcd(2 * n, n * n)


def gamma_closed_form(a: FgAbelianGroup) -> FgAbelianGroup:
    """Γ of a direct sum of cyclics: Γ(X⊕Y) = Γ(X) ⊕ Γ(Y) ⊕ X⊗Y, Γ(Z)=Z, Γ(Z/n)=Z/(2n,n²)."""
    cyclics = [FgAbelianGroup.cyclic(d) for d in a.invariant_factors] + [FgAbelianGroup(1)] * a.free_rank
    parts = []
    for c in cyclics:
        parts.append(FgAbelianGroup(1) if c.free_rank else FgAbelianGroup.cyclic(_gamma_cyclic(c.invariant_factors[0])))
    for x, y in itertools.combinations(cyclics, 2):
        parts.append(tensor(x, y))
    return direct_sum(*parts) if parts else FgAbelianGroup()


@dataclass(frozen=True)
class GammaPresentation:
    """Γ(A) computed from its defining presentation.

    The eliminated presentation lives on the "short" elements (digit sum ≤ 2);
    ``expansion[x]`` writes γ(x) for every element index ``x`` in those terms.
    """

    source: FgAbelianGroup
    elements: tuple[tuple[int, ...], ...]
    base: tuple[int, ...]
    expansion: np.ndarray
    reduced: Presentation
    relation_rows: int

    @property
    def group(self) -> FgAbelianGroup:
        return self.reduced.group

    def gamma(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of γ(x) in Γ(A)."""
        idx = self.elements.index(self.source.normalize(x))
        proj = self.reduced.projection
        out = [0] * self.group.ngens
        for b, c in enumerate(self.expansion[idx]):
            if c:
                for t, y in enumerate(proj[b]):
                    out[t] += int(c) * y
        return self.group.normalize(out)


def _element_tables(a: FgAbelianGroup):
    dims = a.invariant_factors
    els = a.elements()
    digits = np.array(els, dtype=np.int64).reshape(len(els), len(dims))
    strides = np.array([math.prod(dims[i + 1:]) for i in range(len(dims))], dtype=np.int64)
    mods = np.array(dims, dtype=np.int64)

    def index_of(d):
        return (d % mods) @ strides if len(dims) else np.zeros(d.shape[0], dtype=np.int64)

    return els, digits, index_of


def _short_expansions(a: FgAbelianGroup, els, digits, index_of):
    """Express γ(x) through elements of digit sum ≤ 2.

    For digit sum ≥ 3 write x = y + e_i + e_j and use the defining relation
    with (a, b, c) = (y, e_i, e_j); every other term has smaller digit sum.
    """
    k = len(a.invariant_factors)
    weight = digits.sum(axis=1) if k else np.zeros(len(els), dtype=np.int64)
    base = [x for x in range(len(els)) if weight[x] <= 2]
    col = {x: c for c, x in enumerate(base)}
    exp = np.zeros((len(els), len(base)), dtype=object)
    for x in base:
        exp[x, col[x]] = 1
    unit = [np.eye(1, k, i, dtype=np.int64)[0] for i in range(k)]
    for x in sorted(range(len(els)), key=lambda t: weight[t]):
        if weight[x] <= 2:
            continue
        d = digits[x]
        i = int(np.flatnonzero(d)[0])
        d1 = d - unit[i]
        j = int(np.flatnonzero(d1)[0])
        y = d1 - unit[j]

        def ix(v):
            return int(index_of(v[None, :])[0])

        yi, yj, ij = ix(y + unit[i]), ix(y + unit[j]), ix(unit[i] + unit[j])
        exp[x] = exp[yi] + exp[yj] + exp[ij] - exp[ix(y)] - exp[ix(unit[i])] - exp[ix(unit[j])]
    return base, exp


def gamma_presentation(a: FgAbelianGroup, triples: str = "generators") -> GammaPresentation:
    """Γ(A) from generators γ(x), x ∈ A, and the three relation schemes.

    ``triples="all"`` imposes the cubic relation for every ordered triple;
    ``"generators"`` restricts the third argument to canonical generators,
    which spans the same relation lattice (the cross-effect is additive in
    each argument iff it is additive against generators).
    """
    if not a.is_finite:
        raise InfiniteGroupError("presentation method needs a finite group")
    if triples not in ("generators", "all"):
        raise ValueError(f"unknown triple scope {triples!r}")
    els, digits, index_of = _element_tables(a)
    n = len(els)
    k = len(a.invariant_factors)
    base, exp = _short_expansions(a, els, digits, index_of)
    small = not exp.size or max(abs(int(x)) for x in exp.flat) < (1 << 20)
    E = exp.astype(np.int64) if small else exp
    zero = int(index_of(np.zeros((1, k), dtype=np.int64))[0])
    neg = index_of(-digits)
    rows = [E[zero], *(E[neg] - E)]
    rel = lattice_from_generators(np.vstack([r.reshape(-1, len(base)) for r in rows]), len(base))
    count = 1 + n
    if triples == "all":
        cs = list(range(n))
    else:
        cs = [int(index_of(np.eye(1, k, i, dtype=np.int64))[0]) for i in range(k)]
    for c in cs:
        dc = digits[c]
        for first in range(n):
            # the cubic relation is symmetric in its first two arguments
            second = np.arange(first if triples == "generators" else 0, n)
            db = digits[second]
            da = digits[first][None, :]
            ab = index_of(da + db)
            ac = int(index_of(da + dc)[0])
            bc = index_of(db + dc)
            abc = index_of(da + db + dc)
            block = E[abc] - E[ab] - E[ac] - E[bc] + E[first] + E[second] + E[c]
            count += len(second)
            if block.dtype != object:
                block = np.unique(block, axis=0)
            rel = lattice_from_generators(np.vstack([rel.array(), block]) if rel.rank else block, len(base))
    return GammaPresentation(a, tuple(els), tuple(base), exp, _present_lattice(rel), count)


def whitehead_gamma(a: FgAbelianGroup, method: str = "presentation") -> FgAbelianGroup:
    if method == "presentation":
        return gamma_presentation(a).group
    if method in ("closed", "closed_form"):
        return gamma_closed_form(a)
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=256)
def _gamma_cached(a: FgAbelianGroup) -> GammaPresentation:
    return gamma_presentation(a)


def whitehead_map(a: FgAbelianGroup) -> AbHom:
    """The natural map Γ(A) → A⊗A, γ(x) ↦ x⊗x."""
    if not a.is_finite:
        raise InfiniteGroupError("whitehead_map needs a finite group")
    gp = _gamma_cached(a)
    tp = _tensor_square_presentation(a)
    k = a.ngens
    # image of each base symbol γ(x) in canonical coordinates of A⊗A
    base_img = []
    for x in gp.base:
        v = gp.elements[x]
        pres = [v[i] * v[j] for i in range(k) for j in range(k)]
        out = [0] * tp.group.ngens
        for g, c in enumerate(pres):
            if c:
                for t, y in enumerate(tp.projection[g]):
                    out[t] += c * y
        base_img.append(out)
    rows = []
    for lift in gp.reduced.lifts:
        out = [0] * tp.group.ngens
        for b, c in enumerate(lift):
            if c:
                for t, y in enumerate(base_img[b]):
                    out[t] += c * y
        rows.append(tuple(out))
    return AbHom(gp.group, tp.group, tuple(rows))


def tensor_square(a: FgAbelianGroup) -> FgAbelianGroup:
    return tensor(a, a)


def phi(a: FgAbelianGroup) -> FgAbelianGroup:
    """Kernel of Γ(A) → A⊗A."""
    return kernel(whitehead_map(a))


def exterior_square(a: FgAbelianGroup) -> FgAbelianGroup:
    """Cokernel of Γ(A) → A⊗A; closed form Λ²(⊕C_i) = ⊕_{i<j} C_i⊗C_j when A is infinite."""
    if a.is_finite:
        return cokernel(whitehead_map(a))
    return exterior_square_closed_form(a)


def exterior_square_closed_form(a: FgAbelianGroup) -> FgAbelianGroup:
    cyclics = [FgAbelianGroup.cyclic(d) for d in a.invariant_factors] + [FgAbelianGroup(1)] * a.free_rank
    return direct_sum(*(tensor(x, y) for x, y in itertools.combinations(cyclics, 2)))


# -- squares ----------------------------------------------------------------


@dataclass(frozen=True)
class AbSquare:
    """Commuting square  A -f-> B -g'-> D  and  A -g-> C -f'-> D."""

    f: AbHom
    g: AbHom
    g_prime: AbHom
    f_prime: AbHom

    def __post_init__(self):
        if self.f.source != self.g.source:
            raise DimensionError("f and g must share the source A")
        if self.g_prime.source != self.f.target or self.f_prime.source != self.g.target:
            raise DimensionError("g' must start at B and f' at C")
        if self.g_prime.target != self.f_prime.target:
            raise DimensionError("g' and f' must share the target D")
        if self.g_prime.compose(self.f).matrix != self.f_prime.compose(self.g).matrix:
            raise NonCommutingSquare("g'∘f != f'∘g")

    A = property(lambda self: self.f.source)
    B = property(lambda self: self.f.target)
    C = property(lambda self: self.g.target)
    D = property(lambda self: self.g_prime.target)


@dataclass(frozen=True)
class SquareReport:
    kind: str
    criteria: dict

    @property
    def consistent(self) -> bool:
        return len(set(self.criteria.values())) == 1

    @property
    def verdict(self) -> bool:
        if not self.consistent:
            raise CriteriaDisagree(f"{self.kind} criteria disagree: {self.criteria}")
        return next(iter(self.criteria.values()))

    def __bool__(self) -> bool:
        return self.verdict


def _into(f: AbHom, g: AbHom):
    return tuple(tuple(fr) + tuple(-x for x in gr) for fr, gr in zip(f.matrix, g.matrix))


def _block_maps(s: AbSquare):
    """A → B⊕C, a ↦ (f a, −g a) and B⊕C → D, (b, c) ↦ g'b + f'c, on free covers."""
    into = _into(s.f, s.g)
    out = s.g_prime.matrix + s.f_prime.matrix
    bc = direct_sum_sq(s.B, s.C)
    return into, out, bc


def direct_sum_sq(b: FgAbelianGroup, c: FgAbelianGroup) -> Subquotient:
    n = b.ngens + c.ngens
    rows = [list(r) + [0] * c.ngens for r in b.relation_lattice().basis]
    rows += [[0] * b.ngens + list(r) for r in c.relation_lattice().basis]
    return Subquotient(Lattice.full(n), lattice_from_generators(rows, n))


def _induced(s: AbSquare):
    """The induced maps g~ (Ker f → Ker f'), g~' (Coker f → Coker f'),
    f~ (Ker g → Ker g'), f~' (Coker g → Coker g')."""
    return {
        "g~": SubquotientMap(kernel_sq(s.f), kernel_sq(s.f_prime), s.g.matrix),
        "g~'": SubquotientMap(cokernel_sq(s.f), cokernel_sq(s.f_prime), s.g_prime.matrix),
        "f~": SubquotientMap(kernel_sq(s.g), kernel_sq(s.g_prime), s.f.matrix),
        "f~'": SubquotientMap(cokernel_sq(s.g), cokernel_sq(s.g_prime), s.f_prime.matrix),
    }


def _middle_exact(s: AbSquare) -> tuple[bool, SubquotientMap, SubquotientMap]:
    into, out, bc = _block_maps(s)
    a_sq, d_sq = Subquotient.of(s.A), Subquotient.of(s.D)
    first = SubquotientMap(a_sq, bc, into)
    second = SubquotientMap(bc, d_sq, out)
    ker = second.kernel_top()
    im = lattice_sum(_image(a_sq.top, into, bc.top.ambient_rank), bc.bottom)
    return ker == im, first, second


def is_pushout(s: AbSquare) -> SquareReport:
    """Evaluate the four equivalent pushout criteria.

    (universal) the comparison map Coker(A → B⊕C) → D is an isomorphism;
    (exact) A → B⊕C → D → 0 is exact; (g) g~' iso and g~ epi; (f) f~' iso and f~ epi.
    """
    exact, first, second = _middle_exact(s)
    ind = _induced(s)
    bc = first.target
    pushed = lattice_sum(_image(first.source.top, first.matrix, bc.top.ambient_rank), bc.bottom)
    comparison = SubquotientMap(Subquotient(bc.top, pushed), second.target, second.matrix)
    crit = {
        "universal": comparison.is_isomorphism(),
        "exact": exact and second.is_surjective(),
        "g": ind["g~'"].is_isomorphism() and ind["g~"].is_surjective(),
        "f": ind["f~'"].is_isomorphism() and ind["f~"].is_surjective(),
    }
    return SquareReport("pushout", crit)


def is_pullback(s: AbSquare) -> SquareReport:
    """Evaluate the four equivalent pullback criteria.

    (universal) the comparison map A → Ker(B⊕C → D) is an isomorphism;
    (exact) 0 → A → B⊕C → D is exact; (g) g~ iso and g~' mono; (f) f~ iso and f~' mono.
    """
    exact, first, second = _middle_exact(s)
    ind = _induced(s)
    comparison = SubquotientMap(first.source, Subquotient(second.kernel_top(), first.target.bottom), first.matrix)
    crit = {
        "universal": comparison.is_isomorphism(),
        "exact": exact and first.is_injective(),
        "g": ind["g~"].is_isomorphism() and ind["g~'"].is_injective(),
        "f": ind["f~"].is_isomorphism() and ind["f~'"].is_injective(),
    }
    return SquareReport("pullback", crit)


def random_hom(source: FgAbelianGroup, target: FgAbelianGroup, rng, spread: int = 3) -> AbHom:
    """A random homomorphism: each generator image respects the generator's order.

    A generator of order d may go to any element killed by d, i.e. coordinate j
    must be a multiple of e_j / gcd(e_j, d); torsion generators go to 0 in free
    coordinates.
    """
    rows = []
    for d in source.moduli:
        row = []
        for e in target.moduli:
            if d == 0:
                row.append(rng.randrange(e) if e else rng.randint(-spread, spread))
            elif e == 0:
                row.append(0)
            else:
                step = e // math.gcd(e, d)
                row.append(step * rng.randrange(e // step))
        rows.append(tuple(row))
    return AbHom(source, target, tuple(rows))


def _present_subquotient(sq: Subquotient) -> tuple[FgAbelianGroup, list[tuple[int, ...]]]:
    """The group top/bottom with ambient lifts of its canonical generators."""
    k = sq.top.rank
    coords = lattice_coordinates(sq.top, [list(r) for r in sq.bottom.basis]) if not sq.bottom.is_zero else []
    pres = _present_lattice(lattice_from_generators([list(r) for r in coords], k))
    top = np.array([list(r) for r in sq.top.basis], dtype=object).reshape(k, sq.top.ambient_rank)
    lifts = [tuple(int(x) for x in np.array(l, dtype=object) @ top) for l in pres.lifts]
    return pres.group, lifts


def pushout_square(f: AbHom, g: AbHom) -> AbSquare:
    """Complete B <-f- A -g-> C with D = (B⊕C)/{(f a, -g a)}."""
    into, bc = _into(f, g), direct_sum_sq(f.target, g.target)
    n = bc.top.ambient_rank
    rel = lattice_sum(_image(Lattice.full(f.source.ngens), into, n), bc.bottom)
    pres = _present_lattice(rel)
    nb = f.target.ngens
    return AbSquare(
        f,
        g,
        AbHom(f.target, pres.group, pres.projection[:nb]),
        AbHom(g.target, pres.group, pres.projection[nb:]),
    )


def pullback_square(g_prime: AbHom, f_prime: AbHom) -> AbSquare:
    """Complete B -g'-> D <-f'- C with A = {(b, c) : g'b = f'c}."""
    b, c = g_prime.source, f_prime.source
    neg = tuple(tuple(-x for x in row) for row in f_prime.matrix)
    bc = direct_sum_sq(b, c)
    out = SubquotientMap(bc, Subquotient.of(g_prime.target), g_prime.matrix + neg)
    a, lifts = _present_subquotient(Subquotient(out.kernel_top(), bc.bottom))
    nb = b.ngens
    return AbSquare(
        AbHom(a, b, tuple(l[:nb] for l in lifts)),
        AbHom(a, c, tuple(l[nb:] for l in lifts)),
        g_prime,
        f_prime,
    )
