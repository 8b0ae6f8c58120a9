"""Exact integer linear algebra: Hermite/Smith normal forms and row lattices.

Matrices are row-major integer arrays.  Internally the elimination loops run on
numpy ``int64`` arrays while every intermediate entry is guaranteed to stay far
from the word boundary; as soon as that guarantee could fail the array is
promoted to ``dtype=object`` (Python integers), so results are always exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "IntMatrix",
    "Lattice",
    "DimensionError",
    "ContainmentError",
    "hermite_normal_form",
    "smith_normal_form",
    "lattice_from_generators",
    "lattice_sum",
    "lattice_intersect",
    "lattice_contains",
    "lattice_coordinates",
    "quotient_invariants",
    "left_kernel",
    "smith_with_transform",
]

# Entries below this bound make one elimination step overflow-free in int64.
_SAFE = 1 << 30


class DimensionError(ValueError):
    """Vector or matrix shapes do not match."""


class ContainmentError(ValueError):
    """A sublattice is not contained in the claimed superlattice."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entry count does not match rows x cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("column count needed for an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _as_rows(m) -> tuple[list[list[int]], int]:
    if isinstance(m, IntMatrix):
        return m.tolist(), m.cols
    if isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return [[int(x) for x in r] for r in m], m.shape[1]
    rows = [[int(x) for x in r] for r in m]
    if not rows:
        raise DimensionError("column count needed for an empty matrix")
    return rows, len(rows[0])


def _to_array(rows, ncols: int) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    if isinstance(rows, np.ndarray) and rows.dtype == np.int64:
        a = rows.copy()
    else:
        a = np.array(rows, dtype=object).reshape(len(rows), ncols)
    if a.shape[1] != ncols:
        raise DimensionError(f"expected {ncols} columns, got {a.shape[1]}")
    if a.size and _absmax(a) < _SAFE:
        return a.astype(np.int64)
    return a.astype(object)


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def _guard(a: np.ndarray) -> np.ndarray:
    if a.dtype != object and a.size and _absmax(a) >= _SAFE:
        return a.astype(object)
    return a


def _echelon(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce in place to an echelon form with positive pivots.

    Returns the nonzero rows and the pivot column of each.
    """
    nrows, ncols = a.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        found = False
        while True:
            col = a[r:, c]
            nz = np.flatnonzero(col != 0)
            if nz.size == 0:
                break
            found = True
            k = r + int(nz[np.argmin(np.abs(col[nz]))])
            if k != r:
                a[[r, k]] = a[[k, r]]
            if nz.size == 1:
                break
            others = r + 1 + np.flatnonzero(a[r + 1:, c] != 0)
            if others.size == 0:
                break
            q = a[others, c] // a[r, c]
            a[others] -= q[:, None] * a[r]
            a = _guard(a)
        if found:
            if a[r, c] < 0:
                a[r] = -a[r]
            pivots.append(c)
            r += 1
    return a[:r], pivots


def _reduce_above(a: np.ndarray, pivots: list[int]) -> np.ndarray:
    for i, c in enumerate(pivots):
        if i == 0:
            continue
        q = a[:i, c] // a[i, c]
        if np.any(q != 0):
            a[:i] -= q[:, None] * a[i]
            a = _guard(a)
    return a


def _hnf_array(rows, ncols: int) -> tuple[np.ndarray, list[int]]:
    a = _to_array(rows, ncols)
    a, pivots = _echelon(a)
    a = _reduce_above(a, pivots)
    return a, pivots


def _rows_of(a: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in r) for r in a)


def hermite_normal_form(m) -> IntMatrix:
    """Canonical row Hermite normal form, zero rows dropped."""
    rows, ncols = _as_rows(m)
    a, _ = _hnf_array(rows, ncols)
    return IntMatrix(a.shape[0], ncols, _rows_of(a))


def smith_with_transform(rows, ncols: int, transform: bool = False):
    """Smith form of the row lattice ``rows`` in ``Z^ncols``.

    Returns ``(diag, V, Vinv)`` where ``U @ M @ V`` is diagonal with entries
    ``diag`` (a divisor chain of positive integers, one per rank) and ``V`` is
    unimodular of size ``ncols``.  ``V`` and ``Vinv`` are ``None`` unless
    ``transform`` is set.
    """
    a, _ = _hnf_array(rows, ncols)
    m = [[int(x) for x in r] for r in a]
    n = ncols
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transform else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if transform else None

    def colop(dst, src, q):
        # column dst += q * column src
        for row in m:
            row[dst] += q * row[src]
        if transform:
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def colswap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        if transform:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    rank = len(m)
    for t in range(rank):
        while True:
            best = None
            for i in range(t, rank):
                for j in range(t, n):
                    x = m[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            m[t], m[i] = m[i], m[t]
            if j != t:
                colswap(t, j)
            p = m[t][t]
            done = True
            for i in range(t + 1, rank):
                q = m[i][t] // p
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = m[t][j] // p
                if q:
                    colop(j, t, -q)
                if m[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, rank) for j in range(t + 1, n) if m[i][j] % p),
                None,
            )
            if bad is None:
                break
            m[t] = [x + y for x, y in zip(m[t], m[bad])]
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
    diag = [m[t][t] for t in range(rank)]
    return diag, V, Vi


def smith_normal_form(m) -> tuple[list[int], int]:
    """Invariant factors and free rank of the cokernel of ``m: Z^cols -> Z^rows``.

    The factors include any leading 1s, one per unit of rank.
    """
    rows, ncols = _as_rows(m)
    nrows = len(rows)
    # column span of m is the row span of its transpose
    cols = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    diag, _, _ = smith_with_transform(cols, nrows)
    return diag, nrows - len(diag)


@dataclass(frozen=True)
class Lattice:
    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    def __contains__(self, v) -> bool:
        return lattice_contains(self, v)

    def array(self) -> np.ndarray:
        return _to_array([list(r) for r in self.basis], self.ambient_rank)

    @classmethod
    def full(cls, n: int) -> Lattice:
        return lattice_from_generators(np.eye(n, dtype=np.int64), n)

    @classmethod
    def zero(cls, n: int) -> Lattice:
        return cls(n, ())


def _lattice_from_array(a, n: int) -> Lattice:
    if isinstance(a, np.ndarray) and a.shape[0] == 0:
        return Lattice(n, ())
    h, pivots = _hnf_array(a, n)
    return Lattice(n, _rows_of(h), tuple(pivots))


def lattice_from_generators(vectors: Iterable[Sequence[int]] | np.ndarray, ambient_rank: int) -> Lattice:
    if isinstance(vectors, np.ndarray):
        if vectors.ndim != 2 or (vectors.size and vectors.shape[1] != ambient_rank):
            raise DimensionError("generator length differs from ambient rank")
        if vectors.size == 0:
            return Lattice(ambient_rank, ())
        return _lattice_from_array(vectors.reshape(-1, ambient_rank), ambient_rank)
    vecs = [list(v) for v in vectors]
    if any(len(v) != ambient_rank for v in vecs):
        raise DimensionError("generator length differs from ambient rank")
    if not vecs:
        return Lattice(ambient_rank, ())
    return _lattice_from_array(vecs, ambient_rank)


def _check_same(a: Lattice, b: Lattice):
    if a.ambient_rank != b.ambient_rank:
        raise DimensionError(f"ambient ranks differ: {a.ambient_rank} vs {b.ambient_rank}")


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    _check_same(a, b)
    if a.is_zero:
        return b
    if b.is_zero or a == b:
        return a
    return _lattice_from_array(list(a.basis) + list(b.basis), a.ambient_rank)


def lattice_intersect(a: Lattice, b: Lattice) -> Lattice:
    """Intersection via the block lattice spanned by ``(x|x)`` for x in a and ``(y|0)`` for y in b.

    Vectors of that lattice with vanishing first half have second half in a ∩ b.
    """
    _check_same(a, b)
    n = a.ambient_rank
    if a.is_zero or b.is_zero:
        return Lattice(n, ())
    if a == b:
        return a
    rows = [list(x) + list(x) for x in a.basis] + [list(y) + [0] * n for y in b.basis]
    h, pivots = _hnf_array(rows, 2 * n)
    tail = [i for i, c in enumerate(pivots) if c >= n]
    if not tail:
        return Lattice(n, ())
    return _lattice_from_array(h[tail, n:], n)


def _reduce(l: Lattice, vs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Back-substitute a batch of vectors against the HNF basis.

    Returns (remainders, coefficients, ok) where ok marks vectors whose
    pivot entries were divisible at every step.
    """
    basis = l.array()
    pivots = l.pivots or tuple(next(j for j, x in enumerate(r) if x) for r in l.basis)
    vs = _guard(vs)
    if basis.dtype == object and vs.dtype != object:
        vs = vs.astype(object)
    ok = np.ones(vs.shape[0], dtype=bool)
    coef = np.zeros((vs.shape[0], len(pivots)), dtype=object)
    for i, c in enumerate(pivots):
        p = basis[i, c]
        col = vs[:, c]
        ok &= (col % p) == 0
        q = col // p
        coef[:, i] = q
        if np.any(q != 0):
            if vs.dtype != object and basis.dtype != object and _absmax(q) * _absmax(basis[i]) >= _SAFE * _SAFE:
                vs = vs.astype(object)
            vs = vs - q[:, None] * basis[i]
            vs = _guard(vs)
    return vs, coef, ok


def contains_many(l: Lattice, vectors) -> np.ndarray:
    """Vectorized membership test; returns a boolean array."""
    vs = _to_array(vectors, l.ambient_rank)
    if vs.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if l.is_zero:
        return np.all(vs == 0, axis=1)
    rem, _, ok = _reduce(l, vs)
    return ok & np.all(rem == 0, axis=1)


def lattice_contains(l: Lattice, v: Sequence[int]) -> bool:
    if len(v) != l.ambient_rank:
        raise DimensionError("vector length differs from ambient rank")
    return bool(contains_many(l, [list(v)])[0])


def lattice_coordinates(l: Lattice, vectors) -> list[list[int]]:
    """Integer coordinates of each vector in the HNF basis of ``l``.

    Raises ``ContainmentError`` if some vector is not in ``l``.
    """
    vs = _to_array(vectors, l.ambient_rank)
    if vs.shape[0] == 0:
        return []
    if l.is_zero:
        if np.any(vs != 0):
            raise ContainmentError("vector outside the zero lattice")
        return [[] for _ in range(vs.shape[0])]
    rem, coef, ok = _reduce(l, vs)
    if not (np.all(ok) and np.all(rem == 0)):
        raise ContainmentError("vector outside the lattice")
    return [[int(x) for x in r] for r in coef]


def quotient_invariants(sub: Lattice, sup: Lattice) -> tuple[list[int], int]:
    """Invariant factors (all > 1) and free rank of ``sup / sub``."""
    _check_same(sub, sup)
    coords = lattice_coordinates(sup, [list(r) for r in sub.basis])
    if not coords:
        return [], sup.rank
    diag, _, _ = smith_with_transform(coords, sup.rank)
    return [d for d in diag if d != 1], sup.rank - len(diag)


def left_kernel(rows, ncols: int) -> list[list[int]]:
    """Basis of ``{c : c @ M = 0}`` for the integer matrix with the given rows."""
    k = len(rows)
    if k == 0:
        return []
    aug = [list(r) + [int(i == j) for j in range(k)] for i, r in enumerate(rows)]
    h, pivots = _hnf_array(aug, ncols + k)
    return [[int(x) for x in h[i, ncols:]] for i, c in enumerate(pivots) if c >= ncols]
