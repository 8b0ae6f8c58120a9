"""Built-in permutation groups used as the verification corpus."""
from __future__ import annotations

from functools import lru_cache

from .group import FiniteGroup, cycles_to_perm, group_from_permutations


def _perm(cycles, degree):
    return cycles_to_perm(cycles, degree)


def _cycle(n: int) -> tuple[int, ...]:
    return _perm([list(range(1, n + 1))] if n > 1 else [], n)


def cyclic(n: int) -> FiniteGroup:
    return group_from_permutations({"a": _cycle(n)}, name=f"C{n}")


def abelian(*orders: int, name: str | None = None) -> FiniteGroup:
    """Direct product of cyclic groups acting on disjoint blocks of points."""
    degree = sum(orders)
    gens, start = {}, 1
    for k, n in enumerate(orders):
        gens["abcdefgh"[k]] = _perm([list(range(start, start + n))] if n > 1 else [], degree)
        start += n
    return group_from_permutations(gens, name=name or "x".join(f"C{n}" for n in orders))


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of a regular n-gon (order 2n)."""
    refl = [[i, n + 2 - i] for i in range(2, n + 1) if i < n + 2 - i]
    return group_from_permutations({"a": _cycle(n), "b": _perm(refl, n)}, name=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    return group_from_permutations({"a": _cycle(n), "b": _perm([[1, 2]], n)}, name=f"S{n}")


def alternating4() -> FiniteGroup:
    return group_from_permutations(
        {"a": _perm([[1, 2, 3]], 4), "b": _perm([[1, 2], [3, 4]], 4)}, name="A4"
    )


def quaternion() -> FiniteGroup:
    """Q8 in its regular representation: i = (1 2 3 4)(5 6 7 8), j = (1 5 3 7)(2 8 4 6)."""
    return group_from_permutations(
        {"i": _perm([[1, 2, 3, 4], [5, 6, 7, 8]], 8), "j": _perm([[1, 5, 3, 7], [2, 8, 4, 6]], 8)},
        name="Q8",
    )


def heisenberg3() -> FiniteGroup:
    """Unitriangular 3x3 matrices over F_3, acting on F_3^2 by (u, v) -> (u+1, v) and (u, v) -> (u, v+u)."""
    pts = [(u, v) for u in range(3) for v in range(3)]
    idx = {p: i for i, p in enumerate(pts)}
    x = tuple(idx[((u + 1) % 3, v)] for u, v in pts)
    y = tuple(idx[(u, (v + u) % 3)] for u, v in pts)
    return group_from_permutations({"x": x, "y": y}, name="Heis27")


BUILTIN = {
    **{f"C{n}": (lambda n=n: cyclic(n)) for n in range(2, 17)},
    "C2xC2": lambda: abelian(2, 2),
    "C2xC4": lambda: abelian(2, 4),
    "C2^3": lambda: abelian(2, 2, 2, name="C2^3"),
    "C3^2": lambda: abelian(3, 3, name="C3^2"),
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "A4": alternating4,
    "D4": lambda: dihedral(4),
    "D5": lambda: dihedral(5),
    "D6": lambda: dihedral(6),
    "Q8": quaternion,
    "Heis27": heisenberg3,
}


@lru_cache(maxsize=None)
def builtin(name: str) -> FiniteGroup:
    try:
        return BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown built-in group {name!r}; known: {', '.join(BUILTIN)}") from None


def builtin_names() -> list[str]:
    return list(BUILTIN)
