"""Text formats: group files, words, subgroup word lists, ideal specs and cube tables."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .catalog import builtin
from .crossed import CrossedCubeData, FiniteRing, all_betas, beta_key, parse_beta
from .group import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    Subgroup,
    Word,
    cycles_to_perm,
    evaluate_word,
    group_from_permutations,
    group_from_table,
    normal_closure,
)
from .groupring import AmbientRing, Ideal, augmentation_ideal, ideal_generated, scalar_ideal


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)
        self.line, self.col = line, col


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_GEN = re.compile(r"gen\s+(?P<name>\S+)\s*=\s*(?P<body>.*)$")


@dataclass(frozen=True)
class GroupSpec:
    """Parsed group file: named permutation generators or an explicit table."""

    kind: str  # "perm" or "table"
    generators: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...] = ()
    table: tuple[tuple[int, ...], ...] = ()
    name: str = ""

    @property
    def degree(self) -> int:
        points = [p for _, cyc in self.generators for c in cyc for p in c]
        return max(points, default=1)


def parse_cycles(text: str, line: int = 1, offset: int = 0) -> tuple[tuple[int, ...], ...]:
    """``(1 2 3)(4 5)`` into tuples of 1-based points; ``()`` is the identity."""
    cycles, seen, i = [], set(), 0
    s = text.rstrip()
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise ParseError(f"expected '(' but found {ch!r}", line, offset + i + 1)
        j = s.find(")", i)
        if j < 0:
            raise ParseError("unclosed cycle", line, offset + i + 1)
        body = s[i + 1 : j].replace(",", " ").split()
        pts = []
        for tok in body:
            if not tok.isdigit() or int(tok) < 1:
                raise ParseError(f"bad point {tok!r}", line, offset + i + 2)
            p = int(tok)
            if p in seen:
                raise ParseError(f"repeated point {p}", line, offset + i + 2)
            seen.add(p)
            pts.append(p)
        if len(pts) > 1:
            cycles.append(tuple(pts))
        i = j + 1
    return tuple(cycles)


def format_cycles(cycles) -> str:
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) or "()"


def parse_group(text: str) -> GroupSpec:
    gens: list = []
    table: list = []
    name = ""
    in_table = False
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("name "):
            name = line[5:].strip()
            continue
        if line == "table":
            if gens or in_table:
                raise ParseError("'table' block cannot follow generators or repeat", ln, 1)
            in_table = True
            continue
        if in_table:
            try:
                table.append(tuple(int(t) for t in line.split()))
            except ValueError:
                raise ParseError("table rows must be integers", ln, 1) from None
            continue
        m = _GEN.match(line)
        if not m:
            raise ParseError("expected 'gen <name> = <cycles>', 'table' or 'name <text>'", ln, 1)
        gname = m.group("name")
        if not _NAME.fullmatch(gname):
            raise ParseError(f"bad generator name {gname!r}", ln, raw.find(gname) + 1)
        if any(g == gname for g, _ in gens):
            raise ParseError(f"repeated generator name {gname!r}", ln, raw.find(gname) + 1)
        gens.append((gname, parse_cycles(m.group("body"), ln, raw.find(m.group("body")))))
    if in_table:
        if not table:
            raise ParseError("empty table block")
        return GroupSpec("table", table=tuple(table), name=name)
    if not gens:
        raise ParseError("no generators")
    return GroupSpec("perm", generators=tuple(gens), name=name)


def print_group(spec: GroupSpec) -> str:
    lines = [f"name {spec.name}"] if spec.name else []
    if spec.kind == "table":
        lines.append("table")
        lines += [" ".join(map(str, row)) for row in spec.table]
    else:
        lines += [f"gen {n} = {format_cycles(c)}" for n, c in spec.generators]
    return "\n".join(lines) + "\n"


def build_group(spec: GroupSpec, cap: int = DEFAULT_ORDER_CAP, name: str = "") -> FiniteGroup:
    name = spec.name or name
    if spec.kind == "table":
        return group_from_table(spec.table, name=name)
    degree = spec.degree
    perms = {gname: cycles_to_perm(cycles, degree) for gname, cycles in spec.generators}
    return group_from_permutations(perms, cap=cap, name=name)


def load_group(ref: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """A group file path, or ``builtin:NAME``."""
    if ref.startswith("builtin:"):
        try:
            return builtin(ref[8:])
        except KeyError as e:
            raise ParseError(str(e)) from None
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {ref}: {e.strerror}") from None
    stem = re.sub(r"\.[^.]*$", "", ref.rsplit("/", 1)[-1])
    return build_group(parse_group(text), cap=cap, name=stem)


# -- words -------------------------------------------------------------------

_TERM = re.compile(r"(?P<name>[A-Za-z_][A-Za-z0-9_]*)(\^(?P<exp>[+-]?\d+))?$")


def parse_word(text: str) -> Word:
    """``term+`` with ``term := name (^ int)?``; a lone ``1`` is the identity."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty word")
    letters = []
    col = 0
    for tok in tokens:
        col = text.index(tok, col)
        if tok == "1":  # explicit identity
            col += 1
            continue
        m = _TERM.match(tok)
        if not m:
            raise ParseError(f"bad term {tok!r}", 1, col + 1)
        letters.append((m.group("name"), int(m.group("exp") or 1)))
        col += len(tok)
    return Word(tuple(letters))


@dataclass(frozen=True)
class SubgroupSpec:
    """A normal subgroup given as the normal closure of a list of words."""

    name: str
    words: tuple[Word, ...]

    def build(self, g: FiniteGroup) -> Subgroup:
        try:
            return normal_closure(g, [evaluate_word(g, w) for w in self.words])
        except Exception as e:
            raise ParseError(f"subgroup {self.name}: {e}") from None


def parse_subgroup(name: str, text: str) -> SubgroupSpec:
    """Comma-separated words; ``1`` or an empty string is the trivial subgroup."""
    parts = [p.strip() for p in text.split(",")]
    words = tuple(parse_word(p) for p in parts if p and p != "1")
    return SubgroupSpec(name, words)


# -- ideals ------------------------------------------------------------------

_VEC = re.compile(r"\[([^\]]*)\]")


def parse_ideals(text: str, ring: AmbientRing, group: FiniteGroup | None = None) -> list[Ideal]:
    """';'-separated ideals: ``aug(words, ...)``, ``zero``, ``full``, ``N*R`` or ``[v], [v], ...`` generators."""
    out = []
    for k, part in enumerate(text.split(";"), 1):
        part = part.strip()
        if not part:
            raise ParseError(f"ideal {k} is empty")
        if part.startswith("aug(") and part.endswith(")"):
            if group is None:
                raise ParseError("aug(...) needs a group ring")
            sub = parse_subgroup(f"I{k}", part[4:-1]).build(group)
            out.append(augmentation_ideal(ring, sub))
        elif part == "zero":
            out.append(ring.zero())
        elif part == "full":
            out.append(ring.full())
        elif re.fullmatch(r"\d+\*R", part):
            out.append(scalar_ideal(ring, int(part[:-2])))
        else:
            vecs = []
            for m in _VEC.finditer(part):
                try:
                    v = [int(x) for x in m.group(1).replace(",", " ").split()]
                except ValueError:
                    raise ParseError(f"ideal {k}: non-integer entry") from None
                if len(v) != ring.rank:
                    raise ParseError(f"ideal {k}: vector length {len(v)} but ring rank {ring.rank}")
                vecs.append(v)
            if not vecs or _VEC.sub("", part).replace(",", "").strip():
                raise ParseError(f"cannot parse ideal {k}: {part!r}")
            out.append(ideal_generated(ring, vecs))
    return out


# -- crossed cube tables -------------------------------------------------------


def cube_from_json(obj: dict) -> CrossedCubeData:
    """Read ``{"n", "rings": {β: {add, mul, zero?, names?}}, "mu": {"i:β": [...]}, "h": {"β|β'": [[...]]}}``.

    β is written as its sorted digits, the empty set as "".
    """
    try:
        n = int(obj["n"])
        rings = {}
        for key, r in obj["rings"].items():
            rings[parse_beta(key)] = FiniteRing(
                np.array(r["add"]), np.array(r["mul"]), int(r.get("zero", 0)), tuple(r.get("names", ()))
            )
        mu = {}
        for key, t in obj["mu"].items():
            i, b = key.split(":")
            mu[(int(i), parse_beta(b))] = np.array(t, dtype=np.int64)
        h = {}
        for key, t in obj["h"].items():
            b1, b2 = key.split("|")
            h[(parse_beta(b1), parse_beta(b2))] = np.array(t, dtype=np.int64).reshape(
                rings[parse_beta(b1)].size, rings[parse_beta(b2)].size
            )
    except (KeyError, ValueError, TypeError, AttributeError) as e:
        raise ParseError(f"malformed cube file: {e}") from None
    return CrossedCubeData(n, rings, mu, h, name=str(obj.get("name", "")))


def cube_to_json(d: CrossedCubeData) -> dict:
    betas = sorted(all_betas(d.n), key=lambda b: (len(b), sorted(b)))
    return {
        "name": d.name,
        "n": d.n,
        "rings": {
            beta_key(b): {
                "add": d.rings[b].add.tolist(),
                "mul": d.rings[b].mul.tolist(),
                "zero": d.rings[b].zero,
                "names": list(d.rings[b].names),
            }
            for b in betas
        },
        "mu": {f"{i}:{beta_key(b)}": d.mu[(i, b)].tolist() for b in betas for i in range(1, d.n + 1)},
        "h": {f"{beta_key(a)}|{beta_key(b)}": d.h[(a, b)].tolist() for a in betas for b in betas},
    }


def load_cube(path: str) -> CrossedCubeData:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    return cube_from_json(obj)
