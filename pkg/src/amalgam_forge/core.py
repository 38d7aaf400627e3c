"""R-structures, S-structures, their predimensions and the text format."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Union

from . import kernels
from .errors import ParseError, PreconditionError, ValidityError

SYMMETRIC = "symmetric"
ORDERED = "ordered"
MODES = (SYMMETRIC, ORDERED)

_POINT = re.compile(r"[A-Za-z0-9_]+\Z")


def check_point(p: str) -> str:
    if not isinstance(p, str) or not _POINT.match(p):
        raise ValueError(f"invalid point id {p!r}")
    return p


def key(points: Iterable[str]) -> tuple[str, ...]:
    """Canonical sort key of a point set."""
    return tuple(sorted(points))


def cap(size: int) -> int:
    """Largest multiplicity a clique set of this size may carry."""
    if size < 3:
        return 0
    return 1 + 2 // (size - 2)


class _Indexed:
    """Bit-index encoding shared by both structure kinds (point i <-> bit i in sorted order)."""

    points: frozenset

    @cached_property
    def order(self) -> tuple[str, ...]:
        return tuple(sorted(self.points))

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.order)}

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.order)) - 1

    def mask(self, pts: Iterable[str]) -> int:
        idx = self.index
        m = 0
        for p in pts:
            try:
                m |= 1 << idx[p]
            except KeyError:
                raise PreconditionError(f"point {p!r} is not in the structure") from None
        return m

    def unmask(self, m: int) -> frozenset[str]:
        order = self.order
        out = []
        while m:
            low = m & -m
            out.append(order[low.bit_length() - 1])
            m ^= low
        return frozenset(out)

    def predim_of(self, pts: Iterable[str]) -> int:
        """Predimension of the induced substructure on ``pts``."""
        masks, weights = self.items
        return int(kernels.predim(masks, weights, self.mask(pts)))


@dataclass(frozen=True, init=False)
class RStructure(_Indexed):
    points: frozenset[str]
    relations: frozenset[tuple[str, str, str]]
    mode: str = SYMMETRIC

    def __init__(self, points: Iterable[str] = (), relations: Iterable[Iterable[str]] = (),
                 mode: str = SYMMETRIC):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        pts = frozenset(check_point(p) for p in points)
        rels = set()
        for r in relations:
            r = tuple(r)
            if len(r) != 3 or len(set(r)) != 3:
                raise ValueError(f"relation {r} must have three distinct elements")
            missing = [p for p in r if p not in pts]
            if missing:
                raise ValueError(f"relation {r} mentions undeclared points {missing}")
            rels.add(tuple(sorted(r)) if mode == SYMMETRIC else r)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "relations", frozenset(rels))
        object.__setattr__(self, "mode", mode)

    @cached_property
    def items(self) -> tuple[list[int], list[int]]:
        weights: dict[int, int] = {}
        for r in self.relations:
            m = self.mask(r)
            weights[m] = weights.get(m, 0) + 1
        ms = sorted(weights)
        return ms, [weights[m] for m in ms]

    @cached_property
    def thirds(self) -> dict[frozenset, frozenset]:
        """For each pair {x, y}: the points z with {x, y, z} related (symmetric mode)."""
        if self.mode != SYMMETRIC:
            raise PreconditionError("witness pairs are defined for symmetric structures")
        acc: dict[frozenset, set] = {}
        for a, b, c in self.relations:
            acc.setdefault(frozenset((a, b)), set()).add(c)
            acc.setdefault(frozenset((a, c)), set()).add(b)
            acc.setdefault(frozenset((b, c)), set()).add(a)
        return {p: frozenset(s) for p, s in acc.items()}

    def relations_within(self, pts: Iterable[str]) -> frozenset:
        s = set(pts)
        return frozenset(r for r in self.relations if s.issuperset(r))

    def restrict(self, pts: Iterable[str]) -> "RStructure":
        s = frozenset(pts)
        if not s <= self.points:
            raise PreconditionError(f"points {sorted(s - self.points)} are not in the structure")
        return RStructure(s, self.relations_within(s), self.mode)

    def rename(self, mapping: Mapping[str, str]) -> "RStructure":
        f = lambda p: mapping.get(p, p)  # noqa: E731
        return RStructure((f(p) for p in self.points),
                          (tuple(f(p) for p in r) for r in self.relations), self.mode)

    def __repr__(self) -> str:
        return f"RStructure({len(self.points)} points, {len(self.relations)} relations, {self.mode})"


CliqueInput = Union[Mapping[Iterable[str], int], Iterable[tuple[Iterable[str], int]]]


def _merge(cliques: CliqueInput) -> dict[frozenset, int]:
    pairs = cliques.items() if isinstance(cliques, Mapping) else cliques
    out: dict[frozenset, int] = {}
    for universe, mult in pairs:
        u = frozenset(universe)
        if not isinstance(mult, int) or mult < 1:
            raise ValidityError(f"premultiplicity of {key(u)} must be a positive integer", u, mult)
        out[u] = out.get(u, 0) + mult
    return out


def validity_violation(premult: Mapping[frozenset, int]) -> tuple[frozenset, int] | None:
    """First set (by size, then ids) whose multiplicity exceeds its cap, or None.

    Only intersections of declared universes need checking: every other set has
    the same multiplicity as the intersection of the universes containing it,
    and caps decrease with size.
    """
    universes = list(premult)
    closed = set(universes)
    frontier = list(universes)
    while frontier:
        fresh = []
        for a in frontier:
            for b in universes:
                c = a & b
                if len(c) >= 3 and c not in closed:
                    closed.add(c)
                    fresh.append(c)
        frontier = fresh
    for c in sorted(closed, key=lambda s: (len(s), key(s))):
        m = sum(k for u, k in premult.items() if c <= u)
        if m > cap(len(c)):
            return c, m
    return None


@dataclass(frozen=True, init=False)
class SStructure(_Indexed):
    points: frozenset[str]
    cliques: tuple[tuple[frozenset[str], int], ...]

    def __init__(self, points: Iterable[str] = (), cliques: CliqueInput = (), check: bool = True):
        pts = frozenset(check_point(p) for p in points)
        merged = _merge(cliques)
        for u in merged:
            if len(u) < 3:
                raise ValidityError(f"clique {key(u)} has fewer than three points", u)
            if not u <= pts:
                raise ValidityError(f"clique {key(u)} mentions undeclared points {key(u - pts)}", u)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "cliques",
                           tuple(sorted(merged.items(), key=lambda item: key(item[0]))))
        if check:
            bad = validity_violation(merged)
            if bad is not None:
                c, m = bad
                raise ValidityError(
                    f"clique set {key(c)} has multiplicity {m} above the cap {cap(len(c))}", c, m)

    @cached_property
    def premult(self) -> dict[frozenset, int]:
        return dict(self.cliques)

    @cached_property
    def items(self) -> tuple[list[int], list[int]]:
        return [self.mask(u) for u, _ in self.cliques], [k for _, k in self.cliques]

    def multiplicity(self, c: Iterable[str]) -> int:
        s = frozenset(c)
        if len(s) < 3:
            return 0
        return sum(k for u, k in self.cliques if s <= u)

    def validity_violation(self) -> tuple[frozenset, int] | None:
        return validity_violation(self.premult)

    def full_enumeration(self) -> list[frozenset]:
        """Each declared universe repeated by its premultiplicity, in canonical order."""
        return [u for u, k in self.cliques for _ in range(k)]

    def restrict(self, pts: Iterable[str], check: bool = True) -> "SStructure":
        s = frozenset(pts)
        if not s <= self.points:
            raise PreconditionError(f"points {sorted(s - self.points)} are not in the structure")
        acc: dict[frozenset, int] = {}
        for u, k in self.cliques:
            c = u & s
            if len(c) >= 3:
                acc[c] = acc.get(c, 0) + k
        return SStructure(s, acc, check=check)

    def rename(self, mapping: Mapping[str, str]) -> "SStructure":
        f = lambda p: mapping.get(p, p)  # noqa: E731
        return SStructure((f(p) for p in self.points),
                          [(frozenset(f(p) for p in u), k) for u, k in self.cliques])

    def __repr__(self) -> str:
        return f"SStructure({len(self.points)} points, {len(self.cliques)} cliques)"


Structure = Union[RStructure, SStructure]


def predim_r(a: RStructure) -> int:
    return len(a.points) - len(a.relations)


def predim_s(a: SStructure) -> int:
    return len(a.points) - sum(k * (len(u) - 2) for u, k in a.cliques)


def predim_s_alt(a: SStructure) -> int:
    """|A| + 2|C(A)| - i(A) with |C(A)| and i(A) read off the full enumeration."""
    enum = a.full_enumeration()
    return len(a.points) + 2 * len(enum) - sum(len(u) for u in enum)


def predim(a: Structure) -> int:
    return predim_r(a) if isinstance(a, RStructure) else predim_s(a)


def restrict_s(n: SStructure, x: Iterable[str]) -> SStructure:
    return n.restrict(x)


def restrict(n: Structure, x: Iterable[str]) -> Structure:
    return n.restrict(x)


def rel_predim_s(b: Iterable[str], a: Iterable[str], n: SStructure) -> int:
    a, b = frozenset(a), frozenset(b)
    return predim_s(n.restrict(a | b)) - predim_s(n.restrict(a))


def rel_predim(b: Iterable[str], a: Iterable[str], n: Structure) -> int:
    a, b = frozenset(a), frozenset(b)
    return n.predim_of(a | b) - n.predim_of(a)


def is_substructure_s(a: SStructure, b: SStructure) -> bool:
    return a.points <= b.points and b.restrict(a.points, check=False) == a


def is_substructure_r(a: RStructure, b: RStructure) -> bool:
    return a.mode == b.mode and a.points <= b.points and b.relations_within(a.points) == a.relations


def is_substructure(a: Structure, b: Structure) -> bool:
    if isinstance(a, SStructure) and isinstance(b, SStructure):
        return is_substructure_s(a, b)
    if isinstance(a, RStructure) and isinstance(b, RStructure):
        return is_substructure_r(a, b)
    return False


def free_structure(n: int, prefix: str = "f") -> SStructure:
    """F_n: n points and no cliques."""
    return SStructure(f"{prefix}{i}" for i in range(n))


# text format

def serialize(x: Structure) -> str:
    lines = []
    if isinstance(x, RStructure):
        lines.append(f"rstructure {x.mode}")
        lines += [f"point {p}" for p in x.order]
        lines += ["rel " + " ".join(r) for r in sorted(x.relations)]
    else:
        lines.append("sstructure")
        lines += [f"point {p}" for p in x.order]
        lines += ["clique " + " ".join(key(u)) + f" mult {k}" for u, k in x.cliques]
    return "\n".join(lines) + "\n"


def parse(text: str) -> Structure:
    header = None
    kind = mode = None
    points: list[str] = []
    seen: set[str] = set()
    entries: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if header is None:
            header = tokens
            if tokens[0] == "rstructure" and len(tokens) == 2 and tokens[1] in MODES:
                kind, mode = "r", tokens[1]
            elif tokens == ["sstructure"]:
                kind = "s"
            else:
                raise ParseError(f"bad header {' '.join(tokens)!r}", lineno)
            continue
        word, args = tokens[0], tokens[1:]
        if word == "point":
            if len(args) != 1 or not _POINT.match(args[0]):
                raise ParseError("expected 'point <id>'", lineno)
            if args[0] in seen:
                raise ParseError(f"duplicate point {args[0]}", lineno)
            seen.add(args[0])
            points.append(args[0])
        elif word == "rel" and kind == "r":
            if len(args) != 3:
                raise ParseError("expected 'rel <id> <id> <id>'", lineno)
            if len(set(args)) != 3:
                raise ParseError("relation elements must be distinct", lineno)
            entries.append((lineno, args))
        elif word == "clique" and kind == "s":
            if len(args) < 5 or args[-2] != "mult":
                raise ParseError("expected 'clique <id> ... <id> mult <k>'", lineno)
            try:
                int(args[-1])
            except ValueError:
                raise ParseError(f"bad premultiplicity {args[-1]!r}", lineno) from None
            members = args[:-2]
            if len(set(members)) != len(members) or len(members) < 3:
                raise ParseError("clique needs at least three distinct points", lineno)
            entries.append((lineno, args))
        else:
            raise ParseError(f"unexpected line {raw.strip()!r}", lineno)
    if header is None:
        raise ParseError("empty input", 1)
    for lineno, args in entries:
        ids = args if kind == "r" else args[:-2]
        for p in ids:
            if p not in seen:
                raise ParseError(f"undeclared point {p}", lineno)
    if kind == "r":
        return RStructure(points, (tuple(a) for _, a in entries), mode)
    bad = [(ln, a) for ln, a in entries if int(a[-1]) not in (1, 2, 3)]
    if bad:
        ln, a = bad[0]
        raise ValidityError(f"line {ln}: premultiplicity {a[-1]} outside 1..3", frozenset(a[:-2]),
                            int(a[-1]))
    return SStructure(points, [(a[:-2], int(a[-1])) for _, a in entries])


def read_structure(path: str | Path) -> Structure:
    return parse(Path(path).read_text(encoding="utf-8"))


def write_structure(x: Structure, path: str | Path) -> None:
    Path(path).write_text(serialize(x), encoding="utf-8")


def subsets(pts: Iterable[str], min_size: int = 0):
    pts = key(pts)
    for r in range(min_size, len(pts) + 1):
        yield from (frozenset(c) for c in combinations(pts, r))
