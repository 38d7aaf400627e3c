"""Free R-amalgams, simple S-amalgams, mixed generic amalgams, a bounded
generic-chain builder and bounded back-and-forth probes."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from . import kernels
from .cliques import WitnessedClique, canonical, extract_cliques, generators
from .core import (SYMMETRIC, RStructure, SStructure, Structure, is_substructure_r,
                   is_substructure_s, key, serialize)
from .errors import PreconditionError, ValidityError
from .iso import find_isomorphism, iter_embeddings
from .strength import DEFAULT_BOUND, TABLE_BOUND, closure, dimension_table, is_strong
from .transforms import fresh_pair


def free_amalgam_r(b1: RStructure, b2: RStructure, a: Iterable[str]) -> RStructure:
    a = frozenset(a)
    if b1.mode != b2.mode:
        raise PreconditionError("cannot amalgamate structures of different modes")
    if b1.points & b2.points != a:
        raise PreconditionError(f"the sides overlap in {key(b1.points & b2.points)}, not in {key(a)}")
    if b1.relations_within(a) != b2.relations_within(a):
        raise PreconditionError("the sides disagree on the base")
    return RStructure(b1.points | b2.points, b1.relations | b2.relations, b1.mode)


def _extensions(b: SStructure, a: frozenset) -> dict[frozenset, list[frozenset]]:
    """Base universe -> the canonical list of its extension instances in b."""
    out: dict[frozenset, list[frozenset]] = {}
    for u in b.full_enumeration():
        base = u & a
        if len(base) >= 3:
            out.setdefault(base, []).append(u)
    return out


@dataclass(frozen=True)
class AmalgamSpec:
    left: SStructure
    right: SStructure
    base: frozenset
    pairing: tuple[tuple[frozenset, frozenset], ...]


def amalgam_spec(b1: SStructure, b2: SStructure, a: Iterable[str],
                 pairing: Mapping[frozenset, Sequence[tuple[frozenset, frozenset]]] | None = None) -> AmalgamSpec:
    a = frozenset(a)
    if b1.points & b2.points != a:
        raise PreconditionError(f"the sides overlap in {key(b1.points & b2.points)}, not in {key(a)}")
    if b1.restrict(a, check=False) != b2.restrict(a, check=False):
        raise PreconditionError("the sides disagree on the base")
    e1, e2 = _extensions(b1, a), _extensions(b2, a)
    pairs = []
    for base in sorted(set(e1) | set(e2), key=key):
        left, right = e1.get(base, []), e2.get(base, [])
        if pairing is not None and base in pairing:
            chosen = [(frozenset(x), frozenset(y)) for x, y in pairing[base]]
            if (sorted(map(key, (x for x, _ in chosen))) != sorted(map(key, left))
                    or sorted(map(key, (y for _, y in chosen))) != sorted(map(key, right))):
                raise PreconditionError(f"pairing for {key(base)} does not match the extension counts")
        else:
            if len(left) != len(right):
                raise PreconditionError(f"clique {key(base)} extends {len(left)} times on the left, "
                                        f"{len(right)} on the right")
            chosen = list(zip(left, right))
        pairs.extend(chosen)
    return AmalgamSpec(b1, b2, a, tuple(pairs))


def simple_amalgam_s(b1: SStructure, b2: SStructure, a: Iterable[str],
                     pairing: Mapping[frozenset, Sequence[tuple[frozenset, frozenset]]] | None = None) -> SStructure:
    """Paired extensions of base cliques merge; all other cliques are copied."""
    spec = amalgam_spec(b1, b2, a, pairing)
    merged: Counter = Counter()
    for x, y in spec.pairing:
        merged[x | y] += 1
    for side in (b1, b2):
        for u, m in side.cliques:
            if len(u & spec.base) < 3:
                merged[u] += m
    return SStructure(b1.points | b2.points, dict(merged))


def is_simple_amalgam(d: SStructure, x1: Iterable[str], x2: Iterable[str], a: Iterable[str]) -> bool:
    """d restricted to x1 and x2 overlaps only in a, its cliques not based in a lie
    on one side, and each base clique's extensions pair up one-to-one."""
    x1, x2, a = frozenset(x1), frozenset(x2), frozenset(a)
    if x1 & x2 != a or d.points != x1 | x2:
        return False
    b1, b2 = d.restrict(x1, check=False), d.restrict(x2, check=False)
    base = d.restrict(a, check=False)
    for u, m in d.cliques:
        if len(u & a) < 3:
            if not (u <= x1 or u <= x2):
                return False
    # instance counts: each base clique is extended once per premult unit on each side
    counts = Counter()
    for u, m in d.cliques:
        if len(u & a) >= 3:
            counts[u & a] += m
    if counts != Counter(dict(base.cliques)):
        return False
    e1, e2 = _extensions(b1, a), _extensions(b2, a)
    return all(len(e1.get(c, [])) == len(e2.get(c, [])) == k for c, k in base.cliques)


def mixed_generic_amalgam(abar: RStructure, b: SStructure, a: Iterable[str],
                          ambient: RStructure | None = None) -> RStructure:
    """Ā plus the new points of B; base-clique extensions reuse their witnesses
    in Ā, every other clique of B gets a designated fresh pair.

    Cliques and witnesses of A are read in ``ambient`` (default Ā).
    """
    a = frozenset(a)
    amb = abar if ambient is None else ambient
    if abar.mode != SYMMETRIC:
        raise PreconditionError("the R side must be symmetric")
    if not a <= abar.points:
        raise PreconditionError(f"core points {key(a - abar.points)} are not in the R side")
    if ambient is not None and not is_substructure_r(abar, ambient):
        raise PreconditionError("the R side is not a substructure of the ambient structure")
    if b.points & abar.points != a:
        raise PreconditionError(f"the sides overlap in {key(b.points & abar.points)}, not in {key(a)}")
    wit = extract_cliques(a, amb)
    missing = frozenset().union(*(c.witnesses for c in wit)) - abar.points
    if missing:
        raise PreconditionError(f"witnesses {key(missing)} of the core lie outside the R side")
    counts = Counter(c.universe for c in wit)
    if not is_substructure_s(SStructure(a, dict(counts)), b):
        raise PreconditionError("the core's S-structure is not a substructure of B")
    by_base: dict[frozenset, list[WitnessedClique]] = {}
    for c in canonical(wit):
        by_base.setdefault(c.universe, []).append(c)
    rels = set(abar.relations)
    pts = set(abar.points) | b.points
    taken = set(pts) | set(amb.points)
    seen: Counter = Counter()
    for base, insts in sorted(_extensions(b, a).items(), key=lambda kv: key(kv[0])):
        for u, c in zip(insts, by_base.get(base, [])):
            rels |= generators(u, c.witnesses)
    for u in b.full_enumeration():
        if len(u & a) >= 3:
            continue
        i = seen[u]
        seen[u] += 1
        pair = fresh_pair("mixed:" + ",".join(key(u)) + f"#{i}", taken)
        pts.update(pair)
        rels |= generators(u, pair)
    return RStructure(pts, rels)


# bounded generic chains

@dataclass(frozen=True)
class ExtensionType:
    base: frozenset
    structure: Structure  # on base plus new points e1, e2, ...

    @property
    def new_points(self) -> frozenset:
        return self.structure.points - self.base

    def describe(self) -> str:
        return serialize(self.structure)


def _new_names(k: int) -> list[str]:
    return [f"e{i + 1}" for i in range(k)]


def _is_minimal_strong(b: Structure, a: frozenset) -> bool:
    """a is strong in b and no set strictly between is."""
    dims = dimension_table(b)
    masks, weights = b.items

    def strong(s):
        m = b.mask(s)
        return int(kernels.predim(masks, weights, m)) == int(dims[m])

    if not strong(a):
        return False
    rest = sorted(b.points - a)
    for r in range(1, len(rest)):
        for extra in combinations(rest, r):
            if strong(a | set(extra)):
                return False
    return True


def _candidate_extensions(n: Structure, a: frozenset, k: int) -> Iterable[Structure]:
    base = n.restrict(a)
    new = _new_names(k)
    pts = sorted(a) + new
    if isinstance(n, RStructure):
        if n.mode != SYMMETRIC:
            raise PreconditionError("extensions are enumerated for symmetric structures")
        triples = [t for t in combinations(sorted(pts), 3) if not a.issuperset(t)]
        for bits in product((0, 1), repeat=len(triples)):
            rels = [t for t, on in zip(triples, bits) if on]
            yield RStructure(pts, base.relations | set(rels))
    else:
        universes = [frozenset(u) for r in range(3, len(pts) + 1) for u in combinations(sorted(pts), r)]
        for ms in product(range(4), repeat=len(universes)):
            cl = {u: m for u, m in zip(universes, ms) if m}
            s = SStructure(pts, cl, check=False)
            if s.validity_violation() is not None:
                continue
            if s.restrict(a, check=False) != base:
                continue
            yield s


def extension_types(n: Structure, a: Iterable[str], bound: int) -> list[ExtensionType]:
    """Minimal strong extensions of n|a by new points, |B| <= bound, up to isomorphism over a."""
    a = frozenset(a)
    out: list[ExtensionType] = []
    for k in range(1, bound - len(a) + 1):
        for b in _candidate_extensions(n, a, k):
            if not _is_minimal_strong(b, a):
                continue
            ident = {p: p for p in a}
            if any(len(t.structure.points) == len(b.points) and
                   find_isomorphism(t.structure, b, ident) is not None for t in out):
                continue
            out.append(ExtensionType(a, b))
    return out


@dataclass
class ChainState:
    current: Structure
    log: list[dict] = field(default_factory=list)
    extension_bound: int = 0
    size_bound: int = 0
    prefixes: list[frozenset] = field(default_factory=list)
    coverage: dict = field(default_factory=dict)

    def log_lines(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.log)

    def report(self) -> str:
        c = self.coverage
        lines = [f"points {len(self.current.points)}", f"extensions {len(self.log)}",
                 f"types-seen {c.get('types', 0)}", f"realized {c.get('realized', 0)}",
                 f"blocked-by-size {c.get('blocked', 0)}"]
        return "\n".join(lines) + "\n"


class _Table:
    """Strongness oracle for the current chain structure, rebuilt on change."""

    def __init__(self):
        self.n = None
        self.dims = None

    def strong(self, n: Structure, pts: Iterable[str]) -> bool:
        if self.n is not n:
            self.n, self.dims = n, dimension_table(n)
        m = n.mask(pts)
        masks, weights = n.items
        return int(kernels.predim(masks, weights, m)) == int(self.dims[m])


def _realized(ext: ExtensionType, n: Structure, table: _Table) -> bool:
    ident = {p: p for p in ext.base}
    for g in iter_embeddings(ext.structure, n, ident):
        if table.strong(n, g.values()):
            return True
    return False


def _amalgamate(n: Structure, ext: ExtensionType, names: list[str]) -> Structure:
    ren = {p: p for p in ext.base}
    ren.update(zip(sorted(ext.new_points), names))
    b = ext.structure.rename(ren)
    if isinstance(n, RStructure):
        return free_amalgam_r(n, b, ext.base)
    return simple_amalgam_s(n, b, ext.base)


def _free_point(n: Structure, name: str) -> Structure:
    if isinstance(n, RStructure):
        return RStructure(n.points | {name}, n.relations, n.mode)
    return SStructure(n.points | {name}, n.cliques)


def generic_chain_builder(extension_bound: int, size_bound: int, calculus: str = "r") -> ChainState:
    """Grow a structure from the empty one by realizing minimal strong extensions
    of its small strong subsets, round-robin, until closed or out of room.

    A round that realizes nothing adds one free point (keeping F_n embedded).
    """
    if extension_bound < 1 or size_bound < 1:
        raise PreconditionError("bounds must be positive")
    if size_bound > TABLE_BOUND:
        raise PreconditionError(f"size bound above {TABLE_BOUND}")
    n: Structure = RStructure() if calculus == "r" else SStructure()
    if calculus not in ("r", "s"):
        raise PreconditionError(f"unknown calculus {calculus!r}")
    state = ChainState(n, [], extension_bound, size_bound, [frozenset()])
    table = _Table()
    types_cache: dict = {}
    seen_types: set = set()
    realized = blocked = 0
    counter = 0

    def fresh(k):
        nonlocal counter
        names = [f"p{counter + i:03d}" for i in range(k)]
        counter += k
        return names

    while True:
        progress = False
        bases = [a for a in _strong_small(n, extension_bound - 1, table)]
        blocked = 0
        for a in bases:
            for ext in _types_over(n, a, extension_bound, types_cache):
                seen_types.add((len(a), _type_key(ext)))
                if _realized(ext, n, table):
                    continue
                k = len(ext.new_points)
                if len(n.points) + k > size_bound:
                    blocked += 1
                    continue
                names = fresh(k)
                n = _amalgamate(n, ext, names)
                realized += 1
                progress = True
                state.log.append({"step": len(state.log), "base": list(key(a)),
                                  "new": names, "extension": ext.describe(),
                                  "size": len(n.points)})
                state.prefixes.append(n.points)
        if not progress:
            if len(n.points) >= size_bound:
                break
            name = fresh(1)[0]
            n = _free_point(n, name)
            state.log.append({"step": len(state.log), "base": list(key(n.points - {name})),
                              "new": [name], "extension": "free point", "size": len(n.points)})
            state.prefixes.append(n.points)
    state.current = n
    state.coverage = {"types": len(seen_types), "realized": realized, "blocked": blocked}
    return state


def _types_over(n: Structure, a: frozenset, bound: int, cache: dict) -> list[ExtensionType]:
    """extension_types over a, computed once per base shape and renamed."""
    to_canon = {p: f"b{i}" for i, p in enumerate(key(a))}
    canon = n.restrict(a).rename(to_canon)
    ck = serialize(canon)
    if ck not in cache:
        cache[ck] = extension_types(canon, canon.points, bound)
    back = {v: k for k, v in to_canon.items()}
    out = []
    for t in cache[ck]:
        ren = {p: back.get(p, p) for p in t.structure.points}
        out.append(ExtensionType(a, t.structure.rename(ren)))
    return out


def _type_key(ext: ExtensionType) -> str:
    return serialize(ext.structure)


def _strong_small(n: Structure, max_size: int, table: _Table) -> list[frozenset]:
    out = []
    order = n.order
    for r in range(min(max_size, len(order)) + 1):
        for combo in combinations(order, r):
            if table.strong(n, combo):
                out.append(frozenset(combo))
    return out


def certify_chain(state: ChainState) -> bool:
    """Every recorded prefix is strong in the final structure."""
    table = _Table()
    return all(table.strong(state.current, p) for p in state.prefixes)


# back-and-forth probe

@dataclass(frozen=True)
class ProbeReport:
    ok: bool
    mapping: dict
    steps_done: int
    reason: str = ""
    log: tuple = ()

    def describe(self) -> str:
        lines = [f"verdict {'extended' if self.ok else 'failed'}", f"steps {self.steps_done}"]
        if self.reason:
            lines.append(f"reason {self.reason}")
        for p in sorted(self.mapping):
            lines.append(f"map {p} {self.mapping[p]}")
        return "\n".join(lines) + "\n"


def _partial_iso(n: Structure, f: Mapping[str, str]) -> bool:
    return n.restrict(f.keys()).rename(dict(f)) == n.restrict(f.values())


def _extend(n: Structure, f: dict, target: frozenset, bound: int) -> dict | None:
    small = n.restrict(target)
    for g in iter_embeddings(small, n, f):
        if is_strong(g.values(), n, bound).strong:
            return g
    return None


def homogeneity_probe(n: Structure, f: Mapping[str, str], steps: int,
                      bound: int = DEFAULT_BOUND) -> ProbeReport:
    """Alternate forth and back steps, each adding the first point of n
    (in canonical order) missing from the domain, resp. the range."""
    f = dict(f)
    if len(set(f.values())) != len(f) or not (f.keys() <= n.points and set(f.values()) <= n.points):
        raise PreconditionError("the map is not an injection into the structure")
    for side, pts in (("domain", f.keys()), ("range", f.values())):
        if not is_strong(pts, n, bound).strong:
            raise PreconditionError(f"the {side} is not strong")
    if not _partial_iso(n, f):
        return ProbeReport(False, f, 0, "not a partial isomorphism")
    log = []
    done = 0
    for step in range(steps):
        forth = step % 2 == 0
        cur = f if forth else {v: k for k, v in f.items()}
        m = next((p for p in n.order if p not in cur), None)
        if m is None:
            break
        target = closure(set(cur) | {m}, n, bound)
        g = _extend(n, cur, target, bound)
        if g is None:
            return ProbeReport(False, f, done, f"no strong image of the closure of {m} "
                               f"({'forth' if forth else 'back'})", tuple(log))
        f = g if forth else {v: k for k, v in g.items()}
        done += 1
        log.append(("forth" if forth else "back", m, len(target)))
    return ProbeReport(True, f, done, "", tuple(log))
