"""Outsourcing, generic representations, symmetrization and ordered representations."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cliques import (WitnessedClique, canonical, extract_cliques, find_good_clique,
                      generators)
from .core import ORDERED, SYMMETRIC, RStructure, SStructure, key, predim_r
from .errors import PreconditionError


def _digest(tag: str) -> str:
    return hashlib.sha1(tag.encode("utf-8")).hexdigest()[:8]


def fresh_pair(tag: str, taken: set[str]) -> tuple[str, str]:
    """Deterministic new witness names ``<hash>_w1`` and ``<hash>_w2``, added to ``taken``."""
    h = _digest(tag)
    i = 0
    while True:
        suffix = f"_{i}" if i else ""
        a, b = f"{h}_w1{suffix}", f"{h}_w2{suffix}"
        if a not in taken and b not in taken:
            taken.update((a, b))
            return a, b
        i += 1


def witness_points(k: Iterable[WitnessedClique]) -> frozenset[str]:
    out: set[str] = set()
    for c in k:
        out |= c.witnesses
    return frozenset(out)


def members(k: Iterable[WitnessedClique]) -> frozenset[str]:
    out: set[str] = set()
    for c in k:
        out |= c.universe
    return frozenset(out)


def external_witnesses(a: Iterable[str], k: Sequence[WitnessedClique]) -> frozenset[str]:
    """EW_K(A): witnesses of K outside A and outside every clique of K."""
    return witness_points(k) - frozenset(a) - members(k)


def single_external_witnesses(a: Iterable[str], k: Sequence[WitnessedClique]) -> frozenset[str]:
    """EW^1_K(A): the external witnesses used by exactly one clique of K."""
    ew = external_witnesses(a, k)
    return frozenset(z for z in ew if sum(1 for c in k if z in c.witnesses) == 1)


def _union_generators(k: Iterable[WitnessedClique]) -> set:
    out: set = set()
    for c in k:
        out |= c.generators
    return out


def _check_outsourcing(b: RStructure, a: frozenset, k: Sequence[WitnessedClique]):
    if b.mode != SYMMETRIC:
        raise PreconditionError("outsourcing acts on symmetric structures")
    if not a <= b.points:
        raise PreconditionError(f"core points {key(a - b.points)} are not in the structure")
    present = set(extract_cliques(b.points, b))
    for c in k:
        if c not in present:
            raise PreconditionError(f"{c} is not a maximal clique of the structure")


@dataclass(frozen=True)
class OutsourceStep:
    result: RStructure
    clique: WitnessedClique
    new_clique: WitnessedClique
    alpha: frozenset
    beta: frozenset
    dropped: frozenset
    predim_before: int
    predim_after: int

    @property
    def law_delta(self) -> int:
        return 2 - max(len(self.alpha), len(self.beta))

    @property
    def law_holds(self) -> bool:
        """d0 rises by 2 - max(|alpha|, |beta|), plus one for each relation the step discards."""
        return self.predim_after == self.predim_before + self.law_delta + len(self.dropped)


def outsource_clique_step(b: RStructure, a: Iterable[str], c: WitnessedClique,
                          k: Sequence[WitnessedClique]) -> OutsourceStep:
    a = frozenset(a)
    k = list(k)
    if c not in k:
        raise PreconditionError(f"{c} is not in the family")
    _check_outsourcing(b, a, k)
    x, y = key(c.witnesses)
    ew1 = single_external_witnesses(a, k)
    taken = set(b.points)
    fx, fy = fresh_pair(c.tag(), taken)
    xc = x if x in ew1 else fx
    yc = y if y in ew1 else fy
    core = b.relations_within(a)
    others = _union_generators(d for d in k if d != c)
    new = generators(c.universe, (xc, yc))
    rels = new | (core - c.generators) | others
    beta = frozenset(c.generators & others)
    dropped = frozenset(b.relations - (core | others | c.generators))
    out = RStructure(b.points | {xc, yc}, rels)
    return OutsourceStep(out, c, WitnessedClique(c.universe, (xc, yc)),
                         frozenset({x, y} & ew1), beta, dropped, predim_r(b), predim_r(out))


def outsource_clique(b: RStructure, a: Iterable[str], c: WitnessedClique,
                     k: Sequence[WitnessedClique]) -> RStructure:
    return outsource_clique_step(b, a, c, k).result


def exclusivity_violation(k: Sequence[WitnessedClique], l: Sequence[WitnessedClique]):
    """A relation generating a clique of both families, or None."""
    for c1 in canonical(l):
        for c2 in canonical(k):
            shared = c1.generators & c2.generators
            if shared:
                return min(shared), c1, c2
    return None


def outsource_set(b: RStructure, a: Iterable[str], k: Sequence[WitnessedClique],
                  l: Sequence[WitnessedClique]) -> RStructure:
    a = frozenset(a)
    k, l = canonical(k), canonical(l)
    _check_outsourcing(b, a, k + l)
    bad = exclusivity_violation(k, l)
    if bad is not None:
        r, c1, c2 = bad
        raise PreconditionError(f"families share the relation {r} ({c1} and {c2})")
    ew = external_witnesses(a, k + l) - witness_points(l)
    taken = set(b.points)
    keep = b.points - ew
    rels = _union_generators(l) | (b.relations_within(a) - _union_generators(k))
    pts = set(keep)
    for c in k:
        pair = fresh_pair(c.tag(), taken)
        pts.update(pair)
        rels |= generators(c.universe, pair)
    return RStructure(pts, rels)


def gradual_outsource_steps(b: RStructure, a: Iterable[str], k: Sequence[WitnessedClique],
                            l: Sequence[WitnessedClique]) -> list[OutsourceStep]:
    a = frozenset(a)
    k, l = canonical(k), canonical(l)
    bad = exclusivity_violation(k, l)
    if bad is not None:
        r, c1, c2 = bad
        raise PreconditionError(f"families share the relation {r} ({c1} and {c2})")
    todo = list(k)
    targets = list(k) + list(l)
    cur = b
    steps = []
    while todo:
        c = find_good_clique(cur, todo)
        step = outsource_clique_step(cur, a, c, targets)
        steps.append(step)
        targets = [d for d in targets if d != c] + [step.new_clique]
        todo = [d for d in todo if d != c]
        cur = step.result
    return steps


def gradual_outsource(b: RStructure, a: Iterable[str], k: Sequence[WitnessedClique],
                      l: Sequence[WitnessedClique]) -> RStructure:
    """Outsource K one good clique at a time; an empty K leaves the structure unchanged."""
    steps = gradual_outsource_steps(b, a, k, l)
    return steps[-1].result if steps else b


def generic_tag(universe: frozenset, i: int) -> str:
    return ",".join(key(universe)) + f"#{i}"


def generic_representation(s: SStructure) -> RStructure:
    """Every clique instance of the full enumeration gets its own new witness pair."""
    taken = set(s.points)
    pts = set(s.points)
    rels: set = set()
    seen: dict[frozenset, int] = {}
    for u in s.full_enumeration():
        i = seen.get(u, 0)
        seen[u] = i + 1
        pair = fresh_pair(generic_tag(u, i), taken)
        pts.update(pair)
        rels |= generators(u, pair)
    return RStructure(pts, rels)


def symmetrize(a: RStructure) -> RStructure:
    if a.mode != ORDERED:
        raise PreconditionError("symmetrize expects an ordered structure")
    return RStructure(a.points, a.relations, SYMMETRIC)


def predim_sym(a: RStructure) -> int:
    return predim_r(symmetrize(a))


def r_representation(b: RStructure, a: RStructure, order: Sequence[str] | None = None) -> RStructure:
    """Ordered structure on B that keeps A's relations and orders every new triple by ``order``."""
    if b.mode != SYMMETRIC or a.mode != ORDERED:
        raise PreconditionError("r_representation takes a symmetric B and an ordered A")
    if not a.points <= b.points or b.relations_within(a.points) != symmetrize(a).relations:
        raise PreconditionError("the symmetrization of A is not a substructure of B")
    rank = {p: i for i, p in enumerate(order if order is not None else sorted(b.points))}
    missing = b.points - rank.keys()
    if missing:
        raise PreconditionError(f"order does not rank {key(missing)}")
    rels = set(a.relations)
    for r in b.relations:
        if not a.points.issuperset(r):
            rels.add(tuple(sorted(r, key=rank.__getitem__)))
    return RStructure(b.points, rels, ORDERED)
