"""Isomorphism and embedding search for R- and S-structures.

Structures are viewed as weighted hypergraphs (relations, or clique universes
weighted by premultiplicity).  Candidates are pruned by iterated colour
refinement and by incremental edge checks during backtracking.
"""
from __future__ import annotations

from typing import Iterator, Mapping

from .core import ORDERED, RStructure, SStructure, Structure


def _edges(x: Structure) -> list[tuple]:
    if isinstance(x, RStructure):
        if x.mode == ORDERED:
            return [(r, 1) for r in x.relations]
        return [(frozenset(r), 1) for r in x.relations]
    return list(x.cliques)


def _image(e, f: Mapping[str, str]):
    if isinstance(e, tuple):
        return tuple(f[p] for p in e)
    return frozenset(f[p] for p in e)


def _kind(x: Structure):
    return ("r", x.mode) if isinstance(x, RStructure) else ("s",)


class _Graph:
    def __init__(self, x: Structure):
        self.points = sorted(x.points)
        self.edges = dict(_edges(x))
        self.incident: dict[str, list] = {p: [] for p in self.points}
        for e in self.edges:
            for p in e:
                self.incident[p].append(e)


def _refine(graphs: list[_Graph], seeds: list[dict]) -> list[dict]:
    """Colour refinement run jointly so colours are comparable across graphs."""
    colours = [{p: seed.get(p, ()) for p in g.points} for g, seed in zip(graphs, seeds)]
    count = -1
    for _ in range(max((len(g.points) for g in graphs), default=0) + 1):
        sigs = []
        for g, col in zip(graphs, colours):
            sig = {}
            for p in g.points:
                parts = []
                for e in g.incident[p]:
                    w = g.edges[e]
                    if isinstance(e, tuple):
                        parts.append((w, e.index(p), tuple(repr(col[q]) for q in e)))
                    else:
                        parts.append((w, len(e), tuple(sorted(repr(col[q]) for q in e if q != p))))
                sig[p] = (repr(col[p]), tuple(sorted(parts)))
            sigs.append(sig)
        names = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig.values()}))}
        colours = [{p: names[s] for p, s in sig.items()} for sig in sigs]
        n = len(names)
        if n == count:
            break
        count = n
    return colours


def _search(gx: _Graph, gy: _Graph, cx: dict, cy: dict, fixed: dict, edges: bool,
            check=None) -> Iterator[dict]:
    """Injective maps gx -> gy extending ``fixed``.

    With ``edges`` the map must send the edges among assigned points exactly
    onto the edges among their images (an induced embedding; for equal sizes
    an isomorphism).  ``check`` is an extra predicate on partial maps.
    """
    by_colour: dict = {}
    for q in gy.points:
        by_colour.setdefault(cy[q], []).append(q)
    order = [p for p in gx.points if p in fixed]
    rest = [p for p in gx.points if p not in fixed]
    placed = set(order)
    while rest:
        def score(p):
            links = sum(1 for e in gx.incident[p] if any(q in placed for q in e if q != p))
            return (-links, len(by_colour.get(cx[p], ())), p)
        p = min(rest, key=score)
        rest.remove(p)
        order.append(p)
        placed.add(p)

    f: dict[str, str] = {}
    used: set[str] = set()

    def consistent(p, q) -> bool:
        if not edges:
            return True
        mine = 0
        for e in gx.incident[p]:
            if all(r == p or r in f for r in e):
                mine += 1
                img = _image(e, {**f, p: q})
                if gy.edges.get(img) != gx.edges[e]:
                    return False
        theirs = sum(1 for e in gy.incident[q] if all(r == q or r in used for r in e))
        return theirs == mine

    def go(i: int):
        if i == len(order):
            if check is None or check(f):
                yield dict(f)
            return
        p = order[i]
        cands = [fixed[p]] if p in fixed else by_colour.get(cx[p], [])
        for q in cands:
            if q in used or not consistent(p, q):
                continue
            f[p] = q
            used.add(q)
            if check is None or i + 1 == len(order) or check(f, partial=True):
                yield from go(i + 1)
            del f[p]
            used.discard(q)

    yield from go(0)


def find_isomorphism(x: Structure, y: Structure, fixed: Mapping[str, str] | None = None) -> dict | None:
    if _kind(x) != _kind(y) or len(x.points) != len(y.points):
        return None
    ex, ey = _edges(x), _edges(y)
    if len(ex) != len(ey) or sorted(w for _, w in ex) != sorted(w for _, w in ey):
        return None
    fixed = dict(fixed or {})
    gx, gy = _Graph(x), _Graph(y)
    seeds = [{p: ("fixed", i) for i, p in enumerate(sorted(fixed))},
             {fixed[p]: ("fixed", i) for i, p in enumerate(sorted(fixed))}]
    cx, cy = _refine([gx, gy], seeds)
    if sorted(cx.values()) != sorted(cy.values()):
        return None
    return next(_search(gx, gy, cx, cy, fixed, True), None)


def are_isomorphic(x: Structure, y: Structure) -> bool:
    return find_isomorphism(x, y) is not None


def iter_embeddings(small: Structure, big: Structure,
                    fixed: Mapping[str, str] | None = None) -> Iterator[dict]:
    """Maps of ``small`` onto substructures of ``big`` (induced, extending ``fixed``)."""
    if _kind(small) != _kind(big) or len(small.points) > len(big.points):
        return iter(())
    fixed = dict(fixed or {})
    gx, gy = _Graph(small), _Graph(big)
    cx = {p: 0 for p in gx.points}
    cy = {q: 0 for q in gy.points}
    if isinstance(small, SStructure):
        def check(f, partial=False):
            dom = list(f)
            mine = small.restrict(dom, check=False).rename(f)
            return big.restrict([f[p] for p in dom], check=False) == mine
        return _search(gx, gy, cx, cy, fixed, False, check)
    return _search(gx, gy, cx, cy, fixed, True)


def find_embedding(small: Structure, big: Structure, fixed: Mapping[str, str] | None = None):
    return next(iter_embeddings(small, big, fixed), None)
