"""Deterministic fixture generation: exhaustive small tiers and seeded random
age members, strong extensions and planted configurations.

Randomness comes from a counter-based generator keyed by (seed, stream), so
every family can be regenerated independently of the others.
"""
from __future__ import annotations

import hashlib
from itertools import combinations, permutations, product
from pathlib import Path

import numpy as np

from .core import ORDERED, SYMMETRIC, RStructure, SStructure, Structure, serialize
from .errors import ValidityError
from .strength import age_membership, is_strong
from .transforms import generic_representation


def rng(seed: int, stream: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{stream}".encode()).digest()
    return np.random.Generator(np.random.Philox(key=int.from_bytes(digest[:16], "little")))


def _names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


# exhaustive tiers (point names 0, 1, ...)

def _canonical_r(n: int, rels: frozenset, mode: str) -> tuple:
    best = None
    for perm in permutations(range(n)):
        if mode == SYMMETRIC:
            img = tuple(sorted(tuple(sorted(perm[i] for i in r)) for r in rels))
        else:
            img = tuple(sorted(tuple(perm[i] for i in r) for r in rels))
        if best is None or img < best:
            best = img
    return best


def exhaustive_r(max_points: int, mode: str = SYMMETRIC) -> list[RStructure]:
    """One representative of every isomorphism type in the age, up to ``max_points``."""
    out = []
    for n in range(max_points + 1):
        pts = [str(i) for i in range(n)]
        if mode == SYMMETRIC:
            slots = list(combinations(range(n), 3))
        else:
            slots = [p for c in combinations(range(n), 3) for p in permutations(c)]
        seen = set()
        for size in range(min(len(slots), n) + 1):
            for chosen in combinations(slots, size):
                rels = frozenset(chosen)
                canon = _canonical_r(n, rels, mode)
                if canon in seen:
                    continue
                seen.add(canon)
                a = RStructure(pts, [tuple(str(i) for i in r) for r in canon], mode)
                if age_membership(a):
                    out.append(a)
    return out


def _canonical_s(n: int, cl: dict) -> tuple:
    best = None
    for perm in permutations(range(n)):
        img = tuple(sorted((tuple(sorted(perm[i] for i in u)), m) for u, m in cl.items()))
        if best is None or img < best:
            best = img
    return best


def exhaustive_s(max_points: int) -> list[SStructure]:
    out = []
    for n in range(max_points + 1):
        pts = [str(i) for i in range(n)]
        universes = [frozenset(c) for r in range(3, n + 1) for c in combinations(range(n), r)]
        seen = set()
        for ms in product(range(4), repeat=len(universes)):
            cl = {u: m for u, m in zip(universes, ms) if m}
            try:
                s = SStructure(pts, {frozenset(str(i) for i in u): m for u, m in cl.items()})
            except ValidityError:
                continue
            canon = _canonical_s(n, cl)
            if canon in seen:
                continue
            seen.add(canon)
            if age_membership(s):
                out.append(s)
    return out


# random age members

def random_r(g: np.random.Generator, n: int, p: float, mode: str = SYMMETRIC,
             prefix: str = "v", tries: int = 200) -> RStructure | None:
    pts = _names(prefix, n)
    if mode == SYMMETRIC:
        slots = list(combinations(pts, 3))
    else:
        slots = [q for c in combinations(pts, 3) for q in permutations(c)]
    for _ in range(tries):
        mask = g.random(len(slots)) < p
        a = RStructure(pts, [s for s, on in zip(slots, mask) if on], mode)
        if age_membership(a):
            return a
    return None


_PREMULTS = (1, 1, 1, 2, 3)


def random_s(g: np.random.Generator, n: int, cliques: int, prefix: str = "v") -> SStructure:
    """Add random cliques one at a time, keeping those that leave a valid age member."""
    pts = _names(prefix, n)
    cur = SStructure(pts)
    for _ in range(cliques if n >= 3 else 0):
        size = int(g.integers(3, min(n, 6) + 1))
        u = frozenset(pts[i] for i in g.permutation(n)[:size])
        cl = dict(cur.premult)
        cl[u] = cl.get(u, 0) + _PREMULTS[int(g.integers(0, len(_PREMULTS)))]
        try:
            nxt = SStructure(pts, cl)
        except ValidityError:
            continue
        if age_membership(nxt):
            cur = nxt
    return cur


def random_r_members(seed: int, count: int, sizes=(4, 9), mode: str = SYMMETRIC) -> list[RStructure]:
    g = rng(seed, f"r-members-{mode}")
    out = []
    while len(out) < count:
        n = int(g.integers(sizes[0], sizes[1] + 1))
        p = float(g.uniform(0.05, 0.4))
        a = random_r(g, n, p, mode)
        if a is not None:
            out.append(a)
    return out


def random_s_members(seed: int, count: int, sizes=(3, 8)) -> list[SStructure]:
    g = rng(seed, "s-members")
    out = []
    while len(out) < count:
        n = int(g.integers(sizes[0], sizes[1] + 1))
        k = int(g.integers(0, n // 2 + 2))
        out.append(random_s(g, n, k))
    return out


# strong extensions for amalgamation triples

def extend_r(g: np.random.Generator, a: RStructure, k: int, prefix: str, p: float,
             tries: int = 200) -> RStructure | None:
    """A random B with A <= B and k new points."""
    new = _names(prefix, k)
    pts = sorted(a.points) + new
    slots = [t for t in combinations(pts, 3) if not a.points.issuperset(t)]
    for _ in range(tries):
        mask = g.random(len(slots)) < p
        b = RStructure(pts, set(a.relations) | {s for s, on in zip(slots, mask) if on}, a.mode)
        if is_strong(a.points, b).strong:
            return b
    return None


def extend_s(g: np.random.Generator, a: SStructure, k: int, prefix: str, cliques: int,
             tries: int = 200) -> SStructure | None:
    """A random B with A <=_s B and k new points; base cliques may grow into new points."""
    new = _names(prefix, k)
    pts = sorted(a.points) + new
    for _ in range(tries):
        cl: dict = {}
        for u, m in a.cliques:
            for _ in range(m):
                grow = frozenset(x for x in new if g.random() < 0.2)
                cl[u | grow] = cl.get(u | grow, 0) + 1
        for _ in range(cliques if len(pts) >= 3 else 0):
            size = int(g.integers(3, min(len(pts), 5) + 1))
            u = frozenset(pts[i] for i in g.permutation(len(pts))[:size])
            if len(u & a.points) >= 3 or not u & set(new):
                continue
            cl[u] = cl.get(u, 0) + int(g.integers(1, 3))
        try:
            b = SStructure(pts, cl)
        except ValidityError:
            continue
        if b.restrict(a.points, check=False) != a:
            continue
        if is_strong(a.points, b).strong and age_membership(b):
            return b
    return None


def strong_triples(seed: int, count: int, calculus: str = "r") -> list[tuple[Structure, Structure, Structure]]:
    """(A, B1, B2) with A strong in both sides and B1 ∩ B2 = A."""
    g = rng(seed, f"triples-{calculus}")
    out = []
    while len(out) < count:
        n = int(g.integers(0, 5))
        if calculus == "r":
            a = random_r(g, n, 0.2, prefix="a") if n else RStructure()
            if a is None:
                continue
            b1 = extend_r(g, a, int(g.integers(0, 4)), "l", float(g.uniform(0.05, 0.35)))
            b2 = extend_r(g, a, int(g.integers(0, 4)), "r", float(g.uniform(0.05, 0.35)))
        else:
            a = random_s(g, n, int(g.integers(0, 3)), prefix="a")
            b1 = extend_s(g, a, int(g.integers(0, 4)), "l", int(g.integers(0, 3)))
            b2 = extend_s(g, a, int(g.integers(0, 4)), "r", int(g.integers(0, 3)))
        if b1 is not None and b2 is not None:
            out.append((a, b1, b2))
    return out


# planted configurations

def planted_five_clique(g: np.random.Generator, size: int = 5, noise: int = 3,
                        extra: int = 3) -> RStructure:
    """A clique of ``size`` points witnessed by one pair, plus noise relations."""
    core = _names("c", size)
    pts = core + ["x", "y"] + _names("n", extra)
    rels = {(c, "x", "y") for c in core}
    slots = [t for t in combinations(pts, 3)]
    for _ in range(noise):
        rels.add(slots[int(g.integers(0, len(slots)))])
    return RStructure(pts, rels)


def five_clique_instances(seed: int, count: int) -> list[RStructure]:
    """Age members containing an S-clique on five or more points."""
    from .cliques import s_cliques

    g = rng(seed, "five-cliques")
    out = []
    while len(out) < count:
        mode = int(g.integers(0, 2))
        if mode == 0:
            n = planted_five_clique(g, int(g.integers(5, 7)), int(g.integers(0, 5)), int(g.integers(0, 4)))
        else:
            # covering triples of a 5-set with several pairs; only sparse covers stay in the age
            core = _names("c", 5)
            pts = core + _names("w", 6)
            rels = set()
            for t in combinations(core, 3):
                x, y = g.choice(pts[5:], size=2, replace=False).tolist()
                rels.update((c, x, y) for c in t)
            for _ in range(int(g.integers(0, 4))):
                x, y = g.choice(pts[5:], size=2, replace=False).tolist()
                rels.update((c, x, y) for c in core)
            n = RStructure(pts, rels)
        if age_membership(n) and s_cliques(n, 5):
            out.append(n)
    return out


def complete_triple_system(m: int) -> RStructure:
    """All triples on m points: every pair witnesses a clique, none of them good."""
    pts = _names("k", m)
    return RStructure(pts, combinations(pts, 3))


def generic_instances(seed: int, count: int) -> list[RStructure]:
    """Strong R-structures rich in cliques: generic representations of S age members."""
    return [generic_representation(s) for s in random_s_members(seed, count, sizes=(3, 6))]


def write_corpus(directory: str | Path, structures, prefix: str) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, s in enumerate(structures):
        ext = "r" if isinstance(s, RStructure) else "s"
        path = d / f"{prefix}_{i:04d}.{ext}"
        path.write_text(serialize(s), encoding="utf-8")
        paths.append(path)
    return paths


def generate_corpus(directory: str | Path, seed: int = 0, random_count: int = 100) -> list[Path]:
    paths = []
    paths += write_corpus(directory, exhaustive_r(4), "exh_r")
    paths += write_corpus(directory, exhaustive_r(3, ORDERED), "exh_o")
    paths += write_corpus(directory, exhaustive_s(3), "exh_s")
    paths += write_corpus(directory, random_r_members(seed, random_count), "rnd_r")
    paths += write_corpus(directory, random_s_members(seed, random_count), "rnd_s")
    return paths
