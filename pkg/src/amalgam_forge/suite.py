"""Property-suite runner.

Every check is registered under a lemma tag with a generator of instances and
a verifier.  Instances are JSON objects whose structures are stored in the
text format, so any reported failure can be replayed from its serialized form.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, fields
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import corpus, kernels
from .amalgam import (free_amalgam_r, generic_chain_builder, is_simple_amalgam,
                      mixed_generic_amalgam, simple_amalgam_s)
from .cliques import (WitnessedClique, extract_cliques, extract_s_structure, find_good_clique,
                      multiplicity, phi, s_cliques, shared_generators, witness_pairs)
from .core import (ORDERED, SYMMETRIC, RStructure, cap, SStructure, key, parse, predim,
                   predim_s, predim_s_alt, serialize)
from .errors import NoDistinctPairs, NoGoodClique, ParseError, SearchTooLarge, ValidityError
from .iso import find_isomorphism
from .pregeometry import (dimensionleq_holds, distinct_pairs, emulation, extend_iso_c_to_cs, geometry, pg_table,
                          tables_agree)
from .strength import age_membership, closure, dim, is_strong, strong_subsets
from .transforms import (gradual_outsource, gradual_outsource_steps, outsource_clique_step,
                         outsource_set, predim_sym, r_representation, symmetrize)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    exhaustive_points: int = 4
    random_r: int = 150
    random_s: int = 1000
    triples: int = 150
    outsourcing: int = 80
    five: int = 60
    ordered: int = 60
    pg: int = 40
    small_points: int = 7
    bound: int = 20
    iso_bound: int = 14
    checks: tuple[str, ...] | None = None
    fixtures: tuple[str, ...] = ()

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name not in ("seed", "checks", "fixtures") and (not isinstance(v, int) or v < 1):
                raise ValueError(f"{f.name} must be a positive integer")
        if self.checks is not None:
            unknown = sorted(set(self.checks) - set(REGISTRY))
            if unknown:
                raise ValueError(f"unknown lemma tags: {', '.join(unknown)}")


def load_config(text: str) -> SuiteConfig:
    """Parse a TOML config; unknown keys are rejected."""
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    data = tomllib.loads(text)
    allowed = {f.name for f in fields(SuiteConfig)}
    extra = sorted(set(data) - allowed)
    if extra:
        raise ValueError(f"unknown config keys: {', '.join(extra)}")
    if "checks" in data:
        data["checks"] = tuple(data["checks"])
    if "fixtures" in data:
        data["fixtures"] = tuple(data["fixtures"])
    return SuiteConfig(**data)


@dataclass
class LemmaReport:
    tag: str
    instances: int
    failures: list[tuple[dict, str]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class Check:
    tag: str
    generate: Callable[[SuiteConfig], Iterable[dict]]
    verify: Callable[[dict, SuiteConfig], str | None]


REGISTRY: dict[str, Check] = {}


def register(tag: str, generate):
    def deco(verify):
        REGISTRY[tag] = Check(tag, generate, verify)
        return verify
    return deco


# encoding

def enc(x) -> str:
    return serialize(x)


def dec(text: str):
    return parse(text)


def enc_cliques(k: Iterable[WitnessedClique]) -> list:
    return [[list(key(c.universe)), list(key(c.witnesses))] for c in k]


def dec_cliques(data) -> list[WitnessedClique]:
    return [WitnessedClique(u, w) for u, w in data]


# shared corpora (cached per config values)

@lru_cache(maxsize=None)
def _r_members(seed: int, count: int, lo: int, hi: int, mode: str = SYMMETRIC):
    return tuple(corpus.random_r_members(seed, count, sizes=(lo, hi), mode=mode))


@lru_cache(maxsize=None)
def _s_members(seed: int, count: int, lo: int, hi: int):
    return tuple(corpus.random_s_members(seed, count, sizes=(lo, hi)))


@lru_cache(maxsize=None)
def _exh_r(n: int, mode: str = SYMMETRIC):
    return tuple(corpus.exhaustive_r(n, mode))


@lru_cache(maxsize=None)
def _exh_s(n: int):
    return tuple(corpus.exhaustive_s(n))


@lru_cache(maxsize=None)
def _generic(seed: int, count: int):
    out = []
    for a in corpus.generic_instances(seed, count * 2):
        if len(a.points) <= 20:
            out.append(a)
        if len(out) == count:
            break
    return tuple(out)


def _strong_r(cfg: SuiteConfig):
    return (_exh_r(min(cfg.exhaustive_points, 5)) + _r_members(cfg.seed, cfg.random_r, 4, 9)
            + _generic(cfg.seed, max(1, cfg.random_r // 2)))


def _small(cfg: SuiteConfig):
    n = cfg.small_points
    return (_exh_r(min(cfg.exhaustive_points, 5)) + _exh_s(min(cfg.exhaustive_points, 4))
            + _r_members(cfg.seed, cfg.random_r // 2 or 1, 5, n)
            + _s_members(cfg.seed, cfg.random_r // 2 or 1, 5, n)
            + _r_members(cfg.seed, cfg.random_r // 4 or 1, 4, n, ORDERED))


def _subsets_for(g, pts, count: int) -> list[list[str]]:
    pts = sorted(pts)
    out = [pts]
    for _ in range(count):
        out.append([p for p in pts if g.random() < 0.5])
    return out


def _shipped_fixtures() -> list[Path]:
    return sorted(FIXTURE_DIR.glob("*.[rs]")) if FIXTURE_DIR.is_dir() else []


# core

def _gen_d0s(cfg):
    for s in _exh_s(min(cfg.exhaustive_points, 4)) + _s_members(cfg.seed, cfg.random_s, 3, 8):
        yield {"s": enc(s)}
    for p in _shipped_fixtures() + [Path(f) for f in cfg.fixtures]:
        try:
            x = parse(p.read_text(encoding="utf-8"))
        except (ParseError, ValidityError, OSError):
            continue
        if isinstance(x, SStructure):
            yield {"s": enc(x)}


@register("IdenticalD0s", _gen_d0s)
def _v_d0s(inst, cfg):
    s = dec(inst["s"])
    a, b = predim_s(s), predim_s_alt(s)
    return None if a == b else f"predimension {a} but full-enumeration form {b}"


def _gen_fixtures(cfg):
    for p in _shipped_fixtures() + [Path(f) for f in cfg.fixtures]:
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            yield {"path": p.name, "text": None, "error": exc.strerror or "unreadable"}
            continue
        yield {"path": p.name, "text": text}


@register("fixtureValidity", _gen_fixtures)
def _v_fixture(inst, cfg):
    if inst.get("text") is None:
        return f"{inst['path']}: {inst.get('error', 'unreadable')}"
    try:
        x = parse(inst["text"])
    except ValidityError as exc:
        return f"{inst['path']}: validity: {exc}"
    except ParseError as exc:
        return f"{inst['path']}: parse: {exc}"
    if parse(serialize(x)) != x:
        return f"{inst['path']}: serialization does not round-trip"
    return None


def _gen_mult(cfg):
    g = corpus.rng(cfg.seed, "multiplicity")
    for n in _strong_r(cfg):
        for a in _subsets_for(g, n.points, 2):
            yield {"n": enc(n), "a": a}


@register("multiplicityMaximum", _gen_mult)
def _v_mult(inst, cfg):
    n = dec(inst["n"])
    if not age_membership(n, cfg.bound):
        return "instance is not in the age"
    try:
        s = extract_s_structure(inst["a"], n, cfg.bound)
    except ValidityError as exc:
        return f"extraction violates a cap: {exc}"
    for u, _ in s.cliques:
        m = multiplicity(u, n)
        if m > cap(len(u)):
            return f"clique {key(u)} has multiplicity {m}"
    return None


# strength laws on every subset of small structures

def _gen_small(cfg):
    for n in _small(cfg):
        yield {"n": enc(n)}


def _tables(n):
    k = len(n.points)
    masks, weights = n.items
    t = np.asarray(kernels.predim_table(k, masks, weights), dtype=np.int64)
    return k, t


def _names(n, m: int) -> list[str]:
    return [p for i, p in enumerate(n.order) if m >> i & 1]


@register("dosFreeAmalgam", _gen_small)
def _v_free(inst, cfg):
    n = dec(inst["n"])
    k, t = _tables(n)
    x = np.arange(1 << k)
    xs, ys = np.meshgrid(x, x, indexing="ij")
    # d0(B2/A) >= d0(B2/B1) with A = B1 ∩ B2
    bad = (t[ys] - t[xs & ys]) < (t[xs | ys] - t[xs])
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        return f"B1={key(_names(n, i))} B2={key(_names(n, j))} break submodularity"
    return None


def _strong_matrix(n):
    k, t = _tables(n)
    g = np.asarray(kernels.interval_min(t, k))
    size = 1 << k
    z = np.arange(size)
    sub = (z[:, None] & z[None, :]) == z[:, None]
    return k, t, sub & (g == t[:, None])


@register("StrongSubset", _gen_small)
def _v_strong_subset(inst, cfg):
    n = dec(inst["n"])
    k, t, m = _strong_matrix(n)
    full = (1 << k) - 1
    x = np.arange(1 << k)
    for a in np.flatnonzero(m[:, full]):
        ok = m[x & a, x]
        if not ok.all():
            bad = int(x[~ok][0])
            return f"A={key(_names(n, int(a)))} strong but X∩A not strong in X={key(_names(n, bad))}"
    return None


@register("leqsTransitivity", _gen_small)
def _v_trans(inst, cfg):
    n = dec(inst["n"])
    k, t, m = _strong_matrix(n)
    both = m[:, :, None] & m[None, :, :]
    bad = both & ~m[:, None, :]
    if bad.any():
        a, b, c = map(int, np.argwhere(bad)[0])
        return f"{key(_names(n, a))} <= {key(_names(n, b))} <= {key(_names(n, c))} fails transitivity"
    return None


@register("strongIntersection", _gen_small)
def _v_inter(inst, cfg):
    n = dec(inst["n"])
    k, t, m = _strong_matrix(n)
    full = (1 << k) - 1
    strong = np.flatnonzero(m[:, full])
    for a in strong:
        for b in strong:
            if not m[a & b, full]:
                return f"{key(_names(n, int(a)))} and {key(_names(n, int(b)))} strong, intersection not"
    return None


@register("pgAxioms", _gen_small)
def _v_pg(inst, cfg):
    n = dec(inst["n"])
    try:
        pg_table(n)
    except AssertionError as exc:
        return str(exc)
    return None


# cliques

@register("sharingRelation", _gen_mult)
def _v_sharing(inst, cfg):
    n = dec(inst["n"])
    k = extract_cliques(inst["a"], n)
    for c1, c2 in combinations(k, 2):
        if len(c1.generators & c2.generators) > 1:
            return f"{c1} and {c2} share more than one relation"
    return None


@register("addinExternalWitnesses", _gen_mult)
def _v_external(inst, cfg):
    n = dec(inst["n"])
    a = frozenset(inst["a"])
    for c in extract_cliques(a, n):
        if c.witnesses <= a:
            continue
        delta = n.predim_of(a | c.witnesses) - n.predim_of(a)
        if delta > 2 - len(c.universe):
            return f"{c}: d0(witnesses/A) = {delta} > {2 - len(c.universe)}"
    return None


@register("twoAlreadyInStruct", _gen_mult)
def _v_two(inst, cfg):
    n = dec(inst["n"])
    a = frozenset(inst["a"])
    a_strong = is_strong(a, n, cfg.bound).strong
    for c in extract_cliques(n.points, n):
        if len((c.universe | c.witnesses) & a) < 2:
            continue
        u = key(c.universe)
        for r in range(len(u) + 1):
            for d in combinations(u, r):
                x = a | c.witnesses | set(d)
                if n.predim_of(x) - n.predim_of(a) > 0:
                    return f"{c}, D={d}: d0(wit ∪ D / A) > 0"
                if a_strong and not is_strong(x, n, cfg.bound).strong:
                    return f"{c}, D={d}: A ∪ wit ∪ D is not strong"
    return None


def _gen_five(cfg):
    for n in corpus.five_clique_instances(cfg.seed, cfg.five):
        yield {"n": enc(n)}
    for n in _strong_r(cfg):
        if s_cliques(n, 5):
            yield {"n": enc(n)}


@register("fiveclique", _gen_five)
def _v_five(inst, cfg):
    n = dec(inst["n"])
    if not age_membership(n, cfg.bound):
        return "instance is not in the age"
    for c in s_cliques(n, 5):
        if not witness_pairs(c, n):
            return f"S-clique {key(c)} has no common witness pair"
    return None


def _gen_good(cfg):
    for inst in _outsourcing(cfg):
        b = dec(inst["b"])
        yield {"b": inst["b"], "k": enc_cliques(extract_cliques(b.points, b))}
    for m in range(5, 9):
        b = corpus.complete_triple_system(m)
        yield {"b": enc(b), "k": enc_cliques(extract_cliques(b.points, b))}
    g = corpus.rng(cfg.seed, "dense")
    for i in range(cfg.outsourcing // 4 + 1):
        pts = [f"d{j}" for j in range(int(g.integers(5, 8)))]
        rels = [t for t in combinations(pts, 3) if g.random() < 0.6]
        b = RStructure(pts, rels)
        k = extract_cliques(b.points, b)
        if k:
            yield {"b": enc(b), "k": enc_cliques(k)}


@register("goodclique", _gen_good)
def _v_good(inst, cfg):
    b = dec(inst["b"])
    k = dec_cliques(inst["k"])
    strong = age_membership(b, cfg.bound)
    try:
        c = find_good_clique(b, k)
    except NoGoodClique as exc:
        if strong:
            return "no good clique in a structure of the age"
        value = b.predim_of(exc.witness)
        if value >= 0 or value != exc.predim:
            return f"witness {key(exc.witness)} has predimension {value}"
        return None
    beta = len(shared_generators(c, k))
    return None if beta <= 2 else f"returned {c} shares {beta} generators"


def _gen_phi(cfg):
    for n in _strong_r(cfg):
        if len(n.points) <= 12:
            yield {"n": enc(n)}


@register("geqMultiplicityPredicate", _gen_phi)
def _v_phi(inst, cfg):
    n = dec(inst["n"])
    for c in extract_cliques(n.points, n):
        for sub in combinations(key(c.universe), 3):
            m = multiplicity(sub, n)
            for want in range(1, 4):
                if phi(3, want, sub, n) and m < want:
                    return f"phi holds for {sub} with {want} pairs but multiplicity is {m}"
    return None


# outsourcing

def _family_split(g, b: RStructure):
    cl = extract_cliques(b.points, b)
    if not cl:
        return None
    # cliques sharing a generator must land in the same family
    parent = {c: c for c in cl}

    def find(c):
        while parent[c] != c:
            c = parent[c]
        return c

    for c1, c2 in combinations(cl, 2):
        if c1.generators & c2.generators:
            parent[find(c1)] = find(c2)
    groups: dict = {}
    for c in cl:
        groups.setdefault(find(c), []).append(c)
    k, l = [], []
    for root in sorted(groups, key=lambda c: c.sort_key):
        (k if g.random() < 0.6 else l).extend(groups[root])
    if not k:
        k, l = l, k
    if not k:
        return None
    used = set()
    for c in cl:
        used |= c.generators
    # every relation outside the generators lives in the core
    core = set()
    for r in b.relations:
        if r not in used:
            core.update(r)
    core |= {p for p in sorted(b.points) if g.random() < 0.2}
    return frozenset(core), k, l


@lru_cache(maxsize=None)
def _outsourcing_cached(seed: int, count: int, iso_bound: int):
    g = corpus.rng(seed, "outsourcing")
    sources = list(_generic(seed, count)) + list(_r_members(seed, count, 5, 9))
    sources += [corpus.planted_five_clique(g, 5, 2, 2) for _ in range(count // 4)]
    out = []
    for b in sources:
        if not age_membership(b):
            continue
        split = _family_split(g, b)
        if split is None:
            continue
        a, k, l = split
        out.append({"b": enc(b), "a": sorted(a), "k": enc_cliques(k), "l": enc_cliques(l)})
    return tuple(out)


def _outsourcing(cfg):
    return _outsourcing_cached(cfg.seed, cfg.outsourcing, cfg.iso_bound)


def _gen_out(cfg):
    return iter(_outsourcing(cfg))


def _decode_out(inst):
    return dec(inst["b"]), frozenset(inst["a"]), dec_cliques(inst["k"]), dec_cliques(inst["l"])


@register("outsourceObs", _gen_out)
def _v_obs(inst, cfg):
    b, a, k, l = _decode_out(inst)
    steps = gradual_outsource_steps(b, a, k, l)
    for c in k:
        steps.append(outsource_clique_step(b, a, c, k + l))
    for s in steps:
        if s.dropped:
            return f"step on {s.clique} discards relations {sorted(s.dropped)}"
        if s.alpha and s.beta:
            return f"step on {s.clique} has both alpha and beta nonempty"
        if s.predim_after != s.predim_before + s.law_delta:
            return (f"step on {s.clique}: d0 {s.predim_before} -> {s.predim_after}, "
                    f"expected change {s.law_delta}")
    return None


@register("outsourcePredimension", _gen_out)
def _v_mono(inst, cfg):
    b, a, k, l = _decode_out(inst)
    out = outsource_set(b, a, k, l)
    return None if predim(b) <= predim(out) else f"d0 fell from {predim(b)} to {predim(out)}"


@register("gradualIsOutsourcing", _gen_out)
def _v_gradual(inst, cfg):
    b, a, k, l = _decode_out(inst)
    direct = outsource_set(b, a, k, l)
    if len(direct.points) > cfg.iso_bound:
        return None
    grad = gradual_outsource(b, a, k, l)
    fixed = {p: p for p in b.points & direct.points & grad.points}
    if find_isomorphism(grad, direct, fixed) is None:
        return "gradual and direct outsourcing differ"
    return None


@register("outsourcingRespectsS", _gen_out)
def _v_respects(inst, cfg):
    b, a, k, l = _decode_out(inst)
    before = b.thirds
    for c in k:
        step = outsource_clique_step(b, a, c, k + l)
        out = step.result
        new = step.new_clique
        for pair, thirds in out.thirds.items():
            if len(thirds) < 3 or pair == new.witnesses:
                continue
            # every clique of the result was already a clique of B and gained nothing
            if not thirds <= before.get(pair, frozenset()):
                return f"outsourcing {c}: pair {key(pair)} gained points"
        present = set(extract_cliques(out.points, out))
        for d in k:
            if d != c and d not in present:
                return f"outsourcing {c}: {d} did not survive"
        for d in present:
            if d != new and d.generators & new.generators:
                return f"outsourcing {c}: the new clique shares a relation with {d}"
    return None


# generic representations

@lru_cache(maxsize=None)
def _generic_sources(seed: int, count: int):
    out = []
    for s in _exh_s(4) + _s_members(seed, count, 3, 7):
        total = sum(m for _, m in s.cliques)
        if len(s.points) + 2 * total <= 24:
            out.append(s)
    return tuple(out)


def _gen_generic(cfg):
    for s in _generic_sources(cfg.seed, cfg.random_s // 4 or 1):
        yield {"s": enc(s)}


@register("GenericIsEmbeddable", _gen_generic)
def _v_generic(inst, cfg):
    from .transforms import generic_representation

    s = dec(inst["s"])
    star = generic_representation(s)
    big = max(cfg.bound, len(star.points))
    if not age_membership(star, big):
        return "the empty set is not strong in the representation"
    back = extract_s_structure(s.points, star, big)
    if back != s:
        return "extraction does not return the S-structure"
    full = extract_s_structure(star.points, star, big)
    if not is_strong(s.points, full, big).strong:
        return "the S-structure is not S-strong in the representation"
    return None


# amalgamation

@lru_cache(maxsize=None)
def _triples(seed: int, count: int, calculus: str):
    return tuple(corpus.strong_triples(seed, count, calculus))


def _gen_fraisse(cfg):
    g = corpus.rng(cfg.seed, "hereditary")
    for calc in ("r", "s"):
        for a, b1, b2 in _triples(cfg.seed, cfg.triples, calc):
            pts = sorted(b1.points | b2.points)
            yield {"a": sorted(a.points), "b1": enc(b1), "b2": enc(b2),
                   "x": [p for p in pts if g.random() < 0.6]}


def _amalgam(b1, b2, a):
    return free_amalgam_r(b1, b2, a) if isinstance(b1, RStructure) else simple_amalgam_s(b1, b2, a)


@register("FraisseProperties", _gen_fraisse)
def _v_fraisse(inst, cfg):
    a = frozenset(inst["a"])
    b1, b2 = dec(inst["b1"]), dec(inst["b2"])
    try:
        d = _amalgam(b1, b2, a)
    except ValidityError as exc:
        return f"amalgam is not valid: {exc}"
    if not age_membership(d, cfg.bound):
        return "AP: amalgam is not in the age"
    for side, b in (("left", b1), ("right", b2)):
        if not is_strong(b.points, d, cfg.bound).strong:
            return f"AP: {side} injection is not strong"
    if not age_membership(d.restrict(inst["x"]), cfg.bound):
        return "HP: substructure left the age"
    ren = {p: "j_" + p for p in b2.points}
    r2 = b2.rename(ren)
    j = _amalgam(b1, r2, ())
    if not age_membership(j, cfg.bound):
        return "JEP: joint embedding is not in the age"
    if not (is_strong(b1.points, j, cfg.bound).strong and is_strong(r2.points, j, cfg.bound).strong):
        return "JEP: an injection is not strong"
    return None


def _gen_simple(cfg):
    g = corpus.rng(cfg.seed, "simple")
    for a, b1, b2 in _triples(cfg.seed, cfg.triples, "s"):
        x1 = sorted(a.points | {p for p in b1.points - a.points if g.random() < 0.6})
        x2 = sorted(a.points | {p for p in b2.points - a.points if g.random() < 0.6})
        yield {"a": sorted(a.points), "b1": enc(b1), "b2": enc(b2), "x1": x1, "x2": x2}


@register("dosSimpleAmalgam", _gen_simple)
def _v_dos_simple(inst, cfg):
    a = frozenset(inst["a"])
    b1, b2 = dec(inst["b1"]), dec(inst["b2"])
    d = simple_amalgam_s(b1, b2, a)
    lhs = predim_s(b2) - predim_s(b2.restrict(a))
    rhs = predim_s(d) - predim_s(b1)
    return None if lhs == rhs else f"d0s(B2/A) = {lhs} but d0s(B2/B1) = {rhs}"


@register("leqsInSimpleAmalgam", _gen_simple)
def _v_leqs_simple(inst, cfg):
    a = frozenset(inst["a"])
    b1, b2 = dec(inst["b1"]), dec(inst["b2"])
    d = simple_amalgam_s(b1, b2, a)
    if is_strong(a, b2, cfg.bound).strong and not is_strong(b1.points, d, cfg.bound).strong:
        return "A strong in B2 but B1 not strong in the amalgam"
    if (is_strong(a, b1, cfg.bound).strong and is_strong(a, b2, cfg.bound).strong
            and not is_strong(a, d, cfg.bound).strong):
        return "A strong on both sides but not in the amalgam"
    return None


@register("simpleAmalgamObs", _gen_simple)
def _v_simple_obs(inst, cfg):
    a = frozenset(inst["a"])
    b1, b2 = dec(inst["b1"]), dec(inst["b2"])
    d = simple_amalgam_s(b1, b2, a)
    for part in (b1, b2, b1.restrict(a)):
        if d.restrict(part.points) != part:
            return f"{part} is not a substructure of the amalgam"
    x1, x2 = frozenset(inst["x1"]), frozenset(inst["x2"])
    sub = d.restrict(x1 | x2, check=False)
    if not is_simple_amalgam(sub, x1, x2, a):
        return f"restriction to {key(x1 | x2)} is not a simple amalgam"
    return None


@lru_cache(maxsize=None)
def _mixed_cached(seed: int, count: int):
    g = corpus.rng(seed, "mixed")
    out = []
    for n in list(_generic(seed, count)) + list(_r_members(seed, count, 4, 8)):
        pts = sorted(n.points)
        a = frozenset(p for p in pts if g.random() < 0.5)
        wa = frozenset().union(*(c.witnesses for c in extract_cliques(a, n)))
        abar = a | wa | frozenset(p for p in pts if g.random() < 0.3)
        base = extract_s_structure(a, n)
        b = corpus.extend_s(g, base, int(g.integers(0, 4)), "z", int(g.integers(0, 3)))
        if b is None:
            continue
        out.append({"n": enc(n), "abar": sorted(abar), "a": sorted(a), "b": enc(b)})
    return tuple(out)


def _gen_mixed(cfg):
    return iter(_mixed_cached(cfg.seed, cfg.triples // 2 or 1))


def _decode_mixed(inst):
    n = dec(inst["n"])
    abar = n.restrict(inst["abar"])
    a = frozenset(inst["a"])
    b = dec(inst["b"])
    return n, abar, a, b, mixed_generic_amalgam(abar, b, a, ambient=n)


@register("mixedAmalgamProps", _gen_mixed)
def _v_mixed_props(inst, cfg):
    n, abar, a, b, d = _decode_mixed(inst)
    if extract_s_structure(b.points, d) != b:
        return "the S-diagram of B changed"
    diagram = extract_s_structure(b.points | abar.points, d)
    if not is_simple_amalgam(diagram, b.points, abar.points, a):
        return "the S-diagram is not a simple amalgam over A"
    if d.restrict(abar.points) != abar:
        return "the R side is not a substructure"
    w = d.points - abar.points - b.points
    for c in extract_cliques(d.points, d):
        if c.universe & w:
            return f"designated witness inside {c}"
    wa = frozenset().union(*(c.witnesses for c in extract_cliques(a, n)))
    left = d.restrict(b.points | w | (a | wa))
    if free_amalgam_r(left, abar, a | wa) != d:
        return "not the free amalgam over A and its witnesses"
    return None


@register("mixedGenericStrong", _gen_mixed)
def _v_mixed_strong(inst, cfg):
    n, abar, a, b, d = _decode_mixed(inst)
    ds = extract_s_structure(d.points, d, cfg.bound)
    abar_s = extract_s_structure(abar.points, abar)
    if is_strong(a, abar_s, cfg.bound).strong and not is_strong(b.points, ds, cfg.bound).strong:
        return "A S-strong in the R side but B not S-strong in the amalgam"
    if is_strong(a, b, cfg.bound).strong and not is_strong(abar.points, d, cfg.bound).strong:
        return "A S-strong in B but the R side not strong in the amalgam"
    return None


@register("mixedGenericOutsourcing", _gen_mixed)
def _v_mixed_out(inst, cfg):
    n, abar, a, b, d = _decode_mixed(inst)
    cl = extract_cliques(d.points, d)
    k = [c for c in cl if len(c.universe & abar.points) < 3]
    l = [c for c in cl if len(c.universe & abar.points) >= 3]
    out = outsource_set(d, abar.points, k, l)
    fixed = {p: p for p in abar.points | b.points}
    if find_isomorphism(out, d, fixed) is None:
        return "outsourcing changed the mixed amalgam"
    return None


@lru_cache(maxsize=None)
def _chains(seed: int):
    return tuple(generic_chain_builder(3, s, "r").current for s in (8, 10, 12))


def _gen_chain(cfg):
    for n in _chains(cfg.seed):
        yield {"n": enc(n)}


@register("StrongImpliesLeqs", _gen_chain)
def _v_leqs(inst, cfg):
    n = dec(inst["n"])
    ns = extract_s_structure(n.points, n, cfg.bound)
    for a in strong_subsets(n, 4):
        if not is_strong(a, ns, cfg.bound).strong:
            return f"{key(a)} strong but not S-strong in the reduct"
    return None


# pregeometry transfer

@lru_cache(maxsize=None)
def _ordered(seed: int, count: int):
    return _exh_r(3, ORDERED) + _r_members(seed, count, 3, 7, ORDERED)


def _gen_c2cs(cfg):
    g = corpus.rng(cfg.seed, "c2cs")
    for b in _ordered(cfg.seed, cfg.ordered) + _r_members(cfg.seed, cfg.pg, 3, 7):
        seed_pts = [p for p in sorted(b.points) if g.random() < 0.4]
        yield {"b": enc(b), "a": sorted(closure(seed_pts, b))}


@register("CCextendstoCCS", _gen_c2cs)
def _v_c2cs(inst, cfg):
    b = dec(inst["b"])
    a = b.restrict(inst["a"])
    empty = RStructure(mode=b.mode)
    d, f0 = extend_iso_c_to_cs(empty, SStructure(), {}, a)
    e, f = extend_iso_c_to_cs(a, d, f0, b)
    bad = tables_agree(pg_table(b), pg_table(e), f)
    if bad is not None:
        return f"dim {key(bad[0])} is {bad[1]} but its image has {bad[2]}"
    if not is_strong(d.points, e, cfg.bound).strong or not age_membership(e, cfg.bound):
        return "D is not S-strong in E, or E left the age"
    return None


def _gen_cs2c(cfg):
    g = corpus.rng(cfg.seed, "cs2c")
    for e in _exh_s(min(cfg.exhaustive_points, 4)) + _s_members(cfg.seed, cfg.pg, 3, 9):
        seed_pts = [p for p in sorted(e.points) if g.random() < 0.4]
        yield {"e": enc(e), "d": sorted(closure(seed_pts, e))}


@register("CCSextendstoCC", _gen_cs2c)
def _v_cs2c(inst, cfg):
    e = dec(inst["e"])
    d = e.restrict(inst["d"])
    try:
        a, g0 = emulation(d, SStructure(), RStructure(mode=ORDERED), {})
        b, f = emulation(e, d, a, g0)
    except NoDistinctPairs as exc:
        return f"no distinct pairs: {exc}"
    bad = tables_agree(pg_table(e), pg_table(b), f)
    if bad is not None:
        return f"dim {key(bad[0])} is {bad[1]} but its image has {bad[2]}"
    if not is_strong(a.points, b, cfg.bound).strong or not age_membership(b, cfg.bound):
        return "A is not strong in B, or B left the age"
    return None


def _gen_dimleq(cfg):
    for inst in _gen_c2cs(cfg):
        yield dict(inst, dir="c2cs")
    for inst in _gen_cs2c(cfg):
        yield dict(inst, dir="cs2c")


@register("dimensionleq", _gen_dimleq)
def _v_dimleq(inst, cfg):
    if inst["dir"] == "c2cs":
        cbar = dec(inst["b"])
        c = cbar.restrict(inst["a"])
        d, f0 = extend_iso_c_to_cs(RStructure(mode=cbar.mode), SStructure(), {}, c)
        dbar, f = extend_iso_c_to_cs(c, d, f0, cbar)
    else:
        cbar = dec(inst["e"])
        c = cbar.restrict(inst["d"])
        d, g0 = emulation(c, SStructure(), RStructure(mode=ORDERED), {})
        dbar, f = emulation(cbar, c, d, g0)
    pts = sorted(cbar.points)
    for r in range(len(pts) + 1):
        for x in combinations(pts, r):
            if dimensionleq_holds(c, cbar, d, dbar, f, x) is False:
                return f"X={key(x)} meets the hypothesis but d(X) < d(f[X])"
    return None


def _gen_pgm(cfg):
    for b in _ordered(cfg.seed, cfg.ordered):
        yield {"b": enc(b)}
    for e in _s_members(cfg.seed, cfg.pg, 3, 9):
        yield {"e": enc(e)}


@register("PGMandMs", _gen_pgm)
def _v_pgm(inst, cfg):
    if "b" in inst:
        b = dec(inst["b"])
        e, f = extend_iso_c_to_cs(RStructure(mode=b.mode), SStructure(), {}, b)
        back, g = emulation(e, SStructure(), RStructure(mode=ORDERED), {})
        comp = {p: g[f[p]] for p in b.points}
        bad = tables_agree(pg_table(b), pg_table(back), comp)
    else:
        e = dec(inst["e"])
        b, g = emulation(e, SStructure(), RStructure(mode=ORDERED), {})
        again, f = extend_iso_c_to_cs(RStructure(mode=ORDERED), SStructure(), {}, b)
        comp = {p: f[g[p]] for p in e.points}
        bad = tables_agree(pg_table(e), pg_table(again), comp)
    if bad is not None:
        return f"round trip changes dim {key(bad[0])}: {bad[1]} vs {bad[2]}"
    return None


def _gen_pairs(cfg):
    for e in _exh_s(min(cfg.exhaustive_points, 4)) + _s_members(cfg.seed, cfg.random_s // 4 or 1, 3, 8):
        yield {"e": enc(e)}


@register("distinctPairs", _gen_pairs)
def _v_pairs(inst, cfg):
    e = dec(inst["e"])
    try:
        chosen = distinct_pairs(e)
    except NoDistinctPairs as exc:
        return f"matching failed inside the age: {exc}"
    if len(set(chosen.values())) != len(chosen):
        return "pairs are not distinct"
    for (u, _), pair in chosen.items():
        if not set(pair) <= u:
            return f"pair {pair} is not inside {key(u)}"
    return None


# symmetrization

def _gen_geo(cfg):
    for b in _exh_r(min(cfg.exhaustive_points, 5)) + _r_members(cfg.seed, cfg.pg, 3, 9):
        yield {"b": enc(b)}


@register("GMandMsim", _gen_geo)
def _v_geo(inst, cfg):
    b = dec(inst["b"])
    d = r_representation(b, RStructure(mode=ORDERED))
    tb, td = pg_table(b), pg_table(d)
    if tb != td:
        return "the ordered representation changes the dimension table"
    if geometry(tb) != geometry(td):
        return "geometries differ"
    return None


def _gen_dobs(cfg):
    g = corpus.rng(cfg.seed, "dobs")
    for a in _ordered(cfg.seed, cfg.ordered):
        if len(a.points) > 5:
            continue
        sym = symmetrize(a)
        new = [f"n{i}" for i in range(int(g.integers(0, 4)))]
        pts = sorted(sym.points) + new
        slots = [t for t in combinations(pts, 3) if not sym.points.issuperset(t)]
        rels = set(sym.relations) | {t for t in slots if g.random() < 0.25}
        yield {"a": enc(a), "b": enc(RStructure(pts, rels))}


@register("dObs", _gen_dobs)
def _v_dobs(inst, cfg):
    a, b = dec(inst["a"]), dec(inst["b"])
    d = r_representation(b, a)
    if symmetrize(d) != b:
        return "the symmetric reduct of the representation is not B"
    lhs = dim(a.points, b, cfg.bound) - predim_sym(a)
    rhs = dim(a.points, d, cfg.bound) - predim(a)
    if lhs != rhs:
        return f"relative dimensions differ: {lhs} vs {rhs}"
    if is_strong(a.points, b, cfg.bound).strong and not is_strong(a.points, d, cfg.bound).strong:
        return "A strong in B but not in the representation"
    return None


def _gen_symbound(cfg):
    for b in _ordered(cfg.seed, cfg.ordered):
        yield {"b": enc(b)}


@register("symmetrizationBound", _gen_symbound)
def _v_symbound(inst, cfg):
    b = dec(inst["b"])
    s = symmetrize(b)
    k, t = _tables(b)
    _, ts = _tables(s)
    x = np.arange(1 << k)
    xs, ys = np.meshgrid(x, x, indexing="ij")
    sub = (xs & ys) == xs
    bad = sub & ((ts[ys] - ts[xs]) < (t[ys] - t[xs]))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        return f"A={key(_names(b, i))} B={key(_names(b, j))} break the bound"
    return None


# running

def selected(cfg: SuiteConfig) -> list[str]:
    return sorted(REGISTRY) if cfg.checks is None else sorted(set(cfg.checks))


def run_check(tag: str, cfg: SuiteConfig) -> LemmaReport:
    chk = REGISTRY[tag]
    start = time.perf_counter()
    rep = LemmaReport(tag, 0)
    for inst in chk.generate(cfg):
        inst = json.loads(json.dumps(inst, sort_keys=True))
        rep.instances += 1
        try:
            msg = chk.verify(inst, cfg)
        except SearchTooLarge as exc:
            msg = f"skipped: {exc}"
        except Exception as exc:  # a crash is a failure of the check, reported with its instance
            msg = f"{type(exc).__name__}: {exc}"
        if msg is not None:
            rep.failures.append((inst, msg))
    rep.wall_time = time.perf_counter() - start
    return rep


def clear_caches() -> None:
    """Forget generated corpora, so the next run pays for generation again."""
    for obj in list(globals().values()):
        if hasattr(obj, "cache_clear"):
            obj.cache_clear()


def run_suite(cfg: SuiteConfig) -> list[LemmaReport]:
    return [run_check(tag, cfg) for tag in selected(cfg)]


def replay(tag: str, instance: dict | str, cfg: SuiteConfig | None = None) -> str | None:
    """Re-run one serialized instance; returns the failure message or None."""
    inst = json.loads(instance) if isinstance(instance, str) else instance
    return REGISTRY[tag].verify(inst, cfg or SuiteConfig())


def format_report(reports: list[LemmaReport]) -> str:
    lines = []
    total = sum(len(r.failures) for r in reports)
    for r in reports:
        lines.append(f"{r.tag}\tinstances {r.instances}\tfailures {len(r.failures)}\t"
                     f"{'pass' if r.ok else 'FAIL'}")
        for inst, msg in r.failures:
            lines.append(f"  failure\t{msg}\t{json.dumps(inst, sort_keys=True)}")
    lines.append(f"verdict {'pass' if total == 0 else 'fail'}\tchecks {len(reports)}\tfailures {total}")
    return "\n".join(lines) + "\n"


def format_timings(reports: list[LemmaReport]) -> str:
    return "".join(f"{r.tag}\t{r.wall_time:.3f}\n" for r in reports)
