from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from amalgam_forge.cliques import extract_s_structure
from amalgam_forge.core import ORDERED, RStructure, SStructure
from amalgam_forge.errors import NoDistinctPairs, PreconditionError, SearchTooLarge
from amalgam_forge.pregeometry import (PregeometryTable, d_closure, dependent, distinct_pairs, emulation,
                                       extend_iso_c_to_cs, geometry, parse_table, pg_isomorphic, pg_table,
                                       pregeometry_violation, tables_agree)
from strategies import r_structures, s_structures, structures

FIVE_POINT = RStructure("abcxy", [("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")])


def brute_table_ok(t, n):
    for x in oracles.powerset(n.points):
        if t.dim(x) != oracles.dim(x, n):
            return False
    return True


def test_free_structure_tables():
    for n in (RStructure("abcd"), SStructure("abcd")):
        t = pg_table(n)
        assert all(d == len(x) for x, d in t.rows())


def test_five_point_table():
    t = pg_table(FIVE_POINT)
    assert t.dim("abcxy") == 2 and t.dim("abc") == 2 and t.dim("ab") == 2
    assert brute_table_ok(t, FIVE_POINT)


def test_table_bound():
    with pytest.raises(SearchTooLarge):
        pg_table(RStructure([f"p{i}" for i in range(17)]))


def test_dependence_examples():
    assert dependent("a", "ab", FIVE_POINT)
    assert dependent("x", "abc", FIVE_POINT) and dependent("y", "abc", FIVE_POINT)
    assert not dependent("c", "a", FIVE_POINT)
    rec = d_closure("ab", FIVE_POINT)
    assert rec.closure == frozenset("abcxy")
    assert d_closure(rec.closure, FIVE_POINT).closure == rec.closure


def test_isomorphism_of_tables():
    t = pg_table(FIVE_POINT)
    f = pg_isomorphic(t, t)
    assert f is not None and tables_agree(t, t, f) is None
    for mode in ("symmetric", ORDERED):
        one = RStructure("123", [("1", "2", "3")], mode)
        assert pg_table(one).dim("123") == 2
        assert pg_isomorphic(pg_table(RStructure("abc")), pg_table(one)) is None


def test_proper_reduct_pair_has_isomorphic_s_tables():
    n = RStructure(["a", "b", "c", "1", "2", "3"], [("1", "2", "3")])
    s = extract_s_structure(n.points, n)
    f = {"a": "1", "b": "2", "c": "3"}
    left, right = pg_table(s.restrict("abc")), pg_table(s.restrict("123"))
    assert pg_isomorphic(left, right) is not None
    assert tables_agree(left, right, f) is None
    assert pg_isomorphic(pg_table(n.restrict("abc")), pg_table(n.restrict("123"))) is None


def test_tsv_round_trip():
    t = pg_table(FIVE_POINT)
    assert parse_table(t.to_tsv()) == t
    with pytest.raises(PreconditionError):
        parse_table("a\t1\n")


def test_violations_are_reported():
    t = pg_table(SStructure("ab"))
    bad = PregeometryTable(t.universe, np.array([0, 2, 1, 2]))
    assert pregeometry_violation(bad)[0] == "unit"
    assert pregeometry_violation(t) is None


def test_geometry_drops_loops_and_merges_parallels():
    n = SStructure("abcd", {"abc": 1})
    g = geometry(pg_table(n))
    assert len(g.universe) == 4
    two = RStructure("abcxy", [("a", "x", "y")])
    t = pg_table(two)
    assert t.dim("ax") == 2


def test_distinct_pairs_examples():
    one = SStructure("abc", {"abc": 1})
    assert distinct_pairs(one) == {(frozenset("abc"), 0): ("a", "b")}
    two = SStructure("abcd", {"abc": 1, "abd": 1})
    chosen = distinct_pairs(two)
    assert len(set(chosen.values())) == 2
    assert oracles.distinct_pairs_exist([frozenset("abc"), frozenset("abd")])


def test_distinct_pairs_failure_gives_negative_witness():
    pts = "abcde"
    cl = {frozenset(t): 1 for t in combinations(pts, 3)}
    cl[frozenset("abc")] = 2
    e = SStructure(pts, cl)
    inst = [u for u, m in e.cliques for _ in range(m)]
    assert not oracles.distinct_pairs_exist(inst)
    with pytest.raises(NoDistinctPairs) as exc:
        distinct_pairs(e)
    assert exc.value.predim < 0


@settings(max_examples=100, deadline=None)
@given(s_structures(6))
def test_distinct_pairs_match_exhaustive_search(e):
    inst = [u for u, m in e.cliques for _ in range(m)]
    assume(len(inst) <= 8)
    expected = oracles.distinct_pairs_exist(inst)
    try:
        chosen = distinct_pairs(e)
    except NoDistinctPairs:
        assert not expected
        return
    assert expected
    assert len(set(chosen.values())) == len(chosen) == len(inst)
    assert all(set(p) <= u for (u, _), p in chosen.items())
    if oracles.in_age(e):
        assert expected


@settings(max_examples=100, deadline=None)
@given(structures(6))
def test_tables_match_brute_force_and_axioms(n):
    if not oracles.in_age(n):
        with pytest.raises(PreconditionError):
            pg_table(n)
        return
    t = pg_table(n)
    assert brute_table_ok(t, n)
    subsets = oracles.powerset(n.points)
    for x in subsets:
        for p in n.points:
            assert t.dim(x) <= t.dim(x | {p}) <= t.dim(x) + 1
    for x, y in combinations(subsets[: 40], 2):
        assert t.dim(x | y) + t.dim(x & y) <= t.dim(x) + t.dim(y)


@settings(max_examples=60, deadline=None)
@given(structures(6), st.data())
def test_closure_is_dependence_closed(n, data):
    assume(oracles.in_age(n))
    x = data.draw(st.sets(st.sampled_from(sorted(n.points)))) if n.points else set()
    t = pg_table(n)
    c = d_closure(x, t).closure
    assert t.dim(c) == t.dim(x) and frozenset(x) <= c
    for p in n.points:
        if p not in c:
            assert oracles.dim(c | {p}, n) == oracles.dim(c, n) + 1


# extending isomorphisms in both directions

def check_transfer(src, dst, f):
    for x in oracles.powerset(src.points):
        assert oracles.dim(x, src) == oracles.dim({f[p] for p in x}, dst)


def test_extend_to_s_side_examples():
    a = RStructure("abc", [("a", "b", "c")])
    d = SStructure("123", {"123": 1})
    f0 = {"a": "1", "b": "2", "c": "3"}
    e, f = extend_iso_c_to_cs(a, d, f0, a)
    assert e == d and f == f0
    b = RStructure("abcz", a.relations)
    e, f = extend_iso_c_to_cs(a, d, f0, b)
    assert e.points == d.points | {f["z"]} and e.cliques == d.cliques
    check_transfer(b, e, f)
    b = RStructure("abcuvw", a.relations | {("u", "v", "w")})
    e, f = extend_iso_c_to_cs(a, d, f0, b)
    assert dict(e.cliques)[frozenset(f[p] for p in "uvw")] == 1
    check_transfer(b, e, f)


def test_extend_rejects_bad_maps():
    a = RStructure("abc", [("a", "b", "c")])
    with pytest.raises(PreconditionError):
        extend_iso_c_to_cs(a, SStructure("123"), {"a": "1", "b": "2", "c": "3"}, a)
    not_strong = RStructure("abcxy", [("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")])
    with pytest.raises(PreconditionError):
        extend_iso_c_to_cs(RStructure("abc"), SStructure("123"), {"a": "1", "b": "2", "c": "3"}, not_strong)


def test_emulation_examples():
    d = SStructure("123")
    a = RStructure("abc", mode=ORDERED)
    f0 = {"1": "a", "2": "b", "3": "c"}
    b, f = emulation(d, d, a, f0)
    assert b == a and f == f0
    e = SStructure("123pqr", {"pqr1": 1})
    b, f = emulation(e, d, a, f0)
    # every member other than the chosen pair gets one relation through that pair
    assert len(b.relations) == 4 - 2
    check_transfer(e, b, f)


def test_emulation_of_base_cliques_uses_inner_pairs():
    d = SStructure("1234", {"123": 1})
    a = RStructure("abcd", [("a", "b", "c")], ORDERED)
    f0 = {"1": "a", "2": "b", "3": "c", "4": "d"}
    assert tables_agree(pg_table(d), pg_table(a), f0) is None
    e = SStructure("1234pq", {"123pq": 1})
    assert e.restrict(d.points, check=False) == d
    b, f = emulation(e, d, a, f0)
    check_transfer(e, b, f)


@st.composite
def strong_extensions(draw):
    a = draw(r_structures(4))
    pts = sorted(a.points) + [f"n{i}" for i in range(draw(st.integers(0, 3)))]
    slots = [t for t in combinations(pts, 3) if not a.points.issuperset(t)]
    extra = draw(st.lists(st.sampled_from(slots), unique=True, max_size=3)) if slots else []
    return a, RStructure(pts, set(a.relations) | set(extra))


@settings(max_examples=60, deadline=None)
@given(strong_extensions())
def test_round_trip_preserves_dimension(pair):
    a, b = pair
    assume(oracles.in_age(b) and oracles.strong(a.points, b))
    d = extract_s_structure(a.points, a)
    f0 = {p: p for p in a.points}
    assume(tables_agree(pg_table(a), pg_table(d), f0) is None)
    e, f = extend_iso_c_to_cs(a, d, f0, b)
    check_transfer(b, e, f)
    assert oracles.strong(d.points, e)
    a_ord = RStructure(a.points, a.relations, ORDERED)
    back, g = emulation(e, d, a_ord, {v: k for k, v in f0.items()})
    check_transfer(e, back, g)
    assert oracles.strong(a_ord.points, back)
