from itertools import permutations

import pytest

import oracles
from amalgam_forge.amalgam import (certify_chain, extension_types, free_amalgam_r, generic_chain_builder,
                                   homogeneity_probe, is_simple_amalgam, mixed_generic_amalgam,
                                   simple_amalgam_s)
from amalgam_forge.cliques import extract_cliques, extract_s_structure
from amalgam_forge.core import RStructure, SStructure, read_structure
from amalgam_forge.corpus import exhaustive_r, strong_triples
from amalgam_forge.errors import PreconditionError
from amalgam_forge.iso import iter_embeddings
from amalgam_forge.strength import is_strong
from amalgam_forge.suite import FIXTURE_DIR

FIVE_POINT = RStructure("abcxy", [("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")])


def rel(b, a, n):
    d0 = oracles.predim_fn(n)
    return d0(frozenset(b)) - d0(frozenset(a))


def strong_embedding(small, big):
    """First injection preserving the structure whose image is strong, by brute force."""
    ps = sorted(small.points)
    for img in permutations(sorted(big.points), len(ps)):
        f = dict(zip(ps, img))
        if big.restrict(img) == small.rename(f) and oracles.strong(img, big):
            return f
    return None


def test_free_amalgam_examples():
    b1 = RStructure("abcd", [("a", "b", "c"), ("b", "c", "d")])
    a = b1.restrict("ab")
    assert free_amalgam_r(b1, a, "ab") == b1
    b2 = RStructure("xyz", [("x", "y", "z")])
    d = free_amalgam_r(b1, b2, ())
    assert oracles.r_predim(d.points, d.relations) == 2 + 2
    with pytest.raises(PreconditionError):
        free_amalgam_r(b1, RStructure("bcz"), "b")


def test_free_amalgam_keeps_strongness():
    for a, b1, b2 in strong_triples(3, 40, "r"):
        d = free_amalgam_r(b1, b2, a.points)
        assert oracles.strong(b1.points, d) and oracles.strong(b2.points, d)
        assert oracles.in_age(d)


def test_simple_amalgam_merges_paired_extensions():
    a = SStructure("abc", {"abc": 1})
    b1 = SStructure("abcd", {"abcd": 1})
    b2 = SStructure("abce", {"abce": 1})
    d = simple_amalgam_s(b1, b2, "abc")
    assert d == SStructure("abcde", {"abcde": 1})
    assert is_simple_amalgam(d, "abcd", "abce", "abc")
    assert simple_amalgam_s(a, b2, "abc") == b2
    with pytest.raises(PreconditionError):
        simple_amalgam_s(SStructure("abcd", {"abcd": 2}), b2, "abc")


def test_simple_amalgam_copies_unbased_cliques():
    b1 = SStructure("abcd", {"bcd": 2})
    b2 = SStructure("abef", {"abe": 1, "aef": 1})
    d = simple_amalgam_s(b1, b2, "ab")
    assert dict(d.cliques) == {frozenset("bcd"): 2, frozenset("abe"): 1, frozenset("aef"): 1}


def test_simple_amalgam_laws_on_random_triples():
    for a, b1, b2 in strong_triples(5, 40, "s"):
        d = simple_amalgam_s(b1, b2, a.points)
        assert rel(b2.points, a.points, b2) == rel(d.points, b1.points, d)
        assert oracles.strong(b1.points, d)
        assert oracles.in_age(d)
        assert d.restrict(b1.points, check=False) == b1 and d.restrict(b2.points, check=False) == b2


def test_mixed_amalgam_with_nothing_new():
    a = frozenset("abc")
    b = extract_s_structure(a, FIVE_POINT)
    assert mixed_generic_amalgam(FIVE_POINT, b, a) == FIVE_POINT


def test_mixed_amalgam_adds_one_witnessed_clique():
    abar = FIVE_POINT
    b = SStructure("abcpq", {"abc": 1, "apq": 1})
    d = mixed_generic_amalgam(abar, b, "abc")
    new = d.points - abar.points - b.points
    assert len(new) == 2
    assert len(d.relations) == len(abar.relations) + 3
    assert extract_s_structure(b.points, d) == b
    assert oracles.strong(abar.points, d)


def test_mixed_amalgam_rejects_missing_witnesses():
    with pytest.raises(PreconditionError, match="witnesses"):
        mixed_generic_amalgam(FIVE_POINT.restrict("abcx"), SStructure("abc", {"abc": 1}), "abc",
                              ambient=FIVE_POINT)


def test_builder_single_point_extensions_give_free_structures():
    for calc in "rs":
        st = generic_chain_builder(1, 5, calc)
        n = st.current
        assert len(n.points) == 5
        assert (not n.relations) if calc == "r" else (not n.cliques)
        assert certify_chain(st)


def test_r_builder_embeds_the_small_age():
    st = generic_chain_builder(3, 12, "r")
    assert certify_chain(st)
    n = st.current
    for m in exhaustive_r(3):
        assert strong_embedding(m, n) is not None
    for prefix in st.prefixes:
        assert oracles.strong(prefix, n)


def test_s_builder_realizes_triple_multiplicities():
    st = generic_chain_builder(3, 12, "s")
    n = st.current
    assert certify_chain(st)
    assert strong_embedding(SStructure("abc"), n) is not None
    for m in (1, 2, 3):
        assert strong_embedding(SStructure("abc", {"abc": m}), n) is not None


def test_builder_rejects_bad_bounds():
    with pytest.raises(PreconditionError):
        generic_chain_builder(0, 5)
    with pytest.raises(PreconditionError):
        generic_chain_builder(1, 5, "q")


def test_single_point_extensions_of_the_empty_structure():
    types = extension_types(RStructure(), (), 1)
    assert len(types) == 1 and types[0].structure == RStructure(["e1"])


def test_probe_trivial_and_rejections():
    n = generic_chain_builder(3, 12, "r").current
    assert homogeneity_probe(n, {}, 0).ok
    assert homogeneity_probe(n, {}, 0).mapping == {}
    with pytest.raises(PreconditionError):
        homogeneity_probe(FIVE_POINT, {"a": "a", "b": "b", "c": "c"}, 1)


def test_probe_separates_the_two_calculi():
    st = generic_chain_builder(3, 12, "r")
    n = st.current
    free = read_structure(FIXTURE_DIR / "free_triple.r")
    one = read_structure(FIXTURE_DIR / "one_relation_triple.r")
    g1, g2 = strong_embedding(free, n), strong_embedding(one, n)
    assert g1 is not None and g2 is not None
    f = {g1[p]: g2[p] for p in sorted(free.points)}
    r = homogeneity_probe(n, f, 3)
    assert not r.ok and r.reason == "not a partial isomorphism"
    s = extract_s_structure(n.points, n)
    assert s.restrict(f.keys()).rename(f) == s.restrict(f.values())
    p = homogeneity_probe(s, f, 3)
    assert p.ok and p.steps_done >= 1
    assert all(p.mapping[k] == v for k, v in f.items())


def test_embedding_search_agrees_with_brute_force():
    n = generic_chain_builder(2, 8, "r").current
    for m in exhaustive_r(3):
        found = next((g for g in iter_embeddings(m, n) if is_strong(g.values(), n).strong), None)
        assert (found is None) == (strong_embedding(m, n) is None)
