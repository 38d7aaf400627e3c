import pytest
from hypothesis import given, settings

import oracles
from amalgam_forge import corpus
from amalgam_forge.core import ORDERED, parse, serialize
from amalgam_forge.iso import are_isomorphic, find_embedding, find_isomorphism
from strategies import structures


@pytest.mark.parametrize("n", range(0, 6))
def test_exhaustive_r_counts(n):
    tier = [a for a in corpus.exhaustive_r(n) if len(a.points) == n]
    assert len(tier) == oracles.count_r_types(n)


@pytest.mark.parametrize("n", range(0, 4))
def test_exhaustive_ordered_counts(n):
    tier = [a for a in corpus.exhaustive_r(n, ORDERED) if len(a.points) == n]
    assert len(tier) == oracles.count_r_types(n, ordered=True)


@pytest.mark.parametrize("n", range(0, 5))
def test_exhaustive_s_counts(n):
    tier = [a for a in corpus.exhaustive_s(n) if len(a.points) == n]
    assert len(tier) == oracles.count_s_types(n)


def test_burnside_counts_are_known_values():
    assert [oracles.count_r_types(n) for n in range(6)] == [1, 1, 1, 2, 5, 20]


def test_random_members_are_deterministic_and_in_the_age():
    a = corpus.random_r_members(7, 30)
    b = corpus.random_r_members(7, 30)
    assert [serialize(x) for x in a] == [serialize(x) for x in b]
    assert all(oracles.in_age(x) for x in a)
    s = corpus.random_s_members(7, 30)
    assert all(oracles.in_age(x) and oracles.s_valid(x.points, x.cliques) for x in s)
    assert [serialize(x) for x in s] == [serialize(x) for x in corpus.random_s_members(7, 30)]


def test_strong_triples_are_strong():
    for calc in "rs":
        for a, b1, b2 in corpus.strong_triples(11, 25, calc):
            assert b1.points & b2.points == a.points
            assert oracles.strong(a.points, b1) and oracles.strong(a.points, b2)


def test_five_clique_instances():
    from amalgam_forge.cliques import s_cliques
    for n in corpus.five_clique_instances(2, 15):
        assert s_cliques(n, 5) and oracles.in_age(n)


def test_written_corpus_parses_back(tmp_path):
    paths = corpus.generate_corpus(tmp_path, seed=1, random_count=5)
    assert paths
    for p in paths:
        x = parse(p.read_text())
        assert serialize(x) == p.read_text()


@settings(max_examples=150, deadline=None)
@given(structures(6), structures(6))
def test_isomorphism_search_matches_brute_force(x, y):
    assert are_isomorphic(x, y) == (type(x) is type(y) and getattr(x, "mode", None) == getattr(y, "mode", None)
                                    and oracles.isomorphic(x, y))
    f = find_isomorphism(x, x)
    assert f is not None and x.rename(f) == x


@settings(max_examples=100, deadline=None)
@given(structures(6))
def test_renamed_copies_are_found(x):
    ren = {p: f"q{p}" for p in x.points}
    y = x.rename(ren)
    f = find_isomorphism(x, y)
    assert f is not None and x.rename(f) == y
    assert find_embedding(x, y) is not None
