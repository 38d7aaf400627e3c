from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from amalgam_forge.core import (ORDERED, RStructure, SStructure, cap, free_structure, is_substructure,
                                is_substructure_s, parse, predim, predim_r, predim_s, predim_s_alt,
                                rel_predim_s, restrict_s, serialize)
from amalgam_forge.errors import ParseError, ValidityError
from strategies import r_structures, s_structures, structures, subset_of

FIVE_POINT = RStructure("abcxy", [("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")])


def test_free_structure_predim():
    assert predim_s(free_structure(5)) == 5
    assert predim_s_alt(free_structure(5)) == 5


def test_four_clique_premult_two():
    s = SStructure("abcd", {"abcd": 2})
    assert predim_s(s) == 0 == 4 - 2 * (4 - 2)
    assert predim_s_alt(s) == 4 + 2 * 2 - 2 * 4


def test_triple_premult_one_and_three():
    assert predim_s(SStructure("abc", {"abc": 1})) == 2
    assert predim_s_alt(SStructure("abc", {"abc": 3})) == 3 + 6 - 9 == predim_s(SStructure("abc", {"abc": 3}))


def test_witness_structure_predim():
    assert predim_r(FIVE_POINT) == 2 == oracles.r_predim(FIVE_POINT.points, FIVE_POINT.relations)


def test_empty_structures():
    assert predim(RStructure()) == 0 and predim(SStructure()) == 0


def test_rel_predim_examples():
    f5 = SStructure(["1", "2", "3", "4", "5"])
    assert rel_predim_s({"2", "3"}, {"1"}, f5) == 2
    n = SStructure(["a", "b", "c", "d"], {"bcd": 1})
    assert rel_predim_s({"b", "c", "d"}, {"a"}, n) == 3 - 1


def test_restrict_examples():
    n = SStructure("abcd", {"abcd": 1})
    assert restrict_s(n, "abc") == SStructure("abc", {"abc": 1})
    n2 = SStructure("abcde", {"abcd": 1, "abce": 1})
    assert restrict_s(n2, "abc").premult == {frozenset("abc"): 2}


def test_substructure_examples():
    f3 = SStructure("abc")
    assert not is_substructure_s(f3, SStructure("abc", {"abc": 1}))
    b = SStructure("abcde", {"abcd": 1, "abe": 2})
    for x in oracles.powerset(b.points):
        assert is_substructure(b.restrict(x), b)


def test_caps():
    assert [cap(k) for k in range(3, 8)] == [3, 2, 1, 1, 1]
    with pytest.raises(ValidityError):
        SStructure("abcd", {"abcd": 3})
    with pytest.raises(ValidityError):
        SStructure("abcde", {"abcd": 1, "abce": 1, "abc": 2})


def test_parse_premult_four_is_validity_error():
    with pytest.raises(ValidityError):
        parse("sstructure\npoint a\npoint b\npoint c\nclique a b c mult 4\n")


@pytest.mark.parametrize("text,line", [
    ("rstructure symmetric\npoint a\nrel a b c\n", 3),
    ("rstructure sideways\n", 1),
    ("sstructure\npoint a\npoint a\n", 3),
    ("rstructure ordered\npoint a\npoint b\nrel a a b\n", 4),
    ("sstructure\npoint a\npoint b\npoint c\nclique a b c mult x\n", 5),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.line == line


def test_comments_and_blank_lines():
    text = "# header comment\nrstructure ordered\n\npoint b  # trailing\npoint a\nrel b a a2\npoint a2\n"
    x = parse(text)
    assert x.mode == ORDERED and ("b", "a", "a2") in x.relations
    assert serialize(x) == "rstructure ordered\npoint a\npoint a2\npoint b\nrel b a a2\n"


def test_duplicate_universes_merge():
    s = parse("sstructure\npoint a\npoint b\npoint c\nclique a b c mult 1\nclique c b a mult 1\n")
    assert s.premult == {frozenset("abc"): 2}


@settings(max_examples=200, deadline=None)
@given(structures())
def test_round_trip(x):
    assert parse(serialize(x)) == x


@settings(max_examples=200, deadline=None)
@given(s_structures())
def test_two_predimension_forms_agree(s):
    assert predim_s(s) == predim_s_alt(s) == oracles.s_predim(s.points, s.cliques)


@settings(max_examples=100, deadline=None)
@given(s_structures(), st.data())
def test_restriction_matches_additivity(s, data):
    x = data.draw(subset_of(s))
    r = s.restrict(x)
    assert r.premult == oracles.s_mult_on(s.cliques, x)
    assert r.predim_of(r.points) == oracles.s_predim(s.points, s.cliques, x)


@settings(max_examples=100, deadline=None)
@given(r_structures(6))
def test_r_predim_of_subsets(n):
    for x in oracles.powerset(n.points):
        assert n.predim_of(x) == oracles.r_predim(n.points, n.relations, x)


@settings(max_examples=100, deadline=None)
@given(s_structures(6))
def test_validity_matches_definition(s):
    # every accepted structure satisfies the caps on all subsets
    assert oracles.s_valid(s.points, s.cliques)


def test_validity_rejections_match_oracle():
    pts = "abcde"
    universes = [frozenset(c) for r in (3, 4, 5) for c in combinations(pts, r)][:12]
    for i, u in enumerate(universes):
        for v in universes[i:]:
            for m in (1, 2, 3):
                cl = [(u, m), (v, 1)] if u != v else [(u, m + 1)]
                ok = oracles.s_valid(pts, cl)
                try:
                    SStructure(pts, cl)
                    accepted = True
                except ValidityError:
                    accepted = False
                assert accepted == ok, (u, v, m)
