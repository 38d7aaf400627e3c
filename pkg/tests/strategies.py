"""Hypothesis strategies for small structures."""
from itertools import combinations, permutations

from hypothesis import strategies as st

from amalgam_forge.core import ORDERED, SYMMETRIC, RStructure, SStructure
from amalgam_forge.errors import ValidityError


def points(n):
    return [f"p{i}" for i in range(n)]


@st.composite
def r_structures(draw, max_points=7, mode=SYMMETRIC):
    n = draw(st.integers(0, max_points))
    pts = points(n)
    if mode == SYMMETRIC:
        slots = list(combinations(pts, 3))
    else:
        slots = [p for c in combinations(pts, 3) for p in permutations(c)]
    rels = draw(st.lists(st.sampled_from(slots), max_size=2 * n, unique=True)) if slots else []
    return RStructure(pts, rels, mode)


@st.composite
def s_structures(draw, max_points=7):
    n = draw(st.integers(0, max_points))
    pts = points(n)
    cl = {}
    if n >= 3:
        for _ in range(draw(st.integers(0, 4))):
            size = draw(st.integers(3, min(n, 5)))
            u = frozenset(draw(st.permutations(pts))[:size])
            trial = dict(cl)
            trial[u] = trial.get(u, 0) + draw(st.integers(1, 3))
            try:
                SStructure(pts, trial)
            except ValidityError:
                continue
            cl = trial
    return SStructure(pts, cl)


def structures(max_points=7):
    return st.one_of(r_structures(max_points), r_structures(max_points, ORDERED), s_structures(max_points))


@st.composite
def subset_of(draw, structure):
    return frozenset(p for p in sorted(structure.points) if draw(st.booleans()))
