"""Strong embeddings, relative dimension, closures and age membership.

All searches are exact: they minimise the predimension over every set between
a base set and the ambient structure, and refuse to run when more than
``bound`` points are free.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import kernels
from .core import RStructure, SStructure, Structure
from .errors import PreconditionError, SearchTooLarge

DEFAULT_BOUND = 20
TABLE_BOUND = 24


@dataclass(frozen=True)
class StrengthCertificate:
    base: frozenset
    predim: int
    dimension: int
    witness: frozenset | None = None

    @property
    def strong(self) -> bool:
        return self.witness is None

    @property
    def verdict(self) -> str:
        return "strong" if self.strong else "not-strong"

    def describe(self) -> str:
        lines = [f"verdict {self.verdict}", f"predim {self.predim}", f"dimension {self.dimension}"]
        if self.witness is not None:
            lines.append("witness " + " ".join(sorted(self.witness)))
        return "\n".join(lines) + "\n"


def _search(a: Iterable[str], n: Structure, bound: int):
    base = n.mask(a)
    free = n.full_mask ^ base
    k = free.bit_count()
    if k > bound:
        raise SearchTooLarge(k, bound)
    masks, weights = n.items
    return masks, weights, base, free


def dim(a: Iterable[str], n: Structure, bound: int = DEFAULT_BOUND) -> int:
    """min predim(D) over a <= D <= points(n)."""
    return int(kernels.min_value(*_search(a, n, bound)))


def minimizer(a: Iterable[str], n: Structure, bound: int = DEFAULT_BOUND,
              smallest: bool = False) -> tuple[int, frozenset]:
    """The minimum and its least minimizing set (lexicographic, or by size first)."""
    value, m = kernels.argmin(*_search(a, n, bound), smallest)
    return int(value), n.unmask(int(m))


def is_strong(a: Iterable[str], n: Structure, bound: int = DEFAULT_BOUND) -> StrengthCertificate:
    a = frozenset(a)
    args = _search(a, n, bound)
    start = int(kernels.predim(args[0], args[1], args[2]))
    value = int(kernels.min_value(*args))
    if value == start:
        return StrengthCertificate(a, start, value)
    value, m = kernels.argmin(*args, False)
    return StrengthCertificate(a, start, int(value), n.unmask(int(m)))


def closure(a: Iterable[str], n: Structure, bound: int = DEFAULT_BOUND) -> frozenset:
    """Smallest strong superset, by repeatedly replacing the set with its smallest minimizer."""
    cur = frozenset(a)
    while True:
        cert = is_strong(cur, n, bound)
        if cert.strong:
            return cur
        _, cur = minimizer(cur, n, bound, smallest=True)


def age_certificate(n: Structure, bound: int = DEFAULT_BOUND) -> StrengthCertificate:
    return is_strong((), n, bound)


def age_membership(n: Structure, bound: int = DEFAULT_BOUND) -> bool:
    args = _search((), n, bound)
    return int(kernels.min_value(*args)) >= 0


def _require(n, cls):
    if not isinstance(n, cls):
        raise PreconditionError(f"expected {cls.__name__}, got {type(n).__name__}")
    return n


def dim_r(a, b: RStructure, bound: int = DEFAULT_BOUND) -> int:
    return dim(a, _require(b, RStructure), bound)


def dim_s(a, b: SStructure, bound: int = DEFAULT_BOUND) -> int:
    return dim(a, _require(b, SStructure), bound)


def is_strong_r(a, b: RStructure, bound: int = DEFAULT_BOUND) -> StrengthCertificate:
    return is_strong(a, _require(b, RStructure), bound)


def is_strong_s(a, b: SStructure, bound: int = DEFAULT_BOUND) -> StrengthCertificate:
    return is_strong(a, _require(b, SStructure), bound)


def closure_r(a, n: RStructure, bound: int = DEFAULT_BOUND) -> frozenset:
    return closure(a, _require(n, RStructure), bound)


def closure_s(a, n: SStructure, bound: int = DEFAULT_BOUND) -> frozenset:
    return closure(a, _require(n, SStructure), bound)


def age_membership_r(a: RStructure, bound: int = DEFAULT_BOUND) -> bool:
    return age_membership(_require(a, RStructure), bound)


def age_membership_s(a: SStructure, bound: int = DEFAULT_BOUND) -> bool:
    return age_membership(_require(a, SStructure), bound)


def is_strong_substructure(a: Structure, b: Structure, bound: int = DEFAULT_BOUND) -> bool:
    """a is a substructure of b and strong in it."""
    from .core import is_substructure

    return is_substructure(a, b) and is_strong(a.points, b, bound).strong


def dimension_table(n: Structure, bound: int = TABLE_BOUND):
    """dim(X, n) for every point mask X (bit i = i-th point in sorted order)."""
    k = len(n.points)
    if k > bound:
        raise SearchTooLarge(k, bound)
    masks, weights = n.items
    return kernels.dim_table(k, masks, weights)


def predim_table(n: Structure, bound: int = TABLE_BOUND):
    k = len(n.points)
    if k > bound:
        raise SearchTooLarge(k, bound)
    masks, weights = n.items
    return kernels.predim_table(k, masks, weights)


def strong_subsets(n: Structure, max_size: int | None = None, bound: int = TABLE_BOUND) -> list[frozenset]:
    """All strong subsets (up to ``max_size`` points), in canonical order."""
    from itertools import combinations

    dims = dimension_table(n, bound)
    masks, weights = n.items
    out = []
    order = n.order
    top = len(order) if max_size is None else min(max_size, len(order))
    for r in range(top + 1):
        for combo in combinations(range(len(order)), r):
            m = 0
            for i in combo:
                m |= 1 << i
            if int(kernels.predim(masks, weights, m)) == int(dims[m]):
                out.append(frozenset(order[i] for i in combo))
    return out
