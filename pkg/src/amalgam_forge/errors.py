"""Exception types shared across the package."""
from __future__ import annotations


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidityError(ValueError):
    """A clique set whose associated multiplicity exceeds its cap."""

    def __init__(self, message: str, clique=None, multiplicity: int | None = None, witness=None):
        self.clique = clique
        self.multiplicity = multiplicity
        self.witness = witness
        super().__init__(message)


class PreconditionError(ValueError):
    pass


class SearchTooLarge(RuntimeError):
    def __init__(self, free: int, bound: int):
        self.free = free
        self.bound = bound
        super().__init__(f"search too large: {free} free points exceed the bound {bound}")


class NoGoodClique(RuntimeError):
    """No clique of the family shares at most two generators; ``witness`` has negative predimension."""

    def __init__(self, witness: frozenset, predim: int):
        self.witness = witness
        self.predim = predim
        super().__init__(f"no good clique; {sorted(witness)} has predimension {predim}")


class NoDistinctPairs(RuntimeError):
    def __init__(self, witness: frozenset, predim: int):
        self.witness = witness
        self.predim = predim
        super().__init__(f"no system of distinct pairs; {sorted(witness)} has predimension {predim}")
