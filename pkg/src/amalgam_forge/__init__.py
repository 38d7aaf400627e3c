"""Predimension calculus for ternary structures and their witnessed-clique reducts."""
__version__ = "0.1.0"
