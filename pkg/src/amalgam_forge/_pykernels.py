"""Pure-Python subset kernels.

Every structure is handed to the kernels as a list of weighted point masks
(relations or clique universes).  The predimension of a point mask ``x`` is

    popcount(x) - sum(w * max(0, popcount(m & x) - 2))

which covers both calculi: a relation is a 3-point mask of weight 1 (it counts
exactly when all three points are present) and a clique contributes
``premult * (|C & x| - 2)`` once at least three of its points are present.

The compiled module ``_ckernels`` implements the same functions.
"""
from __future__ import annotations

import numpy as np

BIG = 1 << 40


def _popcount(x: int) -> int:
    return x.bit_count()


def predim(masks, weights, x: int) -> int:
    value = _popcount(x)
    for m, w in zip(masks, weights):
        c = _popcount(m & x)
        if c > 2:
            value -= w * (c - 2)
    return value


def predim_table(n: int, masks, weights) -> np.ndarray:
    size = 1 << n
    table = [0] * size
    items = list(zip((int(m) for m in masks), (int(w) for w in weights)))
    for x in range(size):
        value = _popcount(x)
        for m, w in items:
            c = _popcount(m & x)
            if c > 2:
                value -= w * (c - 2)
        table[x] = value
    return np.array(table, dtype=np.int64)


def superset_min(table, n: int) -> np.ndarray:
    out = [int(v) for v in table]
    size = 1 << n
    for b in range(n):
        bit = 1 << b
        for x in range(size):
            if not x & bit:
                y = out[x | bit]
                if y < out[x]:
                    out[x] = y
    return np.array(out, dtype=np.int64)


def dim_table(n: int, masks, weights) -> np.ndarray:
    """For every point mask x: min predim over its supersets (int32)."""
    return superset_min(predim_table(n, masks, weights), n).astype(np.int32)


def lex_less(a: int, b: int) -> bool:
    """Order of point masks by their sorted index tuples."""
    d = a ^ b
    if not d:
        return False
    j = d & -d
    above = ~((j << 1) - 1)
    if a & j:
        return bool(b & above)
    return not (a & above)


def _better(a: int, b: int, smallest: bool) -> bool:
    if smallest:
        ca, cb = _popcount(a), _popcount(b)
        if ca != cb:
            return ca < cb
    return lex_less(a, b)


class _Search:
    def __init__(self, masks, weights, base, free):
        self.masks = [int(m) for m in masks]
        self.weights = [int(w) for w in weights]
        self.counts = [_popcount(m & base) for m in self.masks]
        self.base = base
        self.start = predim(self.masks, self.weights, base)
        deg = {}
        bits = []
        f = free
        while f:
            low = f & -f
            p = low.bit_length() - 1
            bits.append(p)
            deg[p] = sum(w for m, w in zip(self.masks, self.weights) if (m >> p) & 1)
            f ^= low
        bits.sort(key=lambda p: (-deg[p], p))
        self.order = bits
        self.adj = [[i for i, m in enumerate(self.masks) if (m >> p) & 1] for p in bits]
        suffix = [0] * (len(bits) + 1)
        for j in range(len(bits) - 1, -1, -1):
            suffix[j] = suffix[j + 1] + min(0, 1 - deg[bits[j]])
        self.suffix = suffix

    def _include(self, j):
        delta = 1
        counts = self.counts
        ws = self.weights
        for i in self.adj[j]:
            counts[i] += 1
            if counts[i] > 2:
                delta -= ws[i]
        return delta

    def _exclude(self, j):
        counts = self.counts
        for i in self.adj[j]:
            counts[i] -= 1

    def min_value(self) -> int:
        self.best = self.start
        self._dfs_value(0, self.start)
        return self.best

    def _dfs_value(self, j, value):
        if j == len(self.order) or value + self.suffix[j] >= self.best:
            return
        delta = self._include(j)
        v = value + delta
        if v < self.best:
            self.best = v
        self._dfs_value(j + 1, v)
        self._exclude(j)
        self._dfs_value(j + 1, value)

    def argmin(self, target: int, smallest: bool):
        self.target = target
        self.smallest = smallest
        self.best_mask = self.base if self.start == target else -1
        self._dfs_arg(0, self.start, self.base)
        return self.best_mask

    def _dfs_arg(self, j, value, x):
        if j == len(self.order) or value + self.suffix[j] > self.target:
            return
        if self.smallest and self.best_mask >= 0 and _popcount(x) >= _popcount(self.best_mask):
            return
        delta = self._include(j)
        v = value + delta
        y = x | (1 << self.order[j])
        if v == self.target and (self.best_mask < 0 or _better(y, self.best_mask, self.smallest)):
            self.best_mask = y
        self._dfs_arg(j + 1, v, y)
        self._exclude(j)
        self._dfs_arg(j + 1, value, x)


def min_value(masks, weights, base: int, free: int) -> int:
    return _Search(masks, weights, base, free).min_value()


def argmin(masks, weights, base: int, free: int, smallest: bool = False):
    s = _Search(masks, weights, base, free)
    m = s.min_value()
    return m, s.argmin(m, smallest)


def interval_min(table, n: int) -> np.ndarray:
    """g[z, x] = min of table over z <= y <= x, BIG when z is not inside x."""
    size = 1 << n
    full = size - 1
    t = [int(v) for v in table]
    g = np.full((size, size), BIG, dtype=np.int64)
    for z in range(size):
        comp = full ^ z
        row = {}
        sub = 0
        while True:
            x = z | sub
            best = t[x]
            rest = sub
            while rest:
                low = rest & -rest
                v = row[x ^ low]
                if v < best:
                    best = v
                rest ^= low
            row[x] = best
            if sub == comp:
                break
            sub = (sub - comp) & comp
        for x, v in row.items():
            g[z, x] = v
    return g


def pregeometry_violation(dims, n: int):
    d = [int(v) for v in dims]
    if d[0] != 0:
        return ("empty", 0)
    size = 1 << n
    for x in range(size):
        dx = d[x]
        for a in range(n):
            ba = 1 << a
            if x & ba:
                continue
            da = d[x | ba]
            if da < dx:
                return ("monotone", x, a)
            if da > dx + 1:
                return ("unit", x, a)
            for b in range(a + 1, n):
                bb = 1 << b
                if x & bb:
                    continue
                if da + d[x | bb] < d[x | ba | bb] + dx:
                    return ("submodular", x, a, b)
    return None
