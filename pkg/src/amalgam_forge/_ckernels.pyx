# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled subset kernels; same contract as ``_pykernels``."""
import numpy as np

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef int64_t BIG = 1 << 40


cdef inline int pc(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef inline bint lex_less_c(uint64_t a, uint64_t b) noexcept nogil:
    cdef uint64_t d = a ^ b
    if d == 0:
        return False
    cdef uint64_t j = d & (~d + 1)
    cdef uint64_t above = ~((j << 1) - 1)
    if a & j:
        return (b & above) != 0
    return (a & above) == 0


cdef inline bint better_c(uint64_t a, uint64_t b, bint smallest) noexcept nogil:
    cdef int ca, cb
    if smallest:
        ca = pc(a)
        cb = pc(b)
        if ca != cb:
            return ca < cb
    return lex_less_c(a, b)


def lex_less(a, b):
    return lex_less_c(<uint64_t>a, <uint64_t>b)


cdef int64_t predim_c(const uint64_t[:] masks, const int64_t[:] weights, uint64_t x) noexcept nogil:
    cdef int64_t value = pc(x)
    cdef Py_ssize_t i
    cdef int c
    for i in range(masks.shape[0]):
        c = pc(masks[i] & x)
        if c > 2:
            value -= weights[i] * (c - 2)
    return value


def _arrays(masks, weights):
    return (np.ascontiguousarray(np.asarray(masks, dtype=np.uint64)),
            np.ascontiguousarray(np.asarray(weights, dtype=np.int64)))


def predim(masks, weights, x):
    m, w = _arrays(masks, weights)
    return int(predim_c(m, w, <uint64_t>x))


def predim_table(int n, masks, weights):
    m_arr, w_arr = _arrays(masks, weights)
    cdef const uint64_t[:] m = m_arr
    cdef const int64_t[:] w = w_arr
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = np.empty(size, dtype=np.int64)
    cdef int64_t[:] o = out
    cdef Py_ssize_t x
    with nogil:
        for x in range(size):
            o[x] = predim_c(m, w, <uint64_t>x)
    return out


def superset_min(table, int n):
    out = np.array(table, dtype=np.int64, copy=True)
    cdef int64_t[:] o = out
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t x, bit
    cdef int b
    with nogil:
        for b in range(n):
            bit = (<Py_ssize_t>1) << b
            for x in range(size):
                if not (x & bit):
                    if o[x | bit] < o[x]:
                        o[x] = o[x | bit]
    return out


def dim_table(int n, masks, weights):
    m_arr, w_arr = _arrays(masks, weights)
    cdef const uint64_t[:] m = m_arr
    cdef const int64_t[:] w = w_arr
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = np.empty(size, dtype=np.int32)
    cdef int[:] o = out
    cdef Py_ssize_t x, bit
    cdef int b
    with nogil:
        for x in range(size):
            o[x] = <int>predim_c(m, w, <uint64_t>x)
        for b in range(n):
            bit = (<Py_ssize_t>1) << b
            for x in range(size):
                if not (x & bit):
                    if o[x | bit] < o[x]:
                        o[x] = o[x | bit]
    return out


cdef struct Search:
    int nfree
    int nitems
    int64_t *weights
    int *counts
    int *order
    int *adj_start
    int *adj
    int64_t *suffix
    int64_t best
    int64_t target
    bint smallest
    uint64_t best_mask
    bint have_mask


cdef inline int64_t include_c(Search *s, int j) noexcept nogil:
    cdef int64_t delta = 1
    cdef int k, i
    for k in range(s.adj_start[j], s.adj_start[j + 1]):
        i = s.adj[k]
        s.counts[i] += 1
        if s.counts[i] > 2:
            delta -= s.weights[i]
    return delta


cdef inline void exclude_c(Search *s, int j) noexcept nogil:
    cdef int k
    for k in range(s.adj_start[j], s.adj_start[j + 1]):
        s.counts[s.adj[k]] -= 1


cdef void dfs_value(Search *s, int j, int64_t value) noexcept nogil:
    if j == s.nfree or value + s.suffix[j] >= s.best:
        return
    cdef int64_t v = value + include_c(s, j)
    if v < s.best:
        s.best = v
    dfs_value(s, j + 1, v)
    exclude_c(s, j)
    dfs_value(s, j + 1, value)


cdef void dfs_arg(Search *s, int j, int64_t value, uint64_t x) noexcept nogil:
    if j == s.nfree or value + s.suffix[j] > s.target:
        return
    if s.smallest and s.have_mask and pc(x) >= pc(s.best_mask):
        return
    cdef int64_t v = value + include_c(s, j)
    cdef uint64_t y = x | ((<uint64_t>1) << s.order[j])
    if v == s.target and (not s.have_mask or better_c(y, s.best_mask, s.smallest)):
        s.best_mask = y
        s.have_mask = True
    dfs_arg(s, j + 1, v, y)
    exclude_c(s, j)
    dfs_arg(s, j + 1, value, x)


cdef class _Prepared:
    cdef Search s
    cdef uint64_t base
    cdef int64_t start

    def __cinit__(self, masks, weights, base, free_mask):
        m_arr, w_arr = _arrays(masks, weights)
        cdef const uint64_t[:] m = m_arr
        cdef const int64_t[:] w = w_arr
        cdef int nitems = m.shape[0]
        cdef int i, j, k = 0
        cdef int nfree, total
        cdef uint64_t b = <uint64_t>base
        self.base = b
        self.start = predim_c(m, w, b)
        ml = [int(v) for v in m_arr]
        wl = [int(v) for v in w_arr]
        bits = [q for q in range(64) if (int(free_mask) >> q) & 1]
        deg = {q: sum(wi for mi, wi in zip(ml, wl) if (mi >> q) & 1) for q in bits}
        bits.sort(key=lambda q: (-deg[q], q))
        adj = [[i for i, mi in enumerate(ml) if (mi >> q) & 1] for q in bits]
        nfree = len(bits)
        total = sum(len(a) for a in adj)
        self.s.nfree = nfree
        self.s.nitems = nitems
        self.s.weights = <int64_t *>malloc(max(nitems, 1) * sizeof(int64_t))
        self.s.counts = <int *>malloc(max(nitems, 1) * sizeof(int))
        self.s.order = <int *>malloc(max(nfree, 1) * sizeof(int))
        self.s.adj_start = <int *>malloc((nfree + 1) * sizeof(int))
        self.s.adj = <int *>malloc(max(total, 1) * sizeof(int))
        self.s.suffix = <int64_t *>malloc((nfree + 1) * sizeof(int64_t))
        for i in range(nitems):
            self.s.weights[i] = w[i]
            self.s.counts[i] = pc(m[i] & b)
        for j in range(nfree):
            self.s.order[j] = bits[j]
            self.s.adj_start[j] = k
            for i in adj[j]:
                self.s.adj[k] = i
                k += 1
        self.s.adj_start[nfree] = k
        self.s.suffix[nfree] = 0
        for j in range(nfree - 1, -1, -1):
            self.s.suffix[j] = self.s.suffix[j + 1] + min(0, 1 - deg[bits[j]])

    def __dealloc__(self):
        free(self.s.weights)
        free(self.s.counts)
        free(self.s.order)
        free(self.s.adj_start)
        free(self.s.adj)
        free(self.s.suffix)

    def min_value(self):
        self.s.best = self.start
        with nogil:
            dfs_value(&self.s, 0, self.start)
        return int(self.s.best)

    def argmin(self, target, smallest):
        self.s.target = target
        self.s.smallest = smallest
        self.s.have_mask = self.start == target
        self.s.best_mask = self.base
        with nogil:
            dfs_arg(&self.s, 0, self.start, self.base)
        return int(self.s.best_mask) if self.s.have_mask else -1


def min_value(masks, weights, base, free_mask):
    return _Prepared(masks, weights, base, free_mask).min_value()


def argmin(masks, weights, base, free_mask, smallest=False):
    prep = _Prepared(masks, weights, base, free_mask)
    m = prep.min_value()
    return m, prep.argmin(m, bool(smallest))


def interval_min(table, int n):
    t_arr = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
    cdef const int64_t[:] t = t_arr
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    g_arr = np.full((size, size), BIG, dtype=np.int64)
    cdef int64_t[:, :] g = g_arr
    cdef Py_ssize_t full = size - 1, z, comp, sub, x, rest, low
    cdef int64_t best, v
    with nogil:
        for z in range(size):
            comp = full ^ z
            sub = 0
            while True:
                x = z | sub
                best = t[x]
                rest = sub
                while rest:
                    low = rest & (-rest)
                    v = g[z, x ^ low]
                    if v < best:
                        best = v
                    rest ^= low
                g[z, x] = best
                if sub == comp:
                    break
                sub = (sub - comp) & comp
    return g_arr


def pregeometry_violation(dims, int n):
    d_arr = np.ascontiguousarray(np.asarray(dims, dtype=np.int64))
    cdef const int64_t[:] d = d_arr
    if d[0] != 0:
        return ("empty", 0)
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t x, ba, bb
    cdef int a, b, code = 0, fa = 0, fb = 0
    cdef Py_ssize_t fx = 0
    cdef int64_t dx, da
    with nogil:
        for x in range(size):
            if code:
                break
            dx = d[x]
            for a in range(n):
                if code:
                    break
                ba = (<Py_ssize_t>1) << a
                if x & ba:
                    continue
                da = d[x | ba]
                if da < dx:
                    code = 1; fx = x; fa = a
                    break
                if da > dx + 1:
                    code = 2; fx = x; fa = a
                    break
                for b in range(a + 1, n):
                    bb = (<Py_ssize_t>1) << b
                    if x & bb:
                        continue
                    if da + d[x | bb] < d[x | ba | bb] + dx:
                        code = 3; fx = x; fa = a; fb = b
                        break
    if code == 1:
        return ("monotone", int(fx), fa)
    if code == 2:
        return ("unit", int(fx), fa)
    if code == 3:
        return ("submodular", int(fx), fa, fb)
    return None
