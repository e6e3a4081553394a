# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernels; same interface and results as ``_kernels_py``."""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy

from ._kernels_py import Overflow, root_state, expand  # frontier steps are not hot


cdef class _Words:
    """A list of column sequences packed into C arrays, grouped by a key."""
    cdef int* data
    cdef int* off
    cdef int* length
    cdef int count

    def __cinit__(self, list words):
        cdef int total = 0, i, j, pos = 0
        for w in words:
            total += len(w)
        self.count = len(words)
        self.data = <int*>malloc((total + 1) * sizeof(int))
        self.off = <int*>malloc((self.count + 1) * sizeof(int))
        self.length = <int*>malloc((self.count + 1) * sizeof(int))
        if not self.data or not self.off or not self.length:
            raise MemoryError()
        for i in range(self.count):
            w = words[i]
            self.off[i] = pos
            self.length[i] = len(w)
            for j in range(len(w)):
                self.data[pos] = w[j]
                pos += 1

    def __dealloc__(self):
        free(self.data)
        free(self.off)
        free(self.length)


cdef class _Search:
    cdef int ngens, nc, max_index, size
    cdef int inv[64]
    cdef _Words rels
    cdef int col_first[65]
    cdef _Words cons
    cdef int* stack
    cdef int* queue
    cdef long long nodes, max_nodes
    cdef list found

    def __cinit__(self, int ngens, int max_index, list rels_by_col, list constraints, long long max_nodes):
        cdef int x, depth
        if 2 * ngens > 64:
            raise ValueError("at most 32 generators")
        self.ngens = ngens
        self.nc = 2 * ngens
        self.max_index = max_index
        self.size = max_index * self.nc
        for x in range(self.nc):
            self.inv[x] = (x + ngens) % self.nc
        flat = []
        for x in range(self.nc):
            self.col_first[x] = len(flat)
            flat.extend(rels_by_col[x])
        self.col_first[self.nc] = len(flat)
        self.rels = _Words(flat)
        self.cons = _Words(constraints)
        depth = self.size + 2
        self.stack = <int*>malloc(<size_t>depth * self.size * sizeof(int))
        self.queue = <int*>malloc((self.size + 4) * sizeof(int))
        if not self.stack or not self.queue:
            raise MemoryError()
        self.nodes = 0
        self.max_nodes = max_nodes
        self.found = []

    def __dealloc__(self):
        free(self.stack)
        free(self.queue)

    cdef inline bint scan(self, int* table, int start, int end, int* w, int n, int* qlen):
        cdef int nc = self.nc
        cdef int f = start, i = 0, b, j, nxt, x
        while i < n:
            nxt = table[f * nc + w[i]]
            if nxt < 0:
                break
            f = nxt
            i += 1
        if i == n:
            return f == end
        b = end
        j = n - 1
        while j >= i:
            nxt = table[b * nc + self.inv[w[j]]]
            if nxt < 0:
                break
            b = nxt
            j -= 1
        if j < i:
            return f == b
        if j == i:
            x = w[i]
            table[f * nc + x] = b
            table[b * nc + self.inv[x]] = f
            self.queue[qlen[0]] = f * nc + x
            self.queue[qlen[0] + 1] = b * nc + self.inv[x]
            qlen[0] += 2
        return True

    cdef bint propagate(self, int* table, int qlen):
        cdef int e, c, x, r, k
        cdef int nc = self.nc
        while True:
            while qlen > 0:
                qlen -= 1
                e = self.queue[qlen]
                c = e // nc
                x = e % nc
                for k in range(self.col_first[x], self.col_first[x + 1]):
                    if not self.scan(table, c, c, self.rels.data + self.rels.off[k], self.rels.length[k], &qlen):
                        return False
            for k in range(self.cons.count):
                if not self.scan(table, 0, 0, self.cons.data + self.cons.off[k], self.cons.length[k], &qlen):
                    return False
            if qlen == 0:
                return True

    cdef bint rec(self, int depth, int n, int start) except -1:
        cdef int nc = self.nc
        cdef int size = self.size
        cdef int* table = self.stack + <size_t>depth * size
        cdef int* child
        cdef int pos = start, end = n * nc, c, x, ix, d, top, i
        while pos < end and table[pos] >= 0:
            pos += 1
        if pos == end:
            self.found.append((n, tuple([table[i] for i in range(end)])))
            return True
        c = pos // nc
        x = pos % nc
        ix = self.inv[x]
        top = n + 1 if n < self.max_index else n
        child = table + size
        for d in range(top):
            if d < n and table[d * nc + ix] >= 0:
                continue
            self.nodes += 1
            if self.nodes > self.max_nodes:
                return False
            memcpy(child, table, size * sizeof(int))
            child[pos] = d
            child[d * nc + ix] = c
            self.queue[0] = pos
            self.queue[1] = d * nc + ix
            if self.propagate(child, 2):
                if not self.rec(depth + 1, n + 1 if d == n else n, pos + 1):
                    return False
        return True

    def run(self, list table, int n, int start):
        cdef int i
        for i in range(self.size):
            self.stack[i] = table[i]
        complete = self.rec(0, n, start)
        return self.found, min(self.nodes, self.max_nodes), bool(complete)


def search(int ngens, int max_index, list rels_by_col, list constraints, state, long long max_nodes):
    table, n, start = state
    return _Search(ngens, max_index, rels_by_col, constraints, max_nodes).run(list(table), n, start)


cdef class _HLT:
    cdef int nc, ngens
    cdef int inv[64]
    cdef int* table
    cdef int* p
    cdef int* q
    cdef int* ded
    cdef int nded, max_ded
    cdef int ncosets, capacity, max_cosets
    cdef long long steps, max_steps
    cdef _Words rels
    cdef _Words rot
    cdef int col_first[65]
    cdef bint overflow

    def __cinit__(self, int ngens, list relators, list rels_by_col, int max_cosets, long long max_steps):
        cdef int x
        if 2 * ngens > 64:
            raise ValueError("at most 32 generators")
        self.ngens = ngens
        self.nc = 2 * ngens
        for x in range(self.nc):
            self.inv[x] = (x + ngens) % self.nc
        self.rels = _Words(relators)
        flat = []
        for x in range(self.nc):
            self.col_first[x] = len(flat)
            flat.extend(rels_by_col[x])
        self.col_first[self.nc] = len(flat)
        self.rot = _Words(flat)
        self.max_cosets = max_cosets
        self.max_steps = max_steps
        self.capacity = 1024 if max_cosets > 1024 else max_cosets
        self.table = <int*>malloc(<size_t>self.capacity * self.nc * sizeof(int))
        self.p = <int*>malloc(self.capacity * sizeof(int))
        self.q = <int*>malloc(self.capacity * sizeof(int))
        self.max_ded = 4096
        self.ded = <int*>malloc((self.max_ded + 8) * sizeof(int))
        if not self.table or not self.p or not self.q or not self.ded:
            raise MemoryError()
        self.nded = 0
        self.ncosets = 1
        for x in range(self.nc):
            self.table[x] = -1
        self.p[0] = 0
        self.steps = 0
        self.overflow = False

    def __dealloc__(self):
        free(self.table)
        free(self.p)
        free(self.q)
        free(self.ded)

    cdef inline void push_ded(self, int c, int x):
        if self.nded <= self.max_ded:
            self.ded[self.nded] = c * self.nc + x
            self.nded += 1

    cdef int rep(self, int c):
        cdef int r = c, nxt
        while self.p[r] != r:
            r = self.p[r]
        while self.p[c] != r:
            nxt = self.p[c]
            self.p[c] = r
            c = nxt
        return r

    cdef void merge(self, int k, int l, int* qlen):
        k = self.rep(k)
        l = self.rep(l)
        if k != l:
            if k > l:
                k, l = l, k
            self.p[l] = k
            self.q[qlen[0]] = l
            qlen[0] += 1

    cdef void coincidence(self, int a, int b):
        cdef int qlen = 0, i = 0, g, x, d, mu, nu
        cdef int nc = self.nc
        cdef int* t = self.table
        self.merge(a, b, &qlen)
        while i < qlen:
            g = self.q[i]
            i += 1
            for x in range(nc):
                d = t[g * nc + x]
                if d < 0:
                    continue
                t[d * nc + self.inv[x]] = -1
                mu = self.rep(g)
                nu = self.rep(d)
                if t[mu * nc + x] >= 0:
                    self.merge(nu, t[mu * nc + x], &qlen)
                elif t[nu * nc + self.inv[x]] >= 0:
                    self.merge(mu, t[nu * nc + self.inv[x]], &qlen)
                else:
                    t[mu * nc + x] = nu
                    t[nu * nc + self.inv[x]] = mu
                    self.push_ded(mu, x)

    cdef bint define(self, int c, int x):
        cdef int d, y, newcap
        if self.ncosets >= self.max_cosets:
            self.overflow = True
            return False
        if self.ncosets == self.capacity:
            newcap = self.capacity * 2
            if newcap > self.max_cosets:
                newcap = self.max_cosets
            self.table = <int*>realloc(self.table, <size_t>newcap * self.nc * sizeof(int))
            self.p = <int*>realloc(self.p, newcap * sizeof(int))
            self.q = <int*>realloc(self.q, newcap * sizeof(int))
            if not self.table or not self.p or not self.q:
                raise MemoryError()
            self.capacity = newcap
        d = self.ncosets
        self.ncosets += 1
        for y in range(self.nc):
            self.table[d * self.nc + y] = -1
        self.p[d] = d
        self.table[c * self.nc + x] = d
        self.table[d * self.nc + self.inv[x]] = c
        self.push_ded(c, x)
        return True

    cdef bint scan(self, int c, int* w, int n, bint fill) except -1:
        cdef int nc = self.nc
        cdef int f = c, b = c, i = 0, j = n - 1
        cdef int* t
        while True:
            t = self.table
            while i <= j and t[f * nc + w[i]] >= 0:
                f = t[f * nc + w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return True
            while j >= i and t[b * nc + self.inv[w[j]]] >= 0:
                b = t[b * nc + self.inv[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                t[f * nc + w[i]] = b
                t[b * nc + self.inv[w[i]]] = f
                self.push_ded(f, w[i])
                return True
            if not fill:
                return True
            if not self.define(f, w[i]):
                return False

    cdef bint process_deductions(self) except -1:
        cdef int e, c, x, d, k
        cdef int nc = self.nc
        while self.nded > 0:
            if self.nded > self.max_ded:
                self.nded = 0
                return True
            self.nded -= 1
            e = self.ded[self.nded]
            c = e // nc
            x = e % nc
            if self.p[c] != c:
                continue
            for k in range(self.col_first[x], self.col_first[x + 1]):
                self.steps += 1
                self.scan(c, self.rot.data + self.rot.off[k], self.rot.length[k], False)
                if self.p[c] != c:
                    break
            d = self.table[c * nc + x]
            if d >= 0 and self.p[d] == d:
                for k in range(self.col_first[self.inv[x]], self.col_first[self.inv[x] + 1]):
                    self.steps += 1
                    self.scan(d, self.rot.data + self.rot.off[k], self.rot.length[k], False)
                    if self.p[d] != d:
                        break
        return True

    def run(self, list subgens):
        cdef int c, x, k
        cdef int nc = self.nc
        cdef _Words sub = _Words(subgens)
        for k in range(sub.count):
            if not self.scan(0, sub.data + sub.off[k], sub.length[k], True):
                raise Overflow("max_cosets")
            self.process_deductions()
        c = 0
        while c < self.ncosets:
            if self.p[c] == c:
                for k in range(self.rels.count):
                    self.steps += 1
                    if self.steps > self.max_steps:
                        raise Overflow("max_steps")
                    if not self.scan(c, self.rels.data + self.rels.off[k], self.rels.length[k], True):
                        raise Overflow("max_cosets")
                    if self.p[c] != c:
                        break
                self.process_deductions()
                if self.p[c] == c:
                    for x in range(nc):
                        if self.table[c * nc + x] < 0:
                            if not self.define(c, x):
                                raise Overflow("max_cosets")
                    self.process_deductions()
            c += 1
        live = [c for c in range(self.ncosets) if self.p[c] == c]
        index = {c: i for i, c in enumerate(live)}
        rows = [[index[self.rep(self.table[c * nc + x])] for x in range(nc)] for c in live]
        return rows, self.steps, self.ncosets


def hlt_enumerate(int ngens, list relators, list rels_by_col, list subgens, int max_cosets, long long max_steps):
    return _HLT(ngens, relators, rels_by_col, max_cosets, max_steps).run(subgens)
