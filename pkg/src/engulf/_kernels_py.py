"""Pure-Python search kernels.

Tables are flat lists, row-major: entry ``table[c * ncols + x]`` is the image
of coset ``c`` under column ``x`` or -1.  Columns ``0..k-1`` are the
generators, ``k..2k-1`` their inverses.  ``_kernels.pyx`` mirrors this module
function for function; both must return identical results.
"""


class Overflow(Exception):
    pass


def _scan(table, nc, inv, start, end, w, queue):
    """Trace ``w`` from ``start`` expecting to arrive at ``end``.

    Returns False on a contradiction.  A single-letter gap is filled and the
    new entry is pushed onto ``queue``.
    """
    n = len(w)
    f = start
    i = 0
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
        nxt = table[b * nc + inv[w[j]]]
        if nxt < 0:
            break
        b = nxt
        j -= 1
    if j < i:
        return f == b
    if j == i:
        x = w[i]
        table[f * nc + x] = b
        table[b * nc + inv[x]] = f
        queue.append(f * nc + x)
        queue.append(b * nc + inv[x])
    return True


def _propagate(table, nc, inv, rels_by_col, constraints, queue):
    while True:
        while queue:
            e = queue.pop()
            c, x = divmod(e, nc)
            for r in rels_by_col[x]:
                if not _scan(table, nc, inv, c, c, r, queue):
                    return False
        for w in constraints:
            if not _scan(table, nc, inv, 0, 0, w, queue):
                return False
        if not queue:
            return True


def root_state(ngens, max_index, rels_by_col, constraints):
    """Initial one-coset state after propagation, or None if inconsistent."""
    nc = 2 * ngens
    inv = [(x + ngens) % nc for x in range(nc)]
    table = [-1] * (max_index * nc)
    if not _propagate(table, nc, inv, rels_by_col, constraints, []):
        return None
    return table, 1, 0


def _first_undefined(table, n, nc, start):
    end = n * nc
    while start < end and table[start] >= 0:
        start += 1
    return start


def expand(ngens, max_index, rels_by_col, constraints, state):
    """One branching step.

    Returns ``(children, attempted, finished)``: consistent child states,
    the number of branches tried, and the completed table if ``state`` has
    no undefined entry (else None).
    """
    table, n, start = state
    nc = 2 * ngens
    inv = [(x + ngens) % nc for x in range(nc)]
    pos = _first_undefined(table, n, nc, start)
    if pos == n * nc:
        return [], 0, (n, tuple(table[: n * nc]))
    c, x = divmod(pos, nc)
    ix = inv[x]
    children = []
    attempted = 0
    for d in range(n + 1 if n < max_index else n):
        if d < n and table[d * nc + ix] >= 0:
            continue
        attempted += 1
        child = table[:]
        child[pos] = d
        child[d * nc + ix] = c
        m = n + 1 if d == n else n
        if _propagate(child, nc, inv, rels_by_col, constraints, [pos, d * nc + ix]):
            children.append((child, m, pos + 1))
    return children, attempted, None


def search(ngens, max_index, rels_by_col, constraints, state, max_nodes):
    """Exhaust the subtree below ``state``.

    Returns ``(tables, nodes, complete)`` where ``tables`` is a list of
    ``(degree, flat_table)`` in depth-first order.
    """
    nc = 2 * ngens
    inv = [(x + ngens) % nc for x in range(nc)]
    found = []
    nodes = 0

    def rec(table, n, start):
        nonlocal nodes
        pos = start
        end = n * nc
        while pos < end and table[pos] >= 0:
            pos += 1
        if pos == end:
            found.append((n, tuple(table[:end])))
            return True
        c, x = divmod(pos, nc)
        ix = inv[x]
        top = n + 1 if n < max_index else n
        for d in range(top):
            if d < n and table[d * nc + ix] >= 0:
                continue
            nodes += 1
            if nodes > max_nodes:
                return False
            child = table[:]
            child[pos] = d
            child[d * nc + ix] = c
            if _propagate(child, nc, inv, rels_by_col, constraints, [pos, d * nc + ix]):
                if not rec(child, n + 1 if d == n else n, pos + 1):
                    return False
        return True

    table, n, start = state
    complete = rec(table, n, start)
    return found, min(nodes, max_nodes), complete


def hlt_enumerate(ngens, relators, rels_by_col, subgens, max_cosets, max_steps):
    """HLT coset enumeration with deduction processing and coincidences.

    Returns ``(rows, steps, total_defined)`` with ``rows`` the live part of
    the table renumbered in order of coset number; raises Overflow when a
    limit is hit.
    """
    nc = 2 * ngens
    inv = [(x + ngens) % nc for x in range(nc)]
    table = [[-1] * nc]
    p = [0]
    deductions = []
    steps = 0
    max_deductions = 4096

    def rep(c):
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def merge(k, l, q):
        k = rep(k)
        l = rep(l)
        if k != l:
            if k > l:
                k, l = l, k
            p[l] = k
            q.append(l)

    def coincidence(a, b):
        q = []
        merge(a, b, q)
        i = 0
        while i < len(q):
            g = q[i]
            i += 1
            row = table[g]
            for x in range(nc):
                d = row[x]
                if d < 0:
                    continue
                table[d][inv[x]] = -1
                mu = rep(g)
                nu = rep(d)
                if table[mu][x] >= 0:
                    merge(nu, table[mu][x], q)
                elif table[nu][inv[x]] >= 0:
                    merge(mu, table[nu][inv[x]], q)
                else:
                    table[mu][x] = nu
                    table[nu][inv[x]] = mu
                    deductions.append((mu, x))

    def define(c, x):
        if len(table) >= max_cosets:
            raise Overflow("max_cosets")
        d = len(table)
        table.append([-1] * nc)
        p.append(d)
        table[c][x] = d
        table[d][inv[x]] = c
        deductions.append((c, x))

    def scan(c, w, fill):
        n = len(w)
        f = b = c
        i, j = 0, n - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][inv[w[j]]] >= 0:
                b = table[b][inv[w[j]]]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][inv[w[i]]] = f
                deductions.append((f, w[i]))
                return
            if not fill:
                return
            define(f, w[i])

    def process_deductions():
        nonlocal steps
        while deductions:
            if len(deductions) > max_deductions:
                # dropping deductions is safe: the main loop rescans every coset
                deductions.clear()
                return
            c, x = deductions.pop()
            if p[c] != c:
                continue
            for r in rels_by_col[x]:
                steps += 1
                scan(c, r, False)
                if p[c] != c:
                    break
            d = table[c][x]
            if d >= 0 and p[d] == d:
                for r in rels_by_col[inv[x]]:
                    steps += 1
                    scan(d, r, False)
                    if p[d] != d:
                        break

    for w in subgens:
        scan(0, w, True)
        process_deductions()
    c = 0
    while c < len(table):
        if p[c] == c:
            for r in relators:
                steps += 1
                if steps > max_steps:
                    raise Overflow("max_steps")
                scan(c, r, True)
                if p[c] != c:
                    break
            process_deductions()
            if p[c] == c:
                for x in range(nc):
                    if table[c][x] < 0:
                        define(c, x)
                process_deductions()
        c += 1

    live = [c for c in range(len(table)) if p[c] == c]
    index = {c: i for i, c in enumerate(live)}
    rows = [[index[rep(table[c][x])] for x in range(nc)] for c in live]
    return rows, steps, len(table)
