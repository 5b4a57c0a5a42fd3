"""Pure-Python fallback for the compiled kernels (same signatures and results)."""


def neumann_series(indptr, indices, data, b, max_terms, tol):
    """Accumulate x = sum_{m < max_terms} T^m b for a CSR matrix T.

    `b` is a list of rows (one per unknown, each a list of floats). Returns
    (x, terms_used, last_norm) where last_norm is the max-abs entry of the
    last term added. Stops early once a term falls below `tol`.
    """
    nrows = len(indptr) - 1
    dim = len(b[0]) if nrows else 0
    term = [list(row) for row in b]
    x = [list(row) for row in b]
    last = max((abs(v) for row in term for v in row), default=0.0)
    used = 1
    while used < max_terms and last > tol:
        nxt = [[0.0] * dim for _ in range(nrows)]
        for i in range(nrows):
            acc = nxt[i]
            for p in range(indptr[i], indptr[i + 1]):
                coef = data[p]
                src = term[indices[p]]
                for t in range(dim):
                    acc[t] += coef * src[t]
        term = nxt
        last = 0.0
        for i in range(nrows):
            xi, ti = x[i], term[i]
            for t in range(dim):
                v = ti[t]
                xi[t] += v
                if abs(v) > last:
                    last = abs(v)
        used += 1
    return x, used, last
