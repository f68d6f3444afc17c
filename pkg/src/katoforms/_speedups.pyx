# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels: sparse F_p polynomial arithmetic and Gaussian
elimination.  Mirrors ``_fallback`` exactly; see there for the contracts.

cdivision stays off so that ``%`` keeps Python sign semantics.
"""


def poly_add(dict a, dict b, int p):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef long c, s
    for exp, cv in b.items():
        c = cv
        prev = out.get(exp)
        if prev is None:
            s = c % p
        else:
            s = ((<long> prev) + c) % p
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def poly_mul(dict a, dict b, int p):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef long ca, cb, s
    cdef Py_ssize_t i, n
    cdef tuple ea, eb
    cdef list acc
    for ea, cav in a.items():
        ca = cav
        n = len(ea)
        for eb, cbv in b.items():
            cb = cbv
            acc = []
            for i in range(n):
                acc.append((<long> ea[i]) + (<long> eb[i]))
            exp = tuple(acc)
            prev = out.get(exp)
            if prev is None:
                s = (ca * cb) % p
            else:
                s = ((<long> prev) + ca * cb) % p
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
    return out


def gauss_solve(list rows, list rhs, int p):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return []
    cdef Py_ssize_t m = len(<list> rows[0])
    cdef list a = []
    cdef list b = []
    cdef Py_ssize_t i, j, col, r, piv
    cdef long inv, f
    cdef list ri, rr, arow, src
    for i in range(n):
        src = <list> rows[i]
        arow = []
        for j in range(m):
            arow.append((<long> src[j]) % p)
        a.append(arow)
        b.append((<long> rhs[i]) % p)
    cdef list pivot_cols = []
    r = 0
    for col in range(m):
        piv = -1
        for i in range(r, n):
            if (<list> a[i])[col]:
                piv = i
                break
        if piv < 0:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        rr = <list> a[r]
        inv = pow(<object> rr[col], p - 2, p)
        if inv != 1:
            for j in range(m):
                rr[j] = ((<long> rr[j]) * inv) % p
            b[r] = ((<long> b[r]) * inv) % p
        for i in range(n):
            if i == r:
                continue
            ri = <list> a[i]
            f = ri[col]
            if f:
                for j in range(col, m):
                    ri[j] = ((<long> ri[j]) - f * (<long> rr[j])) % p
                b[i] = ((<long> b[i]) - f * (<long> b[r])) % p
        pivot_cols.append(col)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if (<long> b[i]) % p:
            return None
    cdef list x = [0] * m
    for i in range(len(pivot_cols)):
        j = pivot_cols[i]
        x[j] = b[i]
    return x
