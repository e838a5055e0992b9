# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled elimination kernels over Z/l^k.

Both routines mutate their array arguments in place and follow exactly the
pivot order of the pure-Python versions in ``_pykernels``.
"""

ctypedef long long i64


cdef inline i64 _mod(i64 a, i64 m) nogil:
    a = a % m
    if a < 0:
        a += m
    return a


cdef i64 _inverse(i64 a, i64 m) nogil:
    cdef i64 t = 0, new_t = 1, r = m, new_r = _mod(a, m), q, tmp
    while new_r != 0:
        q = r // new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    return _mod(t, m)


cdef inline int _valuation(i64 x, i64 l, int k) nogil:
    cdef int e = 0
    if x == 0:
        return k
    while e < k and x % l == 0:
        x = x // l
        e += 1
    return e


def rref(i64[:, ::1] A, i64 p):
    """Reduced row echelon form over F_p, in place; returns pivot columns."""
    cdef Py_ssize_t rows = A.shape[0], cols = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, f
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                f = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = f
        inv = _inverse(A[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                A[r, j] = (A[r, j] * inv) % p
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = A[i, c]
                for j in range(c, cols):
                    if A[r, j] != 0:
                        A[i, j] = _mod(A[i, j] - f * A[r, j], p)
        pivots.append(c)
        r += 1
    return pivots


def snf_local(i64[:, ::1] A, i64 l, int k, i64[:, ::1] U, i64[:, ::1] V):
    """Smith form over the local ring Z/l^k, in place.

    On return ``U @ A0 @ V == A`` (mod l^k) with ``A`` diagonal, each
    diagonal entry equal to l^e.  Returns the list of exponents e of the
    nonzero diagonal entries in order.
    """
    cdef Py_ssize_t rows = A.shape[0], cols = A.shape[1]
    cdef Py_ssize_t t, i, j, pr, pc, n = min(rows, cols)
    cdef i64 m = 1, unit, inv, q, f, pe
    cdef int best, v, e
    for e in range(k):
        m *= l
    exps = []
    for t in range(n):
        best = k
        pr = -1
        pc = -1
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i, j] != 0:
                    v = _valuation(A[i, j], l, k)
                    if v < best:
                        best = v
                        pr = i
                        pc = j
                        if v == 0:
                            break
            if best == 0:
                break
        if pr < 0:
            break
        if pr != t:
            for j in range(cols):
                f = A[t, j]; A[t, j] = A[pr, j]; A[pr, j] = f
            for j in range(U.shape[1]):
                f = U[t, j]; U[t, j] = U[pr, j]; U[pr, j] = f
        if pc != t:
            for i in range(rows):
                f = A[i, t]; A[i, t] = A[i, pc]; A[i, pc] = f
            for i in range(V.shape[0]):
                f = V[i, t]; V[i, t] = V[i, pc]; V[i, pc] = f
        pe = 1
        for e in range(best):
            pe *= l
        unit = A[t, t] // pe
        inv = _inverse(unit, m)
        if inv != 1:
            for j in range(cols):
                A[t, j] = (A[t, j] * inv) % m
            for j in range(U.shape[1]):
                U[t, j] = (U[t, j] * inv) % m
        for i in range(t + 1, rows):
            if A[i, t] != 0:
                q = A[i, t] // pe
                for j in range(t, cols):
                    if A[t, j] != 0:
                        A[i, j] = _mod(A[i, j] - q * A[t, j], m)
                for j in range(U.shape[1]):
                    if U[t, j] != 0:
                        U[i, j] = _mod(U[i, j] - q * U[t, j], m)
        for j in range(t + 1, cols):
            if A[t, j] != 0:
                q = A[t, j] // pe
                A[t, j] = 0
                for i in range(V.shape[0]):
                    if V[i, t] != 0:
                        V[i, j] = _mod(V[i, j] - q * V[i, t], m)
        exps.append(best)
    return exps
