"""Pure-Python (numpy) versions of the elimination kernels.

Same signatures, same in-place semantics and same pivot order as the
compiled module, so either backend produces identical transforms.
"""

from __future__ import annotations

import numpy as np


def _valuations(block: np.ndarray, l: int, k: int) -> np.ndarray:
    val = np.full(block.shape, k, dtype=np.int64)
    nz = block != 0
    val[nz] = 0
    pe = l
    for _ in range(1, k):
        val[nz & (block % pe == 0)] += 1
        pe *= l
    return val


def rref(A: np.ndarray, p: int) -> list[int]:
    rows, cols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv], c:] = A[[piv, r], c:]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[np.ix_(hit, np.arange(c, cols))] = (
                A[hit, c:] - np.outer(col[hit], A[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return pivots


def snf_local(A: np.ndarray, l: int, k: int, U: np.ndarray, V: np.ndarray) -> list[int]:
    rows, cols = A.shape
    m = l**k
    exps: list[int] = []
    for t in range(min(rows, cols)):
        block = A[t:, t:]
        if not block.any():
            break
        val = _valuations(block, l, k)
        best = int(val.min())
        flat = int(np.flatnonzero(val.ravel() == best)[0])
        pr, pc = t + flat // block.shape[1], t + flat % block.shape[1]
        if pr != t:
            A[[t, pr], :] = A[[pr, t], :]
            U[[t, pr], :] = U[[pr, t], :]
        if pc != t:
            A[:, [t, pc]] = A[:, [pc, t]]
            V[:, [t, pc]] = V[:, [pc, t]]
        pe = l**best
        inv = pow(int(A[t, t]) // pe, -1, m)
        if inv != 1:
            A[t, :] = (A[t, :] * inv) % m
            U[t, :] = (U[t, :] * inv) % m
        q = A[t + 1 :, t] // pe
        hit = np.flatnonzero(q)
        if hit.size:
            rows_hit = t + 1 + hit
            A[rows_hit, t:] = (A[rows_hit, t:] - np.outer(q[hit], A[t, t:])) % m
            U[rows_hit, :] = (U[rows_hit, :] - np.outer(q[hit], U[t, :])) % m
        q = A[t, t + 1 :] // pe
        hit = np.flatnonzero(q)
        if hit.size:
            cols_hit = t + 1 + hit
            A[t, cols_hit] = 0
            V[:, cols_hit] = (V[:, cols_hit] - np.outer(V[:, t], q[hit])) % m
        exps.append(best)
    return exps
