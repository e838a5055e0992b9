"""Exact arithmetic and linear algebra over Z/l^k.

``CoeffRing`` carries the modulus, ``ModMatrix`` is a sparse immutable matrix
over it.  The heavy lifting (row reduction over F_l, Smith form over the
local ring Z/l^k) is done by the kernels picked in ``_backend``; the
``dense_*`` helpers are the numpy-level entry points used by the rest of the
package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._backend import kernels

# products of two reduced entries must fit in int64
MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class CoeffRing:
    """The ring Z/l^k; ``k == 1`` is the prime field F_l."""

    l: int
    k: int = 1

    def __post_init__(self) -> None:
        if not is_prime(self.l):
            raise ValueError(f"l={self.l} is not prime")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.l**self.k >= MAX_MODULUS:
            raise ValueError(f"modulus {self.l}^{self.k} too large (limit 2^31)")

    @property
    def modulus(self) -> int:
        return self.l**self.k

    @property
    def is_field(self) -> bool:
        return self.k == 1

    def reduce(self, x: int) -> int:
        return int(x) % self.modulus

    def valuation(self, x: int) -> int:
        """l-adic valuation of x, capped at k (so 0 has valuation k)."""
        x = self.reduce(x)
        if x == 0:
            return self.k
        e = 0
        while x % self.l == 0:
            x //= self.l
            e += 1
        return e

    def is_unit(self, x: int) -> bool:
        return self.reduce(x) % self.l != 0

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit in {self}")
        return pow(self.reduce(x), -1, self.modulus)

    def require_field(self, what: str) -> None:
        if not self.is_field:
            raise ValueError(f"{what} needs a field coefficient ring, got {self}")

    def __str__(self) -> str:
        return f"F_{self.l}" if self.k == 1 else f"Z/{self.l}^{self.k}"


class ModMatrix:
    """Sparse matrix over a ``CoeffRing``; entries kept as a sorted coordinate list."""

    __slots__ = ("ring", "rows", "cols", "_entries")

    def __init__(
        self,
        ring: CoeffRing,
        rows: int,
        cols: int,
        entries: Mapping[tuple[int, int], int] | Iterable[tuple[tuple[int, int], int]] = (),
    ) -> None:
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[tuple[int, int], int] = {}
        for (r, c), v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            acc[(r, c)] = (acc.get((r, c), 0) + int(v)) % ring.modulus
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self._entries = tuple(sorted((rc, v) for rc, v in acc.items() if v))

    @classmethod
    def from_dense(cls, ring: CoeffRing, array: Sequence[Sequence[int]] | np.ndarray) -> ModMatrix:
        a = np.asarray(array, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        a = a % ring.modulus
        rs, cs = np.nonzero(a)
        return cls(ring, a.shape[0], a.shape[1], [((int(r), int(c)), int(a[r, c])) for r, c in zip(rs, cs)])

    @classmethod
    def zeros(cls, ring: CoeffRing, rows: int, cols: int) -> ModMatrix:
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring: CoeffRing, n: int) -> ModMatrix:
        return cls(ring, n, n, [((i, i), 1) for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(self._entries)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (r, c), v in self._entries:
            a[r, c] = v
        return a

    def transpose(self) -> ModMatrix:
        return ModMatrix(self.ring, self.cols, self.rows, [((c, r), v) for (r, c), v in self._entries])

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} for {self.rows}x{self.cols} matrix")
        out = [0] * self.rows
        for (r, c), v in self._entries:
            out[r] += v * int(vector[c])
        m = self.ring.modulus
        return tuple(x % m for x in out)

    def __matmul__(self, other: ModMatrix) -> ModMatrix:
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other._entries:
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for (r, mid), v in self._entries:
            for c, w in by_row.get(mid, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return ModMatrix(self.ring, self.rows, other.cols, acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModMatrix):
            return NotImplemented
        return (self.ring, self.shape, self._entries) == (other.ring, other.shape, other._entries)

    def __hash__(self) -> int:
        return hash((self.ring, self.shape, self._entries))

    def __repr__(self) -> str:
        return f"ModMatrix({self.ring}, {self.rows}x{self.cols}, nnz={self.nnz})"


@dataclass(frozen=True)
class SmithForm:
    """``left @ M @ right == diag(diagonal)`` with ``left``, ``right`` invertible.

    Each diagonal entry is l^e for some e < k, or 0.  ``precision_flag`` is set
    when k > 1 and some divisor is 0: over Z_l that divisor could be any
    multiple of l^k, so the Z_l-rank is not determined at this precision.
    """

    ring: CoeffRing
    diagonal: tuple[int, ...]
    left: ModMatrix
    right: ModMatrix

    @property
    def rank(self) -> int:
        """Number of unit elementary divisors."""
        return sum(1 for d in self.diagonal if d == 1)

    @property
    def nonzero_count(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def torsion(self) -> tuple[int, ...]:
        """Nonzero, non-unit divisors."""
        return tuple(d for d in self.diagonal if d not in (0, 1))

    @property
    def precision_flag(self) -> bool:
        return self.ring.k > 1 and any(d == 0 for d in self.diagonal)


def mat_mul(A: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    """(A @ B) mod m without int64 overflow."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[-1] if A.ndim else 1
    if inner * (m - 1) ** 2 < 2**62:
        return (A @ B) % m
    return ((A.astype(object) @ B.astype(object)) % m).astype(np.int64)


def _as_array(a: np.ndarray | Sequence[Sequence[int]], modulus: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.int64) % modulus)


def dense_smith(A: np.ndarray, ring: CoeffRing) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Smith form of a dense array: (divisor exponents, U, V) with U A V diagonal."""
    work = _as_array(A, ring.modulus)
    if work.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = work.shape
    U = np.eye(rows, dtype=np.int64)
    V = np.eye(cols, dtype=np.int64)
    exps = kernels.snf_local(work, ring.l, ring.k, U, V)
    return list(exps), U, V


def smith_normal_form(M: ModMatrix) -> SmithForm:
    ring = M.ring
    exps, U, V = dense_smith(M.to_dense(), ring)
    n = min(M.rows, M.cols)
    diagonal = tuple(ring.l**e for e in exps) + (0,) * (n - len(exps))
    return SmithForm(ring, diagonal, ModMatrix.from_dense(ring, U), ModMatrix.from_dense(ring, V))


def dense_rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    work = _as_array(A, p)
    if work.size == 0:
        return work.reshape(work.shape), []
    pivots = kernels.rref(work, p)
    return work, list(pivots)


def dense_rank(A: np.ndarray, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(dense_rref(A, p)[1])


def dense_nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of {x : A x = 0} over F_p (free-variable basis)."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = dense_rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = (-R[i, f]) % p
    return basis


def dense_row_basis(A: np.ndarray, p: int) -> np.ndarray:
    """Reduced echelon basis of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, pivots = dense_rref(A, p)
    return R[: len(pivots)].copy()


def dense_solve(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of A x = b over F_p (free variables set to 0), or None.

    ``b`` may be a matrix of right-hand sides; then all must be solvable.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    rows, cols = A.shape
    if B.shape[0] != rows:
        raise ValueError(f"right-hand side has {B.shape[0]} rows, matrix has {rows}")
    aug = np.concatenate([A % p, B % p], axis=1)
    R, pivots = dense_rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    X = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X[pc] = R[i, cols:]
    return X[:, 0] if vector else X


def kernel_basis(M: ModMatrix) -> list[tuple[int, ...]]:
    """Basis of {v : M v = 0}; field case only."""
    if not M.ring.is_field:
        raise ValueError("kernel_basis needs k = 1; use smith_normal_form for Z/l^k")
    return [tuple(int(x) for x in row) for row in dense_nullspace(M.to_dense(), M.ring.l)]


def rank(M: ModMatrix) -> int:
    """Rank over F_l, or the number of unit elementary divisors over Z/l^k."""
    if M.ring.is_field:
        return dense_rank(M.to_dense(), M.ring.l)
    return smith_normal_form(M).rank


def solve(M: ModMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """A solution of M x = b, or None when there is none.

    Over a field the free variables are zero; over Z/l^k the solution comes
    from the Smith form with the smallest non-negative quotient per
    coordinate and free coordinates zero.
    """
    ring = M.ring
    if len(b) != M.rows:
        raise ValueError(f"right-hand side of length {len(b)} for {M.rows}x{M.cols} matrix")
    bvec = np.array([ring.reduce(x) for x in b], dtype=np.int64)
    if ring.is_field:
        x = dense_solve(M.to_dense(), bvec, ring.l)
        return None if x is None else tuple(int(v) for v in x)
    exps, U, V = dense_smith(M.to_dense(), ring)
    m = ring.modulus
    c = mat_mul(U, bvec, m) if M.rows else bvec
    y = np.zeros(M.cols, dtype=np.int64)
    for i in range(M.rows):
        if i < len(exps):
            pe = ring.l ** exps[i]
            if c[i] % pe:
                return None
            y[i] = (c[i] // pe) % (m // pe)
        elif c[i]:
            return None
    x = mat_mul(V, y, m) if M.cols else y
    return tuple(int(v) for v in x)


__all__ = [
    "CoeffRing",
    "ModMatrix",
    "SmithForm",
    "smith_normal_form",
    "kernel_basis",
    "solve",
    "rank",
    "dense_rank",
    "dense_rref",
    "dense_nullspace",
    "dense_row_basis",
    "dense_solve",
    "dense_smith",
    "is_prime",
    "mat_mul",
]
