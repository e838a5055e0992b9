"""Graded Chevalley-Eilenberg cohomology.

The complex is C^q(G, V)(m): alternating q-linear maps from G to V sending
inputs of total degree d to degree d - m.  V is a graded Lie algebra on
which G acts through a degree-preserving homomorphism rho, g.v = [rho(g), v];
the adjoint case is V = G, rho = id.  Both G and V are the truncated
(nilpotent quotient) algebras, so brackets above the truncation are zero.

Differential (standard alternating convention, 1-based positions):

    d c(l_1..l_{q+1}) = sum_{s<t} (-1)^{s+t} c([l_s, l_t], l_1..^s..^t..)
                      + sum_u (-1)^{u+1} l_u . c(l_1..^u..)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .coeff import dense_nullspace, dense_rref, dense_solve, mat_mul
from .graded_lie import GradedLieAlgebra, GradedLieHom, LieElement, bracket

MAX_ARITY = 4  # complexes are built up to C^4 so that H^3 is available


def _sort_sign(t: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """(sign, sorted tuple) for distinct entries; sign 0 when an entry repeats."""
    lst = list(t)
    if len(set(lst)) != len(lst):
        return 0, ()
    sign = 1
    for i in range(len(lst)):  # insertion sort counting transpositions
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(lst)


class CEComplex:
    """C^*(G, V) with V = target of ``rho`` (adjoint complex when rho is None)."""

    def __init__(self, G: GradedLieAlgebra, rho: GradedLieHom | None = None) -> None:
        G.ring.require_field("Chevalley-Eilenberg cohomology")
        if rho is None:
            rho = GradedLieHom.identity(G)
        if rho.source is not G:
            raise ValueError("rho must have G as its source")
        self.G = G
        self.V = rho.target
        self.rho = rho
        if self.V.ring != G.ring:
            raise ValueError("source and target over different rings")
        self.p = G.ring.l

    @property
    def is_adjoint(self) -> bool:
        return self.V is self.G

    @cached_property
    def action(self) -> np.ndarray:
        """A[i] is the matrix of v -> rho(e_i) . v (columns = images)."""
        n, d = self.G.dim, self.V.dim
        A = np.zeros((n, d, d), dtype=np.int64)
        for i in range(n):
            A[i] = self.V.ad_matrix(self.rho.matrix[:, i])
        return A

    # ----------------------------------------------------------- bases
    def domain_tuples(self, q: int) -> list[tuple[int, ...]]:
        return list(combinations(range(self.G.dim), q))

    def tuple_degree(self, I: Sequence[int]) -> int:
        return sum(self.G.degrees[i] for i in I)

    def basis(self, q: int, m: int) -> list[tuple[tuple[int, ...], int]]:
        """Coordinates of C^q(m): (increasing input tuple, output basis index)."""
        if not 0 <= q <= MAX_ARITY:
            raise ValueError(f"arity {q} unsupported (0..{MAX_ARITY})")
        out = []
        by_deg: dict[int, list[int]] = {}
        for k, d in enumerate(self.V.degrees):
            by_deg.setdefault(d, []).append(k)
        for I in self.domain_tuples(q):
            for k in by_deg.get(self.tuple_degree(I) - m, []):
                out.append((I, k))
        return out

    def dim(self, q: int, m: int) -> int:
        return len(self.basis(q, m))

    def _index(self, q: int, m: int) -> dict[tuple[tuple[int, ...], int], int]:
        key = (q, m)
        cache = self.__dict__.setdefault("_index_cache", {})
        if key not in cache:
            cache[key] = {b: i for i, b in enumerate(self.basis(q, m))}
        return cache[key]

    # ------------------------------------------------------ differential
    def matrix(self, q: int, m: int) -> np.ndarray:
        """Matrix of d: C^q(m) -> C^{q+1}(m) in the coordinates of ``basis``."""
        cache = self.__dict__.setdefault("_matrix_cache", {})
        if (q, m) in cache:
            return cache[(q, m)]
        cols = self._index(q, m)
        rows = self._index(q + 1, m)
        T = self.G.structure_tensor
        A = self.action
        D = np.zeros((len(rows), len(cols)), dtype=np.int64)
        p = self.p
        row_outputs: dict[tuple[int, ...], list[int]] = {}
        for J, k in rows:
            row_outputs.setdefault(J, []).append(k)
        for J, outs in row_outputs.items():
            for s in range(len(J)):
                for t in range(s + 1, len(J)):
                    rest = J[:s] + J[s + 1 : t] + J[t + 1 :]
                    sgn = -1 if (s + t) % 2 else 1
                    for c in np.flatnonzero(T[J[s], J[t]]):
                        sg, I = _sort_sign((int(c),) + rest)
                        if not sg:
                            continue
                        coef = sgn * sg * int(T[J[s], J[t], c])
                        for k in outs:
                            col = cols.get((I, k))
                            if col is not None:
                                r = rows[(J, k)]
                                D[r, col] = (D[r, col] + coef) % p
            for u in range(len(J)):
                rest = J[:u] + J[u + 1 :]
                sgn = -1 if u % 2 else 1
                Au = A[J[u]]
                for k in outs:
                    r = rows[(J, k)]
                    for j in np.flatnonzero(Au[k]):
                        col = cols.get((rest, int(j)))
                        if col is not None:
                            D[r, col] = (D[r, col] + sgn * int(Au[k, j])) % p
        cache[(q, m)] = D
        return D

    # ------------------------------------------------------- cochains
    def cochain(self, q: int, m: int, vector: Sequence[int] | np.ndarray | None = None) -> Cochain:
        n = self.dim(q, m)
        v = np.zeros(n, dtype=np.int64) if vector is None else np.asarray(vector, dtype=np.int64) % self.p
        if v.shape != (n,):
            raise ValueError(f"expected a vector of length {n}")
        return Cochain(self, q, m, v)

    def cochain_from_values(self, q: int, m: int, values: Mapping[tuple[int, ...], LieElement | Sequence[int]]) -> Cochain:
        """Build from values on input tuples (any order; alternating extension)."""
        idx = self._index(q, m)
        v = np.zeros(len(idx), dtype=np.int64)
        for I, val in values.items():
            sg, S = _sort_sign(I)
            if not sg:
                continue
            vec = val.to_vector() if isinstance(val, LieElement) else np.asarray(val, dtype=np.int64)
            for k in np.flatnonzero(vec % self.p):
                pos = idx.get((S, int(k)))
                if pos is None:
                    raise ValueError(f"value on {I} has a component of the wrong degree")
                v[pos] = (v[pos] + sg * int(vec[k])) % self.p
        return Cochain(self, q, m, v)

    def random_cochain(self, q: int, m: int, rng: np.random.Generator) -> Cochain:
        return self.cochain(q, m, rng.integers(0, self.p, size=self.dim(q, m)))

    def differential(self, c: Cochain) -> Cochain:
        """d c by direct evaluation on basis tuples (independent of ``matrix``)."""
        G, V = self.G, self.V
        q, m = c.q, c.m
        values: dict[tuple[int, ...], LieElement] = {}
        overflow = False
        for J in self.domain_tuples(q + 1):
            out_deg = self.tuple_degree(J) - m
            if not 1 <= out_deg <= V.truncation:
                continue
            args = [LieElement(G, {j: 1}) for j in J]
            acc = V.zero()
            for s in range(q + 1):
                for t in range(s + 1, q + 1):
                    br = bracket(args[s], args[t])
                    rest = args[:s] + args[s + 1 : t] + args[t + 1 :]
                    term = c.evaluate([br] + rest)
                    acc = acc + term if (s + t) % 2 == 0 else acc - term
            for u in range(q + 1):
                inner = c.evaluate(args[:u] + args[u + 1 :])
                term = bracket(self.rho(args[u]), inner)
                overflow = overflow or term.overflow
                acc = acc + term if u % 2 == 0 else acc - term
            if not acc.is_zero():
                values[J] = acc
        out = self.cochain_from_values(q + 1, m, values)
        return Cochain(self, q + 1, m, out.vector, overflow)

    # ------------------------------------------------------ cohomology
    def cohomology(self, q: int, m: int) -> CohomologyGroup:
        if not 0 <= q <= 3:
            raise ValueError("only q <= 3 is supported")
        p = self.p
        n = self.dim(q, m)
        Dq = self.matrix(q, m)
        Z = _rows(dense_nullspace(Dq, p), n)
        if q > 0 and self.dim(q - 1, m):
            Bgen = self.matrix(q - 1, m).T  # rows span the coboundaries
            B, bpiv = dense_rref(Bgen, p)
            B = B[: len(bpiv)]
        else:
            B, bpiv = np.zeros((0, n), dtype=np.int64), []
        B = _rows(B, n)
        reps = _rows(_complement(Z, B, bpiv, p), n)
        return CohomologyGroup(self, q, m, Z, B, tuple(bpiv), reps)

    def cup_product(self, a: Cochain, b: Cochain) -> Cochain:
        """(a u b)(x, y) = [a x, b y] - [a y, b x] for 1-cochains."""
        if a.complex is not self or b.complex is not self:
            raise ValueError("cochains from a different complex")
        if a.q != 1 or b.q != 1:
            raise ValueError("cup product is implemented on 1-cochains")
        values = {}
        for I in self.domain_tuples(2):
            x, y = (LieElement(self.G, {i: 1}) for i in I)
            val = bracket(a.evaluate([x]), b.evaluate([y])) - bracket(a.evaluate([y]), b.evaluate([x]))
            if not val.is_zero():
                values[I] = val
        return self.cochain_from_values(2, a.m + b.m, values)


def _rows(X: np.ndarray, n: int) -> np.ndarray:
    return X if X.size else np.zeros((0, n), dtype=np.int64)


def _reduce(v: np.ndarray, R: np.ndarray, piv: Sequence[int], p: int) -> np.ndarray:
    v = v % p
    for row, c in zip(R, piv):
        if v[c]:
            v = (v - v[c] * row) % p
    return v


def _complement(Z: np.ndarray, B: np.ndarray, bpiv: Sequence[int], p: int) -> np.ndarray:
    """Canonical representatives of Z / B: reduce Z mod B's echelon form, then RREF."""
    if not len(Z):
        return np.zeros((0, Z.shape[1] if Z.ndim == 2 else 0), dtype=np.int64)
    red = np.array([_reduce(z, B, bpiv, p) for z in Z], dtype=np.int64)
    R, piv = dense_rref(red, p)
    return R[: len(piv)]


@dataclass(frozen=True, eq=False)
class Cochain:
    complex: CEComplex
    q: int
    m: int
    vector: np.ndarray
    overflow: bool = False

    def value(self, I: Sequence[int]) -> LieElement:
        """Value on a tuple of G basis indices."""
        sg, S = _sort_sign(I)
        V = self.complex.V
        if not sg:
            return V.zero()
        idx = self.complex._index(self.q, self.m)
        acc = {}
        for k in range(V.dim):
            pos = idx.get((S, k))
            if pos is not None and self.vector[pos]:
                acc[k] = sg * int(self.vector[pos])
        return LieElement(V, acc)

    def evaluate(self, args: Sequence[LieElement]) -> LieElement:
        """Multilinear evaluation on arbitrary elements of G."""
        if len(args) != self.q:
            raise ValueError(f"expected {self.q} arguments")
        V = self.complex.V
        if self.q == 0:
            return self.value(())
        acc = V.zero()
        supports = [list(a.coeffs.items()) for a in args]

        def rec(pos: int, idx: tuple[int, ...], coef: int) -> None:
            nonlocal acc
            if pos == self.q:
                val = self.value(idx)
                if not val.is_zero():
                    acc = acc + coef * val
                return
            for i, c in supports[pos]:
                if i not in idx:
                    rec(pos + 1, idx + (i,), coef * c)

        rec(0, (), 1)
        return acc

    def is_zero(self) -> bool:
        return not (self.vector % self.complex.p).any()

    def __add__(self, other: Cochain) -> Cochain:
        self._check(other)
        return Cochain(self.complex, self.q, self.m, (self.vector + other.vector) % self.complex.p)

    def __sub__(self, other: Cochain) -> Cochain:
        self._check(other)
        return Cochain(self.complex, self.q, self.m, (self.vector - other.vector) % self.complex.p)

    def __rmul__(self, s: int) -> Cochain:
        return Cochain(self.complex, self.q, self.m, (s * self.vector) % self.complex.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.complex is other.complex
            and (self.q, self.m) == (other.q, other.m)
            and not ((self.vector - other.vector) % self.complex.p).any()
        )

    def __hash__(self) -> int:
        return hash((self.q, self.m, tuple(self.vector)))

    def _check(self, other: Cochain) -> None:
        if other.complex is not self.complex or (self.q, self.m) != (other.q, other.m):
            raise ValueError("cochains live in different spaces")


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """H^q(m) with cocycles Z, coboundary echelon basis B and representatives.

    Representatives are the reduced echelon basis of Z taken modulo B in
    B's pivot coordinates; they are canonical for the chosen basis of C^q(m).
    """

    complex: CEComplex
    q: int
    m: int
    cocycles: np.ndarray
    coboundaries: np.ndarray
    coboundary_pivots: tuple[int, ...]
    reps: np.ndarray
    exact_through: int = field(default=0)

    def __post_init__(self) -> None:
        if not self.exact_through:
            object.__setattr__(self, "exact_through", min(self.complex.G.truncation, self.complex.V.truncation))

    @property
    def dim(self) -> int:
        return len(self.reps)

    @cached_property
    def _rep_pivots(self) -> list[int]:
        return [int(np.flatnonzero(r)[0]) for r in self.reps]

    def representatives(self) -> list[Cochain]:
        return [self.complex.cochain(self.q, self.m, r) for r in self.reps]

    def representative(self, coords: Sequence[int]) -> Cochain:
        p = self.complex.p
        v = np.zeros(self.complex.dim(self.q, self.m), dtype=np.int64)
        for c, r in zip(coords, self.reps):
            v = (v + int(c) * r) % p
        return self.complex.cochain(self.q, self.m, v)

    def is_cocycle(self, c: Cochain) -> bool:
        D = self.complex.matrix(self.q, self.m)
        return not mat_mul(D, c.vector, self.complex.p).any() if D.size else True

    def coordinates(self, c: Cochain) -> tuple[int, ...]:
        """Class of a cocycle in the basis of representatives."""
        if (c.q, c.m) != (self.q, self.m) or c.complex is not self.complex:
            raise ValueError("cochain from a different space")
        if not self.is_cocycle(c):
            raise ValueError("cochain is not closed")
        p = self.complex.p
        v = _reduce(c.vector, self.coboundaries, self.coboundary_pivots, p)
        coords = tuple(int(v[pc]) for pc in self._rep_pivots)
        rest = v.copy()
        for a, r in zip(coords, self.reps):
            rest = (rest - a * r) % p
        if rest.any():  # pragma: no cover - guarded by is_cocycle
            raise ArithmeticError("cocycle not in span of representatives")
        return coords

    def is_coboundary(self, c: Cochain) -> bool:
        return self.is_cocycle(c) and not any(self.coordinates(c))

    def primitive(self, c: Cochain) -> Cochain | None:
        """Some b with d b = c, or None."""
        if self.q == 0:
            return None if not c.is_zero() else self.complex.cochain(0, self.m)
        D = self.complex.matrix(self.q - 1, self.m)
        if not D.size:
            return self.complex.cochain(self.q - 1, self.m) if c.is_zero() else None
        x = dense_solve(D, c.vector, self.complex.p)
        return None if x is None else self.complex.cochain(self.q - 1, self.m, x)


def cohomology(L: GradedLieAlgebra, q: int, m: int) -> CohomologyGroup:
    """H^q(L, L)(m) of the nilpotent quotient L / L^{>N}."""
    return adjoint_complex(L).cohomology(q, m)


def adjoint_complex(L: GradedLieAlgebra) -> CEComplex:
    """The adjoint complex of L, cached on L so classes from separate calls are comparable."""
    C = L.__dict__.get("_adjoint_complex")
    if C is None:
        C = L.__dict__["_adjoint_complex"] = CEComplex(L)
    return C


def cup_product(a: Cochain, b: Cochain) -> Cochain:
    return a.complex.cup_product(a, b)


def cup_class(H1: CohomologyGroup, H2: CohomologyGroup, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Coordinates in H2 of the cup product of two H1 classes given by coordinates."""
    if H1.complex is not H2.complex:
        raise ValueError("classes from different complexes")
    c = cup_product(H1.representative(a), H1.representative(b))
    return H2.coordinates(c)


__all__ = [
    "CEComplex",
    "Cochain",
    "CohomologyGroup",
    "cohomology",
    "adjoint_complex",
    "cup_product",
    "cup_class",
]
