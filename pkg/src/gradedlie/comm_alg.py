"""Finite local commutative algebras over F_l and their low-degree cohomology.

An ArtinAlgebra has basis e_0 = 1, e_1..e_{n-1}, the latter spanning the
maximal ideal.  Cochains are normalized (they only see the maximal ideal):

    C^1 = Hom(m, M),  C^2 = symmetric bilinear maps m x m -> M,
    C^3 = trilinear maps m x m x m -> M,

with d1 psi(a,b) = a psi(b) - psi(ab) + b psi(a) and
d2 phi(a,b,c) = a phi(b,c) - phi(ab,c) + phi(a,bc) - c phi(a,b).
A symmetric 2-cocycle phi is the extension A + M with product
(a,u)(b,v) = (ab, av + bu + phi(a,b)); replacing the section by
u -> u + psi(b) changes phi by -d1 psi.

Relative groups for f: A -> B use the cone of f^*: pairs (phi, lam) where
lam: m_A -> M is the correction of the structure map a -> (f a, lam a).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .coeff import CoeffRing, dense_nullspace, dense_rank, dense_rref, dense_solve, mat_mul


# ------------------------------------------------------------------ algebras
class ArtinAlgebra:
    """Local commutative F_l-algebra given by a multiplication tensor.

    ``mult[i, j, k]`` is the coefficient of e_k in e_i e_j.  The first basis
    element is the unit and the rest span the maximal ideal.
    """

    def __init__(self, ring: CoeffRing, labels: Sequence[str], mult: np.ndarray, name: str = "") -> None:
        ring.require_field("ArtinAlgebra")
        self.ring = ring
        self.p = ring.l
        self.labels = tuple(labels)
        self.mult = np.asarray(mult, dtype=np.int64) % self.p
        self.name = name
        n = len(self.labels)
        if n < 1:
            raise ValueError("an Artin algebra has at least the unit")
        if self.mult.shape != (n, n, n):
            raise ValueError("multiplication tensor has the wrong shape")
        problems = self.check()
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def ideal_dim(self) -> int:
        return self.dim - 1

    def check(self) -> list[str]:
        p, M, n = self.p, self.mult, self.dim
        out = []
        e0 = np.zeros(n, dtype=np.int64)
        e0[0] = 1
        if not (M[0] == np.eye(n, dtype=np.int64)).all() or not (M[:, 0] == np.eye(n, dtype=np.int64)).all():
            out.append("e_0 is not a unit")
        if not (M == M.transpose(1, 0, 2)).all():
            out.append("not commutative")
        left = np.einsum("ijk,klm->ijlm", M, M) % p  # (e_i e_j) e_l
        right = np.einsum("jlk,ikm->ijlm", M, M) % p  # e_i (e_j e_l)
        if not (left == right).all():
            out.append("not associative")
        if M[1:, 1:, 0].any():
            out.append("maximal ideal is not closed under products")
        if not out:
            power = np.eye(n, dtype=np.int64)[1:]
            for _ in range(n):
                if not power.size:
                    break
                power = self._product_span(power)
            if power.size:
                out.append("maximal ideal is not nilpotent")
        return out

    def _product_span(self, rows: np.ndarray) -> np.ndarray:
        prods = [self.multiply(r, np.eye(self.dim, dtype=np.int64)[j]) for r in rows for j in range(1, self.dim)]
        prods = [v for v in prods if v.any()]
        if not prods:
            return np.zeros((0, self.dim), dtype=np.int64)
        R, piv = dense_rref(np.array(prods), self.p)
        return R[: len(piv)]

    def multiply(self, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    @cached_property
    def ideal_mult(self) -> np.ndarray:
        """Products inside m, in m-coordinates: shape (d, d, d), d = dim m."""
        return self.mult[1:, 1:, 1:]

    def cotangent_dim(self) -> int:
        """dim m / m^2."""
        return self.ideal_dim - len(self.square_ideal())

    def square_ideal(self) -> np.ndarray:
        """Echelon basis of m^2 in m-coordinates."""
        d = self.ideal_dim
        sq = self.mult[1:, 1:, 1:].reshape(d * d, d)
        if not sq.any():
            return np.zeros((0, self.ideal_dim), dtype=np.int64)
        R, piv = dense_rref(sq, self.p)
        return R[: len(piv)]

    def nilpotency_index(self) -> int:
        """Smallest r with m^r = 0."""
        power = np.eye(self.dim, dtype=np.int64)[1:]
        r = 1
        while power.size:
            power = self._product_span(power)
            r += 1
        return r

    def is_square_zero(self) -> bool:
        return not self.mult[1:, 1:].any()

    def quotient(self, ideal_rows: np.ndarray, name: str = "") -> tuple[ArtinAlgebra, LocalHom]:
        """A / I for an ideal I inside m, with the projection."""
        p, n = self.p, self.dim
        W = np.asarray(ideal_rows, dtype=np.int64).reshape(-1, n) % p
        if W.size and W[:, 0].any():
            raise ValueError("ideal must lie in the maximal ideal")
        if W.size and W.any():
            R, piv = dense_rref(W, p)
            R = R[: len(piv)]
        else:
            R, piv = np.zeros((0, n), dtype=np.int64), []
        for r in R:  # closed under multiplication by A
            for j in range(n):
                v = self.multiply(r, np.eye(n, dtype=np.int64)[j])
                if dense_rank(np.vstack([R, v]), p) != len(R):
                    raise ValueError("subspace is not an ideal")
        keep = [i for i in range(n) if i not in set(piv)]
        proj = np.zeros((len(keep), n), dtype=np.int64)
        for j in range(n):
            v = np.eye(n, dtype=np.int64)[j]
            for row, c in zip(R, piv):
                if v[c]:
                    v = (v - v[c] * row) % p
            proj[:, j] = v[keep]
        mult = np.zeros((len(keep),) * 3, dtype=np.int64)
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                mult[a, b] = mat_mul(proj, self.mult[i, j], p)
        Q = ArtinAlgebra(self.ring, [self.labels[i] for i in keep], mult, name or f"{self.name}/I")
        return Q, LocalHom(self, Q, proj)

    # constructors ---------------------------------------------------
    @classmethod
    def residue_field(cls, ring: CoeffRing) -> ArtinAlgebra:
        return cls(ring, ["1"], np.ones((1, 1, 1), dtype=np.int64), "k")

    @classmethod
    def truncated_polynomial(cls, ring: CoeffRing, variables: Sequence[str], degree: int, name: str = "") -> ArtinAlgebra:
        """k[x_1..x_r] / (x_1..x_r)^{degree+1}: monomials of total degree <= degree."""
        r = len(variables)
        monos = [e for d in range(degree + 1) for e in _exponents(r, d)]
        index = {e: i for i, e in enumerate(monos)}
        n = len(monos)
        mult = np.zeros((n, n, n), dtype=np.int64)
        for i, a in enumerate(monos):
            for j, b in enumerate(monos):
                c = tuple(x + y for x, y in zip(a, b))
                if c in index:
                    mult[i, j, index[c]] = 1
        labels = [_mono_label(e, variables) for e in monos]
        return cls(ring, labels, mult, name or f"k[{','.join(variables)}]/deg>{degree}")

    @classmethod
    def polynomial_mod_power(cls, ring: CoeffRing, var: str, n: int) -> ArtinAlgebra:
        """k[t]/t^n."""
        return cls.truncated_polynomial(ring, [var], n - 1, f"k[{var}]/{var}^{n}")

    @classmethod
    def square_zero(cls, ring: CoeffRing, variables: Sequence[str], name: str = "") -> ArtinAlgebra:
        """k + V with V^2 = 0 (so k[eps] for one variable)."""
        return cls.truncated_polynomial(ring, variables, 1 if variables else 0, name or f"k+<{','.join(variables)}>")

    @classmethod
    def from_products(
        cls, ring: CoeffRing, labels: Sequence[str], products: dict[tuple[str, str], dict[str, int]], name: str = ""
    ) -> ArtinAlgebra:
        """Unit is labels[0]; unspecified products of ideal elements are zero."""
        idx = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        mult = np.zeros((n, n, n), dtype=np.int64)
        for i in range(n):
            mult[0, i, i] = mult[i, 0, i] = 1
        for (u, v), val in products.items():
            for w, c in val.items():
                mult[idx[u], idx[v], idx[w]] = c
                mult[idx[v], idx[u], idx[w]] = c
        return cls(ring, labels, mult, name)

    def __repr__(self) -> str:
        return f"ArtinAlgebra({self.name or '?'}, dim={self.dim})"


def _exponents(r: int, d: int) -> list[tuple[int, ...]]:
    if r == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in _exponents(r - 1, d - first):
            out.append((first,) + rest)
    return out


def _mono_label(e: Sequence[int], variables: Sequence[str]) -> str:
    parts = [v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k]
    return "*".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class LocalHom:
    """Unital local algebra map; column j is the image of source e_j."""

    source: ArtinAlgebra
    target: ArtinAlgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        S, T = self.source, self.target
        mat = np.asarray(self.matrix, dtype=np.int64) % S.p
        object.__setattr__(self, "matrix", mat)
        if mat.shape != (T.dim, S.dim):
            raise ValueError("matrix shape does not match the algebras")
        if mat[0, 0] != 1 or mat[1:, 0].any():
            raise ValueError("map is not unital")
        if mat[0, 1:].any():
            raise ValueError("map is not local")
        for i in range(S.dim):
            for j in range(S.dim):
                lhs = mat_mul(mat, S.mult[i, j], S.p)
                rhs = T.multiply(mat[:, i], mat[:, j])
                if ((lhs - rhs) % S.p).any():
                    raise ValueError("map is not multiplicative")

    @property
    def ideal_matrix(self) -> np.ndarray:
        """Restriction m_source -> m_target in ideal coordinates."""
        return self.matrix[1:, 1:]

    def __call__(self, x: Sequence[int]) -> np.ndarray:
        return mat_mul(self.matrix, np.asarray(x, dtype=np.int64), self.source.p)

    def compose(self, other: LocalHom) -> LocalHom:
        """self after other."""
        if other.target is not self.source:
            raise ValueError("maps are not composable")
        return LocalHom(other.source, self.target, mat_mul(self.matrix, other.matrix, self.source.p))

    @classmethod
    def identity(cls, A: ArtinAlgebra) -> LocalHom:
        return cls(A, A, np.eye(A.dim, dtype=np.int64))

    @classmethod
    def structure(cls, A: ArtinAlgebra) -> LocalHom:
        """k -> A."""
        k = ArtinAlgebra.residue_field(A.ring)
        mat = np.zeros((A.dim, 1), dtype=np.int64)
        mat[0, 0] = 1
        return cls(k, A, mat)

    @classmethod
    def augmentation(cls, A: ArtinAlgebra, k: ArtinAlgebra | None = None) -> LocalHom:
        k = k or ArtinAlgebra.residue_field(A.ring)
        mat = np.zeros((1, A.dim), dtype=np.int64)
        mat[0, 0] = 1
        return cls(A, k, mat)


@dataclass(frozen=True, eq=False)
class AModule:
    """Finite module: ``act[i]`` is the matrix of multiplication by e_i."""

    algebra: ArtinAlgebra
    act: np.ndarray

    def __post_init__(self) -> None:
        A = self.algebra
        act = np.asarray(self.act, dtype=np.int64) % A.p
        object.__setattr__(self, "act", act)
        d = act.shape[1] if act.ndim == 3 else -1
        if act.shape != (A.dim, d, d):
            raise ValueError("action tensor has the wrong shape")
        if not (act[0] == np.eye(d, dtype=np.int64)).all():
            raise ValueError("unit does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = mat_mul(act[i], act[j], A.p)
                rhs = np.einsum("k,kab->ab", A.mult[i, j], act) % A.p
                if ((lhs - rhs) % A.p).any():
                    raise ValueError("not a module: action is not multiplicative")

    @property
    def dim(self) -> int:
        return self.act.shape[1]

    @property
    def killed_by_ideal(self) -> bool:
        return not self.act[1:].any()

    @classmethod
    def residue(cls, A: ArtinAlgebra, dim: int = 1) -> AModule:
        """k^dim with m acting by zero."""
        act = np.zeros((A.dim, dim, dim), dtype=np.int64)
        act[0] = np.eye(dim, dtype=np.int64)
        return cls(A, act)

    @classmethod
    def regular(cls, A: ArtinAlgebra) -> AModule:
        return cls(A, A.mult.transpose(0, 2, 1))

    def restrict(self, f: LocalHom) -> AModule:
        """Module over f.source through f."""
        if f.target is not self.algebra:
            raise ValueError("module is not over the target of f")
        act = np.einsum("ks,kab->sab", f.matrix, self.act) % self.algebra.p
        return AModule(f.source, act)


# -------------------------------------------------------- cochain spaces
def _sym_pairs(d: int) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(d), 2))


def c1_dim(A: ArtinAlgebra, M: AModule) -> int:
    return A.ideal_dim * M.dim


def c2_dim(A: ArtinAlgebra, M: AModule) -> int:
    return len(_sym_pairs(A.ideal_dim)) * M.dim


def c1_tensor(A: ArtinAlgebra, M: AModule, v: np.ndarray) -> np.ndarray:
    """psi[a, :] = psi(m_a) as a (d, dim M) array."""
    return np.asarray(v, dtype=np.int64).reshape(A.ideal_dim, M.dim)


def c2_tensor(A: ArtinAlgebra, M: AModule, v: np.ndarray) -> np.ndarray:
    d = A.ideal_dim
    out = np.zeros((d, d, M.dim), dtype=np.int64)
    v = np.asarray(v, dtype=np.int64).reshape(-1, M.dim)
    for t, (a, b) in enumerate(_sym_pairs(d)):
        out[a, b] = out[b, a] = v[t]
    return out


def c2_vector(A: ArtinAlgebra, M: AModule, phi: np.ndarray) -> np.ndarray:
    return np.array([phi[a, b] for a, b in _sym_pairs(A.ideal_dim)], dtype=np.int64).reshape(-1) % A.p


def d1_apply(A: ArtinAlgebra, M: AModule, psi: np.ndarray) -> np.ndarray:
    """(d1 psi)(a, b) on ideal basis pairs, as a (d, d, dim M) array."""
    act = M.act[1:]
    am = A.ideal_mult
    out = np.einsum("aij,bj->abi", act, psi) + np.einsum("bij,aj->abi", act, psi) - np.einsum("abc,ci->abi", am, psi)
    return out % A.p


def d2_apply(A: ArtinAlgebra, M: AModule, phi: np.ndarray) -> np.ndarray:
    act = M.act[1:]
    am = A.ideal_mult
    out = (
        np.einsum("aij,bcj->abci", act, phi)
        - np.einsum("abe,eci->abci", am, phi)
        + np.einsum("bce,aei->abci", am, phi)
        - np.einsum("cij,abj->abci", act, phi)
    )
    return out % A.p


def d1_matrix(A: ArtinAlgebra, M: AModule) -> np.ndarray:
    n1 = c1_dim(A, M)
    cols = [c2_vector(A, M, d1_apply(A, M, c1_tensor(A, M, e))) for e in np.eye(n1, dtype=np.int64)]
    return np.array(cols, dtype=np.int64).T.reshape(c2_dim(A, M), n1)


def d2_matrix(A: ArtinAlgebra, M: AModule) -> np.ndarray:
    n2 = c2_dim(A, M)
    n3 = A.ideal_dim**3 * M.dim
    cols = [d2_apply(A, M, c2_tensor(A, M, e)).reshape(-1) for e in np.eye(n2, dtype=np.int64)]
    return np.array(cols, dtype=np.int64).T.reshape(n3, n2)


# ------------------------------------------------------------ quotients
@dataclass(frozen=True, eq=False)
class Subquotient:
    """Z / B inside a coordinate space, with canonical representatives."""

    cocycles: np.ndarray  # rows
    boundaries: np.ndarray  # echelon rows
    boundary_pivots: tuple[int, ...]
    reps: np.ndarray
    p: int

    @property
    def dim(self) -> int:
        return len(self.reps)

    @property
    def ambient(self) -> int:
        return self.cocycles.shape[1]

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        for row, c in zip(self.boundaries, self.boundary_pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    @cached_property
    def _rep_pivots(self) -> list[int]:
        return [int(np.flatnonzero(r)[0]) for r in self.reps]

    def contains(self, v: np.ndarray) -> bool:
        if not len(self.cocycles):
            return not (np.asarray(v) % self.p).any()
        return dense_rank(np.vstack([self.cocycles, v]), self.p) == len(self.cocycles)

    def coordinates(self, v: np.ndarray) -> tuple[int, ...]:
        if not self.contains(v):
            raise ValueError("vector is not a cocycle")
        r = self._reduce(v)
        coords = tuple(int(r[c]) for c in self._rep_pivots)
        for a, rep in zip(coords, self.reps):
            r = (r - a * rep) % self.p
        if r.any():  # pragma: no cover
            raise ArithmeticError("cocycle not in span of representatives")
        return coords

    def representative(self, coords: Sequence[int]) -> np.ndarray:
        v = np.zeros(self.ambient, dtype=np.int64)
        for c, r in zip(coords, self.reps):
            v = (v + int(c) * r) % self.p
        return v

    def induced(self, target: Subquotient, cochain_map: np.ndarray) -> np.ndarray:
        """Matrix (target.dim x self.dim) of the map on classes."""
        cols = [target.coordinates(mat_mul(cochain_map, r, self.p)) for r in self.reps]
        return np.array(cols, dtype=np.int64).T.reshape(target.dim, self.dim)


def _as_rows(X: np.ndarray, n: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    if X.size == 0:
        return np.zeros((X.shape[0] if X.ndim == 2 else 0, n), dtype=np.int64)
    return X.reshape(-1, n)


def subquotient(D_out: np.ndarray, D_in: np.ndarray | None, n: int, p: int) -> Subquotient:
    """ker(D_out) / im(D_in) inside F_p^n (D_in may be None)."""
    D_out = _as_rows(D_out, n)
    Z = dense_nullspace(D_out, p) if n else np.zeros((0, 0), dtype=np.int64)
    Z = Z if Z.size else np.zeros((0, n), dtype=np.int64)
    if D_in is not None and np.asarray(D_in).size and np.asarray(D_in).any():
        B, piv = dense_rref(np.asarray(D_in, dtype=np.int64).T, p)
        B = B[: len(piv)]
    else:
        B, piv = np.zeros((0, n), dtype=np.int64), []
    if len(Z):
        red = []
        for z in Z:
            v = z % p
            for row, c in zip(B, piv):
                if v[c]:
                    v = (v - v[c] * row) % p
            red.append(v)
        R, rp = dense_rref(np.array(red), p)
        reps = R[: len(rp)]
    else:
        reps = np.zeros((0, n), dtype=np.int64)
    return Subquotient(Z, _as_rows(B, n), tuple(piv), _as_rows(reps, n), p)


# ------------------------------------------------------------- Harrison
@dataclass(frozen=True, eq=False)
class HarrisonResult:
    algebra: ArtinAlgebra
    module: AModule
    H1: Subquotient
    H2: Subquotient

    @property
    def dims(self) -> tuple[int, int]:
        return self.H1.dim, self.H2.dim

    def h1_maps(self) -> list[np.ndarray]:
        """Derivations m -> M as (d, dim M) arrays."""
        return [c1_tensor(self.algebra, self.module, r) for r in self.H1.reps]

    def h2_cocycles(self) -> list[np.ndarray]:
        """Representative symmetric 2-cocycles as (d, d, dim M) arrays."""
        return [c2_tensor(self.algebra, self.module, r) for r in self.H2.reps]


def harrison(A: ArtinAlgebra, M: AModule | None = None) -> HarrisonResult:
    """H^1 and H^2 of the normalized Harrison complex of A with values in M."""
    M = M or AModule.residue(A)
    if M.algebra is not A:
        raise ValueError("module is over a different algebra")
    p = A.p
    D1 = d1_matrix(A, M)
    D2 = d2_matrix(A, M)
    H1 = subquotient(D1, None, c1_dim(A, M), p)
    H2 = subquotient(D2, D1, c2_dim(A, M), p)
    return HarrisonResult(A, M, H1, H2)


# ------------------------------------------------------ relative Der / Ext
@dataclass(frozen=True, eq=False)
class RelativeCohomology:
    """Der_A(B, M) and Ext_A(B, M) for f: A -> B, via the cone of f^*.

    Cone^1 = Hom(m_B, M); Cone^2 = Sym^2(m_B)* x M  +  Hom(m_A, M).
    """

    f: LocalHom
    module: AModule
    der: Subquotient
    ext: Subquotient
    d1: np.ndarray
    d2: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return self.der.dim, self.ext.dim

    def split_cone2(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        B, M = self.f.target, self.module
        n = c2_dim(B, M)
        return v[:n], v[n:]


def _pullback_c1(f: LocalHom, M: AModule) -> np.ndarray:
    """psi -> psi o f on ideals: Hom(m_B, M) -> Hom(m_A, M)."""
    A, B = f.source, f.target
    F = f.ideal_matrix  # (dB, dA)
    out = np.zeros((A.ideal_dim * M.dim, B.ideal_dim * M.dim), dtype=np.int64)
    for b in range(B.ideal_dim):
        for i in range(M.dim):
            for a in range(A.ideal_dim):
                out[a * M.dim + i, b * M.dim + i] = F[b, a]
    return out % A.p


def _pullback_c2(f: LocalHom, M: AModule) -> np.ndarray:
    """phi -> phi(f., f.) on symmetric 2-cochains."""
    A, B = f.source, f.target
    F = f.ideal_matrix
    n_src, n_tgt = c2_dim(B, M), c2_dim(A, M)
    out = np.zeros((n_tgt, n_src), dtype=np.int64)
    for col, e in enumerate(np.eye(n_src, dtype=np.int64)):
        phi = c2_tensor(B, M, e)
        pulled = np.einsum("xa,yb,xyi->abi", F, F, phi) % A.p
        out[:, col] = c2_vector(A, M, pulled)
    return out


def der_and_ext(f: LocalHom, M: AModule) -> RelativeCohomology:
    """Der_A(B, M) and Ext^inf_A(B, M) for f: A -> B and a B-module M."""
    A, B = f.source, f.target
    if M.algebra is not B:
        raise ValueError("module must be over the target of f")
    p = B.p
    MA = M.restrict(f)
    D1B = d1_matrix(B, M)
    D2B = d2_matrix(B, M)
    F1 = _pullback_c1(f, M)
    F2 = _pullback_c2(f, M)
    D1A = d1_matrix(A, MA)
    n1 = c1_dim(B, M)
    n2b, n1a = c2_dim(B, M), c1_dim(A, MA)
    # d^1 psi = (d1 psi, -f^* psi)
    cone_d1 = np.vstack([D1B, (-F1) % p]).reshape(n2b + n1a, n1) % p
    # d^2 (phi, lam) = (d2 phi, f^* phi + d1_A lam)
    n2a = c2_dim(A, MA)
    top = np.hstack([D2B, np.zeros((D2B.shape[0], n1a), dtype=np.int64)])
    bottom = np.hstack([F2.reshape(n2a, n2b), D1A.reshape(n2a, n1a)])
    cone_d2 = np.vstack([top, bottom]) % p
    der = subquotient(cone_d1, None, n1, p)
    ext = subquotient(cone_d2, cone_d1, n2b + n1a, p)
    return RelativeCohomology(f, M, der, ext, cone_d1, cone_d2)


# --------------------------------------------------------- transitivity
@dataclass(frozen=True)
class ExactnessCheck:
    node: str
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.rank_in == self.dim - self.rank_out


@dataclass(frozen=True, eq=False)
class TransitivitySequence:
    """0 -> Der_B(C) -> Der_A(C) -> Der_A(B) -> Ext_B(C) -> Ext_A(C) -> Ext_A(B)."""

    groups: dict[str, Subquotient]
    maps: dict[str, np.ndarray]  # induced matrices on classes
    checks: tuple[ExactnessCheck, ...]

    @property
    def dims(self) -> dict[str, int]:
        return {k: v.dim for k, v in self.groups.items()}

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.checks)


def _rank(M: np.ndarray, p: int) -> int:
    return dense_rank(M, p) if M.size else 0


def transitivity_sequence(f: LocalHom, g: LocalHom, M: AModule) -> TransitivitySequence:
    """The six-term sequence for A --f--> B --g--> C and a C-module M."""
    if f.target is not g.source:
        raise ValueError("maps are not composable")
    A, B, C = f.source, f.target, g.target
    p = A.p
    gf = g.compose(f)
    MB = M.restrict(g)
    BC = der_and_ext(g, M)
    AC = der_and_ext(gf, M)
    AB = der_and_ext(f, MB)
    nC1, nB1 = c1_dim(C, M), c1_dim(B, MB)
    nC2, nB2 = c2_dim(C, M), c2_dim(B, MB)
    nA1 = c1_dim(A, M.restrict(gf))
    G1 = _pullback_c1(g, M)  # Hom(m_C, M) -> Hom(m_B, M)
    G2 = _pullback_c2(g, M)
    F1 = _pullback_c1(f, MB)  # Hom(m_B, M) -> Hom(m_A, M)

    inc = np.eye(nC1, dtype=np.int64)
    restrict = G1
    # Der_A(B) -> Ext_B(C): D -> (0, D)
    connect = np.vstack([np.zeros((nC2, nB1), dtype=np.int64), np.eye(nB1, dtype=np.int64)])
    # Ext_B(C) -> Ext_A(C): (phi, lam) -> (phi, lam o f)
    push = np.block([[np.eye(nC2, dtype=np.int64), np.zeros((nC2, nB1), dtype=np.int64)],
                     [np.zeros((nA1, nC2), dtype=np.int64), F1]]).reshape(nC2 + nA1, nC2 + nB1)
    # Ext_A(C) -> Ext_A(B): (phi, lam) -> (g^* phi, lam)
    pull = np.block([[G2, np.zeros((nB2, nA1), dtype=np.int64)],
                     [np.zeros((nA1, nC2), dtype=np.int64), np.eye(nA1, dtype=np.int64)]]).reshape(nB2 + nA1, nC2 + nA1)

    groups = {
        "Der_B(C)": BC.der,
        "Der_A(C)": AC.der,
        "Der_A(B)": AB.der,
        "Ext_B(C)": BC.ext,
        "Ext_A(C)": AC.ext,
        "Ext_A(B)": AB.ext,
    }
    maps = {
        "Der_B(C)->Der_A(C)": BC.der.induced(AC.der, inc),
        "Der_A(C)->Der_A(B)": AC.der.induced(AB.der, restrict),
        "Der_A(B)->Ext_B(C)": AB.der.induced(BC.ext, connect),
        "Ext_B(C)->Ext_A(C)": BC.ext.induced(AC.ext, push),
        "Ext_A(C)->Ext_A(B)": AC.ext.induced(AB.ext, pull),
    }
    order = list(groups)
    names = list(maps)
    # injectivity at the first node: rank_out must equal dim
    checks = [ExactnessCheck(order[0], groups[order[0]].dim, 0, _rank(maps[names[0]], p), True)]
    for t in range(1, 5):
        a, b = maps[names[t - 1]], maps[names[t]]
        comp = mat_mul(b, a, p) if a.size and b.size else np.zeros((b.shape[0], a.shape[1]), dtype=np.int64)
        dim = groups[order[t]].dim
        checks.append(ExactnessCheck(order[t], dim, _rank(a, p), _rank(b, p), not comp.any()))
    return TransitivitySequence(groups, maps, tuple(checks))


# -------------------------------------------------------- small extensions
@dataclass(frozen=True, eq=False)
class SmallExtension:
    """B = A + M with M killed by m_A and M^2 = 0, given by a 2-cocycle.

    ``cocycle`` is a symmetric (d, d, r) array on the ideal of A; the total
    algebra and the projection are built on demand.
    """

    base: ArtinAlgebra
    cocycle: np.ndarray
    kernel_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        A = self.base
        phi = np.asarray(self.cocycle, dtype=np.int64) % A.p
        object.__setattr__(self, "cocycle", phi)
        r = phi.shape[2] if phi.ndim == 3 else -1
        if phi.shape != (A.ideal_dim, A.ideal_dim, r):
            raise ValueError("cocycle has the wrong shape")
        if not (phi == phi.transpose(1, 0, 2)).all():
            raise ValueError("cocycle is not symmetric")
        M = AModule.residue(A, r)
        if d2_apply(A, M, phi).any():
            raise ValueError("cocycle is not closed (extension not associative)")
        if not self.kernel_labels:
            object.__setattr__(self, "kernel_labels", tuple(f"u{i + 1}" for i in range(r)))

    @property
    def kernel_dim(self) -> int:
        return self.cocycle.shape[2]

    @cached_property
    def total(self) -> ArtinAlgebra:
        A, phi, r = self.base, self.cocycle, self.kernel_dim
        n = A.dim
        N = n + r
        mult = np.zeros((N, N, N), dtype=np.int64)
        mult[:n, :n, :n] = A.mult
        mult[1:n, 1:n, n:] = phi
        for u in range(n, N):
            mult[0, u, u] = mult[u, 0, u] = 1
        return ArtinAlgebra(A.ring, list(A.labels) + list(self.kernel_labels), mult, f"{A.name}+ext")

    @cached_property
    def projection(self) -> LocalHom:
        n = self.base.dim
        mat = np.zeros((n, n + self.kernel_dim), dtype=np.int64)
        mat[:, :n] = np.eye(n, dtype=np.int64)
        return LocalHom(self.total, self.base, mat)

    def kernel_rows(self) -> np.ndarray:
        n = self.base.dim
        return np.eye(n + self.kernel_dim, dtype=np.int64)[n:]

    def push_forward(self, h: np.ndarray) -> SmallExtension:
        """Extension by M' along a linear map h: M -> M' (matrix dim M' x dim M)."""
        h = np.asarray(h, dtype=np.int64)
        phi = np.einsum("ji,abi->abj", h, self.cocycle) % self.base.p
        return SmallExtension(self.base, phi)

    @classmethod
    def from_algebra(cls, E: ArtinAlgebra, pi: LocalHom) -> SmallExtension:
        """Normal form of a surjection pi: E -> A whose kernel is killed by m_E."""
        A = pi.target
        p = A.p
        P = pi.matrix
        if dense_rank(P, p) != A.dim:
            raise ValueError("map is not surjective")
        K = dense_nullspace(P, p)  # kernel rows in E-coordinates
        r = len(K)
        for k in K:
            for j in range(1, E.dim):
                if E.multiply(k, np.eye(E.dim, dtype=np.int64)[j]).any():
                    raise ValueError("kernel is not killed by the maximal ideal")
        # k-linear section s: A -> E, unital and local
        s = dense_solve(P, np.eye(A.dim, dtype=np.int64), p)
        s[:, 0] = np.eye(E.dim, dtype=np.int64)[0]
        basis = np.vstack([s.T, K]) if r else s.T
        # coordinates w.r.t. (section images, kernel basis)
        coords_of = lambda v: dense_solve(basis.T, v, p)  # noqa: E731
        phi = np.zeros((A.ideal_dim, A.ideal_dim, r), dtype=np.int64)
        for a in range(1, A.dim):
            for b in range(1, A.dim):
                prod = E.multiply(s[:, a], s[:, b])
                c = coords_of(prod)
                phi[a - 1, b - 1] = c[A.dim :]
        return cls(A, phi)

    def equivalent(self, other: SmallExtension) -> bool:
        """Same class: the cocycles differ by a coboundary (identity on A and M)."""
        if other.base is not self.base or other.kernel_dim != self.kernel_dim:
            return False
        A = self.base
        M = AModule.residue(A, self.kernel_dim)
        diff = c2_vector(A, M, (self.cocycle - other.cocycle) % A.p)
        D1 = d1_matrix(A, M)
        if not D1.size:
            return not diff.any()
        return dense_solve(D1, diff, A.p) is not None


@dataclass(frozen=True, eq=False)
class UniversalExtension:
    """A + Ext(A, k)' built from the representative cocycles f_1..f_h."""

    base: ArtinAlgebra
    harrison: HarrisonResult
    extension: SmallExtension

    @property
    def kernel_dim(self) -> int:
        return self.extension.kernel_dim

    def classify(self, E: SmallExtension) -> ClassifyingMap:
        """The linear map h: Ext' -> M with E equivalent to the push-forward along h.

        Solved as a linear system in (h, psi); ``unique`` reports whether the
        h-part of the solution space is a single point.
        """
        if E.base is not self.base:
            raise ValueError("extension of a different algebra")
        A, p = self.base, self.base.p
        r, hdim = E.kernel_dim, self.kernel_dim
        M = AModule.residue(A, r)
        n2 = c2_dim(A, M)
        cols = []
        for j in range(r):
            for i in range(hdim):  # h[j, i]
                e = np.zeros((r, hdim), dtype=np.int64)
                e[j, i] = 1
                cols.append(c2_vector(A, M, self.extension.push_forward(e).cocycle))
        H = np.array(cols, dtype=np.int64).T.reshape(n2, r * hdim)
        D1 = d1_matrix(A, M)
        system = np.hstack([H, (-D1) % p]) if D1.size else H
        rhs = c2_vector(A, M, E.cocycle)
        x = dense_solve(system, rhs, p) if system.size else (None if rhs.any() else np.zeros(0, dtype=np.int64))
        if x is None:
            raise ArithmeticError("extension is not classified (should not happen)")
        null = dense_nullspace(system, p) if system.size else np.zeros((0, 0), dtype=np.int64)
        unique = not (null[:, : r * hdim] % p).any() if null.size else True
        return ClassifyingMap(x[: r * hdim].reshape(r, hdim) % p, unique)


@dataclass(frozen=True)
class ClassifyingMap:
    h: np.ndarray
    unique: bool


def universal_small_extension(A: ArtinAlgebra, prefix: str = "x") -> UniversalExtension:
    """The extension of A by Ext(A, k)' whose cocycle is sum_i f_i u_i."""
    har = harrison(A)
    cocycles = har.h2_cocycles()
    d = A.ideal_dim
    if cocycles:
        phi = np.stack([f[:, :, 0] for f in cocycles], axis=2)
    else:
        phi = np.zeros((d, d, 0), dtype=np.int64)
    ext = SmallExtension(A, phi, tuple(f"{prefix}{i + 1}'" for i in range(phi.shape[2])))
    return UniversalExtension(A, har, ext)


def enumerate_extension_classes(A: ArtinAlgebra, r: int = 1) -> list[SmallExtension]:
    """All small extensions of A by k^r up to equivalence, by brute force.

    Enumerates every symmetric 2-cochain, keeps the associative ones, and
    groups them by exhaustively searching sections psi.  Only usable for tiny
    algebras over small fields.
    """
    p = A.p
    M = AModule.residue(A, r)
    n2, n1 = c2_dim(A, M), c1_dim(A, M)
    if p ** n2 > 50000 or p ** n1 > 5000:
        raise ValueError("enumeration budget exceeded")
    cocycles = []
    for v in product(range(p), repeat=n2):
        phi = c2_tensor(A, M, np.array(v, dtype=np.int64))
        if not d2_apply(A, M, phi).any():
            cocycles.append(phi)
    shifts = [d1_apply(A, M, c1_tensor(A, M, np.array(w, dtype=np.int64))) for w in product(range(p), repeat=n1)]
    classes: list[np.ndarray] = []
    for phi in cocycles:
        if not any(not ((phi - c - s) % p).any() for c in classes for s in shifts):
            classes.append(phi)
    return [SmallExtension(A, c) for c in classes]


__all__ = [
    "ArtinAlgebra",
    "LocalHom",
    "AModule",
    "Subquotient",
    "subquotient",
    "HarrisonResult",
    "harrison",
    "RelativeCohomology",
    "der_and_ext",
    "ExactnessCheck",
    "TransitivitySequence",
    "transitivity_sequence",
    "SmallExtension",
    "UniversalExtension",
    "ClassifyingMap",
    "universal_small_extension",
    "enumerate_extension_classes",
    "d1_matrix",
    "d2_matrix",
    "d1_apply",
    "d2_apply",
]
