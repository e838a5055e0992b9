"""Graded deformations of Lie algebras and of Lie algebra representations.

A deformation of L (a GradedLieAlgebra over F_l) over an Artin algebra A is
stored as a tensor S[i, j, k, q]: the coefficient of e_k (x) alpha_q in
[e_i, e_j], where alpha_0 = 1 and the other alpha span the maximal ideal.
Setting the ideal to zero must give back L.  Everything is grade 0: S only
connects e_i, e_j to outputs of degree deg e_i + deg e_j.

Sign conventions used throughout: if a bracket is changed by c (x) u with u
killed by the maximal ideal, its Jacobi expression changes by -(d c) (x) u,
and a change of basis id + h (x) u changes c by -(d h).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .cohomology import CEComplex, Cochain, CohomologyGroup, adjoint_complex
from .coeff import dense_nullspace, dense_rank, dense_solve, mat_mul
from .comm_alg import (
    ArtinAlgebra,
    LocalHom,
    SmallExtension,
    universal_small_extension,
)
from .graded_lie import GradedLieAlgebra, GradedLieHom, LieElement

DEFAULT_BUDGET = 1 << 16


class BudgetExceeded(ValueError):
    """Raised instead of returning a partial enumeration."""


# ------------------------------------------------------------ helpers
def cochain_tensor(c: Cochain) -> np.ndarray:
    """Alternating (n, n, n) tensor of a 2-cochain on L with values in L."""
    C = c.complex
    n, d = C.G.dim, C.V.dim
    out = np.zeros((n, n, d), dtype=np.int64)
    for (I, k), v in zip(C.basis(2, c.m), c.vector):
        if v:
            i, j = I
            out[i, j, k] = v
            out[j, i, k] = -v
    return out % C.p


def tensor_cochain(C: CEComplex, q: int, m: int, tensor: np.ndarray) -> Cochain:
    """Read a q-cochain off a dense (n,)*q + (d,) tensor (values on increasing tuples)."""
    vec = [tensor[I][k] for I, k in C.basis(q, m)]
    return C.cochain(q, m, np.array(vec, dtype=np.int64) if vec else None)


def _alternation_problems(S: np.ndarray, p: int) -> list[tuple[int, int]]:
    n = S.shape[0]
    bad = []
    for i in range(n):
        if S[i, i].any():
            bad.append((i, i))
        for j in range(i + 1, n):
            if ((S[i, j] + S[j, i]) % p).any():
                bad.append((i, j))
    return bad


# ---------------------------------------------------------- Lie over A
class LieOverBase:
    """A graded Lie bracket on L (x) A reducing to L modulo the maximal ideal."""

    def __init__(self, bar: GradedLieAlgebra, base: ArtinAlgebra, S: np.ndarray, check_reduction: bool = True) -> None:
        bar.ring.require_field("LieOverBase")
        if base.p != bar.ring.l:
            raise ValueError("base algebra over a different field")
        n, a = bar.dim, base.dim
        S = np.asarray(S, dtype=np.int64) % base.p
        if S.shape != (n, n, n, a):
            raise ValueError(f"bracket tensor must have shape {(n, n, n, a)}")
        self.bar = bar
        self.base = base
        self.p = base.p
        self.S = S
        if check_reduction and ((S[..., 0] - bar.structure_tensor) % self.p).any():
            raise ValueError("bracket does not reduce to the given algebra")
        if _alternation_problems(S, self.p):
            raise ValueError("bracket is not alternating")
        deg = np.array(bar.degrees)
        wrong = (deg[:, None, None] + deg[None, :, None] != deg[None, None, :]) & S.any(axis=3).astype(bool)
        if wrong.any():
            raise ValueError("bracket does not preserve the grading")

    @classmethod
    def trivial(cls, bar: GradedLieAlgebra, base: ArtinAlgebra) -> LieOverBase:
        S = np.zeros((bar.dim,) * 3 + (base.dim,), dtype=np.int64)
        S[..., 0] = bar.structure_tensor
        return cls(bar, base, S)

    @classmethod
    def from_cochains(cls, bar: GradedLieAlgebra, base: ArtinAlgebra, cochains: Sequence[np.ndarray]) -> LieOverBase:
        """[x, y] = [x, y]_bar + sum_q c_q(x, y) alpha_q (c_q as alternating tensors)."""
        if len(cochains) != base.dim - 1:
            raise ValueError("need one cochain per maximal-ideal basis element")
        S = np.zeros((bar.dim,) * 3 + (base.dim,), dtype=np.int64)
        S[..., 0] = bar.structure_tensor
        for q, c in enumerate(cochains, start=1):
            S[..., q] = c
        return cls(bar, base, S)

    @property
    def n(self) -> int:
        return self.bar.dim

    def component(self, q: int) -> np.ndarray:
        return self.S[..., q]

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Bracket of (n, a) arrays (coefficient of e_i (x) alpha_q)."""
        M = self.base.mult
        xy = np.einsum("iq,js,qsu->iju", x, y, M) % self.p
        return np.einsum("iju,ijkt,tuv->kv", xy, self.S, M) % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros((self.n, self.base.dim), dtype=np.int64)
        v[i, 0] = 1
        return v

    @cached_property
    def jacobi_tensor(self) -> np.ndarray:
        """J[i, j, l, r, t]: the Jacobi expression of (e_i, e_j, e_l) in coordinates."""
        S, M, p = self.S, self.base.mult, self.p
        first = np.einsum("ijkq,klrs,qst->ijlrt", S, S, M) % p  # [[e_i, e_j], e_l]
        J = first + first.transpose(1, 2, 0, 3, 4) + first.transpose(2, 0, 1, 3, 4)
        return J % p

    def jacobi_violations(self) -> list[tuple[str, str, str]]:
        J = self.jacobi_tensor
        lab = self.bar.labels
        return [(lab[i], lab[j], lab[l]) for i, j, l in combinations(range(self.n), 3) if J[i, j, l].any()]

    def is_lie(self) -> bool:
        return not self.jacobi_violations()

    def push_forward(self, phi: LocalHom) -> LieOverBase:
        """Base change along phi: A -> B."""
        if phi.source is not self.base:
            raise ValueError("morphism does not start at the base")
        S = np.einsum("ijkq,rq->ijkr", self.S, phi.matrix) % self.p
        return LieOverBase(self.bar, phi.target, S)

    def reduction(self) -> GradedLieAlgebra:
        return self.bar

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieOverBase):
            return NotImplemented
        return self.bar is other.bar and self.base is other.base and not ((self.S - other.S) % self.p).any()

    def __hash__(self) -> int:
        return hash(self.S.tobytes())


# ------------------------------------------------------------ eta
@dataclass(frozen=True, eq=False)
class DeformationStep:
    index: int
    base: ArtinAlgebra
    eta: LieOverBase
    h2: CohomologyGroup
    relations: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=np.int64))
    reduction_map: LocalHom | None = None  # D_index -> D_{index-1}

    def reduces_to(self, previous: DeformationStep) -> bool:
        if self.reduction_map is None:
            return False
        return self.eta.push_forward(self.reduction_map) == previous.eta


def eta_deformation(L: GradedLieAlgebra, mu: Sequence[Cochain] | None = None) -> DeformationStep:
    """The tautological deformation of L over k + H^2(L, L)(0)'.

    ``mu`` picks a closed representative for each basis class of H^2(0)
    (default: the canonical representatives).  Its bracket is
    [x, y] = [x, y]_L + sum_s mu_s(x, y) eps_s.
    """
    C = adjoint_complex(L)
    H = C.cohomology(2, 0)
    if mu is None:
        mu = H.representatives()
    mu = list(mu)
    if len(mu) != H.dim:
        raise ValueError(f"need {H.dim} representatives, got {len(mu)}")
    for s, c in enumerate(mu):
        if c.complex is not C or (c.q, c.m) != (2, 0):
            raise ValueError("representatives must be grade-0 2-cochains on L")
        if not H.is_cocycle(c):
            raise ValueError(f"representative {s} is not closed")
        want = tuple(1 if t == s else 0 for t in range(H.dim))
        if H.coordinates(c) != want:
            raise ValueError(f"representative {s} does not represent basis class {s}")
    base = ArtinAlgebra.square_zero(L.ring, [f"h{s + 1}'" for s in range(H.dim)], "D1")
    eta = LieOverBase.from_cochains(L, base, [cochain_tensor(c) for c in mu])
    return DeformationStep(1, base, eta, H)


# ---------------------------------------------------- isomorphisms
@dataclass(frozen=True, eq=False)
class Isomorphism:
    """theta = id + sum_q h_q alpha_q, with h_q grade-0 linear maps (matrices)."""

    source: LieOverBase
    target: LieOverBase
    corrections: tuple[np.ndarray, ...]

    def matrix(self) -> np.ndarray:
        """theta on basis vectors: T[i, k, q] = coefficient of e_k alpha_q in theta(e_i)."""
        n, a = self.source.n, self.source.base.dim
        T = np.zeros((n, n, a), dtype=np.int64)
        T[:, :, 0] = np.eye(n, dtype=np.int64)
        for q, h in enumerate(self.corrections, start=1):
            T[:, :, q] = h.T
        return T

    def apply(self, x: np.ndarray) -> np.ndarray:
        A = self.source.base
        return np.einsum("iq,iks,qst->kt", x, self.matrix(), A.mult) % A.p

    def verify(self) -> bool:
        L1, L2 = self.source, self.target
        T = self.matrix()
        for i in range(L1.n):
            for j in range(i + 1, L1.n):
                lhs = self.apply(L1.bracket(L1.basis_vector(i), L1.basis_vector(j)))
                if ((lhs - L2.bracket(T[i], T[j])) % L1.p).any():
                    return False
        return True


def find_isomorphism(L1: LieOverBase, L2: LieOverBase) -> Isomorphism | None:
    """An isomorphism id + sum_q h_q alpha_q from L1 to L2 over a square-zero base."""
    if L1.bar is not L2.bar or L1.base is not L2.base:
        raise ValueError("deformations of different algebras or bases")
    A = L1.base
    if not A.is_square_zero():
        raise ValueError("isomorphism search is implemented for square-zero bases")
    C = adjoint_complex(L1.bar)
    D1 = C.matrix(1, 0)
    hs = []
    for q in range(1, A.dim):
        diff = tensor_cochain(C, 2, 0, (L1.S[..., q] - L2.S[..., q]) % L1.p)
        if D1.size:
            x = dense_solve(D1, diff.vector, L1.p)
        else:
            x = None if diff.vector.any() else np.zeros(C.dim(1, 0), dtype=np.int64)
        if x is None:
            return None
        hs.append(_c1_matrix(C, C.cochain(1, 0, x)))
    iso = Isomorphism(L1, L2, tuple(hs))
    return iso


def _c1_matrix(C: CEComplex, c: Cochain) -> np.ndarray:
    """Matrix (columns = images) of a 1-cochain."""
    h = np.zeros((C.V.dim, C.G.dim), dtype=np.int64)
    for (I, k), v in zip(C.basis(1, c.m), c.vector):
        h[k, I[0]] = v
    return h


# ------------------------------------------------------ classification
@dataclass(frozen=True, eq=False)
class Classification:
    morphism: LocalHom  # D_1 -> A
    unique: bool
    isomorphism: Isomorphism


def classify_infinitesimal(L: LieOverBase, step: DeformationStep | None = None) -> Classification:
    """The morphism D_1 -> A pushing eta forward to (a deformation isomorphic to) L."""
    A = L.base
    if not A.is_square_zero():
        raise ValueError("base must have square-zero maximal ideal")
    step = step or eta_deformation(L.bar)
    C = adjoint_complex(L.bar)
    H, p = step.h2, L.p
    r = H.dim
    n2 = C.dim(2, 0)
    Mu = np.zeros((n2, r), dtype=np.int64)
    for s in range(r):
        Mu[:, s] = tensor_cochain(C, 2, 0, step.eta.S[..., s + 1]).vector
    D1 = C.matrix(1, 0).reshape(n2, C.dim(1, 0))
    # unknowns per ideal coordinate q: h[q, s] then nu_q, with sum_s h mu_s - d nu_q = c_q
    system = np.hstack([Mu, (-D1) % p])
    morph = np.zeros((A.dim, step.base.dim), dtype=np.int64)
    morph[0, 0] = 1
    null = dense_nullspace(system, p) if system.size else np.eye(system.shape[1], dtype=np.int64)
    unique = not (null[:, :r] % p).any()
    for q in range(1, A.dim):
        c = tensor_cochain(C, 2, 0, L.S[..., q]).vector
        if system.size:
            x = dense_solve(system, c, p)
        else:
            x = None if c.any() else np.zeros(system.shape[1], dtype=np.int64)
        if x is None:
            raise ValueError("deformation is not closed: Jacobi fails to first order")
        morph[q, 1:] = x[:r]
    phi = LocalHom(step.base, A, morph)
    pushed = step.eta.push_forward(phi)
    iso = find_isomorphism(pushed, L)
    if iso is None:  # pragma: no cover - guaranteed by the solve above
        raise ArithmeticError("push-forward is not isomorphic to the input")
    return Classification(phi, unique, iso)


# -------------------------------------------------------- obstructions
@dataclass(frozen=True, eq=False)
class ObstructionResult:
    cocycles: tuple[Cochain, ...]  # one 3-cochain per kernel basis element
    classes: tuple[tuple[int, ...], ...]
    h3: CohomologyGroup
    lift: LieOverBase | None

    @property
    def vanishes(self) -> bool:
        return not any(any(c) for c in self.classes)


def lift_bracket(L: LieOverBase, E: SmallExtension, extra: Sequence[np.ndarray] | None = None) -> LieOverBase:
    """Naive lift of L to E.total: zero kernel components (plus optional corrections)."""
    if E.base is not L.base:
        raise ValueError("extension of a different base")
    B = E.total
    S = np.zeros(L.S.shape[:3] + (B.dim,), dtype=np.int64)
    S[..., : L.base.dim] = L.S
    for t, c in enumerate(extra or ()):
        S[..., L.base.dim + t] = c
    return LieOverBase(L.bar, B, S)


def jacobi_kernel_components(lift: LieOverBase, first_kernel: int) -> list[np.ndarray]:
    """Jacobi expression of a lift, split along the kernel coordinates."""
    J = lift.jacobi_tensor
    return [J[..., t] for t in range(first_kernel, lift.base.dim)]


def obstruction_lie(L: LieOverBase, E: SmallExtension, extra: Sequence[np.ndarray] | None = None) -> ObstructionResult:
    """Class in H^3(L, L)(0) (x) ker(E) whose vanishing is equivalent to a lift to E.total."""
    if not L.is_lie():
        raise ValueError("input is not a Lie algebra over its base")
    C = adjoint_complex(L.bar)
    H3 = C.cohomology(3, 0)
    lift = lift_bracket(L, E, extra)
    comps = jacobi_kernel_components(lift, L.base.dim)
    cocycles = tuple(tensor_cochain(C, 3, 0, w) for w in comps)
    classes = tuple(H3.coordinates(w) for w in cocycles)
    fixed = None
    if not any(any(c) for c in classes):
        corrections = []
        for t, w in enumerate(cocycles):
            prim = H3.primitive(w)
            if prim is None:  # pragma: no cover - class is zero
                raise ArithmeticError("extension system inconsistent")
            base_c = extra[t] if extra else 0
            corrections.append((base_c + cochain_tensor(prim)) % L.p)
        fixed = lift_bracket(L, E, corrections)
        if not fixed.is_lie():  # pragma: no cover
            raise ArithmeticError("corrected lift fails Jacobi")
    return ObstructionResult(cocycles, classes, H3, fixed)


def search_lifts(L: LieOverBase, E: SmallExtension, budget: int = DEFAULT_BUDGET) -> list[LieOverBase]:
    """Every grade-0 lift of L to E.total satisfying Jacobi (exhaustive)."""
    C = adjoint_complex(L.bar)
    n2 = C.dim(2, 0)
    r = E.kernel_dim
    total = L.p ** (n2 * r)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate lifts exceed the budget {budget}")
    found = []
    for v in product(range(L.p), repeat=n2 * r):
        vec = np.array(v, dtype=np.int64).reshape(r, n2)
        extra = [cochain_tensor(C.cochain(2, 0, vec[t])) for t in range(r)]
        cand = lift_bracket(L, E, extra)
        if cand.is_lie():
            found.append(cand)
    return found


# ------------------------------------------------------- miniversal
def miniversal_step(step: DeformationStep) -> DeformationStep:
    """D_{k+1} and eta_{k+1} from D_k and eta_k.

    The universal extension C = D_k + Ext(D_k, k)' carries the naive lift of
    eta_k; its Jacobi components omega_i give the obstruction map
    Ext(D_k, k)' -> H^3(0) whose dual image is factored out.
    """
    L = step.eta
    bar, p = L.bar, L.p
    C3 = adjoint_complex(bar)
    H3 = C3.cohomology(3, 0)
    U = universal_small_extension(step.base, prefix=f"x{step.index + 1}_")
    Cbase = U.extension.total
    a, h = step.base.dim, U.kernel_dim
    lift = lift_bracket(L, U.extension)
    omegas = [tensor_cochain(C3, 3, 0, w) for w in jacobi_kernel_components(lift, a)]
    lam = np.array([H3.coordinates(w) for w in omegas], dtype=np.int64).reshape(h, H3.dim)
    rel = np.zeros((H3.dim, Cbase.dim), dtype=np.int64)
    rel[:, a:] = lam.T
    rel = rel[rel.any(axis=1)] if rel.size else rel
    D_next, proj = Cbase.quotient(rel, f"D{step.index + 1}")
    # image of the naive lift in D_{k+1}, then correct along the surviving kernel
    pushed = lift.push_forward(proj)
    kernel_idx = range(a, D_next.dim)  # relations have pivots in the kernel, so D_k survives in front
    J = pushed.jacobi_tensor
    S = pushed.S.copy()
    for j in kernel_idx:
        w = tensor_cochain(C3, 3, 0, J[..., j])
        prim = H3.primitive(w)
        if prim is None:
            raise ArithmeticError("extension system inconsistent")
        S[..., j] = (S[..., j] + cochain_tensor(prim)) % p
    eta_next = LieOverBase(bar, D_next, S)
    if not eta_next.is_lie():  # pragma: no cover
        raise ArithmeticError("extension system inconsistent")
    red = LocalHom(D_next, step.base, _reduction_matrix(step.base, Cbase, proj))
    return DeformationStep(step.index + 1, D_next, eta_next, step.h2, rel, red)


def _reduction_matrix(Dk: ArtinAlgebra, Cbase: ArtinAlgebra, proj: LocalHom) -> np.ndarray:
    """D_{k+1} = C / R -> D_k: surviving D_k basis elements map to themselves, kernel to 0."""
    a = Dk.dim
    Q = proj.target
    mat = np.zeros((a, Q.dim), dtype=np.int64)
    # proj maps the C-basis onto Q; the D_k part of C survives untouched (relations live in the kernel)
    for j in range(a):
        col = np.flatnonzero(proj.matrix[:, j])
        mat[j, col[0]] = 1
    return mat


def miniversal(L: GradedLieAlgebra, steps: int) -> list[DeformationStep]:
    out = [eta_deformation(L)]
    for _ in range(steps - 1):
        out.append(miniversal_step(out[-1]))
    return out


def quadratic_locus(step1: DeformationStep) -> list[np.ndarray]:
    """Quadratic part of the obstruction map H^2(0) -> H^3(0), computed directly.

    For each H^3 basis class j, the symmetric matrix Q with
    Q[s, t] = coordinate j of the Jacobi cross term of mu_s and mu_t.
    """
    L = step1.eta
    C = adjoint_complex(L.bar)
    H3 = C.cohomology(3, 0)
    r = step1.base.dim - 1
    mus = [L.S[..., s + 1] for s in range(r)]
    out = np.zeros((H3.dim, r, r), dtype=np.int64)
    for s in range(r):
        for t in range(s, r):
            w = _nr_cross(mus[s], mus[t], L.p)
            coords = H3.coordinates(tensor_cochain(C, 3, 0, w))
            for j, c in enumerate(coords):
                out[j, s, t] = out[j, t, s] = c
    return [out[j] for j in range(H3.dim)]


def _nr_cross(m1: np.ndarray, m2: np.ndarray, p: int) -> np.ndarray:
    """sum over cyclic (x, y, z) of m1(m2(x, y), z) + m2(m1(x, y), z) (halved on the diagonal)."""
    def comp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        first = np.einsum("ijk,klr->ijlr", b, a)
        return first + first.transpose(1, 2, 0, 3) + first.transpose(2, 0, 1, 3)

    if m1 is m2 or np.array_equal(m1, m2):
        return comp(m1, m1) % p
    return (comp(m1, m2) + comp(m2, m1)) % p


# ================================================ representation side
@dataclass(frozen=True, eq=False)
class RepDeformation:
    """rho: G -> L (x) A with R[g, k, q] the coefficient of e_k alpha_q in rho(g_g)."""

    source: GradedLieAlgebra
    target: GradedLieAlgebra
    base: ArtinAlgebra
    images: np.ndarray

    def __post_init__(self) -> None:
        G, L, A = self.source, self.target, self.base
        R = np.asarray(self.images, dtype=np.int64) % A.p
        object.__setattr__(self, "images", R)
        if R.shape != (G.dim, L.dim, A.dim):
            raise ValueError("image tensor has the wrong shape")
        for g in range(G.dim):
            for k in np.flatnonzero(R[g].any(axis=1)):
                if L.degrees[k] != G.degrees[g]:
                    raise ValueError("representation is not graded")

    def reduction(self) -> GradedLieHom:
        return GradedLieHom(self.source, self.target, self.images[..., 0].T.copy())

    def hom_violations(self) -> list[tuple[str, str]]:
        G, L, A = self.source, self.target, self.base
        T = L.structure_tensor
        R, M, p = self.images, A.mult, A.p
        TG = G.structure_tensor
        bad = []
        for i in range(G.dim):
            for j in range(i + 1, G.dim):
                lhs = np.einsum("c,ckq->kq", TG[i, j], R) % p
                rhs = np.einsum("aq,bs,abk,qst->kt", R[i], R[j], T, M) % p
                if ((lhs - rhs) % p).any():
                    bad.append((G.labels[i], G.labels[j]))
        return bad

    def is_hom(self) -> bool:
        return not self.hom_violations()

    def key(self) -> bytes:
        return self.images.tobytes()


def _rep_complex(rho: GradedLieHom) -> CEComplex:
    C = rho.__dict__.get("_complex")
    if C is None:
        C = rho.__dict__["_complex"] = CEComplex(rho.source, rho)
    return C


def tangent_space_rep(rho: GradedLieHom) -> CohomologyGroup:
    """H^1(G, L via rho)(0)."""
    if rho.compatibility_violations():
        raise ValueError("rho is not a Lie algebra homomorphism")
    return _rep_complex(rho).cohomology(1, 0)


def obstruction_space_rep(rho: GradedLieHom) -> CohomologyGroup:
    return _rep_complex(rho).cohomology(2, 0)


@dataclass(frozen=True, eq=False)
class RepObstruction:
    cocycles: tuple[Cochain, ...]
    classes: tuple[tuple[int, ...], ...]
    lift: RepDeformation | None

    @property
    def vanishes(self) -> bool:
        return not any(any(c) for c in self.classes)


def obstruction_rep(rho0: RepDeformation, E: SmallExtension) -> RepObstruction:
    """Obstruction to lifting rho0 from A0 = E.base to A1 = E.total.

    The naive lift keeps every image and adds nothing along the kernel; its
    failure to be a homomorphism is a 2-cocycle w per kernel coordinate, and
    a lift exists iff every w = -d v is solvable.
    """
    if E.base is not rho0.base:
        raise ValueError("extension of a different base")
    if not rho0.is_hom():
        raise ValueError("rho0 is not a homomorphism")
    rbar = rho0.reduction()
    C = _rep_complex(rbar)
    H2 = C.cohomology(2, 0)
    A1 = E.total
    a0 = rho0.base.dim
    G, L = rho0.source, rho0.target
    R = np.zeros((G.dim, L.dim, A1.dim), dtype=np.int64)
    R[..., :a0] = rho0.images
    T, TG, M, p = L.structure_tensor, G.structure_tensor, A1.mult, A1.p
    cocycles = []
    for t in range(a0, A1.dim):
        vals = np.zeros((G.dim, G.dim, L.dim), dtype=np.int64)
        for i in range(G.dim):
            for j in range(i + 1, G.dim):
                br = np.einsum("aq,bs,abk,qst->kt", R[i], R[j], T, M)
                img = np.einsum("c,ckq->kq", TG[i, j], R)
                w = (br - img) % p
                vals[i, j] = w[:, t]
                vals[j, i] = -w[:, t]
        cocycles.append(tensor_cochain(C, 2, 0, vals % p))
    classes = tuple(H2.coordinates(w) for w in cocycles)
    lift = None
    if not any(any(c) for c in classes):
        R2 = R.copy()
        for t, w in zip(range(a0, A1.dim), cocycles):
            v = H2.primitive((-1) * w)
            if v is None:  # pragma: no cover
                raise ArithmeticError("extension system inconsistent")
            R2[..., t] = (R2[..., t] + _c1_matrix(C, v).T) % p
        lift = RepDeformation(G, L, A1, R2)
        if not lift.is_hom():  # pragma: no cover
            raise ArithmeticError("corrected lift is not a homomorphism")
    return RepObstruction(tuple(cocycles), classes, lift)


def rep_from_cocycles(rho: GradedLieHom, base: ArtinAlgebra, cochains: Sequence[Cochain]) -> RepDeformation:
    """rho + sum_q c_q alpha_q for 1-cochains c_q (one per ideal basis element)."""
    if len(cochains) != base.dim - 1:
        raise ValueError("need one cochain per maximal-ideal basis element")
    C = _rep_complex(rho)
    G, L = rho.source, rho.target
    R = np.zeros((G.dim, L.dim, base.dim), dtype=np.int64)
    R[..., 0] = rho.matrix.T
    for q, c in enumerate(cochains, start=1):
        R[..., q] = _c1_matrix(C, c).T
    return RepDeformation(G, L, base, R)


@dataclass(frozen=True)
class QuadraticPresentation:
    n_parameters: int
    h2_dim: int
    cup_matrices: tuple[np.ndarray, ...]  # Q^j[s, t] = coordinate j of cup(alpha_s, alpha_t)
    relations: tuple[dict[tuple[int, int], int], ...] | None  # None when l = 2
    available: bool

    @property
    def relation_count(self) -> int:
        return len(self.relations or ())


def quadratic_presentation(rho: GradedLieHom) -> QuadraticPresentation:
    """Parameters dual to H^1(0) and the quadratic relations (1/2) x^T Q^j x."""
    C = _rep_complex(rho)
    H1 = C.cohomology(1, 0)
    H2 = C.cohomology(2, 0)
    p = C.p
    reps = H1.representatives()
    r = len(reps)
    Q = np.zeros((H2.dim, r, r), dtype=np.int64)
    for s in range(r):
        for t in range(s, r):
            coords = H2.coordinates(C.cup_product(reps[s], reps[t]))
            for j, c in enumerate(coords):
                Q[j, s, t] = Q[j, t, s] = c
    mats = tuple(Q[j] for j in range(H2.dim))
    if p == 2:
        return QuadraticPresentation(r, H2.dim, mats, None, False)
    half = pow(2, -1, p)
    rels = []
    for j in range(H2.dim):
        poly = {}
        for s in range(r):
            for t in range(s, r):
                c = Q[j, s, t] * (half if s == t else 1) % p  # (1/2)(Q_st + Q_ts) off the diagonal
                if c:
                    poly[(s, t)] = int(c)
        if poly:
            rels.append(poly)
    return QuadraticPresentation(r, H2.dim, mats, tuple(rels), True)


def _lift_images(G: GradedLieAlgebra, Lt: LieOverBase, gen_images: Sequence[np.ndarray]) -> np.ndarray:
    """Images of every basis element of G from generator images, along the bracket expressions."""
    def ev(expr: object) -> np.ndarray:
        if isinstance(expr, int):
            return gen_images[expr]
        a, b = expr  # type: ignore[misc]
        return Lt.bracket(ev(a), ev(b))

    return np.stack([ev(e) for e in G.expressions]) if G.dim else np.zeros((0,) + Lt.S.shape[2:], dtype=np.int64)


def _conjugations(L: GradedLieAlgebra, A: ArtinAlgebra) -> list[np.ndarray]:
    """Graded operators id + sum_q alpha_q ad_{v_q} on L (x) A for a square-zero base.

    ad_v preserves degrees only for v of degree 0, so v_q runs over the
    degree-0 part of L (the identity alone when L is positively graded).
    """
    n, a, p = L.dim, A.dim, A.p
    T = L.structure_tensor
    zero = L.indices_of_degree(0) if 0 in L.degrees else []
    ops = []
    for v in product(range(p), repeat=len(zero) * (a - 1)):
        V = np.zeros((a - 1, n), dtype=np.int64)
        if zero:
            V[:, zero] = np.array(v, dtype=np.int64).reshape(a - 1, len(zero))
        X = np.zeros((n, a, n, a), dtype=np.int64)  # X[i, q, k, t]: e_i alpha_q -> e_k alpha_t
        for q in range(a):
            X[:, q, :, q] = np.eye(n, dtype=np.int64)
        for q in range(1, a):
            ad = np.einsum("j,ijk->ik", V[q - 1], T)  # e_i -> [e_i, v]
            X[:, 0, :, q] = (X[:, 0, :, q] + ad) % p
        ops.append(X % p)
    return ops


def enumerate_lifts(rho: GradedLieHom, A: ArtinAlgebra, budget: int = DEFAULT_BUDGET) -> list[RepDeformation]:
    """Graded lifts of rho to L (x) A, one per equivalence class.

    Candidates are generator images when G carries bracket expressions (all
    basis images otherwise), filtered by the homomorphism condition.  Two
    lifts are equivalent when they differ by an automorphism
    exp(sum alpha_q ad_{v_q}) preserving the grading; on square-zero bases
    the orbits are computed explicitly, and for positively graded L every
    orbit is a single lift.  Refuses with BudgetExceeded rather than
    truncating.
    """
    G, L = rho.source, rho.target
    p = A.p
    Lt = LieOverBase.trivial(L, A)
    use_gens = G.expressions is not None and G.generators is not None
    free_idx = [G.index(g) for g in G.generators] if use_gens else list(range(G.dim))
    positions = [(g, k, q) for g in free_idx for k in L.indices_of_degree(G.degrees[g]) for q in range(1, A.dim)]
    total = p ** len(positions)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the budget {budget}")
    base = np.zeros((G.dim, L.dim, A.dim), dtype=np.int64)
    base[..., 0] = rho.matrix.T
    lifts: list[RepDeformation] = []
    for v in product(range(p), repeat=len(positions)):
        R = base.copy()
        for (g, k, q), c in zip(positions, v):
            R[g, k, q] = c
        if use_gens:
            try:
                R = _lift_images(G, Lt, [R[g] for g in free_idx])
            except ValueError:
                continue
            if ((R[..., 0] - base[..., 0]) % p).any():
                continue
        try:
            cand = RepDeformation(G, L, A, R)
        except ValueError:  # images left the grading
            continue
        if cand.is_hom():
            lifts.append(cand)
    if not (A.is_square_zero() and A.dim > 1):
        return lifts
    keys = {c.key(): c for c in lifts}
    seen: set[bytes] = set()
    classes = []
    ops = _conjugations(L, A)
    for c in lifts:
        if c.key() in seen:
            continue
        classes.append(c)
        for X in ops:
            img = np.einsum("gkq,kqrs,qst->grt", c.images, X, A.mult) % p
            k = img.tobytes()
            if k in keys:
                seen.add(k)
    return classes


def restriction_rank(iota: GradedLieHom) -> tuple[int, int, int]:
    """Rank of H^1(L, L)(0) -> H^1(G, L via iota)(0) for an inclusion G -> L.

    Returns (dim source, dim target, rank); injectivity is not asserted.
    """
    L = iota.target
    CL = adjoint_complex(L)
    CG = _rep_complex(iota)
    H1L = CL.cohomology(1, 0)
    H1G = CG.cohomology(1, 0)
    cols = []
    for c in H1L.representatives():
        h = _c1_matrix(CL, c)  # L -> L
        restricted = mat_mul(h, iota.matrix, CL.p)  # G -> L
        vals = {(g,): LieElement(L, {k: int(restricted[k, g]) for k in np.flatnonzero(restricted[:, g])}) for g in range(iota.source.dim)}
        cols.append(H1G.coordinates(CG.cochain_from_values(1, 0, vals)))
    M = np.array(cols, dtype=np.int64).T.reshape(H1G.dim, H1L.dim)
    return H1L.dim, H1G.dim, dense_rank(M, CL.p) if M.size else 0


__all__ = [
    "BudgetExceeded",
    "LieOverBase",
    "DeformationStep",
    "eta_deformation",
    "Isomorphism",
    "find_isomorphism",
    "Classification",
    "classify_infinitesimal",
    "ObstructionResult",
    "obstruction_lie",
    "search_lifts",
    "lift_bracket",
    "miniversal_step",
    "miniversal",
    "quadratic_locus",
    "RepDeformation",
    "tangent_space_rep",
    "obstruction_space_rep",
    "RepObstruction",
    "obstruction_rep",
    "rep_from_cocycles",
    "QuadraticPresentation",
    "quadratic_presentation",
    "enumerate_lifts",
    "restriction_rank",
    "cochain_tensor",
    "tensor_cochain",
]
