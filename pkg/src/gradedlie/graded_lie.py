"""Positively graded Lie algebras truncated at a degree N.

An algebra is a graded basis plus structure constants for every pair of
basis elements whose degrees add up to at most N.  Brackets that would leave
the window are zero in the nilpotent quotient L / L^{>N}; operations that hit
them report it through the ``overflow`` flag on the result instead of
silently dropping anything.

Derivations, inner derivations, homogeneous quotients and the validation
report live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coeff import CoeffRing, dense_nullspace, dense_rank, dense_rref, mat_mul

Expr = "int | tuple"  # nested bracket expression over generator indices


class GradedLieAlgebra:
    """Finite truncation of a positively graded Lie algebra.

    ``basis`` is a sequence of ``(label, degree)``; it is stored sorted by
    degree (stable).  ``brackets`` maps ordered index pairs ``(i, j)`` to a
    sparse element ``{k: coeff}``.  Missing pairs are zero.  Both orders are
    stored so that an inconsistent table can be represented and reported by
    ``validate``.
    """

    def __init__(
        self,
        ring: CoeffRing,
        truncation: int,
        basis: Sequence[tuple[str, int]],
        brackets: Mapping[tuple[int, int], Mapping[int, int]] | None = None,
        *,
        expressions: Sequence[object] | None = None,
        generators: Sequence[str] | None = None,
        name: str = "",
    ) -> None:
        if truncation < 1:
            raise ValueError("truncation degree must be >= 1")
        order = sorted(range(len(basis)), key=lambda i: basis[i][1])
        relabel = {old: new for new, old in enumerate(order)}
        self.ring = ring
        self.truncation = truncation
        self.name = name
        self.labels: tuple[str, ...] = tuple(basis[i][0] for i in order)
        self.degrees: tuple[int, ...] = tuple(int(basis[i][1]) for i in order)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        for d in self.degrees:
            if not 1 <= d <= truncation:
                raise ValueError(f"basis degree {d} outside [1, {truncation}]")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.expressions = tuple(expressions[i] for i in order) if expressions is not None else None
        self.generators = tuple(generators) if generators is not None else None
        m = ring.modulus
        table: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j), val in (brackets or {}).items():
            vec = {relabel[k]: c % m for k, c in val.items() if c % m}
            if vec:
                table[(relabel[i], relabel[j])] = vec
        self._table = table

    # ------------------------------------------------------------------ basis
    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no basis element {label!r}") from None

    def indices_of_degree(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def rank_table(self) -> list[int]:
        """dim L(d) for d = 1..N."""
        return [self.degrees.count(d) for d in range(1, self.truncation + 1)]

    def basis_element(self, label: str) -> LieElement:
        return LieElement(self, {self.index(label): 1})

    def element(self, coeffs: Mapping[str, int] | Iterable[tuple[str, int]]) -> LieElement:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, int] = {}
        for lab, c in items:
            i = self.index(lab)
            acc[i] = acc.get(i, 0) + int(c)
        return LieElement(self, acc)

    def zero(self) -> LieElement:
        return LieElement(self, {})

    def from_vector(self, vec: Sequence[int]) -> LieElement:
        return LieElement(self, {i: int(c) for i, c in enumerate(vec) if int(c) % self.ring.modulus})

    # ---------------------------------------------------------------- brackets
    def overflows(self, i: int, j: int) -> bool:
        return self.degrees[i] + self.degrees[j] > self.truncation

    def basis_bracket(self, i: int, j: int) -> dict[int, int]:
        """[e_i, e_j] in the window (empty when it overflows)."""
        if self.overflows(i, j):
            return {}
        return dict(self._compute_bracket(i, j))

    def _compute_bracket(self, i: int, j: int) -> Mapping[int, int]:
        return self._table.get((i, j), {})

    @property
    def structure(self) -> dict[tuple[int, int], dict[int, int]]:
        out = {}
        for i in range(self.dim):
            for j in range(self.dim):
                v = self.basis_bracket(i, j)
                if v:
                    out[(i, j)] = v
        return out

    @cached_property
    def structure_tensor(self) -> np.ndarray:
        """Dense T with [e_i, e_j] = sum_k T[i, j, k] e_k (window only)."""
        n = self.dim
        T = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), vec in self.structure.items():
            for k, c in vec.items():
                T[i, j, k] = c
        return T

    def ad_matrix(self, x: Sequence[int] | np.ndarray) -> np.ndarray:
        """Matrix of v -> [x, v] (columns are images of basis vectors)."""
        x = np.asarray(x, dtype=np.int64)
        return mat_mul(x, self.structure_tensor.reshape(self.dim, -1), self.ring.modulus).reshape(self.dim, self.dim).T

    def bracket_vectors(self, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        m = self.ring.modulus
        T = self.structure_tensor
        return np.einsum("i,j,ijk->k", np.asarray(x, dtype=object), np.asarray(y, dtype=object), T.astype(object)).astype(np.int64) % m

    def center(self) -> np.ndarray:
        """Rows: basis of the center of the nilpotent quotient (field case)."""
        self.ring.require_field("center")
        n = self.dim
        if n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        # v central iff T[i, :, :]^T v = 0 for all i
        T = self.structure_tensor
        A = np.concatenate([T[i].T for i in range(n)], axis=0)
        return dense_nullspace(A, self.ring.l)

    def __repr__(self) -> str:
        return f"GradedLieAlgebra({self.name or '?'}, {self.ring}, N={self.truncation}, ranks={self.rank_table()})"


@dataclass(frozen=True, eq=False)
class LieElement:
    """Sparse element: basis index -> nonzero coefficient."""

    parent: GradedLieAlgebra
    coeffs: Mapping[int, int]
    overflow: bool = False

    def __post_init__(self) -> None:
        m = self.parent.ring.modulus
        clean = {int(i): int(c) % m for i, c in self.coeffs.items() if int(c) % m}
        for i in clean:
            if not 0 <= i < self.parent.dim:
                raise IndexError(f"basis index {i} out of range")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def _check(self, other: LieElement) -> None:
        if other.parent is not self.parent:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: LieElement) -> LieElement:
        self._check(other)
        acc = dict(self.coeffs)
        for i, c in other.coeffs.items():
            acc[i] = acc.get(i, 0) + c
        return LieElement(self.parent, acc, self.overflow or other.overflow)

    def __neg__(self) -> LieElement:
        return LieElement(self.parent, {i: -c for i, c in self.coeffs.items()}, self.overflow)

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def __rmul__(self, scalar: int) -> LieElement:
        return LieElement(self.parent, {i: scalar * c for i, c in self.coeffs.items()}, self.overflow)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.parent is other.parent and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set[int]:
        return {self.parent.degrees[i] for i in self.coeffs}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return next(iter(ds), None)

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.parent.dim, dtype=np.int64)
        for i, c in self.coeffs.items():
            v[i] = c
        return v

    def as_labels(self) -> dict[str, int]:
        return {self.parent.labels[i]: c for i, c in self.coeffs.items()}

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{self.parent.labels[i]}" for i, c in self.coeffs.items())


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Bilinear extension of the structure constants.

    Pairs of basis elements whose degrees exceed the truncation contribute
    nothing to the value and set ``overflow`` on the result.
    """
    x._check(y)
    L = x.parent
    acc: dict[int, int] = {}
    overflow = x.overflow or y.overflow
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            if L.overflows(i, j):
                overflow = True
                continue
            for k, c in L.basis_bracket(i, j).items():
                acc[k] = acc.get(k, 0) + a * b * c
    return LieElement(L, acc, overflow)


# ------------------------------------------------------------------ validation
@dataclass(frozen=True)
class Violation:
    kind: str  # "antisymmetry" | "alternating" | "grading" | "jacobi"
    labels: tuple[str, ...]
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def of_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]


def validate(L: GradedLieAlgebra) -> ValidationReport:
    """Every violated antisymmetry / alternating / grading / Jacobi instance."""
    out: list[Violation] = []
    n, m, lab = L.dim, L.ring.modulus, L.labels
    for i in range(n):
        if L.basis_bracket(i, i):
            out.append(Violation("alternating", (lab[i], lab[i])))
        for j in range(n):
            v = L.basis_bracket(i, j)
            bad = [k for k in v if L.degrees[k] != L.degrees[i] + L.degrees[j]]
            if bad:
                out.append(Violation("grading", (lab[i], lab[j]), ",".join(lab[k] for k in bad)))
            if i < j:
                w = L.basis_bracket(j, i)
                keys = set(v) | set(w)
                if any((v.get(k, 0) + w.get(k, 0)) % m for k in keys):
                    out.append(Violation("antisymmetry", (lab[i], lab[j])))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if L.degrees[i] + L.degrees[j] + L.degrees[k] > L.truncation:
                    continue
                x, y, z = (LieElement(L, {t: 1}) for t in (i, j, k))
                jac = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
                if not jac.is_zero():
                    out.append(Violation("jacobi", (lab[i], lab[j], lab[k]), repr(jac)))
    return ValidationReport(tuple(out))


# ------------------------------------------------------------------ derivations
@dataclass(frozen=True, eq=False)
class Derivation:
    """Linear map of grade shift ``shift``; column b of ``matrix`` is D(e_b).

    Images that would land above the truncation are zero (they lie in
    L^{>N}); ``exact_through`` is the largest total bracket degree for which
    the Leibniz rule is a statement about the untruncated algebra.
    """

    parent: GradedLieAlgebra
    shift: int
    matrix: np.ndarray
    exact_through: int

    def __call__(self, x: LieElement) -> LieElement:
        return self.parent.from_vector(mat_mul(self.matrix, x.to_vector(), self.parent.ring.modulus))

    def image(self, label: str) -> LieElement:
        return self.parent.from_vector(self.matrix[:, self.parent.index(label)])

    def is_zero(self) -> bool:
        return not (self.matrix % self.parent.ring.modulus).any()

    def leibniz_violations(self) -> list[tuple[str, str]]:
        L = self.parent
        bad = []
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                x, y = LieElement(L, {i: 1}), LieElement(L, {j: 1})
                lhs = self(bracket(x, y))
                rhs = bracket(self(x), y) + bracket(x, self(y))
                if lhs != rhs:
                    bad.append((L.labels[i], L.labels[j]))
        return bad

    def commutator(self, other: Derivation) -> Derivation:
        """[D1, D2] = D1 D2 - D2 D1, of shift i + j."""
        m = self.parent.ring.modulus
        mat = (mat_mul(self.matrix, other.matrix, m) - mat_mul(other.matrix, self.matrix, m)) % m
        return Derivation(self.parent, self.shift + other.shift, mat, min(self.exact_through, other.exact_through))


@dataclass(frozen=True)
class DerivationSpace:
    shift: int
    basis: tuple[Derivation, ...]
    exact_through: int

    @property
    def dim(self) -> int:
        return len(self.basis)


def _shift_unknowns(L: GradedLieAlgebra, shift: int) -> list[tuple[int, int]]:
    """(source basis index, target basis index) pairs allowed at this shift."""
    return [(b, t) for b in range(L.dim) for t in L.indices_of_degree(L.degrees[b] + shift)]


def leibniz_system(L: GradedLieAlgebra, shift: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Matrix whose kernel is the shift-``shift`` derivations of L / L^{>N}."""
    T = L.structure_tensor
    n, m = L.dim, L.ring.modulus
    unknowns = _shift_unknowns(L, shift)
    col = {u: c for c, u in enumerate(unknowns)}
    rows: list[dict[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            out_deg = L.degrees[i] + L.degrees[j] + shift
            if not 1 <= out_deg <= L.truncation:
                continue
            targets = L.indices_of_degree(out_deg)
            eq = {t: {} for t in targets}
            # D([e_i, e_j])
            for k in np.flatnonzero(T[i, j]):
                for t in targets:
                    c = col.get((int(k), t))
                    if c is not None:
                        eq[t][c] = eq[t].get(c, 0) + int(T[i, j, k])
            # - [D e_i, e_j] - [e_i, D e_j]
            for s in L.indices_of_degree(L.degrees[i] + shift):
                for t in np.flatnonzero(T[s, j]):
                    c = col[(i, s)]
                    eq[int(t)][c] = eq[int(t)].get(c, 0) - int(T[s, j, t])
            for s in L.indices_of_degree(L.degrees[j] + shift):
                for t in np.flatnonzero(T[i, s]):
                    c = col[(j, s)]
                    eq[int(t)][c] = eq[int(t)].get(c, 0) - int(T[i, s, t])
            rows.extend(eq.values())
    A = np.zeros((len(rows), len(unknowns)), dtype=np.int64)
    for r, eq in enumerate(rows):
        for c, v in eq.items():
            A[r, c] = v % m
    return A, unknowns


def derivation_space(L: GradedLieAlgebra, shift: int) -> DerivationSpace:
    """Basis of the grade-``shift`` derivations of the truncated algebra."""
    L.ring.require_field("derivation_space")
    if abs(shift) > L.truncation - 1:
        raise ValueError(f"|shift| must be <= N-1 = {L.truncation - 1}")
    A, unknowns = leibniz_system(L, shift)
    K = dense_nullspace(A, L.ring.l) if unknowns else np.zeros((0, 0), dtype=np.int64)
    exact = L.truncation - max(shift, 0)
    basis = []
    for row in K:
        mat = np.zeros((L.dim, L.dim), dtype=np.int64)
        for c, (b, t) in enumerate(unknowns):
            mat[t, b] = row[c]
        basis.append(Derivation(L, shift, mat, exact))
    return DerivationSpace(shift, tuple(basis), exact)


@dataclass(frozen=True)
class InnerDerivations:
    """ad_v : u -> [u, v] for each basis v (grouped by shift = deg v)."""

    derivations: dict[str, Derivation]
    ranks: dict[int, int]

    @property
    def rank(self) -> int:
        return sum(self.ranks.values())

    def rank_at(self, shift: int) -> int:
        return self.ranks.get(shift, 0)


def inner_derivations(L: GradedLieAlgebra, shift: int | None = None) -> InnerDerivations:
    L.ring.require_field("inner_derivations")
    m = L.ring.modulus
    derivs: dict[str, Derivation] = {}
    by_shift: dict[int, list[np.ndarray]] = {}
    for v in range(L.dim):
        d = L.degrees[v]
        if shift is not None and d != shift:
            continue
        e = np.zeros(L.dim, dtype=np.int64)
        e[v] = 1
        mat = (-L.ad_matrix(e)) % m  # u -> [u, v] = -[v, u]
        derivs[L.labels[v]] = Derivation(L, d, mat, L.truncation - d)
        by_shift.setdefault(d, []).append(mat.ravel())
    ranks = {s: dense_rank(np.array(rows), L.ring.l) for s, rows in by_shift.items()}
    if shift is not None:
        ranks.setdefault(shift, 0)
    return InnerDerivations(derivs, ranks)


# -------------------------------------------------------------------- quotients
def quotient_by_homogeneous_ideal(
    F: GradedLieAlgebra, relations: Sequence[LieElement], name: str = ""
) -> GradedLieAlgebra:
    """L / (relations), degree by degree.

    The ideal component in degree d is spanned by the relations of degree d
    and the brackets of lower ideal components with basis elements.  In each
    degree the quotient keeps the basis elements that are not pivots of the
    reduced echelon basis of the ideal, so labels are surviving labels of F.
    """
    F.ring.require_field("quotient_by_homogeneous_ideal")
    p = F.ring.l
    N = F.truncation
    for r in relations:
        if r.parent is not F:
            raise ValueError("relation from a different algebra")
        if not r.is_homogeneous():
            raise ValueError(f"relation {r!r} is not homogeneous")
    ideal: dict[int, np.ndarray] = {}  # degree -> echelon rows in coordinates of L(d)
    reducers: dict[int, tuple[np.ndarray, list[int], list[int]]] = {}
    for d in range(1, N + 1):
        idx = F.indices_of_degree(d)
        pos = {g: t for t, g in enumerate(idx)}
        gens: list[np.ndarray] = []
        for r in relations:
            if r.degree == d:
                v = np.zeros(len(idx), dtype=np.int64)
                for i, c in r.coeffs.items():
                    v[pos[i]] = c
                gens.append(v)
        for d1 in range(1, d):
            rows = ideal.get(d1)
            if rows is None or not len(rows):
                continue
            src = F.indices_of_degree(d1)
            for row in rows:
                x = LieElement(F, {src[t]: int(c) for t, c in enumerate(row) if c})
                for b in F.indices_of_degree(d - d1):
                    y = bracket(x, LieElement(F, {b: 1}))
                    v = np.zeros(len(idx), dtype=np.int64)
                    for i, c in y.coeffs.items():
                        v[pos[i]] = c
                    if v.any():
                        gens.append(v)
        if gens and idx:
            R, piv = dense_rref(np.array(gens), p)
            R = R[: len(piv)]
        else:
            R, piv = np.zeros((0, len(idx)), dtype=np.int64), []
        ideal[d] = R
        keep = [t for t in range(len(idx)) if t not in set(piv)]
        reducers[d] = (R, piv, keep)

    survivors = [F.indices_of_degree(d)[t] for d in range(1, N + 1) for t in reducers[d][2]]
    new_index = {old: new for new, old in enumerate(survivors)}

    def reduce(vec: Mapping[int, int], d: int) -> dict[int, int]:
        idx = F.indices_of_degree(d)
        pos = {g: t for t, g in enumerate(idx)}
        v = np.zeros(len(idx), dtype=np.int64)
        for i, c in vec.items():
            v[pos[i]] = c
        R, piv, keep = reducers[d]
        for row, pc in zip(R, piv):
            if v[pc]:
                v = (v - v[pc] * row) % p
        return {new_index[idx[t]]: int(v[t]) for t in keep if v[t]}

    table = {}
    for a, i in enumerate(survivors):
        for b, j in enumerate(survivors):
            if a != b and not F.overflows(i, j):
                val = reduce(F.basis_bracket(i, j), F.degrees[i] + F.degrees[j])
                if val:
                    table[(a, b)] = val
    exprs = [F.expressions[i] for i in survivors] if F.expressions is not None else None
    return GradedLieAlgebra(
        F.ring,
        N,
        [(F.labels[i], F.degrees[i]) for i in survivors],
        table,
        expressions=exprs,
        generators=[g for g in (F.generators or ()) if g in {F.labels[i] for i in survivors}] or None,
        name=name or f"{F.name}/rels",
    )


# --------------------------------------------------------------------- homs
@dataclass(frozen=True, eq=False)
class GradedLieHom:
    """Degree-preserving linear map source -> target; column b is the image of e_b."""

    source: GradedLieAlgebra
    target: GradedLieAlgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        S, T = self.source, self.target
        if self.matrix.shape != (T.dim, S.dim):
            raise ValueError("matrix shape does not match source/target dimensions")
        for b in range(S.dim):
            for t in np.flatnonzero(self.matrix[:, b] % T.ring.modulus):
                if T.degrees[t] != S.degrees[b]:
                    raise ValueError(f"image of {S.labels[b]} is not of degree {S.degrees[b]}")

    def __call__(self, x: LieElement) -> LieElement:
        return self.target.from_vector(mat_mul(self.matrix, x.to_vector(), self.target.ring.modulus))

    def compatibility_violations(self) -> list[tuple[str, str]]:
        S = self.source
        bad = []
        for i in range(S.dim):
            for j in range(i + 1, S.dim):
                x, y = LieElement(S, {i: 1}), LieElement(S, {j: 1})
                if self(bracket(x, y)) != bracket(self(x), self(y)):
                    bad.append((S.labels[i], S.labels[j]))
        return bad

    @classmethod
    def from_generators(
        cls, source: GradedLieAlgebra, target: GradedLieAlgebra, images: Mapping[str, LieElement]
    ) -> GradedLieHom:
        """Extend generator images along the bracket expressions of the source basis."""
        if source.expressions is None or source.generators is None:
            raise ValueError("source algebra carries no generator expressions")
        gen_images = [images[g] for g in source.generators]
        cols = []
        for e in source.expressions:
            cols.append(evaluate_expression(e, gen_images, target).to_vector())
        mat = np.array(cols, dtype=np.int64).T if cols else np.zeros((target.dim, 0), dtype=np.int64)
        hom = cls(source, target, mat.reshape(target.dim, source.dim))
        return hom

    @classmethod
    def identity(cls, L: GradedLieAlgebra) -> GradedLieHom:
        return cls(L, L, np.eye(L.dim, dtype=np.int64))


def evaluate_expression(expr: object, images: Sequence[LieElement], target: GradedLieAlgebra) -> LieElement:
    """Evaluate a nested bracket expression over generator indices."""
    if isinstance(expr, int):
        return images[expr]
    a, b = expr  # type: ignore[misc]
    return bracket(evaluate_expression(a, images, target), evaluate_expression(b, images, target))


# ---------------------------------------------------------------- constructors
def from_brackets(
    ring: CoeffRing,
    truncation: int,
    basis: Sequence[tuple[str, int]],
    brackets: Mapping[tuple[str, str], Mapping[str, int]],
    name: str = "",
    **kwargs: object,
) -> GradedLieAlgebra:
    """Build from labelled brackets [u, v] = w for u < v; antisymmetric completion."""
    idx = {lab: i for i, (lab, _) in enumerate(basis)}
    table: dict[tuple[int, int], dict[int, int]] = {}
    for (u, v), val in brackets.items():
        vec = {idx[w]: c for w, c in val.items()}
        table[(idx[u], idx[v])] = vec
        table[(idx[v], idx[u])] = {k: -c for k, c in vec.items()}
    return GradedLieAlgebra(ring, truncation, basis, table, name=name, **kwargs)  # type: ignore[arg-type]


__all__ = [
    "GradedLieAlgebra",
    "LieElement",
    "bracket",
    "validate",
    "ValidationReport",
    "Violation",
    "Derivation",
    "DerivationSpace",
    "derivation_space",
    "leibniz_system",
    "InnerDerivations",
    "inner_derivations",
    "quotient_by_homogeneous_ideal",
    "GradedLieHom",
    "evaluate_expression",
    "from_brackets",
]
