"""Free graded Lie algebras on weighted generators, via the Lyndon basis.

Words are tuples of letter indices; the letter order is the order of the
alphabet.  A Lyndon word w of length > 1 has the standard factorization
w = uv with v its longest proper Lyndon suffix, and the basis element is
P_w = [P_u, P_v].  Expanded in the tensor algebra, P_w equals w plus larger
words of the same length, which is what ``decompose`` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coeff import CoeffRing, dense_rank
from .graded_lie import Derivation, GradedLieAlgebra, LieElement, bracket, quotient_by_homogeneous_ideal

Word = tuple[int, ...]
Poly = dict[Word, int]

# Large prime used only by the spanning oracle (rank over Q with high probability).
ORACLE_PRIME = 2147483647


@dataclass(frozen=True)
class WeightedAlphabet:
    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be >= 1")

    @classmethod
    def uniform(cls, names: Sequence[str], weight: int = 1) -> WeightedAlphabet:
        return cls(tuple(names), tuple(weight for _ in names))

    def __len__(self) -> int:
        return len(self.names)

    def word_degree(self, w: Word) -> int:
        return sum(self.weights[a] for a in w)


# ------------------------------------------------------------------ words
def lyndon_words(n_letters: int, max_length: int) -> list[Word]:
    """All Lyndon words of length <= max_length, in lexicographic order (Duval)."""
    out: list[Word] = []
    if n_letters <= 0 or max_length <= 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == n_letters - 1:
            w.pop()
    return out


def is_lyndon(w: Word) -> bool:
    return len(w) > 0 and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w: Word) -> tuple[Word, Word]:
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def hall_basis(alphabet: WeightedAlphabet, N: int) -> dict[int, list[Word]]:
    """Lyndon words grouped by weighted degree 1..N, each list sorted lexicographically."""
    if N < 1:
        raise ValueError("N must be >= 1")
    per: dict[int, list[Word]] = {d: [] for d in range(1, N + 1)}
    if len(alphabet) == 0:
        return per
    for w in lyndon_words(len(alphabet), N // min(alphabet.weights)):
        d = alphabet.word_degree(w)
        if d <= N:
            per[d].append(w)
    return per


# ------------------------------------------------------------ tensor algebra
def _poly_bracket(p: Mapping[Word, int], q: Mapping[Word, int]) -> Poly:
    out: Poly = {}
    for u, a in p.items():
        for v, b in q.items():
            out[u + v] = out.get(u + v, 0) + a * b
            out[v + u] = out.get(v + u, 0) - a * b
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def _lyndon_poly(w: Word) -> tuple[tuple[Word, int], ...]:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    return tuple(sorted(_poly_bracket(dict(_lyndon_poly(u)), dict(_lyndon_poly(v))).items()))


def lyndon_polynomial(w: Word) -> Poly:
    """Expansion of the standard bracketing of ``w`` in the tensor algebra."""
    return dict(_lyndon_poly(tuple(w)))


def decompose(p: Mapping[Word, int]) -> dict[Word, int]:
    """Coordinates of a Lie polynomial in the Lyndon basis (exact, over Z).

    The smallest word of each length in the support must be Lyndon; its
    coefficient is the coordinate, and subtracting that multiple of P_w
    removes it.  Raises ValueError if ``p`` is not a Lie polynomial.
    """
    rem = {w: c for w, c in p.items() if c}
    out: dict[Word, int] = {}
    while rem:
        w = min(rem, key=lambda x: (len(x), x))
        c = rem[w]
        if not is_lyndon(w):
            raise ValueError("input is not a Lie polynomial")
        out[w] = out.get(w, 0) + c
        for u, a in _lyndon_poly(w):
            v = rem.get(u, 0) - c * a
            if v:
                rem[u] = v
            else:
                rem.pop(u, None)
    return out


def word_label(w: Word, names: Sequence[str]) -> str:
    if len(w) == 1:
        return names[w[0]]
    u, v = standard_factorization(w)
    return f"[{word_label(u, names)},{word_label(v, names)}]"


def word_expression(w: Word) -> object:
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (word_expression(u), word_expression(v))


# ----------------------------------------------------------------- counting
def _mobius(n: int) -> int:
    res, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    return -res if n > 1 else res


def witt_ranks(alphabet: WeightedAlphabet, N: int) -> list[int]:
    """Ranks of the free Lie algebra in degrees 1..N by generating functions.

    With W(t) = sum_g t^{wt g}, log 1/(1 - W) = sum_m c_m t^m and the
    ranks satisfy n r_n = sum_{d | n} mu(n/d) d c_d.
    """
    W = [0] * (N + 1)
    for w in alphabet.weights:
        if w <= N:
            W[w] += 1
    c = [Fraction(0)] * (N + 1)
    power = [1] + [0] * N  # W^j truncated
    for j in range(1, N + 1):
        power = [sum(power[i] * W[d - i] for i in range(d + 1)) for d in range(N + 1)]
        if not any(power):
            break
        for d in range(N + 1):
            c[d] += Fraction(power[d], j)
    ranks = []
    for n in range(1, N + 1):
        total = sum(_mobius(n // d) * d * c[d] for d in range(1, n + 1) if n % d == 0)
        r = total / n
        if r.denominator != 1:
            raise ArithmeticError("non-integral Witt number")
        ranks.append(int(r))
    return ranks


def spanning_ranks(alphabet: WeightedAlphabet, N: int, prime: int = ORACLE_PRIME) -> list[int]:
    """Brute-force ranks: span of all left-normed bracket monomials per degree.

    Independent of the Lyndon machinery: every word is bracketed as
    [[[a1, a2], a3], ...], expanded in the tensor algebra, and the rank of
    the coefficient matrix is taken per letter content.
    """
    k = len(alphabet)
    ranks = []
    for d in range(1, N + 1):
        by_content: dict[tuple[int, ...], list[Poly]] = {}
        for length in range(1, d + 1):
            for w in product(range(k), repeat=length):
                if alphabet.word_degree(w) != d:
                    continue
                p: Poly = {(w[0],): 1}
                for a in w[1:]:
                    p = _poly_bracket(p, {(a,): 1})
                if p:
                    content = tuple(w.count(a) for a in range(k))
                    by_content.setdefault(content, []).append(p)
        total = 0
        for polys in by_content.values():
            words = sorted({w for p in polys for w in p})
            col = {w: i for i, w in enumerate(words)}
            M = np.zeros((len(polys), len(words)), dtype=np.int64)
            for r, p in enumerate(polys):
                for w, c in p.items():
                    M[r, col[w]] = c % prime
            total += dense_rank(M, prime)
        ranks.append(total)
    return ranks


# ------------------------------------------------------------- the algebra
class FreeLieAlgebra(GradedLieAlgebra):
    """Free Lie algebra on a weighted alphabet, truncated at degree N.

    Basis: Lyndon words ordered by (degree, word); labels are their standard
    bracketings, so single letters keep the generator names.
    """

    def __init__(self, alphabet: WeightedAlphabet, ring: CoeffRing, N: int, name: str = "") -> None:
        per = hall_basis(alphabet, N)
        words = [w for d in range(1, N + 1) for w in per[d]]
        self.alphabet = alphabet
        self.words: tuple[Word, ...] = tuple(words)
        self.word_index = {w: i for i, w in enumerate(words)}
        super().__init__(
            ring,
            N,
            [(word_label(w, alphabet.names), alphabet.word_degree(w)) for w in words],
            {},
            expressions=[word_expression(w) for w in words],
            generators=list(alphabet.names),
            name=name or f"free({','.join(alphabet.names)})",
        )
        self._cache: dict[tuple[int, int], dict[int, int]] = {}

    def _compute_bracket(self, i: int, j: int) -> Mapping[int, int]:
        if i == j:
            return {}
        key = (i, j) if i < j else (j, i)
        val = self._cache.get(key)
        if val is None:
            p = _poly_bracket(lyndon_polynomial(self.words[key[0]]), lyndon_polynomial(self.words[key[1]]))
            m = self.ring.modulus
            val = {self.word_index[w]: c % m for w, c in decompose(p).items() if c % m}
            self._cache[key] = val
        if i < j:
            return val
        m = self.ring.modulus
        return {k: (-c) % m for k, c in val.items()}

    def generator(self, name: str) -> LieElement:
        return self.basis_element(name)

    def rewrite_to_hall(self, expr: object) -> LieElement:
        return rewrite_to_hall(self, expr)


def free_lie_algebra(alphabet: WeightedAlphabet, ring: CoeffRing, N: int, name: str = "") -> FreeLieAlgebra:
    return FreeLieAlgebra(alphabet, ring, N, name)


def rewrite_to_hall(F: FreeLieAlgebra, expr: object) -> LieElement:
    """Normal form of a formal bracket expression.

    ``expr`` is a generator name, a LieElement of F, or a pair/list
    ``(left, right)`` meaning [left, right].  Terms above the truncation
    are dropped and flagged via ``overflow``.
    """
    if isinstance(expr, LieElement):
        if expr.parent is not F:
            raise ValueError("element of a different algebra")
        return expr
    if isinstance(expr, str):
        if expr not in F.alphabet.names:
            raise KeyError(f"unknown generator {expr!r}")
        if F.alphabet.weights[F.alphabet.names.index(expr)] > F.truncation:
            return LieElement(F, {}, True)
        return F.generator(expr)
    if isinstance(expr, (tuple, list)) and len(expr) == 2:
        return bracket(rewrite_to_hall(F, expr[0]), rewrite_to_hall(F, expr[1]))
    raise TypeError(f"cannot parse bracket expression {expr!r}")


# ----------------------------------------------------------------- surfaces
@dataclass(frozen=True)
class SurfaceSpec:
    g: int
    n: int

    def __post_init__(self) -> None:
        if self.g < 0 or self.n < 0:
            raise ValueError("genus and punctures must be >= 0")
        if 2 * self.g - 2 + self.n <= 0:
            raise ValueError(f"(g, n) = ({self.g}, {self.n}) is not hyperbolic: need 2g - 2 + n > 0")

    def alphabet(self) -> WeightedAlphabet:
        names = [f"a{i}" for i in range(1, self.g + 1)] + [f"b{i}" for i in range(1, self.g + 1)]
        weights = [1] * (2 * self.g)
        if self.n >= 1:
            names += [f"c{j}" for j in range(1, self.n)]
            weights += [2] * (self.n - 1)
        return WeightedAlphabet(tuple(names), tuple(weights))


class SurfaceAlgebra(GradedLieAlgebra):
    """Graded Lie algebra of a surface group with the images of a_i, b_i, c_j.

    ``c`` has n entries; the last is the stored relation element
    c_n = -(sum_i [a_i, b_i] + sum_{j<n} c_j).
    """

    def __init__(self, base: GradedLieAlgebra, spec: SurfaceSpec) -> None:
        super().__init__(
            base.ring,
            base.truncation,
            list(zip(base.labels, base.degrees)),
            base.structure,
            expressions=base.expressions,
            generators=base.generators,
            name=base.name,
        )
        self.spec = spec
        g, n = spec.g, spec.n
        self.a = tuple(self._gen(f"a{i}") for i in range(1, g + 1))
        self.b = tuple(self._gen(f"b{i}") for i in range(1, g + 1))
        cs = [self._gen(f"c{j}") for j in range(1, n)]
        if n >= 1:
            omega = self.zero()
            for x, y in zip(self.a, self.b):
                omega = omega + bracket(x, y)
            for c in cs:
                omega = omega + c
            cs.append(-omega)
        self.c = tuple(cs)

    def _gen(self, name: str) -> LieElement:
        if name in self._index:
            return self.basis_element(name)
        return LieElement(self, {}, True)  # generator above the truncation


def surface_algebra(spec: SurfaceSpec, ring: CoeffRing, N: int) -> SurfaceAlgebra:
    """Associated graded of the weight filtration of the surface group, through degree N."""
    alpha = spec.alphabet()
    name = f"surface({spec.g},{spec.n})"
    F = FreeLieAlgebra(alpha, ring, N, name)
    if spec.n >= 1:
        return SurfaceAlgebra(F, spec)
    rel = F.zero()
    for i in range(1, spec.g + 1):
        if N >= 2:
            rel = rel + bracket(F.generator(f"a{i}"), F.generator(f"b{i}"))
    Q = quotient_by_homogeneous_ideal(F, [rel] if not rel.is_zero() else [], name=name)
    return SurfaceAlgebra(Q, spec)


# ---------------------------------------------------------------- Ihara
def ihara_derivation(f: LieElement, x: str | None = None, y: str | None = None) -> Derivation:
    """The derivation D with D(x) = 0 and D(y) = [y, f], extended by Leibniz.

    ``f`` lives in a free algebra on two generators (the (0,3) surface
    algebra by default, with x = c1 and y = c2).  Images above the
    truncation are zero.
    """
    F = f.parent
    if not isinstance(F, GradedLieAlgebra) or F.expressions is None or F.generators is None:
        raise ValueError("f must live in a free algebra with generator expressions")
    if not f.is_homogeneous():
        raise ValueError("f must be homogeneous")
    gens = list(F.generators)
    if len(gens) != 2:
        raise ValueError("Ihara derivations need exactly two generators")
    x = x or gens[0]
    y = y or gens[1]
    shift = f.degree or 0
    if f.is_zero():
        return Derivation(F, 0, np.zeros((F.dim, F.dim), dtype=np.int64), F.truncation)
    if shift > F.truncation - 2:
        raise ValueError(f"deg f = {shift} exceeds N - 2 = {F.truncation - 2}")
    gen_img = {gens.index(x): F.zero(), gens.index(y): bracket(F.basis_element(y), f)}
    cache: dict[object, tuple[LieElement, LieElement]] = {}

    def walk(expr: object) -> tuple[LieElement, LieElement]:
        """(element, its image under D)."""
        if expr in cache:
            return cache[expr]
        if isinstance(expr, int):
            res = (F.basis_element(gens[expr]), gen_img[expr])
        else:
            u, du = walk(expr[0])
            v, dv = walk(expr[1])
            res = (bracket(u, v), bracket(du, v) + bracket(u, dv))
        cache[expr] = res
        return res

    mat = np.zeros((F.dim, F.dim), dtype=np.int64)
    for b, e in enumerate(F.expressions):
        _, img = walk(e)
        mat[:, b] = img.to_vector()
    return Derivation(F, shift, mat, F.truncation - shift)


def ihara_kernel_dims(F: GradedLieAlgebra, degrees: Iterable[int]) -> dict[int, tuple[int, list[LieElement]]]:
    """Per degree m: dim and basis of the kernel of f -> D_f on L(m)."""
    p = F.ring.l
    from .coeff import dense_nullspace

    out = {}
    for m in degrees:
        idx = F.indices_of_degree(m)
        cols = []
        for i in idx:
            cols.append(ihara_derivation(LieElement(F, {i: 1})).matrix.ravel())
        if not idx:
            out[m] = (0, [])
            continue
        A = np.array(cols, dtype=np.int64).T
        K = dense_nullspace(A, p)
        elems = [LieElement(F, {idx[t]: int(c) for t, c in enumerate(row) if c}) for row in K]
        out[m] = (len(elems), elems)
    return out


__all__ = [
    "WeightedAlphabet",
    "lyndon_words",
    "is_lyndon",
    "standard_factorization",
    "hall_basis",
    "lyndon_polynomial",
    "decompose",
    "witt_ranks",
    "spanning_ranks",
    "FreeLieAlgebra",
    "free_lie_algebra",
    "rewrite_to_hall",
    "SurfaceSpec",
    "SurfaceAlgebra",
    "surface_algebra",
    "ihara_derivation",
    "ihara_kernel_dims",
]
