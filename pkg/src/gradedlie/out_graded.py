"""Graded pieces of the braid-type outer automorphism Lie algebra.

For a surface algebra L with generators a_i, b_i (degree 1) and c_j
(degree 2, c_n the stored relation element) the sequence

    gr^m --g--> (gr^{m+1})^{2g} x (gr^m)^n --f--> gr^{m+2}

is built explicitly, with

    g(x) = ([x, a_i])_i x ([x, b_i])_i x (x)_j
    f((r_i), (s_i), (t_j)) = sum_i [a_i, s_i] + [r_i, b_i] + sum_j [t_j, c_j].

The dimension of gr^m of the outer algebra is dim ker of f induced on the
cokernel of g.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .coeff import CoeffRing, ModMatrix, dense_smith, mat_mul, smith_normal_form, solve
from .free_lie import SurfaceAlgebra
from .graded_lie import LieElement, bracket


def _coords(L: SurfaceAlgebra, x: LieElement, d: int) -> list[int]:
    idx = L.indices_of_degree(d)
    return [x.coeffs.get(i, 0) for i in idx]


def _middle_blocks(L: SurfaceAlgebra, m: int) -> list[tuple[str, int]]:
    g, n = L.spec.g, L.spec.n
    return [("r", m + 1)] * g + [("s", m + 1)] * g + [("t", m)] * n


def g_map(L: SurfaceAlgebra, m: int) -> ModMatrix:
    """Matrix of gr^m -> (gr^{m+1})^{2g} x (gr^m)^n."""
    if m < 1 or m + 1 > L.truncation:
        raise ValueError(f"g_map needs 1 <= m and m + 1 <= N = {L.truncation}")
    src = L.indices_of_degree(m)
    cols = []
    for i in src:
        x = LieElement(L, {i: 1})
        col: list[int] = []
        for a in L.a:
            col += _coords(L, bracket(x, a), m + 1)
        for b in L.b:
            col += _coords(L, bracket(x, b), m + 1)
        for _ in L.c:
            col += _coords(L, x, m)
        cols.append(col)
    rows = sum(len(L.indices_of_degree(d)) for _, d in _middle_blocks(L, m))
    dense = np.array(cols, dtype=np.int64).T if cols else np.zeros((rows, 0), dtype=np.int64)
    return ModMatrix.from_dense(L.ring, dense.reshape(rows, len(src)))


def f_map(L: SurfaceAlgebra, m: int) -> ModMatrix:
    """Matrix of (gr^{m+1})^{2g} x (gr^m)^n -> gr^{m+2}."""
    if m < 1 or m + 2 > L.truncation:
        raise ValueError(f"f_map needs 1 <= m and m + 2 <= N = {L.truncation}")
    g = L.spec.g
    cols: list[list[int]] = []
    for block, (kind, d) in enumerate(_middle_blocks(L, m)):
        for i in L.indices_of_degree(d):
            v = LieElement(L, {i: 1})
            if kind == "r":
                img = bracket(v, L.b[block])
            elif kind == "s":
                img = bracket(L.a[block - g], v)
            else:
                img = bracket(v, L.c[block - 2 * g])
            cols.append(_coords(L, img, m + 2))
    target = len(L.indices_of_degree(m + 2))
    dense = np.array(cols, dtype=np.int64).T if cols else np.zeros((target, 0), dtype=np.int64)
    return ModMatrix.from_dense(L.ring, dense.reshape(target, len(cols)))


@dataclass(frozen=True)
class OutGradedReport:
    m: int
    dim_gr_m: int
    dim_gr_m1: int
    dim_gr_m2: int
    dim_middle: int
    rank_g: int
    rank_f_induced: int
    dim_out: int
    g_injective: bool
    f_surjective: bool
    fg_zero: bool
    middle_exact: bool
    torsion_warning: bool
    certified: bool  # False for n = 0: exactness is computed but not a requirement

    @property
    def all_certificates(self) -> bool:
        return self.g_injective and self.f_surjective and self.fg_zero and self.middle_exact

    def as_dict(self) -> dict[str, object]:
        return asdict(self)


def _inverse(U: np.ndarray, ring: CoeffRing) -> np.ndarray:
    n = U.shape[0]
    M = ModMatrix.from_dense(ring, U)
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve(M, e)
        if x is None:  # pragma: no cover - U is invertible by construction
            raise ArithmeticError("transform is not invertible")
        cols.append(x)
    return np.array(cols, dtype=np.int64).T.reshape(n, n)


def out_rank(L: SurfaceAlgebra, m: int) -> OutGradedReport:
    ring = L.ring
    mod = ring.modulus
    G = g_map(L, m).to_dense()
    F = f_map(L, m).to_dense()
    d_m = len(L.indices_of_degree(m))
    d_m1 = len(L.indices_of_degree(m + 1))
    d_m2 = len(L.indices_of_degree(m + 2))
    middle = G.shape[0]

    exps_g, U, _ = dense_smith(G, ring)
    rank_g = sum(1 for e in exps_g if e == 0)
    torsion = any(e > 0 for e in exps_g)
    fg = mat_mul(F, G, mod) if G.size and F.size else np.zeros((F.shape[0], G.shape[1]), dtype=np.int64)
    fg_zero = not (fg % mod).any()

    # Coordinates y = U x split the middle term into im g (first rank_g) and a complement.
    Uinv = _inverse(U, ring) if middle else np.zeros((0, 0), dtype=np.int64)
    induced = mat_mul(F, Uinv, mod)[:, rank_g:] if middle else np.zeros((d_m2, 0), dtype=np.int64)
    if induced.size:
        S = smith_normal_form(ModMatrix.from_dense(ring, induced))
        rank_f = S.rank
        torsion = torsion or bool(S.torsion)
    else:
        rank_f = 0
    if F.size:
        SF = smith_normal_form(ModMatrix.from_dense(ring, F))
        rank_f_full = SF.rank
        torsion = torsion or bool(SF.torsion)
    else:
        rank_f_full = 0
    quotient = middle - rank_g
    dim_out = quotient - rank_f
    return OutGradedReport(
        m=m,
        dim_gr_m=d_m,
        dim_gr_m1=d_m1,
        dim_gr_m2=d_m2,
        dim_middle=middle,
        rank_g=rank_g,
        rank_f_induced=rank_f,
        dim_out=dim_out,
        g_injective=rank_g == d_m,
        f_surjective=rank_f_full == d_m2,
        fg_zero=fg_zero,
        middle_exact=dim_out + d_m2 == quotient,
        torsion_warning=torsion,
        certified=L.spec.n >= 1,
    )


def bookkeeping_dim(ranks: list[int], g: int, n: int, m: int) -> int:
    """dim(middle) - dim gr^m - dim gr^{m+2} from a rank table (1-indexed degrees)."""
    d = lambda j: ranks[j - 1] if 1 <= j <= len(ranks) else 0  # noqa: E731
    return 2 * g * d(m + 1) + n * d(m) - d(m) - d(m + 2)


__all__ = ["g_map", "f_map", "out_rank", "OutGradedReport", "bookkeeping_dim"]
