import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedlie import _pykernels
from gradedlie.coeff import (
    CoeffRing,
    ModMatrix,
    dense_nullspace,
    dense_rank,
    kernel_basis,
    rank,
    smith_normal_form,
    solve,
)


def det_mod(a, m):
    """Integer determinant by cofactor expansion (small matrices only)."""
    a = [list(map(int, row)) for row in a]
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0] % m
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        total += (-1) ** j * a[0][j] * det_mod(minor, m)
    return total % m


def check_smith(M):
    ring = M.ring
    S = smith_normal_form(M)
    D = np.zeros(M.shape, dtype=np.int64)
    for i, d in enumerate(S.diagonal):
        D[i, i] = d
    assert (S.left @ M @ S.right) == ModMatrix.from_dense(ring, D)
    assert ring.is_unit(det_mod(S.left.to_dense(), ring.modulus))
    assert ring.is_unit(det_mod(S.right.to_dense(), ring.modulus))
    for d in S.diagonal:
        assert d == 0 or (d < ring.modulus and ring.l ** ring.valuation(d) == d)
    return S


def test_ring_validation():
    with pytest.raises(ValueError):
        CoeffRing(4)
    with pytest.raises(ValueError):
        CoeffRing(3, 0)
    R = CoeffRing(2, 3)
    assert R.modulus == 8
    assert R.valuation(4) == 2
    assert R.valuation(0) == 3
    assert R.inverse(3) * 3 % 8 == 1
    with pytest.raises(ZeroDivisionError):
        R.inverse(2)


def test_smith_empty():
    S = smith_normal_form(ModMatrix(CoeffRing(5), 0, 0))
    assert S.diagonal == ()


def test_smith_identity():
    R = CoeffRing(5)
    S = check_smith(ModMatrix.identity(R, 3))
    assert S.diagonal == (1, 1, 1)


def test_smith_2x2_over_z8():
    R = CoeffRing(2, 3)
    M = ModMatrix.from_dense(R, [[2, 4], [4, 8]])
    S = check_smith(M)
    assert S.diagonal == (2, 0)
    assert S.precision_flag
    assert S.torsion == (2,)
    assert S.rank == 0


def test_smith_2x2_unimodular_oracle():
    # all invertible 2x2 pairs over Z/8 that diagonalise M: the divisor multiset is fixed
    R = CoeffRing(2, 3)
    M = np.array([[2, 4], [4, 8]])
    units = [
        np.array(g).reshape(2, 2)
        for g in itertools.product(range(8), repeat=4)
        if (g[0] * g[3] - g[1] * g[2]) % 2
    ]
    seen = set()
    for U in units[:200]:
        for V in units[:200]:
            D = (U @ M @ V) % 8
            if D[0, 1] == 0 and D[1, 0] == 0:
                seen.add(tuple(sorted(R.valuation(int(D[i, i])) for i in range(2))))
    assert seen == {(1, 3)}


def test_kernel_examples():
    R2 = CoeffRing(2)
    assert len(kernel_basis(ModMatrix.zeros(R2, 2, 3))) == 3
    assert kernel_basis(ModMatrix.identity(CoeffRing(7), 4)) == []
    basis = kernel_basis(ModMatrix.from_dense(R2, [[1, 1], [1, 1]]))
    brute = [v for v in itertools.product(range(2), repeat=2) if any(v) and (v[0] + v[1]) % 2 == 0]
    assert basis == brute == [(1, 1)]


def test_kernel_rejects_ring():
    with pytest.raises(ValueError):
        kernel_basis(ModMatrix.identity(CoeffRing(2, 2), 2))


def test_solve_examples():
    R = CoeffRing(5)
    assert solve(ModMatrix.identity(R, 3), [1, 2, 3]) == (1, 2, 3)
    assert solve(ModMatrix.zeros(R, 2, 2), [0, 1]) is None
    R4 = CoeffRing(2, 2)
    M = ModMatrix.from_dense(R4, [[2]])
    assert [x for x in range(4) if (2 * x) % 4 == 1] == []
    assert solve(M, [1]) is None
    assert solve(M, [2]) is not None
    with pytest.raises(ValueError):
        solve(M, [1, 2])


matrices = st.integers(min_value=0, max_value=4).flatmap(
    lambda r: st.integers(min_value=0, max_value=4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(min_value=0, max_value=26), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        ).map(lambda rows, c=c, r=r: np.array(rows, dtype=np.int64).reshape(r, c))
    )
)


@settings(max_examples=80, deadline=None)
@given(matrices, st.sampled_from([(2, 1), (3, 1), (2, 3), (3, 2), (5, 1)]))
def test_smith_property(a, lk):
    ring = CoeffRing(*lk)
    check_smith(ModMatrix.from_dense(ring, a))


@settings(max_examples=80, deadline=None)
@given(matrices, st.sampled_from([(2, 1), (3, 1), (2, 3), (3, 2)]))
def test_solve_roundtrip(a, lk):
    ring = CoeffRing(*lk)
    M = ModMatrix.from_dense(ring, a)
    x = [(i * 7 + 3) % ring.modulus for i in range(M.cols)]
    b = M.apply(x)
    y = solve(M, b)
    assert y is not None
    assert M.apply(y) == b


@settings(max_examples=80, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5]))
def test_kernel_property(a, p):
    ring = CoeffRing(p)
    M = ModMatrix.from_dense(ring, a)
    basis = kernel_basis(M)
    assert len(basis) == M.cols - rank(M)
    for v in basis:
        assert not any(M.apply(v))
    if basis:
        assert dense_rank(np.array(basis), p) == len(basis)


def test_rank_matches_bruteforce_count():
    # |kernel| = p^(cols - rank): count by enumeration over F_3
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.integers(0, 3, size=(3, 4))
        count = sum(1 for v in itertools.product(range(3), repeat=4) if not ((a @ np.array(v)) % 3).any())
        assert count == 3 ** (4 - dense_rank(a, 3))
        assert dense_nullspace(a, 3).shape[0] == 4 - dense_rank(a, 3)


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([(2, 1), (3, 1), (2, 3), (3, 2)]))
def test_backends_agree(a, lk):
    from gradedlie._backend import kernels

    l, k = lk
    m = l**k
    results = []
    for mod in {kernels, _pykernels}:
        A = np.ascontiguousarray(a % m)
        U = np.eye(A.shape[0], dtype=np.int64)
        V = np.eye(A.shape[1], dtype=np.int64)
        exps = list(mod.snf_local(A, l, k, U, V))
        B = np.ascontiguousarray(a % l)
        piv = list(mod.rref(B, l)) if B.size else []
        results.append((exps, A.tolist(), U.tolist(), V.tolist(), piv, B.tolist()))
    assert all(r == results[0] for r in results)
