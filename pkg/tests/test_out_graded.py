import numpy as np
import pytest

from gradedlie.coeff import CoeffRing, dense_rank, mat_mul
from gradedlie.free_lie import SurfaceSpec, surface_algebra
from gradedlie.out_graded import bookkeeping_dim, f_map, g_map, out_rank

F3 = CoeffRing(3)


@pytest.fixture(scope="module")
def s11():
    return surface_algebra(SurfaceSpec(1, 1), F3, 7)


def test_g_map_example(s11):
    G = g_map(s11, 1).to_dense()
    assert G.shape == (4, 2)
    assert dense_rank(G, 3) == 2


def test_g_map_genus_zero_pattern():
    L = surface_algebra(SurfaceSpec(0, 3), F3, 6)
    G = g_map(L, 2).to_dense()
    # no a/b blocks: three identical identity blocks on the degree-2 piece
    assert G.shape == (6, 2)
    assert (G == np.vstack([np.eye(2, dtype=np.int64)] * 3)).all()
    assert dense_rank(G, 3) == 2


def test_g_map_empty_piece():
    L = surface_algebra(SurfaceSpec(0, 3), F3, 6)
    G = g_map(L, 1).to_dense()
    assert G.shape[1] == 0
    assert out_rank(L, 1).g_injective


def test_f_map_example(s11):
    F = f_map(s11, 1).to_dense()
    assert F.shape == (2, 4)
    assert dense_rank(F, 3) == 2
    assert not mat_mul(F, np.zeros(4, dtype=np.int64), 3).any()


def test_f_after_g_vanishes(s11):
    for m in range(1, 6):
        F, G = f_map(s11, m).to_dense(), g_map(s11, m).to_dense()
        assert not mat_mul(F, G, 3).any()


def test_truncation_overflow(s11):
    with pytest.raises(ValueError):
        f_map(s11, 6)
    with pytest.raises(ValueError):
        g_map(s11, 7)


@pytest.mark.parametrize("m,expected", [(1, 0), (2, 1), (4, 3)])
def test_out_rank_examples(s11, m, expected):
    r = out_rank(s11, m)
    assert r.dim_out == expected
    assert r.all_certificates and r.certified and not r.torsion_warning


@pytest.mark.parametrize("g,n,N", [(1, 1, 7), (0, 3, 8), (0, 4, 6), (1, 2, 5), (2, 1, 4)])
def test_certificates_and_bookkeeping(g, n, N):
    L = surface_algebra(SurfaceSpec(g, n), F3, N)
    ranks = L.rank_table()
    for m in range(1, N - 1):
        r = out_rank(L, m)
        assert r.g_injective and r.f_surjective and r.fg_zero and r.middle_exact
        assert r.dim_out == bookkeeping_dim(ranks, g, n, m)
        assert r.dim_out + r.dim_gr_m2 == r.dim_middle - r.rank_g


def test_permuted_generator_order_gives_same_dims():
    # reverse the weight-1 generator order by swapping the roles of a and b
    L = surface_algebra(SurfaceSpec(1, 1), F3, 6)
    from gradedlie.free_lie import FreeLieAlgebra, SurfaceAlgebra, WeightedAlphabet

    Fp = FreeLieAlgebra(WeightedAlphabet(("b1", "a1"), (1, 1)), F3, 6, "permuted")
    Lp = SurfaceAlgebra(Fp, SurfaceSpec(1, 1))
    for m in range(1, 5):
        assert out_rank(L, m).dim_out == out_rank(Lp, m).dim_out


def test_closed_surface_is_uncertified():
    L = surface_algebra(SurfaceSpec(2, 0), F3, 4)
    r = out_rank(L, 1)
    assert not r.certified


def test_k_greater_than_one():
    L = surface_algebra(SurfaceSpec(1, 1), CoeffRing(3, 2), 6)
    r = out_rank(L, 2)
    assert r.dim_out == 1 and r.all_certificates and not r.torsion_warning
