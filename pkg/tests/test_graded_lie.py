import itertools

import numpy as np
import pytest

from gradedlie.coeff import CoeffRing, dense_rank
from gradedlie.fixtures import abelian, abelian_plane, corrupted_jacobi, free_nilpotent, heisenberg
from gradedlie.free_lie import FreeLieAlgebra, WeightedAlphabet
from gradedlie.graded_lie import (
    GradedLieAlgebra,
    GradedLieHom,
    bracket,
    derivation_space,
    from_brackets,
    inner_derivations,
    quotient_by_homogeneous_ideal,
    validate,
)

F2, F3 = CoeffRing(2), CoeffRing(3)


def brute_force_derivations(L, shift):
    """Count grade-shift derivations by trying every linear map (tiny cases only)."""
    p = L.ring.l
    slots = [(b, t) for b in range(L.dim) for t in L.indices_of_degree(L.degrees[b] + shift)]
    count = 0
    for vals in itertools.product(range(p), repeat=len(slots)):
        M = np.zeros((L.dim, L.dim), dtype=np.int64)
        for (b, t), v in zip(slots, vals):
            M[t, b] = v
        ok = True
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                if L.degrees[i] + L.degrees[j] + shift > L.truncation:
                    continue
                br = L.bracket_vectors(np.eye(L.dim, dtype=np.int64)[i], np.eye(L.dim, dtype=np.int64)[j])
                lhs = M @ br % p
                rhs = (L.bracket_vectors(M[:, i], np.eye(L.dim, dtype=np.int64)[j])
                       + L.bracket_vectors(np.eye(L.dim, dtype=np.int64)[i], M[:, j])) % p
                if (lhs != rhs).any():
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


def test_bracket_basics():
    H = heisenberg(F3)
    x, y, z = (H.basis_element(s) for s in "xyz")
    assert bracket(x, x).is_zero()
    assert bracket(y, x) == -1 * z
    assert bracket(x, y) == z
    assert bracket(x + y, x - y) == -2 * z
    assert not bracket(x, y).overflow


def test_bracket_overflow_is_flagged():
    H = heisenberg(F3)
    x, z = H.basis_element("x"), H.basis_element("z")
    r = bracket(x, z)
    assert r.is_zero() and r.overflow


def test_parent_mismatch():
    with pytest.raises(ValueError):
        bracket(heisenberg(F3).basis_element("x"), heisenberg(F3).basis_element("y"))


def test_free_bracket_is_hall_element():
    F = free_nilpotent(F3, 2, 3)
    x, y = F.generator("x"), F.generator("y")
    r = bracket(x, bracket(x, y))
    assert r.as_labels() == {"[x,[x,y]]": 1}


def test_validate_heisenberg_and_asymmetric_table():
    assert validate(heisenberg(F2)).ok
    bad = GradedLieAlgebra(F3, 2, [("x", 1), ("y", 1), ("z", 2)], {(0, 1): {2: 1}, (1, 0): {2: 1}})
    kinds = {v.kind for v in validate(bad).violations}
    assert "antisymmetry" in kinds


def test_validate_char2_alternating():
    bad = GradedLieAlgebra(F2, 2, [("x", 1), ("z", 2)], {(0, 0): {1: 1}})
    assert [v.kind for v in validate(bad).violations] == ["alternating"]


def test_validate_grading():
    bad = GradedLieAlgebra(F3, 3, [("x", 1), ("y", 1), ("w", 3)], {(0, 1): {2: 1}, (1, 0): {2: 2}})
    assert "grading" in {v.kind for v in validate(bad).violations}


def test_corrupted_jacobi_reports_exactly_that_triple():
    good = free_nilpotent(F3, 3, 3)
    assert validate(good).ok
    report = validate(corrupted_jacobi(F3))
    assert [(v.kind, v.labels) for v in report.violations] == [("jacobi", ("x", "y", "z"))]


def test_corrupted_four_dim_table_cannot_break_jacobi():
    # grade-0 Jacobi terms need five distinct basis elements, so a 4-dim table is never flagged
    for degrees in [(1, 1, 2, 3), (1, 1, 1, 2), (1, 2, 3, 4), (1, 1, 2, 2)]:
        L = abelian(F3, degrees)
        slots = [(i, j, k) for i, j in itertools.combinations(range(4), 2) for k in range(4)
                 if degrees[k] == degrees[i] + degrees[j]]
        for vals in itertools.product(range(3), repeat=len(slots)):
            table = {}
            for (i, j, k), c in zip(slots, vals):
                if c:
                    table.setdefault((i, j), {})[k] = c
                    table.setdefault((j, i), {})[k] = -c
            M = GradedLieAlgebra(F3, L.truncation, list(zip(L.labels, L.degrees)), table)
            assert not validate(M).of_kind("jacobi")


def test_derivation_space_examples():
    assert derivation_space(abelian_plane(F3), 0).dim == 4
    H = heisenberg(F2)
    assert 2 ** derivation_space(H, 0).dim == brute_force_derivations(H, 0) == 2**4


def test_derivation_space_free_shift_one():
    # images of x, y lie in the 1-dim degree-2 piece, everything else is forced: 2 parameters
    F = free_nilpotent(F2, 2, 3)
    D = derivation_space(F, 1)
    assert D.dim == 2 and brute_force_derivations(F, 1) == 2**2
    assert D.exact_through == 2


def test_derivation_space_rejects_large_shift():
    with pytest.raises(ValueError):
        derivation_space(heisenberg(F3), 2)


@pytest.mark.parametrize("shift", [0, 1])
def test_derivations_satisfy_leibniz(shift):
    for L in (heisenberg(F3), free_nilpotent(F3, 2, 4)):
        for D in derivation_space(L, shift).basis:
            assert D.leibniz_violations() == []


def test_derivation_commutators_close():
    L = free_nilpotent(F3, 2, 4)
    D0 = derivation_space(L, 0).basis
    D1 = derivation_space(L, 1).basis
    span1 = np.array([d.matrix.ravel() for d in D1])
    for a in D0:
        for b in D1:
            c = a.commutator(b)
            assert c.shift == 1
            assert c.leibniz_violations() == []
            assert dense_rank(np.vstack([span1, c.matrix.ravel()]), 3) == len(D1)


def test_inner_derivations():
    assert inner_derivations(abelian_plane(F3)).rank == 0
    H = inner_derivations(heisenberg(F3))
    assert H.rank == 2 and H.rank_at(1) == 2 and H.rank_at(2) == 0
    assert not H.derivations["x"].is_zero() and H.derivations["z"].is_zero()
    F = inner_derivations(free_nilpotent(F3, 2, 3))
    assert F.rank_at(0) == 0 and F.rank_at(1) == 2


def test_inner_derivation_convention():
    H = heisenberg(F3)
    ad_y = inner_derivations(H).derivations["y"]
    assert ad_y(H.basis_element("x")) == H.basis_element("z")  # u -> [u, v]


def test_quotient_examples():
    F = FreeLieAlgebra(WeightedAlphabet.uniform(["a", "b"]), F3, 4)
    assert quotient_by_homogeneous_ideal(F, []).rank_table() == F.rank_table()
    Q = quotient_by_homogeneous_ideal(F, [F.element({"[a,b]": 1})])
    assert Q.rank_table() == [2, 0, 0, 0]
    G = FreeLieAlgebra(WeightedAlphabet.uniform(["a1", "b1", "a2", "b2"]), F3, 3)
    omega = G.element({"[a1,b1]": 1, "[a2,b2]": 1})
    Q2 = quotient_by_homogeneous_ideal(G, [omega])
    assert Q2.rank_table() == [4, 5, 16]
    assert validate(Q2).ok


def test_quotient_rejects_inhomogeneous():
    F = FreeLieAlgebra(WeightedAlphabet.uniform(["a", "b"]), F3, 3)
    with pytest.raises(ValueError):
        quotient_by_homogeneous_ideal(F, [F.element({"a": 1, "[a,b]": 1})])


def test_hom_checks():
    H = heisenberg(F3)
    ident = GradedLieHom.identity(H)
    assert ident.compatibility_violations() == []
    with pytest.raises(ValueError):
        GradedLieHom(H, H, np.array([[0, 0, 1], [0, 1, 0], [0, 0, 1]]))  # x -> z breaks degrees
    swap = GradedLieHom(H, H, np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    assert swap.compatibility_violations() == [("x", "y")]
    fixed = GradedLieHom(H, H, np.array([[0, 1, 0], [1, 0, 0], [0, 0, 2]]))
    assert fixed.compatibility_violations() == []


def test_from_generators_extends_along_brackets():
    F = free_nilpotent(F3, 2, 3)
    H = heisenberg(F3)
    rho = GradedLieHom.from_generators(F, H, {"x": H.basis_element("x"), "y": H.basis_element("y")})
    assert rho(F.generator("x")).as_labels() == {"x": 1}
    assert rho(bracket(F.generator("x"), F.generator("y"))).as_labels() == {"z": 1}
    assert rho.compatibility_violations() == []


def test_center():
    C = heisenberg(F3).center()
    assert C.tolist() == [[0, 0, 1]]
    assert len(abelian_plane(F3).center()) == 2


def test_from_brackets_antisymmetric_completion():
    L = from_brackets(F3, 2, [("x", 1), ("y", 1), ("z", 2)], {("x", "y"): {"z": 1}})
    assert L.basis_bracket(1, 0) == {2: 2}
