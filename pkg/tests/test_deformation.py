import itertools
from functools import lru_cache

import numpy as np
import pytest

from gradedlie.coeff import CoeffRing
from gradedlie.cohomology import adjoint_complex, cohomology
from gradedlie.comm_alg import ArtinAlgebra, universal_small_extension
from gradedlie.deformation import (
    BudgetExceeded,
    LieOverBase,
    _nr_cross,
    classify_infinitesimal,
    cochain_tensor,
    enumerate_lifts,
    eta_deformation,
    find_isomorphism,
    miniversal,
    obstruction_lie,
    obstruction_rep,
    obstruction_space_rep,
    quadratic_locus,
    quadratic_presentation,
    rep_from_cocycles,
    restriction_rank,
    search_lifts,
    tangent_space_rep,
)
from gradedlie.fixtures import (
    FROZEN_LIE,
    REP_FIXTURES,
    abelian,
    abelian3,
    abelian_plane,
    all_grade_zero_tables,
    commuting_pair_rep,
    degree_patterns,
    heisenberg,
    heisenberg_top,
    jacobi_expression_vanishes,
    load_frozen_lie,
    load_frozen_rep,
    search_obstructed_lie,
    truncation_extension,
)
from gradedlie.graded_lie import GradedLieHom
from oracles import all_first_order_deformations, all_local_homs, table_tensor

F2, F3 = CoeffRing(2), CoeffRing(3)


def abelian5(ring):
    return abelian(ring, (1, 1, 1, 2, 3), "abelian5")


@lru_cache(maxsize=None)
def searched_fixture():
    return search_obstructed_lie(2)


# ----------------------------------------------------------- eta
def test_eta_trivial_when_h2_vanishes():
    L = abelian_plane(F3)
    step = eta_deformation(L)
    assert step.base.dim == 1
    assert step.eta == LieOverBase.trivial(L, step.base)


def test_eta_abelian3_is_heisenberg_direction():
    L = abelian3(F3)
    step = eta_deformation(L)
    assert step.base.dim == 2 and step.base.is_square_zero()
    assert step.eta.is_lie()
    e1, e2 = step.eta.basis_vector(0), step.eta.basis_vector(1)
    br = step.eta.bracket(e1, e2)
    assert br[2, 1] != 0 and not br[:, 0].any()


@pytest.mark.parametrize("p", [2, 3])
def test_eta_jacobi_on_fixtures(p):
    ring = CoeffRing(p)
    for L in (abelian3(ring), abelian5(ring), heisenberg_top(ring), heisenberg(ring)):
        step = eta_deformation(L)
        assert step.eta.is_lie()
        assert step.base.dim == 1 + cohomology(L, 2, 0).dim


def test_eta_rejects_bad_representatives():
    L = abelian3(F3)
    rep = cohomology(L, 2, 0).representatives()[0]
    with pytest.raises(ValueError):
        eta_deformation(L, [2 * rep])  # represents twice the basis class
    with pytest.raises(ValueError):
        eta_deformation(L, [])


def test_eta_mu_independence_witness():
    rng = np.random.default_rng(1)
    L = heisenberg_top(F3)
    C = adjoint_complex(L)
    H = cohomology(L, 2, 0)
    default = eta_deformation(L)
    moved = 0
    for _ in range(5):
        mu = [r + C.differential(C.random_cochain(1, 0, rng)) for r in H.representatives()]
        other = eta_deformation(L, mu)
        moved += bool(((other.eta.S - default.eta.S) % 3).any())
        shifted = LieOverBase(L, default.base, other.eta.S)
        iso = find_isomorphism(default.eta, shifted)
        assert iso is not None and iso.verify()
    assert moved  # B^2(0) != 0 here, so the representatives really change


def test_eta_representative_forced_when_no_coboundaries():
    rng = np.random.default_rng(2)
    L = abelian3(F3)
    C = adjoint_complex(L)
    H = cohomology(L, 2, 0)
    step = eta_deformation(L)
    mu = [r + C.differential(C.random_cochain(1, 0, rng)) for r in H.representatives()]
    assert eta_deformation(L, mu).eta.S.tobytes() == step.eta.S.tobytes()
    iso = find_isomorphism(step.eta, step.eta)
    assert iso.verify() and not any(h.any() for h in iso.corrections)


def test_non_reducing_bracket_rejected():
    L = heisenberg(F3)
    A = ArtinAlgebra.polynomial_mod_power(F3, "t", 2)
    S = np.zeros((3, 3, 3, 2), dtype=np.int64)  # reduces to the abelian bracket
    with pytest.raises(ValueError):
        LieOverBase(L, A, S)


# ------------------------------------------------------ classify
def test_classify_trivial_and_heisenberg_direction():
    L = abelian3(F3)
    eps = ArtinAlgebra.polynomial_mod_power(F3, "e", 2)
    cl = classify_infinitesimal(LieOverBase.trivial(L, eps))
    assert not cl.morphism.ideal_matrix.any() and cl.unique
    mu = np.zeros((3, 3, 3), dtype=np.int64)
    mu[0, 1, 2], mu[1, 0, 2] = 1, 2
    cl = classify_infinitesimal(LieOverBase.from_cochains(L, eps, [mu]))
    assert cl.morphism.ideal_matrix.tolist() == [[1]] and cl.unique and cl.isomorphism.verify()


def test_classify_random_round_trips():
    rng = np.random.default_rng(20)
    for trial in range(20):
        L = (heisenberg_top, abelian5)[trial % 2](F3)
        step = eta_deformation(L)
        C = adjoint_complex(L)
        r = step.base.dim - 1
        nvars = int(rng.integers(1, 3))
        A = ArtinAlgebra.square_zero(F3, [f"a{i}" for i in range(nvars)])
        h = rng.integers(0, 3, size=(nvars, r))
        cochains = []
        for q in range(nvars):
            c = sum((int(h[q, s]) * step.eta.S[..., s + 1] for s in range(r)), np.zeros((L.dim,) * 3, dtype=np.int64))
            c = (c + cochain_tensor(C.differential(C.random_cochain(1, 0, rng)))) % 3
            cochains.append(c)
        Lt = LieOverBase.from_cochains(L, A, cochains)
        cl = classify_infinitesimal(Lt, step)
        assert cl.unique
        assert (cl.morphism.ideal_matrix == h).all()
        assert cl.isomorphism.verify()


def test_classify_rejects_non_square_zero():
    A = ArtinAlgebra.polynomial_mod_power(F3, "t", 3)
    with pytest.raises(ValueError):
        classify_infinitesimal(LieOverBase.trivial(abelian3(F3), A))


# --------------------------------------------------- obstructions
def test_heisenberg_lift_is_produced():
    Lt, E = load_frozen_lie("liftable_heisenberg")
    res = obstruction_lie(Lt, E)
    assert res.vanishes and res.lift is not None and res.lift.is_lie()
    assert (res.lift.S[..., : Lt.base.dim] == Lt.S).all()


def test_trivial_abelian_deformation_unobstructed():
    for L in (abelian3(F3), abelian5(F3)):
        E = truncation_extension(F3, 2)
        assert obstruction_lie(LieOverBase.trivial(L, E.base), E).vanishes


def test_frozen_obstructed_fixture():
    Lt, E = load_frozen_lie("obstructed_abelian5")
    assert Lt.bar.dim == 5
    res = obstruction_lie(Lt, E)
    assert not res.vanishes and res.lift is None
    assert search_lifts(Lt, E) == []


def test_frozen_fixture_matches_search():
    degrees, table = searched_fixture()
    Lt, E = load_frozen_lie("obstructed_abelian5")
    assert tuple(Lt.bar.degrees) == tuple(degrees)
    assert (Lt.S[..., 1] == table_tensor(5, table, 2)).all()
    assert E.total.nilpotency_index() == 3 and E.kernel_dim == 1


@pytest.mark.parametrize("name", FROZEN_LIE)
def test_biconditional_on_frozen(name):
    Lt, E = load_frozen_lie(name)
    assert obstruction_lie(Lt, E).vanishes == bool(search_lifts(Lt, E))


def test_biconditional_exhaustive_abelian5():
    L = abelian5(F2)
    E = truncation_extension(F2, 2)
    seen = {True: 0, False: 0}
    for table in all_grade_zero_tables(tuple(L.degrees), 2):
        Lt = LieOverBase.from_cochains(L, E.base, [table_tensor(5, table, 2)])
        v = obstruction_lie(Lt, E).vanishes
        assert v == bool(search_lifts(Lt, E))
        seen[v] += 1
    assert seen[True] and seen[False]


def test_obstruction_independent_of_lift_choice():
    rng = np.random.default_rng(4)
    for name in FROZEN_LIE:
        Lt, E = load_frozen_lie(name)
        C = adjoint_complex(Lt.bar)
        base = obstruction_lie(Lt, E).classes
        for _ in range(5):
            extra = [cochain_tensor(C.random_cochain(2, 0, rng)) for _ in range(E.kernel_dim)]
            assert obstruction_lie(Lt, E, extra).classes == base


def test_search_budget_refusal():
    Lt, E = load_frozen_lie("obstructed_abelian5")
    with pytest.raises(BudgetExceeded):
        search_lifts(Lt, E, budget=10)


def test_no_obstruction_possible_in_dim_four_or_less():
    # a grade-0 Jacobi term needs five distinct basis elements
    for dim in range(1, 5):
        for degrees in degree_patterns(dim, 4):
            tables = list(all_grade_zero_tables(degrees, 2))
            for table in tables:
                assert jacobi_expression_vanishes(degrees, table, 2)
            tensors = [table_tensor(dim, table, 2) for table in tables]
            for a, b in itertools.product(tensors, repeat=2):
                assert not _nr_cross(a, b, 2).any()


def test_no_obstruction_in_dim_four_exhaustive_lifts():
    # the direct oracle agrees: every first-order deformation of a 4-dim abelian algebra lifts
    E = truncation_extension(F2, 2)
    for degrees in degree_patterns(4, 3):
        L = abelian(F2, degrees)
        for Lt in all_first_order_deformations(L, E.base):
            assert search_lifts(Lt, E)


def test_search_finds_dim_five():
    degrees, table = searched_fixture()
    assert len(degrees) == 5


# ---------------------------------------------------- miniversal
def test_miniversal_trivial_when_h2_vanishes():
    for step in miniversal(abelian_plane(F3), 3):
        assert step.base.dim == 1


@pytest.mark.parametrize("p", [2, 3])
def test_miniversal_abelian3_is_truncated_power_series(p):
    steps = miniversal(abelian3(CoeffRing(p)), 3)
    assert [s.base.dim for s in steps] == [2, 3, 4]
    for prev, cur in zip(steps, steps[1:]):
        assert cur.reduces_to(prev)
        assert cur.eta.is_lie()
    assert steps[-1].base.nilpotency_index() == 4


def test_miniversal_abelian5_has_one_relation():
    s1, s2 = miniversal(abelian5(F2), 2)
    assert s2.base.dim == 27 and len(s2.relations) == 1
    assert s2.reduces_to(s1) and s2.eta.is_lie()


@pytest.mark.parametrize("p,make", [(2, abelian3), (3, abelian3), (2, abelian5)])
def test_miniversality_bijection(p, make):
    L = make(CoeffRing(p))
    _, s2 = miniversal(L, 2)
    eps = ArtinAlgebra.polynomial_mod_power(L.ring, "e", 2)
    homs = all_local_homs(s2.base, eps)
    pushed = [s2.eta.push_forward(phi) for phi in homs]
    defs = all_first_order_deformations(L, eps)
    assert defs
    for Lt in defs:
        hits = [phi for phi, P in zip(homs, pushed) if find_isomorphism(P, Lt) is not None]
        assert len(hits) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_quadratic_locus_matches_second_step_relations(p):
    L = abelian5(CoeffRing(p))
    s1, s2 = miniversal(L, 2)
    Q = quadratic_locus(s1)
    f = universal_small_extension(s1.base).extension.cocycle
    a = s1.base.dim
    r = a - 1
    expected = np.zeros((len(Q), s2.relations.shape[1]), dtype=np.int64)
    for j, Qj in enumerate(Q):
        for i in range(f.shape[2]):
            expected[j, a + i] = sum(int(f[s, t, i]) * int(Qj[s, t]) for s in range(r) for t in range(s, r)) % p
    expected = expected[expected.any(axis=1)]
    assert (expected == s2.relations % p).all()
    # the quadratic form is nonzero and matches the cross terms of the obstructed fixture
    assert any(q.any() for q in Q)


# ------------------------------------------------ representations
def test_tangent_space_free_one_counts_lifts():
    rho = REP_FIXTURES["free-one"](F2)
    eps = ArtinAlgebra.polynomial_mod_power(F2, "e", 2)
    h1 = tangent_space_rep(rho).dim
    assert len(enumerate_lifts(rho, eps)) == 2**h1


def test_tangent_of_identity_is_adjoint_h1():
    for L in (heisenberg(F3), abelian3(F3), heisenberg_top(F3)):
        assert tangent_space_rep(GradedLieHom.identity(L)).dim == cohomology(L, 1, 0).dim


def test_tangent_rejects_non_hom():
    H = heisenberg(F3)
    bad = GradedLieHom(H, H, np.array([[1, 0, 0], [0, 1, 0], [0, 0, 0]]))
    with pytest.raises(ValueError):
        tangent_space_rep(bad)


def test_restriction_rank_reported():
    src, tgt, rank = restriction_rank(GradedLieHom.identity(heisenberg(F3)))
    assert src == tgt == rank


@pytest.mark.parametrize("name", ["free-one", "free-two"])
@pytest.mark.parametrize("p", [2, 3])
def test_free_source_rigidity(name, p):
    ring = CoeffRing(p)
    rho = REP_FIXTURES[name](ring)
    assert obstruction_space_rep(rho).dim == 0
    E = truncation_extension(ring, 2)
    for lift in enumerate_lifts(rho, E.base):
        res = obstruction_rep(lift, E)
        assert res.vanishes and res.lift is not None and res.lift.is_hom()


@pytest.mark.parametrize("p", [2, 3])
def test_lift_counts_on_square_zero_bases(p):
    ring = CoeffRing(p)
    for name, make in REP_FIXTURES.items():
        rho = make(ring)
        for A in (ArtinAlgebra.polynomial_mod_power(ring, "e", 2),):
            assert len(enumerate_lifts(rho, A)) == p ** tangent_space_rep(rho).dim, name


def test_enumerate_over_residue_field():
    rho = REP_FIXTURES["free-one"](F3)
    k = ArtinAlgebra.residue_field(F3)
    lifts = enumerate_lifts(rho, k)
    assert len(lifts) == 1 and (lifts[0].reduction().matrix == rho.matrix).all()


def test_enumerate_budget_refusal():
    rho = REP_FIXTURES["free-two"](F3)
    A = ArtinAlgebra.square_zero(F3, ["a", "b"])
    with pytest.raises(BudgetExceeded):
        enumerate_lifts(rho, A, budget=100)


def test_trivial_rep_deformation_unobstructed():
    rho = commuting_pair_rep(F3)
    E = truncation_extension(F3, 2)
    H1 = tangent_space_rep(rho)
    triv = rep_from_cocycles(rho, E.base, [H1.representative([0] * H1.dim)])
    assert obstruction_rep(triv, E).vanishes


def test_frozen_obstructed_rep():
    R, E = load_frozen_rep("obstructed_commuting_pair")
    res = obstruction_rep(R, E)
    assert not res.vanishes
    lifts = enumerate_lifts(R.reduction(), E.total)
    a = E.base.dim
    assert not any((l.images[..., :a] == R.images).all() for l in lifts)


def test_rep_obstruction_biconditional_commuting_pair():
    rho = commuting_pair_rep(F2)
    E = truncation_extension(F2, 2)
    upper = {u.images[..., : E.base.dim].tobytes() for u in enumerate_lifts(rho, E.total)}
    for R in enumerate_lifts(rho, E.base):
        assert obstruction_rep(R, E).vanishes == (R.images.tobytes() in upper)


def test_quadratic_presentation_free_and_empty():
    rho = REP_FIXTURES["free-two"](F3)
    qp = quadratic_presentation(rho)
    assert qp.relation_count == 0 and qp.n_parameters == tangent_space_rep(rho).dim and qp.h2_dim == 0
    G = REP_FIXTURES["free-one"](F3).source
    L = abelian(F3, (2,))
    qp0 = quadratic_presentation(GradedLieHom(G, L, np.zeros((1, G.dim), dtype=np.int64)))
    assert qp0.n_parameters == 0 and qp0.relation_count == 0


def test_quadratic_presentation_matches_cup_products():
    rho = commuting_pair_rep(F3)
    qp = quadratic_presentation(rho)
    assert qp.available and qp.relation_count <= qp.h2_dim
    C = tangent_space_rep(rho).complex
    H1, H2 = C.cohomology(1, 0), C.cohomology(2, 0)
    reps = H1.representatives()
    for j, rel in enumerate(qp.relations):
        for s, t in itertools.combinations_with_replacement(range(len(reps)), 2):
            cup = H2.coordinates(C.cup_product(reps[s], reps[t]))[j]
            assert qp.cup_matrices[j][s, t] == cup
            want = cup * (pow(2, -1, 3) if s == t else 1) % 3
            assert rel.get((s, t), 0) == want


def test_quadratic_presentation_char_two():
    qp = quadratic_presentation(commuting_pair_rep(F2))
    assert not qp.available and qp.relations is None and qp.n_parameters == 4


def test_obstruction_matches_quadratic_relation_on_first_order_lifts():
    rho = commuting_pair_rep(F3)
    qp = quadratic_presentation(rho)
    H1 = tangent_space_rep(rho)
    E = truncation_extension(F3, 2)
    for x in itertools.product(range(3), repeat=H1.dim):
        R = rep_from_cocycles(rho, E.base, [H1.representative(x)])
        res = obstruction_rep(R, E)
        values = tuple(sum(c * x[s] * x[t] for (s, t), c in rel.items()) % 3 for rel in qp.relations)
        assert res.classes[0] == values
