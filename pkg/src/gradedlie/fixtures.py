"""Small named algebras used by tests, the verify command and the CLI."""

from __future__ import annotations

from itertools import combinations, product
from typing import Callable

import numpy as np

from .coeff import CoeffRing
from .comm_alg import ArtinAlgebra, LocalHom, SmallExtension
from .free_lie import FreeLieAlgebra, SurfaceSpec, WeightedAlphabet, surface_algebra
from .graded_lie import GradedLieAlgebra, GradedLieHom, from_brackets, quotient_by_homogeneous_ideal


def heisenberg(ring: CoeffRing) -> GradedLieAlgebra:
    """x, y in degree 1, z = [x, y] in degree 2."""
    return from_brackets(ring, 2, [("x", 1), ("y", 1), ("z", 2)], {("x", "y"): {"z": 1}}, "heisenberg")


def heisenberg_top(ring: CoeffRing) -> GradedLieAlgebra:
    """Heisenberg algebra plus a central line w in degree 3 (N = 3).

    Both H^2(0) and the grade-0 coboundaries are nonzero, so distinct
    representatives of one class exist.
    """
    basis = [("x", 1), ("y", 1), ("z", 2), ("w", 3)]
    return from_brackets(ring, 3, basis, {("x", "y"): {"z": 1}}, "heisenberg_top")


def abelian(ring: CoeffRing, degrees: tuple[int, ...], name: str = "") -> GradedLieAlgebra:
    basis = [(f"e{i + 1}", d) for i, d in enumerate(degrees)]
    return from_brackets(ring, max(degrees), basis, {}, name or "abelian" + "".join(map(str, degrees)))


def abelian3(ring: CoeffRing) -> GradedLieAlgebra:
    """e1, e2 in degree 1 and e3 in degree 2, all brackets zero."""
    return abelian(ring, (1, 1, 2), "abelian3")


def abelian_plane(ring: CoeffRing) -> GradedLieAlgebra:
    return abelian(ring, (1, 1), "abelian2")


def free_nilpotent(ring: CoeffRing, gens: int = 2, N: int = 4) -> FreeLieAlgebra:
    names = ["x", "y", "z", "w"][:gens]
    return FreeLieAlgebra(WeightedAlphabet.uniform(names), ring, N, f"free{gens}_N{N}")


def surface(ring: CoeffRing, g: int, n: int, N: int) -> GradedLieAlgebra:
    return surface_algebra(SurfaceSpec(g, n), ring, N)


def corrupted_jacobi(ring: CoeffRing) -> GradedLieAlgebra:
    """Free nilpotent algebra on x, y, z (N = 3) with [x, y] replaced by [x, y] + [x, z]."""
    F = free_nilpotent(ring, 3, 3)
    lab = F.labels
    table = {}
    for i in range(F.dim):
        for j in range(i + 1, F.dim):
            val = F.basis_bracket(i, j)
            if val:
                table[(lab[i], lab[j])] = {lab[k]: c for k, c in val.items()}
    table[("x", "y")] = {"[x,y]": 1, "[x,z]": 1}
    return from_brackets(ring, 3, list(zip(F.labels, F.degrees)), table, "corrupted")


def lie_fixtures(ring: CoeffRing) -> dict[str, GradedLieAlgebra]:
    """Fixtures used for the cross-module checks."""
    return {
        "abelian3": abelian3(ring),
        "heisenberg": heisenberg(ring),
        "free2_N4": free_nilpotent(ring, 2, 4),
        "surface11_N5": surface(ring, 1, 1, 5),
    }


# ------------------------------------------------------------ Artin algebras
def artin_fixtures(ring: CoeffRing) -> dict[str, ArtinAlgebra]:
    return {
        "k": ArtinAlgebra.residue_field(ring),
        "k[t]/t2": ArtinAlgebra.polynomial_mod_power(ring, "t", 2),
        "k[t]/t3": ArtinAlgebra.polynomial_mod_power(ring, "t", 3),
        "k[t]/t4": ArtinAlgebra.polynomial_mod_power(ring, "t", 4),
        "k[s,t]/(s,t)2": ArtinAlgebra.truncated_polynomial(ring, ["s", "t"], 1),
        "k[s,t]/(s,t)3": ArtinAlgebra.truncated_polynomial(ring, ["s", "t"], 2),
    }


def truncation_map(A: ArtinAlgebra, B: ArtinAlgebra) -> LocalHom:
    """k[t]/t^a -> k[t]/t^b (b <= a) sending t to t."""
    mat = np.zeros((B.dim, A.dim), dtype=np.int64)
    for j in range(min(A.dim, B.dim)):
        mat[j, j] = 1
    return LocalHom(A, B, mat)


def truncation_extension(ring: CoeffRing, n: int) -> SmallExtension:
    """k[t]/t^{n+1} -> k[t]/t^n as a small extension."""
    big = ArtinAlgebra.polynomial_mod_power(ring, "t", n + 1)
    small = ArtinAlgebra.polynomial_mod_power(ring, "t", n)
    return SmallExtension.from_algebra(big, truncation_map(big, small))


# ------------------------------------------------ obstruction search (Lie)
def jacobi_expression_vanishes(degrees: tuple[int, ...], table: dict[tuple[int, int], dict[int, int]], p: int) -> bool:
    """Whether the Jacobi expression of a grade-0 alternating table is identically zero."""
    n = len(degrees)
    T = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), val in table.items():
        for k, c in val.items():
            T[i, j, k] = c
            T[j, i, k] = -c
    first = np.einsum("ijk,klr->ijlr", T, T)
    J = (first + first.transpose(1, 2, 0, 3) + first.transpose(2, 0, 1, 3)) % p
    return not J.any()


def grade_zero_slots(degrees: tuple[int, ...]) -> list[tuple[int, int, int]]:
    """(i, j, k) with i < j and deg k = deg i + deg j."""
    n = len(degrees)
    return [(i, j, k) for i, j in combinations(range(n), 2) for k in range(n) if degrees[k] == degrees[i] + degrees[j]]


def all_grade_zero_tables(degrees: tuple[int, ...], p: int):
    slots = grade_zero_slots(degrees)
    for v in product(range(p), repeat=len(slots)):
        table: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j, k), c in zip(slots, v):
            if c:
                table.setdefault((i, j), {})[k] = c
        yield table


def degree_patterns(dim: int, max_degree: int):
    """Sorted degree vectors with entries in 1..max_degree."""
    def rec(prefix: tuple[int, ...]):
        if len(prefix) == dim:
            yield prefix
            return
        lo = prefix[-1] if prefix else 1
        for d in range(lo, max_degree + 1):
            yield from rec(prefix + (d,))

    yield from rec(())


def search_obstructed_lie(p: int = 2, dims: tuple[int, ...] = (5,), max_degree: int = 3, budget: int = 1 << 12):
    """First (degrees, mu) found with abelian L, L_t = L + t mu over k[t]/t^2 not liftable to k[t]/t^3.

    Lifts are exhausted directly (search_lifts), so no cohomology is used to
    decide liftability.  Returns None when nothing is found within the
    given dimensions.
    """
    from .deformation import LieOverBase, search_lifts

    ring = CoeffRing(p, 1)
    E = truncation_extension(ring, 2)
    for dim in dims:
        for degrees in degree_patterns(dim, max_degree):
            L = abelian(ring, degrees)
            slots = grade_zero_slots(degrees)
            if not slots or p ** len(slots) > budget:
                continue
            for table in all_grade_zero_tables(degrees, p):
                if not table:
                    continue
                mu = np.zeros((dim,) * 3, dtype=np.int64)
                for (i, j), val in table.items():
                    for k, c in val.items():
                        mu[i, j, k], mu[j, i, k] = c, -c
                Lt = LieOverBase.from_cochains(L, E.base, [mu % p])
                if not Lt.is_lie():
                    continue
                if not search_lifts(Lt, E, budget=budget):
                    return degrees, table
    return None


# ---------------------------------------------- representation fixtures
def commuting_pair(ring: CoeffRing) -> GradedLieAlgebra:
    """Free algebra on x, y (degree 1) modulo [x, y], truncated at N = 2."""
    F = FreeLieAlgebra(WeightedAlphabet.uniform(["gx", "gy"]), ring, 2, "F2")
    rel = F.element({"[gx,gy]": 1})
    return quotient_by_homogeneous_ideal(F, [rel], "commuting_pair")


def zero_rep(source: GradedLieAlgebra, target: GradedLieAlgebra) -> GradedLieHom:
    return GradedLieHom(source, target, np.zeros((target.dim, source.dim), dtype=np.int64))


def one_generator_rep(ring: CoeffRing, N: int = 3) -> GradedLieHom:
    """Free algebra on one degree-1 generator s into the Heisenberg algebra, s -> x."""
    F = FreeLieAlgebra(WeightedAlphabet.uniform(["s"]), ring, N, "free1")
    H = heisenberg(ring)
    return GradedLieHom.from_generators(F, H, {"s": H.element({"x": 1})})


def two_generator_rep(ring: CoeffRing, N: int = 3) -> GradedLieHom:
    """Free algebra on s, u into the Heisenberg algebra, s -> x, u -> y."""
    F = FreeLieAlgebra(WeightedAlphabet.uniform(["s", "u"]), ring, N, "free2")
    H = heisenberg(ring)
    return GradedLieHom.from_generators(
        F, H, {"s": H.element({"x": 1}), "u": H.element({"y": 1})}
    )


def commuting_pair_rep(ring: CoeffRing) -> GradedLieHom:
    return zero_rep(commuting_pair(ring), heisenberg(ring))


REP_FIXTURES: dict[str, Callable[[CoeffRing], GradedLieHom]] = {
    "free-one": one_generator_rep,
    "free-two": two_generator_rep,
    "commuting-pair": commuting_pair_rep,
}

LIE_FIXTURES: dict[str, Callable[[CoeffRing], GradedLieAlgebra]] = {
    "abelian2": abelian_plane,
    "abelian3": abelian3,
    "heisenberg": heisenberg,
    "heisenberg_top": heisenberg_top,
    "free2": lambda r: free_nilpotent(r, 2, 4),
    "abelian5": lambda r: abelian(r, (1, 1, 1, 2, 3), "abelian5"),
}


def search_obstructed_rep(p: int = 2):
    """First lift of the zero map (commuting pair -> Heisenberg) to k[t]/t^2 with no lift to k[t]/t^3.

    Both levels are enumerated exhaustively.  Returns the image tensor or None.
    """
    from .deformation import enumerate_lifts

    ring = CoeffRing(p, 1)
    rho = commuting_pair_rep(ring)
    E = truncation_extension(ring, 2)
    upper = enumerate_lifts(rho, E.total)
    reachable = {u.images[..., : E.base.dim].tobytes() for u in upper}
    for cand in enumerate_lifts(rho, E.base):
        if cand.images.tobytes() not in reachable:
            return cand.images
    return None


# -------------------------------------------------------- frozen cases
DATA_DIR = __import__("pathlib").Path(__file__).with_name("data")
FROZEN_LIE = ("obstructed_abelian5", "liftable_heisenberg", "liftable_abelian3")
FROZEN_REP = ("obstructed_commuting_pair",)


def build_frozen_documents(p: int = 2) -> dict[str, dict]:
    """Regenerate the frozen regression documents (searches included)."""
    from .deformation import LieOverBase, RepDeformation
    from .io import deformation_to_dict, rep_deformation_to_dict

    ring = CoeffRing(p, 1)
    E = truncation_extension(ring, 2)
    docs = {}
    found = search_obstructed_lie(p)
    if found is None:  # pragma: no cover
        raise RuntimeError("no obstructed fixture in the searched range")
    degrees, table = found
    L = abelian(ring, degrees, "abelian5")
    mu = np.zeros((L.dim,) * 3, dtype=np.int64)
    for (i, j), val in table.items():
        for k, c in val.items():
            mu[i, j, k], mu[j, i, k] = c, -c
    docs["obstructed_abelian5"] = deformation_to_dict(LieOverBase.from_cochains(L, E.base, [mu % p]), E.total)
    H = heisenberg(ring)
    docs["liftable_heisenberg"] = deformation_to_dict(LieOverBase.from_cochains(H, E.base, [H.structure_tensor.copy()]), E.total)
    A3 = abelian3(ring)
    nu = np.zeros((3, 3, 3), dtype=np.int64)
    nu[0, 1, 2], nu[1, 0, 2] = 1, -1
    docs["liftable_abelian3"] = deformation_to_dict(LieOverBase.from_cochains(A3, E.base, [nu % p]), E.total)
    images = search_obstructed_rep(p)
    if images is None:  # pragma: no cover
        raise RuntimeError("no obstructed representation in the searched range")
    rho = commuting_pair_rep(ring)
    R = RepDeformation(rho.source, rho.target, E.base, images)
    docs["obstructed_commuting_pair"] = rep_deformation_to_dict(R, E.total)
    return docs


def load_frozen_lie(name: str):
    """(LieOverBase, SmallExtension) of a frozen deformation case."""
    from .io import deformation_from_dict, load

    return deformation_from_dict(load(DATA_DIR / f"{name}.json"))


def load_frozen_rep(name: str):
    from .io import load, rep_deformation_from_dict

    return rep_deformation_from_dict(load(DATA_DIR / f"{name}.json"))


if __name__ == "__main__":  # regenerate the frozen documents
    from .io import save

    DATA_DIR.mkdir(exist_ok=True)
    for key, doc in build_frozen_documents().items():
        save(doc, DATA_DIR / f"{key}.json")
        print("wrote", key)
