"""Property suites run by ``gradedlie verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fixtures as fx
from .coeff import CoeffRing, dense_nullspace, dense_rank, dense_solve, mat_mul
from .graded_lie import GradedLieAlgebra, validate


@dataclass(frozen=True)
class SuiteResult:
    name: str
    status: str  # PASS, FAIL or SKIP
    detail: str = ""

    def line(self) -> str:
        return f"{self.name}: {self.status}" + (f" ({self.detail})" if self.detail else "")


def _linalg(rng: np.random.Generator, algebra: GradedLieAlgebra | None) -> str | None:
    for p in (2, 3, 7):
        for _ in range(20):
            r, c = rng.integers(1, 7, size=2)
            A = rng.integers(0, p, size=(r, c))
            K = dense_nullspace(A, p)
            if K.size and mat_mul(A, K.T, p).any():
                return f"null space not annihilated over F_{p}"
            if dense_rank(A, p) + len(K) != c:
                return f"rank-nullity fails over F_{p}"
            x = rng.integers(0, p, size=c)
            if (mat_mul(A, dense_solve(A, mat_mul(A, x, p), p), p) != mat_mul(A, x, p)).any():
                return f"solve fails over F_{p}"
    return None


def _free_lie(rng, algebra) -> str | None:
    from .free_lie import WeightedAlphabet, hall_basis, spanning_ranks, witt_ranks

    for alph in (WeightedAlphabet.uniform(["x", "y"]), WeightedAlphabet(["x", "y", "c"], [1, 1, 2])):
        w = witt_ranks(alph, 6)
        if list(w) != list(spanning_ranks(alph, 6)):
            return "Witt and spanning ranks differ"
        h = [len(ws) for _, ws in sorted(hall_basis(alph, 6).items())]
        if list(w) != h:
            return "Witt and Hall counts differ"
    return None


def _jacobi(rng, algebra) -> str | None:
    algs = [algebra] if algebra is not None else list(fx.lie_fixtures(CoeffRing(3)).values())
    for L in algs:
        rep = validate(L)
        if not rep.ok:
            v = rep.violations[0]
            return f"{L.name or 'algebra'}: {v.kind} violation at {','.join(v.labels)}"
    return None


def _cohomology(rng, algebra) -> str | None:
    from .cohomology import CEComplex

    for p in (2, 3):
        algs = [algebra] if algebra is not None else list(fx.lie_fixtures(CoeffRing(p)).values())
        for L in algs:
            if L.ring.k != 1:
                continue
            C = CEComplex(L)
            for q in (1, 2):
                for _ in range(10):
                    c = C.random_cochain(q, 0, rng)
                    if not C.differential(C.differential(c)).is_zero():
                        return f"d^2 != 0 on {L.name} (q={q})"
    return None


def _out_graded(rng, algebra) -> str | None:
    from .out_graded import out_rank

    L = fx.surface(CoeffRing(3), 1, 1, 5)
    for m in (1, 2, 3):
        if not out_rank(L, m).all_certificates:
            return f"certificate fails at m={m}"
    return None


def _harrison(rng, algebra) -> str | None:
    from .comm_alg import AModule, harrison, transitivity_sequence

    ring = CoeffRing(3)
    for name, A in fx.artin_fixtures(ring).items():
        if harrison(A).dims[0] != A.cotangent_dim():
            return f"H^1 != m/m^2 for {name}"
    arts = fx.artin_fixtures(ring)
    f = fx.truncation_map(arts["k[t]/t4"], arts["k[t]/t3"])
    g = fx.truncation_map(arts["k[t]/t3"], arts["k[t]/t2"])
    if not transitivity_sequence(f, g, AModule.residue(arts["k[t]/t2"])).exact:
        return "transitivity sequence not exact"
    return None


def _deformation(rng, algebra) -> str | None:
    from .deformation import obstruction_lie, search_lifts

    for name in fx.FROZEN_LIE:
        Lt, E = fx.load_frozen_lie(name)
        vanishes = obstruction_lie(Lt, E).vanishes
        if vanishes != bool(search_lifts(Lt, E)):
            return f"obstruction biconditional fails on {name}"
    return None


def _representation(rng, algebra) -> str | None:
    from .comm_alg import ArtinAlgebra
    from .deformation import enumerate_lifts, obstruction_space_rep, tangent_space_rep

    ring = CoeffRing(2)
    eps = ArtinAlgebra.polynomial_mod_power(ring, "e", 2)
    for name, make in fx.REP_FIXTURES.items():
        rho = make(ring)
        h1 = tangent_space_rep(rho).dim
        if len(enumerate_lifts(rho, eps)) != 2 ** h1:
            return f"lift count differs from 2^dim H^1 on {name}"
        if name.startswith("free") and obstruction_space_rep(rho).dim:
            return f"free source with nonzero H^2 on {name}"
    return None


SUITES: dict[str, Callable[[np.random.Generator, GradedLieAlgebra | None], str | None]] = {
    "linalg": _linalg,
    "free-lie": _free_lie,
    "jacobi": _jacobi,
    "cohomology": _cohomology,
    "out-graded": _out_graded,
    "harrison": _harrison,
    "deformation": _deformation,
    "representation": _representation,
}


def run_suites(selected: list[str] | None = None, seed: int = 42, algebra: GradedLieAlgebra | None = None) -> list[SuiteResult]:
    unknown = set(selected or ()) - set(SUITES)
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(sorted(unknown))}")
    out = []
    for name, fn in SUITES.items():
        if selected and name not in selected:
            out.append(SuiteResult(name, "SKIP"))
            continue
        rng = np.random.default_rng(seed)
        problem = fn(rng, algebra)
        out.append(SuiteResult(name, "FAIL" if problem else "PASS", problem or ""))
    return out


__all__ = ["SuiteResult", "SUITES", "run_suites"]
