"""Weight-graded Lie algebras of punctured-curve fundamental groups and their deformations."""

from ._backend import BACKEND
from .coeff import CoeffRing, ModMatrix, kernel_basis, smith_normal_form, solve
from .comm_alg import ArtinAlgebra, LocalHom, SmallExtension, harrison
from .cohomology import CEComplex, Cochain, CohomologyGroup, cohomology, cup_product
from .free_lie import FreeLieAlgebra, SurfaceSpec, WeightedAlphabet, surface_algebra
from .graded_lie import GradedLieAlgebra, GradedLieHom, LieElement, bracket, validate

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CoeffRing",
    "ModMatrix",
    "kernel_basis",
    "smith_normal_form",
    "solve",
    "ArtinAlgebra",
    "LocalHom",
    "SmallExtension",
    "harrison",
    "CEComplex",
    "Cochain",
    "CohomologyGroup",
    "cohomology",
    "cup_product",
    "FreeLieAlgebra",
    "SurfaceSpec",
    "WeightedAlphabet",
    "surface_algebra",
    "GradedLieAlgebra",
    "GradedLieHom",
    "LieElement",
    "bracket",
    "validate",
]
