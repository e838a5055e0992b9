"""JSON documents for graded Lie algebras, Artin algebras, deformations and representations.

Lie algebra:
    {"prime", "power", "truncation", "degrees": [{"degree", "basis": [names]}],
     "brackets": [[u, v, [[w, coeff], ...]], ...]}
Commutative algebra: "basis" (unit first) and "products" instead of degrees/brackets.
Deformation: {"algebra": <lie>, "base": <commutative>, "brackets": [[u, v, [[w, a, coeff], ...]], ...]}
where a names a base basis element; optionally "lift_base": <commutative> whose
basis extends that of "base" by the kernel of a small extension.
Representation: {"source": <lie>, "target": <lie>, "images": {g: [[w, coeff], ...]}}.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .coeff import CoeffRing
from .comm_alg import ArtinAlgebra, LocalHom, SmallExtension
from .graded_lie import GradedLieAlgebra, GradedLieHom, from_brackets


class FormatError(ValueError):
    """A document that does not describe a valid object."""


def _ring(doc: dict[str, Any]) -> CoeffRing:
    try:
        return CoeffRing(int(doc["prime"]), int(doc.get("power", 1)))
    except KeyError as e:
        raise FormatError(f"missing field {e.args[0]!r}") from None


# ----------------------------------------------------------- Lie algebras
def lie_to_dict(L: GradedLieAlgebra) -> dict[str, Any]:
    degs: dict[int, list[str]] = {}
    for lab, d in zip(L.labels, L.degrees):
        degs.setdefault(d, []).append(lab)
    brackets = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            val = L.basis_bracket(i, j)
            terms = [[L.labels[k], int(c)] for k, c in sorted(val.items()) if c]
            if terms:
                brackets.append([L.labels[i], L.labels[j], terms])
    return {
        "name": L.name,
        "prime": L.ring.l,
        "power": L.ring.k,
        "truncation": L.truncation,
        "degrees": [{"degree": d, "basis": degs[d]} for d in sorted(degs)],
        "brackets": brackets,
    }


def lie_from_dict(doc: dict[str, Any], name: str = "") -> GradedLieAlgebra:
    ring = _ring(doc)
    try:
        basis = [(lab, int(block["degree"])) for block in doc["degrees"] for lab in block["basis"]]
        N = int(doc["truncation"])
        table: dict[tuple[str, str], dict[str, int]] = {}
        for u, v, terms in doc.get("brackets", []):
            table[(u, v)] = {w: int(c) for w, c in terms}
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed Lie algebra document: {e}") from None
    labels = [b for b, _ in basis]
    if len(set(labels)) != len(labels):
        raise FormatError("duplicate basis names")
    deg = dict(basis)
    for (u, v), val in table.items():
        for x in (u, v, *val):
            if x not in deg:
                raise FormatError(f"unknown basis element {x!r}")
        for w, c in val.items():
            if c and deg[w] != deg[u] + deg[v]:
                raise FormatError(f"[{u}, {v}] has a term {w} of the wrong degree")
    try:
        return from_brackets(ring, N, basis, table, name or doc.get("name", ""))
    except ValueError as e:
        raise FormatError(str(e)) from None


# ------------------------------------------------------- Artin algebras
def artin_to_dict(A: ArtinAlgebra) -> dict[str, Any]:
    products = []
    for i in range(1, A.dim):
        for j in range(i, A.dim):
            terms = [[A.labels[k], int(c)] for k, c in enumerate(A.mult[i, j]) if c]
            if terms:
                products.append([A.labels[i], A.labels[j], terms])
    return {"prime": A.ring.l, "power": A.ring.k, "basis": list(A.labels), "products": products}


def artin_from_dict(doc: dict[str, Any], name: str = "") -> ArtinAlgebra:
    ring = _ring(doc)
    try:
        labels = list(doc["basis"])
        prods = {(u, v): {w: int(c) for w, c in terms} for u, v, terms in doc.get("products", [])}
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed commutative algebra document: {e}") from None
    try:
        A = ArtinAlgebra.from_products(ring, labels, prods, name or doc.get("name", ""))
    except (KeyError, ValueError) as e:
        raise FormatError(str(e)) from None
    problems = A.check()
    if problems:
        raise FormatError("; ".join(problems))
    return A


# ---------------------------------------------------------- deformations
def deformation_to_dict(Lt, lift_base: ArtinAlgebra | None = None) -> dict[str, Any]:
    bar, A = Lt.bar, Lt.base
    brackets = []
    for i in range(bar.dim):
        for j in range(i + 1, bar.dim):
            terms = [
                [bar.labels[k], A.labels[q], int(Lt.S[i, j, k, q])]
                for k in range(bar.dim)
                for q in range(A.dim)
                if Lt.S[i, j, k, q]
            ]
            if terms:
                brackets.append([bar.labels[i], bar.labels[j], terms])
    doc = {"algebra": lie_to_dict(bar), "base": artin_to_dict(A), "brackets": brackets}
    if lift_base is not None:
        doc["lift_base"] = artin_to_dict(lift_base)
    return doc


def deformation_from_dict(doc: dict[str, Any]):
    """Returns (LieOverBase, SmallExtension or None)."""
    from .deformation import LieOverBase

    bar = lie_from_dict(doc["algebra"])
    A = artin_from_dict(doc["base"], "A")
    S = np.zeros((bar.dim, bar.dim, bar.dim, A.dim), dtype=np.int64)
    try:
        for u, v, terms in doc["brackets"]:
            i, j = bar.index(u), bar.index(v)
            for w, a, c in terms:
                k, q = bar.index(w), A.labels.index(a)
                S[i, j, k, q] = c
                S[j, i, k, q] = -c
    except (KeyError, ValueError) as e:
        raise FormatError(f"malformed deformation bracket: {e}") from None
    try:
        Lt = LieOverBase(bar, A, S)
    except ValueError as e:
        raise FormatError(str(e)) from None
    ext = None
    if "lift_base" in doc:
        B = artin_from_dict(doc["lift_base"], "B")
        if list(B.labels[: A.dim]) != list(A.labels):
            raise FormatError("lift base must extend the base basis")
        mat = np.zeros((A.dim, B.dim), dtype=np.int64)
        mat[:, : A.dim] = np.eye(A.dim, dtype=np.int64)
        try:
            ext = SmallExtension.from_algebra(B, LocalHom(B, A, mat))
        except ValueError as e:
            raise FormatError(str(e)) from None
        # re-home the deformation on the extension's own base object
        Lt = LieOverBase(bar, ext.base, S)
    return Lt, ext


# ------------------------------------------------------- representations
def rep_to_dict(rho: GradedLieHom) -> dict[str, Any]:
    S, T = rho.source, rho.target
    images = {
        S.labels[b]: [[T.labels[k], int(rho.matrix[k, b])] for k in range(T.dim) if rho.matrix[k, b]]
        for b in range(S.dim)
    }
    return {"source": lie_to_dict(S), "target": lie_to_dict(T), "images": images}


def rep_from_dict(doc: dict[str, Any]) -> GradedLieHom:
    S = lie_from_dict(doc["source"], "G")
    T = lie_from_dict(doc["target"], "L")
    mat = np.zeros((T.dim, S.dim), dtype=np.int64)
    try:
        for g, terms in doc["images"].items():
            for w, c in terms:
                mat[T.index(w), S.index(g)] = c
    except KeyError as e:
        raise FormatError(f"unknown basis element {e.args[0]!r}") from None
    try:
        rho = GradedLieHom(S, T, mat % T.ring.modulus)
    except ValueError as e:
        raise FormatError(str(e)) from None
    if rho.compatibility_violations():
        raise FormatError("images do not define a Lie algebra homomorphism")
    return rho


def rep_deformation_to_dict(R, lift_base: ArtinAlgebra | None = None) -> dict[str, Any]:
    G, L, A = R.source, R.target, R.base
    images = {
        G.labels[g]: [[L.labels[k], A.labels[q], int(R.images[g, k, q])] for k in range(L.dim) for q in range(A.dim) if R.images[g, k, q]]
        for g in range(G.dim)
    }
    doc = {"rep": rep_to_dict(R.reduction()), "base": artin_to_dict(A), "images": images}
    if lift_base is not None:
        doc["lift_base"] = artin_to_dict(lift_base)
    return doc


def rep_deformation_from_dict(doc: dict[str, Any]):
    """Returns (RepDeformation, SmallExtension or None)."""
    from .deformation import RepDeformation

    rho = rep_from_dict(doc["rep"])
    A = artin_from_dict(doc["base"], "A")
    ext = None
    if "lift_base" in doc:
        B = artin_from_dict(doc["lift_base"], "B")
        mat = np.zeros((A.dim, B.dim), dtype=np.int64)
        mat[:, : A.dim] = np.eye(A.dim, dtype=np.int64)
        try:
            ext = SmallExtension.from_algebra(B, LocalHom(B, A, mat))
        except ValueError as e:
            raise FormatError(str(e)) from None
        A = ext.base
    G, L = rho.source, rho.target
    R = np.zeros((G.dim, L.dim, A.dim), dtype=np.int64)
    try:
        for g, terms in doc["images"].items():
            for w, a, c in terms:
                R[G.index(g), L.index(w), A.labels.index(a)] = c
    except (KeyError, ValueError) as e:
        raise FormatError(f"malformed representation images: {e}") from None
    try:
        dep = RepDeformation(G, L, A, R)
    except ValueError as e:
        raise FormatError(str(e)) from None
    if ((dep.images[..., 0] - rho.matrix.T) % A.p).any():
        raise FormatError("images do not reduce to the stated representation")
    return dep, ext


# --------------------------------------------------------------- files
def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load(path: str | Path) -> dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: not valid JSON ({e.msg})") from None


def save(doc: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def load_lie(path: str | Path) -> GradedLieAlgebra:
    return lie_from_dict(load(path), Path(path).stem)


__all__ = [
    "FormatError",
    "lie_to_dict",
    "lie_from_dict",
    "artin_to_dict",
    "artin_from_dict",
    "deformation_to_dict",
    "deformation_from_dict",
    "rep_to_dict",
    "rep_from_dict",
    "rep_deformation_to_dict",
    "rep_deformation_from_dict",
    "dumps",
    "load",
    "save",
    "load_lie",
]
