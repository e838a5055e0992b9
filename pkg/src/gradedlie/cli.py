"""Command-line front end: ``gradedlie <command> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .coeff import CoeffRing, is_prime

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    l: int = 3
    k: int = 1
    truncation: int = 5
    genus: int | None = None
    punctures: int | None = None
    seed: int = 42
    out: Path | None = None

    def __post_init__(self) -> None:
        if not is_prime(self.l):
            raise UsageError(f"--l {self.l} is not prime")
        if self.k < 1:
            raise UsageError("--k must be at least 1")
        if self.truncation < 1:
            raise UsageError("--max-degree must be at least 1")
        try:
            CoeffRing(self.l, self.k)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if (self.genus is None) != (self.punctures is None):
            raise UsageError("--genus and --punctures go together")
        if self.genus is not None:
            if self.genus < 0 or self.punctures < 0:
                raise UsageError("genus and punctures must be non-negative")
            if 2 * self.genus - 2 + self.punctures <= 0:
                raise UsageError("surface must be hyperbolic (2g - 2 + n > 0)")

    @property
    def ring(self) -> CoeffRing:
        return CoeffRing(self.l, self.k)

    @property
    def has_surface(self) -> bool:
        return self.genus is not None


# ------------------------------------------------------------------ output
def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["true" if v is True else "false" if v is False else v for v in r])
    return buf.getvalue()


def _emit(cfg: RunConfig, name: str, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / f"{name}.csv").write_text(text, encoding="utf-8")


def _config(ns: argparse.Namespace, default_n: int = 5) -> RunConfig:
    return RunConfig(
        l=ns.l,
        k=ns.k,
        truncation=ns.max_degree if ns.max_degree is not None else default_n,
        genus=ns.genus,
        punctures=ns.punctures,
        seed=ns.seed,
        out=Path(ns.out) if ns.out else None,
    )


def _load_algebra(ns: argparse.Namespace, cfg: RunConfig):
    from .io import FormatError, load_lie

    if ns.algebra:
        try:
            return load_lie(ns.algebra)
        except (OSError, FormatError) as e:
            raise UsageError(f"cannot read algebra file: {e}") from None
    if getattr(ns, "fixture", None):
        from .fixtures import LIE_FIXTURES

        if ns.fixture not in LIE_FIXTURES:
            raise UsageError(f"unknown fixture {ns.fixture!r} (choose from {', '.join(LIE_FIXTURES)})")
        return LIE_FIXTURES[ns.fixture](cfg.ring)
    if cfg.has_surface:
        return _surface(cfg)
    raise UsageError("give --algebra, --fixture or --genus/--punctures")


def _surface(cfg: RunConfig):
    from .free_lie import SurfaceSpec, surface_algebra

    if cfg.punctures == 0 and cfg.k > 1:
        raise UsageError("compact surfaces (n = 0) need --k 1")
    return surface_algebra(SurfaceSpec(cfg.genus, cfg.punctures), cfg.ring, cfg.truncation)


# ---------------------------------------------------------------- commands
def cmd_ranks(ns: argparse.Namespace) -> int:
    cfg = _config(ns)
    L = _load_algebra(ns, cfg)
    table = L.rank_table()
    rows = [(d, r, L.truncation) for d, r in enumerate(table, start=1)]
    _emit(cfg, "ranks", _csv(["degree", "rank", "exact_through"], rows))
    return EXIT_OK


OUT_HEADER = [
    "m", "dim_gr_m", "dim_gr_m1", "dim_gr_m2", "dim_middle", "rank_g", "rank_f", "dim_out",
    "g_injective", "f_surjective", "fg_zero", "middle_exact", "torsion", "certificate", "exact_through",
]


def cmd_out_ranks(ns: argparse.Namespace) -> int:
    from .out_graded import out_rank

    cfg = _config(ns, default_n=6)
    if not cfg.has_surface:
        raise UsageError("out-ranks needs --genus and --punctures")
    L = _surface(cfg)
    N = cfg.truncation
    max_m = ns.max_m if ns.max_m is not None else max(1, N - 2)
    rows, failed = [], False
    for m in range(1, max_m + 1):
        if m + 2 > N:
            rows.append([m] + [""] * 12 + ["insufficient-N", N])
            continue
        r = out_rank(L, m)
        if cfg.punctures == 0:
            cert = "uncertified"
        elif r.all_certificates:
            cert = "certified"
        else:
            cert, failed = "failed", True
        rows.append([
            m, r.dim_gr_m, r.dim_gr_m1, r.dim_gr_m2, r.dim_middle, r.rank_g, r.rank_f_induced, r.dim_out,
            r.g_injective, r.f_surjective, r.fg_zero, r.middle_exact, r.torsion_warning, cert, N,
        ])
    _emit(cfg, "out_ranks", _csv(OUT_HEADER, rows))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_cohomology(ns: argparse.Namespace) -> int:
    from .cohomology import CEComplex

    cfg = _config(ns)
    if cfg.k != 1:
        raise UsageError("cohomology is computed over F_l only (--k 1)")
    L = _load_algebra(ns, cfg)
    if L.ring.k != 1:
        raise UsageError("cohomology is computed over F_l only")
    qs = [ns.q] if ns.q is not None else [0, 1, 2, 3]
    if any(q < 0 or q > 3 for q in qs):
        raise UsageError("--q must be between 0 and 3")
    grade = ns.grade if ns.grade is not None else 0
    C = CEComplex(L)
    rows = []
    for q in qs:
        H = C.cohomology(q, grade)
        rows.append((q, grade, H.dim, H.exact_through))
    _emit(cfg, "cohomology", _csv(["q", "grade", "dim", "exact_through"], rows))
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    from .verify import SUITES, run_suites

    cfg = _config(ns)
    algebra = _load_algebra(ns, cfg) if ns.algebra else None
    selected = ns.suite or None
    if selected and set(selected) - set(SUITES):
        raise UsageError(f"unknown suite; choose from {', '.join(SUITES)}")
    results = run_suites(selected, cfg.seed, algebra)
    text = "".join(r.line() + "\n" for r in results)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "verify.txt").write_text(text, encoding="utf-8")
    return EXIT_FAIL if any(r.status == "FAIL" for r in results) else EXIT_OK


def _rep(ns: argparse.Namespace, cfg: RunConfig):
    from .fixtures import REP_FIXTURES
    from .io import FormatError, load, rep_from_dict

    if ns.rep:
        try:
            return rep_from_dict(load(ns.rep))
        except (OSError, FormatError, KeyError) as e:
            raise UsageError(f"cannot read representation file: {e}") from None
    name = ns.rep_fixture or "free-one"
    if name not in REP_FIXTURES:
        raise UsageError(f"unknown representation fixture {name!r} (choose from {', '.join(REP_FIXTURES)})")
    return REP_FIXTURES[name](cfg.ring)


def cmd_deform(ns: argparse.Namespace) -> int:
    from . import deformation as D

    cfg = _config(ns)
    if cfg.k != 1:
        raise UsageError("deformations are computed over F_l only (--k 1)")
    mode = ns.mode
    if mode in ("eta", "miniversal"):
        L = _load_algebra(ns, cfg)
        if mode == "eta":
            step = D.eta_deformation(L)
            A = step.base
            rows = []
            S = step.eta.S
            for i in range(L.dim):
                for j in range(i + 1, L.dim):
                    for k in range(L.dim):
                        for q in range(A.dim):
                            if S[i, j, k, q]:
                                rows.append((L.labels[i], L.labels[j], L.labels[k], A.labels[q], int(S[i, j, k, q]), L.truncation))
            _emit(cfg, "eta", _csv(["u", "v", "w", "base", "coeff", "exact_through"], rows))
        else:
            steps = ns.steps if ns.steps is not None else 2
            if steps < 1:
                raise UsageError("--steps must be at least 1")
            out = D.miniversal(L, steps)
            rows = [(s.index, s.base.dim, s.base.cotangent_dim(), len(s.relations), s.eta.is_lie(), L.truncation) for s in out]
            _emit(cfg, "miniversal", _csv(["step", "base_dim", "tangent_dim", "relations", "jacobi", "exact_through"], rows))
        return EXIT_OK
    rho = _rep(ns, cfg)
    if rho.source.ring.l != cfg.l:
        cfg = RunConfig(rho.source.ring.l, 1, cfg.truncation, None, None, cfg.seed, cfg.out)
    exact = min(rho.source.truncation, rho.target.truncation)
    if mode == "tangent":
        h1 = D.tangent_space_rep(rho)
        h2 = D.obstruction_space_rep(rho)
        _emit(cfg, "tangent", _csv(["h1_dim", "h2_dim", "exact_through"], [(h1.dim, h2.dim, exact)]))
        return EXIT_OK
    qp = D.quadratic_presentation(rho)
    meta = (qp.n_parameters, qp.h2_dim, qp.available, exact)
    rows = []
    for j, rel in enumerate(qp.relations or ()):
        for (s, t), c in sorted(rel.items()):
            rows.append((j, s, t, c) + meta)
    if not rows:  # no relations (or l = 2): one row carrying the metadata
        rows.append(("", "", "", "") + meta)
    header = ["relation", "s", "t", "coeff", "parameters", "h2_dim", "relations_available", "exact_through"]
    _emit(cfg, "quadratic", _csv(header, rows))
    return EXIT_OK


# ------------------------------------------------------------------ parser
def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--l", type=int, default=3, help="prime l (default 3)")
    p.add_argument("--k", type=int, default=1, help="work modulo l^k (default 1)")
    p.add_argument("--max-degree", type=int, default=None, help="truncation degree N")
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--punctures", type=int, default=None)
    p.add_argument("--algebra", default=None, help="JSON algebra file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default=None, help="output directory (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradedlie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ranks", help="ranks of the graded pieces")
    _common(p)
    p.add_argument("--fixture", default=None)
    p.set_defaults(func=cmd_ranks)

    p = sub.add_parser("out-ranks", help="graded outer-automorphism dimensions with certificates")
    _common(p)
    p.add_argument("--max-m", type=int, default=None, help="largest m (default N - 2)")
    p.set_defaults(func=cmd_out_ranks)

    p = sub.add_parser("cohomology", help="dimensions of H^q(L, L)(grade)")
    _common(p)
    p.add_argument("--fixture", default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--grade", type=int, default=None)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("verify", help="run the property suites")
    _common(p)
    p.add_argument("--suite", action="append", default=[], help="run only this suite (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("deform", help="deformation computations")
    p.add_argument("mode", choices=["eta", "miniversal", "tangent", "quadratic"])
    _common(p)
    p.add_argument("--fixture", default=None, help="named Lie algebra fixture")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--rep", default=None, help="JSON representation file")
    p.add_argument("--rep-fixture", default=None, help="named representation fixture")
    p.set_defaults(func=cmd_deform)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:  # argparse reports usage errors with code 2
        return int(e.code or 0)
    try:
        return ns.func(ns)
    except UsageError as e:
        sys.stderr.write(f"gradedlie: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
