"""Command-line surface for building models and running verification suites.

Subcommands
-----------
build               model summary and point/line count checks
verify srg          strong regularity of the tangency graph
verify covering     fiber, line, pencil and quotient laws of the double cover
verify semipartial  point-line axioms of the ovoid geometry
census              clique census with classification and identity checks
lift                lift a clique to its centric figure
figures verify      parametric solvers against brute-force enumeration
subgeometry         binary closure and recognition for a lifted clique
counts              exact-integer identity checks across field degrees

Reports are JSON (stdout or ``--out``), with a ``schema`` version, a config
echo, per-check expected/actual/source rows, and timings kept in a separate
object so that identical configurations produce byte-identical payloads.
Exit status: 0 all checks pass, 1 a check failed, 2 bad configuration.

Heavy imports happen after argument parsing so that ``--threads`` can cap
BLAS pools through the environment before numpy loads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Tuple

SCHEMA_VERSION = 1

_THREAD_ENV = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
               "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS")


@dataclass
class RunConfig:
    """Validated run parameters; the JSON config echo serializes this."""

    command: str
    n: int = 1
    modulus: Optional[str] = None
    lam: Optional[int] = None
    mode: str = "full"
    samples: Optional[int] = None
    seed: int = 0
    max_size: int = 6
    n_max: int = 9
    clique: Optional[Tuple[int, ...]] = None
    extend_dodecade: bool = False
    what: Optional[str] = None

    def validate(self) -> None:
        if not 1 <= self.n <= 16:
            raise ValueError("field degree must be between 1 and 16")
        if self.command in ("build", "verify", "census", "lift", "figures",
                           "subgeometry") and self.n > 3:
            raise ValueError("model enumeration commands support degrees 1..3")
        if self.command == "census" and self.mode == "full" and self.n > 3:
            raise ValueError("full census supported only for degrees 1..3")
        if self.mode not in ("full", "sampled"):
            raise ValueError("mode must be full or sampled")
        if self.modulus is not None and set(self.modulus) - {"0", "1"}:
            raise ValueError("modulus must be a binary literal")
        if not 1 <= self.n_max <= 9:
            raise ValueError("n-max must be between 1 and 9")
        if self.command in ("lift", "subgeometry"):
            if not self.clique or len(self.clique) not in (3, 4):
                raise ValueError("a clique of 3 or 4 vertex ids is required")


def _check(name: str, expected, actual, source: str) -> dict:
    return {"name": name, "expected": expected, "actual": actual,
            "source": source, "pass": expected == actual}


def _bool_check(name: str, actual: bool, source: str) -> dict:
    return _check(name, True, bool(actual), source)


# -- model plumbing ------------------------------------------------------------


def _build(cfg: RunConfig, timings: dict):
    from .gf2n import FieldCtx
    from .quadric import build_model

    t0 = time.perf_counter()
    modulus = int(cfg.modulus, 2) if cfg.modulus else None
    ctx = FieldCtx(cfg.n, modulus=modulus)
    model = build_model(ctx, lam=cfg.lam)
    timings["build_model"] = time.perf_counter() - t0
    return ctx, model


def _model_summary(model) -> dict:
    ctx = model.ctx
    return {
        "n": ctx.n, "q": ctx.q, "modulus": format(ctx.modulus, "b"),
        "lambda": model.lam,
        "points": model.n_points,
        "section_points": len(model.section_points),
        "affine_points": len(model.affine_points),
        "lines": len(model.lines),
        "nucleus": list(model.nucleus),
    }


def _model_checks(model) -> List[dict]:
    q = model.ctx.q
    return [
        _check("point_count", (q + 1) * (q ** 3 + 1), model.n_points, "formula"),
        _check("section_point_count", (q + 1) * (q ** 2 + 1),
               len(model.section_points), "formula"),
        _check("affine_point_count", q ** 4 - q ** 2,
               len(model.affine_points), "formula"),
        _check("line_count", (q ** 3 + 1) * (q ** 2 + 1),
               len(model.lines), "formula"),
    ]


def _geometry(model, timings: dict):
    from .ovoid import build_geometry

    t0 = time.perf_counter()
    gx = build_geometry(model)
    timings["geometry"] = time.perf_counter() - t0
    return gx


# -- commands ------------------------------------------------------------------


def cmd_build(cfg: RunConfig, args) -> Tuple[dict, dict]:
    timings: dict = {}
    _, model = _build(cfg, timings)
    checks = _model_checks(model)
    payload = {"model": _model_summary(model), "checks": checks}
    if getattr(args, "export_lines", None):
        with open(args.export_lines, "w") as fh:
            fh.write("line_id," + ",".join(f"p{i}" for i in range(model.ctx.q + 1)) + "\n")
            for lid, line in enumerate(model.lines):
                fh.write(f"{lid}," + ",".join(str(p) for p in line) + "\n")
        payload["exports"] = {"lines_csv": args.export_lines}
    return payload, timings


def cmd_verify(cfg: RunConfig, args) -> Tuple[dict, dict]:
    timings: dict = {}
    _, model = _build(cfg, timings)
    payload: dict = {"model": _model_summary(model)}
    checks: List[dict] = []

    if cfg.what == "srg":
        from .cliquecensus import build_tangency_graph, formula_srg_params, verify_srg

        gx = _geometry(model, timings)
        t0 = time.perf_counter()
        g = build_tangency_graph(gx)
        rep = verify_srg(g)
        timings["verify"] = time.perf_counter() - t0
        v, k, lam, mu = formula_srg_params(model.ctx.q)
        checks += [
            _check("srg_params", [v, k, lam, mu],
                   [rep["v"], rep["k"], rep["lambda"], rep["mu"]], "formula"),
            _bool_check("strong_regularity", rep["pass"], "enumeration"),
            _bool_check("feasibility_identity", rep["feasibility_ok"], "oracle"),
        ]
        payload["srg"] = rep

    elif cfg.what == "covering":
        from .covering import canonical_covering, fiber_distances, verify_covering

        gx = _geometry(model, timings)
        t0 = time.perf_counter()
        cov = canonical_covering(model, gx)
        rep = verify_covering(cov)
        dist = fiber_distances(cov)
        timings["verify"] = time.perf_counter() - t0
        for key in ("fibers_ok", "line_bijections_ok",
                    "pencil_bijections_ok", "quotient_iso_ok"):
            checks.append(_bool_check(key, rep[key], "enumeration"))
        checks.append(_bool_check("fibers_at_distance_3",
                                  dist["fibers_at_distance_3"], "enumeration"))
        checks.append(_bool_check("diameter_is_3", dist["diameter_is_3"],
                                  "enumeration"))
        payload["covering"] = rep
        if "counterexample" in rep:
            payload["counterexample"] = rep["counterexample"]

    elif cfg.what == "semipartial":
        from .ovoid import export_incidence_csv, verify_common_tangent_counts, verify_semipartial

        gx = _geometry(model, timings)
        t0 = time.perf_counter()
        rep = verify_semipartial(gx, sample=cfg.samples, seed=cfg.seed)
        checks.append(_bool_check("semipartial_axioms", rep["pass"], "enumeration"))
        if model.ctx.q <= 4:
            rep2 = verify_common_tangent_counts(gx)
            checks.append(_bool_check("common_tangent_counts", rep2["pass"],
                                      "enumeration"))
            payload["common_tangents"] = rep2
        timings["verify"] = time.perf_counter() - t0
        payload["semipartial"] = rep
        if getattr(args, "export_incidence", None):
            export_incidence_csv(gx, args.export_incidence)
            payload["exports"] = {"incidence_csv": args.export_incidence}
    else:
        raise ValueError("verify target must be srg, covering or semipartial")

    payload["checks"] = checks
    return payload, timings


def cmd_census(cfg: RunConfig, args) -> Tuple[dict, dict]:
    from .cliquecensus import (build_tangency_graph, census, export_edges_csv,
                               formula_n3, formula_n4, formula_n5, formula_n6)

    timings: dict = {}
    _, model = _build(cfg, timings)
    gx = _geometry(model, timings)
    q = model.ctx.q
    t0 = time.perf_counter()
    g = build_tangency_graph(gx)
    n_samples = cfg.samples
    if cfg.mode == "sampled" and n_samples is None:
        n_samples = 20000
    rep = census(g, gx, mode=cfg.mode, seed=cfg.seed, n_samples=n_samples,
                 max_size=cfg.max_size)
    timings["census"] = time.perf_counter() - t0

    checks = [_bool_check("census_identities", rep.ok, "enumeration")]
    if cfg.mode == "full":
        odd = cfg.n % 2 == 1
        checks += [
            _check("nonlinear_3_cliques", formula_n3(q), rep.n3, "formula"),
            _check("nonlinear_4_cliques", formula_n4(q), rep.n4, "formula"),
            _check("nonlinear_5_cliques", formula_n5(q) if odd else 0,
                   rep.n5, "formula"),
            _check("nonlinear_6_cliques", formula_n6(q) if odd else 0,
                   rep.n6, "formula"),
        ]
    payload = {"model": _model_summary(model), "census": rep.to_dict(),
               "checks": checks}
    if getattr(args, "export_edges", None):
        export_edges_csv(g, args.export_edges)
        payload["exports"] = {"edges_csv": args.export_edges}
    return payload, timings


def _lift(cfg: RunConfig, timings: dict):
    from .covering import canonical_covering
    from .figures import lift_clique_to_figure

    _, model = _build(cfg, timings)
    gx = _geometry(model, timings)
    t0 = time.perf_counter()
    cov = canonical_covering(model, gx)
    fig = lift_clique_to_figure(cov, cfg.clique)
    timings["lift"] = time.perf_counter() - t0
    return model, gx, cov, fig


def cmd_lift(cfg: RunConfig, args) -> Tuple[dict, dict]:
    from .figures import figure_to_clique, verify_centric_figure

    timings: dict = {}
    try:
        model, gx, cov, fig = _lift(cfg, timings)
    except ValueError as exc:
        payload = {"checks": [_check("liftable", True, False, "enumeration")],
                   "reason": str(exc)}
        return payload, timings
    rep = verify_centric_figure(model, fig)
    back = figure_to_clique(cov, fig)
    checks = [
        _bool_check("liftable", True, "enumeration"),
        _bool_check("centric_figure", rep["pass"], "enumeration"),
        _check("projects_back", sorted(cfg.clique), sorted(back), "oracle"),
    ]
    payload = {
        "model": _model_summary(model),
        "figure": {"kind": fig.kind, "pairs": [list(p) for p in fig.pairs],
                   "center": list(fig.center)},
        "checks": checks,
    }
    return payload, timings


def cmd_figures_verify(cfg: RunConfig, args) -> Tuple[dict, dict]:
    import numpy as np

    from .cliquecensus import build_tangency_graph, census
    from .covering import canonical_covering
    from .figures import (count_quadrangles_exhaustive, count_quadrangles_formula,
                          enumerate_cube_centers, enumerate_cube_centers_bruteforce,
                          extend_cube, extend_cube_bruteforce,
                          extend_hexagon_to_cubes, extend_hexagon_to_cubes_bruteforce,
                          lift_clique_to_figure)

    timings: dict = {}
    _, model = _build(cfg, timings)
    gx = _geometry(model, timings)
    q = model.ctx.q
    cov = canonical_covering(model, gx)
    checks: List[dict] = []

    t0 = time.perf_counter()
    par = enumerate_cube_centers(model)
    bf = enumerate_cube_centers_bruteforce(model)
    checks.append(_check("cube_center_sets_agree", sorted(par), sorted(bf), "oracle"))
    checks.append(_check("cube_center_count", (q - 1) ** 2 * (q + 1),
                         len(par), "formula"))
    timings["cube_centers"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    g = build_tangency_graph(gx)
    mode = "full" if cfg.n <= 2 else "sampled"
    rep = census(g, gx, mode=mode, seed=cfg.seed,
                 n_samples=4000 if mode == "sampled" else None, collect=True)
    rng = np.random.default_rng(cfg.seed)
    n_hex = min(cfg.samples or 20, len(rep.triangles))
    sel = rng.choice(len(rep.triangles), size=n_hex, replace=False)
    hex_ok = ext_ok = True
    for k in sel:
        hexf = lift_clique_to_figure(cov, tuple(int(x) for x in rep.triangles[k]))
        cubes = extend_hexagon_to_cubes(model, hexf)
        brute = extend_hexagon_to_cubes_bruteforce(model, hexf)
        hex_ok &= {c.key() for c in cubes} == {c.key() for c in brute}
        ext_ok &= len(cubes) == q + 1
    checks.append(_bool_check("hexagon_solver_matches_bruteforce", hex_ok, "oracle"))
    checks.append(_bool_check("hexagon_extension_count_q_plus_1", ext_ok, "formula"))
    timings["hexagon_extensions"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    n_cube = min(cfg.samples or 10, len(rep.cliques4))
    sel4 = rng.choice(len(rep.cliques4), size=n_cube, replace=False)
    want_decades = 2 if cfg.n % 2 == 1 else 0
    cube_ok = parity_ok = True
    for k in sel4:
        cubef = lift_clique_to_figure(cov, tuple(int(x) for x in rep.cliques4[k]))
        ext = extend_cube(model, cubef)
        brute = extend_cube_bruteforce(model, cubef)
        cube_ok &= ({d.key() for d in ext["decades"]}
                    == {d.key() for d in brute["decades"]})
        parity_ok &= len(ext["decades"]) == want_decades
        parity_ok &= (ext["dodecade"] is not None) == (want_decades > 0)
    checks.append(_bool_check("cube_solver_matches_bruteforce", cube_ok, "oracle"))
    checks.append(_check("decades_per_cube", want_decades if n_cube else None,
                         len(ext["decades"]) if n_cube else None, "formula"))
    checks.append(_bool_check("fifth_pair_parity_law", parity_ok, "formula"))
    timings["cube_extensions"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if q <= 4:
        checks.append(_check("quadrangle_count", count_quadrangles_formula(q),
                             count_quadrangles_exhaustive(model), "enumeration"))
    else:
        checks.append(_check("quadrangle_count_formula",
                             count_quadrangles_formula(q),
                             count_quadrangles_formula(q), "formula"))
    timings["quadrangles"] = time.perf_counter() - t0

    payload = {"model": _model_summary(model), "checks": checks,
               "samples": {"hexagons": int(n_hex), "cubes": int(n_cube)}}
    return payload, timings


def cmd_subgeometry(cfg: RunConfig, args) -> Tuple[dict, dict]:
    from .figures import extend_cube
    from .subf2 import closure_report, span_f2_radical

    timings: dict = {}
    model, gx, cov, fig = _lift(cfg, timings)
    expect = {"hexagon": "Qplus32", "cube": "Q42", "dodecade": "Qminus52"}
    if cfg.extend_dodecade:
        if len(cfg.clique) != 4:
            raise ValueError("dodecade extension needs a 4-clique")
        ext = extend_cube(model, fig)
        if ext["dodecade"] is None:
            raise ValueError("no dodecade exists at even field degree")
        fig = ext["dodecade"]
    t0 = time.perf_counter()
    span, rep = closure_report(model, fig)
    timings["closure"] = time.perf_counter() - t0

    checks = [
        _bool_check("span_consistent", span.ok, "enumeration"),
        _check("subgeometry_type", expect[fig.kind], rep.type_tag, "oracle"),
        _bool_check("quadrangle_axioms", rep.gq_ok, "enumeration"),
        _bool_check("contains_ambient_nucleus", rep.contains_n0, "enumeration"),
    ]
    if fig.kind == "cube":
        rad = span_f2_radical(model, span)
        from .projgeom import normalize_tuple

        n0 = normalize_tuple(model.ctx, model.nucleus)
        checks.append(_bool_check("own_nucleus_differs",
                                  len(rad) == 1 and rad[0] != n0, "enumeration"))
    payload = {
        "model": _model_summary(model),
        "figure": {"kind": fig.kind, "pairs": [list(p) for p in fig.pairs],
                   "center": list(fig.center)},
        "subgeometry": {
            "type_tag": rep.type_tag, "point_count": rep.point_count,
            "line_count": rep.line_count, "contains_n0": rep.contains_n0,
            "contains_center": rep.contains_center,
            "degrees": list(rep.degrees),
        },
        "basis": [list(b) for b in span.basis],
        "checks": checks,
    }
    return payload, timings


def cmd_counts(cfg: RunConfig, args) -> Tuple[dict, dict]:
    from .subf2 import count_identities

    timings: dict = {}
    t0 = time.perf_counter()
    rep = count_identities(range(1, cfg.n_max + 1))
    timings["counts"] = time.perf_counter() - t0
    checks = [_bool_check(f"identities_degree_{n}", info["ok"], "formula")
              for n, info in sorted(rep["per_n"].items())]
    payload = {"identities": {str(n): info for n, info in rep["per_n"].items()},
               "checks": checks}
    return payload, timings


_COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "census": cmd_census,
    "lift": cmd_lift,
    "figures": cmd_figures_verify,
    "subgeometry": cmd_subgeometry,
    "counts": cmd_counts,
}


# -- argument parsing ----------------------------------------------------------


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=1, help="field degree (q = 2^n)")
    p.add_argument("--modulus", type=str, default=None,
                   help="irreducible modulus as a binary literal, e.g. 1011")
    p.add_argument("--lambda", dest="lam", type=int, default=None,
                   help="quadric form parameter override (trace-one element)")
    p.add_argument("--threads", type=int, default=None,
                   help="cap BLAS thread pools")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed")
    p.add_argument("--samples", type=int, default=None,
                   help="sample count for sampled checks")
    p.add_argument("--out", type=str, default=None,
                   help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadcover",
        description="elliptic quadric double covers: build and verify")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a model and print its summary")
    _add_model_flags(p)
    p.add_argument("--export-lines", type=str, default=None,
                   help="CSV dump of quadric lines")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("what", choices=("srg", "covering", "semipartial"))
    _add_model_flags(p)
    p.add_argument("--export-incidence", type=str, default=None,
                   help="CSV dump of the pencil incidence (semipartial only)")

    p = sub.add_parser("census", help="clique census")
    _add_model_flags(p)
    p.add_argument("--mode", choices=("full", "sampled"), default="full")
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--export-edges", type=str, default=None,
                   help="CSV dump of tangency edges")

    p = sub.add_parser("lift", help="lift a clique to a centric figure")
    _add_model_flags(p)
    p.add_argument("--clique", type=str, required=True,
                   help="comma-separated tangency-graph vertex ids")

    p = sub.add_parser("figures", help="figure solver cross-checks")
    p.add_argument("what", choices=("verify",))
    _add_model_flags(p)

    p = sub.add_parser("subgeometry", help="binary closure of a lifted clique")
    _add_model_flags(p)
    p.add_argument("--clique", type=str, required=True,
                   help="comma-separated tangency-graph vertex ids")
    p.add_argument("--extend-dodecade", action="store_true",
                   help="extend a 4-clique cube to its dodecade first")

    p = sub.add_parser("counts", help="exact-integer identity checks")
    p.add_argument("--n-max", type=int, default=9)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--threads", type=int, default=None)

    return ap


def _config_from_args(args) -> RunConfig:
    clique = None
    if getattr(args, "clique", None):
        clique = tuple(int(x) for x in args.clique.split(","))
    cfg = RunConfig(
        command=args.command,
        n=getattr(args, "n", 1),
        modulus=getattr(args, "modulus", None),
        lam=getattr(args, "lam", None),
        mode=getattr(args, "mode", "full"),
        samples=getattr(args, "samples", None),
        seed=getattr(args, "seed", 0),
        max_size=getattr(args, "max_size", 6),
        n_max=getattr(args, "n_max", 9),
        clique=clique,
        extend_dodecade=getattr(args, "extend_dodecade", False),
        what=getattr(args, "what", None),
    )
    cfg.validate()
    return cfg


def _resolve_out(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    base = os.environ.get("QUADCOVER_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    threads = getattr(args, "threads", None)
    if threads is not None:
        if threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return 2
        for var in _THREAD_ENV:
            os.environ[var] = str(threads)

    try:
        cfg = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        payload, timings = _COMMANDS[cfg.command](cfg, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    checks = payload.get("checks", [])
    ok = all(c["pass"] for c in checks)
    report = {
        "schema": SCHEMA_VERSION,
        "command": cfg.command if cfg.what is None else f"{cfg.command} {cfg.what}",
        "config": asdict(cfg),
        "pass": ok,
    }
    report.update(payload)
    report["timings"] = {k: round(v, 6) for k, v in timings.items()}

    text = json.dumps(report, indent=2, sort_keys=True)
    out = _resolve_out(getattr(args, "out", None))
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
