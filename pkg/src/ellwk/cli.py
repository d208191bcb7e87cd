"""Command-line entry point: ``ellwk <module> <action> [options]`` emitting JSON reports.

Exit codes: 0 when every requested residual is within tolerance, 1 on a residual
failure, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import BudgetExhausted, EllwkError, SpecFileError

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    action: str | None
    spec: str | None
    chart: str | None
    seed: int
    out: str | None
    tol: float

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


# --- JSON --------------------------------------------------------------------------

def jsonable(obj):
    """Convert reports to plain JSON: complex -> [re, im], Fraction -> "p/q"."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _float(x) -> float | str:
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def emit(report: dict, out: str | None) -> None:
    text = json.dumps(jsonable({"schema": SCHEMA, **report}), indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        _sys.stdout.write(text)


def _fail_table(rows: dict[str, float], tol: float) -> None:
    bad = {k: v for k, v in rows.items() if not v < tol}
    if bad:
        width = max(len(k) for k in bad)
        print("failing residuals:", file=_sys.stderr)
        for k, v in sorted(bad.items()):
            print(f"  {k:<{width}}  {v:.3e}  (tol {tol:g})", file=_sys.stderr)


# --- loading ---------------------------------------------------------------------------

def _system(cfg: RunConfig):
    from .rootsys import build_system, load_spec

    if cfg.spec is None:
        return build_system("A", 1)
    return load_spec(cfg.spec)


def _chart(cfg: RunConfig, default: str):
    from .frobenius import fixtures
    from .frobenius.chart import load_chart

    if cfg.chart is None:
        return fixtures.a3_chart() if default == "a3" else fixtures.d1_chart()
    return load_chart(cfg.chart)


# --- subcommands -----------------------------------------------------------------------

def cmd_rootsys(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from .rootsys import check_axioms

    sys = _system(cfg)
    rep = check_axioms(sys, args.radius)
    info = {"base_type": sys.base_type, "rank": sys.l, "n": sys.n,
            "gram_scale": sys.gram_scale, "finite_roots": len(sys.finite_roots),
            "gram": [[str(v) for v in row] for row in sys.space.gram]}
    return {"system": info, "axioms": rep.as_dict()}, rep.all_pass, {}


def cmd_weyl(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from . import weyl
    from .suite import _group_identities

    sys = _system(cfg)
    if cfg.action == "g0":
        res = weyl.compute_g0(sys, args.budget, shift=args.shift)
        return {"g0": res.as_dict(), "backend": res.backend}, True, {}
    bad = _group_identities(sys, args.words, random.Random(cfg.seed))
    return {"words": args.words, "failures": bad}, all(v == 0 for v in bad.values()), \
        {k: float(v) for k, v in bad.items()}


def cmd_domain(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from . import domain as dom

    sys = _system(cfg)
    pts = []
    worst = 0.0
    inside = True
    for i in range(args.count):
        x = dom.sample_D2(sys, cfg.seed + i)
        cl = dom.classify(sys, x)
        worst = max(worst, abs(cl["quadric_residual"]))
        inside &= bool(cl["in_D2"])
        pts.append({"coords": x.coords, "tau": x.tau, "classification": cl})
    rows = {"quadric_residual": worst}
    return {"points": pts}, inside and worst < cfg.tol, rows


def cmd_tensors(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from . import domain as dom
    from . import tensors as ten
    from . import weyl

    sys = _system(cfg)
    rng = random.Random(cfg.seed)
    nrng = np.random.default_rng(cfg.seed)
    elements = [weyl.random_word(sys, rng, rng.randint(1, 4)) for _ in range(args.elements)]
    tangent, cotangent = [], []
    for i in range(args.samples):
        x = dom.sample_D2(sys, cfg.seed + i)
        tangent.append((x, ten.random_tangent(sys, x, nrng), ten.random_tangent(sys, x, nrng)))
        cotangent.append((x, ten.random_cotangent(sys, x, nrng), ten.random_cotangent(sys, x, nrng)))
    rows = {}
    for tid, data in (("I_D", tangent), ("I_D2", tangent), ("I_D2*", cotangent)):
        rows[f"{tid} phi"] = max(ten.check_equivariance(sys, tid, g, data) for g in elements)
        rows[f"{tid} psi"] = ten.check_equivariance(sys, tid, 0.5 + 1.5j, data)
    ok = all(v < cfg.tol for v in rows.values())
    return {"residuals": rows}, ok, rows


def cmd_invariants(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from . import domain as dom
    from . import invariants as inv
    from . import weyl

    sys = _system(cfg)
    c = weyl.compute_g0(sys, 4).coefficient
    if cfg.action == "dim":
        rep = inv.invariant_space_dim(sys, args.m, c, N=args.N)
        return {"m": args.m, "rank": rep.as_dict()}, rep.determinate, {}
    weight = tuple(Fraction(0) for _ in range(sys.l))
    f = inv.theta_orbit(sys, weight, args.m, c, N=args.N)
    x = dom.sample_D2(sys, cfg.seed, tau=complex(args.tau))
    if cfg.action == "eval":
        return {"m": args.m, "N": args.N, "point": x.coords, "value": inv.evaluate(f, x)}, True, {}
    res = inv.check_bidegree(f, sys, x, c, seed_=cfg.seed)
    tols = {"r_W": 1e-6, "r_rho": 1e-10, "r_psi": 1e-12}
    rows = res.as_dict()
    ok = all(rows[k] < tols[k] for k in tols)
    return {"m": args.m, "N": args.N, "residuals": rows, "tolerances": tols}, ok, \
        {k: v for k, v in rows.items() if not v < tols[k]}


def cmd_frobenius(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from .frobenius import chart as fch
    from .frobenius import fixtures
    from .frobenius.bundle import BundleChart, good_section_test, section_report, trivial_section
    from .frobenius.deform import DeformationSpec, conformal_deform

    if cfg.action == "check":
        ch = _chart(cfg, "a3")
        rep = fch.check_frobenius(ch, sample_count=args.samples, seed=cfg.seed, tol=cfg.tol)
        return {"chart": ch.name, "report": rep.as_dict()}, rep.passed, rep.residuals
    if cfg.action == "intersect":
        ch = _chart(cfg, "a3")
        pts = fch.sample_box(ch.n, args.samples, seed=cfg.seed)
        sym = max(float(np.max(np.abs(fch.intersection_form(ch, t) - fch.intersection_form(ch, t).T)))
                  for t in pts)
        shift = fch.check_e_shift(ch, points=pts)
        rows = {"symmetry": sym, "e_shift_first": shift.first, "e_shift_second": shift.second}
        return {"chart": ch.name, "e_shift": shift.as_dict(), "symmetry": sym}, \
            all(v < cfg.tol for v in rows.values()), rows
    if cfg.action == "deform":
        ch = _chart(cfg, "a3")
        if args.affine is not None:
            coeffs = [float(v) for v in args.affine.split(",")]
            if len(coeffs) != ch.n:
                raise SpecFileError(f"--affine: expected {ch.n} coefficients, got {len(coeffs)}")
            specs = {"custom": DeformationSpec.affine(coeffs, args.const)}
        else:
            specs = fixtures.deformation_family(ch)
            if args.family:
                if args.family not in specs:
                    raise SpecFileError(f"--family: unknown '{args.family}' (known: {sorted(specs)})")
                specs = {args.family: specs[args.family]}
        reports = {k: conformal_deform(ch, s) for k, s in specs.items()}
        ok = all(r.iff_holds for r in reports.values())
        return {"chart": ch.name, "deformations": {k: r.as_dict() for k, r in reports.items()}}, ok, \
            {f"{k} iff": 0.0 if r.iff_holds else 1.0 for k, r in reports.items()}
    # sections
    ch = _chart(cfg, "d1")
    bundle = BundleChart(ch)
    f = trivial_section(ch.n)
    pts = fch.sample_box(ch.n, args.samples, seed=cfg.seed)
    rows, out = {}, {}
    for name, g in fixtures.sections().items():
        test = good_section_test(bundle, f, g, pts)
        full = section_report(bundle, g, pts)
        agree = test.good == full["passed"]
        out[name] = {"criterion": test.as_dict(), "pullback": full, "agree": agree}
        rows[f"{name} agreement"] = 0.0 if agree else 1.0
    return {"chart": ch.name, "sections": out}, all(v == 0 for v in rows.values()), rows


def cmd_suite(cfg: RunConfig, args) -> tuple[dict, bool, dict]:
    from .suite import run_suite

    only = [int(v) for v in args.only.split(",")] if args.only else None
    results = run_suite(only)
    for r in results:
        print(r.line, file=_sys.stderr)
    rows = [dict(r.as_dict(), runtime_s=None) for r in results]  # timings vary; kept off the report
    ok = all(r.passed for r in results)
    return {"criteria": rows, "passed": sum(r.passed for r in results), "total": len(results)}, ok, \
        {f"criterion {r.number}": 0.0 if r.passed else 1.0 for r in results}


HANDLERS = {"rootsys": cmd_rootsys, "weyl": cmd_weyl, "domain": cmd_domain, "tensors": cmd_tensors,
            "invariants": cmd_invariants, "frobenius": cmd_frobenius, "suite": cmd_suite}


# --- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="root-system spec file (TOML); default A1")
    common.add_argument("--chart", help="Frobenius chart file (JSON)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--tol", type=float, default=1e-9)

    p = argparse.ArgumentParser(prog="ellwk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    r = sub.add_parser("rootsys", parents=[common], help="root-system axioms")
    r.add_argument("action", nargs="?", default="check", choices=["check", "describe"])
    r.add_argument("--radius", type=int, default=2)

    w = sub.add_parser("weyl", parents=[common], help="hyperbolic extension and K2_Z generator")
    w.add_argument("action", choices=["g0", "check"])
    w.add_argument("--budget", type=int, default=8, help="maximum word length")
    w.add_argument("--shift", type=int, default=1)
    w.add_argument("--words", type=int, default=200)

    d = sub.add_parser("domain", parents=[common], help="sample points of D^2")
    d.add_argument("action", nargs="?", default="sample", choices=["sample"])
    d.add_argument("--count", type=int, default=5)

    t = sub.add_parser("tensors", parents=[common], help="invariance of the induced forms")
    t.add_argument("action", nargs="?", default="check", choices=["check"])
    t.add_argument("--samples", type=int, default=10)
    t.add_argument("--elements", type=int, default=5)

    i = sub.add_parser("invariants", parents=[common], help="theta orbit sums")
    i.add_argument("action", choices=["eval", "check", "dim"])
    i.add_argument("--m", type=int, default=1)
    i.add_argument("--N", type=int, default=20, help="lattice truncation radius")
    i.add_argument("--tau", type=complex, default=1.2j)

    f = sub.add_parser("frobenius", parents=[common], help="Frobenius chart checks")
    f.add_argument("action", choices=["check", "intersect", "deform", "sections"])
    f.add_argument("--samples", type=int, default=20)
    f.add_argument("--family", help="named deformation fixture")
    f.add_argument("--affine", help="comma-separated coefficients of an affine phi")
    f.add_argument("--const", type=float, default=0.0, help="constant term of the affine phi")

    s = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(args.subcommand, getattr(args, "action", None), args.spec, args.chart,
                        args.seed, args.out, args.tol)
        report, ok, rows = HANDLERS[args.subcommand](cfg, args)
    except BudgetExhausted as exc:
        msg = str(exc)
        print(msg, file=_sys.stderr)
        emit({"command": args.subcommand, "passed": False, "error": msg}, args.out)
        return EXIT_FAIL
    except (SpecFileError, OSError, ValueError) as exc:
        kind = "error" if isinstance(exc, EllwkError) else type(exc).__name__
        print(f"ellwk: {kind}: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    report = {"command": " ".join(filter(None, [cfg.subcommand, cfg.action])), "seed": cfg.seed,
              "passed": ok, **report}
    try:
        emit(report, cfg.out)
    except OSError as exc:
        print(f"ellwk: cannot write report: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    if not ok:
        _fail_table(rows, cfg.tol)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
