"""Command-line entry point ``frac-hardy``.

Every subcommand writes one report: JSON for scalars and summaries, CSV for
curves.  Reports go to ``--out`` when given, otherwise to standard output.
Each report carries the parameters and tolerances that produced it; CSV
reports repeat them as constant columns so the file stays plain CSV.

Exit codes: 0 on success, 1 when a check fails (the report is still
written), 2 on invalid flags or inadmissible input such as a profile whose
seminorm diverges.  A quadrature or principal value that cannot reach its
tolerance also exits with 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .constants import (
    SPParams,
    _pmap,
    beta_star,
    c_nsp,
    lambda_monotonicity_scan,
    lambda_sp,
    sharp_hardy_constant,
)
from .fracops import appendix_b_claim_check, supersolution_margin_1d
from .geometry import Interval, load_domain
from .multid import magic_identity_check
from .quadrature import PVDivergenceError, QuadratureError, QuadratureSpec
from .rayleigh import (
    CutoffPsi,
    Mesh1D,
    Profile1D,
    discrete_hardy_upper_bound,
    dyda_weight_check,
    gagliardo_fullline,
    random_meshed_functions,
    seminorm_split_check,
    sharpness_scan,
)

DEFAULT_SEED = 20240229


class UsageError(Exception):
    """Raised for flag combinations argparse cannot reject by itself."""


# --------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_plain) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _floats(text: str, flag: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects a comma-separated list of numbers")
    if not vals:
        raise UsageError(f"{flag} is empty")
    return vals


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("FRAC_HARDY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("FRAC_HARDY_THREADS must be an integer")
    return None


def _params(args) -> SPParams:
    try:
        return SPParams(args.s, args.p)
    except ValueError as exc:
        raise UsageError(str(exc))


def _spec_doc(spec: QuadratureSpec) -> dict:
    return {"rel_tol": spec.rel_tol, "abs_tol": spec.abs_tol, "max_subdivisions": spec.max_subdivisions}


# --------------------------------------------------------------------------
# subcommands


def cmd_constants(args) -> int:
    params = _params(args)
    spec = QuadratureSpec(rel_tol=args.rel_tol)
    domain_class = args.domain_class
    rep = sharp_hardy_constant(args.dim, params, domain_class, spec)
    doc = rep.to_dict()
    doc.update({"lambda_sp": lambda_sp(params, spec), "c_nsp": c_nsp(args.dim, params, spec),
                "tolerance": _spec_doc(spec)})
    _emit(_json_text(doc), args.out)
    return 0


def cmd_lambda_scan(args) -> int:
    params = _params(args)
    spec = QuadratureSpec(rel_tol=args.rel_tol)
    scan = lambda_monotonicity_scan(params, args.grid, spec, _threads(args))
    rows = [(b, v, params.s, params.p, spec.rel_tol) for b, v in zip(scan.betas, scan.values)]
    csv_text = _csv_text(["beta", "lambda", "s", "p", "rel_tol"], rows)
    summary = {
        "s": params.s, "p": params.p, "grid": args.grid, "tolerance": _spec_doc(spec),
        "argmax_beta": scan.argmax_beta, "beta_peak": scan.beta_peak, "beta_star": scan.beta_star,
        "root_upper": params.s, "single_peaked": scan.single_peaked, "argmax_ok": scan.argmax_ok,
        "sign_consistent": scan.sign_consistent, "passed": scan.ok,
    }
    if args.out:
        Path(args.out).write_text(csv_text)
        sys.stdout.write(_json_text(summary))
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(_json_text(summary))
    return 0 if scan.ok else 1


def cmd_beta_star(args) -> int:
    params = _params(args)
    spec = QuadratureSpec(rel_tol=args.rel_tol)
    doc = {"s": params.s, "p": params.p, "beta_star": beta_star(params, spec),
           "tolerance": _spec_doc(spec)}
    if params.p == 2.0:
        doc["closed_form"] = params.s - 1.0
    _emit(_json_text(doc), args.out)
    return 0


def cmd_supersolution_check(args) -> int:
    params = _params(args)
    try:
        domain = load_domain(args.domain) if args.domain else Interval(0.0, 1.0)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read domain: {exc}")
    if not isinstance(domain, Interval):
        raise UsageError("supersolution-check evaluates interval domains")
    if not params.beta_min < args.beta < params.beta_max:
        raise UsageError(f"beta must lie in ({params.beta_min}, {params.beta_max})")
    K = args.samples
    L, m = domain.length, domain.midpoint
    ts = []
    for k in range(1, K + 1):
        t = domain.a + L * (k - 0.5) / K
        if abs(t - m) < 2e-3 * L:
            t = m - 2e-3 * L
        ts.append(t)
    margins = _pmap(lambda t: supersolution_margin_1d(domain, params, args.beta, t),
                    ts, _threads(args))
    tol = args.tol
    covered = 0.0 <= args.beta < params.sp / (params.p - 1.0)
    rows = [(t, mg, args.beta, params.s, params.p, tol) for t, mg in zip(ts, margins)]
    _emit(_csv_text(["t", "margin", "beta", "s", "p", "tol"], rows), args.out)
    ok = (not covered) or min(margins) >= -tol
    return 0 if ok else 1


def cmd_sharpness(args) -> int:
    params = _params(args)
    spec = QuadratureSpec(rel_tol=args.rel_tol, abs_tol=1e-14, max_subdivisions=400)
    sched = _floats(args.schedule, "--schedule") if args.schedule else None
    cutoff = CutoffPsi(args.plateau, args.support_end, args.order)
    try:
        rows = sharpness_scan(params, sched, cutoff, spec)
    except ValueError as exc:
        raise UsageError(str(exc))
    lam = lambda_sp(params)
    out = [(r.beta, r.quotient, r.numerator, r.denominator, lam, r.quotient / lam,
            params.s, params.p, spec.rel_tol) for r in rows]
    _emit(_csv_text(["beta", "quotient", "numerator", "denominator", "lambda_sp", "ratio",
                     "s", "p", "rel_tol"], out), args.out)
    ok = all(r.quotient >= lam * (1.0 - 1e-3) for r in rows)
    return 0 if ok else 1


def cmd_eigen_bound(args) -> int:
    if not 0 < args.s < 1:
        raise UsageError("s must lie in (0, 1)")
    counts = [int(v) for v in _floats(args.nodes, "--nodes")]
    if any(n < 2 or n % 2 for n in counts):
        raise UsageError("--nodes entries must be even element counts >= 2")
    try:
        domain = load_domain(args.domain) if args.domain else Interval(0.0, 1.0)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read domain: {exc}")
    if not isinstance(domain, Interval):
        raise UsageError("eigen-bound needs an interval domain")
    grading = args.grading if args.grading is not None else Mesh1D.default_grading(args.s)
    meshes = [Mesh1D.graded(domain.a, domain.b, n, grading) for n in counts]
    eig = discrete_hardy_upper_bound(meshes, domain, args.s)
    lam = lambda_sp(SPParams(args.s, 2.0))
    rows = [(n, e, lam, e / lam - 1.0, args.s, grading) for n, e in zip(counts, eig)]
    _emit(_csv_text(["n_elements", "eigenvalue", "lambda_sp", "relative_gap", "s", "grading"], rows),
          args.out)
    ok = all(e >= lam - 1e-3 for e in eig)
    ok &= all(b <= a + 1e-9 * abs(a) for a, b in zip(eig, eig[1:]))
    return 0 if ok else 1


def cmd_counterexample(args) -> int:
    if not -1.0 < args.beta < 0.0:
        raise UsageError("beta must lie in (-1, 0)")
    K = args.points
    ts = 0.5 - np.logspace(math.log10(0.45), -3, K)
    res = _pmap(lambda t: appendix_b_claim_check(args.beta, float(t)), list(ts), _threads(args))
    rows = [(t, lhs, rhs, gap, args.beta) for t, (lhs, rhs, gap) in zip(ts, res)]
    _emit(_csv_text(["t", "lhs", "rhs", "gap", "beta"], rows), args.out)
    ok = all(r[3] >= -args.tol for r in rows)
    return 0 if ok else 1


def _split_profiles():
    return {
        "hat": Profile1D.hat(0.5, 1.5),
        "bump": Profile1D.bump(0.2, 1.0),
        "power_cutoff": Profile1D.power_cutoff(0.3),
    }


def cmd_split_check(args) -> int:
    params = _params(args)
    if args.profile:
        try:
            profiles = {"profile": Profile1D.from_dict(json.loads(Path(args.profile).read_text()))}
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read profile: {exc}")
    else:
        profiles = _split_profiles()
    results = {}
    ok = True
    for name, u in profiles.items():
        rep = seminorm_split_check(u, params)
        passed = rep.relative < args.tol
        ok &= passed
        results[name] = {"residual": rep.residual, "relative": rep.relative, "fullline": rep.fullline,
                         "halfline": rep.halfline, "weighted": rep.weighted, "passed": passed}
    doc = {"s": params.s, "p": params.p, "tol": args.tol, "results": results, "passed": ok}
    _emit(_json_text(doc), args.out)
    return 0 if ok else 1


def cmd_dyda_check(args) -> int:
    if not 0 < args.s < 1:
        raise UsageError("s must lie in (0, 1)")
    if args.nodes < 2 or args.nodes % 2:
        raise UsageError("--nodes must be an even element count >= 2")
    rng = np.random.default_rng(args.seed)
    mesh = Mesh1D.graded(0.0, 1.0, args.nodes, Mesh1D.default_grading(args.s))
    funcs = random_meshed_functions(mesh, args.count, rng)
    gaps = []
    for f in funcs:
        g = dyda_weight_check(f, args.s)
        scale = gagliardo_fullline(f.profile(), SPParams(args.s, 2.0))
        gaps.append(g / scale)
    doc = {"s": args.s, "count": args.count, "nodes": args.nodes, "seed": args.seed, "tol": args.tol,
           "min_relative_gap": min(gaps), "violations": sum(g < -args.tol for g in gaps)}
    doc["passed"] = doc["violations"] == 0
    _emit(_json_text(doc), args.out)
    return 0 if doc["passed"] else 1


def cmd_magic_check(args) -> int:
    pairs = [(0.5, 2.0), (0.3, 3.0), (0.7, 1.5)] if args.s is None else [(args.s, args.p)]
    results = []
    ok = True
    for s, p in pairs:
        try:
            params = SPParams(s, p)
        except ValueError as exc:
            raise UsageError(str(exc))
        for N in (2, 3):
            for m in (0.5, 1.0, 2.0):
                res = magic_identity_check(N, params, m)
                rhs = c_nsp(N, params) / m ** (1.0 + params.sp)
                passed = res <= args.tol * rhs
                ok &= passed
                results.append({"N": N, "s": s, "p": p, "m": m, "residual": res, "rhs": rhs,
                                "passed": passed})
    doc = {"tol": args.tol, "results": results, "passed": ok}
    _emit(_json_text(doc), args.out)
    return 0 if ok else 1


# --------------------------------------------------------------------------
# parser


def _add_sp(p: argparse.ArgumentParser, p_default: float | None = 2.0) -> None:
    p.add_argument("--s", type=float, default=None, required=False, help="fractional order in (0, 1)")
    p.add_argument("--p", type=float, default=p_default, help="integrability exponent > 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frac-hardy",
        description="Sharp fractional Hardy constants: reports and numerical checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomised sweeps")
    common.add_argument("--config", help="JSON file with default flag values")
    common.add_argument("--threads", type=int, default=None,
                        help="worker cap (fallback: FRAC_HARDY_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", parents=[common], help="Lambda_{s,p}, C_{N,sp} and the sharp constant")
    _add_sp(c)
    c.add_argument("--dim", type=int, default=1)
    c.add_argument("--domain-class", choices=["half_space", "generic_convex"], default="half_space")
    c.add_argument("--rel-tol", type=float, default=1e-12)
    c.set_defaults(func=cmd_constants, needs=("s",))

    c = sub.add_parser("lambda-scan", parents=[common], help="lambda(beta) on a grid")
    _add_sp(c)
    c.add_argument("--grid", type=int, default=64)
    c.add_argument("--rel-tol", type=float, default=1e-10)
    c.set_defaults(func=cmd_lambda_scan, needs=("s",))

    c = sub.add_parser("beta-star", parents=[common], help="negative root of lambda")
    _add_sp(c)
    c.add_argument("--rel-tol", type=float, default=1e-12)
    c.set_defaults(func=cmd_beta_star, needs=("s",))

    c = sub.add_parser("supersolution-check", parents=[common],
                       help="margins of d^beta as a supersolution on an interval")
    _add_sp(c)
    c.add_argument("--domain", help="domain JSON file (default: the unit interval)")
    c.add_argument("--beta", type=float, default=None)
    c.add_argument("--samples", type=int, default=20)
    c.add_argument("--tol", type=float, default=1e-6)
    c.set_defaults(func=cmd_supersolution_check, needs=("s", "beta"))

    c = sub.add_parser("sharpness", parents=[common], help="Hardy quotients of x^beta psi")
    _add_sp(c)
    c.add_argument("--schedule", help="decreasing exponents, comma separated")
    c.add_argument("--plateau", type=float, default=1.0)
    c.add_argument("--support-end", type=float, default=2.0)
    c.add_argument("--order", type=int, default=2)
    c.add_argument("--rel-tol", type=float, default=1e-10)
    c.set_defaults(func=cmd_sharpness, needs=("s",))

    c = sub.add_parser("eigen-bound", parents=[common], help="discrete eigenvalue bounds for p = 2")
    c.add_argument("--s", type=float, default=None)
    c.add_argument("--nodes", default="64,128,256", help="element counts, comma separated")
    c.add_argument("--grading", type=float, default=None)
    c.add_argument("--domain", help="interval JSON file (default: the unit interval)")
    c.set_defaults(func=cmd_eigen_bound, needs=("s",))

    c = sub.add_parser("counterexample", parents=[common],
                       help="pointwise check of d^beta on (0, 1) for s = 1/2, p = 2")
    c.add_argument("--beta", type=float, default=-0.25)
    c.add_argument("--points", type=int, default=50)
    c.add_argument("--tol", type=float, default=1e-6)
    c.set_defaults(func=cmd_counterexample, needs=())

    c = sub.add_parser("split-check", parents=[common], help="full-line versus half-line seminorm")
    _add_sp(c)
    c.add_argument("--profile", help="profile JSON recipe (default: three built-in profiles)")
    c.add_argument("--tol", type=float, default=1e-6)
    c.set_defaults(func=cmd_split_check, needs=("s",))

    c = sub.add_parser("dyda-check", parents=[common], help="Dyda-weight inequality on random functions")
    c.add_argument("--s", type=float, default=None)
    c.add_argument("--count", type=int, default=50)
    c.add_argument("--nodes", type=int, default=32)
    c.add_argument("--tol", type=float, default=1e-6)
    c.set_defaults(func=cmd_dyda_check, needs=("s",))

    c = sub.add_parser("magic-check", parents=[common], help="slicing identity for N = 2, 3")
    _add_sp(c, p_default=None)
    c.add_argument("--tol", type=float, default=1e-8)
    c.set_defaults(func=cmd_magic_check, needs=())
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config: {exc}")
        if not isinstance(cfg, dict):
            parser.error("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        unknown = set(cfg) - set(vars(args))
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        # flags override config: re-parse with the config as defaults
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _apply_config(parser, argv)
    missing = [n for n in args.needs if getattr(args, n, None) is None]
    if args.command == "magic-check" and (args.s is None) != (args.p is None):
        missing.append("s and p together")
    if missing:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"frac-hardy: error: missing required value(s): {', '.join(missing)}\n")
        return 2
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        # the library signals inadmissible input (bad exponents, divergent
        # seminorms, singular points) with ValueError subclasses
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"frac-hardy: error: {exc}\n")
        return 2
    except (QuadratureError, PVDivergenceError) as exc:
        sys.stderr.write(f"frac-hardy: numerical failure: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
