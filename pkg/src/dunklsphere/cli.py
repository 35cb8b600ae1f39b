"""Command-line front end.

Four commands: ``coeffs`` (Gegenbauer coefficient profile), ``fundamental``
(fundamentality verdict for one generator or the union of several),
``funk-hecke`` (residuals of the reproducing identity over a list of
degrees), and ``density`` (least-squares density demonstration).

Exit codes encode outcomes so shell pipelines can branch on them:

    0   success; for ``fundamental``: FUNDAMENTAL_UP_TO_N
    2   invalid configuration (flags, kappa, grammar, lambda <= 0)
    3   backend failure during computation
    4   unsupported group for the requested operation
    10  NOT_FUNDAMENTAL
    11  INDETERMINATE
    12  funk-hecke residual above threshold

A JSON config file (``--config``) is merged under explicit flags; passing a
previously emitted report works too, its embedded ``config`` object is used.
Reports are byte-deterministic for identical configs.  ``--output`` writes to
a file, resolved against $DUNKLSPHERE_OUTPUT_DIR when relative.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from numpy.linalg import LinAlgError as _LinAlgError

from .fundamentality import (
    FUNDAMENTAL,
    INDETERMINATE_VERDICT,
    NOT_FUNDAMENTAL,
    density_demo,
    funk_hecke_residual,
    is_fundamental,
    union_fundamental,
)
from .gegenbauer import DEFAULT_EPS, coefficient_profile, parse_function
from .operators import DunklContext
from .reflection import (
    FAMILIES,
    InvalidMultiplicityError,
    UnsupportedGroupError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_UNSUPPORTED = 4
EXIT_NOT_FUNDAMENTAL = 10
EXIT_INDETERMINATE = 11
EXIT_THRESHOLD = 12

_CONTEXT_DESTS = {"family", "dimension", "order", "kappa"}
_OUTPUT_DESTS = {"format", "output"}
_COMMAND_DESTS = {
    "coeffs": _CONTEXT_DESTS | _OUTPUT_DESTS
    | {"g", "n_max", "eps", "rule_size", "precision"},
    "fundamental": _CONTEXT_DESTS | _OUTPUT_DESTS
    | {"g", "p", "n_max", "eps", "rule_size", "precision"},
    "funk-hecke": _CONTEXT_DESTS | _OUTPUT_DESTS
    | {"g", "degrees", "threshold", "orders", "kernel_order", "x_count",
       "seed"},
    "density": _CONTEXT_DESTS | _OUTPUT_DESTS
    | {"g", "m_degree", "node_counts", "orders", "kernel_order", "ridge",
       "scheme", "seed"},
}


def _context_flags(sp) -> None:
    sp.add_argument("--family", default="zd2", choices=FAMILIES,
                    help="reflection group family")
    sp.add_argument("--dimension", "-d", type=int, default=2,
                    help="ambient dimension d (sphere is S^{d-1})")
    sp.add_argument("--order", type=int, default=None,
                    help="dihedral order m, i2 family only")
    sp.add_argument("--kappa", default="0",
                    help="multiplicity values, one per orbit, comma separated "
                         "(rationals like 1/2 accepted)")


def _output_flags(sp) -> None:
    sp.add_argument("--format", choices=("json", "csv"), default="json",
                    help="output format")
    sp.add_argument("--output", default=None,
                    help="write to this file instead of stdout; relative "
                         "paths resolve against $DUNKLSPHERE_OUTPUT_DIR")
    sp.add_argument("--config", default=None,
                    help="JSON config merged under explicit flags (a full "
                         "report with an embedded config also works)")


def build_parser() -> tuple:
    parser = argparse.ArgumentParser(
        prog="dunklsphere",
        description="Dunkl harmonic analysis on spheres: coefficient "
                    "profiles, fundamentality verdicts, Funk-Hecke residuals "
                    "and density demonstrations.")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}

    sp = sub.add_parser("coeffs",
                        help="Gegenbauer coefficient profile Lambda_n(g)")
    _context_flags(sp)
    sp.add_argument("--g", default=None,
                    help="generator: 'poly c0,c1,...', 'gegen n', 'exp', "
                         "'cosh', 'sinh', 'cos w', 'step a', or "
                         "'sum w1*expr1 + w2*expr2'")
    sp.add_argument("-N", "--n-max", dest="n_max", type=int, default=20)
    sp.add_argument("--epsilon", dest="eps", type=float, default=DEFAULT_EPS,
                    help="zero tolerance relative to max(1, ||g||_1)")
    sp.add_argument("--rule-size", dest="rule_size", type=int, default=None)
    sp.add_argument("--precision", type=int, default=None,
                    help="force mpmath at this many digits for every entry")
    _output_flags(sp)
    commands["coeffs"] = sp

    sp = sub.add_parser("fundamental",
                        help="fundamentality verdict (union when --g is "
                             "repeated); exit code carries the verdict")
    _context_flags(sp)
    sp.add_argument("--g", action="append", default=None,
                    help="generator expression; repeat for a union")
    sp.add_argument("-p", type=float, default=2.0,
                    help="Lebesgue exponent (recorded; the verdict is "
                         "p-independent)")
    sp.add_argument("-N", "--n-max", dest="n_max", type=int, default=20)
    sp.add_argument("--epsilon", dest="eps", type=float, default=DEFAULT_EPS)
    sp.add_argument("--rule-size", dest="rule_size", type=int, default=None)
    sp.add_argument("--precision", type=int, default=None)
    _output_flags(sp)
    commands["fundamental"] = sp

    sp = sub.add_parser("funk-hecke",
                        help="residuals of int K(x,y) Y_n(y) dsigma = "
                             "Lambda_n Y_n(x) per degree; CSV columns "
                             "n,residual")
    _context_flags(sp)
    sp.add_argument("--g", default=None)
    sp.add_argument("--degrees", default="0,1,2,3,4",
                    help="comma separated harmonic degrees")
    sp.add_argument("--threshold", type=float, default=1e-6,
                    help="exit 12 when any residual exceeds this")
    sp.add_argument("--orders", type=int, default=80,
                    help="sphere quadrature order")
    sp.add_argument("--kernel-order", dest="kernel_order", type=int,
                    default=48, help="1-d order per axis in the kernel")
    sp.add_argument("--x-samples", dest="x_count", type=int, default=6)
    sp.add_argument("--seed", type=int, default=3,
                    help="seed for x points when d > 3")
    _output_flags(sp)
    commands["funk-hecke"] = sp

    sp = sub.add_parser("density",
                        help="best L2 approximation of a degree-m harmonic "
                             "by kernel translates; CSV columns "
                             "nodes,ridge,residual")
    _context_flags(sp)
    sp.add_argument("--g", default=None)
    sp.add_argument("--target-degree", "-m", dest="m_degree", type=int,
                    default=1)
    sp.add_argument("--nodes", dest="node_counts", default="6,12,24",
                    help="comma separated node counts")
    sp.add_argument("--orders", type=int, default=80)
    sp.add_argument("--kernel-order", dest="kernel_order", type=int,
                    default=48)
    sp.add_argument("--ridge", type=float, default=None,
                    help="Gram regularization (default 1e-10 tr(G)/size)")
    sp.add_argument("--scheme", choices=("spiral", "uniform_random"),
                    default="spiral")
    sp.add_argument("--seed", type=int, default=None,
                    help="seed, required for uniform_random nodes")
    _output_flags(sp)
    commands["density"] = sp

    return parser, commands


# ---------------------------------------------------------------------------
# Config file handling
# ---------------------------------------------------------------------------

def _load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("config must be a JSON object")
    if "config" in obj and isinstance(obj["config"], dict):
        obj = obj["config"]
    return obj


def _apply_config_defaults(commands: dict, cfg: dict) -> None:
    # "g" is handled after parsing: its append action would extend a default
    # list instead of letting explicit flags replace the config value
    for name, sp in commands.items():
        allowed = _COMMAND_DESTS[name] - {"g"}
        sp.set_defaults(**{k: v for k, v in cfg.items() if k in allowed})


def _int_list(val) -> list:
    if isinstance(val, str):
        parts = [p for p in val.replace(" ", "").split(",") if p]
        return [int(p) for p in parts]
    return [int(v) for v in val]


def _kappa_values(val):
    if isinstance(val, str):
        parts = [p for p in val.replace(" ", "").split(",") if p]
        vals = [Fraction(p) for p in parts]
    elif isinstance(val, (list, tuple)):
        vals = [Fraction(str(v)) if not isinstance(v, (int, Fraction)) else v
                for v in val]
    else:
        vals = [val]
    return vals[0] if len(vals) == 1 else vals


def _g_list(val) -> list:
    return [val] if isinstance(val, str) else list(val)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _json_text(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(args, text: str) -> None:
    if args.output:
        path = args.output
        base = os.environ.get("DUNKLSPHERE_OUTPUT_DIR")
        if base and not os.path.isabs(path):
            path = os.path.join(base, path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _make_context(args) -> DunklContext:
    kappa = _kappa_values(args.kappa)
    return DunklContext.create(args.family, args.dimension, kappa,
                               order=args.order)


def _cmd_coeffs(args) -> int:
    ctx = _make_context(args)
    g = parse_function(args.g, ctx.lambda_kappa)
    if args.n_max < 0:
        raise ValueError("N must be >= 0")
    profile = coefficient_profile(g, ctx.lambda_kappa, args.n_max,
                                  eps=args.eps, m=args.rule_size,
                                  precision=args.precision)
    if args.format == "csv":
        _emit(args, profile.to_csv_text())
        return EXIT_OK
    doc = profile.to_json_dict()
    doc["config"] = {
        "family": args.family, "dimension": args.dimension,
        "order": args.order, "kappa": [str(v) for v in ctx.kappa.orbit_values],
        "g": args.g, "n_max": args.n_max, "eps": args.eps,
        "rule_size": args.rule_size, "precision": args.precision,
    }
    _emit(args, _json_text(doc))
    return EXIT_OK


def _cmd_fundamental(args) -> int:
    ctx = _make_context(args)
    specs = _g_list(args.g)
    gs = [parse_function(s, ctx.lambda_kappa) for s in specs]
    if args.n_max < 0:
        raise ValueError("N must be >= 0")
    if len(gs) == 1:
        report = is_fundamental(ctx, gs[0], p=args.p, n_max=args.n_max,
                                eps=args.eps, rule_size=args.rule_size,
                                precision=args.precision)
    else:
        report = union_fundamental(ctx, gs, p=args.p, n_max=args.n_max,
                                   eps=args.eps, rule_size=args.rule_size,
                                   precision=args.precision)
    text = (report.to_csv_text() if args.format == "csv"
            else _json_text(report.to_json_dict()))
    _emit(args, text)
    print(f"verdict: {report.verdict}", file=sys.stderr)
    if report.verdict == FUNDAMENTAL:
        return EXIT_OK
    if report.verdict == NOT_FUNDAMENTAL:
        return EXIT_NOT_FUNDAMENTAL
    return EXIT_INDETERMINATE


def _cmd_funk_hecke(args) -> int:
    ctx = _make_context(args)
    if not (ctx.is_zd2 or ctx.kappa_is_zero):
        raise UnsupportedGroupError(
            "the funk-hecke command needs an explicit kernel and is "
            "implemented for kappa = 0 or Zd2 groups only")
    g = parse_function(args.g, ctx.lambda_kappa)
    degrees = _int_list(args.degrees)
    if not degrees or any(n < 0 for n in degrees):
        raise ValueError("degrees must be a nonempty list of n >= 0")
    rows = [
        funk_hecke_residual(ctx, g, n, orders=args.orders,
                            x_count=args.x_count,
                            quad_order=args.kernel_order, seed=args.seed)
        for n in degrees
    ]
    max_res = max(r.residual for r in rows)
    if args.format == "csv":
        lines = ["n,residual"]
        lines += [f"{r.n},{r.residual!r}" for r in rows]
        _emit(args, "\n".join(lines) + "\n")
    else:
        doc = {
            "schema_version": "1",
            "kind": "funk_hecke_table",
            "threshold": args.threshold,
            "max_residual": max_res,
            "rows": [r.to_json_dict() for r in rows],
            "config": {
                "family": args.family, "dimension": args.dimension,
                "order": args.order,
                "kappa": [str(v) for v in ctx.kappa.orbit_values],
                "g": args.g, "degrees": degrees,
                "threshold": args.threshold, "orders": args.orders,
                "kernel_order": args.kernel_order, "x_count": args.x_count,
                "seed": args.seed,
            },
        }
        _emit(args, _json_text(doc))
    return EXIT_OK if max_res <= args.threshold else EXIT_THRESHOLD


def _cmd_density(args) -> int:
    ctx = _make_context(args)
    g = parse_function(args.g, ctx.lambda_kappa)
    counts = _int_list(args.node_counts)
    if not counts or any(c < 1 for c in counts):
        raise ValueError("node counts must be positive")
    if args.m_degree < 0:
        raise ValueError("target degree must be >= 0")
    report = density_demo(ctx, g, args.m_degree, counts, orders=args.orders,
                          ridge=args.ridge, scheme=args.scheme,
                          kernel_order=args.kernel_order, seed=args.seed)
    text = (report.to_csv_text() if args.format == "csv"
            else _json_text(report.to_json_dict()))
    _emit(args, text)
    return EXIT_OK


_DISPATCH = {
    "coeffs": _cmd_coeffs,
    "fundamental": _cmd_fundamental,
    "funk-hecke": _cmd_funk_hecke,
    "density": _cmd_density,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)

    parser, commands = build_parser()
    cfg = {}
    if known.config is not None:
        try:
            cfg = _load_config(known.config)
        except (OSError, ValueError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        unknown = sorted(set(cfg) - set().union(*_COMMAND_DESTS.values()))
        if unknown:
            print(f"error: unknown config keys: {', '.join(unknown)}",
                  file=sys.stderr)
            return EXIT_CONFIG
        _apply_config_defaults(commands, cfg)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the protocol; let
        # --help exits pass through as 0
        return int(exc.code or 0)

    if args.g in (None, []):
        if "g" in cfg:
            args.g = cfg["g"]
        else:
            print("error: --g is required", file=sys.stderr)
            return EXIT_CONFIG

    try:
        return _DISPATCH[args.command](args)
    except UnsupportedGroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except _LinAlgError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (InvalidMultiplicityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, TypeError) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
