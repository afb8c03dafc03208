"""Command-line front end: reports, sweeps, verification, plotting.

Subcommands
-----------
report
    Build one model, evaluate chi_F with every bound and cross-check,
    and print the result as aligned text or JSON (``--json``).
sweep
    Vary one declared parameter over a grid and write the fixed-schema
    CSV, optionally with an SVG line plot.
verify
    Run the seeded self-verification suites and print the summary; the
    output bytes depend only on (seed, instances, dim_max).
plot
    Render chosen columns of an existing sweep CSV as an SVG.
models list
    Show every model kind with its parameters and cutoffs.

Options may also come from a config file (``--config``), a JSON object
mapping option names to values, the same structured-data format the
matrix-file loader uses; explicitly given flags win over file values.

Exit codes: 0 on success, 1 on any build or usage error, and 2 when the
computation itself finished but an internal consistency cross-check
failed, which should be treated as a bug report, not as a result.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from .bounds import BoundReport, bound_report
from .errors import CrossCheckError, ModelParseError
from .models import MODEL_KINDS, ModelSpec, build_model
from .plotting import emit_plot
from .sweep import SweepSpec, run_sweep
from .verify import run_verify

__all__ = ["main"]

_PARAM_FLAGS = [
    ("h3", float),
    ("omega", float),
    ("eps", float),
    ("lambda", float),
    ("beta", float),
    ("j", float),
    ("g", float),
    ("eps0", float),
    ("eps1", float),
    ("eps2", float),
    ("t_scale", float),
    ("s_scale", float),
]
_CUTOFF_FLAGS = [
    ("n_atoms", int),
    ("n_max", int),
    ("s2", int),
    ("modes", int),
    ("dim", int),
    ("n_sites", int),
]


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model kind (see `fidsus models list`)")
    for name, typ in _PARAM_FLAGS:
        p.add_argument(
            "--" + name.replace("_", "-"), dest=name, type=typ, default=None
        )
    p.add_argument(
        "--symmetric-sector",
        dest="symmetric_sector",
        action="store_const",
        const=True,
        default=None,
        help="restrict the atom-field model to the maximal-spin sector",
    )
    for name, typ in _CUTOFF_FLAGS:
        p.add_argument(
            "--" + name.replace("_", "-"), dest=name, type=typ, default=None
        )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--path", default=None, help="matrix file for kind 'file'")


def _strict_json(path: str):
    def bad_const(name):
        raise ModelParseError(f"{path}: non-finite constant {name!r}")

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text, parse_constant=bad_const)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"{path}: {exc.msg} at position {exc.pos}") from None
    return obj


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if getattr(args, "config", None) is None:
        return
    obj = _strict_json(args.config)
    if not isinstance(obj, dict):
        parser.error(f"{args.config}: config must be a JSON object")
    for key, value in obj.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest == "config":
            parser.error(f"{args.config}: unknown option {key!r}")
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _model_spec(args: argparse.Namespace) -> ModelSpec:
    if args.model is None:
        raise ModelParseError("no model kind given (use --model)")
    kind = args.model
    if kind not in MODEL_KINDS:
        raise ModelParseError(
            f"unknown model kind {kind!r}; known: {sorted(MODEL_KINDS)}"
        )
    declared_p = MODEL_KINDS[kind]["parameters"]
    declared_c = MODEL_KINDS[kind]["cutoffs"]
    params: Dict[str, float] = {}
    cutoffs: Dict[str, int] = {}
    for name, _ in _PARAM_FLAGS:
        value = getattr(args, name)
        if value is not None and name in declared_p:
            params[name] = float(value)
    if getattr(args, "symmetric_sector", None) and "symmetric_sector" in declared_p:
        params["symmetric_sector"] = 1.0
    for name, _ in _CUTOFF_FLAGS:
        value = getattr(args, name)
        if value is not None and name in declared_c:
            cutoffs[name] = int(value)
    return ModelSpec(
        kind=kind,
        parameters=params,
        cutoffs=cutoffs,
        seed=args.seed,
        path=args.path,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _report_fields(spec: ModelSpec, dim: int, rep: BoundReport) -> List[tuple]:
    fields = [
        ("model", spec.kind),
        ("dim", dim),
        ("beta", rep.beta),
        ("particle_count", rep.particle_count),
        ("chi_f", rep.chi_f),
        ("chi_f_classical", rep.chi_f_classical),
        ("chi_f_quantum", rep.chi_f_quantum),
        ("ub", rep.upper),
        ("lb_paper", rep.lower_paper),
        ("lb_aasc", rep.lower_aasc),
        ("chi_fg", rep.lower_aasc),
        ("ds2", rep.ds2),
        ("bd", rep.bd_product),
        ("dcomm", rep.dcomm),
        ("chi_n", rep.chi_n),
        ("sandwich_ok", rep.sandwich_ok),
        ("degenerate_pairs", rep.degenerate_pair_count),
    ]
    if rep.per_particle is not None:
        pp = rep.per_particle
        fields += [
            ("per_particle.chi_f", pp.chi_f),
            ("per_particle.ub", pp.upper),
            ("per_particle.lb_paper", pp.lower_paper),
            ("per_particle.lb_aasc", pp.lower_aasc),
            ("per_particle.ds2", pp.ds2),
            ("per_particle.bd", pp.bd_product),
            ("per_particle.dcomm", pp.dcomm),
        ]
    return fields


def _render_text(fields: List[tuple]) -> str:
    lines = []
    for key, value in fields:
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = _fmt(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def _render_json(fields: List[tuple]) -> str:
    obj: Dict[str, object] = {}
    for key, value in fields:
        node = obj
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_out(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_report(args: argparse.Namespace) -> int:
    spec = _model_spec(args)
    fam = build_model(spec)
    rep = bound_report(fam)
    fields = _report_fields(spec, int(fam.eigenvalues.size), rep)
    text = _render_json(fields) if args.json else _render_text(fields)
    _write_out(text, args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    for required in ("sweep_param", "start", "stop", "steps", "out"):
        if getattr(args, required) is None:
            raise ModelParseError(f"sweep requires --{required.replace('_', '-')}")
    spec = SweepSpec(
        model=_model_spec(args),
        sweep_param=args.sweep_param,
        start=float(args.start),
        stop=float(args.stop),
        steps=int(args.steps),
        scale=args.scale,
        csv_path=args.out,
        svg_path=args.svg,
    )
    rows = run_sweep(spec)
    sys.stdout.write(f"wrote {len(rows)} rows to {args.out}\n")
    if args.svg is not None:
        sys.stdout.write(f"wrote plot to {args.svg}\n")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    summary = run_verify(
        seed=args.seed if args.seed is not None else 42,
        instances=args.instances,
        dim_max=args.dim_max,
    )
    sys.stdout.write(summary.text)
    return 0 if summary.passed else 1


def _cmd_plot(args: argparse.Namespace) -> int:
    columns = [c for c in args.columns.split(",") if c]
    emit_plot(args.csv, columns, args.svg)
    sys.stdout.write(f"wrote plot to {args.svg}\n")
    return 0


def _cmd_models(args: argparse.Namespace) -> int:
    for kind in sorted(MODEL_KINDS):
        entry = MODEL_KINDS[kind]
        sys.stdout.write(f"{kind}\n    {entry['doc']}\n")
        for which in ("parameters", "cutoffs"):
            decl = entry[which]
            if not decl:
                continue
            rendered = ", ".join(
                f"{name} (required)" if default is None else f"{name}={default}"
                for name, default in decl.items()
            )
            sys.stdout.write(f"    {which}: {rendered}\n")
        if kind == "file":
            sys.stdout.write("    options: --path (required)\n")
        if kind == "random":
            sys.stdout.write("    options: --seed (default 0)\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fidsus",
        description="fidelity susceptibility of one-parameter Gibbs families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="evaluate one model")
    _add_model_flags(p_report)
    p_report.add_argument("--json", action="store_true")
    p_report.add_argument("--out", default=None)
    p_report.add_argument("--config", default=None)
    p_report.set_defaults(func=_cmd_report)

    p_sweep = sub.add_parser("sweep", help="evaluate a model along a grid")
    _add_model_flags(p_sweep)
    p_sweep.add_argument("--sweep-param", dest="sweep_param", default=None)
    p_sweep.add_argument("--from", dest="start", type=float, default=None)
    p_sweep.add_argument("--to", dest="stop", type=float, default=None)
    p_sweep.add_argument("--steps", type=int, default=None)
    p_sweep.add_argument("--scale", choices=("linear", "log"), default="linear")
    p_sweep.add_argument("--out", default=None, help="CSV output path")
    p_sweep.add_argument("--svg", default=None, help="optional SVG plot path")
    p_sweep.add_argument("--config", default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the self-verification suites")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--instances", type=int, default=1000)
    p_verify.add_argument("--dim-max", dest="dim_max", type=int, default=12)
    p_verify.add_argument("--config", default=None)
    p_verify.set_defaults(func=_cmd_verify)

    p_plot = sub.add_parser("plot", help="plot columns of a sweep CSV")
    p_plot.add_argument("--csv", required=True)
    p_plot.add_argument("--columns", default="chi_f,ub,lb_paper")
    p_plot.add_argument("--svg", required=True)
    p_plot.set_defaults(func=_cmd_plot)

    p_models = sub.add_parser("models", help="model registry")
    p_models.add_argument("action", choices=("list",))
    p_models.set_defaults(func=_cmd_models)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        _apply_config(args, parser)
        return args.func(args)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    except CrossCheckError as exc:
        sys.stderr.write(f"internal consistency check failed: {exc}\n")
        return 2
    except Exception as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
