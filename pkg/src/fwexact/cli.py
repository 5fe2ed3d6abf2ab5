"""Command-line front end: model catalog, transforms, sweeps, reports.

Commands
--------
models list   print the model catalog (``--format json`` for machines)
transform     run the full transformation chain on one model
sweep         one transform per parameter value, CSV table of key numbers
floquet       compare the naive and extended sign operators

Each run command takes ``--config <json>``, repeated ``--set key=value``
dotted-path overrides, ``--report <path>`` and ``--dump``.  Reports are
JSON with schema_version "1" and are byte-identical across reruns of the
same configuration except for the timings block.  Exit codes: 0 all
verdicts pass, 2 usage/config error, 3 spectral gap violation,
4 invariant or tolerance failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .blockop import BlockOperator, Metric, SplitHamiltonian
from .eriksen import transform_stationary
from .errors import (
    FwExactError,
    SpectralGapError,
)
from .expgen import generator_from_lambda, verify_exp_equivalence
from .floquet import demonstrate_nonevenness, transform_nonstationary
from .models import MODEL_CATALOG, ModelSpec, TimePeriodicHamiltonian
from .tolerances import Tolerances

SCHEMA_VERSION = "1"

#: Which tolerance bounds each diagnostic.  Keys absent here (or mapped
#: to None for the active metric) are informational: reported, verdict
#: always "pass".
_BOUND_BY_DIAGNOSTIC = {
    "odd_norm": "tol_identity",
    "unitarity_defect": "tol_identity",
    "pseudo_unitarity_defect": "tol_identity",
    "eriksen_defect": "tol_identity",
    "lambda_sq_defect": "tol_identity",
    "sign_products_commute_defect": "tol_identity",
    "anticommutator_even_defect": "tol_identity",
    "alt_form_defect": "tol_identity",
    "spectrum_defect": "tol_identity",
    "oddness_defect": "tol_identity",
    "hermiticity_defect": "tol_identity",
    "sin2s_defect": "tol_identity",
    "cos2s_defect": "tol_identity",
    "denominator_commutator_defect": "tol_identity",
    "form_agreement_defect": "tol_generator",
    "exp_equivalence_defect": "tol_generator",
    "clamp_excess": "eps_clamp",
    "mass_even_defect": "tol_struct",
    "even_defect": "tol_struct",
    "odd_defect": "tol_struct",
    "self_adjoint_defect": "tol_struct",
}


class UsageError(Exception):
    """Bad command line or configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    model: ModelSpec
    tolerances: Tolerances = field(default_factory=Tolerances)
    report_path: Optional[str] = None
    dump: bool = False
    dump_dir: str = "dumps"
    sweep_parameter: Optional[str] = None
    sweep_values: tuple[float, ...] = ()
    floquet_nf: tuple[int, ...] = (4,)
    floquet_window: Optional[int] = None

    @staticmethod
    def from_dict(raw: dict) -> "RunConfig":
        if "model" not in raw or "name" not in raw["model"]:
            raise UsageError("config must contain model.name")
        try:
            model = ModelSpec(raw["model"]["name"], raw["model"].get("params", {}))
        except FwExactError as exc:
            raise UsageError(str(exc)) from exc
        try:
            tolerances = Tolerances(**raw.get("tolerances", {}))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad tolerances: {exc}") from exc
        output = raw.get("output", {})
        sweep = raw.get("sweep") or {}
        values: list[float] = []
        for v in sweep.get("values", []):
            try:
                value = float(v)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"sweep value {v!r} is not numeric") from exc
            if not math.isfinite(value):
                raise UsageError(f"sweep value {v!r} is not finite")
            values.append(value)
        floquet = raw.get("floquet") or {}
        nf_list = floquet.get("nf", [4])
        if isinstance(nf_list, (int, float)):
            nf_list = [nf_list]
        try:
            nf_tuple = tuple(sorted({int(n) for n in nf_list}))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad floquet.nf list: {exc}") from exc
        if any(n < 1 for n in nf_tuple):
            raise UsageError("floquet.nf entries must be >= 1")
        window = floquet.get("window")
        return RunConfig(
            model=model,
            tolerances=tolerances,
            report_path=output.get("report"),
            dump=bool(output.get("dump", False)),
            dump_dir=output.get("dump_dir", "dumps"),
            sweep_parameter=sweep.get("parameter"),
            sweep_values=tuple(values),
            floquet_nf=nf_tuple,
            floquet_window=None if window is None else int(window),
        )

    def echo(self) -> dict:
        return {
            "model": {"name": self.model.name, "params": dict(self.model.params)},
            "tolerances": {
                "tol_struct": self.tolerances.tol_struct,
                "tol_identity": self.tolerances.tol_identity,
                "tol_generator": self.tolerances.tol_generator,
                "gap_tol": self.tolerances.gap_tol,
                "eps_clamp": self.tolerances.eps_clamp,
            },
            "output": {
                "report": self.report_path,
                "dump": self.dump,
                "dump_dir": self.dump_dir,
            },
            "sweep": {
                "parameter": self.sweep_parameter,
                "values": list(self.sweep_values),
            },
            "floquet": {
                "nf": list(self.floquet_nf),
                "window": self.floquet_window,
            },
        }


def _parse_set(assignments: list[str]) -> dict:
    """Turn repeated ``key.path=value`` flags into a nested dict."""
    tree: dict = {}
    for item in assignments:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, _, text = item.partition("=")
        try:
            value: Any = json.loads(text)
        except json.JSONDecodeError:
            if "," in text:
                value = [p.strip() for p in text.split(",") if p.strip()]
            else:
                value = text
        node = tree
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise UsageError(f"--set path {key!r} collides with a scalar")
        node[parts[-1]] = value
    return tree


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path: Optional[str], assignments: list[str]) -> RunConfig:
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise UsageError("config root must be a JSON object")
    raw = _merge(raw, _parse_set(assignments))
    return RunConfig.from_dict(raw)


# ---------------------------------------------------------------------------
# matrix dumps

_HEADER_RE = re.compile(
    r"#\s*rows=(\d+)\s+cols=(\d+)\s+internal_dim=(\d+)\s+floquet_copies=(\d+)"
)


def _format_entry(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def dump_matrix(a: BlockOperator, path: str | Path) -> Path:
    """Write a block operator as CSV with a shape header.

    Entries are ``re+imj`` with 17 significant digits, which round-trips
    IEEE doubles bit for bit.
    """
    path = Path(path)
    lines = [
        f"# rows={a.side} cols={a.side} internal_dim={a.internal_dim} "
        f"floquet_copies={a.floquet_copies}"
    ]
    for row in a.data:
        lines.append(",".join(_format_entry(z) for z in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_matrix(path: str | Path) -> BlockOperator:
    """Read a matrix dump back; inverse of :func:`dump_matrix`."""
    text = Path(path).read_text(encoding="utf-8").strip().splitlines()
    match = _HEADER_RE.match(text[0])
    if match is None:
        raise UsageError(f"{path}: missing or malformed dump header")
    rows, cols, internal_dim, copies = (int(g) for g in match.groups())
    data = np.array(
        [[complex(entry) for entry in line.split(",")] for line in text[1:]],
        dtype=complex,
    )
    if data.shape != (rows, cols):
        raise UsageError(f"{path}: body shape {data.shape} != header ({rows}, {cols})")
    return BlockOperator(data, internal_dim, copies)


# ---------------------------------------------------------------------------
# report assembly


def _verdicts(
    diagnostics: dict[str, float], tolerances: Tolerances, metric: Metric
) -> dict[str, str]:
    out = {}
    for name in sorted(diagnostics):
        bound_name = _BOUND_BY_DIAGNOSTIC.get(name)
        if bound_name is None:
            out[name] = "pass"
            continue
        if name == "eriksen_defect" and metric is Metric.BETA_PSEUDO:
            # beta U = U^dag beta holds only for the Hermitian metric;
            # the bosonic analogue is pseudo_unitarity_defect.
            out[name] = "pass"
            continue
        bound = getattr(tolerances, bound_name)
        out[name] = "pass" if diagnostics[name] <= bound else "fail"
    return out


def _write_report(report: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _print_verdicts(diagnostics: dict[str, float], verdicts: dict[str, str]) -> None:
    for name in sorted(verdicts):
        value = diagnostics.get(name)
        shown = f"{value:.6e}" if isinstance(value, float) else "-"
        print(f"{verdicts[name].upper():4s} {name} = {shown}")


def _run_chain(
    config: RunConfig,
) -> tuple[dict[str, float], Metric, dict[str, BlockOperator], dict[str, float]]:
    """Model -> transform -> generator; returns diagnostics, metric,
    dumpable operators and stage timings (ms)."""
    timings: dict[str, float] = {}
    start = time.perf_counter()
    built = config.model.build()
    timings["build_ms"] = (time.perf_counter() - start) * 1e3

    start = time.perf_counter()
    if isinstance(built, TimePeriodicHamiltonian):
        nf = max(config.floquet_nf)
        result = transform_nonstationary(
            built, nf, config.tolerances.gap_tol, config.floquet_window
        )
        metric = built.metric
        diagnostics = dict(result.diagnostics)
        operators = {
            "lambda": result.sign_op,
            "u": result.u,
            "h_fw": result.h_fw,
            "s": result.s,
        }
    else:
        split_h: SplitHamiltonian = built
        metric = split_h.metric
        diagnostics = dict(split_h.validate(config.tolerances.tol_struct))
        result = transform_stationary(split_h, config.tolerances.gap_tol)
        diagnostics.update(result.diagnostics)
        generator = generator_from_lambda(
            result.sign_op,
            split_h.beta,
            metric,
            eps_clamp=config.tolerances.eps_clamp,
        )
        diagnostics.update(generator.diagnostics)
        diagnostics["exp_equivalence_defect"] = verify_exp_equivalence(
            generator, result.u, metric
        )
        operators = {
            "lambda": result.sign_op,
            "u": result.u,
            "h_fw": result.h_fw,
            "s": generator.s,
        }
    timings["transform_ms"] = (time.perf_counter() - start) * 1e3
    diagnostics = {k: float(v) for k, v in diagnostics.items()}
    return diagnostics, metric, operators, timings


def _dump_operators(
    config: RunConfig, operators: dict[str, BlockOperator]
) -> list[str]:
    if not config.dump:
        return []
    directory = Path(config.dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(operators):
        op = operators[name]
        if op is None:
            continue
        written.append(str(dump_matrix(op, directory / f"{name}.csv")))
    return written


def cmd_models_list(args: argparse.Namespace) -> int:
    if args.format == "json":
        print(json.dumps(MODEL_CATALOG, indent=2, sort_keys=True))
        return 0
    for name in sorted(MODEL_CATALOG):
        entry = MODEL_CATALOG[name]
        print(f"{name}  [{entry['kind']}]  {entry['description']}")
        for param, meaning in entry["params"].items():
            print(f"    {param:8s} {meaning}")
    return 0


def cmd_transform(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.set or [])
    if args.report:
        config.report_path = args.report
    if args.dump:
        config.dump = True
    diagnostics, metric, operators, timings = _run_chain(config)
    verdicts = _verdicts(diagnostics, config.tolerances, metric)
    dumps = _dump_operators(config, operators)
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "diagnostics": diagnostics,
        "verdicts": verdicts,
        "timings": timings,
        "matrix_dumps": dumps,
    }
    path = Path(config.report_path or "transform_report.json")
    _write_report(report, path)
    _print_verdicts(diagnostics, verdicts)
    print(f"report written to {path}")
    return 0 if all(v == "pass" for v in verdicts.values()) else 4


def _dispersion(config: RunConfig) -> Optional[float]:
    params = config.model.params
    m = float(params.get("m", 1.0))
    if config.model.name == "free_dirac":
        p2 = sum(float(params.get(k, 0.0)) ** 2 for k in ("px", "py", "pz"))
        return math.sqrt(m * m + p2)
    if config.model.name == "feshbach_villars":
        p = float(params.get("p", 0.0))
        return math.sqrt(m * m + p * p)
    return None


_IDENTITY_KEYS = tuple(
    name
    for name, bound in _BOUND_BY_DIAGNOSTIC.items()
    if bound == "tol_identity"
)


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.set or [])
    if args.report:
        config.report_path = args.report
    if args.dump:
        config.dump = True
    parameter = config.sweep_parameter
    values: tuple[float, ...] = config.sweep_values
    if parameter is None or not values:
        parameter = parameter or ""
        values = (float(config.model.params.get(parameter, 0.0)) if parameter else 0.0,)
    rows = []
    worst: dict[str, float] = {}
    metric = Metric.HERMITIAN
    for value in values:
        point = config
        if parameter:
            params = dict(config.model.params)
            params[parameter] = value
            point = RunConfig(
                model=ModelSpec(config.model.name, params),
                tolerances=config.tolerances,
                floquet_nf=config.floquet_nf,
                floquet_window=config.floquet_window,
            )
        diagnostics, metric, operators, _ = _run_chain(point)
        for key, v in diagnostics.items():
            worst[key] = max(worst.get(key, 0.0), v)
        s_norm = float(np.linalg.norm(operators["s"].data, 2)) if operators["s"] is not None else float("nan")
        dispersion = _dispersion(point)
        measured = float(np.linalg.norm(operators["h_fw"].data, 2))
        row = {
            "parameter": parameter or "",
            "value": value,
            "max_identity_defect": max(
                (diagnostics[k] for k in _IDENTITY_KEYS if k in diagnostics),
                default=0.0,
            ),
            "odd_norm": diagnostics.get("odd_norm", float("nan")),
            "s_norm_2": s_norm,
            "dispersion": measured if dispersion is not None else float("nan"),
            "dispersion_error": abs(measured - dispersion)
            if dispersion is not None
            else float("nan"),
        }
        rows.append(row)
    verdicts = _verdicts(worst, config.tolerances, metric)
    report_path = Path(config.report_path or "sweep_report.json")
    csv_path = report_path.with_suffix(".csv")
    header = [
        "parameter",
        "value",
        "max_identity_defect",
        "odd_norm",
        "s_norm_2",
        "dispersion",
        "dispersion_error",
    ]
    csv_lines = [",".join(header)]
    for row in rows:
        csv_lines.append(
            ",".join(
                row["parameter"]
                if key == "parameter"
                else f"{row[key]:.17g}"
                for key in header
            )
        )
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "diagnostics": worst,
        "verdicts": verdicts,
        "timings": {},
        "matrix_dumps": [],
        "tables": [str(csv_path)],
    }
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text("\n".join(csv_lines) + "\n", encoding="utf-8")
    _write_report(report, report_path)
    print("\n".join(csv_lines))
    print(f"report written to {report_path}; table written to {csv_path}")
    return 0 if all(v == "pass" for v in verdicts.values()) else 4


def cmd_floquet(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.set or [])
    if args.report:
        config.report_path = args.report
    if config.model.kind != "floquet":
        raise UsageError(
            f"model {config.model.name!r} is stationary; the floquet command "
            "needs a time-periodic model"
        )
    model = config.model.build()
    nf = max(config.floquet_nf)
    window = config.floquet_window if config.floquet_window is not None else max(nf // 2, 1)
    start = time.perf_counter()
    rep = demonstrate_nonevenness(
        model,
        nf,
        window,
        config.tolerances.gap_tol,
        decay_nfs=config.floquet_nf,
    )
    elapsed = (time.perf_counter() - start) * 1e3
    tol = config.tolerances.tol_identity
    both_clean = (
        rep.odd_norm_lambda_naive <= tol and rep.odd_norm_lambda <= tol
    )
    separated = rep.odd_norm_lambda_naive > 10.0 * rep.odd_norm_lambda
    ordering = "pass" if (both_clean or separated) else "fail"
    diagnostics = {
        "odd_norm_lambda_naive": rep.odd_norm_lambda_naive,
        "odd_norm_lambda": rep.odd_norm_lambda,
    }
    verdicts = {
        "floquet_ordering": ordering,
        # the extended-operator branch must always come out even; the
        # naive branch is informational (its failure is the result)
        "odd_norm_lambda": "pass" if rep.odd_norm_lambda <= tol else "fail",
        "odd_norm_lambda_naive": "pass",
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "diagnostics": diagnostics,
        "verdicts": verdicts,
        "timings": {"floquet_ms": elapsed},
        "matrix_dumps": [],
        "floquet": {
            "odd_norm_lambda_naive": rep.odd_norm_lambda_naive,
            "odd_norm_lambda": rep.odd_norm_lambda,
            "window": rep.window,
            "decay_table": [[n, v] for n, v in rep.decay_table],
            "notes": list(rep.notes),
        },
    }
    path = Path(config.report_path or "floquet_report.json")
    _write_report(report, path)
    for note in rep.notes:
        print(f"warning: {note}")
    print(
        f"odd norm (naive sign operator)    = {rep.odd_norm_lambda_naive:.6e}\n"
        f"odd norm (extended sign operator) = {rep.odd_norm_lambda:.6e}"
    )
    for n, v in rep.decay_table:
        print(f"  nf={n:3d}  odd_norm_lambda = {v:.6e}")
    print(f"ordering: {ordering}; report written to {path}")
    return 0 if all(v == "pass" for v in verdicts.values()) else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fwexact",
        description="Exact block-diagonalizing transformation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    models = sub.add_parser("models", help="model catalog")
    models_sub = models.add_subparsers(dest="models_command", required=True)
    models_list = models_sub.add_parser("list", help="list available models")
    models_list.add_argument("--format", choices=("text", "json"), default="text")
    models_list.set_defaults(func=cmd_models_list)

    for name, func, description in (
        ("transform", cmd_transform, "run the transformation chain on one model"),
        ("sweep", cmd_sweep, "transform over a parameter range, emit a CSV table"),
        ("floquet", cmd_floquet, "compare naive vs extended sign operators"),
    ):
        cmd = sub.add_parser(name, help=description)
        cmd.add_argument("--config", help="JSON configuration file")
        cmd.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override a config entry by dotted path (repeatable)",
        )
        cmd.add_argument("--report", help="report output path")
        cmd.add_argument("--dump", action="store_true", help="dump operator matrices")
        cmd.set_defaults(func=func)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpectralGapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FwExactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
