"""Command-line interface: fit/test datasets, run simulation studies.

Subcommands:
  test      sequential rank tests on a delimited dataset, full trail report
  simulate  run a built-in study preset or a custom study grid
  report    re-render a saved JSON report as text or CSV

Exit codes: 0 ok, 1 usage, 2 data problem, 3 numerical degeneracy. All
output is deterministic byte-for-byte for fixed inputs, flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .core import fit_iht, iht_spectrum
from .dimension_tests import run_test
from .errors import DataError, NumericError, ValidationError
from .inference import REFERENCES, directions
from .simulation import (
    DEFAULT_ALPHAS,
    SimConfig,
    direction_accuracy,
    khat_study,
    level_study,
)
from .standardize import apply_log, load_dataset, standardize

REPORT_SCHEMA = "iht-report/1"
SIMTABLE_SCHEMA = "iht-simtable/1"
OUT_DIR_ENV = "IHT_OUT_DIR"


# ---------------------------------------------------------------- test

def build_report(dataset, alpha, reference, source="", log_columns=()):
    """Run the full test trail (j = 0..p-1) and assemble the report dict."""
    s = standardize(dataset)
    fit = fit_iht(s)
    spectrum = iht_spectrum(fit)
    p = dataset.p
    trail = [run_test(s, fit, spectrum, j, reference="both") for j in range(p)]
    k_hat = {}
    for ref in REFERENCES:
        k = p
        for res in trail:
            if res.p_value(ref) > alpha:
                k = res.j
                break
        k_hat[ref] = k
    k_dir = max(k_hat.values())
    if k_dir > 0:
        dz, dx = directions(spectrum, k_dir, s.sigma_inv_sqrt)
    else:
        dz = np.empty((p, 0))
        dx = np.empty((p, 0))
    pred = s.Z_hat @ spectrum.left_vectors[:, : min(2, p)]
    return {
        "schema": REPORT_SCHEMA,
        "input": {
            "source": str(source),
            "n": dataset.n,
            "p": p,
            "columns": list(dataset.column_names),
            "response": dataset.response_name,
            "log_columns": list(log_columns),
        },
        "alpha": alpha,
        "reference": reference,
        "trail": [
            {
                "j": res.j,
                "T": res.T_j,
                "df": res.df,
                "c2": res.c2_hat,
                "p_chisq": res.p_chisq,
                "p_weighted": res.p_weighted,
                "weights": [float(w) for w in res.weights],
            }
            for res in trail
        ],
        "k_hat": k_hat,
        "k_hat_selected": k_hat[reference],
        "directions_z": [[float(v) for v in row] for row in dz],
        "directions_x": [[float(v) for v in row] for row in dx],
        "diagnostics": {
            "predictors": [[float(v) for v in row] for row in pred],
            "residuals": [float(v) for v in fit.e_hat],
        },
    }


def render_report_text(report) -> str:
    info = report["input"]
    lines = [
        f"dataset: {info['source'] or '<memory>'}  "
        f"(n = {info['n']}, p = {info['p']}, response = {info['response']})",
    ]
    if info["log_columns"]:
        lines.append(f"log-transformed: {', '.join(info['log_columns'])}")
    lines.append("")
    lines.append(f"{'j':>3} {'T_j':>10} {'df':>4} {'chisq p':>9} {'weighted p':>11}")
    for row in report["trail"]:
        lines.append(
            f"{row['j']:>3} {row['T']:>10.4g} {row['df']:>4} "
            f"{row['p_chisq']:>9.3f} {row['p_weighted']:>11.3f}"
        )
    lines.append("")
    for ref in REFERENCES:
        mark = "  <- selected" if ref == report["reference"] else ""
        lines.append(
            f"k_hat ({ref}, alpha = {report['alpha']:g}) = {report['k_hat'][ref]}{mark}"
        )
    return "\n".join(lines) + "\n"


def render_report_csv(report) -> str:
    out = ["j,T,df,p_chisq,p_weighted"]
    for row in report["trail"]:
        out.append(
            f"{row['j']},{row['T']!r},{row['df']},{row['p_chisq']!r},{row['p_weighted']!r}"
        )
    return "\n".join(out) + "\n"


def cmd_test(args) -> int:
    d = load_dataset(args.input, args.response, delimiter=args.delimiter)
    log_columns = _split_list(args.log_columns)
    if log_columns:
        d = apply_log(d, log_columns)
    report = build_report(
        d, args.alpha, args.reference, source=args.input, log_columns=log_columns
    )
    sys.stdout.write(render_report_text(report))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


# ---------------------------------------------------------------- simulate

def _preset_configs(table, reps, seed, alphas):
    """Configuration grids of the built-in study presets (1-7)."""
    mk = lambda **kw: SimConfig(reps=reps, seed=seed, alphas=alphas, **kw)
    if table == 1:
        return "levels", [mk(model="null", n=n, p=4) for n in (25, 50, 100, 200)], {}
    if table == 2:
        cfgs = [mk(model="linquad", n=50, p=4, sigma=s) for s in (0, 0.2, 0.4, 0.8, 1.6)]
        cfgs += [mk(model="linquad", n=n, p=4, sigma=1.6) for n in (100, 200, 400)]
        return "levels", cfgs, {}
    if table == 3:
        return (
            "levels",
            [mk(model="linquad", n=100, p=p, sigma=0.2) for p in (4, 6, 8, 12, 16)],
            {"references": ("chisq",)},
        )
    if table == 4:
        return (
            "levels",
            [mk(model="linquad_chisq", n=n, p=4) for n in (50, 100, 200)],
            {"references": ("weighted",)},
        )
    if table == 5:
        return "levels", [mk(model="expsin", n=n, p=5, sigma=0.2) for n in (50, 100, 200)], {}
    if table == 6:
        cfgs = [
            SimConfig(model="linquad", n=n, p=4, sigma=0.4, reps=reps, seed=seed,
                      alphas=(0.001, 0.01, 0.05, 0.10, 0.15))
            for n in (50, 100)
        ]
        return "khat", cfgs, {}
    if table == 7:
        cfgs = [
            mk(model="linquad", n=n, p=4, sigma=s)
            for s in (0.2, 0.4, 0.8)
            for n in (50, 100)
        ]
        return "directions", cfgs, {}
    raise ValidationError(f"unknown preset table {table}; choose 1-7")


def _config_row(cfg: SimConfig):
    return {"model": cfg.model, "n": cfg.n, "p": cfg.p, "sigma": cfg.sigma}

def _run_study(study, cfg, kwargs):
    if study == "levels":
        tab = level_study(cfg, **kwargs)
    elif study == "khat":
        tab = khat_study(cfg, **kwargs)
    elif study == "directions":
        tab = direction_accuracy(cfg, **kwargs)
    else:
        raise ValidationError(f"unknown study {study!r}")
    base = _config_row(cfg)
    rows = [dict(base, **row) for row in tab.rows()]
    failures = getattr(tab, "failures", 0)
    return rows, failures


def _write_table(outdir, name, study, preset, rows, failures, reps, seed):
    os.makedirs(outdir, exist_ok=True)
    columns = list(rows[0].keys()) if rows else []
    csv_path = os.path.join(outdir, f"{name}.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row[c]) for c in columns])
    payload = {
        "schema": SIMTABLE_SCHEMA,
        "study": study,
        "preset": preset,
        "reps": reps,
        "seed": seed,
        "failures": failures,
        "columns": columns,
        "rows": rows,
    }
    json_path = os.path.join(outdir, f"{name}.json")
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def cmd_simulate(args) -> int:
    outdir = args.out or os.environ.get(OUT_DIR_ENV, ".")
    alphas = tuple(float(a) for a in _split_list(args.alphas)) or DEFAULT_ALPHAS
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        study = raw.pop("study", "levels")
        preset = None
        name = args.name or study
        raw.setdefault("reps", args.reps)
        raw.setdefault("seed", args.seed)
        raw["alphas"] = tuple(raw.get("alphas", alphas))
        extra = {}
        if study in ("levels", "khat") and "references" in raw:
            extra["references"] = tuple(raw.pop("references"))
        if study == "directions":
            for key in ("k", "targets"):
                if key in raw:
                    extra[key] = raw.pop(key)
        try:
            cfgs = [SimConfig(**raw)]
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad simulation config: {exc}") from exc
    elif args.table is not None:
        study, cfgs, extra = _preset_configs(args.table, args.reps, args.seed, alphas)
        preset = args.table
        name = args.name or f"table{args.table}"
    else:
        if not args.model or args.n is None:
            raise ValidationError("custom runs need --model and --n (or use --table/--config)")
        study = args.study
        preset = None
        name = args.name or study
        try:
            cfgs = [
                SimConfig(
                    model=args.model,
                    n=args.n,
                    p=args.p,
                    sigma=args.sigma,
                    reps=args.reps,
                    seed=args.seed,
                    alphas=alphas,
                    j_test=args.j,
                )
            ]
        except ValueError as exc:
            raise ValidationError(f"bad simulation config: {exc}") from exc
        extra = {}
    all_rows = []
    failures = 0
    for cfg in cfgs:
        rows, fails = _run_study(study, cfg, extra)
        all_rows.extend(rows)
        failures += fails
    csv_path, json_path = _write_table(
        outdir, name, study, preset, all_rows, failures, args.reps, args.seed
    )
    sys.stdout.write(f"wrote {csv_path} and {json_path} ({len(all_rows)} rows)\n")
    if failures:
        sys.stdout.write(f"warning: {failures} replication(s) failed numerically\n")
    return 0


# ---------------------------------------------------------------- report

def cmd_report(args) -> int:
    try:
        with open(args.file) as fh:
            report = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot open {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{args.file}: not valid JSON: {exc}") from exc
    if report.get("schema") != REPORT_SCHEMA:
        raise ValidationError(
            f"{args.file}: expected schema {REPORT_SCHEMA!r}, got {report.get('schema')!r}"
        )
    if args.format == "text":
        sys.stdout.write(render_report_text(report))
    elif args.format == "csv":
        sys.stdout.write(render_report_csv(report))
    else:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


# ---------------------------------------------------------------- plumbing

def _split_list(value):
    if not value:
        return []
    return [v.strip() for v in value.split(",") if v.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iht", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="sequential dimension tests on a dataset")
    t.add_argument("input", help="delimited text file, first row headers")
    t.add_argument("--response", required=True, help="response column name")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--reference", choices=REFERENCES, default="weighted",
                   help="reference distribution driving the selected k_hat")
    t.add_argument("--log-columns", default="",
                   help="comma-separated columns to log-transform")
    t.add_argument("--delimiter", default=",")
    t.add_argument("--out", default="", help="write the full JSON report here")
    t.set_defaults(func=cmd_test)

    s = sub.add_parser("simulate", help="run simulation studies")
    s.add_argument("--table", type=int, choices=range(1, 8), default=None,
                   help="built-in preset 1-7")
    s.add_argument("--config", default="", help="declarative JSON study config")
    s.add_argument("--study", choices=("levels", "khat", "directions"), default="levels")
    s.add_argument("--model", default="")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--p", type=int, default=4)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--j", type=int, default=None, help="hypothesized rank to study")
    s.add_argument("--reps", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--alphas", default="", help="comma-separated nominal levels")
    s.add_argument("--name", default="", help="basename for output files")
    s.add_argument("--out", default="", help=f"output directory (default ${OUT_DIR_ENV} or .)")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("report", help="render a saved JSON report")
    r.add_argument("file")
    r.add_argument("--format", choices=("text", "csv", "json"), default="text")
    r.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except DataError as exc:
        sys.stderr.write(f"iht: data error: {exc}\n")
        return 2
    except NumericError as exc:
        sys.stderr.write(f"iht: numeric error: {exc}\n")
        return 3


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
