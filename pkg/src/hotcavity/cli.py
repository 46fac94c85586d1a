"""Command-line entry point.

    hotcavity run fig2 --set time.T=30
    hotcavity sweep grid.json --workers 4
    hotcavity design --target sech --beta 0.5 --T 20
    hotcavity trap --config trap.json

Files go to ``--out``, else ``$HOTCAVITY_OUTPUT_DIR``, else ./hotcavity_output.
The exit status is 0 only when every run succeeded and every invariant check held.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import emit
from .scenarios import CATALOG, parse_assignment, run_scenario, sweep

OUTPUT_ENV = "HOTCAVITY_OUTPUT_DIR"


def output_dir(arg: str | None) -> Path:
    return Path(arg or os.environ.get(OUTPUT_ENV) or "hotcavity_output")


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise SystemExit(f"cannot read {path}: {exc}")


def _print_report(report, out=sys.stdout):
    for r in report.runs:
        m = r.metrics
        print(f"{r.label:>18}  P_spon={m['P_spon']:.4%}  P_tran={m['P_tran']:.3e}  "
              f"P_mis={m['P_mis']:.4%}  N={r.diagnostics['N']}", file=out)
    for k, v in report.summary.items():
        if isinstance(v, float):
            print(f"{k:>18}  {v:.6g}", file=out)
    for k, ok in report.checks.items():
        if not ok:
            print(f"check failed: {k}", file=out)


def cmd_run(args) -> int:
    overrides = {}
    if args.config:
        doc = _load_json(args.config)
        overrides.update(doc.get("config", doc))  # a report can be fed back in
    overrides.update(parse_assignment(s) for s in args.set)
    overrides["scenario"] = args.scenario
    report = run_scenario(overrides, workers=args.workers)
    paths = emit.emit_report(report, output_dir(args.out), args.prefix)
    _print_report(report)
    print(f"wrote {len(paths)} files to {paths[0].parent}")
    return 0 if report.ok else 1


def cmd_sweep(args) -> int:
    doc = _load_json(args.gridfile)
    unknown = set(doc) - {"base", "grid", "output"}
    if unknown or "grid" not in doc:
        raise SystemExit(f"grid file needs 'grid' (and optional 'base', 'output'); got {sorted(doc)}")
    table = sweep(doc.get("base", {}), doc["grid"], workers=args.workers)
    path = output_dir(args.out) / doc.get("output", "sweep.csv")
    emit.write_table(path, table["columns"], table["rows"])
    err = table["columns"].index("error")
    failed = [r for r in table["rows"] if r[err]]
    for r in failed:
        print(f"point failed: {r[err]}")
    print(f"wrote {len(table['rows'])} rows to {path}")
    return 0 if not failed else 1


def cmd_design(args) -> int:
    over = {"scenario": "transfer_design", "design.target": args.target,
            "design.beta": args.beta, "time.T": args.T, "params.kappa": args.kappa,
            "params.r_o": args.r_o, "design.samples": args.samples}
    report = run_scenario(over)
    emit.emit_report(report, output_dir(args.out), args.prefix)
    for k, v in report.summary.items():
        print(f"{k:>20}  {v:.6g}")
    return 0 if report.ok else 1


def cmd_trap(args) -> int:
    over = {"scenario": "trap_report"}
    if args.config:
        doc = _load_json(args.config)
        over.update({k if k.startswith("trap.") else f"trap.{k}": v for k, v in doc.items()})
    report = run_scenario(over)
    emit.write_json(output_dir(args.out) / f"{args.prefix or 'trap'}_report.json", report.to_json())
    print(emit.dumps(report.summary), end="")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hotcavity", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV})")
        sp.add_argument("--prefix", help="file name prefix")

    r = sub.add_parser("run", help="run a catalog scenario")
    r.add_argument("scenario", choices=sorted(CATALOG))
    r.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    r.add_argument("--config", help="JSON config or report to start from")
    r.add_argument("--workers", type=int, default=1)
    common(r)
    r.set_defaults(fn=cmd_run)

    s = sub.add_parser("sweep", help="cartesian parameter sweep from a JSON grid file")
    s.add_argument("gridfile")
    s.add_argument("--workers", type=int, default=1)
    common(s)
    s.set_defaults(fn=cmd_sweep)

    d = sub.add_parser("design", help="drive pulses for a target photon shape")
    d.add_argument("--target", default="sech", choices=["sech"])
    d.add_argument("--beta", type=float, required=True)
    d.add_argument("--T", type=float, required=True)
    d.add_argument("--kappa", type=float, default=1.0)
    d.add_argument("--r-o", dest="r_o", type=float, default=1.0)
    d.add_argument("--samples", type=int, default=4001)
    common(d)
    d.set_defaults(fn=cmd_design)

    t = sub.add_parser("trap", help="FORT depth, frequencies and coupling spread")
    t.add_argument("--config", help="JSON with trap.* keys (prefix optional)")
    common(t)
    t.set_defaults(fn=cmd_trap)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:  # configuration, design and overlap errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
