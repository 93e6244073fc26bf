"""Command line entry point: ``chbsim run|paper-suite|validate|export``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .modulation import SCHEMES
from .scenario import (PAPER_L, PAPER_R, ExportError, Scenario, ScenarioError, export_plots, load_config,
                       paper_scenarios, run_suite, with_overrides)
from .simulation import LoadModel
from .topology import KINDS, build, table_from_csv, table_to_csv, validate_table


def _print_rows(report, out=None):
    out = out or sys.stdout
    head = f"{'name':<18} {'sw':>3} {'events':>6} {'V THD %':>9} {'I THD %':>9} {'ref %':>7} {'delta':>7}"
    print(head, file=out)
    for r in report.rows:
        ref = "" if r.ref_thd_pct is None else f"{r.ref_thd_pct:.2f}"
        delta = "" if r.delta_pp is None else f"{r.delta_pp:+.2f}"
        print(f"{r.name:<18} {r.switches:>3} {r.events_per_period:>6} {r.v_thd_pct:>9.3f} "
              f"{r.i_thd_pct:>9.3f} {ref:>7} {delta:>7}", file=out)
    meta = report.metadata
    print(f"# sample_rate_hz={meta['sample_rate_hz']} max_harmonic={meta['max_harmonic']} "
          f"schemes={meta['schemes']} backend={meta['kernel_backend']}", file=out)


def _scenarios(args) -> list:
    if getattr(args, "config", None):
        scenarios = load_config(args.config)
    elif args.command in ("paper-suite", "export") or not (args.topology or args.levels or args.load):
        scenarios = paper_scenarios()
    else:
        kind = args.topology or "conventional"
        levels = args.levels or 5
        load = LoadModel.rl(PAPER_R, PAPER_L) if args.load == "RL" else LoadModel.r(PAPER_R)
        scenarios = [Scenario(f"{kind}-{levels}-{load.kind}", kind, levels, load=load)]
    if args.command in ("paper-suite", "export") and not getattr(args, "config", None):
        scenarios = [s for s in scenarios
                     if (args.topology is None or s.topology_kind == args.topology)
                     and (args.levels is None or s.levels == args.levels)
                     and (args.load is None or s.load.kind == args.load)]
    return [with_overrides(s, args.sample_rate, args.max_harmonic, args.scheme) for s in scenarios]


def _write_report(report, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.csv").write_text(report.summary_csv(), newline="")
    (out / "report.json").write_text(report.to_json(), newline="")


def cmd_run(args) -> int:
    report, _ = run_suite(_scenarios(args))
    _print_rows(report)
    if args.out:
        _write_report(report, Path(args.out))
    return 0


def cmd_export(args) -> int:
    report, results = run_suite(_scenarios(args))
    paths = export_plots(report, results, args.out)
    print(f"wrote {len(paths)} files to {args.out}")
    return 0


def cmd_validate(args) -> int:
    kinds = [args.topology] if args.topology else list(KINDS)
    levels = [args.levels] if args.levels else [5, 7]
    failed = False
    for kind in kinds:
        for lv in levels:
            topo = build(kind, lv)
            table = table_from_csv(Path(args.csv).read_text(), topo) if args.csv else topo.table()
            bad = validate_table(table)
            status = "ok" if not bad else "; ".join(f"level {v.level:+d} {v.pair.label()}" for v in bad)
            print(f"{topo.name}: {topo.switch_count} switches, {topo.source_count} sources -> {status}")
            if args.show:
                print(table_to_csv(table), end="")
            failed |= bool(bad)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chbsim", description="Cascaded H-bridge inverter simulation")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("config", nargs="?", help="JSON scenario file")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--sample-rate", type=float)
        sp.add_argument("--max-harmonic", type=int)
        sp.add_argument("--scheme", choices=SCHEMES)
        sp.add_argument("--levels", type=int)
        sp.add_argument("--topology", choices=KINDS)
        sp.add_argument("--load", choices=("R", "RL"))

    common(sub.add_parser("run", help="run scenarios from a config file or flags"))
    common(sub.add_parser("paper-suite", help="the eight-row conventional/modified comparison"), config=False)
    ex = sub.add_parser("export", help="write waveform, spectrum, gate and summary CSVs")
    common(ex)
    v = sub.add_parser("validate", help="check switching tables for shoot-through")
    v.add_argument("--levels", type=int)
    v.add_argument("--topology", choices=KINDS)
    v.add_argument("--csv", help="switching table CSV to check instead of the built-in one")
    v.add_argument("--show", action="store_true", help="print the tables")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "export":
            if not args.out:
                print("error: export needs --out", file=sys.stderr)
                return 2
            return cmd_export(args)
        return cmd_run(args)
    except ScenarioError as exc:
        print(f"error: stage={exc.stage} scenario={exc.scenario}: {exc.cause}", file=sys.stderr)
        return 3
    except ExportError as exc:
        print(f"error: stage=export: {exc}", file=sys.stderr)
        return 4
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: stage=input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
