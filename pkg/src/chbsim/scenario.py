"""End-to-end scenarios, the eight-row paper comparison, and file export."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import kernels
from .analysis import HarmonicSpectrum, spectrum, spectrum_to_csv, thd
from .modulation import (GateSchedule, ModulationSpec, count_switching_events, level_sequence,
                         schedule_gates, schedule_to_csv)
from .simulation import (CurrentWaveform, LoadModel, VoltageWaveform, current_to_csv, settle_periodic,
                         synthesize_voltage, voltage_to_csv)
from .topology import CONVENTIONAL, MODIFIED, SwitchingTable, Topology, build, validate_table

PAPER_VDC = 100.0
PAPER_R = 10.0
PAPER_L = 100e-6

SUMMARY_COLUMNS = ["name", "topology", "levels", "load", "switches", "events_per_period",
                   "v_thd_pct", "i_thd_pct", "ref_thd_pct", "delta_pp"]


class ScenarioError(RuntimeError):
    def __init__(self, scenario: str, stage: str, cause: Exception):
        super().__init__(f"[{scenario}] {stage}: {cause}")
        self.scenario = scenario
        self.stage = stage
        self.cause = cause


class ExportError(OSError):
    def __init__(self, failures: dict):
        lines = "; ".join(f"{p}: {e}" for p, e in failures.items())
        super().__init__(f"{len(failures)} file(s) failed: {lines}")
        self.failures = failures


@dataclass(frozen=True)
class Scenario:
    name: str
    topology_kind: str
    levels: int
    vdc: float = PAPER_VDC
    load: LoadModel = field(default_factory=lambda: LoadModel.r(PAPER_R))
    modulation: ModulationSpec = field(default_factory=ModulationSpec)
    max_harmonic: int = 100
    thd_target: Optional[float] = None
    settle_tolerance: float = 1e-9

    def to_dict(self) -> dict:
        d = asdict(self)
        d["load"] = asdict(self.load)
        d["modulation"] = self.modulation.as_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        d = dict(d)
        if "load" in d:
            d["load"] = LoadModel(**d["load"])
        if "modulation" in d:
            d["modulation"] = ModulationSpec(**d["modulation"])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class ReportRow:
    name: str
    topology: str
    levels: int
    load: str
    switches: int
    events_per_period: int
    v_thd_pct: float
    i_thd_pct: float
    fundamental_v: float
    ref_thd_pct: Optional[float] = None

    @property
    def delta_pp(self) -> Optional[float]:
        if self.ref_thd_pct is None:
            return None
        return self.v_thd_pct - self.ref_thd_pct


@dataclass(eq=False)
class ScenarioResult:
    scenario: Scenario
    topology: Topology
    table: SwitchingTable
    schedule: GateSchedule
    voltage: VoltageWaveform
    current: CurrentWaveform
    voltage_spectrum: HarmonicSpectrum
    current_spectrum: HarmonicSpectrum
    row: ReportRow


@dataclass(eq=False)
class ComparisonReport:
    rows: list
    scenarios: list
    metadata: dict

    def summary_csv(self) -> str:
        return summary_to_csv(self.rows)

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "scenarios": [s.to_dict() for s in self.scenarios],
            "rows": [dict(asdict(r), delta_pp=r.delta_pp) for r in self.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _stage(s: Scenario, stage: str, fn, *args):
    try:
        return fn(*args)
    except Exception as exc:
        raise ScenarioError(s.name, stage, exc) from exc


def _check_table(table: SwitchingTable):
    bad = validate_table(table)
    if bad:
        raise ValueError(f"shoot-through at {[(v.level, v.pair.label()) for v in bad]}")


def simulate(s: Scenario) -> ScenarioResult:
    """Run every pipeline stage and keep the intermediate waveforms."""
    topo = _stage(s, "topology", build, s.topology_kind, s.levels)
    table = topo.table()
    _stage(s, "validate", _check_table, table)
    seq = _stage(s, "modulation", level_sequence, s.levels, s.modulation)
    sched = _stage(s, "schedule", schedule_gates, table, seq, s.modulation)
    v = _stage(s, "synthesize", synthesize_voltage, sched, table, s.vdc)
    i = _stage(s, "load", settle_periodic, v, s.load, s.settle_tolerance)
    fs, f0 = s.modulation.sample_rate_hz, s.modulation.fundamental_hz
    vs = _stage(s, "analysis", spectrum, v.sampled(), fs, f0, s.max_harmonic)
    cs = _stage(s, "analysis", spectrum, i.samples, fs, f0, s.max_harmonic)
    v_thd = _stage(s, "analysis", thd, vs)
    i_thd = _stage(s, "analysis", thd, cs)
    row = ReportRow(
        name=s.name, topology=topo.kind, levels=topo.levels, load=s.load.kind,
        switches=topo.switch_count, events_per_period=count_switching_events(sched),
        v_thd_pct=v_thd, i_thd_pct=i_thd, fundamental_v=vs.fundamental, ref_thd_pct=s.thd_target,
    )
    return ScenarioResult(s, topo, table, sched, v, i, vs, cs, row)


def run_scenario(s: Scenario) -> ReportRow:
    return simulate(s).row


def run_suite(scenarios: Sequence[Scenario], workers: int = 1) -> tuple[ComparisonReport, list]:
    """Simulate scenarios (optionally in threads); rows keep the input order."""
    scenarios = list(scenarios)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(simulate, scenarios))
    else:
        results = [simulate(s) for s in scenarios]
    report = ComparisonReport([r.row for r in results], scenarios, _metadata(scenarios))
    return report, results


def _metadata(scenarios) -> dict:
    return {
        "kernel_backend": kernels.BACKEND,
        "scenario_count": len(scenarios),
        "sample_rate_hz": sorted({s.modulation.sample_rate_hz for s in scenarios}),
        "max_harmonic": sorted({s.max_harmonic for s in scenarios}),
        "schemes": sorted({s.modulation.scheme for s in scenarios}),
    }


def paper_reference() -> dict:
    """Published THD percentages keyed by ``(topology, levels, load)``."""
    text = resources.files("chbsim").joinpath("data/paper_thd.csv").read_text()
    ref = {}
    for r in csv.DictReader(io.StringIO(text)):
        ref[(r["topology"], int(r["levels"]), r["load"])] = float(r["thd_pct"])
    return ref


def paper_scenarios(modulation: ModulationSpec | None = None, max_harmonic: int = 100) -> list:
    modulation = modulation or ModulationSpec()
    ref = paper_reference()
    out = []
    for kind in (CONVENTIONAL, MODIFIED):
        for levels in (5, 7):
            for load in (LoadModel.r(PAPER_R), LoadModel.rl(PAPER_R, PAPER_L)):
                out.append(Scenario(
                    name=f"{kind}-{levels}-{load.kind}", topology_kind=kind, levels=levels,
                    vdc=PAPER_VDC, load=load, modulation=modulation, max_harmonic=max_harmonic,
                    thd_target=ref[(kind, levels, load.kind)],
                ))
    return out


def run_paper_suite(modulation: ModulationSpec | None = None, max_harmonic: int = 100,
                    workers: int = 1) -> ComparisonReport:
    return run_suite(paper_scenarios(modulation, max_harmonic), workers)[0]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def summary_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in rows:
        w.writerow([_fmt(x) for x in (r.name, r.topology, r.levels, r.load, r.switches, r.events_per_period,
                                      r.v_thd_pct, r.i_thd_pct, r.ref_thd_pct, r.delta_pp)])
    return buf.getvalue()


def export_plots(report: ComparisonReport, results: Sequence[ScenarioResult], outdir) -> list:
    """Write per-scenario voltage/current/spectrum/gate CSVs plus ``summary.csv``.

    Every file is attempted; failures are collected and raised together.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [(outdir / "summary.csv", report.summary_csv)]
    for res in results:
        stem = res.scenario.name
        jobs += [
            (outdir / f"{stem}_voltage.csv", lambda r=res: voltage_to_csv(r.voltage)),
            (outdir / f"{stem}_current.csv", lambda r=res: current_to_csv(r.current)),
            (outdir / f"{stem}_spectrum.csv", lambda r=res: spectrum_to_csv(r.voltage_spectrum)),
            (outdir / f"{stem}_gates.csv", lambda r=res: schedule_to_csv(r.schedule)),
        ]
    written, failures = [], {}
    for path, render in jobs:
        try:
            path.write_text(render(), newline="")
        except OSError as exc:
            failures[str(path)] = exc
        else:
            written.append(path)
    if failures:
        raise ExportError(failures)
    return written


def load_config(path) -> list:
    doc = json.loads(Path(path).read_text())
    items = doc["scenarios"] if isinstance(doc, dict) else doc
    return [Scenario.from_dict(item) for item in items]


def with_overrides(s: Scenario, sample_rate_hz=None, max_harmonic=None, scheme=None) -> Scenario:
    mod = s.modulation
    if sample_rate_hz is not None:
        mod = replace(mod, sample_rate_hz=float(sample_rate_hz))
    if scheme is not None:
        mod = replace(mod, scheme=scheme)
    return replace(s, modulation=mod, max_harmonic=s.max_harmonic if max_harmonic is None else max_harmonic)

