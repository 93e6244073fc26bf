"""Ideal voltage-mode inverter output and exact R / RL load current."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .modulation import GateSchedule
from .topology import SwitchingTable

R_LOAD = "R"
RL_LOAD = "RL"


class SettlingError(RuntimeError):
    def __init__(self, residual: float, periods: int):
        super().__init__(f"current did not settle after {periods} periods (residual {residual:.3e} A)")
        self.residual = residual
        self.periods = periods


@dataclass(frozen=True)
class LoadModel:
    kind: str
    resistance: float
    inductance: float = 0.0

    def __post_init__(self):
        if self.kind not in (R_LOAD, RL_LOAD):
            raise ValueError(f"load kind must be 'R' or 'RL', got {self.kind!r}")
        if not self.resistance > 0:
            raise ValueError("resistance must be > 0")
        if self.kind == RL_LOAD and not self.inductance > 0:
            raise ValueError("RL load needs inductance > 0")
        if self.kind == R_LOAD and self.inductance != 0:
            raise ValueError("R load must have zero inductance")

    @classmethod
    def r(cls, resistance: float) -> "LoadModel":
        return cls(R_LOAD, resistance)

    @classmethod
    def rl(cls, resistance: float, inductance: float) -> "LoadModel":
        return cls(RL_LOAD, resistance, inductance)

    @property
    def tau(self) -> float:
        return self.inductance / self.resistance


@dataclass(frozen=True, eq=False)
class VoltageWaveform:
    """Piecewise-constant output voltage.

    Segment boundaries sit on sample instants, so segments are stored as
    integer sample counts; ``starts``/``durations`` give them in seconds.
    """

    lengths: np.ndarray
    steps: np.ndarray
    vdc: float
    sample_rate_hz: float
    fundamental_hz: float
    max_level: int

    def __post_init__(self):
        if len(self.lengths) != len(self.steps) or len(self.lengths) == 0:
            raise ValueError("need one step per segment and at least one segment")
        if (self.lengths <= 0).any():
            raise ValueError("segment lengths must be positive")
        if np.abs(self.steps).max() > self.max_level:
            raise ValueError(f"segment level exceeds +/-{self.max_level}")

    @classmethod
    def from_levels(cls, level_seq, vdc: float, sample_rate_hz: float, fundamental_hz: float,
                    max_level: int | None = None) -> "VoltageWaveform":
        level_seq = np.asarray(level_seq, dtype=np.int64)
        if len(level_seq) == 0:
            raise ValueError("empty level sequence")
        edges = np.flatnonzero(np.diff(level_seq)) + 1
        bounds = np.concatenate([[0], edges, [len(level_seq)]])
        lengths = np.diff(bounds)
        steps = level_seq[bounds[:-1]]
        for a in (lengths, steps):
            a.setflags(write=False)
        if max_level is None:
            max_level = int(np.abs(steps).max())
        return cls(lengths, steps, float(vdc), float(sample_rate_hz), float(fundamental_hz), max_level)

    @property
    def volts(self) -> np.ndarray:
        return self.steps * self.vdc

    @property
    def period(self) -> float:
        return 1.0 / self.fundamental_hz

    @property
    def sample_count(self) -> int:
        return int(self.lengths.sum())

    @property
    def samples_per_period(self) -> int:
        return int(round(self.sample_rate_hz / self.fundamental_hz))

    @property
    def duration(self) -> float:
        return self.sample_count / self.sample_rate_hz

    @property
    def starts(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.lengths)[:-1]]) / self.sample_rate_hz

    @property
    def durations(self) -> np.ndarray:
        return self.lengths / self.sample_rate_hz

    @property
    def segments(self) -> list[tuple[float, float, float]]:
        return list(zip(self.starts.tolist(), self.durations.tolist(), self.volts.tolist()))

    def sampled(self) -> np.ndarray:
        return np.repeat(self.volts, self.lengths)

    def level_samples(self) -> np.ndarray:
        return np.repeat(self.steps, self.lengths)

    def first_period(self) -> "VoltageWaveform":
        n = self.samples_per_period
        if self.sample_count < n:
            raise ValueError("waveform is shorter than one period")
        if self.sample_count == n:
            return self
        return VoltageWaveform.from_levels(self.level_samples()[:n], self.vdc, self.sample_rate_hz,
                                           self.fundamental_hz, self.max_level)

    def same_segments(self, other: "VoltageWaveform") -> bool:
        return (
            self.vdc == other.vdc
            and self.sample_rate_hz == other.sample_rate_hz
            and np.array_equal(self.lengths, other.lengths)
            and np.array_equal(self.steps, other.steps)
        )


@dataclass(frozen=True, eq=False)
class CurrentWaveform:
    samples: np.ndarray
    sample_rate_hz: float
    initial_current: float
    final_current: float
    settle_periods: int = 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate_hz


def _gate_codes(gates: np.ndarray) -> np.ndarray:
    weights = np.left_shift(np.int64(1), np.arange(gates.shape[1], dtype=np.int64))
    return gates.astype(np.int64) @ weights


def synthesize_voltage(schedule: GateSchedule, table: SwitchingTable, vdc: float) -> VoltageWaveform:
    """Voltage seen by the load: the table level of each gate vector times ``vdc``."""
    row_levels, row_gates = table.as_array()
    if schedule.samples.shape[1] != row_gates.shape[1]:
        raise ValueError("schedule and table have different switch counts")
    codes = _gate_codes(row_gates)
    order = np.argsort(codes)
    codes, row_levels = codes[order], row_levels[order]
    sample_codes = _gate_codes(schedule.samples)
    pos = np.clip(np.searchsorted(codes, sample_codes), 0, len(codes) - 1)
    hit = codes[pos] == sample_codes
    if not hit.all():
        bad = int(np.argmin(hit))
        raise ValueError(f"sample {bad}: gate vector {schedule.samples[bad].tolist()} is not a table row")
    return VoltageWaveform.from_levels(row_levels[pos], vdc, schedule.sample_rate_hz, schedule.fundamental_hz,
                                       table.topology.max_level)


def solve_r_current(v: VoltageWaveform, load: LoadModel) -> CurrentWaveform:
    if load.kind != R_LOAD:
        raise ValueError("solve_r_current needs an R load")
    samples = v.sampled() / load.resistance
    return CurrentWaveform(samples, v.sample_rate_hz, float(samples[0]), float(v.volts[-1] / load.resistance))


def solve_rl_current(v: VoltageWaveform, load: LoadModel, i0: float = 0.0) -> CurrentWaveform:
    """Closed-form first-order response chained segment by segment.

    Inside a segment of voltage V entered with current i_s,
    ``i(t) = V/R + (i_s - V/R) * exp(-t R / L)``; every sample uses that
    expression directly, so there is no step-size error.
    """
    if load.kind != RL_LOAD:
        raise ValueError("solve_rl_current needs an RL load")
    samples, final = kernels.rl_fill(
        np.ascontiguousarray(v.lengths, dtype=np.int64),
        np.ascontiguousarray(v.volts, dtype=np.float64),
        float(load.resistance), float(load.inductance), float(v.sample_rate_hz), float(i0),
    )
    return CurrentWaveform(np.asarray(samples), v.sample_rate_hz, float(i0), float(final))


def solve_current(v: VoltageWaveform, load: LoadModel, i0: float = 0.0) -> CurrentWaveform:
    if load.kind == R_LOAD:
        return solve_r_current(v, load)
    return solve_rl_current(v, load, i0)


def settle_periodic(v: VoltageWaveform, load: LoadModel, tolerance: float = 1e-9,
                    max_periods: int = 100, method: str = "iterate") -> CurrentWaveform:
    """One period of periodic steady-state current.

    ``method="iterate"`` runs whole periods from zero current until the
    start/end mismatch drops below ``tolerance``. ``method="fixed_point"``
    solves the affine one-period map directly, which is what very long
    time constants need.
    """
    one = v.first_period()
    if load.kind == R_LOAD:
        return solve_r_current(one, load)
    if method == "fixed_point":
        decay = math.exp(-one.duration / load.tau)
        forced = solve_rl_current(one, load, 0.0).final_current
        cw = solve_rl_current(one, load, forced / (1.0 - decay))
        residual = abs(cw.final_current - cw.initial_current)
        if residual >= tolerance:
            raise SettlingError(residual, 1)
        return cw
    if method != "iterate":
        raise ValueError(f"unknown settling method {method!r}")
    i0 = 0.0
    residual = math.inf
    for count in range(1, max_periods + 1):
        cw = solve_rl_current(one, load, i0)
        residual = abs(cw.final_current - cw.initial_current)
        if residual < tolerance:
            return replace(cw, settle_periods=count)
        i0 = cw.final_current
    raise SettlingError(residual, max_periods)


def _series_csv(header: str, values: np.ndarray, sample_rate_hz: float) -> str:
    buf = io.StringIO()
    buf.write(f"t_seconds,{header}\n")
    for i, x in enumerate(np.asarray(values, dtype=np.float64).tolist()):
        buf.write(f"{i / sample_rate_hz!r},{x!r}\n")
    return buf.getvalue()


def voltage_to_csv(v: VoltageWaveform) -> str:
    return _series_csv("volts", v.sampled(), v.sample_rate_hz)


def current_to_csv(c: CurrentWaveform) -> str:
    return _series_csv("amps", c.samples, c.sample_rate_hz)


def segments_to_csv(v: VoltageWaveform) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["start", "duration", "volts"])
    for row in v.segments:
        w.writerow([repr(x) for x in row])
    return buf.getvalue()
