"""Level sequences (staircase and phase-disposition LS-PWM) and gate schedules."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .topology import SwitchingTable, Topology, validate_table

STAIRCASE = "staircase"
LS_PWM = "ls_pwm"
SCHEMES = (STAIRCASE, LS_PWM)


def _as_integer_ratio(num: float, den: float, what: str) -> int:
    ratio = num / den
    r = round(ratio)
    if r < 1 or abs(ratio - r) > 1e-9 * max(1.0, ratio):
        raise ValueError(f"{what} must be an integer, got {ratio!r}")
    return int(r)


@dataclass(frozen=True)
class ModulationSpec:
    scheme: str = STAIRCASE
    fundamental_hz: float = 50.0
    modulation_index: float = 1.0
    carrier_hz: float = 2000.0
    sample_rate_hz: float = 1e6

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not self.fundamental_hz > 0:
            raise ValueError("fundamental_hz must be > 0")
        if not 0 < self.modulation_index <= 1:
            raise ValueError("modulation_index must lie in (0, 1]")
        if self.scheme == LS_PWM:
            if not self.carrier_hz > 0:
                raise ValueError("carrier_hz must be > 0")
            if self.sample_rate_hz < 20 * self.carrier_hz:
                raise ValueError("sample_rate_hz must be >= 20 x carrier_hz for ls_pwm")
            self.carrier_ratio  # validates integer multiple
        elif self.sample_rate_hz < 1000 * self.fundamental_hz:
            raise ValueError("sample_rate_hz must be >= 1000 x fundamental_hz for staircase")
        self.samples_per_period

    @property
    def samples_per_period(self) -> int:
        return _as_integer_ratio(self.sample_rate_hz, self.fundamental_hz, "sample_rate_hz / fundamental_hz")

    @property
    def carrier_ratio(self) -> int:
        return _as_integer_ratio(self.carrier_hz, self.fundamental_hz, "carrier_hz / fundamental_hz")

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "fundamental_hz": self.fundamental_hz,
            "modulation_index": self.modulation_index,
            "carrier_hz": self.carrier_hz,
            "sample_rate_hz": self.sample_rate_hz,
        }


def _reference(levels: int, spec: ModulationSpec) -> np.ndarray:
    """m*k*sin(2*pi*f*t) over one period, exactly odd about the half period."""
    n = spec.samples_per_period
    k = (levels - 1) // 2
    amp = spec.modulation_index * k
    if n % 2:
        return amp * np.sin(2 * np.pi * np.arange(n) / n)
    half = amp * np.sin(2 * np.pi * np.arange(n // 2) / n)
    return np.concatenate([half, -half])


def _round_half_to_zero(x: np.ndarray) -> np.ndarray:
    return (np.sign(x) * np.ceil(np.abs(x) - 0.5)).astype(np.int64)


def nearest_level_sequence(levels: int, spec: ModulationSpec, periods: int = 1) -> np.ndarray:
    """Staircase levels: the sine reference rounded to the nearest level.

    Ties at exact half levels round toward zero.
    """
    if spec.scheme != STAIRCASE:
        raise ValueError("nearest_level_sequence needs a staircase spec")
    one = _round_half_to_zero(_reference(levels, spec))
    return np.tile(one, periods)


def _carrier_heights(spec: ModulationSpec) -> np.ndarray:
    """Unit triangle carrier scaled by samples-per-period, as exact integers.

    0 at each carrier period start, ``n`` at mid period.
    """
    n = spec.samples_per_period
    q = (np.arange(n, dtype=np.int64) * spec.carrier_ratio) % n
    return n - np.abs(2 * q - n)


def ls_pwm_sequence(levels: int, spec: ModulationSpec, periods: int = 1) -> np.ndarray:
    """Phase-disposition level-shifted PWM.

    ``levels - 1`` in-phase triangular carriers stacked over ``[-k, k]``; the
    output level is the number of carriers below the reference, minus ``k``.
    A reference exactly on a carrier resolves toward zero, which keeps the
    output exactly half-wave symmetric whenever the carrier ratio is odd.
    """
    if spec.scheme != LS_PWM:
        raise ValueError("ls_pwm_sequence needs an ls_pwm spec")
    k = (levels - 1) // 2
    n = spec.samples_per_period
    # Compare in units of 1/n so carrier thresholds are exact integers.
    x = _reference(levels, spec) * n
    heights = _carrier_heights(spec)
    count = np.zeros(n, dtype=np.int64)
    for band in range(2 * k):
        threshold = (band - k) * n + heights
        count += (x > threshold) if band >= k else (x >= threshold)
    return np.tile(count - k, periods)


def level_sequence(levels: int, spec: ModulationSpec, periods: int = 1) -> np.ndarray:
    if spec.scheme == STAIRCASE:
        return nearest_level_sequence(levels, spec, periods)
    return ls_pwm_sequence(levels, spec, periods)


@dataclass(frozen=True, eq=False)
class GateSchedule:
    """Gate vectors sampled uniformly over a whole number of periods.

    ``samples`` has shape ``(n_samples, switch_count)``; ``levels`` keeps the
    level index each row was looked up from.
    """

    topology: Topology
    samples: np.ndarray
    levels: np.ndarray
    sample_rate_hz: float
    fundamental_hz: float
    periods: int

    @property
    def samples_per_period(self) -> int:
        return len(self.samples) // self.periods

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate_hz


def schedule_gates(table: SwitchingTable, level_seq, spec: ModulationSpec) -> GateSchedule:
    level_seq = np.asarray(level_seq, dtype=np.int64)
    n = spec.samples_per_period
    if level_seq.ndim != 1 or len(level_seq) == 0 or len(level_seq) % n:
        raise ValueError(f"level sequence length {len(level_seq)} is not a whole number of {n}-sample periods")
    if validate_table(table):
        raise ValueError(f"switching table for {table.topology.name} has shoot-through rows")
    row_levels, gates = table.as_array()
    k = table.topology.max_level
    lut = np.full(2 * k + 1, -1, dtype=np.int64)
    lut[row_levels + k] = np.arange(len(row_levels))
    inside = (level_seq >= -k) & (level_seq <= k)
    if not inside.all():
        pos = int(np.argmin(inside))
        raise ValueError(f"sample {pos}: level {int(level_seq[pos])} not in {table.topology.name} table")
    samples = gates[lut[level_seq + k]]
    samples.setflags(write=False)
    level_seq = level_seq.copy()
    level_seq.setflags(write=False)
    return GateSchedule(table.topology, samples, level_seq, spec.sample_rate_hz, spec.fundamental_hz,
                        len(level_seq) // n)


def count_switching_events(schedule: GateSchedule) -> int:
    """Per-switch toggles over one period, counting the wrap back to the start."""
    one = schedule.samples[: schedule.samples_per_period].astype(np.int8)
    return int(np.abs(np.diff(one, axis=0, append=one[:1])).sum())


def schedule_to_csv(schedule: GateSchedule) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_seconds"] + [f"S{i + 1}" for i in range(schedule.topology.switch_count)])
    for t, row in zip(schedule.times.tolist(), schedule.samples.tolist()):
        w.writerow([repr(t), *row])
    return buf.getvalue()


def levels_to_csv(level_seq, sample_rate_hz: float) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_seconds", "level"])
    for i, lv in enumerate(np.asarray(level_seq).tolist()):
        w.writerow([repr(i / sample_rate_hz), lv])
    return buf.getvalue()


def level_dwell_fraction(level_seq, level: int) -> float:
    """Fraction of samples spent at ``|level|``."""
    level_seq = np.asarray(level_seq)
    return float(np.count_nonzero(np.abs(level_seq) == abs(level))) / len(level_seq)

