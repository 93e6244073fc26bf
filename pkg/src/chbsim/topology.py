"""Inverter topologies as data: switch/source counts, leg pairs and level maps.

Two families are modelled:

conventional
    ``n`` cascaded full H-bridges, one isolated source each. A bridge is
    either *active* (S1,S2 on for positive output, S3,S4 on for negative)
    or *bypassed* through its two lower switches (S2,S4).
modified
    one output H-bridge that sets polarity, fed by a chain of ``n`` sources
    where each source after the first has a selector leg that either inserts
    it (upper switch) or bypasses it (lower switch).

Switches are 0-based internally; CSV and display use ``S1..Sn``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional

import numpy as np

CONVENTIONAL = "conventional"
MODIFIED = "modified"
KINDS = (CONVENTIONAL, MODIFIED)

GateVector = tuple[int, ...]

# Bridge polarity patterns for (S1, S2, S3, S4) of one H-bridge.
_POSITIVE = (1, 1, 0, 0)
_NEGATIVE = (0, 0, 1, 1)
_BYPASS = (0, 1, 0, 1)
_OFF = (0, 0, 0, 0)


class LegPair(NamedTuple):
    """Two switches of one leg; both conducting shorts a source."""

    high: int
    low: int

    def label(self) -> str:
        return f"(S{self.high + 1},S{self.low + 1})"


class Violation(NamedTuple):
    level: int
    pair: LegPair


@dataclass(frozen=True)
class Topology:
    kind: str
    levels: int
    source_count: int
    switch_count: int
    leg_pairs: tuple[LegPair, ...]
    level_map: Mapping[int, GateVector] = field(repr=False)

    def __post_init__(self):
        _check_levels(self.levels)
        k = (self.levels - 1) // 2
        if self.source_count != k:
            raise ValueError(f"source_count {self.source_count} != (levels-1)/2 = {k}")
        expected = 4 * k if self.kind == CONVENTIONAL else 2 * k + 2
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology kind {self.kind!r}")
        if self.switch_count != expected:
            raise ValueError(f"{self.kind} {self.levels}-level needs {expected} switches, got {self.switch_count}")
        for p in self.leg_pairs:
            if p.high == p.low or not (0 <= p.high < self.switch_count and 0 <= p.low < self.switch_count):
                raise ValueError(f"bad leg pair {p}")
        if set(self.level_map) != set(range(-k, k + 1)):
            raise ValueError("level_map must hold exactly one row per level index")
        for gates in self.level_map.values():
            if len(gates) != self.switch_count:
                raise ValueError("gate vector length does not match switch count")
        bad = _violations(self.leg_pairs, self.level_map.items())
        if bad:
            raise ValueError(f"shoot-through in level map: {bad}")

    @property
    def max_level(self) -> int:
        return (self.levels - 1) // 2

    @property
    def name(self) -> str:
        return f"{self.kind}-{self.levels}"

    def table(self) -> "SwitchingTable":
        rows = tuple((k, self.level_map[k]) for k in range(self.max_level, -self.max_level - 1, -1))
        return SwitchingTable(self, rows)


@dataclass(frozen=True)
class SwitchingTable:
    """Rows of ``(level, gates)`` bound to a topology, highest level first.

    Rows are not required to agree with ``topology.level_map``; a table may
    be a deliberately corrupted copy handed to :func:`validate_table`.
    """

    topology: Topology
    rows: tuple[tuple[int, GateVector], ...]

    def __post_init__(self):
        k = self.topology.max_level
        idx = [lv for lv, _ in self.rows]
        if sorted(idx) != list(range(-k, k + 1)):
            raise ValueError(f"table levels {idx} are not exactly {-k}..{k}")
        for lv, gates in self.rows:
            if len(gates) != self.topology.switch_count:
                raise ValueError(f"row {lv}: expected {self.topology.switch_count} gates, got {len(gates)}")
            if any(g not in (0, 1) for g in gates):
                raise ValueError(f"row {lv}: gate states must be 0/1")

    def row(self, level: int) -> GateVector:
        for lv, gates in self.rows:
            if lv == level:
                return gates
        raise KeyError(level)

    def replace_row(self, level: int, gates: Iterable[int]) -> "SwitchingTable":
        gates = tuple(int(g) for g in gates)
        return SwitchingTable(self.topology, tuple((lv, gates if lv == level else g) for lv, g in self.rows))

    def as_array(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(levels, gates)`` arrays in row order."""
        levels = np.array([lv for lv, _ in self.rows], dtype=np.int64)
        gates = np.array([g for _, g in self.rows], dtype=np.uint8)
        return levels, gates


def _check_levels(levels: int):
    if not isinstance(levels, (int, np.integer)) or isinstance(levels, bool):
        raise TypeError("levels must be an integer")
    if levels < 3 or levels % 2 == 0:
        raise ValueError(f"levels must be odd and >= 3, got {levels}")


def _bridge_pairs(first: int) -> list[LegPair]:
    # S1/S2 and S3/S4 are the diagonals, so the legs are (S1,S4) and (S3,S2).
    return [LegPair(first, first + 3), LegPair(first + 2, first + 1)]


def build_conventional(levels: int) -> Topology:
    """Cascade of (levels-1)/2 H-bridges with 4 switches each."""
    _check_levels(levels)
    k = (levels - 1) // 2
    level_map = {0: (0,) * (4 * k)}
    for mag in range(1, k + 1):
        for sign, active in ((1, _POSITIVE), (-1, _NEGATIVE)):
            gates = []
            for b in range(k):
                gates.extend(active if b < mag else _BYPASS)
            level_map[sign * mag] = tuple(gates)
    pairs = [p for b in range(k) for p in _bridge_pairs(4 * b)]
    return Topology(CONVENTIONAL, levels, k, 4 * k, tuple(pairs), level_map)


def build_modified(levels: int) -> Topology:
    """Output H-bridge plus one selector leg per additional source."""
    _check_levels(levels)
    k = (levels - 1) // 2
    n = 2 * k + 2
    level_map = {0: (0,) * n}
    for mag in range(1, k + 1):
        selectors = []
        for j in range(1, k):
            selectors.extend((1, 0) if j < mag else (0, 1))
        level_map[mag] = _POSITIVE + tuple(selectors)
        level_map[-mag] = _NEGATIVE + tuple(selectors)
    pairs = _bridge_pairs(0) + [LegPair(4 + 2 * j, 5 + 2 * j) for j in range(k - 1)]
    return Topology(MODIFIED, levels, k, n, tuple(pairs), level_map)


def build(kind: str, levels: int) -> Topology:
    if kind == CONVENTIONAL:
        return build_conventional(levels)
    if kind == MODIFIED:
        return build_modified(levels)
    raise ValueError(f"unknown topology kind {kind!r}; expected one of {KINDS}")


def _violations(pairs, rows) -> list[Violation]:
    out = []
    for level, gates in rows:
        for p in pairs:
            if gates[p.high] and gates[p.low]:
                out.append(Violation(level, p))
    return out


def validate_table(table: SwitchingTable) -> list[Violation]:
    """Every (level, leg pair) where both switches of the leg conduct.

    An empty list means the table is free of shoot-through.
    """
    return _violations(table.topology.leg_pairs, table.rows)


def level_of(table: SwitchingTable, gates: Iterable[int]) -> Optional[int]:
    """Inverse row lookup; ``None`` when ``gates`` is not a row of the table."""
    gates = tuple(int(g) for g in gates)
    if len(gates) != table.topology.switch_count:
        raise ValueError(f"expected {table.topology.switch_count} gates, got {len(gates)}")
    for lv, row in table.rows:
        if row == gates:
            return lv
    return None


def count_switches(topology: Topology) -> int:
    return topology.switch_count


def table_to_csv(table: SwitchingTable) -> str:
    n = table.topology.switch_count
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level"] + [f"S{i + 1}" for i in range(n)])
    for lv, gates in table.rows:
        w.writerow([lv, *gates])
    return buf.getvalue()


def table_from_csv(text: str, topology: Topology) -> SwitchingTable:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    n = topology.switch_count
    if header != ["level"] + [f"S{i + 1}" for i in range(n)]:
        raise ValueError(f"unexpected header {header}")
    rows = tuple((int(r[0]), tuple(int(c) for c in r[1:])) for r in reader if r)
    return SwitchingTable(topology, rows)
