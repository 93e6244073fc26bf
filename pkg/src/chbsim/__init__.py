"""Conventional and modified cascaded H-bridge multilevel inverter simulation."""

from .analysis import HarmonicSpectrum, NoFundamentalError, rms, spectrum, thd
from .kernels import BACKEND
from .modulation import (GateSchedule, ModulationSpec, count_switching_events, ls_pwm_sequence,
                         nearest_level_sequence, schedule_gates)
from .scenario import (ComparisonReport, Scenario, ScenarioError, export_plots, run_paper_suite, run_scenario,
                       run_suite, simulate)
from .simulation import (CurrentWaveform, LoadModel, SettlingError, VoltageWaveform, settle_periodic,
                         solve_r_current, solve_rl_current, synthesize_voltage)
from .topology import (LegPair, SwitchingTable, Topology, build_conventional, build_modified, count_switches,
                       level_of, validate_table)

__version__ = "0.1.0"
