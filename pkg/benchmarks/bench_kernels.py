"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from chbsim import _fallback
from chbsim.modulation import LS_PWM, ModulationSpec, level_sequence, schedule_gates
from chbsim.scenario import paper_scenarios, run_suite
from chbsim.simulation import synthesize_voltage
from chbsim.topology import build

try:
    from chbsim import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    spec = ModulationSpec(scheme=LS_PWM)
    table = build("conventional", 7).table()
    v = synthesize_voltage(schedule_gates(table, level_sequence(7, spec, periods=5), spec), table, 100.0)
    lengths, volts = v.lengths.astype(np.int64), v.volts.astype(np.float64)
    x = v.sampled()[: spec.samples_per_period].astype(np.float64)

    cases = {
        f"rl_fill ({len(lengths)} segments, {v.sample_count} samples)":
            lambda mod: mod.rl_fill(lengths, volts, 10.0, 1e-4, 1e6, 0.0),
        f"harmonic_sums (H=100, N={len(x)})": lambda mod: mod.harmonic_sums(x, 100),
        f"harmonic_sums (H=1000, N={len(x)})": lambda mod: mod.harmonic_sums(x, 1000),
    }
    backends = [("numpy", _fallback)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':<48}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for label, fn in cases.items():
        times = [best_of(lambda m=mod: fn(m), args.repeat) for _, mod in backends]
        speed = f"{times[0] / times[1]:>9.1f}x" if len(times) == 2 else ""
        print(f"{label:<48}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + speed)

    t = best_of(lambda: run_suite(paper_scenarios()), args.repeat)
    print(f"paper suite, 8 scenarios at 1 MHz (active backend): {t:.3f} s")
    if _kernels is None:
        print("compiled extension not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
