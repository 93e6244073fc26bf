"""Fourier-series harmonic spectrum and THD of exactly one waveform period."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels


class NoFundamentalError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HarmonicSpectrum:
    """Peak magnitudes by harmonic order.

    ``magnitudes[n]`` is V_n for ``n >= 1``; ``magnitudes[0]`` is unused
    and held at 0 (the mean lives in ``dc_component``).
    """

    fundamental_hz: float
    magnitudes: np.ndarray
    dc_component: float
    sample_rate_hz: float
    sample_count: int

    @property
    def max_harmonic(self) -> int:
        return len(self.magnitudes) - 1

    @property
    def fundamental(self) -> float:
        return float(self.magnitudes[1])

    def mean_square(self, max_harmonic: int | None = None) -> float:
        """dc^2 + sum(V_n^2 / 2), the mean square carried by the retained orders."""
        h = self.max_harmonic if max_harmonic is None else max_harmonic
        return self.dc_component ** 2 + float(np.sum(self.magnitudes[1:h + 1] ** 2)) / 2


def spectrum(samples, sample_rate_hz: float, fundamental_hz: float, max_harmonic: int = 100) -> HarmonicSpectrum:
    """Project one period of samples onto cos/sin at each harmonic order.

    The sample count must equal ``sample_rate_hz / fundamental_hz`` exactly;
    anything else would need resampling, which is left to the caller.
    """
    x = np.ascontiguousarray(samples, dtype=np.float64)
    n = len(x)
    per = sample_rate_hz / fundamental_hz
    if abs(per - round(per)) > 1e-9 * per or int(round(per)) != n:
        raise ValueError(f"need exactly one period of samples ({per!r} per period), got {n}")
    if max_harmonic < 1 or max_harmonic > n // 2 - 1:
        raise ValueError(f"max_harmonic must lie in 1..{n // 2 - 1} for {n} samples")
    a, b = kernels.harmonic_sums(x, int(max_harmonic))
    mags = 2.0 * np.hypot(np.asarray(a), np.asarray(b)) / n
    mags[0] = 0.0
    mags.setflags(write=False)
    return HarmonicSpectrum(float(fundamental_hz), mags, float(x.mean()), float(sample_rate_hz), n)


def thd(spec: HarmonicSpectrum, max_harmonic: int | None = None) -> float:
    """100 * sqrt(V_2^2 + ... + V_H^2) / V_1, in percent; dc excluded."""
    h = spec.max_harmonic if max_harmonic is None else max_harmonic
    if h > spec.max_harmonic or h < 1:
        raise ValueError(f"max_harmonic {h} outside computed range 1..{spec.max_harmonic}")
    v1 = spec.fundamental
    scale = max(abs(spec.dc_component), float(spec.magnitudes.max()))
    if v1 <= 1e-12 * scale or v1 == 0.0:
        raise NoFundamentalError("no fundamental")
    return 100.0 * math.sqrt(float(np.sum(spec.magnitudes[2:h + 1] ** 2))) / v1


def rms(samples) -> float:
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("rms of empty input")
    return math.sqrt(float(np.mean(x * x)))


def spectrum_to_csv(spec: HarmonicSpectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["harmonic_order", "frequency_hz", "magnitude"])
    for order in range(1, spec.max_harmonic + 1):
        w.writerow([order, repr(order * spec.fundamental_hz), repr(float(spec.magnitudes[order]))])
    return buf.getvalue()
