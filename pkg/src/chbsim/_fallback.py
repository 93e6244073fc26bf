"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def rl_fill(lengths, volts, resistance, inductance, sample_rate_hz, i0):
    lengths = np.asarray(lengths, dtype=np.int64)
    volts = np.asarray(volts, dtype=np.float64)
    rate = resistance / inductance
    vr = volts / resistance
    starts = np.empty(len(lengths))
    i_s = float(i0)
    for s in range(len(lengths)):
        starts[s] = i_s
        i_s = vr[s] + (i_s - vr[s]) * np.exp(-rate * (lengths[s] / sample_rate_hz))
    seg = np.repeat(np.arange(len(lengths)), lengths)
    first = np.concatenate([[0], np.cumsum(lengths)[:-1]])
    offset = np.arange(len(seg)) - first[seg]
    out = vr[seg] + (starts - vr)[seg] * np.exp(-rate * (offset / sample_rate_hz))
    return out, float(i_s)


def harmonic_sums(x, max_harmonic):
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    k = np.arange(n)
    ct = np.cos(2.0 * np.pi * k / n)
    st = np.sin(2.0 * np.pi * k / n)
    a = np.zeros(max_harmonic + 1)
    b = np.zeros(max_harmonic + 1)
    for h in range(max_harmonic + 1):
        idx = (h * k) % n
        a[h] = x @ ct[idx]
        b[h] = x @ st[idx]
    return a, b
