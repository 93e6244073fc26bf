# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the RL solver and the harmonic correlation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, M_PI

cnp.import_array()


def rl_fill(const long long[:] lengths, const double[:] volts, double resistance,
            double inductance, double sample_rate_hz, double i0):
    """Exact RL current at every sample of a piecewise-constant voltage.

    Returns ``(samples, final_current)``; ``final_current`` is the value at
    the end of the last segment.
    """
    cdef Py_ssize_t nseg = lengths.shape[0]
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t s, j, pos = 0
    for s in range(nseg):
        total += lengths[s]
    out = np.empty(total, dtype=np.float64)
    cdef double[:] o = out
    cdef double rate = resistance / inductance
    cdef double i_s = i0
    cdef double vr, dev
    for s in range(nseg):
        vr = volts[s] / resistance
        dev = i_s - vr
        for j in range(lengths[s]):
            o[pos] = vr + dev * exp(-rate * (j / sample_rate_hz))
            pos += 1
        i_s = vr + dev * exp(-rate * (lengths[s] / sample_rate_hz))
    return out, i_s


def harmonic_sums(const double[:] x, int max_harmonic):
    """Cosine and sine correlation sums for orders ``0..max_harmonic``."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t h, k, idx
    ct_arr = np.empty(n, dtype=np.float64)
    st_arr = np.empty(n, dtype=np.float64)
    cdef double[:] ct = ct_arr
    cdef double[:] st = st_arr
    for k in range(n):
        ct[k] = cos(2.0 * M_PI * k / n)
        st[k] = sin(2.0 * M_PI * k / n)
    a_arr = np.zeros(max_harmonic + 1, dtype=np.float64)
    b_arr = np.zeros(max_harmonic + 1, dtype=np.float64)
    cdef double[:] a = a_arr
    cdef double[:] b = b_arr
    cdef double sa, sb
    for h in range(max_harmonic + 1):
        sa = 0.0
        sb = 0.0
        idx = 0
        for k in range(n):
            sa += x[k] * ct[idx]
            sb += x[k] * st[idx]
            idx += h
            if idx >= n:
                idx -= n
        a[h] = sa
        b[h] = sb
    return a_arr, b_arr
