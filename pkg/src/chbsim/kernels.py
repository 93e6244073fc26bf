"""Kernel selection: the compiled extension when built, numpy otherwise.

Set ``CHBSIM_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

from . import _fallback

BACKEND = "python"
rl_fill = _fallback.rl_fill
harmonic_sums = _fallback.harmonic_sums

if not os.environ.get("CHBSIM_PURE_PYTHON"):
    try:
        from ._kernels import harmonic_sums, rl_fill  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"
