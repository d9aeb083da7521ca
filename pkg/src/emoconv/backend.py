"""Kernel backend selection.

The sequential inner loops (LSTM time recursion, per-frame pitch
autocorrelation, phase-continuous synthesis) ship in two flavours: a numba
``@njit`` build and a pure numpy build.  ``EMOCONV_NUMBA=0`` (or ``false`` /
``off`` / ``no``) forces the numpy path; anything else uses numba when it is
importable.  The choice is made once, when :mod:`emoconv.kernels` is first
imported.  Within one backend every kernel is deterministic.
"""

import os

ENV_FLAG = "EMOCONV_NUMBA"

_OFF_VALUES = {"0", "false", "off", "no"}


def numba_requested() -> bool:
    """True unless the env flag explicitly disables numba."""
    return os.environ.get(ENV_FLAG, "1").strip().lower() not in _OFF_VALUES


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def use_numba() -> bool:
    return numba_requested() and numba_available()


def backend_name() -> str:
    return "numba" if use_numba() else "numpy"
