"""Backend selection for the hot line kernels.

The compiled extension is preferred when importable; the pure-numpy module
is the fallback. Selection happens once at import and may be overridden
with the SHIFTBF_BACKEND environment variable ("auto", "python",
"compiled") or at runtime with `use_backend` (intended for benchmarks and
tests; not thread-safe while filters are running).
"""

import os

from . import _purecore

_BACKENDS = {"python": _purecore}

try:
    from . import _fastcore
    _BACKENDS["compiled"] = _fastcore
except ImportError:
    _fastcore = None


def _select_initial():
    requested = os.environ.get("SHIFTBF_BACKEND", "auto")
    if requested == "auto":
        return _BACKENDS.get("compiled", _purecore)
    try:
        return _BACKENDS[requested]
    except KeyError:
        raise ImportError(
            f"SHIFTBF_BACKEND={requested!r} not available; "
            f"choices: auto, {', '.join(sorted(_BACKENDS))}"
        ) from None


_active = _select_initial()


def active():
    """The currently selected backend module."""
    return _active


def backend_name() -> str:
    return _active.BACKEND_NAME


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name: str):
    """Switch backends; returns the previous backend's name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choices: {available_backends()}")
    previous = _active.BACKEND_NAME
    _active = _BACKENDS[name]
    return previous


def running_max_lines(a, radius):
    return _active.running_max_lines(a, radius)


def window_sum_lines(a, radius):
    return _active.window_sum_lines(a, radius)


def max_filter_1d_counted(seq, radius):
    return _active.max_filter_1d_counted(seq, radius)
