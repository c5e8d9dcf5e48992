"""Kernel backend selection.

The hot loops (transport sweep, stub pairing, edge rewiring) exist twice:
``_fast`` is a Cython extension, ``_pure`` is the Python fallback with
identical semantics. The compiled backend is picked at import when present;
set ``BIASWALK_BACKEND=pure`` (or ``compiled``) to force one.
"""

import os

from . import _pure

try:
    from . import _fast
except ImportError:
    _fast = None

_ENV_VAR = "BIASWALK_BACKEND"


def available():
    """Names of the backends importable in this environment."""
    return ("compiled", "pure") if _fast is not None else ("pure",)


def get(name=None):
    """Return the kernel module for `name`, or the active default."""
    if name is None:
        name = os.environ.get(_ENV_VAR, "").strip().lower() or None
    if name is None:
        return _fast if _fast is not None else _pure
    if name == "pure":
        return _pure
    if name == "compiled":
        if _fast is None:
            raise RuntimeError(
                "compiled kernels are not built; reinstall the package "
                "(pip install -e . --no-build-isolation) or use the pure backend"
            )
        return _fast
    raise ValueError(f"unknown kernel backend {name!r} (use 'compiled' or 'pure')")


def active_name():
    """Name of the backend `get(None)` resolves to."""
    return get().NAME
