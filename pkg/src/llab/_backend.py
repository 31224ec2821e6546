"""Kernel backend selection.

The compiled extension is used when it imports cleanly; otherwise (or when
``LLAB_PURE=1`` is set) the numpy implementation in ``_pykernels`` is used.
Both expose identical function names and return types.
"""
import os

from . import _pykernels

kernels = _pykernels
NAME = "python"

if os.environ.get("LLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        kernels = _ckernels
        NAME = "cython"

COMPILED_AVAILABLE = True
try:
    from . import _ckernels as _probe  # noqa: F401
except ImportError:  # pragma: no cover
    COMPILED_AVAILABLE = False


def get(name):
    """Return the kernel module by name: ``"python"`` or ``"cython"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
