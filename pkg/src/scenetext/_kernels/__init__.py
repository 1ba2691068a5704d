"""Kernel backend selection.

The compiled Cython core is preferred when importable; otherwise the
NumPy fallback is used. The choice can be forced with the
``SCENETEXT_KERNELS`` environment variable (``compiled`` or ``numpy``)
or programmatically with :func:`select`.
"""

from __future__ import annotations

import os
from types import ModuleType
from typing import List, Optional

from scenetext._kernels import fallback

_ENV_VAR = "SCENETEXT_KERNELS"

try:
    from scenetext._kernels import _core as _compiled
except ImportError:
    _compiled = None


def available() -> List[str]:
    """Names of importable backends, preferred first."""
    names = []
    if _compiled is not None:
        names.append("compiled")
    names.append("numpy")
    return names


def _resolve(name: str) -> ModuleType:
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError(
                "compiled kernels are not available; rebuild the extension "
                "or select the numpy backend"
            )
        return _compiled
    if name == "numpy":
        return fallback
    raise ValueError(f"unknown kernel backend {name!r}; expected compiled or numpy")


def _default() -> ModuleType:
    env = os.environ.get(_ENV_VAR, "").strip().lower()
    if env and env != "auto":
        return _resolve(env)
    return _compiled if _compiled is not None else fallback


_active: ModuleType = _default()


def select(name: Optional[str]) -> ModuleType:
    """Switch the active backend; ``None`` or ``"auto"`` restores the default."""
    global _active
    if name is None or name == "auto":
        _active = _default()
    else:
        _active = _resolve(name)
    return _active


def active() -> ModuleType:
    return _active


def backend_name() -> str:
    return _active.BACKEND_NAME
