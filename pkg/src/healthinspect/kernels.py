"""Backend selection for the sampler and solver inner loops.

The compiled extension is used when it imports; otherwise the pure-Python
twins are used. Set ``HEALTHINSPECT_BACKEND=python`` to force the fallback.
"""

import logging
import os
from types import ModuleType

from . import _kernels_py

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def available_backends() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``name`` ("cython" or "python").

    ``None`` picks the compiled module when present, honouring the
    ``HEALTHINSPECT_BACKEND`` environment override.
    """
    if name is None:
        name = os.environ.get("HEALTHINSPECT_BACKEND", "").strip().lower() or None
    if name is None:
        return _compiled if _compiled is not None else _kernels_py
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def backend_name(module: ModuleType | None = None) -> str:
    module = module or get_backend()
    return "cython" if module is _compiled and _compiled is not None else "python"


if _compiled is None:
    log.debug("compiled kernels unavailable; using pure-Python fallback")
