"""Hot point-vs-slab kernels: compiled core with a NumPy fallback.

The compiled extension (``plankforge.kernels._core``) is optional; build it
in place with ``python setup_ext.py build_ext --inplace``.  Backend selection
happens once at import time and can be forced with ``PLANKFORGE_KERNELS=py``
or ``PLANKFORGE_KERNELS=c``.

Integer-valued kernels (``interval_counts``) are bit-identical across the two
backends because both operate on the same precomputed projections.  Kernels
that compute their own dot products (``covered_mask``, ``min_slab_distance``)
may differ from the NumPy backend by one ulp of summation rounding for points
sitting exactly on a slab boundary; both answers are inside the membership
tolerance band.
"""
import os

from . import _py

_BACKENDS = {"python": _py}
try:
    from . import _core  # compiled extension, built separately
    _BACKENDS["compiled"] = _core
except ImportError:
    _core = None

_forced = os.environ.get("PLANKFORGE_KERNELS", "").strip().lower()
if _forced in {"py", "python"}:
    BACKEND = "python"
elif _forced in {"c", "compiled"}:
    if _core is None:
        raise ImportError(
            "PLANKFORGE_KERNELS=c requested but the compiled kernels are not built; "
            "run: python setup_ext.py build_ext --inplace"
        )
    BACKEND = "compiled"
elif _forced:
    raise ImportError(f"unknown PLANKFORGE_KERNELS value {_forced!r} (use 'py' or 'c')")
else:
    BACKEND = "compiled" if _core is not None else "python"

_impl = _BACKENDS[BACKEND]
covered_mask = _impl.covered_mask
interval_counts = _impl.interval_counts
min_slab_distance = _impl.min_slab_distance


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str):
    """Return a specific backend module ('python' or 'compiled')."""
    if name not in _BACKENDS:
        raise KeyError(f"backend {name!r} not available; built: {available_backends()}")
    return _BACKENDS[name]
