"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback. ``get_backend`` gives explicit access to either one.
"""

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"
_active = BACKENDS[BACKEND]

plan_payoffs = _active.plan_payoffs
switch_payoffs = _active.switch_payoffs
exhaustive_best = _active.exhaustive_best


def get_backend(name: str) -> ModuleType:
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}"
        ) from None
