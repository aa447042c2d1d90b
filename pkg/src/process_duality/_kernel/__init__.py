"""Kernel backend selection.

The compiled extension is preferred when present; `PROCESS_DUALITY_KERNEL`
forces a backend (values: ``compiled``, ``pure``).  Both backends are exact
and bit-identical; the benchmark suite compares their speed.
"""

import os

from . import pivot_py

_forced = os.environ.get("PROCESS_DUALITY_KERNEL", "").strip().lower()

compiled = None
try:
    from . import _pivot_c as compiled  # type: ignore[attr-defined]
except ImportError:
    compiled = None

if _forced == "pure":
    impl = pivot_py
elif _forced == "compiled":
    if compiled is None:
        raise ImportError(
            "PROCESS_DUALITY_KERNEL=compiled but the extension is not built; "
            "run: python setup.py build_ext --inplace"
        )
    impl = compiled
else:
    impl = compiled if compiled is not None else pivot_py

BACKEND = impl.BACKEND
pivot = impl.pivot
bland_entering = impl.bland_entering
bland_leaving = impl.bland_leaving


def available_backends():
    out = ["pure"]
    if compiled is not None:
        out.append("compiled")
    return out
