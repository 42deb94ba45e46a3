"""Stepping kernels with a compiled core and a pure-python fallback.

The compiled extension is preferred when importable; set the environment
variable ``DYNAMAP_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names
the selection actually in effect.
"""

from __future__ import annotations

import os

if os.environ.get("DYNAMAP_PURE_PYTHON"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

rk4_steps = _impl.rk4_steps
volterra_profile = _impl.volterra_profile

__all__ = ["BACKEND", "rk4_steps", "volterra_profile"]
