"""Backend selection for the RK4 hot loop.

The compiled extension is used when it was built; otherwise the numpy
implementation is loaded. Both expose ``rk4_trajectory`` with the same
signature and status codes.
"""
from __future__ import annotations

import numpy as np

from . import _rk4_py
from .errors import NumericalFailureError, TraceCollapseError

try:
    from . import _rk4 as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _rk4_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"

MIN_TRACE = 1e-12


def rk4_trajectory(rho0, a, jumps, dt: float, steps_per_record: int, n_records: int,
                   backend: str | None = None) -> np.ndarray:
    """Integrate drho/dt = A rho + rho A^+ + sum L rho L^+ with fixed-step RK4.

    Returns an array of shape ``(n_records, 4, 4)``; record ``r`` is the
    state after ``r * steps_per_record`` steps of size `dt`.
    """
    mod = BACKENDS[backend or BACKEND]
    rho0 = np.ascontiguousarray(rho0, dtype=complex)
    a = np.ascontiguousarray(a, dtype=complex)
    jumps = np.ascontiguousarray(np.asarray(jumps, dtype=complex).reshape(-1, 4, 4))
    out = np.zeros((n_records, 4, 4), dtype=complex)
    status, step = mod.rk4_trajectory(rho0, a, jumps, float(dt), int(steps_per_record), out, MIN_TRACE)
    if status == 1:
        raise TraceCollapseError(f"trace fell below {MIN_TRACE:g} at step {step} (t = {step * dt:.6g})")
    if status == 2:
        raise NumericalFailureError(f"non-finite state at step {step} (t = {step * dt:.6g})")
    return out
