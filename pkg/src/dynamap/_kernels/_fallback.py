"""Pure-python (numpy) implementations of the stepping kernels.

These mirror the compiled kernels in ``_core.pyx`` operation for operation;
the only permitted deviation is summation order inside reductions (numpy dot
versus a C accumulation loop), so cross-backend parity is asserted to 1e-12
rather than bit-exactly.
"""

from __future__ import annotations

import numpy as np


def _rk4_step(g0, gm, g1, y, h):
    k1 = g0 @ y
    k2 = gm @ (y + (0.5 * h) * k1)
    k3 = gm @ (y + (0.5 * h) * k2)
    k4 = g1 @ (y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_steps(gs: np.ndarray, hs: np.ndarray, y0: np.ndarray):
    """Advance Y' = G(t) Y through the given substeps.

    ``gs[i]`` holds G sampled at the five points t, t+h/4, t+h/2, t+3h/4,
    t+h of substep i.  Each substep is taken as two half steps of classical
    RK4; a single full step provides the step-doubling error estimate
    ||Y_full - Y_halves||_F / 15.  Returns the final value and the largest
    per-substep error estimate.
    """
    y = np.array(y0, dtype=complex)
    err_max = 0.0
    for i in range(hs.shape[0]):
        h = hs[i]
        g0, gq, gm, g3q, g1 = gs[i]
        y_full = _rk4_step(g0, gm, g1, y, h)
        y_half = _rk4_step(g0, gq, gm, y, 0.5 * h)
        y = _rk4_step(gm, g3q, g1, y_half, 0.5 * h)
        err = float(np.linalg.norm(y_full - y)) / 15.0
        if err > err_max:
            err_max = err
    return y, err_max


def volterra_profile(kvals: np.ndarray, h: float):
    """Second-order solve of a'(t) = -int_0^t k(t-tau) a(tau) dtau, a(0)=1.

    Trapezoidal quadrature of the memory integral plus a Heun
    predictor-corrector step.  ``kvals[j] = k(j h)`` on the uniform grid.
    Returns the profile a and its derivative d on the grid.
    """
    kvals = np.asarray(kvals, dtype=float)
    n = kvals.shape[0] - 1
    a = np.empty(n + 1)
    d = np.empty(n + 1)
    a[0] = 1.0
    d[0] = 0.0
    k0 = kvals[0]
    for m in range(n):
        # shared trapezoid sum over history nodes 0..m at target time t_{m+1}
        s = 0.5 * kvals[m + 1] * a[0]
        if m >= 1:
            s += float(np.dot(kvals[1 : m + 1][::-1], a[1 : m + 1]))
        a_pred = a[m] + h * d[m]
        d_pred = -h * (s + 0.5 * k0 * a_pred)
        a[m + 1] = a[m] + 0.5 * h * (d[m] + d_pred)
        d[m + 1] = -h * (s + 0.5 * k0 * a[m + 1])
    return a, d
