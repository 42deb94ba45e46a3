"""Adaptive Simpson quadrature for scalar integrands.

Kept deliberately small: integrands in this package are smooth between a
known finite set of breakpoints (profile kinks), so the interval is split at
those points first and classic recursive Simpson with Richardson control
handles each smooth piece.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .errors import ConvergenceError

MAX_DEPTH = 60


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(
    f: Callable[[float], float],
    a: float,
    fa: float,
    b: float,
    fb: float,
    m: float,
    fm: float,
    whole: float,
    tol: float,
    depth: int,
) -> float:
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    if depth >= MAX_DEPTH:
        raise ConvergenceError(
            f"adaptive Simpson hit depth {MAX_DEPTH} on [{a:g}, {b:g}]"
        )
    if abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1
    )


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    breakpoints: Iterable[float] = (),
) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    ``breakpoints`` are interior points where ``f`` may lose smoothness; the
    interval is split there so each Simpson recursion sees a smooth piece.
    """
    if b < a:
        return -adaptive_simpson(f, b, a, tol, breakpoints)
    if b == a:
        return 0.0
    pts = sorted({a, b} | {p for p in breakpoints if a < p < b})
    total = 0.0
    n = len(pts) - 1
    for lo, hi in zip(pts[:-1], pts[1:]):
        m = 0.5 * (lo + hi)
        flo, fm, fhi = f(lo), f(m), f(hi)
        whole = _simpson(flo, fm, fhi, hi - lo)
        total += _adaptive(f, lo, flo, hi, fhi, m, fm, whole, tol / n, 0)
    return total
