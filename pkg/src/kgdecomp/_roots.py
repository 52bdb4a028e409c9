"""Scalar root finding shared by the closed-form solvers."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NoConvergence


def sign_changes(f: Callable[[float], float], lo: float, hi: float, panels: int = 64):
    """Split [lo, hi] into equal panels and return those whose ends differ in sign.

    Exact zeros at panel ends are returned as degenerate brackets (x, x).
    """
    xs = np.linspace(lo, hi, panels + 1)
    fs = [f(float(x)) for x in xs]
    brackets = []
    for i in range(panels):
        a, b = float(xs[i]), float(xs[i + 1])
        fa, fb = fs[i], fs[i + 1]
        if fa == 0.0:
            brackets.append((a, a))
        elif fa * fb < 0.0:
            brackets.append((a, b))
    if fs[-1] == 0.0:
        brackets.append((float(xs[-1]), float(xs[-1])))
    return brackets, fs[0], fs[-1]


def refine_root(f: Callable[[float], float], a: float, b: float, ftol: float = 1e-13,
                max_iter: int = 200) -> float:
    """Safeguarded secant on a sign-change bracket.

    A secant step is taken when it lands inside the current bracket and the
    bracket has been shrinking; otherwise the step is a bisection.
    """
    if a == b:
        return a
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise ValueError("refine_root needs a sign change")
    width = abs(b - a)
    x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    for _ in range(max_iter):
        if abs(fx) < ftol:
            return x
        s = b - fb * (b - a) / (fb - fa)
        lo, hi = min(a, b), max(a, b)
        if not (lo < s < hi) or abs(b - a) > 0.5 * width:
            s = 0.5 * (a + b)
        width = abs(b - a)
        fs = f(s)
        if fs == 0.0:
            return s
        if fa * fs < 0.0:
            b, fb = s, fs
        else:
            a, fa = s, fs
        x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
        if abs(b - a) <= 4 * math.ulp(max(abs(a), abs(b))):
            return x
    if abs(fx) < ftol:
        return x
    raise NoConvergence(f"root refinement stalled at x = {x!r}, f = {fx!r}")
