from __future__ import annotations

import math
from typing import Callable

import numpy as np


def count_nodes(values, rel_floor: float = 1e-8) -> int:
    """Number of sign changes in a sampled function.

    Samples with magnitude below ``rel_floor * max|values|`` are skipped so
    that round-off in decayed tails does not register as nodes.
    """
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return 0
    floor = rel_floor * np.max(np.abs(v))
    signs = np.sign(v[np.abs(v) > floor])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def bisect(f: Callable[[float], float], a: float, b: float, fa: float, fb: float,
           max_iter: int = 200) -> tuple[float, float]:
    """Bisection on a sign-change bracket; returns ``(root, f(root))``.

    Runs until the bracket cannot shrink further in double precision, so
    the result does not depend on a stopping tolerance.
    """
    if fa == 0.0:
        return a, fa
    if fb == 0.0:
        return b, fb
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise ValueError("root is not bracketed")
    best = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if abs(fm) <= abs(best[1]):
            best = (m, fm)
        if fm == 0.0:
            return m, fm
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return best
