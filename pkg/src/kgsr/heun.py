"""Frobenius series of the biconfluent Heun equation.

With ``s(r) = exp(-a2 r^2/2) r^sqrt(a1) H(rho)`` and ``rho = sqrt(a2) r``
the radial equation becomes

    H'' + ((1 + 2 sqrt(a1))/rho - 2 rho) H'
        + (a4/a2 - 2 - 2 sqrt(a1) - (2 a3/sqrt(a2))/rho) H = 0.

For the regular indicial root ``H = sum C_j rho^j`` with ``C_0 = 1`` and

    C_1     = (2 a3/sqrt(a2)) / (2 sqrt(a1) + 1)
    C_{j+2} = [ (2 a3/sqrt(a2)) C_{j+1} + (2 + 2j + 2 sqrt(a1) - a4/a2) C_j ]
              / ((j + 2)(j + 2 + 2 sqrt(a1)))

The series is a polynomial of degree n exactly when ``C_{n+1} = 0`` and
``a4/a2 - 2 - 2 sqrt(a1) = 2n``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from .model import RadialCoefficients

__all__ = [
    "SeriesSolution",
    "SeriesNonTerminationWarning",
    "DEFAULT_TERMS",
    "series_coefficients",
    "termination_residuals",
    "heun_residual",
    "radial_wavefunction",
    "wavefunction_norm",
]

DEFAULT_TERMS = 200

# Relative size below which the polynomial conditions count as satisfied.
TRUNCATION_TOL = 1e-8


class SeriesNonTerminationWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SeriesSolution:
    coeffs: np.ndarray
    a1: float
    a2: float
    a3: float
    a4: float
    truncation_index: Optional[int] = None
    tail_norm: Optional[float] = None

    @property
    def terminated(self) -> bool:
        return self.truncation_index is not None

    def polynomial(self) -> np.ndarray:
        """Coefficients actually used for evaluation (truncated if terminated)."""
        if self.truncation_index is None:
            return self.coeffs
        return self.coeffs[: self.truncation_index + 1]

    def __call__(self, rho):
        return P.polyval(rho, self.polynomial())


def _forward(a1: float, a2: float, a3: float, a4: float, N: int) -> np.ndarray:
    nu = math.sqrt(a1)
    coulomb = 2.0 * a3 / math.sqrt(a2)
    spectral = a4 / a2
    c = np.zeros(N + 1)
    c[0] = 1.0
    c[1] = coulomb / (2.0 * nu + 1.0)
    for j in range(N - 1):
        denom = (j + 2) * (j + 2 + 2.0 * nu)
        c[j + 2] = (coulomb * c[j + 1] + (2.0 + 2.0 * j + 2.0 * nu - spectral) * c[j]) / denom
    return c


def series_coefficients(rc: RadialCoefficients, N: int = DEFAULT_TERMS, j: int = 0) -> SeriesSolution:
    """Coefficients ``C_0..C_N`` by forward recurrence, with truncation detection."""
    if j != 0:
        raise ValueError("only the regular indicial root j = 0 is supported")
    if N < 2:
        raise ValueError(f"need N >= 2 series terms, got {N}")
    rc.require_confining()
    a2 = rc.a2
    c = _forward(rc.a1, a2, rc.a3, rc.a4, N)

    trunc = None
    tail = None
    degree = (rc.a4 / a2 - 2.0 - 2.0 * rc.sqrt_a1) / 2.0
    m = round(degree)
    if 0 <= m < N and abs(degree - m) <= TRUNCATION_TOL * max(1.0, m):
        scale = np.max(np.abs(c[: m + 1]))
        if abs(c[m + 1]) <= TRUNCATION_TOL * scale:
            trunc = m
            tail = float(np.max(np.abs(c[m + 1:])))
    return SeriesSolution(
        coeffs=c, a1=rc.a1, a2=a2, a3=rc.a3, a4=rc.a4,
        truncation_index=trunc, tail_norm=tail,
    )


def termination_residuals(rc: RadialCoefficients, n: int) -> tuple[float, float]:
    """``(C_{n+1}, a4/a2 - 2 - 2 sqrt(a1) - 2n)``; both vanish for a degree-n polynomial."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    rc.require_confining()
    c = _forward(rc.a1, rc.a2, rc.a3, rc.a4, max(n + 1, 2))
    return float(c[n + 1]), rc.a4 / rc.a2 - 2.0 - 2.0 * rc.sqrt_a1 - 2.0 * n


def heun_residual(sol: SeriesSolution, rho) -> np.ndarray:
    """Left-hand side of the Heun equation evaluated on the (truncated) series."""
    rho = np.asarray(rho, dtype=float)
    c = sol.polynomial()
    h = P.polyval(rho, c)
    dh = P.polyval(rho, P.polyder(c))
    d2h = P.polyval(rho, P.polyder(c, 2))
    nu = math.sqrt(sol.a1)
    return (
        d2h
        + ((1.0 + 2.0 * nu) / rho - 2.0 * rho) * dh
        + (sol.a4 / sol.a2 - 2.0 - 2.0 * nu - 2.0 * sol.a3 / math.sqrt(sol.a2) / rho) * h
    )


def _evaluate(sol: SeriesSolution, r: np.ndarray) -> np.ndarray:
    rho = math.sqrt(sol.a2) * r
    with np.errstate(over="ignore", invalid="ignore"):
        h = sol(rho)
        return np.exp(-0.5 * sol.a2 * r**2) * r ** math.sqrt(sol.a1) * h


def radial_wavefunction(rc: RadialCoefficients, N: int = DEFAULT_TERMS, r=0.0, *,
                        tol: float = 1e-12, norm: Optional[float] = None):
    """``s(r) = exp(-a2 r^2/2) r^sqrt(a1) H(sqrt(a2) r)`` with ``C_0 = 1``.

    Terminated series are evaluated as the exact polynomial.  Otherwise the
    first ``N + 1`` terms are summed and a ``SeriesNonTerminationWarning`` is
    issued where the last term is not below ``tol`` relative to the sum.
    Pass ``norm`` (from ``wavefunction_norm``) to divide it out.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be nonnegative")
    sol = series_coefficients(rc, N)
    if not sol.terminated:
        rho = math.sqrt(sol.a2) * r_arr
        with np.errstate(over="ignore", invalid="ignore"):
            last = np.abs(sol.coeffs[-1] * rho**N)
            total = np.abs(sol(rho))
        bad = ~(last <= tol * np.maximum(total, 1.0))
        if np.any(bad):
            warnings.warn(
                f"biconfluent Heun series not terminated and not converged after {N} terms "
                f"for rho up to {float(np.max(rho[bad])):.3g}",
                SeriesNonTerminationWarning,
                stacklevel=2,
            )
    s = _evaluate(sol, r_arr)
    if norm is not None:
        s = s / norm
    return float(s) if s.ndim == 0 else s


def wavefunction_norm(rc: RadialCoefficients, r_max: float, N: int = DEFAULT_TERMS) -> float:
    """``sqrt(int_0^r_max s(r)^2 r dr)``; the constant factor alpha of the measure is dropped."""
    sol = series_coefficients(rc, N)
    value, _ = integrate.quad(lambda x: _evaluate(sol, np.asarray(x)) ** 2 * x, 0.0, r_max, limit=200)
    return math.sqrt(value)
