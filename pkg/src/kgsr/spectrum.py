"""Energy levels from the polynomial-termination condition.

A degree-n polynomial Heun solution requires ``a4 = (2n + 2 + 2 sqrt(a1)) a2``.
Written out for the linear coupling this is

    (2n + 2 + 2 sqrt(l_ef^2/al^2 + lam^2)) sqrt(E^2 Om^2 + e Om B0 E + e^2 B0^2/4 + M^2 w^2)
        = E^2 - l_ef (2 Om E/al + e B0/al) - 2 M w - k^2 - M^2

and for the Cornell profile ``f(r) = xi1 r + xi2/r``

    (2n + 2 + 2 sqrt(M^2 w^2 xi2^2 + lam^2 + l_ef^2/al^2))
        * sqrt(E^2 Om^2 + e Om B0 E + M^2 w^2 xi1^2 + e^2 B0^2/4)
        = E^2 - 2 M w xi1 - 2 M^2 w^2 xi1 xi2 - l_ef (2 Om E/al + e B0/al) - k^2 - M^2.

``quantization_residual`` returns right minus left; real roots are found
by a uniform scan followed by bisection.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import heun
from ._numerics import bisect
from .model import (
    DegenerateConfigurationError,
    Mode,
    PhysicalConfig,
    QuantumNumbers,
    effective_angular_momentum,
    radial_coefficients,
)

__all__ = [
    "EnergyLevel",
    "RootSearchSpec",
    "NoBoundStateError",
    "quantization_residual",
    "default_window",
    "solve_energy",
    "select_branch",
    "ab_flux_shift_check",
]

DEFAULT_TOL = 1e-10
DEFAULT_GRID_POINTS = 20_000


class NoBoundStateError(RuntimeError):
    """No root of the energy condition inside the search window."""


@dataclass(frozen=True)
class EnergyLevel:
    E: float
    n: int
    l: int
    k: float
    residual: float
    branch: str
    source: str = "analytic"
    # C_{n+1} of the Heun series at this energy; the energy condition does
    # not force it to vanish when lam != 0.
    series_residual: Optional[float] = None


@dataclass(frozen=True)
class RootSearchSpec:
    E_min: Optional[float] = None
    E_max: Optional[float] = None
    grid_points: int = DEFAULT_GRID_POINTS
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if (self.E_min is None) != (self.E_max is None):
            raise ValueError("give both E_min and E_max, or neither")
        if self.E_min is not None and not self.E_min < self.E_max:
            raise ValueError(f"need E_min < E_max, got [{self.E_min}, {self.E_max}]")
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")

    def window(self, cfg: PhysicalConfig, qn: QuantumNumbers) -> tuple[float, float]:
        if self.E_min is None:
            cap = default_window(cfg, qn)
            return -cap, cap
        return self.E_min, self.E_max


def _condition_terms(cfg: PhysicalConfig, qn: QuantumNumbers, E):
    """Return ``(rhs, factor, a2sq)`` of the energy condition at ``E``."""
    lef = effective_angular_momentum(qn.l, cfg.e, cfg.PhiB)
    M, e, w, Om, B0, al, lam = cfg.M, cfg.e, cfg.omega, cfg.Omega, cfg.B0, cfg.alpha, cfg.lam
    k = qn.k
    if cfg.mode is Mode.LINEAR:
        root_a1 = math.sqrt(lef**2 / al**2 + lam**2)
        a2sq = E**2 * Om**2 + e * Om * B0 * E + e**2 * B0**2 / 4 + M**2 * w**2
        rhs = E**2 - lef * (2 * Om * E / al + e * B0 / al) - 2 * M * w - k**2 - M**2
    else:
        xi1, xi2 = cfg.xi1, cfg.xi2
        root_a1 = math.sqrt(M**2 * w**2 * xi2**2 + lam**2 + lef**2 / al**2)
        a2sq = E**2 * Om**2 + e * Om * B0 * E + M**2 * w**2 * xi1**2 + e**2 * B0**2 / 4
        rhs = (
            E**2 - 2 * M * w * xi1 - 2 * M**2 * w**2 * xi1 * xi2
            - lef * (2 * Om * E / al + e * B0 / al) - k**2 - M**2
        )
    return rhs, 2 * qn.n + 2 + 2 * root_a1, a2sq


def quantization_residual(cfg: PhysicalConfig, qn: QuantumNumbers, E: float) -> float:
    """Right-hand minus left-hand side of the energy condition at ``E``."""
    rhs, factor, a2sq = _condition_terms(cfg, qn, float(E))
    if a2sq <= 0.0:
        raise DegenerateConfigurationError(
            f"a2^2 = {a2sq!r} at E = {E!r}: no oscillator confinement at this trial energy"
        )
    return rhs - factor * math.sqrt(a2sq)


def _residual_array(cfg: PhysicalConfig, qn: QuantumNumbers, E: np.ndarray) -> np.ndarray:
    rhs, factor, a2sq = _condition_terms(cfg, qn, E)
    with np.errstate(invalid="ignore"):
        out = rhs - factor * np.sqrt(a2sq)
    out[a2sq <= 0.0] = np.nan
    return out


def default_window(cfg: PhysicalConfig, qn: QuantumNumbers) -> float:
    """Half-width ``E_cap`` of the default symmetric search window."""
    xi1 = cfg.xi1 if cfg.mode is Mode.CORNELL else 1.0
    root_a1 = math.sqrt(radial_coefficients(cfg, qn, 0.0).a1)
    scale = abs(cfg.Omega) + cfg.M * cfg.omega * (1 + abs(xi1)) + abs(cfg.e * cfg.B0)
    return 10.0 * (cfg.M + abs(qn.k) + (2 * qn.n + 4) * (1 + root_a1) * scale + 1.0)


def solve_energy(cfg: PhysicalConfig, qn: QuantumNumbers,
                 spec: Optional[RootSearchSpec] = None) -> list[EnergyLevel]:
    """All sign-change-bracketed real roots in the window, ascending."""
    spec = spec or RootSearchSpec()
    lo, hi = spec.window(cfg, qn)
    grid = np.linspace(lo, hi, spec.grid_points)
    values = _residual_array(cfg, qn, grid)

    def f(E):
        return quantization_residual(cfg, qn, E)

    roots = []
    for i in range(len(grid)):
        fi = values[i]
        if fi == 0.0:
            roots.append((grid[i], 0.0))
            continue
        if i + 1 < len(grid):
            fj = values[i + 1]
            if np.isfinite(fi) and np.isfinite(fj) and fi * fj < 0.0:
                roots.append(bisect(f, grid[i], grid[i + 1], fi, fj))

    levels = []
    for E, res in roots:
        E = float(E)
        if abs(res) > spec.tol:
            warnings.warn(f"root E = {E!r} has residual {abs(res)!r} above tol = {spec.tol!r}",
                          RuntimeWarning, stacklevel=2)
        try:
            c_next, _ = heun.termination_residuals(radial_coefficients(cfg, qn, E), qn.n)
        except DegenerateConfigurationError:
            c_next = None
        levels.append(EnergyLevel(
            E=E, n=qn.n, l=qn.l, k=qn.k, residual=abs(float(res)),
            branch="positive" if E > 0 else "negative", series_residual=c_next,
        ))
    return levels


def select_branch(levels: list[EnergyLevel], branch: str = "positive") -> Optional[EnergyLevel]:
    """Outermost root of a branch: largest positive or most negative energy."""
    if branch == "positive":
        picks = [lv for lv in levels if lv.E > 0]
        return max(picks, key=lambda lv: lv.E) if picks else None
    if branch == "negative":
        picks = [lv for lv in levels if lv.E < 0]
        return min(picks, key=lambda lv: lv.E) if picks else None
    raise ValueError(f"branch must be 'positive' or 'negative', got {branch!r}")


def ab_flux_shift_check(cfg: PhysicalConfig, qn: QuantumNumbers, tau: int,
                        spec: Optional[RootSearchSpec] = None, sign: int = 1,
                        branch: str = "positive") -> tuple[EnergyLevel, EnergyLevel, float]:
    """Compare ``E(PhiB + sign*2 pi tau/e; l)`` against ``E(PhiB; l - sign*tau)``.

    Both configurations carry the same effective angular momentum, so the
    two levels should coincide.
    """
    if cfg.e == 0:
        raise ValueError("flux shift needs a nonzero charge")
    if int(tau) != tau or tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    shifted_cfg = replace(cfg, PhiB=cfg.PhiB + sign * 2 * math.pi * tau / cfg.e)
    ref_qn = replace(qn, l=qn.l - sign * int(tau))
    shifted = select_branch(solve_energy(shifted_cfg, qn, spec), branch)
    reference = select_branch(solve_energy(cfg, ref_qn, spec), branch)
    if shifted is None or reference is None:
        raise NoBoundStateError(f"no {branch} root for the flux-shift pair")
    return shifted, reference, abs(shifted.E - reference.E)
