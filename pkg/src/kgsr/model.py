"""Physical configuration and the coefficients of the reduced radial equation.

The radial function ``s(r)`` of the (generalized) Klein-Gordon oscillator
in Som-Raychaudhuri space-time obeys

    s'' + s'/r + [a4 - a1/r^2 - a2^2 r^2 - 2 a3/r] s = 0

for both couplings.  ``radial_coefficients`` evaluates the four
coefficients term by term, exactly as they come out of the separation
ansatz; ``grouped_coefficients`` evaluates the same numbers through the
effective angular momentum ``l_ef = l - e*PhiB/(2*pi)``.  The two routes
are kept apart on purpose so that the regrouping can be checked.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

__all__ = [
    "Mode",
    "PhysicalConfig",
    "QuantumNumbers",
    "RadialCoefficients",
    "DegenerateConfigurationError",
    "CONFIG_KEYS",
    "effective_angular_momentum",
    "radial_coefficients",
    "grouped_coefficients",
]


class DegenerateConfigurationError(ValueError):
    """Raised when the oscillator coefficient a2^2 vanishes (no confinement)."""


class Mode(str, enum.Enum):
    LINEAR = "linear"
    CORNELL = "cornell"


@dataclass(frozen=True)
class PhysicalConfig:
    """Continuous model parameters, natural units (c = hbar = 1).

    ``lam`` is the Coulomb strength (``lambda`` in configuration files).
    ``xi1``/``xi2`` are only read in Cornell mode, where the oscillator
    profile is ``f(r) = xi1*r + xi2/r``.
    """

    M: float = 1.0
    e: float = 1.0
    omega: float = 0.0
    Omega: float = 0.0
    B0: float = 0.0
    alpha: float = 1.0
    PhiB: float = 0.0
    lam: float = 0.0
    xi1: float = 0.0
    xi2: float = 0.0
    mode: Mode = Mode.LINEAR

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        for f in fields(self):
            if f.name == "mode":
                continue
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, value)
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if self.omega < 0.0:
            raise ValueError(f"omega must be nonnegative, got {self.omega!r}")

    def with_values(self, **changes) -> "PhysicalConfig":
        return replace(self, **changes)


# Configuration-file key -> dataclass attribute.
CONFIG_KEYS = {
    "M": "M",
    "e": "e",
    "omega": "omega",
    "Omega": "Omega",
    "B0": "B0",
    "alpha": "alpha",
    "PhiB": "PhiB",
    "lambda": "lam",
    "xi1": "xi1",
    "xi2": "xi2",
    "mode": "mode",
}


@dataclass(frozen=True)
class QuantumNumbers:
    n: int = 0
    l: int = 0
    k: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")
        if int(self.l) != self.l:
            raise ValueError(f"l must be an integer, got {self.l!r}")
        if not math.isfinite(self.k):
            raise ValueError(f"k must be finite, got {self.k!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "k", float(self.k))


@dataclass(frozen=True)
class RadialCoefficients:
    """``(a1, a2^2, a3, a4)`` at trial energy ``energy``.

    In Cornell mode these are the b-coefficients; the radial equation has
    the same shape so downstream code does not distinguish them.
    """

    a1: float
    a2sq: float
    a3: float
    a4: float
    energy: float = math.nan

    @property
    def sqrt_a1(self) -> float:
        return math.sqrt(self.a1)

    @property
    def a2(self) -> float:
        return math.sqrt(self.a2sq)

    @property
    def degenerate(self) -> bool:
        return self.a2sq <= 0.0

    def require_confining(self) -> None:
        if self.degenerate:
            raise DegenerateConfigurationError(
                f"a2^2 = {self.a2sq!r} at E = {self.energy!r}: no oscillator confinement"
            )


def effective_angular_momentum(l: float, e: float, PhiB: float) -> float:
    """Return ``l - e*PhiB/(2*pi)``."""
    return l - e * PhiB / (2.0 * math.pi)


def radial_coefficients(cfg: PhysicalConfig, qn: QuantumNumbers, E: float) -> RadialCoefficients:
    """Term-by-term radial coefficients at trial energy ``E``.

    Linear mode (``f(r) = r``)::

        a1   = l^2/al^2 + e^2 Phi^2/(4 al^2 pi^2) + lam^2 - e l Phi/(al^2 pi)
        a2^2 = E^2 Om^2 + e Om B0 E + e^2 B0^2/4 + M^2 w^2
        a3   = M lam
        a4   = E^2 + Om e Phi E/(al pi) - 2 Om l E/al - e B0 l/al
               + e^2 Phi B0/(2 pi al) - 2 M w - k^2 - M^2

    Cornell mode adds ``M^2 w^2 xi2^2`` to a1, scales the oscillator term of
    a2^2 by ``xi1^2``, and replaces ``-2 M w`` in a4 by
    ``-2 M w xi1 - 2 M^2 w^2 xi1 xi2``.  The summation order is shared
    between modes so that ``xi1 = 1, xi2 = 0`` reproduces the linear
    coefficients bit for bit.
    """
    if not 0.0 < cfg.alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {cfg.alpha!r}")
    E = float(E)
    if not math.isfinite(E):
        raise ValueError(f"trial energy must be finite, got {E!r}")
    M, e, w, Om, B0, al, Phi, lam = (
        cfg.M, cfg.e, cfg.omega, cfg.Omega, cfg.B0, cfg.alpha, cfg.PhiB, cfg.lam,
    )
    l, k = qn.l, qn.k
    pi = math.pi

    a1 = l**2 / al**2 + e**2 * Phi**2 / (4 * al**2 * pi**2) + lam**2 - e * l * Phi / (al**2 * pi)
    head = E**2 * Om**2 + e * Om * B0 * E + e**2 * B0**2 / 4
    a4 = (
        E**2
        + Om * e * Phi * E / (al * pi)
        - 2 * Om * l * E / al
        - e * B0 * l / al
        + e**2 * Phi * B0 / (2 * pi * al)
    )
    if cfg.mode is Mode.LINEAR:
        a2sq = head + M**2 * w**2
        a4 = a4 - 2 * M * w - k**2 - M**2
    else:
        xi1, xi2 = cfg.xi1, cfg.xi2
        a1 = a1 + M**2 * w**2 * xi2**2
        a2sq = head + M**2 * w**2 * xi1**2
        a4 = a4 - 2 * M * w * xi1 - 2 * M**2 * w**2 * xi1 * xi2 - k**2 - M**2
    return RadialCoefficients(a1=a1, a2sq=a2sq, a3=M * lam, a4=a4, energy=E)


def grouped_coefficients(cfg: PhysicalConfig, qn: QuantumNumbers, E: float) -> RadialCoefficients:
    """Same coefficients written through ``l_ef`` and completed squares.

    ``a1 = l_ef^2/al^2 + lam^2 [+ (M w xi2)^2]``,
    ``a2^2 = (E Om + e B0/2)^2 + (M w [xi1])^2``,
    ``a4 = E^2 - l_ef (2 Om E + e B0)/al - 2 M w [xi1] [- 2 (M w)^2 xi1 xi2] - k^2 - M^2``.
    """
    lef = effective_angular_momentum(qn.l, cfg.e, cfg.PhiB)
    M, w, al = cfg.M, cfg.omega, cfg.alpha
    E = float(E)
    a1 = lef**2 / al**2 + cfg.lam**2
    shift = (E * cfg.Omega + cfg.e * cfg.B0 / 2) ** 2
    a4 = E**2 - lef * (2 * cfg.Omega * E + cfg.e * cfg.B0) / al - qn.k**2 - M**2
    if cfg.mode is Mode.LINEAR:
        a2sq = shift + (M * w) ** 2
        a4 -= 2 * M * w
    else:
        a1 += (M * w * cfg.xi2) ** 2
        a2sq = shift + (M * w * cfg.xi1) ** 2
        a4 -= 2 * M * w * cfg.xi1 + 2 * (M * w) ** 2 * cfg.xi1 * cfg.xi2
    return RadialCoefficients(a1=a1, a2sq=a2sq, a3=M * cfg.lam, a4=a4, energy=E)
