"""Finite-difference eigenvalue check of the radial equation.

The radial equation is treated as a linear eigenproblem in ``a4``,

    -(1/r)(r s')' + [a1/r^2 + a2^2 r^2 + 2 a3/r] s = a4 s,

and discretized without any use of the Heun series.  Near the origin
``s ~ r^nu`` with ``nu = sqrt(a1)``; writing ``s = r^nu w`` turns the
problem into the weighted Sturm-Liouville form

    -(r^q w')' + r^q (a2^2 r^2 + 2 a3/r) w = mu r^q w,    q = 2 nu + 1,

whose regular solution has zero flux ``r^q w'`` at ``r -> 0`` for every
``nu >= 0``.  A cell-centred finite-volume stencil (exact cell integrals
of the weights, zero flux at the inner face, Dirichlet at ``r_max``) then
gives a symmetric tridiagonal matrix after scaling by the square root of
the cell weights.  The stencil is second order.

``oracle_energy`` closes the loop over the energy dependence of the
coefficients: it finds ``E`` with ``mu_m(E) = a4(E)``, where ``m`` is the
number of radial nodes of the eigenvector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from ._numerics import count_nodes
from .model import PhysicalConfig, QuantumNumbers, RadialCoefficients, radial_coefficients
from .spectrum import EnergyLevel, RootSearchSpec

__all__ = [
    "GridSpec",
    "OracleError",
    "RadialStates",
    "radial_operator_eigenvalues",
    "radial_operator_states",
    "richardson_eigenvalues",
    "nodes_for_degree",
    "oracle_energy",
]

DEFAULT_POINTS = 4000
R_MIN_RATIO = 1e-6
ALT_R_MIN_RATIO = 1e-5
CUTOFF_RTOL = 1e-5
TAIL_EXPONENT = 40.0


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Radial grid; ``r_max``/``r_min`` left as None are sized from the coefficients."""

    r_min: Optional[float] = None
    r_max: Optional[float] = None
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.points < 100:
            raise ValueError(f"grid too coarse: {self.points} points (need >= 100)")
        if self.r_max is not None and not self.r_max > 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if self.r_min is not None:
            if not self.r_min > 0:
                raise ValueError(f"r_min must be positive, got {self.r_min}")
            if self.r_max is not None and not self.r_min < self.r_max:
                raise ValueError(f"need r_min < r_max, got {self.r_min} >= {self.r_max}")

    def resolve(self, rc: RadialCoefficients, nodes: int = 0,
                r_min_ratio: float = R_MIN_RATIO) -> tuple[float, float]:
        r_max = self.r_max
        if r_max is None:
            rc.require_confining()
            # Past the classical turning point by a Gaussian factor exp(-40).
            turning = 4 * nodes + 2 + 2 * rc.sqrt_a1 + 2 * abs(rc.a3) / math.sqrt(rc.a2)
            r_max = math.sqrt(2.0 * (TAIL_EXPONENT + turning) / rc.a2)
        r_min = self.r_min if self.r_min is not None else r_min_ratio * r_max
        if not 0 < r_min < r_max:
            raise ValueError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
        return r_min, r_max


@dataclass(frozen=True)
class RadialStates:
    r: np.ndarray            # cell centres
    eigenvalues: np.ndarray
    vectors: np.ndarray      # columns are w(r) = s(r)/r^nu, unnormalized
    nodes: np.ndarray


def _cell_moment(faces: np.ndarray, p: float) -> np.ndarray:
    """``int r^p dr`` over each cell, p > -1."""
    return (faces[1:] ** (p + 1) - faces[:-1] ** (p + 1)) / (p + 1)


def _tridiagonal(rc: RadialCoefficients, r_min: float, r_max: float, points: int):
    rc.require_confining()
    nu = rc.sqrt_a1
    q = 2.0 * nu + 1.0
    # Rescale lengths by r_max so weights r^q stay within double range.
    faces = np.linspace(r_min, r_max, points + 1) / r_max
    h = faces[1] - faces[0]
    weight = _cell_moment(faces, q)
    potential = (rc.a2sq * r_max**4) * _cell_moment(faces, q + 2) \
        + (2.0 * rc.a3 * r_max) * _cell_moment(faces, q - 1)
    flux = faces**q
    flux[0] = 0.0
    diag = (flux[:-1] + flux[1:]) / h + potential
    diag[-1] += flux[-1] / h  # Dirichlet at r_max through an odd ghost cell
    root_w = np.sqrt(weight)
    d = diag / weight / r_max**2
    e = -flux[1:-1] / h / (root_w[:-1] * root_w[1:]) / r_max**2
    centres = 0.5 * (faces[:-1] + faces[1:]) * r_max
    return d, e, centres, root_w


def radial_operator_eigenvalues(rc: RadialCoefficients, grid: Optional[GridSpec] = None,
                                count: int = 1) -> np.ndarray:
    """The ``count`` smallest eigenvalues ``mu_0 < mu_1 < ...`` of the discrete operator."""
    grid = grid or GridSpec()
    r_min, r_max = grid.resolve(rc, nodes=count - 1)
    d, e, _, _ = _tridiagonal(rc, r_min, r_max, grid.points)
    return eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, count - 1))


def radial_operator_states(rc: RadialCoefficients, grid: Optional[GridSpec] = None,
                           count: int = 1, r_min_ratio: float = R_MIN_RATIO) -> RadialStates:
    """Lowest ``count`` eigenpairs together with the node count of each eigenvector."""
    grid = grid or GridSpec()
    r_min, r_max = grid.resolve(rc, nodes=count - 1, r_min_ratio=r_min_ratio)
    d, e, centres, root_w = _tridiagonal(rc, r_min, r_max, grid.points)
    vals, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, count - 1))
    w = vecs / root_w[:, None]
    nodes = np.array([count_nodes(w[:, i]) for i in range(w.shape[1])])
    return RadialStates(r=centres, eigenvalues=vals, vectors=w, nodes=nodes)


def richardson_eigenvalues(rc: RadialCoefficients, grid: Optional[GridSpec] = None,
                           count: int = 1) -> np.ndarray:
    """Second-order Richardson extrapolation from ``points`` and ``points/2``."""
    grid = grid or GridSpec()
    r_min, r_max = grid.resolve(rc, nodes=count - 1)
    fine = radial_operator_eigenvalues(rc, GridSpec(r_min, r_max, grid.points), count)
    coarse = radial_operator_eigenvalues(rc, GridSpec(r_min, r_max, grid.points // 2), count)
    return (4.0 * fine - coarse) / 3.0


def nodes_for_degree(n: int) -> int:
    """Radial nodes of the bound state matching a degree-n Heun polynomial.

    For ``a3 = 0`` the polynomial is even in rho, ``L_{n/2}(rho^2)`` up to
    normalization, so it has ``n // 2`` positive zeros.  Odd ``n`` has no
    exactly solvable counterpart there; the state with ``n // 2`` nodes is
    then the one the comparison is made against.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return n // 2


def _eigenvalue_with_nodes(rc: RadialCoefficients, grid: GridSpec, nodes: int,
                           r_min_ratio: float) -> float:
    states = radial_operator_states(rc, grid, count=nodes + 3, r_min_ratio=r_min_ratio)
    match = np.flatnonzero(states.nodes == nodes)
    if match.size == 0:
        raise OracleError(f"no eigenvector with {nodes} nodes among the lowest {nodes + 3}")
    return float(states.eigenvalues[match[0]])


def _mismatch(cfg, qn, grid, nodes, r_min_ratio):
    def g(E):
        rc = radial_coefficients(cfg, qn, E)
        if rc.degenerate:
            return math.nan
        return _eigenvalue_with_nodes(rc, grid, nodes, r_min_ratio) - rc.a4
    return g


def _scan_roots(g, grid_E: np.ndarray) -> list[tuple[float, float]]:
    vals = np.array([g(E) for E in grid_E])
    brackets = []
    for i in range(len(grid_E) - 1):
        a, b = vals[i], vals[i + 1]
        if np.isfinite(a) and np.isfinite(b) and a * b <= 0.0 and not (a == 0.0 and b == 0.0):
            brackets.append((grid_E[i], grid_E[i + 1]))
    return brackets


def _refine(g, lo: float, hi: float, width: float, xtol: float) -> float:
    """Re-bracket a coarse-grid root for the fine-grid function and solve it."""
    ga, gb = g(lo), g(hi)
    step = width
    for _ in range(60):
        if np.isfinite(ga) and np.isfinite(gb) and ga * gb <= 0.0:
            return brentq(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)
        lo, hi = lo - step, hi + step
        step *= 2.0
        ga, gb = g(lo), g(hi)
    raise OracleError("lost the oracle bracket while refining")


def oracle_energy(cfg: PhysicalConfig, qn: QuantumNumbers, grid: Optional[GridSpec] = None,
                  spec: Optional[RootSearchSpec] = None, *, nodes: Optional[int] = None,
                  branch: str = "positive", scan_points: int = 400,
                  check_cutoff: bool = True) -> EnergyLevel:
    """Energy at which ``a4(E)`` is an eigenvalue of the discrete radial operator.

    ``nodes`` defaults to ``nodes_for_degree(qn.n)``.  A coarse grid
    (``points // 8``) locates sign changes of ``mu_m(E) - a4(E)`` over the
    search window; each bracket is then re-solved on the full grid.  The
    outermost root of ``branch`` is returned.  With ``check_cutoff`` the
    energy is recomputed with the inner cutoff raised from ``1e-6`` to
    ``1e-5`` of ``r_max`` and rejected unless both agree to 1e-5 relative.
    """
    grid = grid or GridSpec()
    spec = spec or RootSearchSpec()
    nodes = nodes_for_degree(qn.n) if nodes is None else nodes
    lo, hi = spec.window(cfg, qn)
    coarse_grid = GridSpec(grid.r_min, grid.r_max, max(100, grid.points // 8))
    scan = np.linspace(lo, hi, scan_points)
    brackets = _scan_roots(_mismatch(cfg, qn, coarse_grid, nodes, R_MIN_RATIO), scan)
    if branch == "positive":
        brackets = [b for b in brackets if b[1] > 0]
        pick = brackets[-1] if brackets else None
    elif branch == "negative":
        brackets = [b for b in brackets if b[0] < 0]
        pick = brackets[0] if brackets else None
    else:
        raise ValueError(f"branch must be 'positive' or 'negative', got {branch!r}")
    if pick is None:
        raise OracleError(f"no oracle state in window [{lo}, {hi}]")

    width = scan[1] - scan[0]
    xtol = 1e-13 * max(1.0, abs(pick[0]), abs(pick[1]))
    fine = _mismatch(cfg, qn, grid, nodes, R_MIN_RATIO)
    E = _refine(fine, pick[0], pick[1], width, xtol)
    if check_cutoff:
        alt = _mismatch(cfg, qn, grid, nodes, ALT_R_MIN_RATIO)
        E_alt = _refine(alt, E - 1e-6 * max(1.0, abs(E)), E + 1e-6 * max(1.0, abs(E)), width, xtol)
        if abs(E_alt - E) > CUTOFF_RTOL * abs(E):
            raise OracleError(f"inner-cutoff sensitivity too large: {E} vs {E_alt}")
    return EnergyLevel(
        E=float(E), n=qn.n, l=qn.l, k=qn.k, residual=abs(fine(E)),
        branch="positive" if E > 0 else "negative", source="oracle",
    )
