import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgsr.model import (
    DegenerateConfigurationError,
    Mode,
    PhysicalConfig,
    QuantumNumbers,
    RadialCoefficients,
    effective_angular_momentum,
    grouped_coefficients,
    radial_coefficients,
)

finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def configs(draw, mode=None):
    return PhysicalConfig(
        M=draw(st.floats(0.1, 5, **finite)),
        e=draw(st.floats(-3, 3, **finite)),
        omega=draw(st.floats(0, 4, **finite)),
        Omega=draw(st.floats(-3, 3, **finite)),
        B0=draw(st.floats(-3, 3, **finite)),
        alpha=draw(st.floats(0.05, 1, **finite)),
        PhiB=draw(st.floats(-20, 20, **finite)),
        lam=draw(st.floats(-3, 3, **finite)),
        xi1=draw(st.floats(-3, 3, **finite)),
        xi2=draw(st.floats(-3, 3, **finite)),
        mode=mode or draw(st.sampled_from(list(Mode))),
    )


quantum = st.builds(
    QuantumNumbers,
    n=st.integers(0, 8),
    l=st.integers(-6, 6),
    k=st.floats(-3, 3, **finite),
)
energies = st.floats(-30, 30, **finite)


def test_effective_angular_momentum_examples():
    assert effective_angular_momentum(1, 1, 0.0) == 1
    assert effective_angular_momentum(1, 1, 2 * math.pi) == pytest.approx(0.0, abs=1e-15)
    assert effective_angular_momentum(0, 2, math.pi) == pytest.approx(-1.0, abs=1e-15)


def test_a1_vanishes_without_angular_and_coulomb_terms():
    for alpha in (0.1, 0.5, 1.0):
        rc = radial_coefficients(PhysicalConfig(alpha=alpha, omega=1.0), QuantumNumbers(0, 0, 0.0), 1.3)
        assert rc.a1 == 0.0


def test_a1_on_figure_parameter_set(fig1a_config):
    rc = radial_coefficients(fig1a_config, QuantumNumbers(1, 1, 1.0), 2.0)
    # ((1 - 1/(2 pi))/0.5)^2 + 1
    assert rc.a1 == pytest.approx(3.828081638907175, rel=1e-14)


def test_a2sq_completed_square_example():
    cfg = PhysicalConfig(M=1, e=1, Omega=1, B0=1, omega=1)
    rc = radial_coefficients(cfg, QuantumNumbers(), 2.0)
    assert rc.a2sq == pytest.approx(7.25, rel=1e-15)
    assert rc.a2 == pytest.approx(math.sqrt(7.25))


def test_coulomb_coefficient():
    cfg = PhysicalConfig(M=1.7, lam=-0.4, omega=1)
    for mode in Mode:
        assert radial_coefficients(cfg.with_values(mode=mode), QuantumNumbers(), 0.3).a3 == 1.7 * -0.4


@settings(max_examples=200, deadline=None)
@given(configs(mode=Mode.LINEAR), quantum, energies)
def test_cornell_unit_profile_reproduces_linear_exactly(cfg, qn, E):
    cornell = cfg.with_values(mode=Mode.CORNELL, xi1=1.0, xi2=0.0)
    assert radial_coefficients(cornell, qn, E) == radial_coefficients(cfg, qn, E)


def _close(a, b, rel=1e-13, scale=1.0):
    return abs(a - b) <= rel * max(abs(a), abs(b), scale)


@settings(max_examples=300, deadline=None)
@given(configs(), quantum, energies)
def test_grouped_form_matches_term_by_term(cfg, qn, E):
    direct = radial_coefficients(cfg, qn, E)
    grouped = grouped_coefficients(cfg, qn, E)
    assert _close(direct.a1, grouped.a1)
    assert _close(direct.a2sq, grouped.a2sq)
    assert direct.a3 == grouped.a3
    # a4 is a difference of O(E^2) terms; compare at the size of its largest term
    assert _close(direct.a4, grouped.a4, scale=1.0 + E**2 + qn.l**2 + cfg.PhiB**2)


@settings(max_examples=200, deadline=None)
@given(configs(), quantum, energies, st.integers(-4, 4).filter(bool))
def test_coefficients_depend_on_l_and_flux_only_through_l_ef(cfg, qn, E, tau):
    if abs(cfg.e) < 0.1:
        cfg = cfg.with_values(e=math.copysign(0.1, cfg.e))
    shifted = cfg.with_values(PhiB=cfg.PhiB - 2 * math.pi * tau / cfg.e)
    a = radial_coefficients(cfg, qn, E)
    b = radial_coefficients(shifted, QuantumNumbers(qn.n, qn.l - tau, qn.k), E)
    scale = 1.0 + (abs(qn.l) + abs(tau) + abs(cfg.e * cfg.PhiB)) ** 2 / cfg.alpha**2
    assert _close(a.a1, b.a1, scale=scale)
    assert a.a2sq == b.a2sq
    assert a.a3 == b.a3
    assert _close(a.a4, b.a4, scale=scale * (1 + abs(E) * abs(cfg.Omega) + abs(cfg.e * cfg.B0)))


@settings(max_examples=200, deadline=None)
@given(configs(), quantum, energies)
def test_centrifugal_and_oscillator_coefficients_nonnegative(cfg, qn, E):
    rc = radial_coefficients(cfg, qn, E)
    assert rc.a1 >= 0.0
    assert rc.a2sq >= 0.0


@pytest.mark.parametrize("alpha", [0.0, -0.2, 1.5])
def test_alpha_outside_unit_interval_rejected(alpha):
    with pytest.raises(ValueError, match="alpha"):
        PhysicalConfig(alpha=alpha)


def test_quantum_numbers_validated():
    with pytest.raises(ValueError):
        QuantumNumbers(n=-1)
    with pytest.raises(ValueError):
        QuantumNumbers(l=0.5)
    with pytest.raises(ValueError):
        QuantumNumbers(k=math.inf)


def test_degenerate_oscillator_flagged():
    # omega = 0 and E*Omega = -e*B0/2 removes the confinement
    cfg = PhysicalConfig(omega=0.0, Omega=1.0, B0=1.0)
    rc = radial_coefficients(cfg, QuantumNumbers(), -0.5)
    assert rc.degenerate
    with pytest.raises(DegenerateConfigurationError):
        rc.require_confining()
    assert not RadialCoefficients(0.0, 1.0, 0.0, 2.0).degenerate
