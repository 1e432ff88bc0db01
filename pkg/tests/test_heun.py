import math
import warnings

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from kgsr._numerics import count_nodes
from kgsr.heun import (
    SeriesNonTerminationWarning,
    heun_residual,
    radial_wavefunction,
    series_coefficients,
    termination_residuals,
    wavefunction_norm,
)
from kgsr.model import DegenerateConfigurationError, RadialCoefficients


def coeffs(a1, a2, a3, a4):
    return RadialCoefficients(a1=a1, a2sq=a2 * a2, a3=a3, a4=a4)


def exact_case(n, nu, a2):
    """a3 = 0 with the degree-n energy condition satisfied (n even for a bound state)."""
    return coeffs(nu * nu, a2, 0.0, a2 * (2 * n + 2 + 2 * nu))


def quasi_exact_degree_one(nu, a2=1.0):
    # C_2 = 0 needs (2 a3/sqrt(a2))^2 / (2 nu + 1) = 2
    a3 = math.sqrt(a2) * math.sqrt((2 * nu + 1) / 2)
    return coeffs(nu * nu, a2, a3, a2 * (4 + 2 * nu))


def test_ground_state_series_terminates_immediately():
    sol = series_coefficients(coeffs(1.0, 1.0, 0.0, 4.0), 6)
    assert sol.coeffs[0] == 1.0
    assert np.all(sol.coeffs[1:] == 0.0)
    assert sol.truncation_index == 0
    assert sol.tail_norm == 0.0


def test_first_coefficient():
    sol = series_coefficients(RadialCoefficients(a1=0.25, a2sq=16.0, a3=1.0, a4=3.0), 4)
    assert sol.coeffs[1] == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("a1,a2,a4", [(0.0, 1.0, 7.0), (2.3, 0.4, -1.0), (9.0, 3.0, 0.5)])
def test_no_coulomb_term_gives_even_series(a1, a2, a4):
    sol = series_coefficients(coeffs(a1, a2, 0.0, a4), 30)
    assert np.all(sol.coeffs[1::2] == 0.0)


def test_recurrence_satisfied_term_by_term():
    rc = coeffs(1.7, 0.8, -0.6, 5.3)
    c = series_coefficients(rc, 40).coeffs
    nu, a2 = math.sqrt(rc.a1), rc.a2
    for j in range(39):
        lhs = (j + 2) * (j + 2 + 2 * nu) * c[j + 2]
        rhs = 2 * rc.a3 / math.sqrt(a2) * c[j + 1] + (2 + 2 * j + 2 * nu - rc.a4 / a2) * c[j]
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_termination_residual_examples():
    assert termination_residuals(coeffs(1.0, 1.0, 0.0, 4.0), 0) == (0.0, 0.0)
    c_next, second = termination_residuals(coeffs(1.0, 1.0, 0.0, 5.0), 0)
    assert c_next == 0.0
    assert second == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", [0, 2, 4, 6])
def test_even_degree_without_coulomb_satisfies_both_conditions(n):
    c_next, second = termination_residuals(exact_case(n, 0.7, 1.3), n)
    assert c_next == 0.0
    assert abs(second) <= 1e-12


@pytest.mark.parametrize("n", [1, 3])
def test_odd_degree_without_coulomb_does_not_terminate(n):
    rc = exact_case(n, 0.7, 1.3)
    c_next, second = termination_residuals(rc, n)
    assert abs(second) <= 1e-12
    assert abs(c_next) > 1e-3
    assert not series_coefficients(rc).terminated


@pytest.mark.parametrize("n,nu,a2", [(0, 0.0, 1.0), (2, 0.3, 2.0), (4, 1.9, 0.7), (6, 0.05, 1.1)])
def test_polynomial_matches_generalized_laguerre(n, nu, a2):
    sol = series_coefficients(exact_case(n, nu, a2))
    assert sol.truncation_index == n
    assert sol.tail_norm <= 1e-12
    rho = np.linspace(0.0, 4.0, 41)
    m = n // 2
    expected = eval_genlaguerre(m, nu, rho**2) / eval_genlaguerre(m, nu, 0.0)
    np.testing.assert_allclose(sol(rho), expected, rtol=1e-10, atol=1e-10)


def test_quasi_exact_coulomb_case_terminates():
    rc = quasi_exact_degree_one(1.0)
    c_next, second = termination_residuals(rc, 1)
    assert abs(c_next) <= 1e-14 and abs(second) <= 1e-14
    sol = series_coefficients(rc)
    assert sol.truncation_index == 1


@pytest.mark.parametrize("rc", [
    exact_case(0, 0.0, 1.0), exact_case(2, 0.8, 1.5), exact_case(4, 2.2, 0.6),
    quasi_exact_degree_one(1.0), quasi_exact_degree_one(0.4, 2.0),
])
def test_series_solves_heun_equation(rc):
    sol = series_coefficients(rc)
    rho = np.random.default_rng(7).uniform(0.0, 3.0, 50)
    res = heun_residual(sol, rho)
    assert np.all(np.abs(res) <= 1e-8 * np.maximum(1.0, np.abs(sol(rho))))


def test_wavefunction_vanishes_at_origin_for_positive_a1():
    assert radial_wavefunction(coeffs(1.0, 1.0, 0.0, 4.0), 200, 0.0) == 0.0


def test_ground_state_gaussian():
    rc = coeffs(0.0, 1.0, 0.0, 2.0)
    r = np.linspace(0.0, 6.0, 61)
    np.testing.assert_allclose(radial_wavefunction(rc, 200, r), np.exp(-r**2 / 2), rtol=1e-15)
    assert radial_wavefunction(rc, 200, 0.0) == 1.0


@pytest.mark.parametrize("n,nu,a2", [(0, 1.0, 1.0), (2, 0.5, 1.0), (4, 1.2, 2.5), (8, 0.0, 0.8)])
def test_terminated_wavefunction_node_count(n, nu, a2):
    # a degree-n polynomial in rho that is even has n/2 positive zeros
    rc = exact_case(n, nu, a2)
    r = np.linspace(1e-6, math.sqrt(100 / a2), 20001)
    assert count_nodes(radial_wavefunction(rc, 200, r)) == n // 2


def test_quasi_exact_wavefunction_node_count():
    # H = 1 + C1 rho with C1 > 0: no positive zero although the degree is 1
    r = np.linspace(1e-6, 10.0, 5001)
    assert count_nodes(radial_wavefunction(quasi_exact_degree_one(1.0), 200, r)) == 0


@pytest.mark.parametrize("rc", [exact_case(2, 0.8, 1.5), exact_case(6, 0.0, 0.5)])
def test_terminated_wavefunction_decays(rc):
    r_star = math.sqrt(80.0 / rc.a2)
    r = np.linspace(0.0, 3 * r_star, 6001)
    s = np.abs(radial_wavefunction(rc, 200, r))
    assert np.all(s[r >= r_star] <= 1e-10 * s.max())


def test_non_terminating_series_warns_far_out():
    rc = coeffs(0.5, 1.0, 0.3, 3.7)
    with pytest.warns(SeriesNonTerminationWarning):
        radial_wavefunction(rc, 20, 8.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        radial_wavefunction(rc, 200, 1.5)


def test_normalization_of_gaussian():
    # int_0^inf exp(-r^2) r dr = 1/2
    rc = coeffs(0.0, 1.0, 0.0, 2.0)
    norm = wavefunction_norm(rc, 12.0)
    assert norm == pytest.approx(math.sqrt(0.5), rel=1e-10)
    assert radial_wavefunction(rc, 200, 0.0, norm=norm) == pytest.approx(math.sqrt(2.0))


def test_rejects_second_indicial_root_and_degenerate_input():
    with pytest.raises(ValueError, match="j = 0"):
        series_coefficients(coeffs(1.0, 1.0, 0.0, 4.0), 10, j=-2)
    with pytest.raises(DegenerateConfigurationError):
        series_coefficients(RadialCoefficients(1.0, 0.0, 0.0, 1.0), 10)
    with pytest.raises(ValueError):
        series_coefficients(coeffs(1.0, 1.0, 0.0, 4.0), 1)
    with pytest.raises(ValueError):
        radial_wavefunction(coeffs(1.0, 1.0, 0.0, 4.0), 10, -1.0)
