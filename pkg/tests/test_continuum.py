"""Unit tests for the continuum-limit quadrature machinery."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from mirrorcorr.continuum import (
    QuadratureSpec,
    ScaledDistances,
    correlation_C_general,
    correlation_C_of_d,
    correlation_bracket_of_d,
    factorized_double_integral,
    fit_asymptotic_coefficient,
    reduced_integral_I,
)
from mirrorcorr.errors import ConvergenceError, DomainError
from mirrorcorr.model import PhysicalParams
from mirrorcorr.specfun import aux_f, aux_g

PARAMS = PhysicalParams(m=1.0, omega0=1.0, L0=math.pi)
ASYMPT = 5.0 * math.pi / 8.0  # measured large-d limit of I(d) d^3


def _regulated_double_integral(q: float, d: float) -> float:
    """eps-ladder oracle for the (r,s) double integral, reduced to 1D.

    With t = r + s the inner integral is exact:
    int_0^t sin(rd) sin((t-r)d) dr = (sin(td)/d - t cos(td)) / 2,
    leaving a damped 1D integral extrapolated in the damping parameter.
    """
    def damped(eps):
        t_max = -math.log(1e-14) / eps
        edges = np.arange(0.0, t_max + math.pi / d, math.pi / d)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, _ = quad(
                lambda t: math.exp(-eps * t)
                * (math.sin(t * d) / d - t * math.cos(t * d))
                / (2.0 * (q + t)),
                lo,
                hi,
                limit=100,
            )
            total += v
        return total

    ladder = (0.1, 0.05, 0.025, 0.0125)
    return float(np.polyfit(ladder, [damped(e) for e in ladder], 3)[-1])


def test_factorized_closed_form_value():
    # (1/2)(f(1) + g(1))
    assert factorized_double_integral(1.0, 1.0) == pytest.approx(
        0.5 * (aux_f(1.0) + aux_g(1.0)), rel=1e-14
    )


def test_factorized_vs_regulated_oracle():
    for (q, d) in ((1.0, 1.0), (3.0, 0.5), (1.0, 2.0), (0.5, 3.0), (2.0, 1.5)):
        assert factorized_double_integral(q, d) == pytest.approx(
            _regulated_double_integral(q, d), abs=1e-6
        )


def test_factorized_limits():
    assert factorized_double_integral(0.0, 2.0) == pytest.approx(math.pi / 8.0, rel=1e-14)
    # large qd: f(qd)/d -> 1/(q d^2) and q g(qd) -> 1/(q d^2) contribute
    # equally, so the value tends to 1/(q d^2)
    q, d = 2.0, 100.0
    assert factorized_double_integral(q, d) == pytest.approx(1.0 / (q * d * d), rel=0.05)
    with pytest.raises(DomainError):
        factorized_double_integral(1.0, 0.0)
    with pytest.raises(DomainError):
        factorized_double_integral(-1.0, 1.0)


def test_reduced_integral_small_u_panel():
    """Integrand is finite at u -> 0+: compare the first panel to its Taylor model."""
    d = 2.0
    # u^2/(1+u/d) (f/u+g)(sin u/u - cos u) ~ (pi/2) u^3 / 3 near 0
    def integrand(u):
        return u * u / (1 + u / d) * (aux_f(u) / u + aux_g(u)) * (
            math.sin(u) / u - math.cos(u)
        )

    eps = 1e-3
    direct, _ = quad(integrand, 1e-300, eps)
    taylor = math.pi / 2.0 * eps**4 / 12.0
    assert direct == pytest.approx(taylor, rel=1e-2)
    assert abs(direct - taylor) < 1e-8


def test_reduced_integral_selfsimilarity():
    i150, _ = reduced_integral_I(150.0)
    i300, _ = reduced_integral_I(300.0)
    assert i300 / i150 == pytest.approx(0.5**3, rel=0.03)


def test_reduced_integral_vs_regulated_oracle():
    """Damped-integrand brute force, Richardson-extrapolated in eps."""
    spec = QuadratureSpec()
    for d in (2.0, 5.0, 20.0):
        val, err = reduced_integral_I(d, spec)

        def damped(eps):
            t_max = -math.log(1e-14) / eps
            edges = np.arange(0.0, t_max + math.pi, math.pi)
            total = 0.0
            for lo, hi in zip(edges[:-1], edges[1:]):
                v, _ = quad(
                    lambda u: math.exp(-eps * u)
                    * u
                    * u
                    / (1 + u / d)
                    * (aux_f(u) / u + aux_g(u))
                    * (math.sin(u) / u - math.cos(u))
                    if u > 0
                    else 0.0,
                    lo,
                    hi,
                    limit=200,
                )
                total += v
            return total / d**3

        ladder = (0.1, 0.05, 0.025, 0.0125)
        oracle = float(np.polyfit(ladder, [damped(e) for e in ladder], 3)[-1])
        # the comparison floor is the oracle's own extrapolation error
        # (~1e-6 relative with this ladder), not the quadrature's
        assert abs(val - oracle) < max(3.0 * err, 3e-6 * abs(val))


def test_convergence_error_carries_estimate():
    import warnings

    spec = QuadratureSpec(rel_tol=1e-15, abs_tol=1e-18, tail_max_partitions=8)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # roundoff warnings from the absurd tolerances
        with pytest.raises(ConvergenceError) as exc:
            reduced_integral_I(3.0, spec)
    assert exc.value.best_estimate is not None


def test_correlation_sign_and_mass_scaling():
    for d in (1.0, 2.0, 5.0, 10.0, 50.0):
        assert correlation_C_of_d(d, PARAMS).value < 0.0
    heavy = PhysicalParams(m=2.0, omega0=1.0, L0=math.pi)
    assert correlation_C_of_d(3.0, heavy).value == pytest.approx(
        correlation_C_of_d(3.0, PARAMS).value / 2.0, rel=1e-14
    )


def test_general_reduces_to_equal_distance():
    for d in (1.0, 3.0, 7.0):
        gen = correlation_C_general(ScaledDistances(d, d), PARAMS).value
        eq = correlation_C_of_d(d, PARAMS).value
        assert gen == pytest.approx(eq, rel=1e-10)


def test_general_swap_symmetry():
    for (d1, d2) in ((1.0, 2.0), (2.0, 4.0), (0.5, 6.0)):
        a = correlation_C_general(ScaledDistances(d1, d2), PARAMS).value
        b = correlation_C_general(ScaledDistances(d2, d1), PARAMS).value
        assert a == pytest.approx(b, rel=1e-12)


def test_general_frozen_value():
    # regression pin at (d1, d2) = (2, 4)
    res = correlation_C_general(ScaledDistances(2.0, 4.0), PARAMS)
    assert res.value == pytest.approx(-1.4382616691519834e-06, rel=1e-9)


def test_scaled_distances():
    sd = ScaledDistances.from_positions(PARAMS.L0 - 1.0, PARAMS.L0 + 2.0, PARAMS)
    assert (sd.d1, sd.d2) == (pytest.approx(1.0), pytest.approx(2.0))
    with pytest.raises(DomainError):
        ScaledDistances(-1.0, 2.0)


def test_units_consistency():
    """Natural-units bracket times the SI prefactor equals the SI-mode result."""
    si = PhysicalParams(m=1e-9, omega0=1e6, L0=1.0, units="si")
    d = 4.0
    res_si = correlation_C_of_d(d, si)
    bracket, _ = correlation_bracket_of_d(d)
    from mirrorcorr.model import HBAR_SI, C_SI

    pref = -(HBAR_SI**3 * C_SI * (si.omega0 / C_SI)) / (2**6 * (2 * math.pi) ** 4 * si.m)
    assert res_si.value == pytest.approx(pref * bracket, rel=1e-12)


def test_asymptotic_consistency():
    """For d >= 50 the d^-3 law with the measured coefficient holds and tightens."""
    rel = []
    for d in (50.0, 100.0, 200.0):
        c = correlation_C_of_d(d, PARAMS).value
        asympt = -PARAMS.hbar**3 * PARAMS.c * PARAMS.k0 / (
            2**5 * (2 * math.pi) ** 4 * PARAMS.m
        ) * ASYMPT / d**3
        rel.append(abs(c - asympt) / abs(c))
    assert all(r <= 0.1 for r in rel)
    assert rel[-1] < rel[0]


def test_error_estimate_honesty():
    """Loose-tolerance results stay within their own error bars of tight runs."""
    loose = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9)
    tight = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-10)
    for d in np.linspace(1.0, 30.0, 30):
        vl, el = reduced_integral_I(float(d), loose)
        vt, _ = reduced_integral_I(float(d), tight)
        assert abs(vl - vt) <= max(el, 1e-15)


def test_fit_asymptotic():
    coeff, exponent, resid = fit_asymptotic_coefficient(50.0, 500.0, 8)
    assert exponent == pytest.approx(-3.0, abs=0.05)
    assert coeff == pytest.approx(2.0 * ASYMPT, rel=0.05)
    # the factorized first term alone decays one power faster
    from mirrorcorr.fitting import fit_power_law

    ds = np.geomspace(50.0, 500.0, 8)
    first = [(aux_f(d) / d + aux_g(d)) ** 2 for d in ds]
    _, exp4, _ = fit_power_law(ds, first)
    assert exp4 == pytest.approx(-4.0, abs=0.1)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(tail_accel_order=10, tail_max_partitions=5)
