from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from abring.errors import ConventionError, InvalidParameter
from abring.spectrum import (
    Fidelity,
    Regime,
    RingParams,
    SpectrumCoefficients,
    linearized_energy,
    nonrelativistic_coefficients,
    nonrelativistic_energy,
    quadratic_energy,
    relativistic_coefficients,
    relativistic_energy,
    relativistic_kinetic_energy,
)

# sqrt(1 + (57/2)^2) to 40 digits, from mpmath at dps=40.
E_REF = 28.51753846319839716610958601592821642921

fluxes = st.floats(min_value=0, max_value=500, allow_nan=False)
masses = st.floats(min_value=1e-3, max_value=1e3)
radii = st.floats(min_value=1e-2, max_value=1e2)
quanta = st.integers(min_value=-10**6, max_value=10**6)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(mass=0.0),
        dict(mass=-1.0),
        dict(radius=0.0),
        dict(flux_ratio=-1.0),
        dict(charge_sign=0),
        dict(charge_sign=2),
        dict(particle_count=0),
        dict(particle_count=1.5),
    ],
)
def test_ring_params_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameter):
        RingParams(**kwargs)


def test_relativistic_ground_level_is_mass():
    assert relativistic_energy(RingParams(mass=1, radius=1, flux_ratio=0), 0) == 1.0


def test_relativistic_zero_flux_pair():
    p = RingParams(mass=1, radius=1, flux_ratio=0)
    assert relativistic_energy(p, 3) == relativistic_energy(p, -3)


def test_relativistic_energy_extended_precision():
    p = RingParams(mass=1, radius=2, flux_ratio=50)
    assert relativistic_energy(p, 7) == pytest.approx(E_REF, rel=1e-15)
    with mpmath.workdps(40):
        assert float(mpmath.sqrt(1 + mpmath.mpf(57) ** 2 / 4)) == pytest.approx(E_REF, rel=1e-15)


def test_nonrelativistic_examples():
    p0 = RingParams(mass=1, radius=1, flux_ratio=0)
    assert nonrelativistic_energy(p0, 0) == 0.0
    assert nonrelativistic_energy(p0, 2) == nonrelativistic_energy(p0, -2)
    # (n + phi)^2 / (2 m a^2) with m=2: exactly 53^2/4.
    p = RingParams(mass=2, radius=1, flux_ratio=50)
    assert nonrelativistic_energy(p, 3) == float(Fraction(53**2, 4))


def test_relativistic_coefficients_examples():
    p = RingParams(mass=1, radius=1, flux_ratio=50)
    derived = relativistic_coefficients(p, Fidelity.DERIVED_CONSISTENT)
    assert (derived.A, derived.B, derived.C) == (1, 100, 2501)
    literal = relativistic_coefficients(p, Fidelity.PAPER_LITERAL)
    assert (literal.A, literal.B, literal.C) == (1, 50, 2501)
    zero = relativistic_coefficients(RingParams(mass=1, radius=1, flux_ratio=0))
    assert (zero.A, zero.B, zero.C) == (1, 0, 1)


def test_derived_coefficients_match_symbolic_expansion():
    n, m, a, phi = sympy.symbols("n m a phi", positive=True)
    poly = sympy.Poly(sympy.expand(m**2 + (n + phi) ** 2 / a**2), n)
    A, B, C = poly.all_coeffs()
    params = RingParams(mass=1.7, radius=0.8, flux_ratio=63.0)
    coeffs = relativistic_coefficients(params)
    subs = {m: 1.7, a: 0.8, phi: 63.0}
    assert coeffs.A == pytest.approx(float(A.subs(subs)), rel=1e-15)
    assert coeffs.B == pytest.approx(float(B.subs(subs)), rel=1e-15)
    assert coeffs.C == pytest.approx(float(C.subs(subs)), rel=1e-15)


@pytest.mark.parametrize(
    "mass, flux, expected",
    [(1, 50, (50, 1250)), (1, 0, (0, 0)), (2, 100, (50, 2500))],
)
def test_nonrelativistic_coefficients(mass, flux, expected):
    c = nonrelativistic_coefficients(RingParams(mass=mass, radius=1, flux_ratio=flux))
    assert (c.B, c.C) == expected
    assert c.variant is Regime.NONRELATIVISTIC


def test_coefficient_builders_reject_positive_charge():
    p = RingParams(charge_sign=1)
    with pytest.raises(ConventionError):
        relativistic_coefficients(p)
    with pytest.raises(ConventionError):
        nonrelativistic_coefficients(p)
    # energies themselves accept either sign
    assert relativistic_energy(p, 50) == 1.0


def test_coefficients_validation():
    with pytest.raises(InvalidParameter):
        SpectrumCoefficients(A=0, B=1, C=1)
    with pytest.raises(InvalidParameter):
        SpectrumCoefficients(A=1, B=-1, C=1)
    with pytest.raises(InvalidParameter):
        SpectrumCoefficients(A=1, B=1, C=0)
    SpectrumCoefficients(A=1, B=0, C=0, variant=Regime.NONRELATIVISTIC)


def test_energies_accept_arrays():
    p = RingParams(flux_ratio=50)
    n = np.arange(5)
    np.testing.assert_array_equal(relativistic_energy(p, n), [relativistic_energy(p, k) for k in range(5)])


@given(mass=masses, radius=radii, flux=fluxes, n=quanta, sign=st.sampled_from([-1, 1]))
def test_relativistic_energy_at_least_mass(mass, radius, flux, n, sign):
    p = RingParams(mass=mass, radius=radius, flux_ratio=flux, charge_sign=sign)
    assert relativistic_energy(p, n) >= mass


@given(mass=masses, radius=radii)
def test_relativistic_minimum_at_integer_flux(mass, radius):
    p = RingParams(mass=mass, radius=radius, flux_ratio=7, charge_sign=-1)
    assert relativistic_energy(p, -7) == mass
    assert relativistic_energy(p, -6) > mass


@given(mass=masses, radius=radii, n=st.integers(min_value=1, max_value=100))
def test_zero_flux_degeneracy_bit_exact(mass, radius, n):
    p = RingParams(mass=mass, radius=radius, flux_ratio=0)
    assert relativistic_energy(p, n) == relativistic_energy(p, -n)
    assert nonrelativistic_energy(p, n) == nonrelativistic_energy(p, -n)


@given(flux=st.floats(min_value=0.25, max_value=500), n=st.integers(min_value=1, max_value=100))
def test_nonzero_flux_lifts_degeneracy(flux, n):
    p = RingParams(flux_ratio=flux)
    assert relativistic_energy(p, n) != relativistic_energy(p, -n)


@pytest.mark.parametrize("n", range(-10, 11))
def test_nonrelativistic_limit(n):
    p = RingParams(mass=1e6, radius=1, flux_ratio=50)
    ratio = relativistic_kinetic_energy(p, n) / nonrelativistic_energy(p, n)
    assert abs(ratio - 1) < 1e-8


def test_kinetic_energy_matches_naive_difference_at_small_mass():
    p = RingParams(mass=1, radius=1.3, flux_ratio=12)
    for n in range(20):
        assert relativistic_kinetic_energy(p, n) == pytest.approx(relativistic_energy(p, n) - 1, rel=1e-13)


@given(mass=masses, radius=radii, flux=fluxes, n=st.integers(min_value=0, max_value=10**6))
def test_derived_coefficients_reproduce_spectrum(mass, radius, flux, n):
    p = RingParams(mass=mass, radius=radius, flux_ratio=flux)
    coeffs = relativistic_coefficients(p)
    assert quadratic_energy(coeffs, n) == pytest.approx(relativistic_energy(p, n), rel=1e-12)


@given(mass=masses, radius=radii, flux=fluxes, n=st.integers(min_value=0, max_value=10**6))
def test_nonrelativistic_coefficients_reproduce_spectrum(mass, radius, flux, n):
    p = RingParams(mass=mass, radius=radius, flux_ratio=flux)
    coeffs = nonrelativistic_coefficients(p)
    expected = nonrelativistic_energy(p, n)
    assert quadratic_energy(coeffs, n) == pytest.approx(expected, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("flux", [50, 100, 200])
def test_linearization_error_grows_with_n(flux):
    coeffs = relativistic_coefficients(RingParams(flux_ratio=flux))
    n = np.arange(0, 5000)
    exact = quadratic_energy(coeffs, n)
    rel_err = np.abs(linearized_energy(coeffs, n) - exact) / exact
    assert np.all(np.diff(rel_err) >= 0)
