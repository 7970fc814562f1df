import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlimits.cauchy import cauchy_eps, cauchy_max, cauchy_pv, cauchy_pv_array
from ntlimits.errors import PVUndefinedError
from ntlimits.geometry import lens_harmonic_measure
from ntlimits.measure import CircleFourier, atom, bergman, measure


def test_circle_closed_forms(m):
    assert cauchy_pv(m, 0.3 + 0.2j).value == pytest.approx(0, abs=1e-15)
    assert cauchy_pv(m, 2.0).value == pytest.approx(-0.5, abs=1e-15)
    z = np.exp(0.4j)
    assert cauchy_pv(m, z).value == pytest.approx(-0.5 / z, abs=1e-15)


def test_quadrature_agrees_with_closed_form(m):
    h = measure(CircleFourier.from_dict({0: 1, 1: 0.5, -1: 0.5}))
    for z in (0.5j, 1.5, np.exp(0.3j)):
        a = cauchy_pv(h, z, method="closed_form").value
        b = cauchy_pv(h, z, method="quadrature").value
        assert abs(a - b) < 1e-10


def test_atom_transform():
    mu = atom(0.5, 2.0)
    assert cauchy_pv(mu, 0.0).value == pytest.approx(4.0)
    with pytest.raises(PVUndefinedError):
        cauchy_pv(mu, 0.5)


def test_bergman_outside_is_minus_inverse(a5):
    assert cauchy_pv(a5, 2.0).value == pytest.approx(-0.5, abs=1e-14)


def test_bergman_closed_vs_quadrature(a5):
    for z in (0.0, 0.4 + 0.1j, 0.95j):
        a = cauchy_pv(a5, z, method="closed_form").value
        b = cauchy_pv(a5, z, method="quadrature").value
        assert abs(a - b) < 1e-8


def test_truncated_large_eps_is_zero(m):
    assert cauchy_eps(m, 0.0, 3.0).value == pytest.approx(0.0, abs=1e-15)


def test_truncated_circle_tends_to_pv(m):
    z = np.exp(0.2j)
    v = cauchy_eps(m, z, 1e-6).value
    assert abs(v - cauchy_pv(m, z).value) < 1e-5


def test_lens_outside_is_minus_inverse():
    mu = lens_harmonic_measure(0.3)
    for z in (0.8 + 0.1j, 1.5, -2.0j):
        assert cauchy_pv(mu, z).value == pytest.approx(-1 / z, abs=1e-10)


def test_maximal_transform_of_point_mass():
    mu = atom(0.0)
    assert cauchy_max(mu, 0.5, [1.0, 0.1]) == pytest.approx(2.0)


def test_zero_measure():
    assert cauchy_pv(measure(), 0.3).value == 0


def test_array_matches_scalar(m):
    zs = np.array([0.1, 1.3, 0.2j])
    assert np.allclose(cauchy_pv_array(m, zs), [cauchy_pv(m, z).value for z in zs])


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=5).filter(lambda z: abs(abs(z) - 1) > 1e-3))
def test_lebesgue_transform_property(z):
    m = measure(CircleFourier.from_dict({0: 1.0}))
    want = 0.0 if abs(z) < 1 else -1 / z
    assert abs(cauchy_pv(m, z).value - want) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=0.9), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_linearity(z, a, b):
    mu = measure(*atom(0.95, a).components, *bergman(2).components)
    nu = measure(*atom(-0.95j, b).components)
    both = measure(*mu.components, *nu.components)
    assert abs(cauchy_pv(both, z).value - cauchy_pv(mu, z).value - cauchy_pv(nu, z).value) < 1e-10 * (1 + abs(a) + abs(b))
