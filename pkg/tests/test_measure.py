from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlimits.errors import DomainError
from ntlimits.measure import (Atom, CircleFourier, Poly2, atom, ball_variation, bergman,
                              bergman_monomial_integral, measure, moment, moment_matrix,
                              multiply_density, scale, variation_bound)

# frozen oracles
A5_DIAG = [720 * factorial(j) / factorial(j + 6) for j in range(6)]  # 1/C(j+6, 6)
A5_BALL_HALF = 1 - 0.75 ** 6


def test_circle_moments_are_kronecker(m):
    for j in range(5):
        for k in range(5):
            assert moment(m, j, k) == pytest.approx(1.0 if j == k else 0.0, abs=1e-15)


def test_bergman_diagonal_oracle(a5):
    for j, want in enumerate(A5_DIAG):
        assert moment(a5, j, j).real == pytest.approx(want, rel=1e-13)
        assert 1 / want == pytest.approx(comb(j + 6, 6))


def test_bergman_off_diagonal_vanishes(a5):
    assert abs(moment(a5, 3, 1)) < 1e-15


def test_bergman_monomial_integral_mass():
    for alpha in range(8):
        assert bergman_monomial_integral(alpha, 0, 0) == pytest.approx(1.0, rel=1e-14)


def test_atom_moment():
    a = 0.3 + 0.4j
    mu = atom(a, 2.0)
    assert moment(mu, 2, 1) == pytest.approx(2.0 * a ** 2 * np.conj(a))


def test_multiply_density_shifts_moments(a5):
    a = 0.9
    mu = multiply_density(a5, Poly2.analytic([-a, 1.0]))
    assert moment(mu, 0, 0) == pytest.approx(-a, abs=1e-14)
    assert moment(mu, 0, 1) == pytest.approx(A5_DIAG[1], rel=1e-13)


def test_moment_matrix_hermitian(a5):
    mu = measure(*a5.components, *atom(0.2j, 0.5).components)
    G = moment_matrix(mu, 6)
    assert np.allclose(G, G.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(G).min() > 0


def test_variation(a5):
    assert variation_bound(a5) == pytest.approx(1.0)
    assert variation_bound(scale(a5, -3.0)) == pytest.approx(3.0)


def test_ball_variation_bergman(a5):
    assert ball_variation(a5, 0.0, 0.5) == pytest.approx(A5_BALL_HALF, rel=1e-10)


def test_circle_fourier_h():
    cf = CircleFourier.from_dict({0: 1.0, 1: 0.5, -1: 0.5})
    assert cf.h(1.0) == pytest.approx(2.0)
    assert cf.h(-1.0) == pytest.approx(0.0, abs=1e-15)


def test_atom_type():
    assert isinstance(atom(0.1).components[0], Atom)


def test_zero_measure_moments():
    assert moment(measure(), 0, 0) == 0


def test_negative_moment_index_rejected(m):
    with pytest.raises((DomainError, ValueError)):
        moment(m, -1, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 12), st.integers(0, 12))
def test_bergman_moments_orthogonal_and_positive(alpha, p, q):
    v = moment(bergman(alpha), p, q)
    if p != q:
        assert abs(v) < 1e-15
    else:
        assert v.real == pytest.approx(1.0 / comb(p + alpha + 1, alpha + 1), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=0.95), st.floats(-2, 2).filter(lambda w: abs(w) > 1e-3))
def test_atom_gram_is_rank_one(a, w):
    G = moment_matrix(atom(a, w), 4)
    assert np.linalg.matrix_rank(G, tol=1e-10 * abs(w)) == 1
