import numpy as np
import pytest

from ntlimits.errors import DomainError
from ntlimits.hz import (HZParams, g_alpha_eval, g_alpha_zeros, g_norm_sq, interior_zero_exists,
                         second_zero, taylor_coeffs, verify_orthogonality)

P = HZParams()
THRESHOLD = 1 - (2 * np.cos(2 * np.pi / 7) - 1)


def test_zero_at_a():
    assert abs(g_alpha_eval(P, P.a)) < 1e-15


def test_second_zero_oracle():
    z1 = second_zero(P)
    assert abs(g_alpha_eval(P, z1)) < 1e-12
    assert 0.99 < abs(z1) < 1
    lhs = (1 - np.conj(P.a) * z1) ** 7
    assert abs(lhs - (1 - abs(P.a) ** 2) ** 7) < 1e-12


def test_zero_count():
    # a itself plus a conjugate pair for real a
    inside = sorted((z for z in g_alpha_zeros(P) if abs(z) < 1), key=lambda z: z.imag)
    assert len(inside) == 3
    assert inside[0] == pytest.approx(np.conj(inside[2]))


def test_threshold():
    lo, hi = np.sqrt(THRESHOLD - 1e-12), np.sqrt(THRESHOLD + 1e-12)
    assert not interior_zero_exists(HZParams(a=lo))
    assert interior_zero_exists(HZParams(a=hi))


def test_taylor_matches_eval():
    c = taylor_coeffs(P, 400)
    z = 0.3 + 0.2j
    assert abs(np.polyval(c[::-1], z) - g_alpha_eval(P, z)) < 1e-12


def test_norm_close_to_two():
    val, tail = g_norm_sq(P)
    assert tail < 1e-12
    assert 1.9 < val < 2.0 + 1e-12


def test_orthogonality_families():
    rep = verify_orthogonality(P, 6)
    assert rep.passes()


def test_bad_params():
    with pytest.raises((DomainError, ValueError)):
        HZParams(a=1.2)
