import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlimits.errors import InsufficientDataError, PreconditionError
from ntlimits.geometry import StolzRegion, approach_path
from ntlimits.measure import CircleFourier, atom, measure
from ntlimits.plemelj import (hardy_multiplication_check, nontangential_limit_estimate,
                              plemelj_scan, poisson_decomposition_check)

H = CircleFourier.from_dict({0: 1.0, 1: 0.5, -1: 0.5})


def test_scan_circle(m):
    rep = plemelj_scan(m, 1.0, 0.5, [1e-2, 1e-3])
    for rec in rep.records:
        assert abs(rec.inner_fit) < 1e-9
        assert abs(rec.outer_fit + 1) < 1e-9
        assert rec.agree_fraction == 1.0
    assert rep.passes()


def test_scan_h_off_real_axis():
    zeta = np.exp(0.8j)
    rep = plemelj_scan(measure(H), zeta, 0.5, [1e-2])
    rec = rep.records[0]
    assert abs(rec.jump - H.h(zeta) * np.conj(zeta)) < 1e-8


def test_scan_flags_nearby_atom():
    mu = measure(*atom(1 - 0.003, 1e-3).components, H)
    rep = plemelj_scan(mu, 1.0, 0.5, [1e-2])
    rec = rep.records[0]
    assert rec.agree_fraction < 1.0
    assert rec.cover_proxy > 0


def test_nt_limit_of_smooth_function():
    S = StolzRegion(1.0, 0.5)
    pts = approach_path(S, 0.3, 30)
    samples = [(p, np.exp(p)) for p in pts]
    assert abs(nontangential_limit_estimate(samples, S) - np.e) < 1e-6


def test_nt_limit_needs_data():
    S = StolzRegion(1.0, 0.5)
    with pytest.raises(InsufficientDataError):
        nontangential_limit_estimate([(0.99, 1.0)], S)


def test_hardy_identities():
    res = hardy_multiplication_check([0, 1], {1: 1.0}, 1.0, 0.5)
    assert res["identity"] < 1e-10
    assert res["pv_g"] < 1e-10
    assert res["pv_fg"] < 1e-10
    assert res["nt_limit"] < 1e-6


def test_hardy_precondition():
    with pytest.raises(PreconditionError):
        hardy_multiplication_check([0, 1], {0: 1.0}, 1.0, 0.5)


def test_poisson_decomposition():
    res = poisson_decomposition_check({0: 1.0, 2: 0.5j}, np.exp(0.3j), [0.5, 0.9, 0.99])
    assert res["max_identity_residual"] < 1e-10
    assert res["rows"][-1]["limit_error"] < res["rows"][0]["limit_error"]


def test_poisson_precondition():
    with pytest.raises(PreconditionError):
        poisson_decomposition_check({-1: 1.0}, 1.0, [0.5])


@settings(max_examples=8, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(-1, 1), st.floats(-1, 1))
def test_jump_equals_density(theta, a, b):
    cf = CircleFourier.from_dict({0: 1.0, 1: complex(a, b), -1: complex(a, -b)})
    zeta = np.exp(1j * theta)
    rep = plemelj_scan(measure(cf), zeta, 0.5, [1e-2])
    assert abs(rep.records[0].jump - cf.h(zeta) * np.conj(zeta)) < 1e-7
