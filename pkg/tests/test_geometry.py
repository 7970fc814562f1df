import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlimits.errors import DomainError
from ntlimits.geometry import (Disk, ReflectedStolz, StolzRegion, approach_path, capacity_primitive,
                               covering_trial, exceptional_cover_estimate, density_diagnostic,
                               reflect_tangent, stolz_contains, vitali_3r_select)
from ntlimits.measure import atom, lebesgue_circle


def test_stolz_membership_examples():
    S = StolzRegion(1.0, 0.5)
    assert stolz_contains(S, 0.9)
    assert not stolz_contains(S, 0.9j)
    assert stolz_contains(S, 0.0)
    assert not stolz_contains(S, 1.0)


def test_stolz_delta_cap():
    S = StolzRegion(1.0, 0.5, 0.05)
    assert stolz_contains(S, 0.97)
    assert not stolz_contains(S, 0.9)


def test_reflected_region():
    R = ReflectedStolz(1.0, 0.5)
    assert stolz_contains(R, 1.1)
    assert not stolz_contains(R, 0.9)


def test_reflection_is_involution_and_fixes_tangent_line():
    zeta = np.exp(0.7j)
    lam = 0.3 + 0.2j
    assert reflect_tangent(zeta, reflect_tangent(zeta, lam)) == pytest.approx(lam)
    on_line = zeta + 0.4j * zeta
    assert reflect_tangent(zeta, on_line) == pytest.approx(on_line)


def test_bad_zeta_rejected():
    with pytest.raises(DomainError):
        StolzRegion(1.1, 0.5)
    with pytest.raises(DomainError):
        reflect_tangent(0.5, 0.1)


def test_approach_path_inside_and_increasing():
    S = StolzRegion(np.exp(1j), 0.5)
    pts = approach_path(S, 0.4, 20)
    assert np.all(np.diff(np.abs(pts)) > 0)
    assert all(stolz_contains(S, p) for p in pts)
    assert abs(pts[-1] - S.zeta) < 1e-6


def test_vitali_example():
    disks = [Disk(0, 1.0), Disk(1.5, 1.0), Disk(5, 0.5)]
    chosen = vitali_3r_select(disks)
    assert chosen == [disks[0], disks[2]]


def test_vitali_empty_rejected():
    with pytest.raises(DomainError):
        vitali_3r_select([])


def test_capacity_primitives():
    assert capacity_primitive("disk", 0.25) == 0.25
    assert capacity_primitive("segment", 2.0) == 0.5
    with pytest.raises(DomainError):
        capacity_primitive("square", 1.0)


def test_cover_estimate():
    assert exceptional_cover_estimate([], 0.1) == 0.0
    assert exceptional_cover_estimate([0, 0.01], 0.1) == pytest.approx(0.3)


def test_density_diagnostic_circle():
    rep = density_diagnostic(lebesgue_circle(), 1.0, 1.0, 0.01)
    assert 0.3 < rep.M < 0.6
    assert rep.eps_delta == pytest.approx(rep.N / np.pi, rel=0.05)


def test_density_diagnostic_atom_reports_infinity():
    rep = density_diagnostic(atom(0.5), 0.5, 1.0, 0.01)
    assert np.isinf(rep.M)


def test_covering_trial_seeded():
    rng = np.random.default_rng(0)
    assert covering_trial(rng, 50, 200) == (True, True)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(0.05, 0.95), st.complex_numbers(max_magnitude=2))
def test_reflection_swaps_sides(theta, r, lam):
    zeta = np.exp(1j * theta)
    S, R = StolzRegion(zeta, r), ReflectedStolz(zeta, r)
    assert bool(stolz_contains(R, lam)) == bool(stolz_contains(S, reflect_tangent(zeta, lam)))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.complex_numbers(max_magnitude=3), st.floats(0.01, 1)), min_size=1, max_size=30))
def test_vitali_properties(spec):
    disks = [Disk(c, r) for c, r in spec]
    chosen = vitali_3r_select(disks)
    for i, a in enumerate(chosen):
        for b in chosen[i + 1:]:
            assert abs(a.center - b.center) >= a.radius + b.radius
    for d in disks:
        assert any(abs(d.center - c.center) + d.radius <= 3 * c.radius + 1e-12 for c in chosen)
