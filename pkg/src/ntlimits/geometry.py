"""Stolz regions, tangent-line reflection, 3r-covering selection and capacity primitives."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .lens import LensRegion
from .measure import Atom, LensHarmonic, ball_variation, measure, variation_bound

UNIMODULAR_TOL = 1e-12


def _check_unimodular(zeta):
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > UNIMODULAR_TOL:
        raise DomainError(f"|zeta| must be 1, got {abs(zeta)!r}")
    return zeta


@dataclass(frozen=True)
class StolzRegion:
    """Interior of the convex hull of ``B(0, r)`` and ``zeta``, optionally capped by ``B(zeta, delta)``."""

    zeta: complex
    r: float
    delta: Optional[float] = None

    def __post_init__(self):
        _check_unimodular(self.zeta)
        if not 0.0 < self.r < 1.0:
            raise DomainError("r must lie in (0, 1)")
        if self.delta is not None and not 0.0 < self.delta <= 1.0:
            raise DomainError("delta must lie in (0, 1]")

    def contains(self, lam):
        return _hull_contains(self.zeta, self.r, self.delta, lam)


@dataclass(frozen=True)
class ReflectedStolz(StolzRegion):
    """Mirror image of a Stolz region through the tangent line at ``zeta``."""

    def contains(self, lam):
        return _hull_contains(self.zeta, self.r, self.delta, reflect_tangent(self.zeta, lam))


def _hull_contains(zeta, r, delta, lam):
    lam = np.asarray(lam, dtype=complex)
    w = lam * np.conj(complex(zeta))
    phi = np.arccos(r)
    # tangent lines from 1 touch the circle |w| = r at r e^{+-i phi}
    upper = (w * np.exp(-1j * phi)).real < r
    lower = (w * np.exp(1j * phi)).real < r
    inside = upper & lower & ((np.abs(w) < r) | (w.real >= r * r))
    if delta is not None:
        inside = inside & (np.abs(w - 1.0) < delta)
    return inside if inside.ndim else bool(inside)


def stolz_contains(S, lam):
    """Exact membership of ``lam`` (scalar or array) in a Stolz or reflected Stolz region."""
    return S.contains(lam)


def reflect_tangent(zeta, lam):
    """Reflection through the tangent line at ``zeta``: ``2 zeta - zeta^2 conj(lam)``."""
    zeta = _check_unimodular(zeta)
    lam = np.asarray(lam, dtype=complex)
    out = 2.0 * zeta - zeta * zeta * np.conj(lam)
    return out if out.ndim else complex(out)


def approach_path(S, rho, n):
    """``n`` points of ``S_rho(zeta)`` with strictly increasing modulus, ending within 1e-7 of ``zeta``.

    Points cycle over the radial ray and two oblique rays at ``+-0.95 arcsin(rho)``
    from the inward normal; the final point is radial.
    """
    if not 0.0 < rho < S.r:
        raise DomainError("need 0 < rho < S.r")
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    psi_max = 0.95 * np.arcsin(rho)
    t_max = 0.5 * np.sqrt(1.0 - rho * rho)
    if S.delta is not None:
        t_max = min(t_max, 0.5 * S.delta)
    d_max = 0.5 * t_max * np.cos(psi_max)
    d = np.geomspace(d_max, 1e-7, n) if n > 1 else np.array([1e-7])
    angles = (0.0, psi_max, -psi_max)
    pts = []
    for k, dk in enumerate(d):
        psi = angles[(n - 1 - k) % 3]
        s = 1.0 - dk
        cp = np.cos(psi)
        # |1 - t e^{i psi}| = s, smaller root
        t = cp - np.sqrt(cp * cp - (1.0 - s * s))
        pts.append(S.zeta * (1.0 - t * np.exp(1j * psi)))
    return np.array(pts)


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"disk radius must be positive, got {self.radius}")

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def dilate(self, factor):
        return Disk(self.center, factor * self.radius)


def vitali_3r_select(disks):
    """Greedy disjoint subfamily (largest radius first, stable) whose 3-dilations cover the input."""
    disks = list(disks)
    if not disks:
        raise DomainError("need at least one disk")
    for d in disks:
        if not d.radius > 0:
            raise DomainError("nonpositive radius")
    order = sorted(range(len(disks)), key=lambda i: -disks[i].radius)
    chosen = []
    for i in order:
        d = disks[i]
        if all(abs(d.center - c.center) >= d.radius + c.radius for c in chosen):
            chosen.append(d)
    return chosen


def capacity_primitive(kind, size):
    """Known analytic capacity: ``disk`` of radius ``size`` -> ``size``; ``segment`` of length ``size`` -> ``size / 4``."""
    if not size > 0:
        raise DomainError("size must be positive")
    if kind == "disk":
        return float(size)
    if kind == "segment":
        return float(size) / 4.0
    raise DomainError(f"unknown shape {kind!r}")


def exceptional_cover_estimate(points, scale):
    """Sum of radii of the tripled disks selected from ``B(p, scale)``; an upper-bound proxy, not a capacity."""
    if not scale > 0:
        raise DomainError("scale must be positive")
    points = list(points)
    if not points:
        return 0.0
    chosen = vitali_3r_select([Disk(complex(p), float(scale)) for p in points])
    return 3.0 * scale * len(chosen)


def lens_harmonic_measure(c=0.3):
    """Harmonic measure of ``D ∩ {Re z < c}`` at 0 as a single-component measure."""
    LensRegion(c)
    return measure(LensHarmonic(float(c)))


@dataclass(frozen=True)
class DensityReport:
    M: float
    N: float
    eps_delta: float
    r_grid: np.ndarray
    ratios: np.ndarray


def density_diagnostic(nu, lam0, a, delta, r_grid=None):
    """Density diagnostics at ``lam0``.

    ``M = max_r |nu|(B(lam0, r)) / r`` over a log grid, ``N = 30 M / a + 2`` and
    ``eps_delta = |nu|(B(lam0, N delta)) / delta``. An atom at ``lam0`` gives
    ``M = inf`` (reported, not raised). Absolute constants are omitted.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    if not 0.0 < delta < 0.25:
        raise DomainError("delta must lie in (0, 1/4)")
    lam0 = complex(lam0)
    if r_grid is None:
        r_grid = np.logspace(-9, np.log10(4.0), 400)
    r_grid = np.asarray(r_grid, dtype=float)
    ratios = np.array([ball_variation(nu, lam0, r) / r for r in r_grid])
    has_atom = any(isinstance(c, Atom) and c.weight != 0 and abs(c.point - lam0) < 1e-14
                   for c in nu.components)
    if has_atom:
        return DensityReport(np.inf, np.inf, np.inf, r_grid, ratios)
    M = float(np.max(ratios)) if ratios.size else 0.0
    N = 30.0 * M / a + 2.0
    eps_delta = ball_variation(nu, lam0, N * delta) / delta
    return DensityReport(M, N, float(eps_delta), r_grid, ratios)


def total_variation(nu):
    return variation_bound(nu)


def covering_trial(rng, n_disks=200, n_boundary=1000):
    """One randomized 3r-covering instance; returns ``(pairwise_disjoint, tripled_cover)``.

    Cover is checked on ``n_boundary`` points of each input circle (closed
    tripled disks), disjointness on every selected pair.
    """
    centers = rng.uniform(-1, 1, n_disks) + 1j * rng.uniform(-1, 1, n_disks)
    radii = rng.uniform(0.01, 0.2, n_disks)
    disks = [Disk(complex(c), float(r)) for c, r in zip(centers, radii)]
    chosen = vitali_3r_select(disks)
    cc = np.array([d.center for d in chosen])
    cr = np.array([d.radius for d in chosen])
    gap = np.abs(cc[:, None] - cc[None, :]) - (cr[:, None] + cr[None, :])
    np.fill_diagonal(gap, np.inf)
    disjoint = bool(np.all(gap >= 0))
    t = np.exp(2j * np.pi * np.arange(n_boundary) / n_boundary)
    covered = True
    for d in disks:
        pts = d.center + d.radius * t
        inside = np.abs(pts[:, None] - cc[None, :]) <= 3.0 * cr[None, :]
        if not np.all(inside.any(axis=1)):
            covered = False
            break
    return disjoint, covered
