"""The lens region ``D ∩ {Re z < c}`` and its harmonic measure at the origin.

The conformal chain is explicit: a Möbius map sends the corners
``p± = c ± i sqrt(1 - c^2)`` to ``0`` and ``∞`` (the lens becomes a sector
of opening ``beta = pi - arccos(c)``), a power map opens the sector onto the
upper half-plane, and the half-plane Poisson kernel at the image of ``0``
gives the exit density.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .curves import Arc, Segment, piece_rule
from .errors import DomainError

RULE_RTOL = 1e-10


@dataclass(frozen=True)
class LensRegion:
    c: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise DomainError(f"lens parameter c must lie in (0, 1), got {self.c}")

    @property
    def half_height(self):
        return float(np.sqrt(1.0 - self.c * self.c))

    @property
    def p_plus(self):
        return complex(self.c, self.half_height)

    @property
    def p_minus(self):
        return complex(self.c, -self.half_height)

    @property
    def corner_angle(self):
        """Argument of the upper corner."""
        return float(np.arccos(self.c))

    @property
    def beta(self):
        """Interior angle of the lens at either corner."""
        return float(np.pi - np.arccos(self.c))

    @cached_property
    def pieces(self):
        tp = self.corner_angle
        return (
            Arc(tp, 2.0 * np.pi - tp, corner0=True, corner1=True),
            Segment(self.p_minus, self.p_plus, corner0=True, corner1=True),
        )

    @property
    def origin_image(self):
        """Image of ``0`` in the upper half-plane."""
        return complex(np.exp(1j * np.pi * self.corner_angle / self.beta))

    def contains(self, z):
        z = np.asarray(z)
        return (np.abs(z) < 1.0) & (z.real < self.c)

    def to_half_plane(self, z):
        """Conformal map of the lens onto the upper half-plane, ``0 -> origin_image``."""
        z = np.asarray(z, dtype=complex)
        psi = np.exp(-1j * self.corner_angle) * (z - self.p_plus) / (z - self.p_minus)
        return psi ** (np.pi / self.beta)

    def corner_distances(self, zeta, on_arc):
        """Distances ``(|zeta - p+|, |zeta - p-|)`` for boundary points."""
        zeta = np.asarray(zeta, dtype=complex)
        return np.abs(zeta - self.p_plus), np.abs(zeta - self.p_minus)

    def density(self, zeta, on_arc, dist_plus=None, dist_minus=None):
        """Harmonic-measure density at ``0`` per unit boundary arclength.

        Corner distances may be passed explicitly when they are known more
        accurately than ``zeta - p±`` (nodes graded into a corner).
        """
        on_arc = np.asarray(on_arc, dtype=bool)
        if dist_plus is None:
            dist_plus, dist_minus = self.corner_distances(zeta, on_arc)
        with np.errstate(divide="ignore", invalid="ignore"):
            mag = (dist_plus / dist_minus) ** (np.pi / self.beta)
            big_f = np.where(on_arc, mag, -mag)
            dfdz = (np.pi / self.beta) * mag * abs(self.p_plus - self.p_minus) / (dist_plus * dist_minus)
            f0 = self.origin_image
            dens = f0.imag * dfdz / (np.pi * ((big_f - f0.real) ** 2 + f0.imag ** 2))
        # the density vanishes at both corners (pi / beta > 1)
        corner = (np.asarray(dist_plus) == 0.0) | (np.asarray(dist_minus) == 0.0)
        return np.where(corner, 0.0, dens)

    def density_at_params(self, u, on_arc):
        """Density from piece parameters (arc angle or segment fraction)."""
        u = np.asarray(u, dtype=float)
        tp = self.corner_angle
        chord = abs(self.p_plus - self.p_minus)
        if on_arc:
            dp = 2.0 * np.abs(np.sin(0.5 * (u - tp)))
            dm = 2.0 * np.abs(np.sin(0.5 * (2.0 * np.pi - tp - u)))
            zeta = np.exp(1j * u)
        else:
            dp = (1.0 - u) * chord
            dm = u * chord
            zeta = self.p_minus + u * (self.p_plus - self.p_minus)
        return self.density(zeta, np.full(u.shape, on_arc), dp, dm)

    def arc_mass(self):
        """Exact harmonic measure of the circular part of the boundary."""
        return 1.0 - self.corner_angle / self.beta

    def rule(self, degree=16):
        return lens_rule(self.c, _degree_bucket(degree))


@dataclass(frozen=True)
class LensRule:
    """Quadrature nodes on the lens boundary with harmonic-measure weights."""

    nodes: np.ndarray
    weights: np.ndarray
    on_arc: np.ndarray
    arclength_weights: np.ndarray


def _degree_bucket(degree):
    b = 16
    while b < degree:
        b *= 2
    return b


def _build_rule(region, n_mid, levels):
    zs, ws, arcs, was = [], [], [], []
    for idx, piece in enumerate(region.pieces):
        zeta, w_arc, u = piece_rule(piece, n_mid=n_mid, levels=levels)
        on_arc = np.full(zeta.shape, idx == 0)
        zs.append(zeta)
        was.append(w_arc)
        ws.append(w_arc * region.density_at_params(u, idx == 0))
        arcs.append(on_arc)
    return LensRule(np.concatenate(zs), np.concatenate(ws), np.concatenate(arcs), np.concatenate(was))


def _probe(rule, degree):
    z = rule.nodes
    w = rule.weights
    vals = [np.sum(w), np.sum(w * z), np.sum(w * z ** degree), np.sum(w * np.conj(z) ** degree),
            np.sum(w / (z - 2.0))]
    return np.array(vals)


@lru_cache(maxsize=32)
def lens_rule(c, degree):
    """Adaptive composite Gauss rule for ``int f d(omega)``, refined until stable to 1e-10."""
    region = LensRegion(c)
    n_mid = 8 + degree // 2
    levels = 40
    rule = _build_rule(region, n_mid, levels)
    for _ in range(6):
        finer = _build_rule(region, 2 * n_mid, levels)
        a, b = _probe(rule, degree), _probe(finer, degree)
        if np.max(np.abs(a - b)) <= RULE_RTOL * max(1.0, np.max(np.abs(b))):
            return finer
        rule, n_mid = finer, 2 * n_mid
    return rule


def brownian_exit_arc_fraction(c, n_walks, seed=0, stop=1e-7, batch=250_000):
    """Walk-on-spheres estimate of the harmonic measure of the circular arc at ``0``.

    Returns ``(fraction, standard_error)``.
    """
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < n_walks:
        n = min(batch, n_walks - done)
        x = np.zeros(n, dtype=complex)
        active = np.arange(n)
        arc_hit = np.zeros(n, dtype=bool)
        for _ in range(100_000):
            if active.size == 0:
                break
            xa = x[active]
            d_arc = 1.0 - np.abs(xa)
            d_chord = c - xa.real
            d = np.minimum(d_arc, d_chord)
            stopped = d < stop
            if np.any(stopped):
                arc_hit[active[stopped]] = d_arc[stopped] <= d_chord[stopped]
                keep = ~stopped
                active, xa, d = active[keep], xa[keep], d[keep]
            theta = rng.uniform(0.0, 2.0 * np.pi, size=active.size)
            x[active] = xa + d * np.exp(1j * theta)
        hits += int(np.count_nonzero(arc_hit))
        done += n
    p = hits / n_walks
    return p, float(np.sqrt(p * (1.0 - p) / n_walks))
