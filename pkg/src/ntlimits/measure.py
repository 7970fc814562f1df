"""Finite complex measures on the closed unit disk built from tractable pieces.

A :class:`ComplexMeasure` is a sum of components:

* :class:`Atom` -- weighted point mass.
* :class:`CircleFourier` -- ``h(zeta) dm`` with ``h`` a finite Fourier sum.
* :class:`BergmanWeight` -- ``P(z, conj z) (1 + alpha) (1 - |z|^2)^alpha dA``.
* :class:`LensHarmonic` -- ``P(z, conj z) [1 / |g|^2] d(omega)`` on the lens boundary.

Moments of atoms, circle and Bergman pieces are closed form; lens pieces use
the harmonic-measure boundary rule from :mod:`ntlimits.lens`.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .curves import Arc, piece_rule
from .errors import CapabilityError, DomainError
from .lens import LensRegion

DEFAULT_MAX_DEGREE = 64
_ON_CIRCLE_TOL = 1e-14


@dataclass(frozen=True)
class Poly2:
    """Polynomial ``sum d[p, q] z^p conj(z)^q`` stored as sorted ``(p, q, coeff)`` triples."""

    terms: tuple = ((0, 0, 1 + 0j),)

    @classmethod
    def from_dict(cls, d):
        items = sorted((int(p), int(q), complex(v)) for (p, q), v in d.items() if v != 0)
        return cls(tuple(items))

    @classmethod
    def constant(cls, value):
        return cls.from_dict({(0, 0): value})

    @classmethod
    def analytic(cls, coeffs):
        """From analytic coefficients ``[a0, a1, ...]`` (``sum a_k z^k``)."""
        return cls.from_dict({(k, 0): c for k, c in enumerate(coeffs)})

    def as_dict(self):
        return {(p, q): c for p, q, c in self.terms}

    @property
    def degree(self):
        return max((p + q for p, q, _ in self.terms), default=0)

    def is_one(self):
        return self.terms == ((0, 0, 1 + 0j),)

    def is_zero(self):
        return len(self.terms) == 0

    def is_real_valued(self):
        d = self.as_dict()
        return all(abs(c - np.conj(d.get((q, p), 0))) == 0 for (p, q), c in d.items())

    def constant_value(self):
        """The value if the polynomial is constant, else None."""
        if self.is_zero():
            return 0j
        if len(self.terms) == 1 and self.terms[0][:2] == (0, 0):
            return self.terms[0][2]
        return None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        zc = np.conj(z)
        for p, q, c in self.terms:
            out = out + c * z ** p * zc ** q
        return out

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            return Poly2.from_dict({(p, q): c * complex(other) for p, q, c in self.terms})
        acc = {}
        for p1, q1, c1 in self.terms:
            for p2, q2, c2 in other.terms:
                key = (p1 + p2, q1 + q2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return Poly2.from_dict(acc)

    __rmul__ = __mul__

    def __add__(self, other):
        acc = self.as_dict()
        for p, q, c in other.terms:
            acc[(p, q)] = acc.get((p, q), 0) + c
        return Poly2.from_dict(acc)


ONE = Poly2()


@dataclass(frozen=True)
class Atom:
    point: complex
    weight: complex = 1 + 0j


@dataclass(frozen=True)
class CircleFourier:
    """``h(zeta) = sum c_k zeta^k`` against normalized arclength ``m``."""

    coeffs: tuple = ((0, 1 + 0j),)

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((int(k), complex(v)) for k, v in d.items() if v != 0)))

    def as_dict(self):
        return dict(self.coeffs)

    def h(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.zeros(zeta.shape, dtype=complex)
        for k, c in self.coeffs:
            out = out + c * zeta ** k
        return out


@dataclass(frozen=True)
class BergmanWeight:
    alpha: int = 0
    density: Poly2 = ONE


@dataclass(frozen=True)
class InvAbsGSq:
    """Reserved density ``1 / |g(z)|^2`` with ``g(z) = 1 - ((1 - |a|^2) / (1 - conj(a) z))^(alpha + 2)``."""

    a: complex
    alpha: int = 5

    def g(self, z):
        z = np.asarray(z, dtype=complex)
        a = complex(self.a)
        return 1.0 - ((1.0 - abs(a) ** 2) / (1.0 - a.conjugate() * z)) ** (self.alpha + 2)

    def __call__(self, z):
        return 1.0 / np.abs(self.g(z)) ** 2


@dataclass(frozen=True)
class LensHarmonic:
    """``density(z) [* tag(z)] d(omega)`` with ``omega`` harmonic measure of the lens at 0."""

    c: float = 0.3
    density: Poly2 = ONE
    tag: Optional[InvAbsGSq] = None
    samples: tuple = field(default=(), compare=False)

    @property
    def region(self):
        return LensRegion(self.c)

    def weight_fn(self, z):
        vals = self.density(z)
        if self.tag is not None:
            vals = vals * self.tag(z)
        return vals


COMPONENT_TYPES = (Atom, CircleFourier, BergmanWeight, LensHarmonic)


@dataclass(frozen=True)
class ComplexMeasure:
    components: tuple = ()
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        for comp in self.components:
            if not isinstance(comp, COMPONENT_TYPES):
                raise CapabilityError(f"unsupported component {type(comp).__name__}")
            if isinstance(comp, Atom) and abs(comp.point) > 1.0 + _ON_CIRCLE_TOL:
                # atoms off the closed disk are allowed for test oracles, but flagged here
                pass

    def __add__(self, other):
        return ComplexMeasure(self.components + other.components, max(self.max_degree, other.max_degree))

    def __mul__(self, scalar):
        return scale(self, scalar)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.components)


def measure(*components, max_degree=DEFAULT_MAX_DEGREE):
    return ComplexMeasure(tuple(components), max_degree)


def lebesgue_circle():
    """Normalized arclength measure ``m`` on the unit circle."""
    return measure(CircleFourier())


def bergman(alpha):
    """``A_alpha = (1 + alpha)(1 - |z|^2)^alpha dA``, a probability measure."""
    return measure(BergmanWeight(int(alpha)))


def atom(point, weight=1.0):
    return measure(Atom(complex(point), complex(weight)))


def scale(mu, s):
    s = complex(s)
    out = []
    for comp in mu.components:
        if isinstance(comp, Atom):
            out.append(replace(comp, weight=comp.weight * s))
        elif isinstance(comp, CircleFourier):
            out.append(CircleFourier.from_dict({k: c * s for k, c in comp.coeffs}))
        else:
            out.append(replace(comp, density=comp.density * s))
    return ComplexMeasure(tuple(out), mu.max_degree)


def bergman_monomial_integral(alpha, p, q):
    """``int z^p conj(z)^q dA_alpha``: zero unless ``p == q``, else ``1 / C(p + alpha + 1, alpha + 1)``."""
    if p != q:
        return 0.0
    return 1.0 / math.comb(p + alpha + 1, alpha + 1)


def _check_degree(mu, *degs):
    for d in degs:
        if d < 0:
            raise DomainError("moment indices must be nonnegative")
        if d > mu.max_degree:
            raise CapabilityError(f"degree {d} exceeds configured maximum {mu.max_degree}")


def _lens_rule_for(comp, degree):
    rule = comp.region.rule(degree + comp.density.degree)
    return rule.nodes, rule.weights * comp.weight_fn(rule.nodes)


def moment(mu, j, k):
    """``int z^j conj(z)^k d(mu)``."""
    _check_degree(mu, j, k)
    total = 0j
    for comp in mu.components:
        if isinstance(comp, Atom):
            total += comp.weight * comp.point ** j * comp.point.conjugate() ** k
        elif isinstance(comp, CircleFourier):
            total += comp.as_dict().get(k - j, 0)
        elif isinstance(comp, BergmanWeight):
            total += sum(c * bergman_monomial_integral(comp.alpha, j + p, k + q) for p, q, c in comp.density.terms)
        else:
            z, w = _lens_rule_for(comp, j + k)
            total += np.sum(w * z ** j * np.conj(z) ** k)
    return complex(total)


def moment_matrix(mu, n):
    """Gram matrix ``G[j, k] = <z^k, z^j> = int z^k conj(z)^j d(mu)`` for ``j, k <= n``."""
    _check_degree(mu, n)
    G = np.zeros((n + 1, n + 1), dtype=complex)
    idx = np.arange(n + 1)
    for comp in mu.components:
        if isinstance(comp, Atom):
            v = comp.point ** idx
            G += comp.weight * np.outer(np.conj(v), v)
        elif isinstance(comp, CircleFourier):
            d = comp.as_dict()
            diff = idx[:, None] - idx[None, :]
            G += np.vectorize(lambda t: d.get(int(t), 0j), otypes=[complex])(diff)
        elif isinstance(comp, BergmanWeight):
            for p, q, c in comp.density.terms:
                # entry (j, k) integrates z^(k+p) conj(z)^(j+q)
                for jj in range(n + 1):
                    kk = jj + q - p
                    if 0 <= kk <= n:
                        G[jj, kk] += c * bergman_monomial_integral(comp.alpha, kk + p, jj + q)
        else:
            z, w = _lens_rule_for(comp, 2 * n)
            V = z[:, None] ** idx[None, :]
            G += np.conj(V).T @ (w[:, None] * V)
    return G


def _mul_laurent(coeffs, poly):
    acc = {}
    for k, c in coeffs:
        for p, q, d in poly.terms:
            key = k + p - q
            acc[key] = acc.get(key, 0) + c * d
    return acc


def multiply_density(mu, g):
    """Measure ``g * mu`` for a bivariate polynomial ``g(z, conj z)``."""
    if not isinstance(g, Poly2):
        g = Poly2.analytic(g)
    out = []
    for comp in mu.components:
        if isinstance(comp, Atom):
            out.append(replace(comp, weight=comp.weight * complex(g(comp.point))))
        elif isinstance(comp, CircleFourier):
            # on the circle conj(z) = 1 / z
            out.append(CircleFourier.from_dict(_mul_laurent(comp.coeffs, g)))
        else:
            dens = comp.density * g
            if dens.degree > mu.max_degree:
                raise CapabilityError(f"density degree {dens.degree} exceeds maximum {mu.max_degree}")
            out.append(replace(comp, density=dens))
    return ComplexMeasure(tuple(out), mu.max_degree)


def _region_of(comp):
    if isinstance(comp, CircleFourier):
        return "circle"
    if isinstance(comp, BergmanWeight):
        return "open_disk"
    if isinstance(comp, LensHarmonic):
        return "lens_boundary"
    r = abs(comp.point)
    if abs(r - 1.0) <= _ON_CIRCLE_TOL:
        return "circle"
    return "open_disk" if r < 1.0 else "exterior"


def restrict(mu, region):
    """Keep only the components supported in ``region`` (circle, open_disk, lens_boundary)."""
    if region not in ("circle", "open_disk", "lens_boundary"):
        raise DomainError(f"unknown region {region!r}")
    return ComplexMeasure(tuple(c for c in mu.components if _region_of(c) == region), mu.max_degree)


def _circle_abs_integral(comp, intervals=None, n_mid=32):
    arc = Arc(-np.pi, np.pi)
    zeta, w, _ = piece_rule(arc, intervals, n_mid=n_mid, levels=0)
    return float(np.sum(w * np.abs(comp.h(zeta)))) / (2.0 * np.pi)


def _bergman_abs_bound(comp):
    const = comp.density.constant_value()
    if const is not None:
        return abs(const)
    a = comp.alpha
    # int |z|^s dA_alpha = (1 + alpha) B(s/2 + 1, alpha + 1)
    return sum(abs(c) * (1 + a) * math.exp(math.lgamma((p + q) / 2 + 1) + math.lgamma(a + 1)
                                            - math.lgamma((p + q) / 2 + a + 2))
               for p, q, c in comp.density.terms)


def component_variation(comp):
    if isinstance(comp, Atom):
        return abs(comp.weight)
    if isinstance(comp, CircleFourier):
        if len(comp.coeffs) == 1 and comp.coeffs[0][0] == 0:
            return abs(comp.coeffs[0][1])
        return float(sum(abs(c) for _, c in comp.coeffs))
    if isinstance(comp, BergmanWeight):
        return _bergman_abs_bound(comp)
    z, w = _lens_rule_for(comp, 0)
    return float(np.sum(np.abs(w)))


def variation_bound(mu):
    """Upper bound on the total variation ``|mu|(C)``; exact for nonnegative constant densities."""
    return float(sum(component_variation(c) for c in mu.components))


def ball_variation(mu, center, r):
    """``|mu|(B(center, r))`` (open ball), by closed form or quadrature per component."""
    center = complex(center)
    total = 0.0
    for comp in mu.components:
        if isinstance(comp, Atom):
            if abs(comp.point - center) < r:
                total += abs(comp.weight)
        elif isinstance(comp, CircleFourier):
            arc = Arc(-np.pi, np.pi)
            iv = arc.inside(center, r)
            if iv:
                zeta, w, _ = piece_rule(arc, iv, n_mid=32, levels=0)
                total += float(np.sum(w * np.abs(comp.h(zeta)))) / (2.0 * np.pi)
        elif isinstance(comp, BergmanWeight):
            total += _bergman_ball_mass(comp, center, r)
        else:
            region = comp.region
            for idx, piece in enumerate(region.pieces):
                iv = piece.inside(center, r)
                if not iv:
                    continue
                zeta, w, u = piece_rule(piece, iv, n_mid=32, levels=40)
                dens = region.density_at_params(u, idx == 0)
                total += float(np.sum(w * dens * np.abs(comp.weight_fn(zeta))))
    return total


def _bergman_ball_mass(comp, center, r, n_phi=256, n_rho=48):
    """Polar quadrature about ``center`` of ``|density| dA_alpha`` over ``B(center, r) ∩ D``."""
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    x, wx = np.polynomial.legendre.leggauss(n_rho)
    e = np.exp(1j * phi)
    # ray center + rho e meets the unit disk for rho in [lo, hi]
    b = (np.conj(center) * e).real
    disc = b * b - (abs(center) ** 2 - 1.0)
    sq = np.sqrt(np.maximum(disc, 0.0))
    lo = np.maximum(-b - sq, 0.0)
    hi = np.where(disc > 0, np.minimum(-b + sq, r), 0.0)
    span = np.maximum(hi - lo, 0.0)
    rho = 0.5 * (hi + lo)[:, None] + 0.5 * span[:, None] * x[None, :]
    wpt = center + rho * e[:, None]
    vals = np.abs(comp.density(wpt)) * (1 + comp.alpha) * np.maximum(1 - np.abs(wpt) ** 2, 0.0) ** comp.alpha * rho
    # (2 pi / n_phi) * (span / 2) * sum(wx * vals) / pi
    return float(np.sum(span * np.sum(vals * wx[None, :], axis=1)) / n_phi)


def circle_density(mu, zeta):
    """Density of the part of ``mu`` absolutely continuous w.r.t. ``m`` at ``zeta`` (``h(zeta)``).

    Circle components contribute their Fourier sums; lens components
    contribute on the open circular arc of the lens boundary.
    """
    zeta = complex(zeta)
    h = 0j
    for comp in mu.components:
        if isinstance(comp, CircleFourier):
            h += complex(comp.h(zeta))
        elif isinstance(comp, LensHarmonic):
            region = comp.region
            t = region.pieces[0].locate(zeta, tol=1e-12)
            if t is not None and region.pieces[0].lo < t < region.pieces[0].hi:
                dens = region.density_at_params(np.array([t]), True)[0]
                h += 2.0 * np.pi * dens * complex(comp.weight_fn(zeta))
    return h
