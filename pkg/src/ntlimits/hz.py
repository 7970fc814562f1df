"""The weighted-Bergman counterexample: ``mu = sigma + A_alpha`` with ``d sigma = d omega / |g|^2``.

``g(z) = 1 - ((1 - |a|^2) / (1 - conj(a) z))^(alpha + 2)`` vanishes at ``a``
and, for ``|a|`` close enough to 1, at a second point of the disk. Its
Taylor coefficients are explicit,

    g_0 = 1 - s^(alpha+2),  g_k = -s^(alpha+2) C(k + alpha + 1, alpha + 1) conj(a)^k,

with ``s = 1 - |a|^2``, and ``A_alpha`` moments are ``1 / C(k + alpha + 1, alpha + 1)``,
so ``<z^k, g>_{A_alpha} = -s^(alpha+2) a^k`` for ``k >= 1`` exactly. The
``sigma`` part of any inner product ``<p, g>`` is ``int p / g d omega``.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ConstructionError, DegreeInsufficientError, DomainError
from .lens import LensRegion
from .measure import InvAbsGSq, LensHarmonic, bergman, measure
from .p2space import (InnerProductTarget, distance_to_cyclic, gram, multiplier_columns,
                      point_eval_norm, projection_coeffs, subspace_basis, wandering_dim)

LENS_CLEARANCE = 1e-6


@dataclass(frozen=True)
class HZParams:
    a: complex = 0.9
    alpha: int = 5
    c: float = 0.3

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if not abs(self.a) < 1.0:
            raise DomainError("need |a| < 1")
        if int(self.alpha) != self.alpha or self.alpha < 0:
            raise DomainError("alpha must be a nonnegative integer")
        LensRegion(self.c)

    @property
    def s(self):
        return 1.0 - abs(self.a) ** 2

    @property
    def power(self):
        return int(self.alpha) + 2


def g_alpha_eval(p, z):
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(p.a) * z
    if np.any(den == 0):
        raise DomainError("z is the pole 1 / conj(a)")
    out = 1.0 - (p.s / den) ** p.power
    return complex(out) if out.ndim == 0 else out


def g_alpha_all_roots(p):
    """All ``alpha + 2`` roots of ``(1 - conj(a) z)^(alpha+2) = s^(alpha+2)``."""
    if p.a == 0:
        raise DomainError("a = 0 makes g identically 1 - 1 = 0 on no finite root set")
    k = np.arange(p.power)
    return (1.0 - p.s * np.exp(2j * np.pi * k / p.power)) / np.conj(p.a)


def g_alpha_zeros(p):
    """Zeros of ``g`` in the open disk; ``a`` comes first."""
    roots = g_alpha_all_roots(p)
    inside = [complex(p.a)]
    for z in roots[1:]:
        if abs(z) < 1.0:
            inside.append(complex(z))
    return inside


def interior_zero_exists(p):
    """True iff ``g`` has a zero in the disk other than ``a``: ``s < 2 cos(2 pi / (alpha + 2)) - 1``."""
    return bool(p.s < 2.0 * np.cos(2.0 * np.pi / p.power) - 1.0)


def second_zero(p):
    zs = g_alpha_zeros(p)
    if len(zs) < 2:
        raise DomainError("no second interior zero for these parameters")
    # the pair k = 1, alpha + 1 are conjugate for real a; take the one with negative imaginary part
    return min(zs[1:], key=lambda z: (z.imag, z.real))


def taylor_coeffs(p, n):
    """``g_0 .. g_n``."""
    k = np.arange(n + 1)
    binom = np.array([comb(int(j) + p.power - 1, p.power - 1) for j in k], dtype=float)
    gk = -(p.s ** p.power) * binom * np.conj(p.a) ** k
    gk[0] += 1.0
    return gk


def _lens_clearance(p):
    region = LensRegion(p.c)
    worst = np.inf
    for z in g_alpha_all_roots(p) if p.a != 0 else []:
        if region.contains(z):
            return 0.0
        # distance to the closed lens: to the chord segment or to the arc
        seg = region.pieces[1]
        d_seg = seg.distance(z, 0.0, 1.0)
        arc = region.pieces[0]
        d_arc = arc.distance(z, arc.t0, arc.t1)
        worst = min(worst, d_seg, d_arc)
    return worst


def build_sigma(p, n_samples=64):
    """``d sigma = d omega / |g|^2`` on the lens boundary, with a table of density samples."""
    if p.a != 0 and _lens_clearance(p) <= LENS_CLEARANCE:
        raise ConstructionError("a zero of g lies on or within 1e-6 of the closed lens")
    region = LensRegion(p.c)
    tag = InvAbsGSq(p.a, int(p.alpha))
    samples = []
    for idx, piece in enumerate(region.pieces):
        u = np.linspace(piece.lo, piece.hi, n_samples // 2 + 2)[1:-1]
        zeta = piece.point(u)
        dens = region.density_at_params(u, idx == 0) * tag(zeta)
        samples.extend((float(z.real), float(z.imag), float(d)) for z, d in zip(zeta, dens))
    return measure(LensHarmonic(float(p.c), tag=tag, samples=tuple(samples)))


def build_mu(p):
    return build_sigma(p) + bergman(int(p.alpha))


def _sigma_rule(p, degree):
    region = LensRegion(p.c)
    rule = region.rule(degree)
    return rule.nodes, rule.weights


def bergman_inner_with_g(p, n):
    """``t_k = <z^k, g>_{A_alpha}`` for ``k <= n`` (exact)."""
    t = -(p.s ** p.power) * np.asarray(p.a, dtype=complex) ** np.arange(n + 1)
    t[0] = 1.0 - p.s ** p.power
    return t


def sigma_inner_with_g(p, n):
    """``t_k = <z^k, g>_sigma = int z^k conj(g) / |g|^2 d omega``, by lens quadrature."""
    z, w = _sigma_rule(p, n + 8)
    g = g_alpha_eval(p, z)
    vals = (z[:, None] ** np.arange(n + 1)[None, :]) * (np.conj(g) / np.abs(g) ** 2)[:, None]
    return w @ vals


def g_norm_sq(p, tol=1e-15, kmax=200_000):
    """``||g||^2`` in ``L^2(mu)``: a convergent series for ``A_alpha`` plus ``omega``'s unit mass.

    Returns ``(value, tail_bound)``.
    """
    s_pow = p.s ** p.power
    r2 = abs(p.a) ** 2
    total = abs(1.0 - s_pow) ** 2
    # |g_k|^2 / C(k + alpha + 1, alpha + 1) = s^(2 alpha + 4) C(k + alpha + 1, alpha + 1) |a|^(2k)
    term_c = 1.0
    k = 0
    tail = np.inf
    while k < kmax:
        k += 1
        term_c *= (k + p.power - 1) / k * r2
        term = s_pow * s_pow * term_c
        total += term
        ratio = (k + p.power) / (k + 1) * r2
        if ratio < 1.0:
            tail = term * ratio / (1.0 - ratio)
            if tail < tol * total:
                break
    if not tail < np.inf:
        raise DegreeInsufficientError("norm series did not reach its geometric regime")
    return total + 1.0, tail


def g_target(p, n):
    """``g`` as an :class:`InnerProductTarget` of degree ``n`` in ``L^2(mu)``."""
    t = bergman_inner_with_g(p, n) + sigma_inner_with_g(p, n)
    nrm, _ = g_norm_sq(p)
    return InnerProductTarget(t, nrm)


def generator_polynomial(p):
    """``G(z) = (1 - conj(a) z)^(alpha+2) - s^(alpha+2)``: same zeros as ``g``, ``g = G / (1 - conj(a) z)^(alpha+2)``."""
    coeffs = np.array([comb(p.power, k) * (-np.conj(p.a)) ** k for k in range(p.power + 1)], dtype=complex)
    coeffs[0] -= p.s ** p.power
    return coeffs


@dataclass
class VerifyReport:
    families: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def passes(self):
        return all(max(v, default=0.0) < self.tolerances[k] for k, v in self.families.items())


def verify_orthogonality(p, n=10, tol=1e-8, tol_iii=1e-7):
    """Residual families for the annihilation identities.

    (i)   ``|int z^j g conj(g) d sigma|``, j = 1..n;
    (ii)  ``|int z^j conj(g) d sigma|``, j = 1..n;
    (iii) ``|<z (z - a) z^j, g>_{L^2(mu)}|``, j = 0..n.
    """
    z, w = _sigma_rule(p, 2 * n + 8)
    g = g_alpha_eval(p, z)
    dens = w / np.abs(g) ** 2
    fam1 = [abs(np.sum(dens * z ** j * g * np.conj(g))) for j in range(1, n + 1)]
    fam2 = [abs(np.sum(dens * z ** j * np.conj(g))) for j in range(1, n + 1)]
    deg = n + 2
    t = bergman_inner_with_g(p, deg) + sigma_inner_with_g(p, deg)
    fam3 = []
    for j in range(n + 1):
        c = np.zeros(deg + 1, dtype=complex)
        c[j + 2] = 1.0
        c[j + 1] = -p.a
        fam3.append(abs(np.dot(c, t)))
    rep = VerifyReport({"i": fam1, "ii": fam2, "iii": fam3}, {"i": tol, "ii": tol, "iii": tol_iii})
    rep.tail_bound = 0.0  # A_alpha inner products against polynomials are exact finite sums
    return rep


@dataclass
class NotGeneratedReport:
    n_list: list
    d1: list
    d2: list
    d2_bound: list
    d2_bound_strict: list
    wandering: list
    cosine: list
    z1: complex

    def checks(self):
        mono = all(b <= a * (1 + 1e-10) + 1e-14 for a, b in zip(self.d1, self.d1[1:]))
        return {
            "d1_monotone": mono,
            "d1_decrease": bool(self.d1[-1] < 0.9 * self.d1[0]),
            "d2_certified": all(d >= b for d, b in zip(self.d2, self.d2_bound)),
            "wandering_dim_one": all(w == 1 for w in self.wandering),
            "cosine": all(c > 0.999 for c in self.cosine),
        }

    def passes(self):
        return all(self.checks().values())


def verify_not_generated(p, n_list=(5, 10, 20, 40), wandering_n=(10, 20, 30), svtol=1e-8):
    """Evidence that ``M = [z - a]`` but ``M != [g]``, and that ``M ⊖ zM`` is spanned by ``g``'s projection.

    * ``d1(n)``: distance from ``g`` to ``span{(z - a) z^j : j < n}``;
    * ``d2(n)``: distance from ``z - a`` to ``span{G z^j : deg <= n}``, where the
      polynomial ``G`` has exactly the zeros of ``g``; every competitor vanishes at the
      second zero ``z1``, so ``d2(n) >= |z1 - a| / k_n(z1) >= |z1 - a| / k_{n+1}(z1)``;
    * wandering dimension and the cosine between the wandering vector and ``P_{M_n} g``.
    """
    if not interior_zero_exists(p):
        raise DomainError("g has no second interior zero for these parameters")
    z1 = second_zero(p)
    mu = build_mu(p)
    nmax = max(max(n_list), max(wandering_n)) + 1
    big = gram(mu, nmax)
    from .p2space import sub_gram

    h = np.array([-p.a, 1.0])
    Gpoly = generator_polynomial(p)
    d1, d2, bnd, bnd_strict = [], [], [], []
    for n in n_list:
        gb = sub_gram(big, n)
        d1.append(distance_to_cyclic(gb, g_target(p, n), h))
        if n >= len(Gpoly) - 1:
            d2.append(distance_to_cyclic(gb, h, Gpoly))
        else:
            d2.append(float(np.sqrt(gb.norm_sq(h))))
        bnd_strict.append(abs(z1 - p.a) / point_eval_norm(gb, z1))
        bnd.append(abs(z1 - p.a) / point_eval_norm(sub_gram(big, n + 1), z1))
    wand, cos = [], []
    for n in wandering_n:
        gb = sub_gram(big, n)
        res = wandering_dim(gb, p.a, svtol)
        wand.append(res.dim)
        if res.vector is None:
            cos.append(0.0)
            continue
        sub = subspace_basis(gb, p.a)
        proj = projection_coeffs(gb, sub.orthonormal, g_target(p, n))
        num = abs(gb.inner(res.vector, proj))
        cos.append(num / np.sqrt(gb.norm_sq(res.vector) * gb.norm_sq(proj)))
    return NotGeneratedReport(list(n_list), d1, d2, bnd, bnd_strict, wand, cos, z1)
