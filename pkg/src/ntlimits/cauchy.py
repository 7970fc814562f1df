"""Truncated, principal-value and maximal Cauchy transforms of composite measures.

``C_eps(nu)(z) = int_{|w - z| > eps} d nu(w) / (w - z)`` and ``C(nu) = lim C_eps``.

Every component has a quadrature route. Atoms, circle and Bergman
components also have closed forms, and ``method="auto"`` uses those:

* circle, ``h = sum c_k zeta^k``: ``sum_{k>=1} c_k z^(k-1)`` inside,
  ``-sum_{k<=0} c_k z^(k-1)`` outside, the average of the two on the circle;
* Bergman: term-by-term from
  ``int w^p conj(w)^q dA(w) / (w - z)``, evaluated by splitting the disk at ``|w| = |z|``.
"""

from dataclasses import dataclass

import numpy as np

from .curves import Arc, pv_on_piece, piece_rule
from .errors import DomainError, PVUndefinedError
from .measure import Atom, BergmanWeight, CircleFourier, LensHarmonic

EPS_MACHINE = np.finfo(float).eps
_ATOM_TOL = 1e-14
_CIRCLE_TOL = 1e-14


@dataclass(frozen=True)
class CauchyValue:
    value: complex
    method: str
    est_error: float

    def __post_init__(self):
        if self.est_error < 0:
            raise ValueError("est_error must be nonnegative")


def ray_disk_interval(z, e):
    """Range ``[rho1, rho2]`` (``rho1 >= 0``) with ``z + rho e`` in the unit disk, or None."""
    b = (np.conj(z) * e).real
    disc = b * b - (abs(z) ** 2 - 1.0)
    if disc <= 0.0:
        return None
    sq = np.sqrt(disc)
    r1, r2 = -b - sq, -b + sq
    if r2 <= 0.0:
        return None
    return max(r1, 0.0), r2


# --- closed forms -----------------------------------------------------------------


def _circle_pv_closed(coeffs, z):
    """Vectorized principal value for ``h dm``; returns (value, abs-term-sum)."""
    z = np.asarray(z, dtype=complex)
    rz = np.abs(z)
    inside = np.zeros(z.shape, dtype=complex)
    outside = np.zeros(z.shape, dtype=complex)
    mag_in = np.zeros(z.shape)
    mag_out = np.zeros(z.shape)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k, c in coeffs:
            term = c * z ** (k - 1)
            if k >= 1:
                inside = inside + term
                mag_in = mag_in + np.abs(term)
            else:
                outside = outside - term
                mag_out = mag_out + np.abs(term)
    on = np.abs(rz - 1.0) <= _CIRCLE_TOL
    val = np.where(on, 0.5 * (inside + outside), np.where(rz < 1.0, inside, outside))
    mag = np.where(on, 0.5 * (mag_in + mag_out), np.where(rz < 1.0, mag_in, mag_out))
    return val, mag


def _bergman_monomial_cauchy(p, q, z):
    """``int w^p conj(w)^q dA(w) / (w - z)`` (normalized area), vectorized in ``z``."""
    z = np.asarray(z, dtype=complex)
    rz = np.abs(z)
    inside = rz < 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if p > q:
            val = np.where(inside, z ** (p - q - 1) * (1.0 - rz ** (2 * q + 2)) / (q + 1), 0.0)
        else:
            val = np.where(inside, -(z ** p) * np.conj(z) ** (q + 1), -(z ** (p - q - 1))) / (q + 1)
    return val


def _bergman_closed(comp, z):
    from math import comb

    z = np.asarray(z, dtype=complex)
    a = comp.alpha
    val = np.zeros(z.shape, dtype=complex)
    mag = np.zeros(z.shape)
    for p, q, c in comp.density.terms:
        for i in range(a + 1):
            coef = c * (1 + a) * comb(a, i) * (-1) ** i
            term = coef * _bergman_monomial_cauchy(p + i, q + i, z)
            val = val + term
            mag = mag + np.abs(term)
    return val, mag


def _atom_values(comp, z, eps=None):
    z = np.asarray(z, dtype=complex)
    d = comp.point - z
    with np.errstate(divide="ignore", invalid="ignore"):
        val = comp.weight / d
    if eps is not None:
        val = np.where(np.abs(d) > eps, val, 0.0)
    return val


# --- quadrature routes --------------------------------------------------------------


def _circle_quadrature(comp, z, eps=None, n_mid=16):
    z = complex(z)
    tz = float(np.angle(z))
    arc = Arc(tz - np.pi, tz + np.pi)

    def param_density(u):
        return comp.h(np.exp(1j * u)) / (2.0 * np.pi)

    if eps is None:
        if abs(abs(z) - 1.0) <= _CIRCLE_TOL:
            return pv_on_piece(arc, param_density, tz, n_mid=n_mid, levels=0)
        intervals = None
    else:
        intervals = arc.outside(z, eps)
        if not intervals:
            return 0j
    zeta, w, _ = piece_rule(arc, intervals, n_mid=n_mid, levels=0, z=z)
    return complex(np.sum(w * comp.h(zeta) / (2.0 * np.pi) / (zeta - z)))


def _lens_quadrature(comp, z, eps=None, n_mid=16):
    z = complex(z)
    region = comp.region
    total = 0j
    mag = 0.0
    for idx, piece in enumerate(region.pieces):
        on_arc = idx == 0

        def param_density(u, piece=piece, on_arc=on_arc):
            zeta = piece.point(u)
            return region.density_at_params(u, on_arc) * comp.weight_fn(zeta) * piece.speed(u)

        if eps is None:
            u0 = piece.locate(z, tol=_CIRCLE_TOL)
            if u0 is not None and piece.lo < u0 < piece.hi:
                total += pv_on_piece(piece, param_density, u0, n_mid=n_mid, levels=40)
                continue
            intervals = None
        else:
            intervals = piece.outside(z, eps)
            if not intervals:
                continue
        zeta, w, u = piece_rule(piece, intervals, n_mid=n_mid, levels=40, z=z)
        dens = region.density_at_params(u, on_arc) * comp.weight_fn(zeta)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = w * dens / (zeta - z)
        ok = np.isfinite(vals)
        vals = np.where(ok, vals, 0.0)
        total += complex(np.sum(vals))
        # node roundoff is amplified by 1 / |zeta - z| near the target
        with np.errstate(divide="ignore", invalid="ignore"):
            amp = np.where(ok, np.abs(vals) * (1.0 + 1.0 / np.abs(zeta - z)), 0.0)
        mag += float(np.sum(amp))
    return total, mag


def _bergman_quadrature_fixed(comp, z, eps, n_phi, n_rho):
    z = complex(z)
    rz = abs(z)
    x, wx = np.polynomial.legendre.leggauss(n_rho)
    if rz < 1.0:
        phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
        wphi = np.full(n_phi, 2.0 * np.pi / n_phi)
    else:
        # directions hitting the disk: |phi - arg(-z)| < arcsin(1/|z|); sine map removes sqrt endpoints
        half = np.arcsin(min(1.0, 1.0 / rz))
        s, ws = np.polynomial.legendre.leggauss(n_phi)
        phi = np.angle(-z) + half * np.sin(0.5 * np.pi * s)
        wphi = ws * half * 0.5 * np.pi * np.cos(0.5 * np.pi * s)
    e = np.exp(1j * phi)
    b = (np.conj(z) * e).real
    disc = np.maximum(b * b - (rz * rz - 1.0), 0.0)
    sq = np.sqrt(disc)
    lo = np.maximum(-b - sq, 0.0)
    hi = np.maximum(-b + sq, 0.0)
    if eps:
        lo = np.maximum(lo, eps)
    span = np.maximum(hi - lo, 0.0)
    rho = 0.5 * (hi + lo)[:, None] + 0.5 * span[:, None] * x[None, :]
    w = z + rho * e[:, None]
    f = comp.density(w) * (1 + comp.alpha) * (1.0 - np.abs(w) ** 2) ** comp.alpha
    # dA = rho d rho d phi / pi and 1/(w - z) = e^{-i phi} / rho
    inner = np.sum(f * wx[None, :], axis=1) * 0.5 * span * np.conj(e)
    return complex(np.sum(wphi * inner) / np.pi)


def _bergman_quadrature(comp, z, eps=None, tol=1e-13):
    deg = comp.density.degree + 2 * comp.alpha + 2
    n_rho = max(8, deg // 2 + 2)
    n_phi = 64
    prev = _bergman_quadrature_fixed(comp, z, eps, n_phi, n_rho)
    while n_phi < 2 ** 17:
        n_phi *= 2
        cur = _bergman_quadrature_fixed(comp, z, eps, n_phi, n_rho)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    return prev, err


# --- public API -------------------------------------------------------------------------


def _check_atoms(nu, z):
    for comp in nu.components:
        if isinstance(comp, Atom) and comp.weight != 0 and abs(comp.point - z) <= _ATOM_TOL:
            raise PVUndefinedError(f"principal value undefined at atom {comp.point}")


def cauchy_pv(nu, z, method="auto"):
    """Principal-value Cauchy transform ``C(nu)(z)`` as a :class:`CauchyValue`.

    ``method`` is ``"auto"`` (closed forms where available) or ``"quadrature"``
    (every continuous component integrated numerically).
    """
    z = complex(z)
    _check_atoms(nu, z)
    return _evaluate(nu, z, None, method)


def cauchy_eps(nu, z, eps, method="auto"):
    """Truncated transform ``C_eps(nu)(z)`` over ``{|w - z| > eps}``."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    return _evaluate(nu, complex(z), float(eps), method)


def _evaluate(nu, z, eps, method):
    if method not in ("auto", "quadrature", "closed_form"):
        raise DomainError(f"unknown method {method!r}")
    total = 0j
    err = 0.0
    closed = True
    for comp in nu.components:
        if isinstance(comp, Atom):
            v = complex(_atom_values(comp, z, eps))
            total += v
            err += EPS_MACHINE * abs(v)
        elif isinstance(comp, CircleFourier):
            v, e, c = _circle_value(comp, z, eps, method)
            total, err, closed = total + v, err + e, closed and c
        elif isinstance(comp, BergmanWeight):
            if method != "quadrature" and eps is None or (eps is not None and method != "quadrature"
                                                          and _no_area_exclusion(z, eps)):
                v, mag = _bergman_closed(comp, z)
                total += complex(v)
                err += 4 * EPS_MACHINE * float(mag)
            else:
                v, e = _bergman_quadrature(comp, z, eps)
                total, err, closed = total + v, err + e, False
        elif isinstance(comp, LensHarmonic):
            v, _ = _lens_quadrature(comp, z, eps)
            v2, mag = _lens_quadrature(comp, z, eps, n_mid=32)
            total, err, closed = total + v2, err + abs(v2 - v) + 4 * EPS_MACHINE * mag, False
    if method == "closed_form" and not closed:
        raise DomainError("no closed form available for this measure")
    return CauchyValue(complex(total), "closed_form" if closed else "quadrature", float(err))


def _no_area_exclusion(z, eps):
    """True when the disk ``|w - z| <= eps`` misses the open unit disk."""
    return eps <= abs(z) - 1.0


def _circle_value(comp, z, eps, method):
    rz = abs(z)
    dist = abs(rz - 1.0)
    if method == "quadrature":
        v1 = _circle_quadrature(comp, z, eps)
        v2 = _circle_quadrature(comp, z, eps, n_mid=32)
        return v2, abs(v2 - v1), False
    if eps is None or eps <= dist and dist > _CIRCLE_TOL:
        v, mag = _circle_pv_closed(comp.coeffs, z)
        return complex(v), 4 * EPS_MACHINE * float(mag), True
    if rz >= 0.5:
        return _circle_truncated_closed(comp.coeffs, z, eps)
    v1 = _circle_quadrature(comp, z, eps)
    v2 = _circle_quadrature(comp, z, eps, n_mid=32)
    return v2, abs(v2 - v1), False


def _arc_monomial(i, t1, t2):
    """``int_{t1}^{t2} e^{i k t} dt / (2 pi)``."""
    if i == 0:
        return (t2 - t1) / (2.0 * np.pi)
    return (np.exp(1j * i * t2) - np.exp(1j * i * t1)) / (2j * np.pi * i)


def _arc_kernel(z, t1, t2):
    """``int_{t1}^{t2} dt / (2 pi (e^{it} - z))`` for ``z != 0`` off the arc."""
    u1, u2 = np.exp(1j * t1), np.exp(1j * t2)
    sweep = np.angle((u2 - z) / (u1 - z))
    if abs(z) < 1.0 - _CIRCLE_TOL and sweep < 0:
        sweep += 2.0 * np.pi
    log_ratio = np.log(abs(u2 - z)) - np.log(abs(u1 - z))
    return (log_ratio + 1j * sweep - 1j * (t2 - t1)) / (2j * np.pi * z)


def _circle_truncated_closed(coeffs, z, eps):
    """Exact ``C_eps`` of ``h dm`` via Laurent division ``zeta^k/(zeta - z) = Q_k + z^k/(zeta - z)``."""
    arc = Arc(-np.pi, np.pi)
    intervals = arc.outside(z, eps)
    total = 0j
    mag = 0.0
    for t1, t2 in intervals:
        kern = _arc_kernel(z, t1, t2)
        for k, c in coeffs:
            if k >= 1:
                q = sum(z ** (k - 1 - i) * _arc_monomial(i, t1, t2) for i in range(k))
            elif k == 0:
                q = 0j
            else:
                n = -k
                q = -sum(z ** (-(n + 1 - i)) * _arc_monomial(-i, t1, t2) for i in range(1, n + 1))
            term = c * (q + z ** k * kern)
            total += term
            mag += abs(c) * (abs(q) + abs(z) ** k * abs(kern))
    return complex(total), 16 * EPS_MACHINE * mag, True


def cauchy_pv_array(nu, zs):
    """Vectorized principal values at many points (closed forms; loops only for lens parts)."""
    zs = np.asarray(zs, dtype=complex)
    out = np.zeros(zs.shape, dtype=complex)
    for z in zs.ravel():
        _check_atoms(nu, z)
    for comp in nu.components:
        if isinstance(comp, Atom):
            out = out + _atom_values(comp, zs)
        elif isinstance(comp, CircleFourier):
            out = out + _circle_pv_closed(comp.coeffs, zs)[0]
        elif isinstance(comp, BergmanWeight):
            out = out + _bergman_closed(comp, zs)[0]
        else:
            flat = np.array([_lens_quadrature(comp, z)[0] for z in zs.ravel()])
            out = out + flat.reshape(zs.shape)
    return out


def cauchy_max(nu, z, eps_grid):
    """``max |C_eps(nu)(z)|`` over a positive decreasing grid (a lower bound for ``C_*``)."""
    grid = np.asarray(eps_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
        raise DomainError("eps_grid must be nonempty, positive and strictly decreasing")
    return max(abs(cauchy_eps(nu, z, e).value) for e in grid)
