"""Boundary behaviour of Cauchy transforms: jump scans, nontangential limits and identity checks.

At a boundary point ``zeta`` with circle density ``h(zeta)``, the one-sided
limits of ``C(nu)`` through ``S_r(zeta)`` (inside) and ``T_r(zeta)`` (outside)
are ``C(nu)(zeta) +- h(zeta) conj(zeta) / 2``. Away from a small exceptional set
this holds for arbitrary finite measures; the scan samples both regions, flags
the points that deviate, and reports a covering proxy for the flagged set.
"""

from dataclasses import dataclass, field

import numpy as np

from .cauchy import cauchy_pv, cauchy_pv_array
from .errors import DomainError, InsufficientDataError, PreconditionError
from .geometry import (ReflectedStolz, StolzRegion, approach_path, exceptional_cover_estimate,
                       reflect_tangent, _check_unimodular)
from .measure import CircleFourier, LensHarmonic, circle_density, measure, multiply_density, Poly2

DEFAULT_SHELLS = 5
DEFAULT_ANGLES = 9


@dataclass
class DeltaRecord:
    delta: float
    inner_fit: complex
    outer_fit: complex
    pv_at_zeta: complex
    predicted_inner: complex
    predicted_outer: complex
    agree_fraction: float
    flagged_points: list = field(default_factory=list)
    cover_proxy: float = 0.0
    n_samples: int = 0

    @property
    def jump(self):
        return self.inner_fit - self.outer_fit


@dataclass
class JumpScanReport:
    zeta: complex
    r: float
    tol: float
    h_at_zeta: complex
    delta_list: list
    records: list

    def passes(self, factor=10.0):
        """Both fitted limits within ``factor * tol`` of the predicted ones at every delta."""
        lim = factor * self.tol
        return all(abs(rec.inner_fit - rec.predicted_inner) <= lim and
                   abs(rec.outer_fit - rec.predicted_outer) <= lim for rec in self.records)


def default_tol(nu):
    return 1e-4 if any(isinstance(c, LensHarmonic) for c in nu.components) else 1e-6


def _extrapolate(s, v):
    """Polynomial (Richardson) extrapolation of ``v(s)`` to ``s = 0``."""
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=complex)
    scale = s.max()
    V = np.vander(s / scale, len(s), increasing=True)
    coef = np.linalg.solve(V, v)
    return complex(coef[0])


def _evaluate(nu, pts):
    try:
        return cauchy_pv_array(nu, pts)
    except Exception:
        out = np.empty(pts.shape, dtype=complex)
        for i, p in enumerate(pts.ravel()):
            try:
                out.flat[i] = cauchy_pv(nu, p).value
            except Exception:
                out.flat[i] = np.nan
        return out


def _side_scan(values, shells, limit, tol):
    """Flag points, then extrapolate each unflagged ray. Returns (fit, flagged mask)."""
    K = len(shells)
    # Lipschitz scale from the two innermost shells (smooth part of the transform)
    slope = np.abs(values[K - 1] - values[K - 2]) / (shells[K - 2] - shells[K - 1])
    slope = np.where(np.isfinite(slope), slope, 0.0)
    kappa = 2.0 * float(np.median(slope)) if slope.size else 0.0
    dev = np.abs(values - limit)
    thresh = tol + kappa * shells[:, None]
    flagged = ~np.isfinite(values) | (dev > thresh)
    fits = []
    for j in range(values.shape[1]):
        ok = ~flagged[:, j]
        if np.count_nonzero(ok) >= 3:
            fits.append(_extrapolate(shells[ok], values[ok, j]))
    if not fits:
        return complex(np.nan), flagged
    return complex(np.mean(fits)), flagged


def plemelj_scan(nu, zeta, r, delta_list, tol=None, n_shells=DEFAULT_SHELLS, n_angles=DEFAULT_ANGLES):
    """Sample ``C(nu)`` in ``S_r(zeta, delta)`` and ``T_r(zeta, delta)`` and fit both one-sided limits.

    For each ``delta`` the samples sit on shells ``|lam - zeta| = delta 2^-(i+1)``
    along rays within ``0.9 arcsin r`` of the inward normal (and their mirror
    images). A sample is flagged when it deviates from the predicted limit by
    more than ``tol + kappa |lam - zeta|``, with ``kappa`` twice the median
    slope between the two innermost shells. Fits extrapolate every unflagged
    ray to the boundary and average.
    """
    zeta = _check_unimodular(zeta)
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    if n_shells < 3:
        raise DomainError("at least three shells are required")
    if tol is None:
        tol = default_tol(nu)
    pv = cauchy_pv(nu, zeta).value
    h = circle_density(nu, zeta)
    half_jump = 0.5 * h * np.conj(zeta)
    pred_in, pred_out = complex(pv + half_jump), complex(pv - half_jump)
    psi = np.linspace(-0.9, 0.9, n_angles) * np.arcsin(r)
    records = []
    for delta in delta_list:
        delta = float(delta)
        S = StolzRegion(zeta, r, min(delta, 1.0))
        T = ReflectedStolz(zeta, r, min(delta, 1.0))
        shells = delta * 2.0 ** -(np.arange(n_shells) + 1.0)
        inner = zeta * (1.0 - shells[:, None] * np.exp(1j * psi)[None, :])
        outer = reflect_tangent(zeta, inner)
        keep = np.all(S.contains(inner), axis=0) & np.all(T.contains(outer), axis=0)
        inner, outer = inner[:, keep], outer[:, keep]
        v_in = _evaluate(nu, inner)
        v_out = _evaluate(nu, outer)
        fit_in, fl_in = _side_scan(v_in, shells, pred_in, tol)
        fit_out, fl_out = _side_scan(v_out, shells, pred_out, tol)
        flagged = list(inner[fl_in]) + list(outer[fl_out])
        n = inner.size + outer.size
        proxy = exceptional_cover_estimate(flagged, delta / (4.0 * n_angles)) if flagged else 0.0
        records.append(DeltaRecord(delta, fit_in, fit_out, pv, pred_in, pred_out,
                                   1.0 - len(flagged) / n if n else 0.0,
                                   [complex(p) for p in flagged], proxy, n))
    return JumpScanReport(zeta, float(r), float(tol), complex(h), [float(d) for d in delta_list], records)


def nontangential_limit_estimate(samples, S, flagged=(), degree=2):
    """Limit of sampled values as ``lam -> S.zeta`` inside ``S``, ignoring flagged points.

    Samples are grouped into dyadic shells in ``|lam - zeta|``; each shell
    contributes the mean value and mean offset ``lam - zeta`` of its unflagged
    points, and a low-degree polynomial in the offset (weighted toward the
    inner shells) is extrapolated to 0.
    """
    if not samples:
        raise InsufficientDataError("no samples")
    lam = np.array([complex(s[0]) for s in samples])
    val = np.array([complex(s[1]) for s in samples])
    if not np.all(S.contains(lam)):
        raise PreconditionError("samples must lie in the Stolz region")
    flagged = np.array([complex(f) for f in flagged])
    bad = np.zeros(lam.shape, dtype=bool)
    for f in flagged:
        bad |= np.abs(lam - f) <= 1e-15 * max(1.0, abs(f))
    off = lam - S.zeta
    dist = np.abs(off)
    if np.any(dist == 0):
        raise PreconditionError("samples must not coincide with zeta")
    shell = np.floor(np.log2(dist.max() / dist)).astype(int)
    means_off, means_val = [], []
    for k in np.unique(shell):
        sel = shell == k
        good = sel & ~bad
        if not np.any(good):
            raise InsufficientDataError(f"every sample in shell {k} is flagged")
        means_off.append(off[good].mean())
        means_val.append(val[good].mean())
    if len(means_off) < 2:
        raise InsufficientDataError("need samples in at least two shells to extrapolate")
    x = np.array(means_off)
    y = np.array(means_val)
    deg = min(degree, len(x) - 1)
    scale = np.abs(x).max()
    # weight shells by 1/|offset| so the innermost ones control the intercept
    wt = 1.0 / (np.abs(x) / scale)
    V = np.vander(x / scale, deg + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V * wt[:, None], y * wt, rcond=None)
    return complex(coef[0])


def _disk_grid(n=100, rmax=0.95):
    k = int(round(np.sqrt(n)))
    radii = np.linspace(rmax / k, rmax, k)
    ang = 2.0 * np.pi * np.arange(k) / k
    return (radii[:, None] * np.exp(1j * (ang[None, :] + 0.5 * radii[:, None]))).ravel()


def hardy_multiplication_check(f, g, zeta, r, n_grid=100, n_path=30):
    """Check ``f C(gm) = C(fgm)`` on a disk grid and the boundary values at ``zeta``.

    ``f`` holds analytic coefficients; ``g`` is a :class:`CircleFourier`
    annihilator (no coefficients at ``k <= 0``). Residuals:

    * ``identity``: max over the grid of ``|f C(gm) - C(fgm)|``;
    * ``pv_g``, ``pv_fg``: ``C(gm)(zeta) = g conj(zeta) / 2`` and ``C(fgm)(zeta) = f g conj(zeta) / 2``;
    * ``nt_limit``: nontangential limit of ``f C(gm)`` against ``f(zeta) g(zeta) conj(zeta)``.
    """
    if not isinstance(g, CircleFourier):
        g = CircleFourier.from_dict(dict(g))
    if any(k <= 0 and c != 0 for k, c in g.coeffs):
        raise PreconditionError("g must have no Fourier coefficients at k <= 0")
    zeta = _check_unimodular(zeta)
    fpoly = Poly2.analytic(list(f))
    gm = measure(g)
    fgm = multiply_density(gm, fpoly)
    grid = _disk_grid(n_grid)
    lhs = fpoly(grid) * cauchy_pv_array(gm, grid)
    rhs = cauchy_pv_array(fgm, grid)
    f0 = complex(fpoly(zeta))
    g0 = complex(g.h(zeta))
    target_g = 0.5 * g0 * np.conj(zeta)
    res = {
        "identity": float(np.max(np.abs(lhs - rhs))),
        "pv_g": abs(cauchy_pv(gm, zeta).value - target_g),
        "pv_fg": abs(cauchy_pv(fgm, zeta).value - f0 * target_g),
    }
    S = StolzRegion(zeta, r)
    path = approach_path(S, 0.5 * r, n_path)
    vals = fpoly(path) * cauchy_pv_array(gm, path)
    limit = nontangential_limit_estimate(list(zip(path, vals)), S)
    res["nt_limit"] = abs(limit - f0 * g0 * np.conj(zeta))
    res["nt_limit_value"] = limit
    return res


def poisson_decomposition_check(sigma_density, zeta, r_list):
    """Split ``(z sigma)^(r zeta)`` into Poisson and remainder terms for ``mu = m`` (``h = 1``).

    ``(z sigma)^`` is the Cauchy transform of ``z sigma dm``. Returns per-r
    closed-form values, the Poisson term (by quadrature), the two interior terms
    (both zero since ``m`` has no mass in the disk), the identity residual and
    the distance of the Poisson term from ``sigma(zeta)``.
    """
    if not isinstance(sigma_density, CircleFourier):
        sigma_density = CircleFourier.from_dict(dict(sigma_density))
    if any(k < 0 and c != 0 for k, c in sigma_density.coeffs):
        raise PreconditionError("z sigma must annihilate polynomials (no coefficients at k < 0)")
    zeta = _check_unimodular(zeta)
    zsig = multiply_density(measure(sigma_density), Poly2.analytic([0, 1]))
    target = complex(sigma_density.h(zeta))
    rows = []
    for r in r_list:
        r = float(r)
        if not 0.0 < r < 1.0:
            raise DomainError("r must lie in (0, 1)")
        lam = r * zeta
        closed = complex(cauchy_pv(zsig, lam).value)
        n = int(2 ** np.ceil(np.log2(max(256, 60.0 / (1.0 - r)))))
        t = 2.0 * np.pi * np.arange(n) / n
        w = np.exp(1j * t)
        kern = (1.0 - r * r) / np.abs(1.0 - r * np.conj(zeta) * w) ** 2
        poisson = complex(np.mean(kern * sigma_density.h(w)))
        interior_main = 0.0
        interior_rest = 0.0
        total = poisson + interior_main + interior_rest
        rows.append({"r": r, "closed_form": closed, "poisson_term": poisson,
                     "interior_poisson": interior_main, "interior_remainder": interior_rest,
                     "identity_residual": abs(closed - total), "limit_error": abs(poisson - target)})
    return {"sigma_h_at_zeta": target, "rows": rows,
            "max_identity_residual": max((row["identity_residual"] for row in rows), default=0.0)}


def _graded_edges(a, b, size_a, size_b, mid=2):
    """Panel edges on ``[a, b]`` halving toward each end down to the given sizes."""
    h = (b - a) / (mid + 2)
    left = [a] + [a + h * 2.0 ** -k for k in range(int(np.ceil(np.log2(max(h / size_a, 1.0)))), 0, -1)]
    right = [b - h * 2.0 ** -k for k in range(1, int(np.ceil(np.log2(max(h / size_b, 1.0)))) + 1)][::-1]
    return np.array(left + list(np.linspace(a + h, b - h, mid + 1)) + right + [b])


def _gauss_on_edges(edges, ng):
    x, wx = np.polynomial.legendre.leggauss(ng)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    return ((0.5 * (lo + hi))[:, None] + half[:, None] * x[None, :]).ravel(), (half[:, None] * wx[None, :]).ravel()


def _angular_rule(roots, r_lo, r_hi, ng):
    """Angular nodes for radii in ``[r_lo, r_hi]``, graded toward the zero angles."""
    if roots.size == 0:
        t = 2.0 * np.pi * np.arange(64) / 64
        return t, np.full(64, 2.0 * np.pi / 64)
    mods = np.abs(roots)
    gap = np.maximum(np.maximum(mods - r_hi, r_lo - mods), 0.002 * (r_hi - r_lo))
    size = np.maximum(gap / max(r_hi, 1e-300), 1e-15)
    ang = np.mod(np.angle(roots), 2.0 * np.pi)
    order = np.argsort(ang)
    ang, size = ang[order], size[order]
    breaks = np.concatenate([ang, [ang[0] + 2.0 * np.pi]])
    sizes = np.concatenate([size, [size[0]]])
    edges = [_graded_edges(a, b, sa, sb, mid=1) for a, b, sa, sb in
             zip(breaks[:-1], breaks[1:], sizes[:-1], sizes[1:]) if b > a]
    edges = np.unique(np.concatenate(edges))
    return _gauss_on_edges(edges, ng)


def _disk_abs_mean(coeffs, R=1.0, n_gauss=12, levels=22):
    """``(pi R^2)^-1 int_{B(0, R)} |p| dA`` and an error estimate.

    ``|p|`` has conical points at the zeros of ``p``, so the angular integral
    ``J(r)`` has ``x log x`` kinks at the zero moduli. Radial panels are graded
    toward those moduli; on each radial panel the angular rule is graded toward
    the zero angles down to the panel's distance from them. The error estimate
    compares against a finer run.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(coeffs)
    roots = np.roots(coeffs[: nz[-1] + 1][::-1]) if nz.size and nz[-1] > 0 else np.array([])
    mods = np.abs(roots)
    cuts = np.unique(np.concatenate([[0.0], mods[mods < R], [R]]))
    poly = coeffs[::-1]

    def run(ng, lev):
        fine = 2.0 ** -lev * R
        edges = np.unique(np.concatenate([
            _graded_edges(a, b, R if a == 0.0 else fine, R if b == R else fine)
            for a, b in zip(cuts[:-1], cuts[1:])]))
        x, wx = np.polynomial.legendre.leggauss(ng)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            rr = 0.5 * (a + b) + 0.5 * (b - a) * x
            t, wt = _angular_rule(roots, a, b, ng)
            vals = np.abs(np.polyval(poly, rr[:, None] * np.exp(1j * t)[None, :]))
            total += 0.5 * (b - a) * float(np.sum(wx * rr * (vals @ wt)))
        return total / (np.pi * R * R)

    base = run(n_gauss, levels)
    fine = run(n_gauss + 4, levels + 4)
    return fine, abs(fine - base)


def area_mean_bound_check(n_poly=100, max_degree=10, R=1.0, n_lambda=50, seed=0, constant=4.0):
    """``|p(lam)| <= constant * (pi R^2)^-1 int_{B(0,R)} |p|`` on ``B(0, R/2)`` for random polynomials."""
    rng = np.random.default_rng(seed)
    k = np.arange(n_lambda)
    lam = 0.5 * R * np.sqrt((k + 0.5) / n_lambda) * np.exp(2j * np.pi * k * 0.6180339887498949)
    worst_ratio = 0.0
    worst_err = 0.0
    failures = 0
    for _ in range(n_poly):
        deg = int(rng.integers(0, max_degree + 1))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        mean, err = _disk_abs_mean(c, R)
        peak = float(np.max(np.abs(np.polyval(c[::-1], lam))))
        ratio = peak / mean
        worst_ratio = max(worst_ratio, ratio)
        worst_err = max(worst_err, err)
        if peak > constant * mean:
            failures += 1
    return {"n_poly": n_poly, "max_ratio": worst_ratio, "constant": constant,
            "max_quadrature_error": worst_err, "failures": failures}
