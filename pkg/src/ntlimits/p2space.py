"""Finite-degree P^2(mu) machinery on the monomial basis.

Polynomials are coefficient vectors ``c`` (``p = sum c_k z^k``) and
``||p||^2 = c^H G c`` with ``G[j, k] = <z^k, z^j>``. The Gram matrix is
factored once by a symmetric eigendecomposition; everything downstream
(kernels, projections, distances) uses the pseudo-inverse restricted to the
numerical range.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure
from .measure import moment_matrix

RANK_RTOL = 1e-12
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class GramBasis:
    mu: object
    n: int
    G: np.ndarray
    eigvals: np.ndarray
    eigvecs: np.ndarray
    rank: int
    rank_tol: float

    @property
    def range_mask(self):
        return self.eigvals > self.rank_tol

    def norm_sq(self, c):
        c = _pad(c, self.n)
        return float(np.real(np.conj(c) @ self.G @ c))

    def inner(self, p, q):
        """``<p, q> = int p conj(q) d mu`` for coefficient vectors."""
        return complex(np.conj(_pad(q, self.n)) @ self.G @ _pad(p, self.n))


def _pad(c, n):
    c = np.asarray(c, dtype=complex).ravel()
    if c.size > n + 1:
        if np.any(c[n + 1:] != 0):
            raise DomainError(f"polynomial degree exceeds Gram degree {n}")
        c = c[: n + 1]
    return np.concatenate([c, np.zeros(n + 1 - c.size, dtype=complex)])


def gram(mu, n, rank_rtol=RANK_RTOL):
    """Moment matrix of degree ``n`` with its self-adjoint factorization."""
    G = moment_matrix(mu, n)
    G = 0.5 * (G + G.conj().T)
    w, V = np.linalg.eigh(G)
    tr = float(np.real(np.trace(G)))
    if w.size and w[0] < -PSD_RTOL * max(tr, 0.0):
        raise NumericalFailure(f"Gram matrix indefinite: min eigenvalue {w[0]:.3e}, trace {tr:.3e}")
    tol = rank_rtol * max(tr, np.finfo(float).tiny)
    return GramBasis(mu, int(n), G, w, V, int(np.count_nonzero(w > tol)), tol)


def _evec(lam, n):
    return np.asarray(lam, dtype=complex)[..., None] ** np.arange(n + 1)


def point_eval_norm(gb, lam):
    """``k_n(lam) = sup |p(lam)| / ||p||`` over ``deg p <= n`` (restricted to the numerical range)."""
    lam = np.asarray(lam, dtype=complex)
    u = np.conj(_evec(lam, gb.n))
    keep = gb.range_mask
    proj = u @ gb.eigvecs[:, keep].conj()
    k2 = np.sum(np.abs(proj) ** 2 / gb.eigvals[keep], axis=-1)
    out = np.sqrt(k2)
    return float(out) if out.ndim == 0 else out


def bpe_classify(mu, lam, n_list, growth_tol=1e-6):
    """Classify ``lam`` from the sequence ``k_n(lam)``, ``n`` in ``n_list``.

    ``bounded``: the last three values agree to ``growth_tol`` (relative).
    ``divergent``: the log-log slope of ``k_n`` against ``n + 1`` over the last
    three values is at least 1/4 (covers ``sqrt(n + 1)`` and geometric growth).
    Otherwise ``undetermined``.
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 3 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError("n_list must be increasing with at least three entries")
    G = gram(mu, n_list[-1])
    ks = []
    for n in n_list:
        sub = _sub_gram(G, n)
        ks.append(point_eval_norm(sub, lam))
    ks = np.array(ks)
    tail = ks[-3:]
    if np.max(tail) - np.min(tail) <= growth_tol * np.max(tail):
        return "bounded", ks
    x = np.log(np.array(n_list[-3:], dtype=float) + 1.0)
    slope = np.polyfit(x, np.log(tail), 1)[0]
    if slope >= 0.25 and np.all(np.diff(tail) > 0):
        return "divergent", ks
    return "undetermined", ks


def _sub_gram(gb, n):
    if n == gb.n:
        return gb
    G = gb.G[: n + 1, : n + 1]
    w, V = np.linalg.eigh(G)
    tol = RANK_RTOL * max(float(np.real(np.trace(G))), np.finfo(float).tiny)
    return GramBasis(gb.mu, n, G, w, V, int(np.count_nonzero(w > tol)), tol)


def sub_gram(gb, n):
    """Leading degree-``n`` block of a Gram basis, refactored."""
    if n > gb.n:
        raise DomainError("requested degree exceeds the Gram degree")
    return _sub_gram(gb, n)


def _orthonormalize(gb, B):
    """Columns ``Q`` spanning ``range(B)`` with ``Q^H G Q = I``; returns (Q, rank)."""
    H = B.conj().T @ gb.G @ B
    H = 0.5 * (H + H.conj().T)
    w, V = np.linalg.eigh(H)
    tol = RANK_RTOL * max(float(np.real(np.trace(H))), np.finfo(float).tiny)
    keep = w > tol
    Q = B @ (V[:, keep] / np.sqrt(w[keep]))
    return Q, int(np.count_nonzero(keep))


def multiplier_columns(h, n):
    """Coefficient columns of ``h z^j`` for every ``j`` with ``deg(h z^j) <= n``."""
    h = np.trim_zeros(np.asarray(h, dtype=complex), "b")
    d = len(h) - 1
    cols = []
    for j in range(n - d + 1):
        c = np.zeros(n + 1, dtype=complex)
        c[j: j + d + 1] = h
        cols.append(c)
    return np.array(cols).T if cols else np.zeros((n + 1, 0), dtype=complex)


@dataclass(frozen=True)
class SubspaceTruncation:
    base: GramBasis
    a: complex
    basis_coeffs: np.ndarray
    orthonormal: np.ndarray
    rank: int

    @property
    def dim(self):
        return self.rank

    def values_at_a(self):
        return _evec(self.a, self.base.n) @ self.basis_coeffs


def subspace_basis(gb, a):
    """``M_n = span{(z - a) z^j : j < n}``, orthonormalized in ``L^2(mu)``."""
    a = complex(a)
    if abs(a) >= 1.0:
        warnings.warn(f"zero location |a| = {abs(a):.3g} is not in the open disk", stacklevel=2)
    B = multiplier_columns([-a, 1.0], gb.n)
    Q, rank = _orthonormalize(gb, B)
    return SubspaceTruncation(gb, a, B, Q, rank)


@dataclass(frozen=True)
class WanderingResult:
    dim: int
    singular_values: np.ndarray
    vector: np.ndarray = None


def wandering_dim(gb, a, svtol=1e-8):
    """Dimension of ``M_n ⊖ z M_{n-1}`` from the spectrum of ``I - P_{zM}`` on ``M_n``.

    The singular values returned are those of the complement projection
    restricted to ``M_n``; ``dim`` counts the ones above ``svtol``. When the
    dimension is one the wandering vector's coefficients are returned,
    normalized in ``L^2(mu)``.
    """
    sub = subspace_basis(gb, a)
    QM = sub.orthonormal
    QZ, _ = _orthonormalize(gb, sub.basis_coeffs[:, 1:]) if gb.n > 1 else (np.zeros((gb.n + 1, 0)), 0)
    X = QM.conj().T @ gb.G @ QZ
    P = np.eye(QM.shape[1]) - X @ X.conj().T
    P = 0.5 * (P + P.conj().T)
    w, V = np.linalg.eigh(P)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    sv = np.clip(w, 0.0, None)
    dim = int(np.count_nonzero(sv > svtol))
    vec = QM @ V[:, 0] if dim == 1 else None
    return WanderingResult(dim, sv, vec)


@dataclass(frozen=True)
class InnerProductTarget:
    """A vector of ``L^2(mu)`` known through ``t_k = <z^k, f>`` (k <= n) and ``||f||^2``."""

    t: np.ndarray
    norm_sq: float


def distance_to_cyclic(gb, f, h, cond_warn=1e12):
    """``L^2(mu)`` distance from ``f`` to ``span{h z^j : deg(h z^j) <= n}``.

    ``f`` is a coefficient vector or an :class:`InnerProductTarget`.
    """
    C = multiplier_columns(h, gb.n)
    H = C.conj().T @ gb.G @ C
    if H.size:
        ev = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
        if ev[0] <= 0 or ev[-1] / ev[0] > cond_warn:
            warnings.warn(f"normal equations ill-conditioned (cond ~ {ev[-1] / max(ev[0], 1e-300):.2e}); "
                          "using the pseudo-inverse", stacklevel=2)
    Q, _ = _orthonormalize(gb, C)
    if isinstance(f, InnerProductTarget):
        b = np.conj(np.asarray(f.t[: gb.n + 1], dtype=complex))
        coef = Q.conj().T @ b
        d2 = f.norm_sq - float(np.sum(np.abs(coef) ** 2))
        return float(np.sqrt(max(d2, 0.0)))
    fc = _pad(f, gb.n)
    resid = fc - Q @ (Q.conj().T @ (gb.G @ fc))
    return float(np.sqrt(max(np.real(np.conj(resid) @ gb.G @ resid), 0.0)))


def projection_coeffs(gb, Q, f):
    """Coefficients of the orthogonal projection of ``f`` onto ``range(Q)`` (``Q`` G-orthonormal)."""
    if isinstance(f, InnerProductTarget):
        b = np.conj(np.asarray(f.t[: gb.n + 1], dtype=complex))
    else:
        b = gb.G @ _pad(f, gb.n)
    return Q @ (Q.conj().T @ b)
