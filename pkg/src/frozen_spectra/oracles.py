"""Independent reference computations: adaptive quadrature and a Galerkin truncation."""

from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate

from .funcrep import PI, PiecewisePoly


def _pieces(f, c, d):
    if isinstance(f, PiecewisePoly):
        inner = [t for t in f.breakpoints if c < t < d]
        return [c, *inner, d]
    return list(np.linspace(c, d, 9))


def quad(func, c, d, breaks=()):
    """Complex integral by scipy's adaptive Gauss-Kronrod on each sub-interval."""
    pts = sorted({c, d, *[t for t in breaks if c < t < d]})
    total = 0j
    for lo, hi in zip(pts[:-1], pts[1:]):
        with warnings.catch_warnings():
            # quad flags roundoff once the requested 1e-14 floor is reached
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            re = integrate.quad(lambda t: np.real(func(t)), lo, hi, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
            im = integrate.quad(lambda t: np.imag(func(t)), lo, hi, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
        total += re + 1j * im
    return total


def moment_quad(f, rho, kind, c, d, shift_mode="t"):
    arg = {"t": lambda t: t, "d-t": lambda t: d - t, "t-c": lambda t: t - c}[shift_mode]
    k = np.sin if kind == "sin" else np.cos
    return quad(lambda t: k(rho * arg(t)) * f(t), c, d, _pieces(f, c, d))


def _basis(j, M):
    n = np.arange(1, M + 1)
    mu = n - 0.5 * j
    if j == 0:
        return mu, lambda x: np.sqrt(2 / PI) * np.sin(mu * x), "sine"
    return mu, lambda x: np.sqrt(2 / PI) * np.cos(mu * x), "half_cosine"


def _nodes(f, width=PI / 2000, order=10):
    """Composite Gauss-Legendre rule aligned with the breakpoints of ``f``."""
    edges = f.breakpoints if isinstance(f, PiecewisePoly) else np.array([0.0, PI])
    x, w = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        k = max(1, int(np.ceil((hi - lo) / width)))
        sub = np.linspace(lo, hi, k + 1)
        mid, half = 0.5 * (sub[:-1] + sub[1:]), 0.5 * np.diff(sub)
        xs.append((mid[:, None] + half[:, None] * x).ravel())
        ws.append((half[:, None] * w).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def _coeffs(f, j, M):
    """Orthonormal coefficients <f, e_m> for m = 1..M by Gauss-Legendre quadrature."""
    _, e, _ = _basis(j, M)
    t, w = _nodes(f)
    # evaluate inside each piece so jumps are never sampled
    return np.sum(e(t[:, None]) * (w * f(t))[:, None], axis=0)


def galerkin_eigenvalues(prob, j, M=400, k=10):
    """Smallest-real-part eigenvalues of the M-mode truncation.

    In the orthonormal eigenbasis of the unperturbed problem the operator is
    ``diag(mu_n^2) + p_hat e(a)^T + q_hat e(b)^T``.
    """
    mu, e, _ = _basis(j, M)
    L = np.diag(mu**2).astype(complex)
    L += np.outer(_coeffs(prob.p, j, M), e(prob.a))
    L += np.outer(_coeffs(prob.q, j, M), e(prob.b))
    w = np.linalg.eigvals(L)
    return w[np.argsort(w.real)][:k]
