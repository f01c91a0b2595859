"""Extended-precision evaluation of the 3x3 characteristic determinant.

Entries are computed from exponential antiderivatives in mpmath, independently
of the double-precision kernels in :mod:`funcrep`; the working precision grows
with ``|Im rho|`` so the cofactor expansion's cancellation is absorbed.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath as mp
import numpy as np

from .funcrep import PiecewisePoly, TrigSeries


def _exp_poly_integral(coeffs, origin, lo, hi, omega):
    """``int_lo^hi sum_i c_i (t - origin)^i exp(i omega t) dt``."""
    I = mp.mpc(0, 1)
    v0, v1 = mp.mpf(lo) - origin, mp.mpf(hi) - origin
    total = mp.mpc(0)
    if abs(omega) * max(abs(v0), abs(v1)) < 0.05:
        # power series of exp(i omega v); the antiderivative loses digits here
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            acc = mp.mpc(0)
            term = mp.mpc(1)
            k = 0
            while True:
                contrib = term * (v1 ** (i + k + 1) - v0 ** (i + k + 1)) / (i + k + 1)
                acc += contrib
                if k > 8 and abs(contrib) < mp.mpf(10) ** (-mp.mp.dps - 5) * (1 + abs(acc)):
                    break
                k += 1
                term *= I * omega / k
            total += c * acc
        return total * mp.exp(I * omega * origin)
    iw = I * omega
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        falling = [1, i, i * (i - 1), i * (i - 1) * (i - 2)]

        def F(v):
            s = mp.mpc(0)
            for m in range(i + 1):
                s += (-1) ** m * falling[m] * v ** (i - m) / iw ** (m + 1)
            return mp.exp(iw * v) * s
        total += c * (F(v1) - F(v0))
    return total * mp.exp(iw * origin)


def _exp_integral(f, lo, hi, omega):
    """``int_lo^hi f(t) exp(i omega t) dt`` for either representation."""
    if isinstance(f, PiecewisePoly):
        total = mp.mpc(0)
        bp = f.breakpoints
        for k in range(f.n_pieces):
            l, r = max(bp[k], lo), min(bp[k + 1], hi)
            if r <= l or not np.any(f.coeffs[k]):
                continue
            cf = [mp.mpc(complex(z)) for z in f.coeffs[k]]
            total += _exp_poly_integral(cf, mp.mpf(bp[k]), l, r, omega)
        return total
    assert isinstance(f, TrigSeries)
    total = mp.mpc(0)
    I = mp.mpc(0, 1)
    for mu, c in zip(f.frequencies, f.coeffs):
        if c == 0:
            continue
        c = mp.mpc(complex(c))
        mu = mp.mpf(mu)
        gp = _exp_poly_integral([1], 0, lo, hi, omega + mu)
        gm = _exp_poly_integral([1], 0, lo, hi, omega - mu)
        if f.is_sine:
            total += c * (gp - gm) / (2 * I)
        else:
            total += c * (gp + gm) / 2
    return total


def _prefix_exp_integrals(f, omega, xs):
    """``int_0^x f(t) exp(i omega t) dt`` for each x in increasing ``xs``."""
    out, acc, lo = [], mp.mpc(0), 0.0
    for x in xs:
        acc += _exp_integral(f, lo, x, omega)
        out.append(acc)
        lo = x
    return out


def _volterra_entries(f, rho, xs):
    """``int_0^x sin(rho (x - t))/rho f(t) dt`` for each x in ``xs``."""
    if rho == 0:
        # the O(rho^2) kernel error at this frequency is below working precision
        rho = mp.mpf(10) ** (-(mp.mp.dps // 2 + 2))
    I = mp.mpc(0, 1)
    ep = _prefix_exp_integrals(f, -rho, xs)
    em = _prefix_exp_integrals(f, rho, xs)
    return [(mp.exp(I * rho * x) * e1 - mp.exp(-I * rho * x) * e2) / (2 * I * rho)
            for x, e1, e2 in zip(xs, ep, em)]


@lru_cache(maxsize=4096)
def determinants(lam: complex, a: float, b: float, p, q, dps: int | None = None) -> tuple:
    """Cofactor expansions for ``j = 0`` and ``j = 1`` in mpmath."""
    rho_d = np.sqrt(complex(lam))
    tau = abs(rho_d.imag)
    if dps is None:
        dps = 30 + int(np.ceil(tau * (a + b) / 2.3))
    with mp.workdps(dps):
        rho = mp.sqrt(mp.mpc(complex(lam)))
        xs = [mp.mpf(a), mp.mpf(b), mp.mpf(np.pi)]
        pa, pb, ppi = _volterra_entries(p, rho, xs)
        qa, qb, qpi = _volterra_entries(q, rho, xs)
        m12, m13 = ppi, qpi
        m22, m23 = pa - 1, qa
        m32, m33 = pb, qb - 1
        out = []
        for j in (0, 1):
            if j == 0:
                m11, m21, m31 = (mp.sin(rho * z) / rho if rho != 0 else z for z in (xs[2], xs[0], xs[1]))
            else:
                m11, m21, m31 = (mp.cos(rho * z) for z in (xs[2], xs[0], xs[1]))
            det = (m11 * (m22 * m33 - m23 * m32)
                   - m12 * (m21 * m33 - m23 * m31)
                   + m13 * (m21 * m32 - m22 * m31))
            out.append(complex(det))
        return tuple(out)


def determinant(j: int, lam: complex, a: float, b: float, p, q, dps: int | None = None) -> complex:
    """Cofactor expansion of the characteristic determinant in mpmath."""
    return determinants(lam, a, b, p, q, dps)[j]
