"""Coefficient representations on [0, pi] and closed-form oscillatory moments.

Two representations are supported, both zero-extended to the real line:

* :class:`PiecewisePoly` -- piecewise complex polynomials of degree <= 3, stored
  per piece in the local variable ``u = t - t_k``;
* :class:`TrigSeries` -- a finite series in one of the bases ``sin(nt)``,
  ``cos(nt)``, ``sin((n-1/2)t)``, ``cos((n-1/2)t)``.

Every integral of the form ``int_c^d K(rho * x(t)) f(t) dt`` with
``K in {sin, cos, sin(.)/rho}`` and ``x`` affine with slope +-1 is evaluated
in closed form.  Kernels are expanded from the endpoint where ``|x|`` is
smallest so that complex ``rho`` never produces exponential cancellation, and
all kernels can optionally be returned multiplied by ``exp(-|Im rho| * L)``
with ``L = max |x|`` over the interval, which keeps contour evaluations at
large ``|lambda|`` finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Union

import numpy as np

PI = np.pi
MAX_DEGREE = 3
# Pieces with |rho| * length below this use the power series branch.
SERIES_THRESHOLD = 1.0
# the 14-term series (degree 28 in nu*h) is still exact to rounding up to here
SERIES_LIMIT = 3.0
_SERIES_TERMS = 14
_SNAP = 1e-12

BASES = ("sine", "cosine", "half_sine", "half_cosine")


class UnsupportedVariantError(TypeError):
    """Raised when an operation is not defined for a representation."""


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """Piecewise polynomial on ``0 = t_0 < ... < t_m = pi``.

    ``coeffs[k, i]`` multiplies ``(t - t_k)**i`` on ``[t_k, t_{k+1})``.
    """

    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("need at least two breakpoints")
        if bp[0] != 0.0 or bp[-1] != PI:
            raise ValueError("breakpoints must start at 0 and end at pi")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if c.shape[0] != bp.size - 1:
            raise ValueError("one coefficient row per piece required")
        if c.shape[1] > MAX_DEGREE + 1:
            extra = c[:, MAX_DEGREE + 1:]
            if np.any(extra != 0):
                raise ValueError(f"degree exceeds {MAX_DEGREE}")
            c = c[:, : MAX_DEGREE + 1]
        if c.shape[1] < MAX_DEGREE + 1:
            c = np.pad(c, ((0, 0), (0, MAX_DEGREE + 1 - c.shape[1])))
        bp.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", c)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "PiecewisePoly":
        return cls(np.array([0.0, PI]), np.zeros((1, 4)))

    @classmethod
    def constant(cls, value: complex) -> "PiecewisePoly":
        return cls(np.array([0.0, PI]), np.array([[value, 0, 0, 0]]))

    @classmethod
    def indicator(cls, lo: float, hi: float, value: complex = 1.0) -> "PiecewisePoly":
        """``value`` times the indicator of ``[lo, hi] cap [0, pi]``."""
        lo, hi = max(lo, 0.0), min(hi, PI)
        if hi <= lo:
            return cls.zero()
        return cls.from_pieces([(lo, hi, [value])])

    @classmethod
    def from_pieces(cls, pieces) -> "PiecewisePoly":
        """Build from ``(lo, hi, local_coeffs)`` triples; gaps are zero.

        ``local_coeffs`` are in powers of ``t - lo``.
        """
        bps = {0.0, PI}
        for lo, hi, _ in pieces:
            bps.update((min(max(lo, 0.0), PI), min(max(hi, 0.0), PI)))
        bp = _snap(np.array(sorted(bps)))
        out = np.zeros((bp.size - 1, 4), dtype=complex)
        mids = 0.5 * (bp[:-1] + bp[1:])
        for lo, hi, cf in pieces:
            cf = np.zeros(4, dtype=complex) + np.pad(np.asarray(cf, dtype=complex), (0, 4 - len(cf)))
            inside = (mids > lo) & (mids < hi)
            for k in np.flatnonzero(inside):
                out[k] += taylor_shift(cf, bp[k] - lo)
        return cls(bp, out)

    @classmethod
    def from_function(cls, func, breakpoints, degree: int = 3) -> "PiecewisePoly":
        """Interpolate ``func`` at Chebyshev points of each piece (exact for polynomials)."""
        bp = np.asarray(breakpoints, dtype=float)
        rows = []
        for lo, hi in zip(bp[:-1], bp[1:]):
            h = hi - lo
            nodes = lo + 0.5 * h * (1 - np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1)))
            vals = np.asarray(func(nodes), dtype=complex)
            V = np.vander(nodes - lo, degree + 1, increasing=True)
            rows.append(np.linalg.solve(V, vals))
        return cls(bp, np.array(rows))

    # evaluation ---------------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, self.n_pieces - 1)
        u = t - self.breakpoints[k]
        c = self.coeffs[k]
        val = c[..., 0] + u * (c[..., 1] + u * (c[..., 2] + u * c[..., 3]))
        return np.where((t > 0.0) & (t < PI), val, 0.0)

    def derivative_values(self, t):
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, self.n_pieces - 1)
        u = t - self.breakpoints[k]
        c = self.coeffs[k]
        val = c[..., 1] + u * (2 * c[..., 2] + 3 * u * c[..., 3])
        return np.where((t > 0.0) & (t < PI), val, 0.0)

    @property
    def n_pieces(self) -> int:
        return self.breakpoints.size - 1

    def simplify(self, tol: float = 0.0) -> "PiecewisePoly":
        """Merge adjacent pieces carrying the same polynomial."""
        keep = [0]
        c = self.coeffs
        bp = self.breakpoints
        for k in range(1, self.n_pieces):
            prev = taylor_shift(c[keep[-1]], bp[k] - bp[keep[-1]])
            if np.max(np.abs(prev - c[k])) > tol:
                keep.append(k)
        new_bp = np.append(bp[keep], PI)
        return PiecewisePoly(new_bp, c[keep])

    def restrict(self, lo: float, hi: float) -> "PiecewisePoly":
        """Copy that vanishes outside ``[lo, hi]``."""
        lo, hi = max(lo, 0.0), min(hi, PI)
        if hi <= lo:
            return PiecewisePoly.zero()
        bp = _snap(np.union1d(self.breakpoints, [lo, hi]))
        c = _refine(self, bp)
        mids = 0.5 * (bp[:-1] + bp[1:])
        c[(mids < lo) | (mids > hi)] = 0.0
        return PiecewisePoly(bp, c)

    def __neg__(self):
        return PiecewisePoly(self.breakpoints, -self.coeffs)

    def __add__(self, other):
        return linear_combine(1.0, self, 1.0, other)

    def __sub__(self, other):
        return linear_combine(1.0, self, -1.0, other)

    def __rmul__(self, alpha):
        return PiecewisePoly(self.breakpoints, alpha * self.coeffs)

    def to_dict(self) -> dict:
        return {
            "type": "piecewise_poly",
            "breakpoints": [float(x) for x in self.breakpoints],
            "coeffs": [[[float(z.real), float(z.imag)] for z in row] for row in self.coeffs],
        }


@dataclass(frozen=True, eq=False)
class TrigSeries:
    """Finite series ``sum_k coeffs[k] * basis(n_k t)``.

    The first coefficient corresponds to ``n = 0`` for the cosine basis and to
    ``n = 1`` for the other three.
    """

    basis: str
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def first_index(self) -> int:
        return 0 if self.basis == "cosine" else 1

    @property
    def frequencies(self) -> np.ndarray:
        n = np.arange(self.first_index, self.first_index + self.coeffs.size, dtype=float)
        return n - 0.5 if self.basis.startswith("half") else n

    @property
    def is_sine(self) -> bool:
        return self.basis in ("sine", "half_sine")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        arg = np.multiply.outer(t, self.frequencies)
        b = np.sin(arg) if self.is_sine else np.cos(arg)
        val = b @ self.coeffs if self.coeffs.size else np.zeros(t.shape, complex)
        return np.where((t > 0.0) & (t < PI), val, 0.0)

    def derivative_values(self, t):
        t = np.asarray(t, dtype=float)
        mu = self.frequencies
        arg = np.multiply.outer(t, mu)
        b = mu * np.cos(arg) if self.is_sine else -mu * np.sin(arg)
        val = b @ self.coeffs if self.coeffs.size else np.zeros(t.shape, complex)
        return np.where((t > 0.0) & (t < PI), val, 0.0)

    def to_piecewise(self, n_pieces: int = 4096) -> PiecewisePoly:
        """Cubic Hermite interpolant on a uniform grid."""
        bp = np.linspace(0.0, PI, n_pieces + 1)
        bp[-1] = PI
        # one-sided values at the ends: the zero extension must not leak in
        inner = np.clip(bp, 1e-300, np.nextafter(PI, 0))
        f = self(inner)
        df = self.derivative_values(inner)
        h = np.diff(bp)
        f0, f1, d0, d1 = f[:-1], f[1:], df[:-1], df[1:]
        c2 = (3 * (f1 - f0) / h - 2 * d0 - d1) / h
        c3 = (d0 + d1 - 2 * (f1 - f0) / h) / h**2
        return PiecewisePoly(bp, np.stack([f0, d0, c2, c3], axis=1))

    def __neg__(self):
        return TrigSeries(self.basis, -self.coeffs)

    def __add__(self, other):
        return linear_combine(1.0, self, 1.0, other)

    def __sub__(self, other):
        return linear_combine(1.0, self, -1.0, other)

    def __rmul__(self, alpha):
        return TrigSeries(self.basis, alpha * self.coeffs)

    def to_dict(self) -> dict:
        return {
            "type": "trig_series",
            "basis": self.basis,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }


FunctionRep = Union[PiecewisePoly, TrigSeries]


@dataclass(frozen=True)
class Rho:
    """Spectral parameter with ``lam = rho**2``."""

    rho: complex

    @property
    def lam(self) -> complex:
        return self.rho * self.rho

    @classmethod
    def from_lambda(cls, lam: complex) -> "Rho":
        return cls(complex(np.sqrt(complex(lam))))


def from_dict(d: dict) -> FunctionRep:
    """Inverse of ``to_dict``; raises ``ValueError`` naming the bad field."""
    if not isinstance(d, dict) or "type" not in d:
        raise ValueError("function object needs a 'type' field")
    kind = d["type"]
    try:
        if kind == "piecewise_poly":
            bp = np.array(d["breakpoints"], dtype=float)
            c = np.array([[complex(re, im) for re, im in row] for row in d["coeffs"]])
            return PiecewisePoly(bp, c)
        if kind == "trig_series":
            c = np.array([complex(re, im) for re, im in d["coeffs"]])
            return TrigSeries(d["basis"], c)
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r} in {kind} object") from None
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed {kind} object: {exc}") from None
    raise ValueError(f"unknown function type {kind!r}")


# ---------------------------------------------------------------------------
# polynomial plumbing


def taylor_shift(c, delta):
    """Coefficients of ``P(v + delta)`` given those of ``P(u)`` (last axis)."""
    c = np.asarray(c, dtype=complex)
    d = np.asarray(delta, dtype=float)
    n = c.shape[-1]
    out = np.zeros(np.broadcast(c[..., 0], d).shape + (n,), complex)
    for i in range(n):
        for k in range(i, n):
            out[..., i] += comb(k, i) * c[..., k] * d ** (k - i)
    return out


def _snap(bp: np.ndarray) -> np.ndarray:
    bp = np.unique(np.clip(bp, 0.0, PI))
    keep = np.concatenate([[True], np.diff(bp) > _SNAP])
    bp = bp[keep]
    bp[0] = 0.0
    if PI - bp[-1] <= _SNAP and bp.size > 1:
        bp[-1] = PI
    else:
        bp = np.append(bp, PI)
    return bp


def _refine(f: PiecewisePoly, bp: np.ndarray) -> np.ndarray:
    """Coefficients of ``f`` on the (finer) partition ``bp``."""
    mids = 0.5 * (bp[:-1] + bp[1:])
    k = np.clip(np.searchsorted(f.breakpoints, mids, side="right") - 1, 0, f.n_pieces - 1)
    delta = bp[:-1] - f.breakpoints[k]
    return taylor_shift(f.coeffs[k], delta)


def linear_combine(alpha: complex, f: FunctionRep, beta: complex, g: FunctionRep) -> FunctionRep:
    """Exact representation of ``alpha*f + beta*g``."""
    if isinstance(f, PiecewisePoly) and isinstance(g, PiecewisePoly):
        bp = _snap(np.union1d(f.breakpoints, g.breakpoints))
        c = alpha * _refine(f, bp) + beta * _refine(g, bp)
        return PiecewisePoly(bp, c)
    if isinstance(f, TrigSeries) and isinstance(g, TrigSeries) and f.basis == g.basis:
        n = max(f.coeffs.size, g.coeffs.size)
        cf = np.pad(f.coeffs, (0, n - f.coeffs.size))
        cg = np.pad(g.coeffs, (0, n - g.coeffs.size))
        return TrigSeries(f.basis, alpha * cf + beta * cg)
    raise UnsupportedVariantError(
        f"cannot combine {type(f).__name__} and {type(g).__name__}"
        + (f" ({f.basis} vs {g.basis})" if isinstance(f, TrigSeries) and isinstance(g, TrigSeries) else "")
    )


def affine_compose(g: FunctionRep, sigma: int, c: float) -> PiecewisePoly:
    """Representation of ``t -> g(sigma*t + c)`` on [0, pi] (zero extension of g)."""
    if not isinstance(g, PiecewisePoly):
        raise UnsupportedVariantError("shifts and reflections need a PiecewisePoly")
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    pieces = []
    for k in range(g.n_pieces):
        s0, s1 = g.breakpoints[k], g.breakpoints[k + 1]
        cf = g.coeffs[k]
        if not np.any(cf):
            continue
        # t-range mapping onto [s0, s1]
        ta, tb = sorted(((s0 - c) * sigma, (s1 - c) * sigma))
        lo, hi = max(ta, 0.0), min(tb, PI)
        if hi - lo <= _SNAP:
            continue
        # g(s) with s - s0 = sigma*(t - lo) + (sigma*lo + c - s0)
        local = taylor_shift(cf, sigma * lo + c - s0)
        local = local * np.power(float(sigma), np.arange(4))
        pieces.append((lo, hi, local))
    if not pieces:
        return PiecewisePoly.zero()
    return PiecewisePoly.from_pieces(pieces)


def shift_reflect(g: FunctionRep, c: float, even: bool = False) -> PiecewisePoly:
    """``t -> g(c - t)`` on [0, pi].

    With ``even=True`` ``g`` stands for the even function whose restriction to
    ``[0, pi]`` it stores, i.e. the result is ``t -> g(|c - t|)``.
    """
    if not isinstance(g, PiecewisePoly):
        raise UnsupportedVariantError("reflection of a TrigSeries is not supported")
    out = affine_compose(g, -1, c)
    if even:
        out = out + affine_compose(g, 1, -c)
    return out


# ---------------------------------------------------------------------------
# scaled elementary kernels; every value carries the factor exp(-|Im z|)


def _esin(z):
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    ay = np.abs(y)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.sin(z) * np.exp(-ay)
    expo = (np.exp(1j * x - y - ay) - np.exp(-1j * x + y - ay)) / 2j
    return np.where(ay < 20.0, direct, expo)


def _ecos(z):
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    ay = np.abs(y)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.cos(z) * np.exp(-ay)
    expo = (np.exp(1j * x - y - ay) + np.exp(-1j * x + y - ay)) / 2
    return np.where(ay < 20.0, direct, expo)


def _esinc(rho, x):
    """``sin(rho*x)/rho * exp(-|Im rho|*|x|)``, smooth at rho = 0."""
    rho = np.asarray(rho, dtype=complex)
    z = rho * x
    small = np.abs(z) < 0.1
    z2 = z * z
    series = x * (1 - z2 / 6 * (1 - z2 / 20 * (1 - z2 / 42 * (1 - z2 / 72 * (1 - z2 / 110)))))
    series = series * np.exp(-np.abs(rho.imag) * abs(x))
    safe = np.where(small, 1.0, rho)
    return np.where(small, series, _esin(z) / safe)


def esin(rho, x, scaled=False):
    v = _esin(np.asarray(rho, complex) * x)
    return v if scaled else v * _unscale(rho, x)


def ecos(rho, x, scaled=False):
    v = _ecos(np.asarray(rho, complex) * x)
    return v if scaled else v * _unscale(rho, x)


def esinc(rho, x, scaled=False):
    v = _esinc(rho, x)
    return v if scaled else v * _unscale(rho, x)


def _unscale(rho, length):
    return np.exp(np.abs(np.asarray(rho, complex).imag) * abs(length))


def cs_moments(nu, h: float, imax: int, branch: str = "auto"):
    """Scaled ``C_i = int_0^h u^i cos(nu u) du``, ``S_i``, ``SR_i = S_i / nu``.

    Returns arrays of shape ``(imax + 1,) + nu.shape``, each multiplied by
    ``exp(-|Im nu| * h)``.  ``branch="series"`` forces the power series
    wherever ``|nu| h < SERIES_LIMIT``; ``"closed"`` forces the antiderivatives
    except at ``nu = 0``.
    """
    nu = np.asarray(nu, dtype=complex)
    shape = (imax + 1,) + nu.shape
    C = np.zeros(shape, complex)
    S = np.zeros(shape, complex)
    SR = np.zeros(shape, complex)
    if h <= 0:
        return C, S, SR
    small = np.abs(nu) * h < SERIES_THRESHOLD
    if branch == "series":
        small = np.abs(nu) * h < SERIES_LIMIT
    elif branch == "closed":
        # the antiderivatives are 0/0 at nu = 0 exactly
        small = nu == 0
    damp = np.exp(-np.abs(nu.imag) * h)
    if np.any(small):
        z = np.where(small, nu, 0.0) ** 2
        for i in range(imax + 1):
            c_acc = np.zeros(nu.shape, complex)
            s_acc = np.zeros(nu.shape, complex)
            zk = np.ones(nu.shape, complex)
            for k in range(_SERIES_TERMS):
                sign = -1.0 if k % 2 else 1.0
                c_acc = c_acc + sign * zk * h ** (i + 2 * k + 1) / (factorial(2 * k) * (i + 2 * k + 1))
                s_acc = s_acc + sign * zk * h ** (i + 2 * k + 2) / (factorial(2 * k + 1) * (i + 2 * k + 2))
                zk = zk * z
            C[i] = np.where(small, c_acc * damp, 0)
            SR[i] = np.where(small, s_acc * damp, 0)
            S[i] = np.where(small, nu * s_acc * damp, 0)
    big = ~small
    if np.any(big):
        w = np.where(big, nu, 1.0)
        sn = _esin(w * h)
        cn = _ecos(w * h)
        Cb = sn / w
        Sb = (damp - cn) / w
        Cs, Ss = [Cb], [Sb]
        for i in range(1, imax + 1):
            Cn = h**i * sn / w - i / w * Ss[-1]
            Sn = -(h**i) * cn / w + i / w * Cs[-1]
            Cs.append(Cn)
            Ss.append(Sn)
        for i in range(imax + 1):
            C[i] = np.where(big, Cs[i], C[i])
            S[i] = np.where(big, Ss[i], S[i])
            SR[i] = np.where(big, Ss[i] / w, SR[i])
    return C, S, SR


# ---------------------------------------------------------------------------
# kernel integrals


def kernel_integral(f: FunctionRep, rho, kind: str, x0: float, alpha: int, c: float, d: float,
                    scaled: bool = False, branch: str = "auto"):
    """``int_c^d K(rho * (x0 + alpha*t)) f(t) dt`` for ``K`` in sin, cos, sinc.

    ``sinc`` means ``sin(rho x)/rho``.  With ``scaled=True`` the result is
    multiplied by ``exp(-|Im rho| * L)``, ``L = max(|x(c)|, |x(d)|)``.
    """
    if kind not in ("sin", "cos", "sinc"):
        raise ValueError(f"unknown kernel {kind!r}")
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros(rho.shape, complex)
    c, d = max(c, 0.0), min(d, PI)
    if d <= c:
        return out
    L = max(abs(x0 + alpha * c), abs(x0 + alpha * d))
    segments = []
    if isinstance(f, PiecewisePoly):
        bp = f.breakpoints
        for k in range(f.n_pieces):
            lo, hi = max(bp[k], c), min(bp[k + 1], d)
            if hi > lo and np.any(f.coeffs[k]):
                segments.append((lo, hi, k))
    else:
        segments.append((c, d, None))
    tau = np.abs(rho.imag)
    for lo, hi, k in segments:
        # split where the kernel argument changes sign
        t0 = -x0 / alpha
        parts = [(lo, t0), (t0, hi)] if lo < t0 < hi else [(lo, hi)]
        for l, r in parts:
            xl, xr = x0 + alpha * l, x0 + alpha * r
            if abs(xl) <= abs(xr):
                s, sgn_t, xs = l, 1, xl
            else:
                s, sgn_t, xs = r, -1, xr
            beta = alpha * sgn_t  # x = xs + beta*u, t = s + sgn_t*u
            h = r - l
            if k is not None:
                local = taylor_shift(f.coeffs[k], s - bp[k]) * np.power(float(sgn_t), np.arange(4))
                val = _poly_segment(local, rho, kind, xs, beta, h, branch)
            else:
                val = _trig_segment(f, rho, kind, xs, beta, s, sgn_t, h, branch)
            # val carries exp(-tau*(|xs| + h)); bring it to exp(-tau*L)
            gap = L - (abs(xs) + h)
            out = out + val * np.exp(-tau * max(gap, 0.0))
    if not scaled:
        out = out * np.exp(tau * L)
    return out


def _poly_segment(local, rho, kind, xs, beta, h, branch):
    deg = int(np.max(np.nonzero(local)[0])) if np.any(local) else 0
    C, S, SR = cs_moments(rho, h, deg, branch)
    Cp = sum(local[i] * C[i] for i in range(deg + 1))
    Sp = sum(local[i] * S[i] for i in range(deg + 1))
    SRp = sum(local[i] * SR[i] for i in range(deg + 1))
    if kind == "sin":
        return _esin(rho * xs) * Cp + beta * _ecos(rho * xs) * Sp
    if kind == "cos":
        return _ecos(rho * xs) * Cp - beta * _esin(rho * xs) * Sp
    return _esinc(rho, xs) * Cp + beta * _ecos(rho * xs) * SRp


def _trig_segment(f: TrigSeries, rho, kind, xs, beta, s, sgn_t, h, branch):
    """Segment integral for a TrigSeries; t = s + sgn_t*u, x = xs + beta*u."""
    mu = f.frequencies
    cf = f.coeffs
    if cf.size == 0:
        return np.zeros(np.shape(rho), complex)
    # basis(mu t) = D cos(mu u) + E sin(mu u)
    if f.is_sine:
        D, E = np.sin(mu * s), sgn_t * np.cos(mu * s)
    else:
        D, E = np.cos(mu * s), -sgn_t * np.sin(mu * s)
    D, E = D * cf, E * cf
    r = rho[..., None]
    # integrals of cos(rho u){cos,sin}(mu u) and sin(rho u){cos,sin}(mu u), scaled by exp(-tau h)
    Cm, Sm, _ = cs_moments(r - mu, h, 0, branch)
    Cq, Sq, _ = cs_moments(r + mu, h, 0, branch)
    Cm, Sm, Cq, Sq = Cm[0], Sm[0], Cq[0], Sq[0]
    cc = 0.5 * (Cm + Cq)
    cs = 0.5 * (Sq - Sm)
    sc = 0.5 * (Sq + Sm)
    ss = 0.5 * (Cm - Cq)
    I_cos = np.sum(cc * D + cs * E, axis=-1)  # int cos(rho u) basis
    I_sin = np.sum(sc * D + ss * E, axis=-1)  # int sin(rho u) basis
    if kind == "sin":
        return _esin(rho * xs) * I_cos + beta * _ecos(rho * xs) * I_sin
    if kind == "cos":
        return _ecos(rho * xs) * I_cos - beta * _esin(rho * xs) * I_sin
    # sin(rho u)/rho: product-to-sum loses accuracy for tiny rho, use Taylor there
    tiny = np.abs(rho) < 1e-3
    safe = np.where(tiny, 1.0, rho)
    I_sinc = I_sin / safe
    if np.any(tiny):
        Cmu, Smu, _ = cs_moments(mu, h, 5)
        mom = {m: Cmu[m] @ D + Smu[m] @ E for m in (1, 3, 5)}
        r2 = rho * rho
        taylor = mom[1] - r2 * mom[3] / 6 + r2 * r2 * mom[5] / 120
        taylor = taylor * np.exp(-np.abs(rho.imag) * h)
        I_sinc = np.where(tiny, taylor, I_sinc)
    return _esinc(rho, xs) * I_cos + beta * _ecos(rho * xs) * I_sinc


# ---------------------------------------------------------------------------
# public operations

_SHIFT_MODES = {"t": (0.0, 1), "d-t": (None, -1), "t-c": (None, 1)}


def _as_rho(rho):
    return rho.rho if isinstance(rho, Rho) else rho


def moment_integral(f: FunctionRep, rho, kind: str, c: float, d: float, shift_mode: str = "t",
                    branch: str = "auto"):
    """``int_c^d kind(rho * arg) f(t) dt`` with ``arg`` one of ``t``, ``d-t``, ``t-c``."""
    if not (0.0 <= c < d <= PI):
        raise ValueError(f"need 0 <= c < d <= pi, got c={c}, d={d}")
    if kind not in ("sin", "cos"):
        raise ValueError("kind must be 'sin' or 'cos'")
    if shift_mode == "t":
        x0, alpha = 0.0, 1
    elif shift_mode == "d-t":
        x0, alpha = d, -1
    elif shift_mode == "t-c":
        x0, alpha = -c, 1
    else:
        raise ValueError(f"unknown shift mode {shift_mode!r}")
    out = kernel_integral(f, _as_rho(rho), kind, x0, alpha, c, d, branch=branch)
    return out[()] if out.ndim == 0 else out


def fourier_coeff(f: FunctionRep, basis: str, n: int) -> complex:
    """``int_0^pi basis_n(t) f(t) dt``."""
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}")
    if n < (0 if basis == "cosine" else 1):
        raise ValueError("index out of range")
    mu = n - 0.5 if basis.startswith("half") else float(n)
    kind = "sin" if basis in ("sine", "half_sine") else "cos"
    return complex(kernel_integral(f, mu, kind, 0.0, 1, 0.0, PI))


def evaluate(f: FunctionRep, t):
    """Value of ``f`` at ``t`` with zero extension outside (0, pi)."""
    out = f(t)
    return out[()] if np.ndim(out) == 0 else out


def integral(f: FunctionRep) -> complex:
    """``int_0^pi f``."""
    return complex(kernel_integral(f, 0.0, "cos", 0.0, 1, 0.0, PI))


def l2_norm(f: FunctionRep) -> float:
    """Exact L2(0, pi) norm."""
    if isinstance(f, TrigSeries):
        w = np.full(f.coeffs.size, PI / 2)
        if f.basis == "cosine" and w.size:
            w[0] = PI
        return float(np.sqrt(np.sum(w * np.abs(f.coeffs) ** 2)))
    h = np.diff(f.breakpoints)
    c = f.coeffs
    total = 0.0
    for i in range(4):
        for k in range(4):
            total += np.sum((c[:, i] * np.conj(c[:, k])).real * h ** (i + k + 1) / (i + k + 1))
    return float(np.sqrt(max(total, 0.0)))
