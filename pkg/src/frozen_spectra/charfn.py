"""Characteristic functions of the two boundary value problems.

For ``l y = -y'' + p(x) y(a) + q(x) y(b)`` with ``y^{(j)}(0) = y(pi) = 0``
the eigenvalues are the zeros of the entire function ``Delta_j(lambda)``.
It is evaluated two ways:

* :func:`delta_expanded` -- ``phi_j(rho, pi) + A_j0 + A_j1 + B_j`` with the
  bilinear term ``B_j`` written as four antisymmetric brackets plus a double
  integral;
* :func:`delta_determinant` -- the 3x3 determinant of the linear system for
  the solution constants, expanded by cofactors.

All evaluations accept arrays of ``lambda`` and are even in ``rho``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _highprec
from .funcrep import (
    PI,
    FunctionRep,
    PiecewisePoly,
    affine_compose,
    ecos,
    esinc,
    from_dict,
    kernel_integral,
)

# cofactor cancellation ratio above which the determinant is redone in mpmath
_DET_CANCEL_LIMIT = 1e4


@dataclass(frozen=True, eq=False)
class Problem:
    """Frozen arguments ``0 < a < b < pi`` and coefficients ``p``, ``q``."""

    a: float
    b: float
    p: FunctionRep
    q: FunctionRep

    def __post_init__(self):
        if not (0.0 < self.a < self.b < PI):
            raise ValueError(f"need 0 < a < b < pi, got a={self.a}, b={self.b}")

    def to_dict(self) -> dict:
        return {"a": float(self.a), "b": float(self.b), "p": self.p.to_dict(), "q": self.q.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Problem":
        for key in ("a", "b", "p", "q"):
            if key not in d:
                raise ValueError(f"problem object is missing field {key!r}")
        return cls(float(d["a"]), float(d["b"]), from_dict(d["p"]), from_dict(d["q"]))

    @classmethod
    def zero(cls, a: float = 1.0, b: float = 2.0) -> "Problem":
        return cls(a, b, PiecewisePoly.zero(), PiecewisePoly.zero())

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class CharEval:
    """One evaluation of ``Delta_j`` and its parts."""

    j: int
    lam: complex
    phi_pi: complex
    A0: complex
    A1: complex
    B: complex
    total: complex

    def to_dict(self) -> dict:
        out = {"j": self.j}
        for name in ("lam", "phi_pi", "A0", "A1", "B", "total"):
            z = complex(getattr(self, name))
            out[name] = [z.real, z.imag]
        return out


def _rho(lam):
    return np.sqrt(np.asarray(lam, dtype=complex))


def _tau(rho):
    return np.abs(rho.imag)


def _phi_scaled(j, rho, z):
    return esinc(rho, z, scaled=True) if j == 0 else ecos(rho, z, scaled=True)


def phi(j: int, rho, z: float):
    """``sin(rho z)/rho`` for ``j = 0`` and ``cos(rho z)`` for ``j = 1``."""
    rho = rho.rho if hasattr(rho, "rho") else rho
    out = esinc(rho, z) if j == 0 else ecos(rho, z)
    return out[()] if np.ndim(out) == 0 else out


class _Kernels:
    """Scaled kernel integrals for one rho array."""

    def __init__(self, rho):
        self.rho = rho

    def __call__(self, f, kind, x0, alpha, c, d):
        return kernel_integral(f, self.rho, kind, x0, alpha, c, d, scaled=True)

    def phi_int(self, j, f, c, d):
        """``int_c^d phi_j(rho, t) f(t) dt``."""
        return self(f, "sinc" if j == 0 else "cos", 0.0, 1, c, d)

    def tail(self, f, c):
        """``int_c^pi sin(rho (pi - t))/rho f(t) dt``."""
        return self(f, "sinc", PI, -1, c, PI)


def _a_scaled(j, K, f, x):
    rho = K.rho
    return (_phi_scaled(j, rho, x) * K.tail(f, x)
            + esinc(rho, PI - x, scaled=True) * K.phi_int(j, f, 0.0, x))


def _b_scaled(j, K, p, q, a, b):
    rho = K.rho
    P0a, Q0a = K.phi_int(j, p, 0.0, a), K.phi_int(j, q, 0.0, a)
    Ppib, Qpib = K.tail(p, b), K.tail(q, b)
    # int_a^b sin(rho (t - a))/rho f and int_a^b sin(rho (b - t))/rho f
    Pa, Qa = K(p, "sinc", -a, 1, a, b), K(q, "sinc", -a, 1, a, b)
    Pb, Qb = K(p, "sinc", b, -1, a, b), K(q, "sinc", b, -1, a, b)
    # double integral, centred at the midpoint so neither factor overflows;
    # factors keep the same order in both products so swapping p, q negates
    # the bracket bitwise (complex multiply is not commutative under FMA)
    m = 0.5 * (a + b)
    dbl = (K(q, "sinc", -m, 1, a, b) * K(p, "cos", -m, 1, a, b)
           - K(p, "sinc", -m, 1, a, b) * K(q, "cos", -m, 1, a, b))
    phia = _phi_scaled(j, rho, a)
    spb = esinc(rho, PI - b, scaled=True)
    sba = esinc(rho, b - a, scaled=True)
    return (spb * (P0a * Qa - Q0a * Pa)
            + sba * (P0a * Qpib - Q0a * Ppib)
            + phia * (Qpib * Pb - Ppib * Qb)
            + phia * spb * dbl)


def _parts_scaled(j, lam, prob: Problem):
    rho = _rho(lam)
    K = _Kernels(rho)
    phi_pi = _phi_scaled(j, rho, PI)
    A0 = _a_scaled(j, K, prob.p, prob.a)
    A1 = _a_scaled(j, K, prob.q, prob.b)
    B = _b_scaled(j, K, prob.p, prob.q, prob.a, prob.b)
    return rho, phi_pi, A0, A1, B


def _out(x):
    return x[()] if np.ndim(x) == 0 else x


def a_term(j: int, which: int, lam, prob: Problem):
    """``A_j0`` (``which=0``: p and a) or ``A_j1`` (``which=1``: q and b)."""
    rho = _rho(lam)
    K = _Kernels(rho)
    f, x = (prob.p, prob.a) if which == 0 else (prob.q, prob.b)
    return _out(_a_scaled(j, K, f, x) * np.exp(_tau(rho) * PI))


def b_term(j: int, lam, p: FunctionRep, q: FunctionRep, a: float, b: float):
    """Bilinear, antisymmetric part ``B_j(lambda; p, q)``."""
    if not (0.0 < a < b < PI):
        raise ValueError("need 0 < a < b < pi")
    rho = _rho(lam)
    return _out(_b_scaled(j, _Kernels(rho), p, q, a, b) * np.exp(_tau(rho) * PI))


def delta(j: int, lam, prob: Problem, scaled: bool = False):
    """``Delta_j(lambda)``; ``scaled`` multiplies by ``exp(-|Im rho| pi)``."""
    rho, phi_pi, A0, A1, B = _parts_scaled(j, lam, prob)
    total = phi_pi + A0 + A1 + B
    if not scaled:
        total = total * np.exp(_tau(rho) * PI)
    return _out(total)


def delta_expanded(j: int, lam: complex, prob: Problem) -> CharEval:
    rho, phi_pi, A0, A1, B = _parts_scaled(j, complex(lam), prob)
    s = np.exp(_tau(rho) * PI)
    parts = [complex(x * s) for x in (phi_pi, A0, A1, B)]
    return CharEval(j, complex(lam), *parts, total=parts[0] + parts[1] + parts[2] + parts[3])


def _det_double(j, lam, prob: Problem):
    """Row-scaled cofactor expansion in double; returns (value, cancellation ratio)."""
    rho = _rho(lam)
    tau = _tau(rho)
    a, b, p, q = prob.a, prob.b, prob.p, prob.q

    def vol(f, x):
        return kernel_integral(f, rho, "sinc", x, -1, 0.0, x, scaled=True)

    m11, m21, m31 = (_phi_scaled(j, rho, z) for z in (PI, a, b))
    m12, m13 = vol(p, PI), vol(q, PI)
    m22 = vol(p, a) - np.exp(-tau * a)
    m23 = vol(q, a)
    m32 = vol(p, b)
    m33 = vol(q, b) - np.exp(-tau * b)
    terms = [m11 * m22 * m33, -m11 * m23 * m32, -m12 * m21 * m33,
             m12 * m23 * m31, m13 * m21 * m32, -m13 * m22 * m31]
    det = sum(terms)
    size = sum(np.abs(t) for t in terms)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.abs(det) > 0, size / np.abs(det), np.inf)
    return det * np.exp(tau * (PI + a + b)), ratio


def delta_determinant(j: int, lam, prob: Problem, precision: str = "auto"):
    """Determinant path.

    ``precision`` is ``"double"``, ``"extended"`` (mpmath) or ``"auto"``,
    which recomputes in mpmath wherever the double-precision cofactor
    expansion cancels by more than four orders of magnitude.
    """
    lam_arr = np.asarray(lam, dtype=complex)
    if precision == "extended":
        out = np.vectorize(lambda z: _highprec.determinant(j, z, prob.a, prob.b, prob.p, prob.q),
                           otypes=[complex])(lam_arr)
        return _out(out)
    val, ratio = _det_double(j, lam_arr, prob)
    if precision == "double":
        return _out(val)
    val = np.array(val, dtype=complex)
    redo = np.atleast_1d(ratio > _DET_CANCEL_LIMIT)
    flat_val = val.reshape(-1)
    flat_lam = lam_arr.reshape(-1)
    for k in np.flatnonzero(redo.reshape(-1)):
        flat_val[k] = _highprec.determinant(j, flat_lam[k], prob.a, prob.b, prob.p, prob.q)
    return _out(flat_val.reshape(lam_arr.shape))


# ---------------------------------------------------------------------------
# W_j and u_j


def _shifted_terms(f, x):
    """``f(t + x - pi)``, ``f(pi - t + x)``, ``f(pi - x + t)``, ``f(pi - x - t)``."""
    return (affine_compose(f, 1, x - PI), affine_compose(f, -1, PI + x),
            affine_compose(f, 1, PI - x), affine_compose(f, -1, PI - x))


def w_function(j: int, p: FunctionRep, q: FunctionRep, a: float, b: float) -> PiecewisePoly:
    """Eight-term shifted/reflected combination ``W_j(t; p, q)``."""
    s = -1.0 if j == 0 else 1.0  # (-1)^(j+1)
    out = PiecewisePoly.zero()
    for f, x in ((p, a), (q, b)):
        t1, t2, t3, t4 = _shifted_terms(f, x)
        out = out + s * t1 + s * t2 + (-s) * t3 + t4
    return out


def u_function(k: int, p: FunctionRep, q: FunctionRep, a: float, b: float) -> PiecewisePoly:
    """``u_0 = (W_0 + W_1)/2`` and ``u_1 = (W_0 - W_1)/2`` in reduced form."""
    out = PiecewisePoly.zero()
    for f, x in ((p, a), (q, b)):
        t1, t2, t3, t4 = _shifted_terms(f, x)
        out = out + (t4 if k == 0 else t3 - t1 - t2)
    return out
