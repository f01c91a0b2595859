"""Iso-spectral coefficient pairs built from an even bump.

For an even ``G`` supported in ``[-T, T]`` with ``T = min(a, b - a, pi - b)``
the functions ``s(t) = G(b - t)`` and ``r(t) = -G(a - t)`` annihilate the
linear part of both characteristic functions, and the pairs
``(-r, s + r)`` and ``(-s - r, s)`` share both spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .charfn import Problem, delta
from .funcrep import PI, FunctionRep, PiecewisePoly, l2_norm, linear_combine, shift_reflect
from .spectrum import locate_eigenvalues


@dataclass(frozen=True, eq=False)
class BumpSpec:
    """Even bump stored by its restriction ``half`` to ``[0, T]``."""

    half: PiecewisePoly
    T: float

    def __post_init__(self):
        if not isinstance(self.half, PiecewisePoly):
            raise TypeError("bump must be a PiecewisePoly")
        if not (0.0 < self.T <= PI):
            raise ValueError("T must lie in (0, pi]")
        bp, c = self.half.breakpoints, self.half.coeffs
        live = np.any(c != 0, axis=1)
        if np.any(live & (bp[1:] > self.T + 1e-12)):
            raise ValueError("bump restriction is not supported in [0, T]")
        if l2_norm(self.half) == 0.0:
            raise ValueError("bump must be non-trivial")

    def __call__(self, t):
        u = np.abs(np.asarray(t, dtype=float))
        # the restriction is zero-extended at its left end; G(0) is its limit
        return np.where(u == 0, self.half.coeffs[0, 0], self.half(u))

    @classmethod
    def box(cls, T: float, height: float = 1.0) -> "BumpSpec":
        """``height * chi_[-T, T]``."""
        return cls(PiecewisePoly.indicator(0.0, T, height), T)

    @classmethod
    def hat(cls, T: float, height: float = 1.0) -> "BumpSpec":
        """Triangle ``height * (1 - |t|/T)`` on ``[-T, T]``."""
        return cls(PiecewisePoly.from_pieces([(0.0, T, [height, -height / T])]), T)

    def to_dict(self) -> dict:
        return {"T": float(self.T), "G": self.half.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "BumpSpec":
        from .funcrep import from_dict
        for key in ("T", "G"):
            if key not in d:
                raise ValueError(f"bump object is missing field {key!r}")
        return cls(from_dict(d["G"]), float(d["T"]))


def admissible_T(a: float, b: float) -> float:
    """``min(a, b - a, pi - b)``."""
    if not (0.0 < a < b < PI):
        raise ValueError("need 0 < a < b < pi")
    return min(a, b - a, PI - b)


def build_sr(bump: BumpSpec, a: float, b: float) -> tuple[PiecewisePoly, PiecewisePoly]:
    """``s(t) = G(b - t)`` and ``r(t) = -G(a - t)``."""
    if bump.T > admissible_T(a, b) + 1e-12:
        raise ValueError(f"T={bump.T} exceeds the admissible {admissible_T(a, b)}")
    s = shift_reflect(bump.half, b, even=True).simplify()
    r = (-shift_reflect(bump.half, a, even=True)).simplify()
    return s, r


def confusable_pairs(s: FunctionRep, r: FunctionRep):
    """``((-r, s + r), (-s - r, s))``."""
    pair1 = (linear_combine(-1.0, r, 0.0, r), linear_combine(1.0, s, 1.0, r))
    pair2 = (linear_combine(-1.0, s, -1.0, r), linear_combine(1.0, s, 0.0, s))
    return pair1, pair2


def envelope(j: int, lam) -> np.ndarray:
    """Size of ``Delta_j`` for the unperturbed problem: ``exp(|Im rho| pi) / max(1, |rho|)^(1-j)``."""
    rho = np.sqrt(np.asarray(lam, dtype=complex))
    return np.exp(np.abs(rho.imag) * PI) / np.maximum(1.0, np.abs(rho)) ** (1 - j)


def relative_gap(j: int, lam, x, y) -> np.ndarray:
    """``|x - y|`` measured against ``max(|y|, envelope)`` so zeros of ``y`` stay meaningful."""
    return np.abs(np.asarray(x) - np.asarray(y)) / np.maximum(np.abs(y), envelope(j, lam))


@dataclass(frozen=True)
class CoincidenceReport:
    max_discrepancy: float
    per_j: dict
    eigen_gap: dict

    def passed(self, tol: float = 1e-10, eig_tol: float = 1e-8) -> bool:
        return self.max_discrepancy <= tol and all(g <= eig_tol for g in self.eigen_gap.values())

    def to_dict(self) -> dict:
        return {"max_discrepancy": self.max_discrepancy,
                "per_j": {str(k): v for k, v in self.per_j.items()},
                "eigen_gap": {str(k): v for k, v in self.eigen_gap.items()}}


def verify_coincidence(pair1, pair2, a: float, b: float, grid, n_eigs: int = 20,
                       js=(0, 1)) -> CoincidenceReport:
    """Compare both characteristic functions on ``grid`` and the first ``n_eigs`` eigenvalues."""
    P1 = pair1 if isinstance(pair1, Problem) else Problem(a, b, *pair1)
    P2 = pair2 if isinstance(pair2, Problem) else Problem(a, b, *pair2)
    grid = np.asarray(grid, dtype=complex)
    per_j, gaps = {}, {}
    for j in js:
        d1, d2 = delta(j, grid, P1), delta(j, grid, P2)
        per_j[j] = float(np.max(relative_gap(j, grid, d1, d2)))
        if n_eigs:
            e1 = locate_eigenvalues(P1, j, n_eigs).lambdas
            e2 = locate_eigenvalues(P2, j, n_eigs).lambdas
            gaps[j] = float(np.max(np.abs(e1 - e2)))
    return CoincidenceReport(max(per_j.values()), per_j, gaps)


# ---------------------------------------------------------------------------
# worked example: a = pi/4, b = pi/2, G = chi_[-pi/4, pi/4]


def box_example():
    """Parameters, ``(s, r)`` and both pairs of the box-bump example."""
    a, b = PI / 4, PI / 2
    s, r = build_sr(BumpSpec.box(PI / 4), a, b)
    pair1, pair2 = confusable_pairs(s, r)
    return a, b, Problem(a, b, *pair1), Problem(a, b, *pair2)


def box_example_delta(j: int, lam, dps: int = 40):
    """Closed-form ``Delta_j`` of the box example, evaluated in mpmath.

    The working precision absorbs the ``rho^-5`` cancellation near ``rho = 0``;
    ``rho = 0`` itself is replaced by ``rho = 1e-10`` with 60 extra digits,
    whose ``O(rho^2)`` error is far below double precision.
    """
    def one(z):
        zero = complex(z) == 0
        with mp.workdps(dps + (60 if zero else 0)):
            r = mp.mpf(10) ** -10 if zero else mp.sqrt(mp.mpc(complex(z)))
            s = [mp.sin(r * mp.pi * k / 4) for k in range(5)]
            c = [mp.cos(r * mp.pi * k / 4) for k in range(5)]
            if j == 0:
                v = (s[4] / r
                     + (-3 * s[4] + 5 * s[3] - 2 * s[2] + s[1]) / (2 * r**3)
                     + (s[2] * (c[1] - 1) ** 2 + 2 * s[1] * (c[1] - 1) * (c[2] - c[1])) / r**5)
            else:
                v = (c[4]
                     + (-3 * c[4] + 3 * c[3] + c[1] - 1) / (2 * r**2)
                     + (s[2] * s[1] * (1 - c[1]) + s[1] ** 2 * (c[1] - c[2])
                        + c[1] * (c[1] - c[2]) * (1 - c[1])) / r**4)
            return complex(v)
    out = np.vectorize(one, otypes=[complex])(np.asarray(lam, dtype=complex))
    return out[()] if out.ndim == 0 else out
