"""Regularized traces: eigenvalue shifts against Fourier data of p at a and q at b."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .charfn import Problem
from .funcrep import PI, FunctionRep, PiecewisePoly, TrigSeries, UnsupportedVariantError, fourier_coeff, shift_reflect
from .spectrum import locate_eigenvalues


@dataclass(frozen=True)
class TraceRow:
    n: int
    a_n: complex
    b_n: complex
    s_n: complex
    eig_partial: complex | None = None
    coeff_partial: complex = 0j

    @property
    def gap(self) -> float | None:
        if self.eig_partial is None:
            return None
        return abs(self.eig_partial - self.coeff_partial)


def _basis(j: int):
    return ("sine", np.sin) if j == 0 else ("half_cosine", np.cos)


def trace_coefficients(prob: Problem, j: int, N: int) -> list[TraceRow]:
    """``a_n = (2/pi) e_n(a) int e_n p``, ``b_n`` likewise with q and b, for n = 1..N.

    ``e_n(t) = sin(n t)`` for ``j = 0`` and ``cos((n - 1/2) t)`` for ``j = 1``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    basis, fn = _basis(j)
    n = np.arange(1, N + 1)
    mu = n - 0.5 * j
    pc = np.array([fourier_coeff(prob.p, basis, k) for k in n])
    qc = np.array([fourier_coeff(prob.q, basis, k) for k in n])
    a_n = (2 / PI) * fn(mu * prob.a) * pc
    b_n = (2 / PI) * fn(mu * prob.b) * qc
    s_n = a_n + b_n
    partial = np.cumsum(s_n)
    return [TraceRow(int(k), complex(x), complex(y), complex(s), None, complex(c))
            for k, x, y, s, c in zip(n, a_n, b_n, s_n, partial)]


def trace_compare(prob: Problem, j: int, N: int, spectrum=None) -> list[TraceRow]:
    """Coefficient rows together with ``sum_{m<=n} (lambda_m - (m - j/2)^2)``."""
    spec = spectrum if spectrum is not None else locate_eigenvalues(prob, j, N)
    if spec.N < N:
        raise ValueError(f"spectrum has only {spec.N} eigenvalues, need {N}")
    eig_partial = np.cumsum(spec.kappas[:N])
    rows = trace_coefficients(prob, j, N)
    return [TraceRow(r.n, r.a_n, r.b_n, r.s_n, complex(e), r.coeff_partial)
            for r, e in zip(rows, eig_partial)]


def mirror(p: FunctionRep) -> FunctionRep:
    """``t -> -p(pi - t)``."""
    if isinstance(p, PiecewisePoly):
        return -shift_reflect(p, PI)
    if isinstance(p, TrigSeries) and p.basis in ("sine", "cosine"):
        # sin(n(pi - t)) = -(-1)^n sin(nt), cos(n(pi - t)) = (-1)^n cos(nt)
        sign = (-1.0) ** p.frequencies
        return TrigSeries(p.basis, (sign if p.is_sine else -sign) * p.coeffs)
    raise UnsupportedVariantError(f"mirroring is not supported for {type(p).__name__}"
                                  + (f" with basis {p.basis}" if isinstance(p, TrigSeries) else ""))


def mirrored_pair(p: FunctionRep, a: float) -> Problem:
    """Problem with ``b = pi - a`` and ``q(t) = -p(pi - t)``, for which ``b_n0 = -a_n0``."""
    return Problem(a, PI - a, p, mirror(p))


def divergent_example(terms: int = 60, a: float = PI / 3) -> Problem:
    """Sine series with ``int_0^pi p(t) sin(nt) dt = pi sgn(sin(na)) / (2n)``, mirrored.

    For ``a = pi/3`` the sign is read off ``n mod 6`` so multiples of 3 are exactly 0.
    """
    n = np.arange(1, terms + 1)
    if a == PI / 3:
        sgn = np.array([0, 1, 1, 0, -1, -1])[n % 6]
    else:
        sgn = np.sign(np.sin(n * a))
    return mirrored_pair(TrigSeries("sine", sgn / n), a)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "a_re", "a_im", "b_re", "b_im", "s_re", "s_im",
                "eig_partial_re", "eig_partial_im", "coeff_partial_re", "coeff_partial_im"])
    for r in rows:
        e = r.eig_partial if r.eig_partial is not None else complex("nan")
        w.writerow([r.n] + [repr(v) for z in (r.a_n, r.b_n, r.s_n, e, r.coeff_partial)
                            for v in (z.real, z.imag)])
    return buf.getvalue()
