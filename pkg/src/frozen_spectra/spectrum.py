"""Eigenvalues of the two problems as zeros of ``Delta_j``.

Zeros are found by a damped Newton iteration in the ``lambda`` plane started
from the unperturbed values ``(n - j/2)**2`` and certified by counting zeros
inside the circle ``|lambda| = (N + 1/2)**2`` with the argument principle.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .charfn import Problem, delta

MAX_NEWTON = 100
RESIDUAL_TOL = 1e-12
ACCEPT_TOL = 1e-10
DUPLICATE_RTOL = 1e-8


class CertificationError(RuntimeError):
    """The zero count inside the contour disagrees with the located zeros."""

    def __init__(self, message, spectrum=None, discrepancy=0):
        super().__init__(message)
        self.spectrum = spectrum
        self.discrepancy = discrepancy


class ContourError(RuntimeError):
    """A zero sits too close to every trial contour."""


@dataclass(frozen=True)
class Eigenvalue:
    n: int
    lam: complex
    kappa: complex
    residual: float

    def to_dict(self) -> dict:
        return {"n": self.n, "lambda": [self.lam.real, self.lam.imag],
                "kappa": [self.kappa.real, self.kappa.imag], "residual": self.residual}


@dataclass(frozen=True)
class NewtonFailure:
    n: int
    last: complex
    residual: float
    reason: str


@dataclass
class Spectrum:
    j: int
    eigenvalues: list[Eigenvalue]
    certified_through: int = 0
    failures: list[NewtonFailure] = field(default_factory=list)
    winding: int | None = None
    radius: float | None = None

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([e.lam for e in self.eigenvalues], dtype=complex)

    @property
    def kappas(self) -> np.ndarray:
        return np.array([e.kappa for e in self.eigenvalues], dtype=complex)

    @property
    def N(self) -> int:
        return len(self.eigenvalues)

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.eigenvalues])

    @classmethod
    def from_records(cls, j: int, records, certified_through: int | None = None) -> "Spectrum":
        eigs = []
        for r in records:
            lam = complex(*r["lambda"])
            n = int(r["n"])
            kappa = complex(*r["kappa"]) if "kappa" in r else lam - (n - j / 2) ** 2
            eigs.append(Eigenvalue(n, lam, kappa, float(r.get("residual", 0.0))))
        eigs.sort(key=lambda e: e.n)
        return cls(j, eigs, len(eigs) if certified_through is None else certified_through)

    @classmethod
    def from_lambdas(cls, j: int, lambdas) -> "Spectrum":
        """Spectrum with indices 1..N from a plain array (residuals unknown)."""
        eigs = [Eigenvalue(n, complex(lam), complex(lam) - (n - j / 2) ** 2, 0.0)
                for n, lam in enumerate(np.asarray(lambdas, dtype=complex), start=1)]
        return cls(j, eigs, len(eigs))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re", "im", "kappa_re", "kappa_im"])
        for e in self.eigenvalues:
            w.writerow([e.n, repr(e.lam.real), repr(e.lam.imag),
                        repr(e.kappa.real), repr(e.kappa.imag)])
        return buf.getvalue()


def unperturbed(j: int, n) -> np.ndarray:
    return (np.asarray(n, dtype=float) - j / 2) ** 2


def _derivative(j, lam, prob):
    h = 1e-5 * np.maximum(1.0, np.abs(lam))
    return (delta(j, lam + h, prob) - delta(j, lam - h, prob)) / (2 * h)


def residual_scale(j: int, lam, prob: Problem):
    """``max(1, |Delta_j'| |lambda|^(1/2))``."""
    lam = np.asarray(lam, dtype=complex)
    return np.maximum(1.0, np.abs(_derivative(j, lam, prob)) * np.sqrt(np.abs(lam)))


def newton(j: int, prob: Problem, guesses, max_iter: int = MAX_NEWTON, tol: float = RESIDUAL_TOL):
    """Damped Newton from each guess, vectorized; returns (lam, residual/scale, converged)."""
    lam = np.array(guesses, dtype=complex)
    # a step may not leave the neighbourhood of the starting index
    cap = np.maximum(0.5, 0.5 * np.sqrt(np.abs(lam) + 1.0))
    d = delta(j, lam, prob)
    active = np.ones(lam.shape, dtype=bool)
    converged = np.zeros(lam.shape, dtype=bool)
    stall = np.zeros(lam.shape, dtype=int)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        li, di = lam[idx], d[idx]
        dp = _derivative(j, li, prob)
        scale = np.maximum(1.0, np.abs(dp) * np.sqrt(np.abs(li)))
        done = np.abs(di) <= tol * scale
        converged[idx[done]] = True
        active[idx[done]] = False
        keep = ~done
        idx, li, di, dp = idx[keep], li[keep], di[keep], dp[keep]
        if idx.size == 0:
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dp != 0, di / dp, cap[idx])
        big = np.abs(step) > cap[idx]
        step[big] *= cap[idx][big] / np.abs(step[big])
        t = np.ones(idx.size)
        new = li - step
        dn = delta(j, new, prob)
        for _ in range(12):
            worse = np.abs(dn) > np.abs(di)
            if not worse.any():
                break
            t[worse] *= 0.5
            new[worse] = li[worse] - t[worse] * step[worse]
            dn[worse] = delta(j, new[worse], prob)
        tiny = np.abs(new - li) <= 4e-16 * np.maximum(1.0, np.abs(li))
        stall[idx] = np.where(tiny, stall[idx] + 1, 0)
        lam[idx], d[idx] = new, dn
        # rounding floor reached: accept if within the looser tolerance
        stuck = stall[idx] >= 3
        if stuck.any():
            ok = np.abs(dn[stuck]) <= ACCEPT_TOL * scale[stuck]
            converged[idx[stuck][ok]] = True
            active[idx[stuck]] = False
    scale = residual_scale(j, lam, prob)
    res = np.abs(delta(j, lam, prob)) / scale
    converged |= res <= ACCEPT_TOL
    return lam, res, converged


def _duplicates(lam) -> np.ndarray:
    """Mask of entries that coincide with an earlier entry."""
    dup = np.zeros(lam.size, dtype=bool)
    order = np.argsort(lam.real)
    for pos in range(1, lam.size):
        k = order[pos]
        for q in order[max(0, pos - 3):pos]:
            if abs(lam[k] - lam[q]) <= DUPLICATE_RTOL * max(1.0, abs(lam[k])):
                dup[max(k, q)] = True
    return dup


def _fill_missing(j, prob, lam, conv, dup, side=16):
    """Search a lattice in the disk holding the missing indices for zeros not yet found.

    Zeros that stray far from ``(n - j/2)**2`` (strong perturbations push some
    into the complex plane) are not reached from the unperturbed guesses.
    Found zeros are put in the empty slots and all slots re-ordered by real part.
    """
    missing = np.flatnonzero(dup | ~conv)
    R = contour_radius(j, int(missing.max()) + 2) ** 2
    x = np.linspace(-R, R, side)
    grid = (x[:, None] + 1j * x[None, :]).ravel()
    grid = grid[np.abs(grid) <= R]
    cand, _, ok = newton(j, prob, grid)
    found = list(lam[conv & ~dup])
    new = []
    for z in cand[ok][np.argsort(cand[ok].real)]:
        if abs(z) > 1.1 * R:
            continue
        if all(abs(z - w) > DUPLICATE_RTOL * max(1.0, abs(z)) for w in found + new):
            new.append(z)
    lam, conv, dup = lam.copy(), conv.copy(), dup.copy()
    for k, z in zip(missing, sorted(new, key=lambda z: z.real)):
        lam[k], conv[k], dup[k] = z, True, False
    # re-index so n increases with the real part; unresolved slots stay last
    good = conv & ~dup
    order = np.concatenate([np.flatnonzero(good)[np.argsort(lam[good].real)], np.flatnonzero(~good)])
    return lam[order], conv[order], dup[order]


def locate_eigenvalues(prob: Problem, j: int, N: int, certify: bool = True) -> Spectrum:
    """The ``N`` eigenvalues of smallest index, certified against the winding count."""
    if N < 1:
        raise ValueError("N must be at least 1")
    n = np.arange(1, N + 1)
    guess = unperturbed(j, n).astype(complex)
    lam, res, conv = newton(j, prob, guess)
    dup = _duplicates(lam) & conv
    for sign in (1, -1):
        if not dup.any():
            break
        k = np.flatnonzero(dup)
        lam2, res2, conv2 = newton(j, prob, guess[k] + sign * 1j * n[k])
        lam[k], res[k], conv[k] = lam2, res2, conv2
        dup = _duplicates(lam) & conv
    if (dup | ~conv).any():
        lam, conv, dup = _fill_missing(j, prob, lam, conv, dup)
    failures = []
    eigs = []
    for i in range(N):
        if not conv[i] or dup[i]:
            failures.append(NewtonFailure(int(n[i]), complex(lam[i]), float(res[i]),
                                          "duplicate" if dup[i] else "no convergence"))
            continue
        eigs.append(Eigenvalue(int(n[i]), complex(lam[i]), complex(lam[i] - guess[i]), float(res[i])))
    spec = Spectrum(j, eigs, 0, failures)
    if not certify:
        return spec
    count, radius = winding_count(prob, j, N, return_radius=True, avoid=spec.lambdas)
    inside = int(np.sum(np.abs(spec.lambdas) < radius**2))
    spec.winding, spec.radius = count, radius
    if failures or inside != count:
        raise CertificationError(
            f"j={j}, N={N}: winding count {count}, located inside {inside}, failures {len(failures)}",
            spectrum=spec, discrepancy=count - inside)
    spec.certified_through = N
    return spec


def _winding_on_circle(prob, j, R, n0, max_doublings=10):
    m = n0
    for _ in range(max_doublings + 1):
        theta = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
        d = delta(j, R * np.exp(1j * theta), prob, scaled=True)
        if np.any(d == 0) or not np.all(np.isfinite(d)):
            return None
        ph = np.angle(np.roll(d, -1) / d)
        if np.max(np.abs(ph)) < np.pi / 2:
            return int(np.rint(ph.sum() / (2 * np.pi)))
        m *= 2
    return None


def contour_radius(j: int, N: int) -> float:
    """``sqrt`` of the contour radius: midway between unperturbed zeros N and N+1.

    This is ``N + 1/2`` for ``j = 0`` and ``N`` for ``j = 1``; the latter keeps
    the circle off ``(N + 1/2)**2``, which is an unperturbed zero when ``j = 1``.
    """
    return N + 0.5 * (1 - j)


def winding_count(prob: Problem, j: int, N: int, return_radius: bool = False, avoid=None):
    """Number of zeros of ``Delta_j`` inside ``|lambda| = contour_radius(j, N)**2``.

    If a zero lies within ``1e-6`` of the circle (detected from ``avoid`` or by
    the sampling failing to resolve the phase) the radius is moved by +-0.05.
    """
    avoid = np.asarray([] if avoid is None else avoid, dtype=complex)
    r0 = contour_radius(j, N)
    for r in (r0, r0 + 0.05, r0 - 0.05):
        R = r * r
        if avoid.size and np.min(np.abs(np.abs(avoid) - R)) < 1e-6:
            continue
        count = _winding_on_circle(prob, j, R, 8 * N)
        if count is not None:
            return (count, r) if return_radius else count
    raise ContourError(f"zero near every trial contour for N={N}")


def asymptotic_report(spec: Spectrum):
    """Rows ``(n, kappa_n, sqrt(sum_{m<=n} |kappa_m|^2))``."""
    k = spec.kappas
    run = np.sqrt(np.cumsum(np.abs(k) ** 2))
    return [(e.n, e.kappa, float(s)) for e, s in zip(spec.eigenvalues, run)]
