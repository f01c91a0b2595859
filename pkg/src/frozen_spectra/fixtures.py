"""Named problems and evaluation grids shared by tests, scripts and ``verify``."""

from __future__ import annotations

import numpy as np

from .charfn import Problem
from .funcrep import PI, PiecewisePoly, TrigSeries
from .nonuniq import BumpSpec, admissible_T


def random_piecewise(rng, n_pieces=3, degree=2, scale=1.0, complex_valued=True):
    inner = np.sort(rng.uniform(0.2, PI - 0.2, n_pieces - 1))
    bp = np.concatenate([[0.0], inner, [PI]])
    coeffs = np.zeros((n_pieces, 4), dtype=complex)
    coeffs[:, : degree + 1] = rng.normal(size=(n_pieces, degree + 1))
    if complex_valued:
        coeffs[:, : degree + 1] += 1j * rng.normal(size=(n_pieces, degree + 1))
    return PiecewisePoly(bp, scale * coeffs)


def random_problem(rng, **kw):
    a, b = np.sort(rng.uniform(0.15, PI - 0.15, 2))
    while b - a < 0.1:
        a, b = np.sort(rng.uniform(0.15, PI - 0.15, 2))
    return Problem(float(a), float(b), random_piecewise(rng, **kw), random_piecewise(rng, **kw))


def lambda_grid() -> np.ndarray:
    """40 complex points with |lambda| <= 500: near-real, and rays arg 0, pi/4, pi/2."""
    r = np.geomspace(0.7, 500.0, 10)
    near_real = np.linspace(-40.0, 480.0, 10) + 0.01j
    return np.concatenate([
        r,
        r * np.exp(0.25j * PI),
        r * np.exp(0.5j * PI),
        near_real,
    ])


def real_grid(n=50, lo=-5.0, hi=400.0) -> np.ndarray:
    return np.linspace(lo, hi, n) + 0j


def ex31_pairs():
    """Both coefficient pairs of the worked box example with a = pi/4, b = pi/2."""
    chi_s = PiecewisePoly.indicator(PI / 4, 3 * PI / 4)
    chi_r = PiecewisePoly.indicator(0.0, PI / 2)
    a, b = PI / 4, PI / 2
    pair1 = Problem(a, b, chi_r, chi_s - chi_r)
    pair2 = Problem(a, b, chi_r - chi_s, chi_s)
    return pair1, pair2


def smooth_fixture() -> Problem:
    return Problem(1.0, 2.0, TrigSeries("sine", [1.0]), TrigSeries("cosine", [0.0, 1.0]))


def right_supported(a=1.0, b=1.8) -> Problem:
    p = PiecewisePoly.indicator(b, b + 0.3)
    q = PiecewisePoly.indicator(b + 0.2, PI, 0.5)
    return Problem(a, b, p, q)


def smooth_bump(lo, hi, height=1.0, pieces=64) -> PiecewisePoly:
    """Cubic interpolant of ``height * sin^4(pi (t - lo)/(hi - lo))`` on ``[lo, hi]``, zero elsewhere."""
    inner = np.linspace(lo, hi, pieces + 1)
    bp = np.unique(np.concatenate([[0.0], inner, [PI]]))

    def f(t):
        x = (t - lo) / (hi - lo)
        return np.where((x > 0) & (x < 1), height * np.sin(np.pi * x) ** 4, 0.0)
    return PiecewisePoly.from_function(f, bp, 3)


def right_supported_smooth(a=1.0, b=1.8) -> Problem:
    """Right-supported fixture with continuous coefficients (no Fourier truncation floor)."""
    return Problem(a, b, smooth_bump(b, b + 0.9), smooth_bump(b + 0.2, PI, 0.5))


def random_bump(rng, T, knots=4) -> BumpSpec:
    """Random piecewise-linear even bump on [-T, T]."""
    x = np.sort(rng.uniform(0.0, T, knots - 1))
    x = np.concatenate([[0.0], x, [T]])
    y = rng.normal(size=x.size)
    pieces = [(x0, x1, [y0, (y1 - y0) / (x1 - x0)])
              for x0, x1, y0, y1 in zip(x[:-1], x[1:], y[:-1], y[1:]) if x1 - x0 > 1e-9]
    return BumpSpec(PiecewisePoly.from_pieces(pieces), T)


def random_admissible(rng):
    """Random ``(a, b, bump)`` with the bump using the full admissible half-width."""
    a, b = np.sort(rng.uniform(0.2, PI - 0.2, 2))
    while admissible_T(a, b) < 0.1:
        a, b = np.sort(rng.uniform(0.2, PI - 0.2, 2))
    return float(a), float(b), random_bump(rng, admissible_T(a, b))


def forward_fixtures() -> dict:
    """Problems on which the forward solver is checked."""
    p1, p2 = ex31_pairs()
    return {
        "box_pair1": p1,
        "box_pair2": p2,
        "smooth": smooth_fixture(),
        "right_box": right_supported(),
        "right_box_wide": right_supported(1.4, 2.0),
    }
