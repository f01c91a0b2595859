"""Acceptance checks shared by the test suite and ``frozen-spectra verify``.

Each check returns a :class:`CheckResult` carrying the measured quantities, so
a failing check still reports how far it is from its band.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import fixtures as fx
from .charfn import Problem, a_term, delta, delta_determinant, w_function
from .funcrep import PI, PiecewisePoly, TrigSeries, moment_integral
from .inverse import SpectraPair, reconstruct, relative_l2, staircase_solve
from .nonuniq import box_example, box_example_delta, build_sr, relative_gap
from .oracles import galerkin_eigenvalues, moment_quad
from .spectrum import CertificationError, asymptotic_report, locate_eigenvalues
from .traces import divergent_example, trace_compare


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    budget: float
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.seconds:.1f}s/{self.budget:.0f}s"
        info = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"[{status}] {self.number}. {self.name} ({timing}) {info}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _timed(number, name, budget, fn) -> CheckResult:
    t0 = time.perf_counter()
    ok, details = fn()
    dt = time.perf_counter() - t0
    return CheckResult(number, name, bool(ok) and dt < budget, budget, dt, details)


def dual_path(n_problems=20, seed=2024):
    rng = np.random.default_rng(seed)
    grid = fx.lambda_grid()
    worst = 0.0
    for _ in range(n_problems):
        prob = fx.random_problem(rng)
        for j in (0, 1):
            e = delta(j, grid, prob)
            d = delta_determinant(j, grid, prob)
            worst = max(worst, float(np.max(np.abs(d - e) / (1 + np.abs(e)))))
    return worst <= 1e-10, {"worst_rel": worst}


def unperturbed_spectra(N=20):
    zero = Problem.zero()
    n = np.arange(1, N + 1)
    err = [float(np.max(np.abs(locate_eigenvalues(zero, j, N).lambdas - (n - j / 2) ** 2)))
           for j in (0, 1)]
    return max(err) <= 1e-12, {"err_j0": err[0], "err_j1": err[1]}


def box_example_reproduction(n_eigs=20):
    a, b, p1, p2 = box_example()
    grid = fx.real_grid()
    out = {}
    for j in (0, 1):
        d1, d2 = delta(j, grid, p1), delta(j, grid, p2)
        closed = box_example_delta(j, grid)
        out[f"pairs_j{j}"] = float(np.max(relative_gap(j, grid, d1, d2)))
        out[f"closed_j{j}"] = float(np.max(np.maximum(relative_gap(j, grid, d1, closed),
                                                      relative_gap(j, grid, d2, closed))))
        e1 = locate_eigenvalues(p1, j, n_eigs).lambdas
        e2 = locate_eigenvalues(p2, j, n_eigs).lambdas
        out[f"eig_j{j}"] = float(np.max(np.abs(e1 - e2)))
    ok = all(v <= 1e-10 for k, v in out.items() if not k.startswith("eig")) and \
        all(v <= 1e-8 for k, v in out.items() if k.startswith("eig"))
    return ok, out


def lemma_bumps(n_bumps=10, seed=7):
    rng = np.random.default_rng(seed)
    grid = fx.real_grid()
    worst = 0.0
    for _ in range(n_bumps):
        a, b, bump = fx.random_admissible(rng)
        s, r = build_sr(bump, a, b)
        prob = Problem(a, b, s, r)
        for j in (0, 1):
            A = a_term(j, 0, grid, prob) + a_term(j, 1, grid, prob)
            worst = max(worst, float(np.max(np.abs(A))))
    return worst <= 1e-11, {"max_abs_A": worst}


def asymptotics(N=200):
    out = {}
    ok = True
    for name, prob in fx.forward_fixtures().items():
        for j in (0, 1):
            spec = locate_eigenvalues(prob, j, N)
            rep = asymptotic_report(spec)
            rise = rep[199][2] - rep[149][2]
            gal = float(np.max(np.abs(galerkin_eigenvalues(prob, j, 400, 10) - spec.lambdas[:10])))
            out[f"{name}_j{j}_rise"] = rise
            out[f"{name}_j{j}_galerkin"] = gal
            ok &= rise < 1e-4 and gal <= 1e-6
    return ok, out


def trace_equality(N=200):
    prob = fx.smooth_fixture()
    target = np.sin(1.0) + np.cos(2.0)
    out = {}
    for j in (0, 1):
        last = trace_compare(prob, j, N)[-1]
        out[f"eig_j{j}"] = abs(last.eig_partial - target)
        out[f"coeff_j{j}"] = abs(last.coeff_partial - target)
    rows = trace_compare(divergent_example(), 0, N)
    out["mirror_max_s"] = max(abs(r.s_n) for r in rows)
    out["mirror_eig_sum"] = abs(rows[-1].eig_partial)
    out["mirror_a_sum20"] = float(sum(r.a_n for r in rows[:20]).real)
    ok = (all(out[f"{k}_j{j}"] <= 2e-3 for k in ("eig", "coeff") for j in (0, 1))
          and out["mirror_max_s"] <= 1e-14 and out["mirror_eig_sum"] <= 2e-3
          and out["mirror_a_sum20"] > 1.0)
    return ok, out


def inverse_round_trip(N=200, M=150):
    out = {}
    ok = True
    for a, b in ((1.0, 1.8), (1.4, 2.0)):
        prob = fx.right_supported(a, b)
        tag = "sum_lt_pi" if a + b < PI else "sum_gt_pi"
        exact = staircase_solve(w_function(0, prob.p, prob.q, a, b),
                                w_function(1, prob.p, prob.q, a, b), a, b)
        ex = max(relative_l2(exact.p, prob.p), relative_l2(exact.q, prob.q))
        pair = SpectraPair(locate_eigenvalues(prob, 0, N), locate_eigenvalues(prob, 1, N))
        rec = reconstruct(pair, a, b, M)
        ep, eq = relative_l2(rec.p, prob.p), relative_l2(rec.q, prob.q)
        out[f"{tag}_exact"] = ex
        out[f"{tag}_p"] = ep
        out[f"{tag}_q"] = eq
        ok &= ex <= 1e-10 and ep <= 1e-2 and eq <= 1e-2
    return ok, out


def certification(Ns=(10, 50, 200)):
    bad = []
    checked = 0
    probs = dict(fx.forward_fixtures(), zero=Problem.zero())
    for name, prob in probs.items():
        for j in (0, 1):
            for N in Ns:
                try:
                    spec = locate_eigenvalues(prob, j, N)
                    inside = int(np.sum(np.abs(spec.lambdas) < spec.radius**2))
                    if inside != spec.winding:
                        bad.append(f"{name}/j{j}/N{N}")
                except CertificationError:
                    bad.append(f"{name}/j{j}/N{N}")
                checked += 1
    return not bad, {"checked": checked, "mismatches": bad or "none"}


RHO_GRID = np.array([0.01, 0.5, 1.0, 2.5, 7.0, 15.5])


def oracle_functions() -> dict:
    return {
        "constant": PiecewisePoly.constant(1.0),
        "indicator": PiecewisePoly.indicator(0.4, 2.2, 1.5 - 0.5j),
        "cubic": PiecewisePoly(np.array([0.0, 0.7, 1.9, PI]),
                               np.array([[1.0, -0.5, 0.3, 0.1], [0.2, 0.4j, -0.7, 0.05],
                                         [-1.0, 0.0, 0.25, -0.1]])),
        "sine": TrigSeries("sine", [0.5, -0.25, 0.0, 0.125j]),
        "cosine": TrigSeries("cosine", [0.3, 1.0, 0.0, -0.4]),
        "half_sine": TrigSeries("half_sine", [1.0, 0.5j, -0.2]),
        "half_cosine": TrigSeries("half_cosine", [0.7, 0.0, -0.3]),
    }


def moment_oracle(intervals=((0.0, PI), (0.3, 2.6))):
    worst = 0.0
    count = 0
    for f in oracle_functions().values():
        for r in np.concatenate([RHO_GRID, 1j * RHO_GRID]):
            for kind in ("sin", "cos"):
                for mode in ("t", "d-t", "t-c"):
                    for c, d in intervals:
                        got = moment_integral(f, r, kind, c, d, mode)
                        ref = moment_quad(f, r, kind, c, d, mode)
                        # scale by the size of the integrand for imaginary rho
                        scale = max(1.0, np.cosh(abs(r.imag) * d))
                        worst = max(worst, abs(got - ref) / scale)
                        count += 1
    return worst <= 1e-11, {"worst": worst, "integrals": count}


CHECKS = [
    (1, "dual-path identity", 5.0, dual_path),
    (2, "unperturbed spectra", 1.0, unperturbed_spectra),
    (3, "box example reproduction", 10.0, box_example_reproduction),
    (4, "bump annihilates A_j", 5.0, lemma_bumps),
    (5, "eigenvalue asymptotics", 60.0, asymptotics),
    (6, "regularized trace", 60.0, trace_equality),
    (7, "inverse round trip", 120.0, inverse_round_trip),
    (8, "certification soundness", 60.0, certification),
    (9, "moment oracle", 10.0, moment_oracle),
]


def run_check(number: int) -> CheckResult:
    for k, name, budget, fn in CHECKS:
        if k == number:
            return _timed(k, name, budget, fn)
    raise KeyError(number)


def run_all(numbers=None) -> list[CheckResult]:
    return [run_check(k) for k, *_ in CHECKS if numbers is None or k in numbers]
