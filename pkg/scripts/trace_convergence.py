"""Partial sums of the trace series against the eigenvalue sums, and the mirrored cancellation."""
import argparse
from dataclasses import dataclass

import numpy as np

from frozen_spectra import fixtures as fx
from frozen_spectra.traces import divergent_example, trace_compare


@dataclass(frozen=True)
class Config:
    N: int = 200
    checkpoints: tuple = (25, 50, 100, 150, 200)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=Config.N)
    N = ap.parse_args(argv).N
    cfg = Config(N, tuple(n for n in Config.checkpoints if n <= N) or (N,))
    prob = fx.smooth_fixture()
    target = complex(prob.p(np.array([prob.a]))[0] + prob.q(np.array([prob.b]))[0])
    for j in (0, 1):
        rows = trace_compare(prob, j, cfg.N)
        print(f"# smooth fixture j={j}, p(a) + q(b) = {target.real:.12f}")
        print(f"{'N':>5} {'eig sum':>16} {'coeff sum':>16} {'gap':>10} {'|coeff - target|':>17}")
        for n in cfg.checkpoints:
            r = rows[n - 1]
            print(f"{n:5d} {r.eig_partial.real:16.10f} {r.coeff_partial.real:16.10f} "
                  f"{r.gap:10.2e} {abs(r.coeff_partial - target):17.3e}")
    rows = trace_compare(divergent_example(), 0, cfg.N)
    print("# mirrored pair: a-series partial sums grow, s_n cancels")
    for n in cfg.checkpoints:
        a_sum = sum(r.a_n for r in rows[:n]).real
        s_max = max(abs(r.s_n) for r in rows[:n])
        print(f"{n:5d} sum a_n = {a_sum:10.6f}  max|s_n| = {s_max:.2e}  eig sum = {abs(rows[n - 1].eig_partial):.2e}")


if __name__ == "__main__":
    main()
