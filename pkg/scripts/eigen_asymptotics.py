"""Tabulate kappa_n = lambda_n - (n - j/2)^2 and the running l2 norm for the forward fixtures."""
import argparse
from dataclasses import dataclass

import numpy as np

from frozen_spectra import fixtures as fx
from frozen_spectra.spectrum import asymptotic_report, locate_eigenvalues


@dataclass(frozen=True)
class Config:
    N: int = 200
    stride: int = 25


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--stride", type=int, default=Config.stride)
    cfg = Config(**vars(ap.parse_args(argv)))
    for name, prob in sorted(fx.forward_fixtures().items()):
        for j in (0, 1):
            rep = asymptotic_report(locate_eigenvalues(prob, j, cfg.N))
            print(f"# {name} j={j}")
            print(f"{'n':>5} {'|kappa_n|':>12} {'n|kappa_n|':>12} {'running l2':>12}")
            for n, k, s in rep[cfg.stride - 1::cfg.stride]:
                print(f"{n:5d} {abs(k):12.4e} {n * abs(k):12.4e} {s:12.6e}")
            run = np.array([s for *_, s in rep])
            print(f"  rise over n in [{cfg.N * 3 // 4}, {cfg.N}]: {run[-1] - run[cfg.N * 3 // 4 - 1]:.3e}")


if __name__ == "__main__":
    main()
