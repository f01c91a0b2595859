"""Reconstruct right-supported coefficients from two computed spectra and compare with the truth."""
import argparse
from dataclasses import dataclass

import numpy as np

from frozen_spectra import fixtures as fx
from frozen_spectra.charfn import w_function
from frozen_spectra.funcrep import PI, TrigSeries, fourier_coeff
from frozen_spectra.inverse import SpectraPair, recover_W, reconstruct, relative_l2
from frozen_spectra.spectrum import locate_eigenvalues


def projection(W, basis, M):
    """L2-optimal truncation of ``W`` to ``M`` terms of ``basis``."""
    c = np.array([fourier_coeff(W, basis, m) for m in range(1, M + 1)]) * 2 / PI
    return TrigSeries(basis, np.concatenate([[0.0], c]) if basis == "cosine" else c)


@dataclass(frozen=True)
class Config:
    N: int = 200
    Ms: tuple = (25, 50, 100, 150)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=Config.N)
    N = ap.parse_args(argv).N
    cfg = Config(N, tuple(m for m in Config.Ms if m <= N) or (N,))
    cases = {"box": fx.right_supported(), "smooth": fx.right_supported_smooth()}
    for name, prob in cases.items():
        pair = SpectraPair(locate_eigenvalues(prob, 0, cfg.N), locate_eigenvalues(prob, 1, cfg.N))
        print(f"# {name}: a={prob.a}, b={prob.b}")
        print(f"{'M':>5} {'err p':>10} {'err q':>10} {'leak/|g0|':>10}")
        for M in cfg.Ms:
            res = reconstruct(pair, prob.a, prob.b, M)
            print(f"{M:5d} {relative_l2(res.p, prob.p):10.3e} {relative_l2(res.q, prob.q):10.3e} "
                  f"{res.residuals['g0_leak_rel']:10.3e}")
        M = cfg.Ms[-1]
        for j, (basis, spec) in enumerate([("cosine", pair.spec0), ("half_sine", pair.spec1)]):
            W = w_function(j, prob.p, prob.q, prob.a, prob.b)
            print(f"  W{j} with {M} modes: recovered {relative_l2(recover_W(j, spec, M), W):.3e}, "
                  f"projection {relative_l2(projection(W, basis, M), W):.3e}")


if __name__ == "__main__":
    main()
