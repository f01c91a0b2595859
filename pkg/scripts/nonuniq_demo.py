"""Two different coefficient pairs with identical characteristic functions."""
import argparse
import json
from dataclasses import dataclass

from frozen_spectra import fixtures as fx
from frozen_spectra.charfn import Problem
from frozen_spectra.funcrep import PI, l2_norm, linear_combine
from frozen_spectra.nonuniq import BumpSpec, build_sr, confusable_pairs, verify_coincidence


@dataclass(frozen=True)
class Config:
    a: float = PI / 4
    b: float = PI / 2
    T: float = PI / 4
    n_eigs: int = 20


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", type=float, default=Config.a)
    ap.add_argument("--b", type=float, default=Config.b)
    ap.add_argument("--T", type=float, default=Config.T)
    ap.add_argument("--hat", action="store_true", help="use a hat bump instead of a box")
    ap.add_argument("--n-eigs", type=int, default=Config.n_eigs)
    args = ap.parse_args(argv)
    cfg = Config(args.a, args.b, args.T, args.n_eigs)
    bump = BumpSpec.hat(cfg.T) if args.hat else BumpSpec.box(cfg.T)
    (p1, q1), (p2, q2) = confusable_pairs(*build_sr(bump, cfg.a, cfg.b))
    P1, P2 = Problem(cfg.a, cfg.b, p1, q1), Problem(cfg.a, cfg.b, p2, q2)
    rep = verify_coincidence(P1, P2, cfg.a, cfg.b, fx.lambda_grid(), n_eigs=cfg.n_eigs)
    print(f"|p1 - p2| = {l2_norm(linear_combine(1.0, p1, -1.0, p2)):.6f}")
    print(json.dumps(rep.to_dict(), indent=2))


if __name__ == "__main__":
    main()
