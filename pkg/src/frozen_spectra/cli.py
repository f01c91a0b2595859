"""Command-line front end.

Exit status: 0 on success, 1 on domain failures (certification, reconstruction
consistency, failed checks), 2 on usage errors (bad flags, unreadable or
malformed input files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .charfn import Problem, delta_expanded
from .funcrep import PI
from .fixtures import real_grid
from .inverse import SpectraPair, reconstruct
from .nonuniq import BumpSpec, build_sr, confusable_pairs, verify_coincidence
from .spectrum import CertificationError, ContourError, Spectrum, locate_eigenvalues
from .traces import rows_to_csv, trace_compare

COMMANDS = ("charfn", "spectrum", "trace", "nonuniq-demo", "reconstruct", "verify")
MAX_N = 5000
# reconstruction consistency: junction mismatch, and the share of g0 found on [0, b]
JUNCTION_TOL = 1e-2
LEAK_TOL = 0.25


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    out: str | None = None
    N: int = 200
    M: int = 150
    j: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not (1 <= self.N <= MAX_N):
            raise UsageError(f"N must lie in [1, {MAX_N}], got {self.N}")
        if not (1 <= self.M <= self.N):
            raise UsageError(f"M must lie in [1, N={self.N}], got {self.M}")
        if self.j not in (0, 1):
            raise UsageError("j must be 0 or 1")
        for key, path in self.inputs.items():
            if not Path(path).is_file():
                raise UsageError(f"--{key}: no such file {path}")


def threads() -> int:
    raw = os.environ.get("FROZEN_SPECTRA_THREADS", "")
    if not raw:
        return max(1, min(4, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"FROZEN_SPECTRA_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("FROZEN_SPECTRA_THREADS must be at least 1")
    return n


def write_atomic(path: str | None, text: str):
    """Write via a temporary file in the target directory, then rename."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def load_problem(path: str) -> Problem:
    try:
        return Problem.from_dict(read_json(path))
    except UsageError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def load_spectra(path: str) -> SpectraPair:
    data = read_json(path)
    try:
        if isinstance(data, dict):
            s0, s1 = data["spec0"], data["spec1"]
        else:
            s0, s1 = data
        return SpectraPair(Spectrum.from_records(0, s0), Spectrum.from_records(1, s1))
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: spectra must be {{'spec0': [...], 'spec1': [...]}}: {exc}") from None


# ---------------------------------------------------------------------------
# grids


def parse_grid(spec: str) -> np.ndarray:
    """``lin:START:STOP:STEP`` (real), ``ray:ANGLE:RMAX:COUNT`` or ``list:z1,z2,...``."""
    try:
        kind, _, rest = spec.partition(":")
        if kind == "lin":
            start, stop, step = (float(x) for x in rest.split(":"))
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return start + step * np.arange(n) + 0j
        if kind == "ray":
            angle, rmax, count = rest.split(":")
            r = np.linspace(0.0, float(rmax), int(count))
            return r * np.exp(1j * float(angle))
        if kind == "list":
            return np.array([complex(z.replace(" ", "")) for z in rest.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}: {exc}") from None
    raise UsageError(f"bad grid {spec!r}: expected lin:, ray: or list:")


def grid_export(prob: Problem, j: int, grid) -> str:
    """CSV with one row per grid point and a column pair for every part of ``Delta_j``."""
    grid = np.asarray(grid, dtype=complex)
    with ThreadPoolExecutor(max_workers=threads()) as ex:
        evals = list(ex.map(lambda z: delta_expanded(j, z, prob), grid))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda_re", "lambda_im", "delta_re", "delta_im", "phi_re", "phi_im",
                "A0_re", "A0_im", "A1_re", "A1_im", "B_re", "B_im"])
    for e in evals:
        w.writerow([repr(v) for z in (e.lam, e.total, e.phi_pi, e.A0, e.A1, e.B)
                    for v in (z.real, z.imag)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_charfn(cfg: RunConfig) -> int:
    prob = load_problem(cfg.inputs["problem"])
    write_atomic(cfg.out, grid_export(prob, cfg.j, parse_grid(cfg.options["grid"])))
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    prob = load_problem(cfg.inputs["problem"])
    spec = locate_eigenvalues(prob, cfg.j, cfg.N)
    fmt = cfg.options.get("format", "csv")
    write_atomic(cfg.out, spec.to_csv() if fmt == "csv" else spec.to_json() + "\n")
    return 0


def cmd_trace(cfg: RunConfig) -> int:
    prob = load_problem(cfg.inputs["problem"])
    write_atomic(cfg.out, rows_to_csv(trace_compare(prob, cfg.j, cfg.N)))
    return 0


def cmd_nonuniq(cfg: RunConfig) -> int:
    a, b = cfg.options["a"], cfg.options["b"]
    try:
        bump = BumpSpec.from_dict(read_json(cfg.inputs["bump"]))
        s, r = build_sr(bump, a, b)
    except UsageError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{cfg.inputs['bump']}: {exc}") from None
    pair1, pair2 = confusable_pairs(s, r)
    P1, P2 = Problem(a, b, *pair1), Problem(a, b, *pair2)
    grid = parse_grid(cfg.options["grid"]) if cfg.options.get("grid") else real_grid()
    report = verify_coincidence(P1, P2, a, b, grid, n_eigs=cfg.options.get("n_eigs", 20))
    out = Path(cfg.out or ".")
    write_atomic(str(out / "pair1.json"), P1.to_json() + "\n")
    write_atomic(str(out / "pair2.json"), P2.to_json() + "\n")
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    write_atomic(str(out / "report.json"), text)
    sys.stdout.write(text)
    return 0 if report.passed() else 1


def cmd_reconstruct(cfg: RunConfig) -> int:
    pair = load_spectra(cfg.inputs["spectra"])
    a, b = cfg.options["a"], cfg.options["b"]
    if not (0.0 < a < b < PI):
        raise UsageError("need 0 < a < b < pi")
    if cfg.M > pair.N:
        raise UsageError(f"--m {cfg.M} exceeds the spectra length {pair.N}")
    res = reconstruct(pair, a, b, cfg.M)
    doc = Problem(a, b, res.p, res.q).to_dict()
    doc["diagnostics"] = {"M": res.M, "window_count": res.window_count, "residuals": res.residuals}
    write_atomic(cfg.out, json.dumps(doc) + "\n")
    junction, leak = res.residuals["junction"], res.residuals["g0_leak_rel"]
    if junction > cfg.options.get("junction_tol", JUNCTION_TOL):
        sys.stderr.write(f"inconsistent reconstruction: junction mismatch {junction:.3g}\n")
        return 1
    if leak > cfg.options.get("leak_tol", LEAK_TOL):
        sys.stderr.write(f"inconsistent reconstruction: data leak on [0, b] is {leak:.3g} of its norm;"
                         " the coefficients are probably not zero on [0, b]\n")
        return 1
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from .acceptance import CHECKS, run_check
    suite = cfg.options.get("suite", "all")
    known = [k for k, *_ in CHECKS]
    try:
        numbers = known if suite == "all" else [int(x) for x in suite.split(",")]
    except ValueError:
        raise UsageError(f"--suite must be 'all' or check numbers, got {suite!r}") from None
    unknown = sorted(set(numbers) - set(known))
    if unknown:
        raise UsageError(f"--suite: no checks numbered {unknown}; known {known}")
    failed = 0
    lines = []
    for k in numbers:
        res = run_check(k)
        line = res.line()
        print(line, flush=True)
        lines.append(line)
        failed += not res.passed
    if cfg.out:
        write_atomic(cfg.out, "\n".join(lines) + "\n")
    return 1 if failed else 0


HANDLERS = {"charfn": cmd_charfn, "spectrum": cmd_spectrum, "trace": cmd_trace,
            "nonuniq-demo": cmd_nonuniq, "reconstruct": cmd_reconstruct, "verify": cmd_verify}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frozen-spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("charfn", help="tabulate Delta_j and its parts on a lambda grid")
    p.add_argument("--problem", required=True)
    p.add_argument("--j", type=int, default=0, choices=(0, 1))
    p.add_argument("--grid", required=True, help="lin:START:STOP:STEP, ray:ANGLE:RMAX:COUNT or list:z1,z2")
    p.add_argument("--out")

    p = sub.add_parser("spectrum", help="locate and certify eigenvalues")
    p.add_argument("--problem", required=True)
    p.add_argument("--j", type=int, default=0, choices=(0, 1))
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("trace", help="regularized trace partial sums")
    p.add_argument("--problem", required=True)
    p.add_argument("--j", type=int, default=0, choices=(0, 1))
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--out")

    p = sub.add_parser("nonuniq-demo", help="build two iso-spectral pairs from a bump")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--bump", required=True)
    p.add_argument("--grid")
    p.add_argument("--n-eigs", type=int, default=20)
    p.add_argument("--out", help="output directory (default: current directory)")

    p = sub.add_parser("reconstruct", help="recover right-supported p, q from two spectra")
    p.add_argument("--spectra", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--m", type=int, default=150)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--suite", default="all", help="'all' or a comma-separated list of check numbers")
    p.add_argument("--out")
    return parser


def config_from_args(args) -> RunConfig:
    cmd = args.command
    inputs = {k: getattr(args, k) for k in ("problem", "bump", "spectra") if getattr(args, k, None)}
    options = {}
    for k in ("grid", "format", "a", "b", "suite", "n_eigs"):
        if getattr(args, k, None) is not None:
            options[k] = getattr(args, k)
    # the spectra length bounds M for reconstruct; it is checked once they are loaded
    N = MAX_N if cmd == "reconstruct" else getattr(args, "n", 200)
    M = getattr(args, "m", min(150, N))
    return RunConfig(cmd, inputs, getattr(args, "out", None), N=N, M=M,
                     j=getattr(args, "j", 0), options=options)


def run(cfg: RunConfig) -> int:
    return HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        return run(cfg)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except (CertificationError, ContourError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
