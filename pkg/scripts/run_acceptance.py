"""Run the acceptance checks and print one PASS/FAIL line per criterion."""
import argparse
import sys

from frozen_spectra.acceptance import run_all


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("numbers", nargs="*", type=int, help="criteria to run (default: all)")
    args = ap.parse_args(argv)
    results = run_all(args.numbers or None)
    for r in results:
        print(r.line(), flush=True)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
