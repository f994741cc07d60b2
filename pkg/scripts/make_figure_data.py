#!/usr/bin/env python3
"""Regenerate the reference data sets for every CLI subcommand.

Each block below reproduces one of the standard experiment setups on
the k1 = 1, k2 = 2.3 diatomic chain (and the two-layer / 2D variants)
and writes the CSV/JSON outputs under --out, one subdirectory per run.
The frontend figure recipes consume these files unchanged.
"""

import argparse
import sys

from chainspectra.cli import main as cli

RUNS = {
    "spectrum": [
        "spectrum", "--n", "50", "--k1", "1", "--k2", "2.3",
        "--k31", "1.3", "--k32", "3.5",
    ],
    "phase": [
        "phase-diagram", "--n", "50", "--k1", "1",
        "--k2-start", "2.3", "--k2-stop", "2.3", "--k2-count", "1",
        "--k31-start", "0", "--k31-stop", "6", "--k31-count", "41",
        "--k32", "3.5",
    ],
    "sweep": [
        "sweep-k32", "--n", "25", "--k1", "1", "--k2", "1.3",
        "--k31", "1.6", "--k32-start", "0.2", "--k32-stop", "3.0",
        "--k32-count", "57",
    ],
    "band_edge": [
        "band-edge", "--k1", "1", "--k2", "1.7", "--k31", "1.6",
        "--a", "-1", "--sigma", "1",
        "--n-start", "50", "--n-stop", "200", "--n-count", "7",
    ],
    "inband": [
        "inband", "--n", "50", "--k1", "1", "--k2", "2.3",
        "--k31", "1.3", "--k32", "3.5", "--band", "Optical",
        "--edge", "Lower", "--k-max", "5",
    ],
    "branch": [
        "continue", "--n", "100", "--k1", "1", "--k2", "2.3",
        "--k31", "1.3", "--k32", "3.5", "--b", "1.0",
        "--amp-start", "0.01", "--amp-stop", "2.0",
    ],
    "two_layer": [
        "two-layer", "--n", "50", "--k1", "1", "--k2", "1.9",
        "--k5", "1.4", "--k6", "1.7", "--k31", "0", "--k32", "0",
        "--k41", "1.6", "--k42", "1.6",
    ],
    "lattice2d": [
        "lattice2d", "--N", "40", "--k1", "1", "--k2", "1.9",
        "--k4", "4.3", "--k5", "3.9", "--k6", "5.1",
    ],
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/figure_data")
    ap.add_argument("--only", choices=sorted(RUNS), action="append",
                    help="restrict to the named run(s)")
    args = ap.parse_args()

    names = args.only or sorted(RUNS)
    for name in names:
        argv = RUNS[name] + ["--out", f"{args.out}/{name}"]
        print(f"[{name}] chainspectra {' '.join(argv)}")
        code = cli(argv)
        if code != 0:
            print(f"[{name}] failed with exit code {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
