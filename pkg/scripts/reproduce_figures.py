"""Writes the composition-bound datasets for both figures into a directory.

    python scripts/reproduce_figures.py --out-dir results/
"""

import argparse
import pathlib
import sys

from renyi_dp.cli import main


def run(out_dir: pathlib.Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (["figure2", "--mechanism", "rr", "--baseline", str(q)], f"figure2_rr_q{q:g}.csv")
        for q in (1e-6, 1e-3, 0.1)
    ] + [
        (["figure2", "--mechanism", "laplace", "--baseline", str(q)], f"figure2_laplace_q{q:g}.csv")
        for q in (1e-6, 1e-3, 0.1)
    ] + [(["figure3"], "figure3.csv")]
    for argv, name in jobs:
        code = main(argv + ["--out", str(out_dir / name)])
        if code:
            return code
        print(f"wrote {out_dir / name}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("results"))
    sys.exit(run(parser.parse_args().out_dir))
