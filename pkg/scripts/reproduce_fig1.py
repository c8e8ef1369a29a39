"""Relativistic sweep (preset fig1): CSV plus the tau -> infinity heat capacity.

    python scripts/reproduce_fig1.py --out results/fig1.csv
"""

import argparse
import dataclasses
from pathlib import Path

from abring.spectrum import Fidelity
from abring.sweep import PRESETS, emit_csv, evaluate_point, run_sweep
from abring.thermo import asymptote_check


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/fig1.csv"))
    parser.add_argument("--fidelity", choices=["paper", "derived"], default="derived")
    args = parser.parse_args()

    config = PRESETS["fig1"]
    config = dataclasses.replace(config, fidelity=Fidelity(args.fidelity))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    rows = run_sweep(config)
    emit_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")

    target = asymptote_check(config.regime)
    for phi in config.flux_ratios:
        hot, _ = evaluate_point(config, phi, 1e4)
        print(f"phi={phi:6.1f}  C_V/Nk at tau=1e4: {hot.cv_per_nk:.6f} (limit {target})")


if __name__ == "__main__":
    main()
