"""Cross-check the Z1 engines against direct summation over a log-spaced beta grid.

    python scripts/compare_engines.py --regime relativistic --beta-min 1e-3
"""

import argparse
import dataclasses

from abring.partition import Method
from abring.sweep import PRESETS, GridScale, METHODS_BY_REGIME, compare_methods, emit_comparison_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--regime", choices=["relativistic", "nonrelativistic"], default="relativistic")
    parser.add_argument("--beta-min", type=float, default=1e-3)
    parser.add_argument("--beta-max", type=float, default=1e-1)
    parser.add_argument("--steps", type=int, default=5)
    parser.add_argument("--max-terms", type=int, default=10**9)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    base = PRESETS["fig1" if args.regime == "relativistic" else "fig2"]
    config = dataclasses.replace(
        base, tau_min=1 / args.beta_max, tau_max=1 / args.beta_min, tau_steps=args.steps,
        grid=GridScale.LOG, max_terms=args.max_terms,
    )
    methods = sorted(METHODS_BY_REGIME[config.regime], key=lambda m: m is not Method.DIRECT)
    rows = compare_methods(config, methods)
    text = emit_comparison_csv(rows, args.out)
    if args.out is None:
        print(text, end="")
    for row in rows:
        pair = "/".join(m.value for m in row.max_pair) if row.max_pair else "-"
        print(f"# phi={row.phi:6.1f} beta={1 / row.tau:.1e} max dev {row.max_deviation:.2e} ({pair})")


if __name__ == "__main__":
    main()
