"""Command-line front end: ``abring sweep|compare|point|show-config``.

Exit codes: 0 on success, 2 if any sweep row failed, 1 on configuration or
I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from abring.errors import ABRingError, ConfigError
from abring.partition import Method
from abring.sweep import (
    METHODS_BY_REGIME,
    PRESETS,
    compare_methods,
    emit_comparison_csv,
    emit_csv,
    evaluate_point,
    format_config,
    read_config_file,
    resolve_config,
    run_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_ROW_FAILED = 0, 1, 2


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--regime", help="relativistic | nonrelativistic")
    p.add_argument("--flux-ratio", action="append", metavar="PHI",
                   help="flux ratio Phi/Phi_0; repeat for several values")
    p.add_argument("--mass")
    p.add_argument("--radius")
    p.add_argument("--n-fermions")
    p.add_argument("--tau-min")
    p.add_argument("--tau-max")
    p.add_argument("--tau-steps")
    p.add_argument("--grid", help="linear | log")
    p.add_argument("--method", help="direct | em | high-t | geometric")
    p.add_argument("--fidelity", help="paper | derived")
    p.add_argument("--em-order", help="0 | 1 | 2")
    p.add_argument("--tail-tolerance")
    p.add_argument("--max-terms")
    p.add_argument("--exact-levels", action="store_const", const="true",
                   help="direct sums run over the exact spectrum instead of the linearized one")
    p.add_argument("--out", metavar="PATH", help="CSV destination (default: standard output)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="abring",
        description="Canonical thermodynamics of Dirac fermions on an Aharonov-Bohm ring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="temperature sweep to CSV")
    compare = sub.add_parser("compare", parents=[common], help="cross-check partition engines")
    compare.add_argument("--methods", help="comma-separated methods (default: all for the regime)")
    point = sub.add_parser("point", parents=[common], help="one thermodynamic point as JSON")
    point.add_argument("--tau", required=True, type=float)
    sub.add_parser("show-config", parents=[common], help="print the resolved configuration")
    return parser


_KEYS = ("preset", "regime", "mass", "radius", "n_fermions", "tau_min", "tau_max", "tau_steps",
         "grid", "method", "fidelity", "em_order", "tail_tolerance", "max_terms", "exact_levels", "out")


def config_from_args(args):
    overrides = {key: getattr(args, key) for key in _KEYS}
    if args.flux_ratio:
        overrides["flux_ratios"] = ",".join(args.flux_ratio)
    file_values = read_config_file(args.config) if args.config else None
    return resolve_config(overrides, file_values)


def _report_failures(rows):
    failed = [row for row in rows if row.failed]
    for row in failed[:5]:
        print(f"row phi={row.phi!r} tau={row.tau!r} failed: {row.error}", file=sys.stderr)
    if len(failed) > 5:
        print(f"... {len(failed) - 5} more failed rows", file=sys.stderr)
    return EXIT_ROW_FAILED if failed else EXIT_OK


def _parse_methods(text, config):
    if not text:
        return list(METHODS_BY_REGIME[config.regime])
    try:
        return [Method(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"methods: {exc}") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "show-config":
            sys.stdout.write(format_config(config))
            return EXIT_OK

        if args.command == "point":
            if len(config.flux_ratios) != 1:
                raise ConfigError("point: give exactly one --flux-ratio")
            if not args.tau > 0:
                raise ConfigError(f"tau: need > 0, got {args.tau!r}")
            try:
                point, validity = evaluate_point(config, config.flux_ratios[0], args.tau)
            except ABRingError as exc:
                print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
                return EXIT_ROW_FAILED
            record = {
                "regime": point.regime.value, "method": config.method.value,
                "fidelity": config.fidelity.value, "source": point.source.value,
                "phi": config.flux_ratios[0], "tau": point.tau,
                "F_per_N": point.f_per_n, "U_per_N": point.u_per_n,
                "S_per_NkB": point.s_per_nk, "Cv_per_NkB": point.cv_per_nk, "validity": validity,
            }
            print(json.dumps(record, indent=2))
            return EXIT_OK

        if args.command == "compare":
            rows = compare_methods(config, _parse_methods(args.methods, config))
            text = emit_comparison_csv(rows, config.out)
            if config.out is None:
                sys.stdout.write(text)
            worst = max((r for r in rows if r.deviations), key=lambda r: r.max_deviation, default=None)
            if worst is not None:
                a, b = worst.max_pair
                print(f"max relative deviation {worst.max_deviation:.3e} ({a.value} vs {b.value}) "
                      f"at phi={worst.phi!r}, tau={worst.tau!r}", file=sys.stderr)
            return EXIT_ROW_FAILED if any(r.errors for r in rows) else EXIT_OK

        rows = run_sweep(config)
        text = emit_csv(rows, config.out)
        if config.out is None:
            sys.stdout.write(text)
        return _report_failures(rows)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
