"""Temperature sweeps, method comparisons, CSV output and run configuration."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import itertools
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from abring.errors import ABRingError, ConfigError
from abring.partition import Method, SummationConfig, single_particle_z1, zN_log
from abring.spectrum import (
    Fidelity,
    Regime,
    RingParams,
    nonrelativistic_coefficients,
    relativistic_coefficients,
)
from abring.thermo import ThermoPoint, thermo_nonrel_closed, thermo_numeric, thermo_rel_closed

__all__ = [
    "GridScale",
    "SweepConfig",
    "SweepRow",
    "ComparisonRow",
    "PRESETS",
    "CSV_HEADER",
    "METHODS_BY_REGIME",
    "read_config_file",
    "resolve_config",
    "format_config",
    "evaluate_point",
    "run_sweep",
    "compare_methods",
    "emit_csv",
    "emit_comparison_csv",
]

CSV_HEADER = (
    "regime", "method", "fidelity", "phi", "tau",
    "F_per_N", "U_per_N", "S_per_NkB", "Cv_per_NkB", "validity", "error",
)

METHODS_BY_REGIME = {
    Regime.RELATIVISTIC: (Method.DIRECT, Method.EULER_MACLAURIN, Method.HIGH_T),
    Regime.NONRELATIVISTIC: (Method.DIRECT, Method.GEOMETRIC),
}
_CLOSED_FORM = {Regime.RELATIVISTIC: Method.HIGH_T, Regime.NONRELATIVISTIC: Method.GEOMETRIC}


class GridScale(enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class SweepConfig:
    regime: Regime = Regime.RELATIVISTIC
    flux_ratios: tuple[float, ...] = (50.0, 100.0, 150.0, 200.0)
    tau_min: float = 0.2
    tau_max: float = 20.0
    tau_steps: int = 100
    grid: GridScale = GridScale.LINEAR
    method: Method = Method.HIGH_T
    fidelity: Fidelity = Fidelity.DERIVED_CONSISTENT
    mass: float = 1.0
    radius: float = 1.0
    n_fermions: int = 1
    em_order: int = 2
    tail_tolerance: float = 1e-14
    max_terms: int = 10_000_000
    exact_levels: bool = False
    out: str | None = None

    def __post_init__(self):
        if not self.flux_ratios:
            raise ConfigError("flux_ratios: need at least one value")
        for phi in self.flux_ratios:
            if not phi >= 0 or not math.isfinite(phi):
                raise ConfigError(f"flux_ratios: each value must be finite and >= 0, got {phi!r}")
            if phi == 0 and self.method in _CLOSED_FORM.values():
                raise ConfigError(
                    f"flux_ratios: closed-form method {self.method.value!r} needs every value > 0"
                )
        if not 0 < self.tau_min < self.tau_max or not math.isfinite(self.tau_max):
            raise ConfigError(
                f"tau_min/tau_max: need 0 < tau_min < tau_max, got tau_min={self.tau_min!r}, "
                f"tau_max={self.tau_max!r}"
            )
        if int(self.tau_steps) != self.tau_steps or self.tau_steps < 2:
            raise ConfigError(f"tau_steps: need an integer >= 2, got {self.tau_steps!r}")
        if self.method not in METHODS_BY_REGIME[self.regime]:
            allowed = ", ".join(m.value for m in METHODS_BY_REGIME[self.regime])
            raise ConfigError(
                f"method: {self.method.value!r} is not available for the {self.regime.value} "
                f"regime (accepted: {allowed})"
            )
        if self.exact_levels and self.method is not Method.DIRECT:
            raise ConfigError("exact_levels: only valid with method=direct")
        if not self.mass > 0:
            raise ConfigError(f"mass: need > 0, got {self.mass!r}")
        if not self.radius > 0:
            raise ConfigError(f"radius: need > 0, got {self.radius!r}")
        if int(self.n_fermions) != self.n_fermions or self.n_fermions < 1:
            raise ConfigError(f"n_fermions: need an integer >= 1, got {self.n_fermions!r}")
        if self.em_order not in (0, 1, 2):
            raise ConfigError(f"em_order: need 0, 1 or 2, got {self.em_order!r}")
        if not 0 < self.tail_tolerance < 1:
            raise ConfigError(f"tail_tolerance: need a value in (0, 1), got {self.tail_tolerance!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ConfigError(f"max_terms: need an integer >= 1, got {self.max_terms!r}")

    def taus(self) -> np.ndarray:
        if self.grid is GridScale.LOG:
            return np.geomspace(self.tau_min, self.tau_max, self.tau_steps)
        return np.linspace(self.tau_min, self.tau_max, self.tau_steps)

    def ring(self, phi: float) -> RingParams:
        return RingParams(
            mass=self.mass, radius=self.radius, flux_ratio=phi, charge_sign=-1,
            particle_count=self.n_fermions,
        )

    def summation(self, method: Method | None = None) -> SummationConfig:
        return SummationConfig(
            method=method or self.method,
            tail_tolerance=self.tail_tolerance,
            max_terms=self.max_terms,
            em_beta_order=self.em_order,
        )


PRESETS = {
    "fig1": SweepConfig(),
    "fig2": SweepConfig(
        regime=Regime.NONRELATIVISTIC,
        tau_min=100.0,
        tau_max=10000.0,
        method=Method.GEOMETRIC,
    ),
}


# -- flat key=value configuration ------------------------------------------

def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _parse_enum(kind):
    def parse(text):
        try:
            return kind(text.strip().lower())
        except ValueError:
            accepted = ", ".join(m.value for m in kind)
            raise ValueError(f"expected one of {accepted}, got {text!r}") from None
    return parse


def _parse_fidelity(text):
    aliases = {"paper": Fidelity.PAPER_LITERAL, "literal": Fidelity.PAPER_LITERAL,
               "derived": Fidelity.DERIVED_CONSISTENT, "consistent": Fidelity.DERIVED_CONSISTENT}
    try:
        return aliases[text.strip().lower()]
    except KeyError:
        raise ValueError(f"expected paper or derived, got {text!r}") from None


def _parse_regime(text):
    aliases = {"relativistic": Regime.RELATIVISTIC, "rel": Regime.RELATIVISTIC,
               "nonrelativistic": Regime.NONRELATIVISTIC, "non-relativistic": Regime.NONRELATIVISTIC,
               "nonrel": Regime.NONRELATIVISTIC}
    try:
        return aliases[text.strip().lower()]
    except KeyError:
        raise ValueError(f"expected relativistic or nonrelativistic, got {text!r}") from None


def _parse_int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _parse_floats(text):
    items = [item.strip() for item in str(text).split(",") if item.strip()]
    return tuple(float(item) for item in items)


def _parse_out(text):
    text = text.strip()
    return text or None


_PARSERS = {
    "regime": _parse_regime,
    "flux_ratios": _parse_floats,
    "tau_min": float,
    "tau_max": float,
    "tau_steps": _parse_int,
    "grid": _parse_enum(GridScale),
    "method": _parse_enum(Method),
    "fidelity": _parse_fidelity,
    "mass": float,
    "radius": float,
    "n_fermions": _parse_int,
    "em_order": _parse_int,
    "tail_tolerance": float,
    "max_terms": _parse_int,
    "exact_levels": _parse_bool,
    "out": _parse_out,
}
CONFIG_KEYS = tuple(_PARSERS) + ("preset",)


def read_config_file(path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment, lists are comma-separated."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(
                f"{path}:{lineno}: unknown key {key!r} (accepted: {', '.join(CONFIG_KEYS)})"
            )
        values[key] = value
    return values


def resolve_config(overrides: dict | None = None, file_values: dict | None = None) -> SweepConfig:
    """Merge CLI overrides over config-file values over a named preset.

    Values may be strings (parsed per key) or already-typed objects. The
    preset is taken from ``overrides['preset']``, then the file, then
    ``fig1``.
    """
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    file_values = dict(file_values or {})
    for source in (overrides, file_values):
        unknown = set(source) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(
                f"unknown key(s) {', '.join(sorted(unknown))} (accepted: {', '.join(CONFIG_KEYS)})"
            )
    preset = overrides.pop("preset", None) or file_values.pop("preset", None) or "fig1"
    file_values.pop("preset", None)
    if preset not in PRESETS:
        raise ConfigError(f"preset: unknown preset {preset!r} (accepted: {', '.join(PRESETS)})")

    merged = {}
    for key, value in itertools.chain(file_values.items(), overrides.items()):
        if isinstance(value, str):
            try:
                value = _PARSERS[key](value)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from None
        elif key == "flux_ratios":
            value = tuple(float(v) for v in value)
        merged[key] = value
    try:
        return dataclasses.replace(PRESETS[preset], **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _format_value(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def format_config(config: SweepConfig) -> str:
    """The resolved configuration in the same ``key = value`` file format."""
    lines = [f"{f.name} = {_format_value(getattr(config, f.name))}" for f in dataclasses.fields(config)]
    return "\n".join(lines) + "\n"


# -- evaluation ---------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    regime: Regime
    method: Method
    fidelity: Fidelity
    phi: float
    tau: float
    point: ThermoPoint | None = None
    validity: bool = False
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def _log_zn_function(config: SweepConfig, params: RingParams, method: Method):
    summation = config.summation(method)

    def log_zn(beta):
        z1 = single_particle_z1(
            beta, params, config.regime, summation, config.fidelity, config.exact_levels
        )
        return zN_log(z1, params.particle_count)

    return log_zn


def evaluate_point(config: SweepConfig, phi: float, tau: float) -> tuple[ThermoPoint, bool]:
    """One thermodynamic point and its strong-field validity flag.

    Closed-form methods use the closed-form thermodynamics; every other
    engine is differentiated numerically.
    """
    beta = 1.0 / tau
    params = config.ring(phi)
    if config.method is _CLOSED_FORM[config.regime]:
        if config.regime is Regime.RELATIVISTIC:
            coeffs = relativistic_coefficients(params, config.fidelity)
            point = thermo_rel_closed(beta, coeffs, params.particle_count)
        else:
            coeffs = nonrelativistic_coefficients(params)
            point = thermo_nonrel_closed(beta, coeffs, params.particle_count, config.fidelity)
        return point, coeffs.strong_field

    log_zn = _log_zn_function(config, params, config.method)
    point = thermo_numeric(log_zn, beta, n_particles=params.particle_count, regime=config.regime)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        validity = single_particle_z1(
            beta, params, config.regime, config.summation(), config.fidelity, config.exact_levels
        ).validity_flag
    return point, validity


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """One row per (phi, tau), ordered by phi then tau; failures are recorded per row."""
    rows = []
    for phi in config.flux_ratios:
        for tau in config.taus():
            tau = float(tau)
            common = dict(regime=config.regime, method=config.method, fidelity=config.fidelity,
                          phi=float(phi), tau=tau)
            try:
                point, validity = evaluate_point(config, phi, tau)
            except ABRingError as exc:
                rows.append(SweepRow(**common, error=f"{type(exc).__name__}: {exc}"))
            else:
                rows.append(SweepRow(**common, point=point, validity=validity))
    return rows


@dataclass(frozen=True)
class ComparisonRow:
    regime: Regime
    fidelity: Fidelity
    phi: float
    tau: float
    methods: tuple[Method, ...]
    log_z1: dict = field(default_factory=dict)
    deviations: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=math.nan)

    @property
    def max_pair(self) -> tuple[Method, Method] | None:
        if not self.deviations:
            return None
        return max(self.deviations, key=self.deviations.get)


def compare_methods(config: SweepConfig, methods) -> list[ComparisonRow]:
    """ln Z1 from several engines on the sweep grid, with pairwise deviations.

    The deviation of pair (a, b) is ``|Z1_b / Z1_a - 1|``, with ``a`` the
    earlier method in the list; the direct sum is moved to the front when
    present so it serves as the reference.
    """
    methods = list(dict.fromkeys(methods))
    if len(methods) < 2:
        raise ConfigError("methods: need at least two distinct methods to compare")
    for method in methods:
        if method not in METHODS_BY_REGIME[config.regime]:
            allowed = ", ".join(m.value for m in METHODS_BY_REGIME[config.regime])
            raise ConfigError(
                f"methods: {method.value!r} is not available for the {config.regime.value} "
                f"regime (accepted: {allowed})"
            )
    if Method.DIRECT in methods:
        methods.remove(Method.DIRECT)
        methods.insert(0, Method.DIRECT)

    rows = []
    for phi in config.flux_ratios:
        params = config.ring(phi)
        for tau in config.taus():
            tau = float(tau)
            log_z1, errors = {}, {}
            for method in methods:
                try:
                    log_z1[method] = single_particle_z1(
                        1.0 / tau, params, config.regime, config.summation(method), config.fidelity,
                        config.exact_levels and method is Method.DIRECT,
                    ).log_value
                except ABRingError as exc:
                    errors[method] = f"{type(exc).__name__}: {exc}"
            deviations = {
                (a, b): abs(math.expm1(log_z1[b] - log_z1[a]))
                for a, b in itertools.combinations(methods, 2)
                if a in log_z1 and b in log_z1
            }
            rows.append(ComparisonRow(config.regime, config.fidelity, float(phi), tau,
                                      tuple(methods), log_z1, deviations, errors))
    return rows


# -- CSV ----------------------------------------------------------------------

def _num(value) -> str:
    return repr(float(value))


def _sweep_record(row: SweepRow):
    head = [row.regime.value, row.method.value, row.fidelity.value, _num(row.phi), _num(row.tau)]
    if row.failed:
        return head + ["", "", "", "", "", row.error]
    p = row.point
    return head + [_num(p.f_per_n), _num(p.u_per_n), _num(p.s_per_nk), _num(p.cv_per_nk),
                   "true" if row.validity else "false", ""]


def _write(records, header, path):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)
    text = buffer.getvalue()
    if path is None:
        return text
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
    return text


def emit_csv(rows, path=None) -> str:
    """Write sweep rows as UTF-8 CSV (to ``path`` if given) and return the text."""
    if not rows:
        raise ValueError("emit_csv needs at least one row")
    return _write([_sweep_record(row) for row in rows], CSV_HEADER, path)


def emit_comparison_csv(rows, path=None) -> str:
    if not rows:
        raise ValueError("emit_comparison_csv needs at least one row")
    methods = rows[0].methods
    pairs = list(itertools.combinations(methods, 2))
    header = (["regime", "fidelity", "phi", "tau"]
              + [f"lnZ1_{m.value}" for m in methods]
              + [f"dev_{a.value}_vs_{b.value}" for a, b in pairs]
              + ["max_rel_dev", "max_pair", "error"])
    records = []
    for row in rows:
        worst = row.max_pair
        records.append(
            [row.regime.value, row.fidelity.value, _num(row.phi), _num(row.tau)]
            + [_num(row.log_z1[m]) if m in row.log_z1 else "" for m in methods]
            + [_num(row.deviations[p]) if p in row.deviations else "" for p in pairs]
            + [_num(row.max_deviation) if worst else "",
               f"{worst[0].value}/{worst[1].value}" if worst else "",
               "; ".join(f"{m.value}: {msg}" for m, msg in row.errors.items())]
        )
    return _write(records, header, path)
