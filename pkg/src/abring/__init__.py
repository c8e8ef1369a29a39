"""Canonical-ensemble thermodynamics of Dirac fermions on an Aharonov-Bohm ring."""

from abring.errors import (
    ABRingError,
    ConfigError,
    ConventionError,
    DegenerateField,
    InvalidBeta,
    InvalidParameter,
    NonConvergence,
    StepTooLarge,
    UnsupportedOrder,
)
from abring.partition import (
    Method,
    PartitionResult,
    SummationConfig,
    bernoulli_weights,
    single_particle_z1,
    z1_direct,
    z1_euler_maclaurin,
    z1_geometric_closed,
    z1_high_t,
    z1_integral,
    zN_log,
)
from abring.spectrum import (
    Fidelity,
    Regime,
    RingParams,
    SpectrumCoefficients,
    nonrelativistic_coefficients,
    nonrelativistic_energy,
    relativistic_coefficients,
    relativistic_energy,
)
from abring.sweep import SweepConfig, compare_methods, emit_csv, resolve_config, run_sweep
from abring.thermo import (
    Source,
    ThermoPoint,
    asymptote_check,
    thermo_nonrel_closed,
    thermo_numeric,
    thermo_rel_closed,
)

__version__ = "0.1.0"
