"""Per-particle canonical thermodynamics: F/N, U/N, S/(N k_B), C_V/(N k_B).

Two sources: the closed forms that follow from the high-temperature
relativistic Z1 and the geometric non-relativistic Z1, and finite
differences of an arbitrary ``ln Z_N(beta)``.  k_B = 1, so ``tau = 1/beta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from abring.errors import DegenerateField, InvalidBeta, InvalidParameter, StepTooLarge
from abring.spectrum import Fidelity, Regime, SpectrumCoefficients

__all__ = [
    "Source",
    "ThermoPoint",
    "thermo_rel_closed",
    "thermo_nonrel_closed",
    "thermo_numeric",
    "asymptote_check",
    "RICHARDSON_TOLERANCE",
    "CURVATURE_FLOOR",
]

RICHARDSON_TOLERANCE = 1e-3
# Absolute C_V/(N k_B) below which curvature stencils are not required to agree.
CURVATURE_FLOOR = 1e-6


class Source(enum.Enum):
    CLOSED_FORM = "closed-form"
    NUMERIC_DERIVATIVE = "numeric"


@dataclass(frozen=True)
class ThermoPoint:
    tau: float
    f_per_n: float
    u_per_n: float
    s_per_nk: float
    cv_per_nk: float
    regime: Regime
    source: Source

    def __post_init__(self):
        if not self.tau > 0:
            raise InvalidParameter(f"tau must be > 0, got {self.tau!r}")

    @property
    def beta(self) -> float:
        return 1.0 / self.tau

    @property
    def legendre_residual(self) -> float:
        """``|F - (U - tau S)|`` relative to the largest of the three terms."""
        ts = self.tau * self.s_per_nk
        scale = max(abs(self.f_per_n), abs(self.u_per_n), abs(ts))
        if scale == 0.0:
            return 0.0
        return abs(self.f_per_n - (self.u_per_n - ts)) / scale


def _check(beta, coeffs, n_particles):
    if not beta > 0 or not math.isfinite(beta):
        raise InvalidBeta(f"beta must be finite and > 0, got {beta!r}")
    if coeffs.B == 0:
        raise DegenerateField("B = 0: the strong-field closed forms diverge at zero flux")
    if int(n_particles) != n_particles or n_particles < 1:
        raise InvalidParameter(f"n_particles must be a positive integer, got {n_particles!r}")


def thermo_rel_closed(beta: float, coeffs: SpectrumCoefficients, n_particles: int = 1) -> ThermoPoint:
    """Closed-form relativistic functions built on ``Z1 = 2/(B b^2) (1 + b sqrt C)``."""
    _check(beta, coeffs, n_particles)
    y = beta * math.sqrt(coeffs.C)
    log_z1 = math.log(2.0 / (coeffs.B * beta * beta)) + math.log1p(y)
    ratio = (2.0 + y) / (1.0 + y)
    return ThermoPoint(
        tau=1.0 / beta,
        f_per_n=-log_z1 / beta,
        u_per_n=(2.0 + y) / (beta + beta * y),
        s_per_nk=log_z1 + ratio,
        cv_per_nk=(2.0 + 4.0 * y + y * y) / (1.0 + y) ** 2,
        regime=Regime.RELATIVISTIC,
        source=Source.CLOSED_FORM,
    )


def thermo_nonrel_closed(
    beta: float,
    coeffs: SpectrumCoefficients,
    n_particles: int = 1,
    fidelity: Fidelity = Fidelity.DERIVED_CONSISTENT,
) -> ThermoPoint:
    """Closed-form non-relativistic functions of the geometric Z1.

    With ``x = beta*B``: ``U = C + B/(e^x - 1)``,
    ``S = x/(e^x - 1) - ln(1 - e^-x)``, ``C_V = x^2 e^x / (e^x - 1)^2``,
    written with expm1 so that both tiny and huge ``x`` stay accurate.

    ``Fidelity.PAPER_LITERAL`` takes the free energy with ``C`` in place of
    ``B`` inside ``1 - exp(-beta*...)``, exactly as published; that version
    does not satisfy ``F = U - tau S`` unless ``B == C``.
    """
    _check(beta, coeffs, n_particles)
    B, C = coeffs.B, coeffs.C
    x = beta * B
    gap = C if fidelity is Fidelity.PAPER_LITERAL else B
    if gap == 0:
        raise DegenerateField("literal free energy diverges when C = 0")
    em1 = math.expm1(-x)
    return ThermoPoint(
        tau=1.0 / beta,
        f_per_n=C + math.log(-math.expm1(-beta * gap)) / beta,
        u_per_n=C + B / math.expm1(x) if x < 700 else C,
        s_per_nk=(x / math.expm1(x) if x < 700 else 0.0) - math.log(-em1),
        cv_per_nk=x * x * math.exp(-x) / (em1 * em1),
        regime=Regime.NONRELATIVISTIC,
        source=Source.CLOSED_FORM,
    )


def _stencils(logz_fn, beta, h):
    f = {k: logz_fn(beta + k * h) for k in (-2, -1, 0, 1, 2)}
    d1 = (f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * h)
    d2 = (-f[-2] + 16.0 * f[-1] - 30.0 * f[0] + 16.0 * f[1] - f[2]) / (12.0 * h * h)
    return f[0], d1, d2


def _agree(a, b, floor=0.0):
    return abs(a - b) <= RICHARDSON_TOLERANCE * max(abs(a), abs(b)) + floor


def thermo_numeric(
    logz_fn: Callable[[float], float],
    beta: float,
    step: float | None = None,
    curvature_step: float | None = None,
    n_particles: int = 1,
    regime: Regime = Regime.RELATIVISTIC,
) -> ThermoPoint:
    """Thermodynamics from five-point finite differences of ``ln Z_N``.

    ``U = -d lnZ/d beta`` uses ``step`` (default ``beta*1e-5``).
    ``C_V = beta^2 d^2 lnZ/d beta^2`` uses the wider ``curvature_step``
    (default ``beta*2e-3``); at ``beta*1e-5`` the second difference would be
    swamped by rounding in ``ln Z``. Each stencil is repeated at twice its
    width and ``StepTooLarge`` is raised when the two disagree by more than
    ``RICHARDSON_TOLERANCE`` (relative), or, for C_V, by more than that plus
    ``CURVATURE_FLOOR``.
    """
    if not beta > 0 or not math.isfinite(beta):
        raise InvalidBeta(f"beta must be finite and > 0, got {beta!r}")
    h = beta * 1e-5 if step is None else step
    hc = beta * 2e-3 if curvature_step is None else curvature_step
    if not 0 < h < beta / 4 or not 0 < hc < beta / 4:
        raise StepTooLarge(
            f"steps must satisfy 0 < step < beta/4 (beta={beta!r}, step={h!r}, curvature_step={hc!r})"
        )

    log_z, d1, _ = _stencils(logz_fn, beta, h)
    _, d1_wide, _ = _stencils(logz_fn, beta, 2 * h)
    _, _, d2 = _stencils(logz_fn, beta, hc)
    _, _, d2_wide = _stencils(logz_fn, beta, 2 * hc)
    if not _agree(d1, d1_wide):
        raise StepTooLarge(f"energy stencils disagree at beta={beta!r}: {-d1!r} vs {-d1_wide!r}")
    if not _agree(d2, d2_wide, floor=CURVATURE_FLOOR / (beta * beta)):
        raise StepTooLarge(f"curvature stencils disagree at beta={beta!r}: {d2!r} vs {d2_wide!r}")

    n = n_particles
    u = -d1 / n
    f = -log_z / (beta * n)
    return ThermoPoint(
        tau=1.0 / beta,
        f_per_n=f,
        u_per_n=u,
        s_per_nk=beta * (u - f),
        cv_per_nk=beta * beta * d2 / n,
        regime=regime,
        source=Source.NUMERIC_DERIVATIVE,
    )


def asymptote_check(regime: Regime) -> float:
    """High-temperature (beta -> 0) limit of C_V/(N k_B) in each regime."""
    return 2.0 if regime is Regime.RELATIVISTIC else 1.0
