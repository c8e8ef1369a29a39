"""Single-particle levels of a Dirac fermion on an Aharonov-Bohm ring.

Natural units throughout (hbar = c = k_B = 1). The flux enters only through
the dimensionless ratio ``flux_ratio`` = Phi / Phi_0.

Energy evaluators accept any integer (or integer-valued numpy array) ``n``.
Coefficient builders feed the canonical ensemble, which is populated only by
positive-energy, negatively charged states (``charge_sign == -1``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from abring.errors import ConventionError, InvalidParameter

__all__ = [
    "Regime",
    "Fidelity",
    "RingParams",
    "SpectrumCoefficients",
    "STRONG_FIELD_MIN_FLUX",
    "relativistic_energy",
    "relativistic_kinetic_energy",
    "nonrelativistic_energy",
    "relativistic_coefficients",
    "nonrelativistic_coefficients",
    "linearized_energy",
    "quadratic_energy",
]

# Smallest flux ratio for which the strong-field (linearized) treatment is
# considered trustworthy; the smallest flux in the reference temperature sweeps.
STRONG_FIELD_MIN_FLUX = 50.0


class Regime(enum.Enum):
    RELATIVISTIC = "relativistic"
    NONRELATIVISTIC = "nonrelativistic"


class Fidelity(enum.Enum):
    """Which reading of the published closed forms to use.

    ``PAPER_LITERAL`` reproduces the coefficients and free energy exactly as
    printed. ``DERIVED_CONSISTENT`` uses the forms that follow from expanding
    the spectrum, which keep the thermodynamic identities intact.
    """

    PAPER_LITERAL = "paper"
    DERIVED_CONSISTENT = "derived"


@dataclass(frozen=True)
class RingParams:
    """Physical configuration of the ring and its fermion ensemble."""

    mass: float = 1.0
    radius: float = 1.0
    flux_ratio: float = 50.0
    charge_sign: int = -1
    particle_count: int = 1

    def __post_init__(self):
        if not self.mass > 0:
            raise InvalidParameter(f"mass must be > 0, got {self.mass!r}")
        if not self.radius > 0:
            raise InvalidParameter(f"radius must be > 0, got {self.radius!r}")
        if not self.flux_ratio >= 0:
            raise InvalidParameter(f"flux_ratio must be >= 0, got {self.flux_ratio!r}")
        if self.charge_sign not in (1, -1):
            raise InvalidParameter(f"charge_sign must be +1 or -1, got {self.charge_sign!r}")
        if int(self.particle_count) != self.particle_count or self.particle_count < 1:
            raise InvalidParameter(
                f"particle_count must be a positive integer, got {self.particle_count!r}"
            )

    @property
    def strong_field(self) -> bool:
        return self.flux_ratio >= STRONG_FIELD_MIN_FLUX


@dataclass(frozen=True)
class SpectrumCoefficients:
    """Polynomial reduction of the spectrum used by the closed forms.

    Relativistic: ``E_n = sqrt(A n^2 + B n + C)``.
    Non-relativistic: ``eps_n = A n^2 + B n + C`` with ``B``, ``C`` the
    linear and constant terms (often written with bars).

    ``flux_ratio`` is carried along so engines can report whether the
    strong-field preconditions hold; it is ``None`` for hand-built
    coefficients.
    """

    A: float
    B: float
    C: float
    variant: Regime = Regime.RELATIVISTIC
    fidelity: Fidelity = Fidelity.DERIVED_CONSISTENT
    flux_ratio: float | None = None

    def __post_init__(self):
        if not self.A > 0:
            raise InvalidParameter(f"A must be > 0, got {self.A!r}")
        if not self.B >= 0:
            raise InvalidParameter(f"B must be >= 0, got {self.B!r}")
        if self.variant is Regime.RELATIVISTIC and not self.C > 0:
            raise InvalidParameter(f"C must be > 0 for relativistic levels, got {self.C!r}")
        if not self.C >= 0:
            raise InvalidParameter(f"C must be >= 0, got {self.C!r}")

    @property
    def strong_field(self) -> bool:
        return self.flux_ratio is not None and self.flux_ratio >= STRONG_FIELD_MIN_FLUX


def _momentum_sq(params: RingParams, n):
    shifted = n - params.charge_sign * params.flux_ratio
    return shifted * shifted / (params.radius * params.radius)


def relativistic_energy(params: RingParams, n):
    """Positive branch ``sqrt(m^2 + (n - s*phi)^2 / a^2)``; always >= m."""
    return np.sqrt(params.mass * params.mass + _momentum_sq(params, n))


def relativistic_kinetic_energy(params: RingParams, n):
    """``E_n - m`` computed without cancellation.

    Uses ``p^2 / (E + m)``, which keeps full relative precision even when
    ``m`` dwarfs the momentum term (the non-relativistic limit).
    """
    p2 = _momentum_sq(params, n)
    return p2 / (np.sqrt(params.mass * params.mass + p2) + params.mass)


def nonrelativistic_energy(params: RingParams, n):
    """``(n - s*phi)^2 / (2 m a^2)``; always >= 0."""
    return _momentum_sq(params, n) / (2.0 * params.mass)


def _require_ensemble_sign(params: RingParams):
    if params.charge_sign != -1:
        raise ConventionError(
            "the thermodynamic ensemble holds only negatively charged fermions "
            f"(charge_sign=-1); got charge_sign={params.charge_sign}"
        )


def relativistic_coefficients(
    params: RingParams, fidelity: Fidelity = Fidelity.DERIVED_CONSISTENT
) -> SpectrumCoefficients:
    """(A, B, C) such that ``E_n^2 = A n^2 + B n + C`` for n >= 0.

    The literal variant keeps the published ``B = phi/a^2`` and
    ``C = 1 + (phi/a)^2``, which omit the cross-term factor 2 and the mass.
    """
    _require_ensemble_sign(params)
    a2 = params.radius * params.radius
    phi = params.flux_ratio
    if fidelity is Fidelity.PAPER_LITERAL:
        B = phi / a2
        C = 1.0 + (phi / params.radius) ** 2
    else:
        B = 2.0 * phi / a2
        C = params.mass**2 + (phi / params.radius) ** 2
    return SpectrumCoefficients(
        A=1.0 / a2, B=B, C=C, variant=Regime.RELATIVISTIC, fidelity=fidelity, flux_ratio=phi
    )


def nonrelativistic_coefficients(params: RingParams) -> SpectrumCoefficients:
    """Linear and constant terms ``phi/(m a^2)`` and ``phi^2/(2 m a^2)``."""
    _require_ensemble_sign(params)
    m, a, phi = params.mass, params.radius, params.flux_ratio
    return SpectrumCoefficients(
        A=1.0 / (2.0 * m * a * a),
        B=phi / (m * a * a),
        C=phi * phi / (2.0 * m * a * a),
        variant=Regime.NONRELATIVISTIC,
        fidelity=Fidelity.DERIVED_CONSISTENT,
        flux_ratio=phi,
    )


def linearized_energy(coeffs: SpectrumCoefficients, n):
    """Strong-field level with the quadratic term dropped."""
    if coeffs.variant is Regime.RELATIVISTIC:
        return np.sqrt(coeffs.B * n + coeffs.C)
    return coeffs.B * n + coeffs.C


def quadratic_energy(coeffs: SpectrumCoefficients, n):
    """Level rebuilt from all three coefficients."""
    poly = (coeffs.A * n + coeffs.B) * n + coeffs.C
    if coeffs.variant is Regime.RELATIVISTIC:
        return np.sqrt(poly)
    return poly
