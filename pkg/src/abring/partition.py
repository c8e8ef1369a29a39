"""Single-particle partition function Z1 and its N-particle power.

Four engines:

* ``z1_direct``: truncated brute-force sum over n >= 0 (the oracle).
* ``z1_euler_maclaurin``: integral + boundary + derivative corrections of the
  strong-field summand ``exp(-beta*sqrt(B n + C))``, through beta^2.
* ``z1_high_t``: the small-beta closed form ``2/(B beta^2) (1 + beta sqrt(C))``.
* ``z1_geometric_closed``: exact geometric sum of the linear
  non-relativistic levels ``B n + C``.

Everything is carried as ``ln Z``; ``PartitionResult.value`` materializes the
linear value on demand.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from abring.errors import (
    DegenerateField,
    InvalidBeta,
    InvalidParameter,
    NonConvergence,
    UnsupportedOrder,
)
from abring.spectrum import (
    Fidelity,
    Regime,
    RingParams,
    SpectrumCoefficients,
    linearized_energy,
    nonrelativistic_coefficients,
    nonrelativistic_energy,
    relativistic_coefficients,
    relativistic_energy,
)

__all__ = [
    "Method",
    "SummationConfig",
    "PartitionResult",
    "z1_direct",
    "z1_integral",
    "log_z1_integral",
    "bernoulli_weights",
    "z1_euler_maclaurin",
    "z1_high_t",
    "log_z1_high_t",
    "z1_geometric_closed",
    "log_z1_geometric_closed",
    "zN_log",
    "single_particle_z1",
]

# Small first chunk for cheap sums; later chunks sized to stay cache-resident.
_FIRST_CHUNK = 1024
_CHUNK = 1 << 14


class Method(enum.Enum):
    DIRECT = "direct"
    EULER_MACLAURIN = "em"
    HIGH_T = "high-t"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class SummationConfig:
    method: Method = Method.DIRECT
    tail_tolerance: float = 1e-14
    max_terms: int = 10_000_000
    em_beta_order: int = 2

    def __post_init__(self):
        if not 0 < self.tail_tolerance < 1:
            raise InvalidParameter(f"tail_tolerance must lie in (0, 1), got {self.tail_tolerance!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise InvalidParameter(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if self.em_beta_order not in (0, 1, 2):
            raise InvalidParameter(f"em_beta_order must be 0, 1 or 2, got {self.em_beta_order!r}")


@dataclass(frozen=True)
class PartitionResult:
    """One Z1 evaluation.

    ``tail_estimate`` is the estimated dropped remainder relative to the
    returned sum (direct sums only).
    """

    log_value: float
    method: Method
    terms_used: int | None = None
    tail_estimate: float | None = None
    validity_flag: bool = True

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def _check_beta(beta):
    if not beta > 0 or not math.isfinite(beta):
        raise InvalidBeta(f"beta must be finite and > 0, got {beta!r}")


def _check_field(coeffs: SpectrumCoefficients):
    if coeffs.B == 0:
        raise DegenerateField(
            "linear coefficient B is zero (zero flux); the strong-field sum diverges, "
            "use the direct sum over the exact spectrum instead"
        )


def _qualifies(term, prev, bound):
    ratio = term / prev
    return term < bound and term * ratio < bound * (1.0 - ratio)


def z1_direct(
    level_energy: Callable, beta: float, config: SummationConfig = SummationConfig()
) -> PartitionResult:
    """Sum ``exp(-beta * level_energy(n))`` for n = 0, 1, 2, ...

    ``level_energy`` must accept a float array of quantum numbers. Summation
    stops at the first term that is (a) smaller than its predecessor,
    (b) below ``tail_tolerance`` times the running sum, and (c) whose
    geometric-majorant tail ``t r / (1 - r)``, with ``r`` the ratio of the
    last two terms, is also below ``tail_tolerance`` times the running sum.
    """
    _check_beta(beta)
    tol = config.tail_tolerance
    cap = int(config.max_terms)

    # Terms are stored as exp(-(beta*E - shift)) so that huge or tiny Z1 stay
    # representable; shift is lowered if a smaller energy turns up later.
    shift = None
    partials: list[float] = []
    running = 0.0
    prev_term = math.nan
    start = 0
    chunk = _FIRST_CHUNK
    offsets = np.arange(_CHUNK, dtype=float)
    while start < cap:
        stop = min(start + chunk, cap)
        n = offsets[: stop - start] + start
        x = beta * np.broadcast_to(np.asarray(level_energy(n), dtype=float), n.shape)
        lowest = float(x.min())
        if shift is None:
            shift = lowest
        elif lowest < shift:
            rescale = math.exp(lowest - shift)
            partials = [p * rescale for p in partials]
            running *= rescale
            prev_term *= rescale
            shift = lowest
        terms = np.subtract(shift, x, out=x if x.flags.writeable else None)
        np.exp(terms, out=terms)
        chunk_sum = float(terms.sum())

        last = terms[-1]
        before = terms[-2] if terms.size > 1 else prev_term
        if last == 0.0 or (last < before and _qualifies(last, before, tol * (running + chunk_sum))):
            # The chunk end qualifies, so locate the first qualifying term.
            prev = np.concatenate(([prev_term], terms[:-1]))
            cumulative = running + np.cumsum(terms)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = terms / prev
                tail = np.where(terms == 0.0, 0.0, terms * ratio / (1.0 - ratio))
            decreasing = (terms < prev) | (terms == 0.0)
            ok = decreasing & (terms < tol * cumulative) & (tail < tol * cumulative)
            if ok.any():
                k = int(np.argmax(ok))
                partials.append(float(terms[: k + 1].sum()))
                total = math.fsum(partials)
                return PartitionResult(
                    log_value=math.log(total) - shift,
                    method=Method.DIRECT,
                    terms_used=start + k + 1,
                    tail_estimate=float(tail[k]) / total,
                )

        partials.append(chunk_sum)
        running += chunk_sum
        prev_term = float(last)
        start = stop
        chunk = _CHUNK

    total = math.fsum(partials)
    partial = PartitionResult(
        log_value=math.log(total) - shift,
        method=Method.DIRECT,
        terms_used=cap,
        tail_estimate=math.inf,
    )
    raise NonConvergence(
        f"direct sum did not reach tail_tolerance={tol:g} within max_terms={cap} (beta={beta!r})",
        partial=partial,
    )


def log_z1_integral(beta: float, coeffs: SpectrumCoefficients) -> float:
    _check_beta(beta)
    _check_field(coeffs)
    bsc = beta * math.sqrt(coeffs.C)
    return math.log(2.0 / (coeffs.B * beta * beta)) + math.log1p(bsc) - bsc


def z1_integral(beta: float, coeffs: SpectrumCoefficients) -> float:
    """Closed form of ``integral_0^inf exp(-beta*sqrt(B x + C)) dx``."""
    return math.exp(log_z1_integral(beta, coeffs))


def _bernoulli(m: int) -> Fraction:
    # Akiyama-Tanigawa; B_1 = +1/2 convention, irrelevant for even m.
    a = [Fraction(0)] * (m + 1)
    for j in range(m + 1):
        a[j] = Fraction(1, j + 1)
        for k in range(j, 0, -1):
            a[k - 1] = k * (a[k - 1] - a[k])
    return a[0]


def bernoulli_weights(order: int) -> list[Fraction]:
    """Weights ``-B_{2p}/(2p)!`` of ``f^{(2p-1)}(0)`` for p = 1..order."""
    if order not in (1, 2):
        raise UnsupportedOrder(f"Euler-Maclaurin corrections are available for order 1 or 2, got {order!r}")
    return [-_bernoulli(2 * p) / math.factorial(2 * p) for p in range(1, order + 1)]


def z1_euler_maclaurin(
    beta: float, coeffs: SpectrumCoefficients, config: SummationConfig = SummationConfig()
) -> PartitionResult:
    """Euler-Maclaurin estimate of Z1 for the strong-field relativistic sum.

    Uses the published expansion term for term::

        exp(-b sqrt(C)) * [ 2/(B b^2) (1 + b sqrt(C)) + 1/2
                            + (B/(24 sqrt C) - B^3/(720 C^(5/2))) b
                            + (1/90)(A/(2C) - B^2/(8 C^2)) b^2 ]

    kept through ``config.em_beta_order`` powers of beta.
    """
    _check_beta(beta)
    _check_field(coeffs)
    A, B, C = coeffs.A, coeffs.B, coeffs.C
    root_c = math.sqrt(C)
    bracket = 2.0 / (B * beta * beta) * (1.0 + beta * root_c) + 0.5
    if config.em_beta_order >= 1:
        bracket += (B / (24.0 * root_c) - B**3 / (720.0 * C**2 * root_c)) * beta
    if config.em_beta_order >= 2:
        bracket += (A / (2.0 * C) - B * B / (8.0 * C * C)) * beta * beta / 90.0
    if not bracket > 0:
        raise NonConvergence(f"Euler-Maclaurin bracket is non-positive ({bracket!r}) at beta={beta!r}")
    return PartitionResult(
        log_value=math.log(bracket) - beta * root_c,
        method=Method.EULER_MACLAURIN,
        validity_flag=coeffs.strong_field,
    )


def log_z1_high_t(beta: float, coeffs: SpectrumCoefficients) -> float:
    _check_beta(beta)
    _check_field(coeffs)
    return math.log(2.0 / (coeffs.B * beta * beta)) + math.log1p(beta * math.sqrt(coeffs.C))


def z1_high_t(beta: float, coeffs: SpectrumCoefficients) -> float:
    """``2/(B beta^2) (1 + beta sqrt(C))``, without the exp(-beta sqrt(C)) factor."""
    return math.exp(log_z1_high_t(beta, coeffs))


def log_z1_geometric_closed(beta: float, coeffs: SpectrumCoefficients) -> float:
    _check_beta(beta)
    _check_field(coeffs)
    return -beta * coeffs.C - math.log(-math.expm1(-beta * coeffs.B))


def z1_geometric_closed(beta: float, coeffs: SpectrumCoefficients) -> float:
    """``exp(-beta C) / (1 - exp(-beta B))``, the exact sum over linear levels."""
    return math.exp(log_z1_geometric_closed(beta, coeffs))


def zN_log(z1: PartitionResult, n_particles: int) -> float:
    """``ln Z_N = N ln Z1`` (no Gibbs 1/N! factor)."""
    if int(n_particles) != n_particles or n_particles < 1:
        raise InvalidParameter(f"n_particles must be a positive integer, got {n_particles!r}")
    return n_particles * z1.log_value


def _exact_levels(params: RingParams, regime: Regime) -> Callable:
    if regime is Regime.RELATIVISTIC:
        return lambda n: relativistic_energy(params, n)
    return lambda n: nonrelativistic_energy(params, n)


def single_particle_z1(
    beta: float,
    params: RingParams,
    regime: Regime,
    config: SummationConfig = SummationConfig(),
    fidelity: Fidelity = Fidelity.DERIVED_CONSISTENT,
    exact_levels: bool = False,
) -> PartitionResult:
    """Evaluate Z1 for a ring with the engine named in ``config.method``.

    Zero flux makes every strong-field form diverge, so it is rerouted to a
    direct sum over the exact spectrum with a warning. ``exact_levels``
    requests that direct sum explicitly; otherwise the direct engine sums
    the linearized strong-field levels that the closed forms approximate.
    """
    if regime is Regime.RELATIVISTIC:
        coeffs = relativistic_coefficients(params, fidelity)
    else:
        coeffs = nonrelativistic_coefficients(params)
    method = config.method

    if coeffs.B == 0 and not exact_levels:
        warnings.warn(
            f"flux_ratio=0 cannot use the {method.value!r} engine; "
            "falling back to a direct sum over the exact spectrum",
            stacklevel=2,
        )
        exact_levels = True
        method = Method.DIRECT
    if exact_levels:
        if method is not Method.DIRECT:
            raise InvalidParameter("exact_levels is only meaningful for the direct method")
        return z1_direct(_exact_levels(params, regime), beta, config)

    if method is Method.DIRECT:
        result = z1_direct(lambda n: linearized_energy(coeffs, n), beta, config)
        return replace(result, validity_flag=coeffs.strong_field)
    if method is Method.GEOMETRIC:
        if regime is not Regime.NONRELATIVISTIC:
            raise InvalidParameter("the geometric closed form applies to the non-relativistic regime only")
        return PartitionResult(
            log_z1_geometric_closed(beta, coeffs), Method.GEOMETRIC, validity_flag=coeffs.strong_field
        )
    if regime is not Regime.RELATIVISTIC:
        raise InvalidParameter(f"method {method.value!r} applies to the relativistic regime only")
    if method is Method.EULER_MACLAURIN:
        return z1_euler_maclaurin(beta, coeffs, config)
    return PartitionResult(log_z1_high_t(beta, coeffs), Method.HIGH_T, validity_flag=coeffs.strong_field)
