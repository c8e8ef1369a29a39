"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines also appear in pytest's terminal summary under "acceptance criteria".
"""

import dataclasses
import hashlib
import math
import subprocess
import sys
import time
from itertools import product

import numpy as np
import pytest

from abring.partition import (
    SummationConfig,
    log_z1_geometric_closed,
    log_z1_high_t,
    z1_direct,
    z1_euler_maclaurin,
)
from abring.spectrum import (
    RingParams,
    linearized_energy,
    nonrelativistic_coefficients,
    nonrelativistic_energy,
    relativistic_coefficients,
    relativistic_energy,
    relativistic_kinetic_energy,
)
from abring.sweep import PRESETS, run_sweep
from abring.thermo import Source, thermo_nonrel_closed, thermo_numeric, thermo_rel_closed
from conftest import ACCEPTANCE_LINES

REL = relativistic_coefficients(RingParams(mass=1, radius=1, flux_ratio=50))
NONREL = nonrelativistic_coefficients(RingParams(mass=1, radius=1, flux_ratio=50))


class Criterion:
    """Times a criterion and records its PASS/FAIL line."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.checks = []

    def check(self, ok, detail):
        self.checks.append((bool(ok), detail))

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if self.budget is not None:
            self.check(elapsed < self.budget, f"runtime {elapsed:.2f}s < {self.budget}s")
        ok = exc_type is None and all(ok for ok, _ in self.checks)
        failed = [d for ok, d in self.checks if not ok]
        if exc_type is not None:
            failed.append(f"{exc_type.__name__}: {exc}")
        detail = "; ".join(failed) if failed else "; ".join(d for _, d in self.checks)
        line = f"[{'PASS' if ok else 'FAIL'}] {self.number}. {self.title} ({elapsed:.2f}s): {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        if exc_type is None:
            assert ok, line
        return False


def test_1_dulong_petit_relativistic():
    with Criterion(1, "relativistic C_V -> 2", budget=1.0) as c:
        beta = 1e-4
        closed = thermo_rel_closed(beta, REL).cv_per_nk
        numeric = thermo_numeric(lambda b: log_z1_high_t(b, REL), beta).cv_per_nk
        c.check(abs(closed - 2) <= 1e-3, f"closed {closed:.8f}")
        c.check(abs(numeric - 2) <= 1e-2, f"numeric {numeric:.8f}")


def test_2_nonrelativistic_asymptote():
    with Criterion(2, "non-relativistic C_V -> 1", budget=1.0) as c:
        beta = 1e-4
        closed = thermo_nonrel_closed(beta, NONREL).cv_per_nk
        numeric = thermo_numeric(
            lambda b: log_z1_geometric_closed(b, NONREL), beta, regime=NONREL.variant
        ).cv_per_nk
        c.check(abs(closed - 1) <= 1e-3, f"closed {closed:.8f}")
        c.check(abs(numeric - 1) <= 1e-2, f"numeric {numeric:.8f}")


def test_3_oracle_equivalence():
    config = SummationConfig(tail_tolerance=1e-14, max_terms=10**10)
    with Criterion(3, "EM and geometric vs direct sums", budget=30.0) as c:
        worst_em = worst_geo = 0.0
        for phi, beta in product((50, 100, 150, 200), (1e-4, 1e-3, 1e-2)):
            params = RingParams(mass=1, radius=1, flux_ratio=phi)
            rel = relativistic_coefficients(params)
            direct = z1_direct(lambda n: linearized_energy(rel, n), beta, config)
            em = z1_euler_maclaurin(beta, rel, config)
            worst_em = max(worst_em, abs(math.expm1(em.log_value - direct.log_value)))

            nonrel = nonrelativistic_coefficients(params)
            direct = z1_direct(lambda n: linearized_energy(nonrel, n), beta, config)
            geo = log_z1_geometric_closed(beta, nonrel)
            worst_geo = max(worst_geo, abs(math.expm1(geo - direct.log_value)))
        c.check(worst_em <= 1e-2, f"max |EM-direct|/direct {worst_em:.2e}")
        c.check(worst_geo <= 1e-12, f"max |geometric-direct|/direct {worst_geo:.2e}")


def test_4_derivative_cross_check():
    with Criterion(4, "numeric derivatives vs closed forms", budget=5.0) as c:
        cases = [
            (REL, np.logspace(-4, 0, 50), log_z1_high_t, thermo_rel_closed),
            (NONREL, np.logspace(-4, -1, 50), log_z1_geometric_closed, thermo_nonrel_closed),
        ]
        for coeffs, betas, log_z1, closed_fn in cases:
            worst = 0.0
            for beta in betas:
                beta = float(beta)
                numeric = thermo_numeric(lambda b: log_z1(b, coeffs), beta, regime=coeffs.variant)
                closed = closed_fn(beta, coeffs)
                for a, b in ((numeric.u_per_n, closed.u_per_n), (numeric.cv_per_nk, closed.cv_per_nk)):
                    worst = max(worst, abs(a - b) / abs(b))
            c.check(worst <= 1e-6, f"{coeffs.variant.value} max rel {worst:.2e}")


def test_5_legendre_identity():
    with Criterion(5, "F = U - tau S on both presets", budget=5.0) as c:
        points = [row.point for name in ("fig1", "fig2") for row in run_sweep(PRESETS[name])]
        closed = [p for p in points if p.source is Source.CLOSED_FORM]
        worst = max(p.legendre_residual for p in closed)
        c.check(len(closed) >= 400, f"{len(closed)} points")
        c.check(worst <= 1e-8, f"max residual {worst:.2e}")


def test_6_spectrum_limits():
    with Criterion(6, "spectrum limits", budget=1.0) as c:
        zero = RingParams(mass=1, radius=1, flux_ratio=0)
        n = np.arange(1, 101)
        pairs = relativistic_energy(zero, n), relativistic_energy(zero, -n)
        c.check(np.array_equal(*pairs), "E_n == E_-n bit-exact for |n| <= 100")
        heavy = RingParams(mass=1e6, radius=1, flux_ratio=50)
        n = np.arange(-10, 11)
        ratio = relativistic_kinetic_energy(heavy, n) / nonrelativistic_energy(heavy, n)
        worst = float(np.max(np.abs(ratio - 1)))
        c.check(worst < 1e-8, f"max |(E-m)/eps - 1| {worst:.2e}")


def test_7_figure_shapes():
    with Criterion(7, "figure-shape properties", budget=10.0) as c:
        for name in ("fig1", "fig2"):
            config = PRESETS[name]
            rows = run_sweep(config)
            taus = config.taus()
            s = np.array([[r.point.s_per_nk for r in rows if r.phi == phi] for phi in config.flux_ratios])
            cv = np.array([r.point.cv_per_nk for r in rows])
            c.check(np.all(np.diff(s, axis=1) > 0), f"{name}: S increasing in tau")
            c.check(np.all(np.diff(s, axis=0) < 0), f"{name}: S decreasing in phi")
            c.check(np.all(cv >= 0), f"{name}: C_V >= 0")
            if name == "fig2":
                u = np.array([[r.point.u_per_n for r in rows if r.phi == phi] for phi in config.flux_ratios])
                curvature = np.abs(np.diff(u, n=2, axis=1)) / np.diff(u, axis=1)[:, 1:]
                tail = curvature[:, -10:].max()
                c.check(tail < 1e-6 and np.all(curvature[:, -1] < curvature[:, 0]),
                        f"{name}: U second difference / first difference {tail:.1e} at large tau")
            assert len(taus) == config.tau_steps


@pytest.mark.slow
def test_8_determinism(tmp_path):
    with Criterion(8, "byte-identical fig1 sweeps", budget=None) as c:
        digests = []
        for k in range(2):
            out = tmp_path / f"fig1_{k}.csv"
            subprocess.run([sys.executable, "-m", "abring", "sweep", "--preset", "fig1", "--out", str(out)],
                           check=True)
            digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
        c.check(digests[0] == digests[1], f"sha256 {digests[0][:16]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
