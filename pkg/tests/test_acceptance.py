"""Exit criteria for the package, one test per criterion.

Each test prints a PASS/FAIL line (collected into the pytest terminal
summary) with the measured quantity and the wall time against its budget.
Run alone with ``pytest tests/test_acceptance.py``.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from circwalk import experiments as ex
from circwalk._frac import frac_multiples
from circwalk.alpha import AlphaVector, make_alpha
from circwalk.cli import main
from circwalk.diophantine import (
    DM_THRESHOLD,
    DMVerdict,
    beta_hat,
    davenport_mahler_check,
    dirichlet_b_hat,
    nearest_int_dist,
)
from circwalk.fourier import q_hat
from circwalk.measure import (
    AtomicMeasure,
    atoms_on_circle,
    convolve_power,
    discrepancy_exact,
    discrepancy_oracle,
    walk_distributions,
)

from conftest import ACCEPTANCE_LINES
from oracles import enumerate_paths, naive_beta_scan

PHI = make_alpha("phi")
PLASTIC = make_alpha("plastic")


@contextmanager
def criterion(name, budget_s, already=0.0):
    """Time the block, record a PASS/FAIL line, and fail on a blown budget.

    ``already`` is time spent before the block (shared fixtures) that counts
    against the same budget.
    """
    info = {}
    t0 = time.perf_counter() - already
    ok = False
    try:
        yield info
        ok = True
    finally:
        dt = time.perf_counter() - t0
        ok = ok and dt < budget_s
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail} ({dt:.1f}s / {budget_s}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert dt < budget_s, f"{name} took {dt:.1f}s, budget {budget_s}s"


@pytest.fixture(scope="module")
def verify_d1():
    cfg = ex.ExperimentConfig("phi", k_min=1, k_max=400, n_max_dioph=10**5, q_max=10**3)
    t0 = time.perf_counter()
    res = ex.run_verify(cfg)
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def verify_d2():
    cfg = ex.ExperimentConfig("plastic", k_min=10, k_max=150, n_max_dioph=10**5, q_max=10**3)
    t0 = time.perf_counter()
    res = ex.run_verify(cfg)
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def verify_rational():
    return ex.run_verify(ex.ExperimentConfig("dec:0.5", k_min=1, k_max=50))


def test_discrepancy_oracle_equivalence():
    with criterion("discrepancy oracle equivalence (1000 measures, <=16 atoms, 1e-12)", 10) as info:
        rng = np.random.default_rng(20240611)
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(1, 17))
            pos = np.unique(rng.random(n))
            w = rng.random(pos.size) + 1e-3
            p = AtomicMeasure(pos, w / math.fsum(w))
            worst = max(worst, abs(discrepancy_exact(p) - discrepancy_oracle(p)))
        info["max_abs_diff"] = f"{worst:.3g}"
        assert worst <= 1e-12


def test_exhaustive_path_equivalence():
    with criterion("exhaustive path equivalence (d=1..3, k=1..10, exact)", 60) as info:
        mismatches = []
        for d in (1, 2, 3):
            for k in range(1, 11):
                if convolve_power(d, k).as_dict() != enumerate_paths(d, k):
                    mismatches.append((d, k))
        info["mismatches"] = len(mismatches)
        assert not mismatches


def test_fourier_measure_consistency():
    with criterion("Fourier-measure consistency (phi k<=200, plastic k<=60, m=1..50, 1e-9)", 60) as info:
        m = np.arange(1, 51)
        worst_re = worst_im = 0.0
        for alpha, k_max in ((PHI, 200), (PLASTIC, 60)):
            q = q_hat(alpha, m)
            for dist in walk_distributions(alpha.d, k_max):
                p = atoms_on_circle(dist, alpha)
                phase = 2 * np.pi * np.outer(m, p.positions)
                worst_re = max(worst_re, np.abs(np.cos(phase) @ p.weights - q**dist.k).max())
                worst_im = max(worst_im, np.abs(np.sin(phase) @ p.weights).max())
        info["max_re_err"] = f"{worst_re:.3g}"
        info["max_im"] = f"{worst_im:.3g}"
        assert worst_re < 1e-9 and worst_im < 1e-9


def _envelope_check(res):
    bad = [r.k for r in res.rows if not (r.c1_envelope <= r.d_exact <= r.c2_envelope)]
    return bad


def test_theorem_sandwich_d1(verify_d1):
    res, elapsed = verify_d1
    with criterion("rate sandwich d=1 (phi, k=1..400, slope[100,400] in -0.5+-0.05)", 300, elapsed) as info:
        assert res.approx.beta_hat == pytest.approx(0.381966, abs=1e-5)
        assert all(r.d_exact is not None for r in res.rows)
        bad = _envelope_check(res)
        slope = ex.loglog_slope([r.k for r in res.rows], [r.d_exact for r in res.rows], 100, 400)
        info.update(c1=f"{res.constants.c1:.4g}", c2=f"{res.constants.c2:.4g}",
                    envelope_violations=len(bad), slope=f"{slope:.4f}")
        assert not bad
        assert abs(slope + 0.5) <= 0.05


def test_theorem_sandwich_d2(verify_d2):
    res, elapsed = verify_d2
    with criterion("rate sandwich d=2 (plastic, k=10..150, slope[60,150] in -1.0+-0.1)", 600, elapsed) as info:
        assert all(r.d_exact is not None for r in res.rows)
        bad = _envelope_check(res)
        slope = ex.loglog_slope([r.k for r in res.rows], [r.d_exact for r in res.rows], 60, 150)
        info.update(c1=f"{res.constants.c1:.4g}", c2=f"{res.constants.c2:.4g}",
                    envelope_violations=len(bad), slope=f"{slope:.4f}")
        assert not bad
        assert abs(slope + 1.0) <= 0.1


def test_bound_sandwich_everywhere(verify_d1, verify_d2, verify_rational):
    with criterion("bound sandwich su <= D <= ET on every row (slack 1e-9)", 10) as info:
        rows = verify_d1[0].rows + verify_d2[0].rows + verify_rational.rows
        bad = [
            r.k for r in rows
            if r.d_exact is not None and not (r.su_lower <= r.d_exact + 1e-9 and r.d_exact <= r.et_upper + 1e-9)
        ]
        info.update(rows=len(rows), violations=len(bad))
        assert not bad


def test_diophantine_values():
    with criterion("diophantine values (beta_hat phi/plastic, B_hat <= sqrt(d))", 60) as info:
        est = beta_hat(PHI, 10**5)
        ref, ref_arg = naive_beta_scan(PHI.entries, 10**5)
        assert est.beta_argmin == 1 == ref_arg
        assert abs(est.beta_hat - 0.381966) <= 1e-5
        assert abs(est.beta_hat - ref) <= 1e-12

        pl = beta_hat(PLASTIC, 10**5)
        assert 0.3 < pl.beta_hat < 0.6458
        assert pl.beta_hat < DM_THRESHOLD
        assert davenport_mahler_check(pl.beta_hat) is DMVerdict.OK

        rng = np.random.default_rng(314159)
        worst_ratio = 0.0
        for _ in range(100):
            d = int(rng.integers(1, 4))
            alpha = AlphaVector.from_values(rng.random(d))
            b = dirichlet_b_hat(alpha, 200).b_hat
            worst_ratio = max(worst_ratio, b / math.sqrt(d))
        info.update(beta_phi=f"{est.beta_hat:.7f}", beta_plastic=f"{pl.beta_hat:.5f}",
                    max_B_over_sqrt_d=f"{worst_ratio:.4f}")
        assert worst_ratio <= 1.0


def test_proof_inequalities():
    with criterion("proof inequalities (1e5 inputs each, zero violations)", 10) as info:
        rng = np.random.default_rng(2718)
        x = rng.uniform(0, 10, 100_000)
        low = np.cos(2 * np.pi * x) < 1 - 2 * np.pi**2 * nearest_int_dist(x[:, None]) ** 2 - 1e-12
        n1 = int(np.count_nonzero(low))

        n2 = 0
        for _ in range(100):
            d = int(rng.integers(1, 6))
            alpha = AlphaVector.from_values(rng.random(d))
            m = np.arange(1, 1001)
            r = nearest_int_dist(frac_multiples(2 * m, alpha.entries))
            n2 += int(np.count_nonzero(np.abs(q_hat(alpha, m)) > np.exp(-(4 / d) * r**2) + 1e-12))
        info.update(inputs=f"{x.size}+{100 * 1000}", cos_violations=n1, qhat_violations=n2)
        assert n1 == 0 and n2 == 0


def test_montecarlo_coherence(tmp_path):
    with criterion("Monte Carlo coherence (phi, k=50, 1e5 samples, <0.02, byte-identical)", 30) as info:
        args = ["walk", "--alpha", "phi", "--k", "50", "--mode", "montecarlo", "--samples", "100000", "--seed", "12345"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main([*args, "--out", str(a)]) == 0
        assert main([*args, "--out", str(b)]) == 0
        identical = a.read_bytes() == b.read_bytes()

        rows = np.loadtxt(a, delimiter=",", skiprows=1, ndmin=2)
        emp = discrepancy_exact(AtomicMeasure(rows[:, 0], rows[:, 1]))
        exact = discrepancy_exact(atoms_on_circle(convolve_power(1, 50), PHI))
        info.update(d_emp=f"{emp:.5f}", d_exact=f"{exact:.5f}", diff=f"{abs(emp - exact):.5f}", identical=identical)
        assert identical
        assert abs(emp - exact) < 0.02
