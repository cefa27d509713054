"""
Acceptance gate: one test per criterion, each logging a PASS/FAIL line.

The lines are collected in ``conftest.ACCEPTANCE_LOG`` and printed in the
terminal summary, so they show up with or without ``-s``.
"""

import math
import time

import numpy as np
import pytest

from chanuncert.bounds import BoundParams, norm_ineq_rhs, product_bound_thm1, sum_bound_thm2, sum_bound_thm3, sum_bound_thm4
from chanuncert.channels import density_from_bloch, standard_channel
from chanuncert.properties import check_properties, random_params
from chanuncert.sampling import ginibre, instance_rng, random_channel, random_state
from chanuncert.sweeps import PRESETS, run_sweep
from chanuncert.variance import channel_uncertainty

import oracles
from conftest import ACCEPTANCE_LOG

SEED = 20241015
MIXED = density_from_bloch((0, 0, 0))
Q_GRID = [k / 10 for k in range(11)]


def record(name: str, passed: bool, detail: str, elapsed: float | None = None) -> None:
    timing = f" [{elapsed:.2f} s]" if elapsed is not None else ""
    line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}{timing}"
    ACCEPTANCE_LOG.append(line)
    print(line)


def run_harness(names, trials):
    t0 = time.perf_counter()
    report = check_properties(seed=SEED, trials=trials, names=names, tol=1e-9)
    elapsed = time.perf_counter() - t0
    failed = [n for n, s in report.summaries.items() if s.failures]
    counts = ", ".join(f"{n}={s.trials - s.failures}/{s.trials}" for n, s in report.summaries.items())
    return report, failed, counts, elapsed


def test_representation_invariance():
    report, failed, counts, elapsed = run_harness(["representation_invariance"], 500)
    ok = report.passed and elapsed < 5
    record("representation invariance (500 qubit triples, 1e-9, <5 s)", ok, counts, elapsed)
    assert report.passed, failed
    assert elapsed < 5


def test_channel_properties():
    names = ["nonnegativity", "linearity", "concavity", "unitary_invariance", "ancilla_independence", "additivity"]
    report, failed, counts, elapsed = run_harness(names, 200)
    ok = report.passed and elapsed < 30
    record("properties (i)-(vi) (200 each, bipartite dim 4, 1e-9, <30 s)", ok, counts, elapsed)
    assert report.passed, failed
    assert elapsed < 30


def closed_form(kind: str, q: float) -> float:
    if kind == "BF":
        return 1 - q
    ad = 1 - (1 + math.sqrt(1 - q)) ** 2 / 4
    return ad if kind == "AD" else ad - q / 4


def test_closed_forms_against_symbolic_oracle():
    worst = 0.0
    for kind in ("AD", "BF", "PD"):
        for q, want in zip(Q_GRID, oracles.SYMBOLIC_AT_MIXED[kind]):
            got = channel_uncertainty(standard_channel(kind, q), MIXED).value
            worst = max(worst, abs(got - want), abs(closed_form(kind, q) - want))
    ok = worst <= 1e-12
    record("closed-form values at I/2 (AD, BF, PD, 11 q each, 1e-12)", ok, f"max error {worst:.2e}")
    assert ok


def test_bound_fuzzing():
    names = ["bound_thm1", "bound_thm2", "bound_thm3_LB1", "bound_thm3_LB2", "bound_thm3_LB3",
             "bound_thm4_LB1", "bound_thm4_LB2", "bound_thm4_LB3", "bound_combined"]
    report, failed, counts, elapsed = run_harness(names, 1000)
    ok = report.passed and elapsed < 60
    record("bound validity fuzzing (1000 each, 1e-9, <60 s)", ok, counts, elapsed)
    assert report.passed, failed
    assert elapsed < 60


def test_equality_witnesses():
    bf = standard_channel("BF", 0.5)
    r1 = product_bound_thm1(bf, bf, MIXED)
    r2 = sum_bound_thm2(bf, bf, MIXED)
    errs = [abs(r1.lhs - 0.25), abs(r1.bound - 0.25), abs(r2.lhs - 1.0), abs(r2.bound - 1.0)]
    ok = max(errs) <= 1e-10
    detail = f"product {r1.lhs:.12g} >= {r1.bound:.12g}, sum {r2.lhs:.12g} >= {r2.bound:.12g}"
    record("equality witnesses BF(0.5) x2 at I/2 (1e-10)", ok, detail)
    assert ok


@pytest.mark.parametrize("variant", ["LB1", "LB2", "LB3"])
def test_norm_inequalities(variant):
    worst = math.inf
    for trial in range(1000):
        rng = instance_rng(SEED, trial)
        rows, cols = (int(x) for x in rng.integers(1, 4, size=2))
        vectors = [ginibre(rng, rows, cols) * rng.uniform(0.1, 3) for _ in range(3)]
        params = random_params(variant, rng)
        lhs = sum(np.linalg.norm(v) ** 2 for v in vectors)
        worst = min(worst, lhs - norm_ineq_rhs(vectors, params))
    ok = worst >= -1e-9
    record(f"norm inequality {variant} (1000 triples, M, L in (0, 5], 1e-9)", ok, f"min slack {worst:.3e}")
    assert ok


def test_norm_inequality_lb1_equality():
    u = ginibre(np.random.default_rng(SEED), 2)
    lhs = 3 * np.linalg.norm(u) ** 2
    rhs = norm_ineq_rhs([u, u, u], BoundParams(2, 1, "LB1"))
    ok = abs(lhs - rhs) <= 1e-10
    record("norm inequality LB1 all-equal case (M=2, L=1, N=3, 1e-10)", ok, f"lhs {lhs:.15g}, rhs {rhs:.15g}")
    assert ok


def test_figure_presets():
    t0 = time.perf_counter()
    parts, ok = [], True
    for name, spec in PRESETS.items():
        rows = np.array(run_sweep(spec))
        lhs, bound = rows[:, -2], rows[:, -1]
        below = bool(np.all(bound <= lhs + 1e-9))
        positive = float(np.mean(bound > 0))
        ok &= below and positive >= 0.9
        parts.append(f"{name} {len(rows)} pts, bound<=lhs {below}, positive {positive:.1%}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    record("figure presets (bound <= lhs at 1e-9, >=90% positive, <30 s)", ok, "; ".join(parts), elapsed)
    assert ok


def test_inner_and_outer_sqrt_differ():
    params = BoundParams(2, 1, "LB1")
    diffs = []
    for trial in range(100):
        rng = instance_rng(SEED, trial)
        chans = [random_channel(2, 2, rng) for _ in range(3)]
        rho = random_state(2, rng)
        diffs.append(abs(sum_bound_thm3(chans, rho, params).bound - sum_bound_thm4(chans, rho, params).bound))
    n_diff = sum(d > 1e-6 for d in diffs)
    ok = n_diff >= 1
    record("inner vs outer sqrt LB1 differ (100 instances, >1e-6)", ok,
           f"{n_diff}/100 differ, max difference {max(diffs):.3e}")
    assert ok
