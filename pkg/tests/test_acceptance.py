"""End-to-end acceptance checks, one test per numbered criterion.

Each test prints a single PASS/FAIL line with the measured quantities so a
plain ``pytest -s tests/test_acceptance.py`` doubles as a report.  Statistical
checks use the shared rule: empirical mean plus CI halfwidth (or empirical
frequency plus three binomial sigmas) must not exceed the closed-form value.
"""

import itertools
import math
import os
import time

import numpy as np
import pytest

from adapop.bounds import compute_bound_report, lemma1_bounds, level_profile_preset
from adapop.bounds import LevelProfile, upper_bound_scheme_a, upper_bound_scheme_b
from adapop.engine import RunConfig, run, run_one_plus_lambda
from adapop.fitness import leadingones
from adapop.harness import (ExperimentSpec, TailCheckSpec, compare_schemes,
                            run_experiment, scaling_fit, verify_peak_bound,
                            verify_tail_bounds)
from adapop.idproto import contract, expand, root
from adapop.rng import derive_trial_seed, tail_generator
from adapop.schemes import FAILURE, SCHEMES, UpdatePolicy, success

import oracles

THREADS = os.cpu_count() or 1


def report(num, ok, detail):
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="module")
def lo_cell_b100():
    """Scheme B on LeadingOnes n=100, 100 trials: criteria 3 and 7 share it."""
    spec = ExperimentSpec(function="leadingones", n_list=(100,), schemes=("b",),
                          trials=100, seed=271828)
    t0 = time.monotonic()
    (cell,) = run_experiment(spec, threads=THREADS)
    return cell, time.monotonic() - t0


@pytest.fixture(scope="module")
def lo_scaling_grid():
    """The bundled scaling study: schemes a and b over n in {50,...,400}."""
    spec = ExperimentSpec(function="leadingones", n_list=(50, 100, 200, 400),
                          schemes=("a", "b"), trials=100, seed=271828)
    return run_experiment(spec, threads=THREADS)


def test_criterion_01_expectation_sandwich():
    t0 = time.monotonic()
    worst = math.inf
    for p in (1.0, 0.5, 0.25, 1 / (10 * math.e), 1 / (100 * math.e)):
        for k in range(7):
            lb = lemma1_bounds(p, k)
            epar = oracles.exact_parallel_expectation(p, k)
            eseq = oracles.exact_sequential_expectation(p, k)
            assert lb.par_exp_lo < epar < lb.par_exp_hi, (p, k, epar)
            assert lb.seq_exp_lo <= eseq <= lb.seq_exp_hi, (p, k, eseq)
            worst = min(worst, lb.par_exp_hi - epar, epar - lb.par_exp_lo,
                        lb.seq_exp_hi - eseq, eseq - lb.seq_exp_lo)
    elapsed = time.monotonic() - t0
    ok = elapsed < 1.0
    report(1, ok, f"35 grid cells inside both windows, slack >= {worst:.3f}, "
                  f"{elapsed:.2f}s < 1s")
    assert ok, f"runtime {elapsed:.2f}s exceeds 1s"


def test_criterion_02_tail_bounds_monte_carlo():
    t0 = time.monotonic()
    spec = TailCheckSpec(p=0.01, k=0, alphas_upper=(0, 1, 2),
                         alphas_lower=(1, 2, 3), trials=10**4, seed=314159)
    result = verify_tail_bounds(spec)
    elapsed = time.monotonic() - t0
    ok = result["passed"] and elapsed < 60.0
    margins = ["{}:{:.4f}<={:.4f}".format(e["alpha"], e["empirical"],
                                          e["bound"] + 3 * e["sigma"])
               for e in result["upper"] + result["lower"]]
    report(2, ok, f"10^4 races, {'; '.join(margins)}, {elapsed:.1f}s < 60s")
    assert result["passed"], result
    assert elapsed < 60.0


def test_criterion_03_halving_scheme_sequential_bound(lo_cell_b100):
    cell, elapsed = lo_cell_b100
    bound = 3 * math.e * 100 * 100
    mean = cell.t_seq["mean"]
    half = cell.t_seq["ci_halfwidth"]
    ok = mean + half <= bound and elapsed < 120.0
    report(3, ok, f"mean t_seq {mean:.0f} + ci {half:.0f} <= {bound:.0f}, "
                  f"{elapsed:.1f}s < 120s")
    assert mean + half <= bound
    assert elapsed < 120.0


def test_criterion_04_reset_scheme_sequential_bound():
    spec = ExperimentSpec(function="onemax", n_list=(100,), schemes=("a",),
                          trials=100, seed=161803)
    (cell,) = run_experiment(spec, threads=THREADS)
    bound = 2 * math.e * 100 * (math.log(100) + 1)
    mean = cell.t_seq["mean"]
    half = cell.t_seq["ci_halfwidth"]
    ok = mean + half <= bound
    report(4, ok, f"mean t_seq {mean:.0f} + ci {half:.0f} <= {bound:.0f}")
    assert ok


def test_criterion_05_scaling_table(lo_scaling_grid):
    cells = lo_scaling_grid
    a_cells = [c for c in cells if c.scheme == "a"]
    b_cells = [c for c in cells if c.scheme == "b"]
    ns = [c.n for c in b_cells]
    fit_b = scaling_fit(ns, [c.t_par["mean"] for c in b_cells])
    fit_a = scaling_fit(ns, [c.t_par["mean"] for c in a_cells])
    cmp = compare_schemes(a_cells, b_cells)
    in_window = 0.85 <= fit_b["slope"] <= 1.15
    steeper = fit_a["slope"] > fit_b["slope"]
    growing = cmp["increasing_allowing_ci_overlap"]
    ok = in_window and steeper and growing
    report(5, ok, f"slope_b {fit_b['slope']:.3f} in [0.85,1.15], "
                  f"slope_a {fit_a['slope']:.3f} > slope_b, "
                  f"ratios {['%.2f' % r for r in cmp['ratios']]} growing={growing}")
    assert in_window, fit_b
    assert steeper, (fit_a, fit_b)
    assert growing, cmp


def test_criterion_06_jump_bounds():
    t0 = time.monotonic()
    spec = ExperimentSpec(function="jump", n_list=(20,), schemes=("b",),
                          trials=50, seed=577215, k=3)
    (cell,) = run_experiment(spec, threads=THREADS)
    elapsed = time.monotonic() - t0
    par_check = cell.checks["par_B_improved"]
    seq_check = cell.checks["seq_B"]
    ok = par_check["passed"] and seq_check["passed"] and elapsed < 300.0
    report(6, ok, f"t_par {par_check['empirical_mean']:.1f}+ci <= "
                  f"{par_check['bound']:.1f}, t_seq {seq_check['empirical_mean']:.0f}"
                  f"+ci <= {seq_check['bound']:.0f}, {elapsed:.1f}s < 300s")
    assert par_check["passed"], par_check
    assert seq_check["passed"], seq_check
    assert elapsed < 300.0


def test_criterion_07_peak_population(lo_cell_b100):
    cell, _ = lo_cell_b100
    rows = verify_peak_bound(cell.records, p_min=1 / (math.e * 100), k=0,
                             betas=(2.0, 4.0))
    ok = all(r["passed"] for r in rows)
    detail = "; ".join("beta {:.0f}: {:.3f} <= {:.3f}".format(
        r["beta"], r["empirical"], r["bound"] + 3 * r["sigma"]) for r in rows)
    report(7, ok, detail)
    assert ok, rows


def test_criterion_08_island_engine_equals_offspring_form():
    master = 1414213
    mismatches = 0
    for i in range(1000):
        cfg = RunConfig(function=leadingones(20),
                        policy=UpdatePolicy(SCHEMES[i % len(SCHEMES)]),
                        seed=derive_trial_seed(master, i))
        if run(cfg) != run_one_plus_lambda(cfg):
            mismatches += 1
    ok = mismatches == 0
    report(8, ok, f"1000 paired runs across all {len(SCHEMES)} schemes, "
                  f"{mismatches} mismatches")
    assert ok


def test_criterion_09_identifier_protocol_tracks_halving_scheme():
    policy = UpdatePolicy("b")

    def walk(outcomes, forced_depth=None):
        c = root()
        mu = 1
        for raw in outcomes:
            improved = bool(raw)
            if forced_depth is not None and c.depth >= forced_depth:
                improved = True
            c = contract(c) if improved else expand(c)
            c.check_invariants()
            mu = policy.update_size(mu, success() if improved else FAILURE)
            assert c.size == mu, (c.size, mu)

    checked = 0
    for length in range(13):
        for seq in itertools.product((False, True), repeat=length):
            walk(seq)
            checked += 1

    gen = tail_generator(1732050)
    for _ in range(10**4):
        draws = gen.random(1000)
        walk(draws < 0.5, forced_depth=12)
    report(9, True, f"{checked} exhaustive sequences (length <= 12) and 10^4 "
                    f"random length-1000 walks, sizes match, invariants hold")


def test_criterion_10_formula_identities():
    rng = np.random.default_rng(2236067)
    worst_seq = worst_par = 0.0
    worst_tel = 0.0
    for _ in range(100):
        m = int(rng.integers(2, 30))
        s = rng.uniform(1e-4, 1.0, size=m - 1)
        weights = rng.uniform(0.0, 1.0, size=m)
        p_init = tuple(w / math.fsum(weights) for w in weights)
        profile = LevelProfile(s=tuple(s), p_init=p_init, canonic=True)
        a = upper_bound_scheme_a(profile)
        b = upper_bound_scheme_b(profile)
        worst_seq = max(worst_seq, abs(b["seq"] - 1.5 * a["seq"]) / b["seq"])
        worst_par = max(worst_par, abs(b["par"] - 2.0 * a["par"]) / b["par"])

        ordered = tuple(sorted(s, reverse=True))
        mono = LevelProfile(s=ordered, p_init=p_init, canonic=True)
        general = upper_bound_scheme_b(mono)["par_improved"]
        tail = math.log2(1.0 / ordered[-1])
        closed = math.fsum(p_init[i] * (3.0 * (m - i - 2) + tail)
                           for i in range(m - 1))
        worst_tel = max(worst_tel, abs(general - closed) / max(abs(closed), 1.0))
    ok = worst_seq <= 1e-12 and worst_par <= 1e-12 and worst_tel <= 1e-9
    report(10, ok, f"100 random profiles, ratio errors seq {worst_seq:.1e} / "
                   f"par {worst_par:.1e} <= 1e-12, telescoping {worst_tel:.1e}")
    assert worst_seq <= 1e-12
    assert worst_par <= 1e-12
    assert worst_tel <= 1e-9
