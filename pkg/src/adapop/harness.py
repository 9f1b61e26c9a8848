"""Monte-Carlo experiments and statistical checks against the closed forms.

Three jobs live here: running seeded experiment grids over the engine and
summarizing each cell against its bound report, verifying the single-level
doubling-race tail bounds by direct simulation, and the small statistical
utilities those two need (log-log scaling fits, scheme-ratio comparison,
peak-size exceedance).

Every check compares an empirical estimate to a proven bound, so the pass
rule is one-sided everywhere: estimate ≤ bound plus three standard errors.
Expectation bounds use the sample mean plus a CI halfwidth; probability
bounds use the binomial standard deviation at the bound itself.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from statistics import NormalDist, fmean

import numpy as np

from .bounds import compute_bound_report, lemma1_bounds, level_profile_preset
from .engine import RunConfig, run_batch
from .fitness import FitnessFunction
from .rng import derive_trial_seed, tail_generator
from .schemes import ConfigurationError, UpdatePolicy

SCHEMA_VERSION = 1

CSV_HEADER = ("function", "n", "k", "scheme", "base", "mu_max", "tau", "seed",
              "t_par", "t_seq", "mu_peak", "hit_cap")

# which bounds constrain which counter, per scheme; everything else is unchecked
_CHECKS = {
    "a": (("seq_A", "t_seq"), ("par_A", "t_par"), ("par_A_mumax", "t_par")),
    "b": (("seq_B", "t_seq"), ("par_B", "t_par"), ("par_B_improved", "t_par")),
    "nonoblivious": (("seq_no", "t_seq"), ("par_no", "t_par")),
    "jdw": (),
    "additive": (),
    "constant": (),
}

_MIN_TRIALS_NORMAL_CI = 30


@dataclass(frozen=True)
class ExperimentSpec:
    """A grid of engine cells: one function family crossed with sizes and schemes."""

    function: str
    n_list: tuple
    schemes: tuple
    trials: int
    seed: int
    k: int | None = None
    tau: int = 1
    mu_max: int | None = None
    base: float = 2.0
    confidence: float = 0.95
    max_evaluations: int = 10 ** 9

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if not self.n_list or not self.schemes:
            raise ConfigurationError("the grid needs at least one n and one scheme")
        if self.trials < 1:
            raise ConfigurationError("trials must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigurationError("confidence must lie in (0,1)")
        if self.function == "jump":
            if self.k is None:
                raise ConfigurationError("jump grids need k")
            if self.k > 3 or max(self.n_list) > 30:
                raise ConfigurationError(
                    "jump experiments are limited to n <= 30 and k <= 3; "
                    "larger instances are served by bounds only"
                )


@dataclass(frozen=True)
class TailCheckSpec:
    """Inputs for the doubling-race tail verification."""

    p: float
    k: int
    alphas_upper: tuple
    alphas_lower: tuple
    trials: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "alphas_upper", tuple(self.alphas_upper))
        object.__setattr__(self, "alphas_lower", tuple(self.alphas_lower))
        if self.trials < 1000:
            raise ConfigurationError("tail checks need at least 1000 trials")


@dataclass(frozen=True)
class CellSummary:
    """One grid cell: sample statistics, the applicable bounds, and verdicts.

    ``checks`` maps bound names to {bound, empirical_mean, ci_halfwidth,
    passed}; only bounds whose counter type matches are ever present, so a
    sequential bound can never be checked against generation counts.
    """

    function: str
    n: int
    k: int | None
    scheme: str
    base: float
    mu_max: int | None
    tau: int
    trials: int
    confidence: float
    seed: int
    t_par: dict
    t_seq: dict
    mu_peak_max: int
    censored: int
    bounds: dict
    checks: dict
    records: tuple = field(compare=False, repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "function": self.function, "n": self.n, "k": self.k,
            "scheme": self.scheme, "base": self.base, "mu_max": self.mu_max,
            "tau": self.tau, "trials": self.trials,
            "confidence": self.confidence, "seed": self.seed,
            "t_par": self.t_par, "t_seq": self.t_seq,
            "mu_peak_max": self.mu_peak_max, "censored": self.censored,
            "bounds": self.bounds, "checks": self.checks,
        }


def _stats(values, confidence: float) -> dict:
    mean = fmean(values)
    out = {"mean": mean, "min": min(values), "max": max(values),
           "variance": None, "ci_halfwidth": None}
    if len(values) >= 2:
        var = fmean((v - mean) ** 2 for v in values) * len(values) / (len(values) - 1)
        out["variance"] = var
        if len(values) >= _MIN_TRIALS_NORMAL_CI:
            z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
            out["ci_halfwidth"] = z * math.sqrt(var / len(values))
    return out


def _profile_for(function: str, n: int, k: int | None):
    return level_profile_preset(function, n, k=k)


def summarize_cell(spec: ExperimentSpec, scheme: str, n: int, seed: int,
                   records) -> CellSummary:
    """Reduce one cell's records to statistics plus bound verdicts."""
    fn_k = spec.k if spec.function == "jump" else None
    report = compute_bound_report(_profile_for(spec.function, n, fn_k),
                                  b=spec.base, mu_max=spec.mu_max, tau=spec.tau)
    bounds = report.to_dict()["bounds"]
    t_par = _stats([r.t_par for r in records], spec.confidence)
    t_seq = _stats([r.t_seq for r in records], spec.confidence)
    stats_by_kind = {"t_par": t_par, "t_seq": t_seq}
    checks = {}
    for bound_name, counter in _CHECKS[scheme]:
        bound = bounds.get(bound_name)
        if bound is None:
            continue
        st = stats_by_kind[counter]
        half = st["ci_halfwidth"] if st["ci_halfwidth"] is not None else 0.0
        checks[bound_name] = {
            "bound": bound,
            "empirical_mean": st["mean"],
            "ci_halfwidth": st["ci_halfwidth"],
            "passed": st["mean"] + half <= bound,
        }
    censored = sum(1 for r in records if r.hit_cap)
    if censored:
        warnings.warn(f"{censored}/{len(records)} runs censored in cell "
                      f"({spec.function}, n={n}, {scheme})", RuntimeWarning, stacklevel=2)
    return CellSummary(
        function=spec.function, n=n, k=fn_k, scheme=scheme, base=spec.base,
        mu_max=spec.mu_max, tau=spec.tau, trials=spec.trials,
        confidence=spec.confidence, seed=seed, t_par=t_par, t_seq=t_seq,
        mu_peak_max=max(r.mu_peak for r in records), censored=censored,
        bounds=bounds, checks=checks, records=tuple(records),
    )


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> list:
    """All cells of the grid, in (scheme, n) order, deterministically seeded.

    Cell c gets the c-th seed derived from the master seed, and its trials
    derive from that in turn, so per-cell results never depend on the rest of
    the grid.
    """
    summaries = []
    cell_index = 0
    for scheme in spec.schemes:
        for n in spec.n_list:
            fn_k = spec.k if spec.function == "jump" else None
            fn = FitnessFunction(spec.function, n, fn_k)
            policy = UpdatePolicy(scheme, base=spec.base, mu_max=spec.mu_max)
            cell_seed = derive_trial_seed(spec.seed, cell_index)
            cfg = RunConfig(function=fn, policy=policy, seed=cell_seed,
                            tau=spec.tau, max_evaluations=spec.max_evaluations)
            records = run_batch(cfg, spec.trials, threads=threads)
            summaries.append(summarize_cell(spec, scheme, n, cell_seed, records))
            cell_index += 1
    return summaries


def simulate_doubling_race(p: float, k: int, trials: int, seed: int) -> np.ndarray:
    """Generations to first success when 2^k trials double each generation.

    Equivalent to simulating every Bernoulli trial: the index G of the first
    success is geometric, and the race ends in the first generation whose
    cumulative trial count reaches G.  Thresholds are exact integers, so the
    mapping is exact, not an approximation.
    """
    if not 0.0 < p <= 1.0:
        raise ConfigurationError("p must lie in (0,1]")
    if k < 0 or trials < 1:
        raise ConfigurationError("k and trials must be non-negative / positive")
    g = tail_generator(seed).geometric(p, size=trials).astype(np.int64)
    # cumulative trials by end of generation t: 2^k (2^t - 1), t = 1..
    limit = []
    t = 1
    while True:
        total = (1 << k) * ((1 << t) - 1)
        limit.append(total)
        if total >= int(g.max()):
            break
        t += 1
    return np.searchsorted(np.asarray(limit, dtype=np.int64), g, side="left") + 1


def verify_tail_bounds(spec: TailCheckSpec) -> dict:
    """Empirical exceedance of both tails against their proven bounds.

    Upper tail: P(T > ceil(log2(1/p) - k)^+ + alpha + 1) vs exp(-2^alpha).
    Lower tail: P(T <= log2(1/p) - k - alpha) vs 2^(1-alpha).
    A line passes when the estimate is at most bound + 3 binomial sigmas.
    """
    t = simulate_doubling_race(spec.p, spec.k, spec.trials, spec.seed)
    lemma = lemma1_bounds(spec.p, spec.k)
    out = {"p": spec.p, "k": spec.k, "trials": spec.trials, "seed": spec.seed,
           "upper": [], "lower": []}

    def entry(alpha, threshold, exceed, bound):
        empirical = float(exceed.mean())
        sigma = math.sqrt(bound * (1.0 - bound) / spec.trials) if bound < 1.0 else 0.0
        return {"alpha": alpha, "threshold": threshold, "empirical": empirical,
                "bound": bound, "sigma": sigma,
                "passed": empirical <= bound + 3.0 * sigma}

    for alpha in spec.alphas_upper:
        thr = lemma.upper_tail_threshold(alpha)
        out["upper"].append(entry(alpha, thr, t > thr, lemma.upper_tail_bound(alpha)))
    for alpha in spec.alphas_lower:
        thr = lemma.lower_tail_threshold(alpha)
        out["lower"].append(entry(alpha, thr, t <= thr, lemma.lower_tail_bound(alpha)))
    out["passed"] = all(e["passed"] for e in out["upper"] + out["lower"])
    return out


def verify_peak_bound(records, p_min: float, k: int, betas) -> list:
    """Exceedance of observed peak sizes over max{2^(k+1), 4/p_min}·beta."""
    lemma = lemma1_bounds(p_min, k)
    peaks = [r.mu_peak for r in records]
    out = []
    for beta in betas:
        threshold = lemma.peak_threshold(beta)
        bound = lemma.peak_bound(beta)
        empirical = sum(1 for v in peaks if v > threshold) / len(peaks)
        sigma = math.sqrt(bound * (1.0 - bound) / len(peaks))
        out.append({"beta": beta, "threshold": threshold, "empirical": empirical,
                    "bound": bound, "sigma": sigma,
                    "passed": empirical <= bound + 3.0 * sigma})
    return out


def scaling_fit(n_list, means) -> dict:
    """Least-squares slope of log(mean) against log(n), with fit quality."""
    if len(n_list) != len(means) or len(set(n_list)) < 3:
        raise ConfigurationError("scaling fits need at least 3 distinct n values")
    if any(m <= 0 for m in means) or any(n <= 0 for n in n_list):
        raise ConfigurationError("scaling fits need positive sizes and means")
    xs = [math.log(n) for n in n_list]
    ys = [math.log(m) for m in means]
    xbar, ybar = fmean(xs), fmean(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - ybar) ** 2 for y in ys)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return {"slope": slope, "intercept": intercept, "r_squared": r_squared}


def compare_schemes(cells_a, cells_b) -> dict:
    """Ratio of mean parallel times A/B per n, and whether it keeps growing.

    Cells must cover the same function and n grid.  A non-increase between
    adjacent n is forgiven when the two ratio confidence intervals overlap
    (interval arithmetic on the mean CIs); the strict verdict is reported
    alongside.
    """
    if [c.n for c in cells_a] != [c.n for c in cells_b] or \
            any(a.function != b.function for a, b in zip(cells_a, cells_b)):
        raise ConfigurationError("scheme comparison needs matching function and n grids")
    ratios, lows, highs = [], [], []
    for a, b in zip(cells_a, cells_b):
        ha = a.t_par["ci_halfwidth"] or 0.0
        hb = b.t_par["ci_halfwidth"] or 0.0
        ratios.append(a.t_par["mean"] / b.t_par["mean"])
        lows.append(max(a.t_par["mean"] - ha, 0.0) / (b.t_par["mean"] + hb))
        highs.append((a.t_par["mean"] + ha) / max(b.t_par["mean"] - hb, 1e-12))
    violations = 0
    forgiven = 0
    for i in range(len(ratios) - 1):
        if ratios[i + 1] <= ratios[i]:
            violations += 1
            if highs[i + 1] >= lows[i] and highs[i] >= lows[i + 1]:
                forgiven += 1
    return {
        "n": [c.n for c in cells_a],
        "ratios": ratios,
        "ratio_ci_low": lows,
        "ratio_ci_high": highs,
        "violations": violations,
        "increasing": violations == 0,
        "increasing_allowing_ci_overlap":
            violations == 0 or (violations == 1 and forgiven == 1),
    }


def load_spec(path):
    """Parse a JSON experiment file into its spec type by its "kind" field."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    version = raw.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise ConfigurationError(f"unsupported schema_version {version!r}")
    kind = raw.pop("kind", None)
    if kind == "ea_grid":
        return ExperimentSpec(**raw)
    if kind == "tailcheck":
        return TailCheckSpec(**raw)
    raise ConfigurationError(f"unknown spec kind {kind!r}")


def write_records_csv(fh, summaries) -> None:
    """Raw per-run rows for every cell, in cell order then trial order."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for cell in summaries:
        for r in cell.records:
            writer.writerow([
                cell.function, cell.n, "" if cell.k is None else cell.k,
                cell.scheme, cell.base, "" if cell.mu_max is None else cell.mu_max,
                cell.tau, r.seed, r.t_par, r.t_seq, r.mu_peak,
                "true" if r.hit_cap else "false",
            ])


def summaries_to_json(summaries) -> str:
    return json.dumps([c.to_dict() for c in summaries], indent=2, sort_keys=True)
