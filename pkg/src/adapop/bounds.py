"""Closed-form runtime bounds for elitist EAs with adaptive population sizes.

Everything here is a pure function of a fitness-level description: the number
of levels m, a success probability s_i for leaving each non-optimal level
i < m, and a distribution over the starting level.  The bounds cover the
reset-on-success scheme (A), the halve-on-success scheme (B) including its
improved and profile-free parallel forms, the scheme that pins the size to
the reciprocal level probability (non-oblivious), a capped-size variant, and
a matching lower bound, plus the single-level doubling analysis the scheme
bounds build on.

Conventions: levels are numbered 1..m in increasing fitness, level m is the
optimum; "parallel" counts generations, "sequential" counts function
evaluations; logarithms are base 2 unless a growth base b overrides them.
Upper bounds grow as any s_i shrinks, and the B-scheme bounds relate to the
A-scheme ones by fixed factors (1.5 sequential, 2 parallel), both of which
are exercised by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .schemes import ConfigurationError

E = math.e
_NB = E / (E - 1.0)  # expected periods per level when mu = ceil(1/s)

PRESET_KINDS = ("onemax", "leadingones", "unimodal", "jump", "ridge")

BOUND_NAMES = (
    "seq_A",
    "par_A",
    "seq_B",
    "par_B",
    "par_B_improved",
    "par_B_generic",
    "seq_no",
    "par_no",
    "par_A_mumax",
    "seq_lower_tight",
)


@dataclass(frozen=True)
class LevelProfile:
    """Fitness-level structure: success probabilities plus starting distribution.

    ``s[i]`` is the probability that one offspring leaves level i+1 upward
    (0-based storage for 1-based levels 1..m-1).  ``p_init`` has one entry
    per level including the optimal one; it defaults to the pessimistic
    point mass on level 1.  ``canonic`` marks profiles with one level per
    attainable fitness value; the parallel bounds require it.  ``n`` is the
    genotype length behind the profile when there is one, used by the
    profile-free parallel bound.
    """

    s: tuple
    p_init: tuple = None
    canonic: bool = False
    n: int | None = None

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        object.__setattr__(self, "s", s)
        for v in s:
            if not 0.0 < v <= 1.0:
                raise ConfigurationError(f"level probabilities must lie in (0,1], got {v}")
        if self.p_init is None:
            p = (1.0,) + (0.0,) * len(s)
        else:
            p = tuple(float(v) for v in self.p_init)
        object.__setattr__(self, "p_init", p)
        if len(p) != len(s) + 1:
            raise ConfigurationError(
                f"p_init needs one entry per level: expected {len(s) + 1}, got {len(p)}"
            )
        if any(v < 0.0 for v in p) or abs(math.fsum(p) - 1.0) > 1e-9:
            raise ConfigurationError("p_init must be a probability distribution")
        if self.n is not None and self.n < 1:
            raise ConfigurationError("n must be positive when given")

    @property
    def m(self) -> int:
        return len(self.s) + 1

    @property
    def s_min(self) -> float:
        if not self.s:
            raise ConfigurationError("profile has no non-optimal levels")
        return min(self.s)


def level_profile_preset(kind: str, n: int, k: int | None = None, d: int | None = None,
                         exact_init: bool = False) -> LevelProfile:
    """Canonical level profile of a named benchmark function.

    onemax       m = n+1, s_i = (n-i)/(en) for fitness value i = 0..n-1
    leadingones  m = n+1, s_i = 1/(en) throughout
    unimodal     m = d (required), s_i = 1/(en) throughout
    ridge        the unimodal instance with d = 2n
    jump         m = n+1 over fitness ranks; single-bit slopes (n-v)/(en)
                 below the gap and (n-v+k)/(en) on it, and 1/(e n^k) for the
                 final jump from the rim to the optimum

    ``exact_init`` replaces the pessimistic start-at-the-bottom assumption
    with the binomial distribution of a uniform random genotype; it is only
    defined for onemax, where fitness is the number of ones.
    """
    if n < 1:
        raise ConfigurationError("n must be positive")
    if kind not in PRESET_KINDS:
        raise ConfigurationError(f"unknown preset kind {kind!r}")
    if exact_init and kind != "onemax":
        raise ConfigurationError("exact initial distribution is only available for onemax")
    en = E * n
    if kind == "onemax":
        s = tuple((n - v) / en for v in range(n))
        p_init = None
        if exact_init:
            denom = 1 << n
            p_init = tuple(math.comb(n, v) / denom for v in range(n + 1))
        return LevelProfile(s=s, p_init=p_init, canonic=True, n=n)
    if kind == "leadingones":
        return LevelProfile(s=(1.0 / en,) * n, canonic=True, n=n)
    if kind == "unimodal":
        if d is None or d < 2:
            raise ConfigurationError("unimodal needs the number of levels d >= 2")
        return LevelProfile(s=(1.0 / en,) * (d - 1), canonic=True, n=n)
    if kind == "ridge":
        return LevelProfile(s=(1.0 / en,) * (2 * n - 1), canonic=True, n=n)
    # jump: levels 1..n hold fitness values 1..n, level n+1 is the optimum
    if k is None or not 1 <= k <= n:
        raise ConfigurationError("jump needs 1 <= k <= n")
    s = []
    for v in range(1, n + 1):
        if v <= k - 1:
            s.append((n - v) / en)  # gap interior: flip one of the n-v ones
        elif v <= n - 1:
            s.append((n - v + k) / en)  # slope: flip one of the n-(v-k) zeros
        else:
            s.append(1.0 / (E * n ** k))  # rim: flip the k missing bits at once
    return LevelProfile(s=tuple(s), canonic=True, n=n)


def _weighted_suffix_sum(profile: LevelProfile, terms) -> float:
    # sum_i p_init(i) * sum_{j>=i} terms[j], suffix accumulated right to left
    total = 0.0
    suffix = 0.0
    p = profile.p_init
    for i in range(len(terms) - 1, -1, -1):
        suffix += terms[i]
        total += p[i] * suffix
    return total


def _require_canonic(profile: LevelProfile, what: str) -> None:
    if not profile.canonic:
        raise ConfigurationError(f"{what} is only valid for canonic level partitions")


def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base)


def upper_bound_scheme_a(profile: LevelProfile, base: float = 2.0,
                         parallel: bool = True) -> dict:
    """Reset-on-success bounds: {seq, par}.

    seq = (b/2) * sum_i p_init(i) * 2 * sum_{j>=i} 1/s_j and
    par = sum_i p_init(i) * 2 * sum_{j>=i} log_b(2/s_j); the parallel form
    needs a canonic profile, pass parallel=False to skip it.
    """
    if not base > 1.0:
        raise ConfigurationError("base must exceed 1")
    seq = (base / 2.0) * 2.0 * _weighted_suffix_sum(profile, [1.0 / v for v in profile.s])
    par = None
    if parallel:
        _require_canonic(profile, "the parallel bound")
        par = 2.0 * _weighted_suffix_sum(profile, [_log(2.0 / v, base) for v in profile.s])
    return {"seq": seq, "par": par}


def upper_bound_scheme_b(profile: LevelProfile, base: float = 2.0,
                         parallel: bool = True) -> dict:
    """Halve-on-success bounds: {seq, par, par_improved, par_generic}.

    seq and par are the reset-scheme formulas scaled by 3/2 and 2.  The
    improved parallel form charges each start level i with
    3(m-i-1) + log_b(1/s_i) + sum of positive log-ratio increments, which
    telescopes to 3(m-i-1) + log_b(1/s_{m-1}) on non-increasing profiles.
    par_generic = 2m + n log_b n is profile-free up to an additive constant
    that is deliberately not quantified; it is None when the profile carries
    no genotype length.
    """
    a = upper_bound_scheme_a(profile, base=base, parallel=parallel)
    out = {
        "seq": 1.5 * a["seq"],
        "par": None if a["par"] is None else 2.0 * a["par"],
        "par_improved": None,
        "par_generic": None,
    }
    if parallel:
        logs = [_log(1.0 / v, base) for v in profile.s]
        m = profile.m
        # suffix of positive increments (log 1/s_j - log 1/s_{j-1})^+ above each level
        pos_suffix = [0.0] * (len(logs) + 1)
        for j in range(len(logs) - 1, 0, -1):
            pos_suffix[j] = pos_suffix[j + 1] + max(logs[j] - logs[j - 1], 0.0)
        total = 0.0
        for a_idx in range(len(logs)):  # start level a_idx+1
            level = a_idx + 1
            total += profile.p_init[a_idx] * (
                3.0 * (m - level - 1) + logs[a_idx] + pos_suffix[a_idx + 1]
            )
        out["par_improved"] = total
        if profile.n is not None:
            out["par_generic"] = 2.0 * m + profile.n * _log(profile.n, base)
    return out


def upper_bound_non_oblivious(profile: LevelProfile) -> dict:
    """Bounds when the size is pinned to ceil(1/s) of the current level."""
    par = 0.0
    for i in range(profile.m - 1):
        par += profile.p_init[i] * _NB * (profile.m - (i + 1))
    seq = 2.0 * _NB * _weighted_suffix_sum(profile, [1.0 / v for v in profile.s])
    return {"seq": seq, "par": par}


def upper_bound_mumax(profile: LevelProfile, mu_max: int, base: float = 2.0) -> float:
    """Parallel bound under a size cap: m(log_b mu_max + 2) + (2/mu_max) sum 1/s_i.

    The sum runs over every non-optimal level regardless of the starting
    distribution.
    """
    if mu_max < 1:
        raise ConfigurationError("mu_max must be at least 1")
    if not base > 1.0:
        raise ConfigurationError("base must exceed 1")
    inv = math.fsum(1.0 / v for v in profile.s)
    return profile.m * (_log(mu_max, base) + 2.0) + (2.0 / mu_max) * inv


def lower_bound_tight(profile: LevelProfile, chi: float = 1.0, c: float = 1.0) -> float:
    """(chi/c) * sum_i p_init(i) * sum_{j>=i} 1/s_j.

    chi in (0,1] and c >= 1 are the visit-probability and slack constants of
    a tight level partition; they are caller-supplied aggregates.
    """
    if not 0.0 < chi <= 1.0:
        raise ConfigurationError("chi must lie in (0,1]")
    if c < 1.0:
        raise ConfigurationError("c must be at least 1")
    return (chi / c) * _weighted_suffix_sum(profile, [1.0 / v for v in profile.s])


def migration_adjusted_profile(profile: LevelProfile, tau: int) -> LevelProfile:
    """Per-period profile when improvements only count every tau generations.

    A period of tau generations succeeds with s' = 1 - (1-s)^tau; bounds
    computed on the adjusted profile count periods, so callers multiply them
    by tau to get back to generations.
    """
    if tau < 1:
        raise ConfigurationError("tau must be at least 1")
    if tau == 1:
        return profile
    s = tuple(-math.expm1(tau * math.log1p(-v)) if v < 1.0 else 1.0 for v in profile.s)
    return LevelProfile(s=s, p_init=profile.p_init, canonic=profile.canonic, n=profile.n)


@dataclass(frozen=True)
class Lemma1Bounds:
    """Single-level doubling analysis: start at 2^k trials, double per round.

    T is the number of rounds until the first success of a probability-p
    event.  Thresholds may be fractional; tails are one-sided.
    """

    p: float
    k: int
    par_exp_lo: float
    par_exp_hi: float
    seq_exp_lo: float
    seq_exp_hi: float

    def upper_tail_threshold(self, alpha: int) -> float:
        return max(math.ceil(math.log2(1.0 / self.p)) - self.k, 0) + alpha + 1

    def upper_tail_bound(self, alpha: int) -> float:
        return math.exp(-(2.0 ** alpha))

    def lower_tail_threshold(self, alpha: int) -> float:
        return math.log2(1.0 / self.p) - self.k - alpha

    def lower_tail_bound(self, alpha: int) -> float:
        return 2.0 * 2.0 ** (-alpha)

    def peak_threshold(self, beta: float) -> float:
        return max(2.0 ** (self.k + 1), 4.0 / self.p) * beta

    def peak_bound(self, beta: float) -> float:
        return math.exp(-beta)


def lemma1_bounds(p: float, k: int = 0) -> Lemma1Bounds:
    """Expectation windows and tail bounds for the doubling race at (p, k)."""
    if not 0.0 < p <= 1.0:
        raise ConfigurationError("p must lie in (0,1]")
    if k < 0:
        raise ConfigurationError("k must be non-negative")
    log_term = math.log2(1.0 / p) - k
    return Lemma1Bounds(
        p=p,
        k=k,
        par_exp_lo=log_term - 3.0,
        par_exp_hi=max(log_term, 0.0) + 2.0,
        seq_exp_lo=max(1.0 / p, 2.0 ** k),
        seq_exp_hi=2.0 / p + 2.0 ** k - 1.0,
    )


@dataclass(frozen=True)
class BoundReport:
    """Every bound for one profile under one parameter set.

    ``values`` maps the stable bound names to numbers, with None for bounds
    the inputs cannot support (no parallel forms on non-canonic profiles, no
    profile-free form without n, no capped form without mu_max).  The
    profile-free parallel value omits an additive constant; the flag records
    that so consumers never mistake it for a complete number.
    """

    profile: LevelProfile
    b: float
    mu_max: int | None
    tau: int
    chi: float
    c: float
    values: dict = field(compare=False)
    par_B_generic_excludes_constant: bool = True

    def to_dict(self) -> dict:
        return {
            "bounds": {name: self.values[name] for name in BOUND_NAMES},
            "parameters": {
                "b": self.b,
                "mu_max": self.mu_max,
                "tau": self.tau,
                "chi": self.chi,
                "c": self.c,
            },
            "par_B_generic_excludes_constant": self.par_B_generic_excludes_constant,
        }


def compute_bound_report(profile: LevelProfile, b: float = 2.0, mu_max: int | None = None,
                         tau: int = 1, chi: float = 1.0, c: float = 1.0) -> BoundReport:
    """Assemble the full report: all upper bounds on the migration-adjusted
    profile scaled back to generations, the lower bound on the raw profile."""
    adjusted = migration_adjusted_profile(profile, tau)
    parallel = profile.canonic
    f = float(tau)
    a = upper_bound_scheme_a(adjusted, base=b, parallel=parallel)
    bb = upper_bound_scheme_b(adjusted, base=b, parallel=parallel)
    no = upper_bound_non_oblivious(adjusted)
    values = {
        "seq_A": f * a["seq"],
        "par_A": None if a["par"] is None else f * a["par"],
        "seq_B": f * bb["seq"],
        "par_B": None if bb["par"] is None else f * bb["par"],
        "par_B_improved": None if bb["par_improved"] is None else f * bb["par_improved"],
        "par_B_generic": None if bb["par_generic"] is None else f * bb["par_generic"],
        "seq_no": f * no["seq"],
        "par_no": f * no["par"],
        "par_A_mumax": None if mu_max is None else f * upper_bound_mumax(adjusted, mu_max, base=b),
        "seq_lower_tight": lower_bound_tight(profile, chi=chi, c=c),
    }
    for name, v in values.items():
        if v is not None and not math.isfinite(v):
            raise ConfigurationError(f"bound {name} is not finite")
    return BoundReport(profile=profile, b=b, mu_max=mu_max, tau=tau, chi=chi, c=c,
                       values=values)


def base_b_adjust(report: BoundReport, b: float) -> BoundReport:
    """The same report recomputed for growth base b (identity at the stored base)."""
    return compute_bound_report(report.profile, b=b, mu_max=report.mu_max,
                                tau=report.tau, chi=report.chi, c=report.c)
