"""Elitist parallel EA with adaptive population size, plus its (1+lambda) view.

The general path simulates mu islands, each an elitist (1+1)-EA with standard
bit mutation, over a complete migration topology: every tau-th generation the
best individual in the system is copied to every island and the population
size is updated from what the block achieved.  With tau = 1 the model
collapses to a (1+lambda)-EA whose offspring count is adapted every
generation; ``run_one_plus_lambda`` implements that special case directly,
and the two paths produce bit-identical records for the same seed, which the
test suite checks pairwise.

Time accounting: t_par counts generations and t_seq counts function
evaluations, both until the first optimum is evaluated, including every
evaluation of the final generation; the single initialization evaluation is
free.  Each executed generation is charged to the fitness level the system
best occupied when the generation started.

Randomness is counter-addressed (see rng): one Philox key per run, one
float64 block per generation in which row i belongs to island i, so a record
never depends on evaluation order and any island's draws can be recomputed
in isolation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bounds import LevelProfile, level_profile_preset
from .fitness import FitnessFunction
from .rng import generation_generator, init_generator, philox_key, derive_trial_seed
from .schemes import ConfigurationError, GenerationOutcome, UpdatePolicy

DEFAULT_MAX_EVALUATIONS = 10 ** 9


@dataclass(frozen=True)
class RunConfig:
    """One run: what to optimize, how to resize, and the safety rails.

    ``max_evaluations`` censors runs whose next generation would push the
    evaluation count past the cap; ``max_generations`` optionally censors on
    generations as well.  A censored record carries hit_cap=True and the
    counters accumulated so far.
    """

    function: FitnessFunction
    policy: UpdatePolicy
    seed: int
    tau: int = 1
    max_generations: int | None = None
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS
    collect_traces: bool = False

    def __post_init__(self):
        if self.tau < 1:
            raise ConfigurationError("tau must be at least 1")
        if self.max_generations is not None and self.max_generations < 1:
            raise ConfigurationError("max_generations must be positive when set")
        if self.max_evaluations < 1:
            raise ConfigurationError("max_evaluations must be positive")


@dataclass(frozen=True)
class IslandState:
    """Snapshot of one island: its elitist, that elitist's fitness, and the
    island index that addresses its mutation stream in the generation block."""

    current: np.ndarray
    fitness: int
    island: int


@dataclass(frozen=True)
class GenerationView:
    """Read-only view handed to observers once a generation has fully taken
    effect, including any migration broadcast and resize at its end.

    ``mu`` is the size the generation executed with, ``mu_next`` the size the
    next one would use; ``outcome`` is the block outcome consumed by the size
    update, present only on migration views.
    """

    t: int
    mu: int
    mu_next: int
    islands: tuple
    best_fitness: int
    migration: bool
    outcome: GenerationOutcome | None = None


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one run; all fields are plain values, safe to compare."""

    seed: int
    t_par: int
    t_seq: int
    mu_peak: int
    level_trace: tuple
    hit_cap: bool
    mu_trace: tuple | None = None
    outcomes: tuple | None = None


def _nonoblivious_profile(fn: FitnessFunction) -> LevelProfile:
    return level_profile_preset(fn.kind, fn.n, k=fn.k)


def _initial_individual(key, n: int):
    x = (init_generator(key).random(n) < 0.5).astype(np.uint8)
    return x


class _Accounting:
    """Mutable counters shared by both run paths."""

    def __init__(self, config: RunConfig, fn: FitnessFunction):
        self.config = config
        self.fn = fn
        self.t = 0
        self.t_seq = 0
        self.mu_peak = 1
        self.level_gens = [0] * fn.num_levels
        self.level_evals = [0] * fn.num_levels
        self.mu_trace = [] if config.collect_traces else None
        self.outcomes = [] if config.collect_traces else None
        self.hit_cap = False

    def capped(self, mu: int) -> bool:
        cfg = self.config
        if cfg.max_generations is not None and self.t >= cfg.max_generations:
            self.hit_cap = True
            return True
        if self.t_seq + mu > cfg.max_evaluations:
            self.hit_cap = True
            return True
        return False

    def charge(self, mu: int, best_fitness: int) -> None:
        self.t += 1
        self.t_seq += mu
        self.mu_peak = max(self.mu_peak, mu)
        idx = self.fn.level_of_fitness(best_fitness) - 1
        self.level_gens[idx] += 1
        self.level_evals[idx] += mu
        if self.mu_trace is not None:
            self.mu_trace.append(mu)

    def note_outcome(self, outcome: GenerationOutcome) -> None:
        if self.outcomes is not None:
            self.outcomes.append((outcome.improved, outcome.num_successes))

    def record(self, seed: int) -> RunRecord:
        return RunRecord(
            seed=seed,
            t_par=self.t,
            t_seq=self.t_seq,
            mu_peak=self.mu_peak,
            level_trace=tuple(zip(self.level_gens, self.level_evals)),
            hit_cap=self.hit_cap,
            mu_trace=None if self.mu_trace is None else tuple(self.mu_trace),
            outcomes=None if self.outcomes is None else tuple(self.outcomes),
        )


def run(config: RunConfig, on_generation=None) -> RunRecord:
    """Simulate the island engine and return its exact counters.

    ``on_generation`` is an optional callable receiving a GenerationView
    after every generation; it exists for invariant checks and costs nothing
    when absent.
    """
    fn = config.function
    policy = config.policy
    key = philox_key(config.seed)
    acct = _Accounting(config, fn)

    x = _initial_individual(key, fn.n)
    best = fn.evaluate(x)
    if best == fn.optimum_fitness:
        return acct.record(config.seed)

    profile = _nonoblivious_profile(fn) if policy.scheme == "nonoblivious" else None
    mu = policy.clamp(1)
    parents = np.tile(x, (mu, 1))
    parent_fit = np.full(mu, best, dtype=np.int64)
    flip_p = 1.0 / fn.n
    block_improved = False
    block_successes = 0

    while not acct.capped(mu):
        acct.charge(mu, best)
        t = acct.t
        flips = generation_generator(key, t).random((mu, fn.n)) < flip_p
        offspring = parents ^ flips
        off_fit = fn.evaluate_rows(offspring)

        block_successes += int((off_fit > best).sum())
        accept = off_fit >= parent_fit
        parents = np.where(accept[:, None], offspring, parents)
        parent_fit = np.where(accept, off_fit, parent_fit)
        new_best = int(parent_fit.max())
        if new_best > best:
            block_improved = True
            best = new_best

        done = best == fn.optimum_fitness
        migration = t % config.tau == 0 and not done
        outcome = None
        mu_used = mu
        if migration:
            # complete topology: broadcast the best individual, preferring the
            # fittest offspring of this generation so the tau=1 path matches
            # the (1+lambda)-EA's selection bit for bit
            bo = int(off_fit.argmax())
            if int(off_fit[bo]) >= best:
                winner = offspring[bo]
            else:
                winner = parents[int(parent_fit.argmax())]
            outcome = GenerationOutcome(block_improved, block_successes)
            next_s = None
            if profile is not None:
                next_s = profile.s[fn.level_of_fitness(best) - 1]
            mu = policy.update_size(mu, outcome, next_s)
            acct.note_outcome(outcome)
            parents = np.tile(winner, (mu, 1))
            parent_fit = np.full(mu, best, dtype=np.int64)
            block_improved = False
            block_successes = 0

        if on_generation is not None:
            islands = tuple(
                IslandState(current=parents[i].copy(), fitness=int(parent_fit[i]), island=i)
                for i in range(parents.shape[0])
            )
            on_generation(GenerationView(
                t=t, mu=mu_used, mu_next=mu, islands=islands,
                best_fitness=best, migration=migration, outcome=outcome,
            ))
        if done:
            return acct.record(config.seed)

    return acct.record(config.seed)


def run_one_plus_lambda(config: RunConfig) -> RunRecord:
    """The tau=1 special case as a literal (1+lambda)-EA loop."""
    if config.tau != 1:
        raise ConfigurationError("the (1+lambda) path is the tau=1 special case")
    fn = config.function
    policy = config.policy
    key = philox_key(config.seed)
    acct = _Accounting(config, fn)

    x = _initial_individual(key, fn.n)
    fx = fn.evaluate(x)
    if fx == fn.optimum_fitness:
        return acct.record(config.seed)

    profile = _nonoblivious_profile(fn) if policy.scheme == "nonoblivious" else None
    mu = policy.clamp(1)
    flip_p = 1.0 / fn.n

    while not acct.capped(mu):
        acct.charge(mu, fx)
        flips = generation_generator(key, acct.t).random((mu, fn.n)) < flip_p
        offspring = x[None, :] ^ flips
        off_fit = fn.evaluate_rows(offspring)

        num_successes = int((off_fit > fx).sum())
        bo = int(off_fit.argmax())
        if int(off_fit[bo]) >= fx:
            x = offspring[bo]
            fx = int(off_fit[bo])
        if fx == fn.optimum_fitness:
            return acct.record(config.seed)

        outcome = GenerationOutcome(num_successes > 0, num_successes)
        next_s = None
        if profile is not None:
            next_s = profile.s[fn.level_of_fitness(fx) - 1]
        mu = policy.update_size(mu, outcome, next_s)
        acct.note_outcome(outcome)

    return acct.record(config.seed)


def run_batch(config: RunConfig, trials: int, threads: int = 1) -> list:
    """Independent runs under per-trial seeds derived from config.seed.

    Trial i runs with the i-th derived seed, so any prefix of a longer batch
    equals the shorter batch.  tau=1 configurations take the (1+lambda) path;
    results are returned in trial order regardless of thread count.
    """
    if trials < 1:
        raise ConfigurationError("trials must be positive")
    if threads < 1:
        raise ConfigurationError("threads must be positive")
    runner = run_one_plus_lambda if config.tau == 1 else run
    configs = [replace(config, seed=derive_trial_seed(config.seed, i)) for i in range(trials)]
    if threads == 1:
        return [runner(c) for c in configs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(runner, configs))
