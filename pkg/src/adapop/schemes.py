"""Population-size update policies for elitist parallel EAs.

A policy maps (current size, what the last generation achieved) to the next
size.  All of them clamp into [mu_min, mu_max] after the raw update, and all
generalize from doubling/halving to an arbitrary growth base b > 1:

``a``
    Multiply by b on failure, reset to mu_min on success.
``b``
    Multiply by b on failure, divide by b (floor) on success.
``jdw``
    Multiply by b on failure; on success divide by the number of successful
    offspring (floor, clamped below at mu_min).
``additive``
    Add 1 on failure, reset to mu_min on success.
``nonoblivious``
    Size ceil(1/s) for the success probability s of the level the run is in
    after the update; requires the caller to supply that probability.
``constant``
    Never changes.

Growing multiplies by b and rounds half up, but always adds at least 1 so a
base close to 1 cannot stall at small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SCHEMES = ("a", "b", "jdw", "additive", "nonoblivious", "constant")


class ConfigurationError(ValueError):
    """Raised for scheme parameters outside their documented domain."""


@dataclass(frozen=True)
class UpdatePolicy:
    """A named update rule plus its numeric parameters."""

    scheme: str
    base: float = 2.0
    mu_min: int = 1
    mu_max: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if not self.base > 1.0:
            raise ConfigurationError(f"base must exceed 1, got {self.base}")
        if self.mu_min < 1:
            raise ConfigurationError("mu_min must be at least 1")
        if self.mu_max is not None and self.mu_max < self.mu_min:
            raise ConfigurationError("mu_max must be >= mu_min")

    def initial_size(self, level_success_probability: float | None = None) -> int:
        if self.scheme == "nonoblivious":
            if level_success_probability is None:
                raise ConfigurationError("nonoblivious sizing needs the level success probability")
            return self.clamp(math.ceil(1.0 / level_success_probability))
        return self.clamp(self.mu_min)

    def update_size(
        self,
        mu: int,
        outcome: "GenerationOutcome",
        next_level_success_probability: float | None = None,
    ) -> int:
        """Size for the next generation.

        ``next_level_success_probability`` is the success probability of the
        level occupied after the outcome took effect; only the nonoblivious
        scheme reads it.
        """
        if mu < 1:
            raise ConfigurationError("mu must be positive")
        s = self.scheme
        if s == "constant":
            return self.clamp(mu)
        if s == "nonoblivious":
            if next_level_success_probability is None:
                raise ConfigurationError("nonoblivious sizing needs the level success probability")
            return self.clamp(math.ceil(1.0 / next_level_success_probability))
        if outcome.improved:
            if s == "a":
                nxt = self.mu_min
            elif s == "b":
                nxt = max(self.mu_min, math.floor(mu / self.base))
            elif s == "jdw":
                nxt = max(self.mu_min, math.floor(mu / outcome.num_successes))
            else:  # additive
                nxt = self.mu_min
        else:
            nxt = mu + 1 if s == "additive" else self._grow(mu)
        return self.clamp(nxt)

    def _grow(self, mu: int) -> int:
        return max(mu + 1, _round_half_up(self.base * mu))

    def clamp(self, mu: int) -> int:
        """Clamp a raw size into [mu_min, mu_max]."""
        mu = max(self.mu_min, mu)
        if self.mu_max is not None:
            mu = min(self.mu_max, mu)
        return mu


@dataclass(frozen=True)
class GenerationOutcome:
    """What one generation produced: did any offspring beat the best-so-far,
    and how many did."""

    improved: bool
    num_successes: int = 0

    def __post_init__(self):
        if self.num_successes < 0:
            raise ConfigurationError("num_successes cannot be negative")
        if self.improved != (self.num_successes >= 1):
            raise ConfigurationError(
                "improved must hold exactly when num_successes >= 1, "
                f"got improved={self.improved}, num_successes={self.num_successes}"
            )


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


FAILURE = GenerationOutcome(improved=False, num_successes=0)


def success(num_successes: int = 1) -> GenerationOutcome:
    return GenerationOutcome(improved=True, num_successes=num_successes)
