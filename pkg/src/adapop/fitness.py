"""Pseudo-Boolean benchmark functions on bit strings, with canonical levels.

Genotypes are 1-D numpy arrays of 0/1 (dtype uint8).  Four function kinds are
provided, all maximized, all with the unique optimum 1^n:

``onemax``
    Number of one-bits.
``leadingones``
    Length of the maximal all-ones prefix.
``jump`` (parameter k, 1 <= k <= n)
    k + |x| if |x| <= n-k or x = 1^n, else n - |x|; a slope up to a plateau
    rim, a deceptive gap of width k-1, and the isolated optimum.
``ridge``
    n + i for x = 1^i 0^(n-i), else n - |x|; off the ridge the function
    rewards removing ones, on the ridge it rewards extending the prefix.

Every kind also exposes its canonical fitness-level partition: one level per
attainable fitness value, numbered 1..m in increasing fitness, with level m
exactly the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import MutationRng

KINDS = ("onemax", "leadingones", "jump", "ridge")


def attainable_fitness_values(kind: str, n: int, k: int | None = None) -> tuple[int, ...]:
    """Sorted tuple of every fitness value some length-n genotype achieves.

    Parameters
    ----------
    kind : str
        One of ``onemax``, ``leadingones``, ``jump``, ``ridge``.
    n : int
        Genotype length, n >= 1.
    k : int, optional
        Jump parameter; required iff kind is ``jump``.

    Returns
    -------
    tuple of int
        Strictly increasing fitness values; its length is the number of
        canonical levels m.
    """
    if kind in ("onemax", "leadingones"):
        return tuple(range(n + 1))
    if kind == "jump":
        vals = {k + c for c in range(0, n - k + 1)}
        vals |= {n - c for c in range(n - k + 1, n)}
        vals.add(n + k)
        return tuple(sorted(vals))
    if kind == "ridge":
        vals = {n - c for c in range(1, n)}
        vals |= {n + i for i in range(0, n + 1)}
        return tuple(sorted(vals))
    raise ValueError(f"unknown function kind {kind!r}")


@dataclass(frozen=True)
class FitnessFunction:
    """A benchmark function instance together with its level partition."""

    kind: str
    n: int
    k: int | None = None
    _values: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _level_of: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == "jump":
            if self.k is None:
                raise ValueError("jump requires the gap parameter k")
            if not 1 <= self.k <= self.n:
                raise ValueError(f"jump requires 1 <= k <= n, got k={self.k}, n={self.n}")
        elif self.k is not None:
            raise ValueError(f"k is only meaningful for jump, not {self.kind}")
        values = attainable_fitness_values(self.kind, self.n, self.k)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_level_of", {v: i + 1 for i, v in enumerate(values)})

    @property
    def num_levels(self) -> int:
        """Number of canonical levels m (one per attainable fitness value)."""
        return len(self._values)

    @property
    def values(self) -> tuple[int, ...]:
        return self._values

    @property
    def optimum_fitness(self) -> int:
        return self._values[-1]

    def evaluate(self, x) -> int:
        x = _as_bits(x, self.n)
        return int(evaluate_rows(self.kind, self.k, x[None, :])[0])

    def evaluate_rows(self, rows: np.ndarray) -> np.ndarray:
        """Fitness of each row of a (mu, n) 0/1 matrix, as int64."""
        if rows.ndim != 2 or rows.shape[1] != self.n:
            raise ValueError(f"expected shape (mu, {self.n}), got {rows.shape}")
        return evaluate_rows(self.kind, self.k, rows)

    def is_optimum(self, x) -> bool:
        return self.evaluate(x) == self._values[-1]

    def level_index(self, x) -> int:
        """Canonical level of x: 1..m, strictly monotone in fitness."""
        return self._level_of[self.evaluate(x)]

    def level_of_fitness(self, fitness: int) -> int:
        return self._level_of[fitness]


def onemax(n: int) -> FitnessFunction:
    return FitnessFunction("onemax", n)


def leadingones(n: int) -> FitnessFunction:
    return FitnessFunction("leadingones", n)


def jump(n: int, k: int) -> FitnessFunction:
    return FitnessFunction("jump", n, k)


def ridge(n: int) -> FitnessFunction:
    return FitnessFunction("ridge", n)


def _as_bits(x, n: int) -> np.ndarray:
    bits = np.asarray(x, dtype=np.uint8)
    if bits.ndim != 1 or bits.shape[0] != n:
        raise ValueError(f"genotype must be a flat length-{n} bit sequence, got shape {bits.shape}")
    if bits.max(initial=0) > 1:
        raise ValueError("genotype entries must be 0 or 1")
    return bits


def _leading_ones_rows(rows: np.ndarray) -> np.ndarray:
    # argmin finds the first zero; all-ones rows need the n fallback
    first_zero = np.argmin(rows, axis=1)
    all_ones = rows.min(axis=1) == 1
    return np.where(all_ones, rows.shape[1], first_zero).astype(np.int64)


def evaluate_rows(kind: str, k: int | None, rows: np.ndarray) -> np.ndarray:
    """Vectorized fitness of each row of a 0/1 matrix."""
    n = rows.shape[1]
    if kind == "onemax":
        return rows.sum(axis=1, dtype=np.int64)
    if kind == "leadingones":
        return _leading_ones_rows(rows)
    if kind == "jump":
        ones = rows.sum(axis=1, dtype=np.int64)
        return np.where((ones <= n - k) | (ones == n), k + ones, n - ones)
    if kind == "ridge":
        ones = rows.sum(axis=1, dtype=np.int64)
        on_ridge = _leading_ones_rows(rows) == ones
        return np.where(on_ridge, n + ones, n - ones)
    raise ValueError(f"unknown function kind {kind!r}")


def standard_mutation(x, rng: MutationRng) -> np.ndarray:
    """Flip each bit independently with probability 1/n; returns a new array.

    The parent is never modified.  One call consumes exactly one draw of the
    stream, so repeated calls at the same (seed, stream_id, draw index) are
    reproducible bit for bit.
    """
    bits = np.asarray(x, dtype=np.uint8)
    n = bits.shape[-1]
    flips = rng.uniform(n) < 1.0 / n
    return bits ^ flips


def random_genotype(n: int, rng: MutationRng) -> np.ndarray:
    """Uniformly random length-n bit string from the given stream."""
    return (rng.uniform(n) < 0.5).astype(np.uint8)
