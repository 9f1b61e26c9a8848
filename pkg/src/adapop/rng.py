"""Counter-based random streams shared by the whole package.

All randomness derives from numpy's Philox generator, which is keyed rather
than stateful: a 128-bit key (derived from the user seed) plus a 256-bit
counter select a position in a fixed random field.  We partition the counter
words so that every consumer owns a disjoint region:

    counter = [c0, c1, c2, c3]   (c0 is incremented first as values are drawn)

    c3 = namespace           c2 = stream / generation index
    c1 = draw index          c0 = advances freely within one draw

Because a value depends only on (key, counter), any draw can be recomputed
in isolation: island j of generation t, the 5th draw of stream 2, and so on.
That is what makes serial, vectorized, and island-parallel execution produce
identical numbers, and runs reproducible across platforms.

Draws use float64, one 64-bit word per value, so a (mu, n) block laid out in
row-major order puts island j's n values at word offset j*n.  Philox advances
in whole 128-bit counter ticks (4 words), so `island_flip_block` seeks to the
enclosing tick and discards the remainder.
"""

from __future__ import annotations

import numpy as np

NS_STREAM = 1
NS_INIT = 2
NS_GEN = 3
NS_TAIL = 4

_MAX_SEED = 2 ** 64


def philox_key(seed: int) -> np.ndarray:
    """Derive the 128-bit Philox key for a run seed."""
    if not 0 <= seed < _MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.SeedSequence(seed).generate_state(2, np.uint64)


def derive_trial_seed(master_seed: int, index: int) -> int:
    """Deterministic per-trial seed for batch runs (index >= 0)."""
    if index < 0:
        raise ValueError("trial index must be non-negative")
    if not 0 <= master_seed < _MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {master_seed}")
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _generator(key: np.ndarray, counter: list[int]) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def tail_generator(seed: int) -> np.random.Generator:
    """Stream for the standalone doubling-race sampler (namespace 4)."""
    return _generator(philox_key(seed), [0, 0, 0, NS_TAIL])


def init_generator(key: np.ndarray) -> np.random.Generator:
    """Stream that produces the initial genotype of a run."""
    return _generator(key, [0, 0, 0, NS_INIT])


def generation_generator(key: np.ndarray, t: int) -> np.random.Generator:
    """Stream backing the mutation block of generation t (t >= 0).

    Row j of a row-major block drawn from this stream belongs to island j.
    """
    return _generator(key, [0, 0, t, NS_GEN])


def island_flip_block(seed: int, t: int, island: int, n: int) -> np.ndarray:
    """Island j's generation-t flip mask, recomputed standalone.

    Equals row `island` of ``generation_generator(key, t).random((mu, n)) <
    1/n`` for any mu > island; exposed so per-island draws can be audited
    without running the engine.
    """
    key = philox_key(seed)
    offset = island * n
    bg = np.random.Philox(counter=[offset // 4, 0, t, NS_GEN], key=key)
    gen = np.random.Generator(bg)
    rem = offset % 4
    if rem:
        gen.bytes(8 * rem)  # discard to mid-tick position
    return gen.random(n) < 1.0 / n


class MutationRng:
    """A per-island random stream addressed by (seed, stream_id, draw index).

    Each call to :meth:`uniform` is one draw; identical coordinates yield
    identical values on every platform.  Instances are cheap and not shared
    between islands.
    """

    def __init__(self, seed: int, stream_id: int, draw_index: int = 0):
        if stream_id < 0:
            raise ValueError("stream_id must be non-negative")
        self.seed = seed
        self.stream_id = stream_id
        self.draw_index = draw_index
        self._key = philox_key(seed)

    def uniform(self, shape) -> np.ndarray:
        """Uniform [0,1) float64 values; advances the draw index by one."""
        gen = _generator(self._key, [0, self.draw_index, self.stream_id, NS_STREAM])
        self.draw_index += 1
        return gen.random(shape)

    def __repr__(self) -> str:
        return (f"MutationRng(seed={self.seed}, stream_id={self.stream_id}, "
                f"draw_index={self.draw_index})")
