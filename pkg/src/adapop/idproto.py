"""Decentralized processor-ID protocol realizing halve/double without a master.

Every active processor carries a bit-string ID; the initial lone processor
carries the empty string.  On a failed generation each processor appends a
0-bit and spawns a sibling that appends a 1-bit; on a success every processor
whose ID ends in 1 shuts down and the rest drop their last bit.  The active
set therefore always equals all bit strings of one common length, and the
population trajectory matches multiply/divide-by-two with floor exactly.

IDs of one step all share a length, so a cluster is stored compactly as that
length plus the numeric values of the active IDs (uint64, sorted).  All
operations return new snapshots; nothing mutates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEPTH = 63  # uint64 value per id; length-10^3 replays must cap growth below this


@dataclass(frozen=True)
class Cluster:
    """Active processor set at one synchronous step.

    ``depth`` is the common ID length, ``members`` the sorted numeric IDs,
    ``step`` how many outcomes have been applied since the root.
    """

    depth: int
    members: np.ndarray
    step: int = 0

    @property
    def size(self) -> int:
        return int(self.members.shape[0])

    @property
    def ids(self) -> list[str]:
        """Active IDs as bit strings; the root renders as the empty string."""
        return [format(int(m), f"0{self.depth}b") if self.depth else "" for m in self.members]

    def check_invariants(self) -> None:
        """Uniqueness and completeness of the active set; raises on violation."""
        m = self.members
        if m.ndim != 1 or m.dtype != np.uint64:
            raise AssertionError("members must be a flat uint64 array")
        if self.depth < 0 or self.depth > MAX_DEPTH:
            raise AssertionError(f"depth {self.depth} outside [0, {MAX_DEPTH}]")
        if m.shape[0] != 1 << self.depth:
            raise AssertionError(f"{m.shape[0]} active IDs at depth {self.depth}, expected {1 << self.depth}")
        if m.shape[0] == 0:
            raise AssertionError("cluster cannot be empty")
        if int(m[0]) != 0 or int(m[-1]) != (1 << self.depth) - 1:
            raise AssertionError("active IDs do not span the full depth range")
        if m.shape[0] > 1 and not (m[1:] > m[:-1]).all():
            raise AssertionError("active IDs are not strictly increasing (duplicate or disorder)")


def root() -> Cluster:
    """The initial cluster: one processor with the empty ID."""
    return Cluster(depth=0, members=np.zeros(1, dtype=np.uint64), step=0)


def expand(cluster: Cluster) -> Cluster:
    """Failure step: id x becomes the pair x0, x1; size doubles."""
    if cluster.depth >= MAX_DEPTH:
        raise OverflowError(f"cannot expand past depth {MAX_DEPTH}")
    # doubling a sorted array and setting 1 on the odd slots keeps it sorted
    doubled = np.repeat(cluster.members << np.uint64(1), 2)
    doubled[1::2] |= np.uint64(1)
    return Cluster(depth=cluster.depth + 1, members=doubled, step=cluster.step + 1)


def contract(cluster: Cluster) -> Cluster:
    """Success step: ids ending in 1 shut down, the rest drop the last bit.

    The singleton root has no 1-suffix processors to shut down, so a success
    there only advances the step counter.
    """
    if cluster.depth == 0:
        return Cluster(depth=0, members=cluster.members, step=cluster.step + 1)
    survivors = cluster.members[(cluster.members & np.uint64(1)) == 0] >> np.uint64(1)
    return Cluster(depth=cluster.depth - 1, members=survivors, step=cluster.step + 1)


def replay(outcomes, check: bool = False) -> list[int]:
    """Sizes along an outcome sequence, starting from the root.

    ``outcomes`` yields truthy for success (contract) and falsy for failure
    (expand); the returned list has one entry more than the sequence, the
    leading 1 for the root.  With ``check`` the invariants are verified after
    every step.
    """
    cluster = root()
    sizes = [cluster.size]
    for outcome in outcomes:
        cluster = contract(cluster) if outcome else expand(cluster)
        if check:
            cluster.check_invariants()
        sizes.append(cluster.size)
    return sizes


def trajectory_lines(outcomes) -> list[dict]:
    """JSON-ready dump of a replay: step, size, and ID length per state."""
    cluster = root()
    lines = [{"step": 0, "size": 1, "id_length": 0}]
    for outcome in outcomes:
        cluster = contract(cluster) if outcome else expand(cluster)
        lines.append({"step": cluster.step, "size": cluster.size, "id_length": cluster.depth})
    return lines
