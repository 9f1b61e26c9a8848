"""Independent reference computations used to pin expected values in tests.

Everything here is deliberately written in plain Python (math module only,
no numpy, no imports from the package under test) so that agreement between
these numbers and the library is meaningful.  The doubling-process
expectations are exact series evaluated to a fixed truncation tail; the
fitness references are brute-force bit-string loops.
"""

from __future__ import annotations

import math

TAIL = 1e-12


def doubling_survival(p: float, k: int, t: int) -> float:
    """P(the doubling process is still running after generation t).

    Generation i runs 2**(k+i-1) independent trials, each succeeding with
    probability p, so the total number of trials through generation t is
    2**k * (2**t - 1) and survival is (1-p) to that power.
    """
    if t <= 0:
        return 1.0
    trials = 2 ** k * (2 ** t - 1)
    if p >= 1.0:
        return 0.0
    return (1.0 - p) ** trials


def exact_parallel_expectation(p: float, k: int) -> float:
    """E[generations until first success] as an exact series, tail < TAIL."""
    total = 0.0
    t = 0
    while True:
        term = doubling_survival(p, k, t)
        total += term
        t += 1
        if term < TAIL and t > 1:
            break
    return total


def exact_sequential_expectation(p: float, k: int) -> float:
    """E[trials consumed up to and including the success generation].

    The process stops in generation T; every trial of that generation counts.
    Summation by parts over the generation sizes: each generation j
    contributes its full size 2**(k+j-1) whenever T >= j, i.e. with
    probability P(T > j-1).
    """
    total = 0.0
    j = 1
    while True:
        surv = doubling_survival(p, k, j - 1)
        term = 2 ** (k + j - 1) * surv
        total += term
        j += 1
        if surv < TAIL and j > 2:
            break
    return total


def onemax_ref(bits: list[int]) -> int:
    return sum(bits)


def leadingones_ref(bits: list[int]) -> int:
    count = 0
    for b in bits:
        if b != 1:
            break
        count += 1
    return count


def jump_ref(bits: list[int], k: int) -> int:
    n = len(bits)
    ones = sum(bits)
    if ones <= n - k or ones == n:
        return k + ones
    return n - ones


def ridge_ref(bits: list[int]) -> int:
    n = len(bits)
    ones = sum(bits)
    if bits == [1] * ones + [0] * (n - ones):
        return n + ones
    return n - ones


def attainable_values(kind: str, n: int, k: int | None = None) -> list[int]:
    """Every fitness value some n-bit string achieves, by exhaustion (n small)."""
    seen = set()
    for x in range(2 ** n):
        bits = [(x >> (n - 1 - i)) & 1 for i in range(n)]
        if kind == "onemax":
            seen.add(onemax_ref(bits))
        elif kind == "leadingones":
            seen.add(leadingones_ref(bits))
        elif kind == "jump":
            seen.add(jump_ref(bits, k))
        elif kind == "ridge":
            seen.add(ridge_ref(bits))
        else:
            raise ValueError(kind)
    return sorted(seen)


# ---------------------------------------------------------------------------
# Reference bound values for preset level profiles, computed longhand.
# ---------------------------------------------------------------------------

def lo_seq_a(n: int) -> float:
    # doubling-on-failure / reset-on-success, LeadingOnes profile:
    # 2 * sum over levels i=1..n of sum_{j>=i} e*n, pessimistic start at level 1
    return 2.0 * sum(math.e * n for _ in range(n))


def lo_par_a(n: int) -> float:
    return 2.0 * sum(math.log2(2.0 * math.e * n) for _ in range(n))


def lo_seq_b(n: int) -> float:
    return 3.0 * sum(math.e * n for _ in range(n))


def lo_par_b(n: int) -> float:
    return 4.0 * sum(math.log2(2.0 * math.e * n) for _ in range(n))


def onemax_seq_a(n: int) -> float:
    # levels i = 0..n-1 with s_i = (n-i)/(e n); start pinned to level 1 (i=0)
    return 2.0 * sum(math.e * n / (n - i) for i in range(n))


def onemax_par_a(n: int) -> float:
    return 2.0 * sum(math.log2(2.0 * math.e * n / (n - i)) for i in range(n))
