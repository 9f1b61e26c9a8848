import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adapop.schemes import (FAILURE, ConfigurationError, GenerationOutcome,
                            SCHEMES, UpdatePolicy, success)


class TestFrozenTransitions:
    def test_scheme_a(self):
        p = UpdatePolicy("a")
        assert p.update_size(4, FAILURE) == 8
        assert p.update_size(64, success()) == 1

    def test_scheme_b(self):
        p = UpdatePolicy("b")
        assert p.update_size(4, FAILURE) == 8
        assert p.update_size(4, success()) == 2
        assert p.update_size(1, success()) == 1
        assert p.update_size(3, success()) == 1   # floor(3/2)

    def test_jdw_divides_by_success_count(self):
        p = UpdatePolicy("jdw")
        assert p.update_size(8, success(4)) == 2
        assert p.update_size(8, success(1)) == 8
        assert p.update_size(8, success(3)) == 2  # floor(8/3)
        assert p.update_size(8, success(100)) == 1
        assert p.update_size(8, FAILURE) == 16

    def test_additive(self):
        p = UpdatePolicy("additive")
        assert p.update_size(7, FAILURE) == 8
        assert p.update_size(7, success()) == 1

    def test_constant(self):
        p = UpdatePolicy("constant")
        assert p.update_size(5, FAILURE) == 5
        assert p.update_size(5, success(3)) == 5

    def test_non_oblivious_tracks_target_level(self):
        p = UpdatePolicy("nonoblivious")
        s = 1 / (10 * math.e)
        assert p.initial_size(s) == 28
        assert p.update_size(28, FAILURE, next_level_success_probability=s) == 28
        assert p.update_size(28, success(), next_level_success_probability=0.5) == 2

    def test_non_oblivious_requires_probability(self):
        p = UpdatePolicy("nonoblivious")
        with pytest.raises(ConfigurationError):
            p.update_size(4, FAILURE)
        with pytest.raises(ConfigurationError):
            p.initial_size()

    def test_oblivious_initial_size_is_min(self):
        for scheme in ("a", "b", "jdw", "additive", "constant"):
            assert UpdatePolicy(scheme).initial_size() == 1
            assert UpdatePolicy(scheme, mu_min=4).initial_size() == 4


class TestGrowth:
    def test_doubling_base(self):
        p = UpdatePolicy("a", base=2.0)
        for mu, want in [(1, 2), (2, 4), (3, 6), (5, 10)]:
            assert p.update_size(mu, FAILURE) == want

    def test_fractional_base_rounds_half_up(self):
        p = UpdatePolicy("a", base=1.5)
        assert p.update_size(2, FAILURE) == 3
        assert p.update_size(3, FAILURE) == 5   # round(4.5) up
        assert p.update_size(1, FAILURE) == 2   # max(mu+1, round(1.5)=2)

    def test_growth_always_strict(self):
        # even a base barely above 1 must move the size up by at least one
        p = UpdatePolicy("a", base=1.01)
        for mu in range(1, 50):
            assert p.update_size(mu, FAILURE) >= mu + 1


class TestClamping:
    def test_bounds_respected(self):
        p = UpdatePolicy("a", mu_min=2, mu_max=16)
        assert p.update_size(16, FAILURE) == 16
        assert p.update_size(9, FAILURE) == 16
        assert p.update_size(13, success()) == 2
        assert p.clamp(1) == 2
        assert p.clamp(100) == 16

    def test_b_respects_mu_min(self):
        p = UpdatePolicy("b", mu_min=3)
        assert p.update_size(4, success()) == 3

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            UpdatePolicy("nope")
        with pytest.raises(ConfigurationError):
            UpdatePolicy("a", base=1.0)
        with pytest.raises(ConfigurationError):
            UpdatePolicy("a", mu_min=0)
        with pytest.raises(ConfigurationError):
            UpdatePolicy("a", mu_min=5, mu_max=4)


class TestOutcomeValidation:
    def test_improved_needs_successes(self):
        with pytest.raises(ValueError):
            GenerationOutcome(improved=True, num_successes=0)
        with pytest.raises(ValueError):
            GenerationOutcome(improved=False, num_successes=2)
        with pytest.raises(ValueError):
            GenerationOutcome(improved=False, num_successes=-1)
        assert success(3).num_successes == 3
        assert not FAILURE.improved


def _reachable_sizes(policy, depth):
    seen = {policy.initial_size(0.5)}
    frontier = set(seen)
    for _ in range(depth):
        nxt = set()
        for mu in frontier:
            for outcome in (FAILURE, success(), success(2)):
                nxt.add(policy.update_size(mu, outcome,
                                           next_level_success_probability=0.5))
        frontier = nxt - seen
        seen |= nxt
        if not frontier:
            break
    return seen


@pytest.mark.parametrize("scheme", ["a", "b"])
def test_doubling_schemes_stay_on_powers_of_two(scheme):
    sizes = _reachable_sizes(UpdatePolicy(scheme), depth=20)
    for mu in sizes:
        assert mu & (mu - 1) == 0, mu


def test_all_schemes_reachable_sizes_positive():
    for scheme in SCHEMES:
        for mu in _reachable_sizes(UpdatePolicy(scheme), depth=12):
            assert mu >= 1


@given(mu=st.integers(min_value=1, max_value=10**6),
       base=st.floats(min_value=1.01, max_value=8.0, allow_nan=False))
def test_failure_grows_success_shrinks(mu, base):
    p = UpdatePolicy("b", base=base)
    assert p.update_size(mu, FAILURE) > mu
    assert p.update_size(mu, success()) <= mu


@given(mu=st.integers(min_value=1, max_value=10**6),
       k=st.integers(min_value=1, max_value=10**3))
def test_jdw_never_exceeds_current_on_success(mu, k):
    got = UpdatePolicy("jdw").update_size(mu, success(k))
    assert 1 <= got <= mu
    assert got == max(1, mu // k)


@settings(max_examples=200)
@given(st.lists(st.booleans(), max_size=20))
def test_a_and_b_agree_on_sizes_after_reset(outcomes):
    # scheme a jumps straight to mu_min; b gets there after enough halvings,
    # but both walk identical power-of-two ladders on pure failure streaks
    pa, pb = UpdatePolicy("a"), UpdatePolicy("b")
    mu_a = mu_b = 1
    for improved in outcomes:
        out = success() if improved else FAILURE
        mu_a = pa.update_size(mu_a, out)
        mu_b = pb.update_size(mu_b, out)
        assert mu_a & (mu_a - 1) == 0
        assert mu_b & (mu_b - 1) == 0
        assert mu_a <= mu_b
