from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dlbounds.ballmath import (
    SizeBounds,
    b11_size,
    b11_size_exact,
    b11_size_lower,
    ball_bounds,
    binom,
    bst_bounds,
    damerau_ball_lower,
    insertion_ball_size,
    power_factor,
    simultaneous_trans_lower,
    substitution_ball_size,
)
from dlbounds.errorballs import ChannelSpec, del_trans_ball, enumerate_ball
from dlbounds.errors import PreconditionError
from dlbounds.seqcore import GapRule, run_stats

import oracles
from conftest import words


def test_binomial_conventions():
    assert binom(-3, 0) == 1
    assert binom(2, 3) == 0
    assert binom(-1, 2) == 0
    assert binom(5, 2) == 10
    assert power_factor(0, 0, 0) == 1
    assert power_factor(3, 2, 2) == Fraction(9, 4)


def test_b11_closed_form_on_example():
    st_ = run_stats((0, 2, 0, 1, 0, 0, 1))
    assert b11_size_exact(st_) == b11_size(st_) == 23


def test_b11_closed_form_is_exact_for_binary():
    assert oracles.b11_mismatches(((2, 12),)) == []


def test_b11_closed_form_overcounts_wide_rotations():
    """For q = 3 the closed form misses one overlap per run window a b c a with c != a."""
    bad = oracles.b11_mismatches(((3, 9),))
    assert bad
    for q, x, got, size in bad:
        st_ = run_stats(x)
        assert got - size == st_.r3_rot > 0
    assert sum(1 for x in words(4, 3) if run_stats(x).r3_rot) == len([b for b in bad if len(b[1]) == 4])


@pytest.mark.parametrize("q,n_max", [(3, 8), (4, 6)])
def test_b11_corrected_size_matches_enumeration(q, n_max):
    for n in range(2, n_max + 1):
        for x in words(n, q):
            st_ = run_stats(x)
            size = del_trans_ball(x, 1, 1, q=q).size
            assert b11_size(st_) == size
            assert size <= st_.r**2
            if st_.r >= 3:
                assert st_.r * (st_.r - 5) + 9 <= size
            if b11_size_lower(st_) > size:
                # only the branch without interior singletons between equal symbols
                assert st_.r1_prime == 0 and st_.r3_rot > 0


def test_b11_lower_bound_regimes():
    for n in range(2, 11):
        for x in words(n, 2):
            st_ = run_stats(x)
            size = b11_size(st_)
            assert b11_size_lower(st_) <= size
            if st_.r >= 3:
                assert size >= st_.r * (st_.r - 5) + 9


def test_b11_piecewise_lower_fails_for_ternary():
    st_ = run_stats((0, 1, 2, 0))
    assert b11_size_lower(st_) == 12
    assert del_trans_ball((0, 1, 2, 0), 1, 1, q=3).size == 11


def test_simultaneous_bound_fails_under_strict_gap_rule():
    x = (0, 1, 0, 1, 0, 1)
    assert simultaneous_trans_lower(6, 2) == 4
    assert oracles.transposition_ball_simultaneous(x, 2).size == 3
    assert oracles.transposition_ball_simultaneous(x, 2, GapRule.DISJOINT).size == 6
    bad = oracles.simultaneous_violations(ts=(2,), sizes=((2, 8),))
    assert (2, x, 2, 3, (4, 3, Fraction(25, 16))) in bad


def test_simultaneous_bound_holds_for_non_overlapping_pairs():
    assert oracles.simultaneous_violations(GapRule.DISJOINT) == []


def test_simultaneous_bound_hypothesis():
    with pytest.raises(PreconditionError):
        simultaneous_trans_lower(4, 2)


def test_deletion_ball_sandwich():
    assert oracles.deletion_violations() == []


def test_one_deletion_t_transposition_sandwich():
    assert oracles.b1t_violations() == []


def test_s_deletion_t_transposition_sandwich():
    assert oracles.bst_violations() == []


@pytest.mark.slow
def test_damerau_lower_bound_sandwich():
    bad, checked = oracles.damerau_violations()
    assert checked > 0
    assert bad == []


def test_asymmetric_lower_bound_sandwich():
    bad, checked = oracles.asymmetric_violations()
    assert checked > 0
    assert bad == []


def test_bst_structured_lower_needs_enough_runs():
    assert bst_bounds(5, 1, 1).lower is None
    assert bst_bounds(6, 1, 1).lower is not None
    assert bst_bounds(6, 2, 1).lower_weak is None


def test_damerau_preconditions():
    with pytest.raises(PreconditionError):
        damerau_ball_lower(12, 10, 2, 1, 0, 0, 0)
    with pytest.raises(PreconditionError):
        damerau_ball_lower(10, 10, 2, 0, 1, 0, 0)
    assert damerau_ball_lower(12, 12, 2, 0, 0, 0, 0) == 1


@given(st.integers(0, 30), st.integers(2, 5), st.integers(0, 3))
def test_insertion_and_substitution_sizes_are_monotone(n, q, k):
    assert insertion_ball_size(n, q, k) <= insertion_ball_size(n, q, k + 1)
    assert substitution_ball_size(n, q, k) <= q**n or k > n


@pytest.mark.parametrize(
    "channel",
    [
        ChannelSpec.del_trans(1, 1),
        ChannelSpec.del_trans(1, 0),
        ChannelSpec.del_trans(0, 2),
        ChannelSpec.del_trans(1, 2),
        ChannelSpec.del_trans(2, 1),
        ChannelSpec.asymmetric(1, 1, 0),
        ChannelSpec.damerau(0, 0, 0, 1),
        ChannelSpec.damerau(0, 1, 0, 0),
    ],
)
def test_ball_bounds_bracket_enumeration(channel):
    for n in (7, 8):
        for x in words(n, 2):
            b = ball_bounds(x, channel, 2)
            assert isinstance(b, SizeBounds)
            assert b.brackets(enumerate_ball(x, channel, 2).size)
