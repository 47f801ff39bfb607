import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dlbounds.codebounds import (
    BoundParams,
    CheckMode,
    WeightKind,
    block_bound,
    block_hypothesis,
    bound_1d1t,
    bound_1dtt,
    bound_sdtt,
    certificate_bound,
    certificate_bound_bruteforce,
    certificate_check,
    count_sequences_with_runs,
    covering_sum,
    falling_product,
    implied_constant,
    lambda_1d1t,
    lambda_condition,
    main_coefficient_1d1t,
    main_coefficient_1dtt,
    main_coefficient_sdtt,
    make_weight_scheme,
    redundancy_lower,
    theorem_bound,
    threshold_n,
)
from dlbounds.errorballs import ChannelSpec, ball_members
from dlbounds.errors import PreconditionError
from dlbounds.seqcore import run_count

from conftest import words

SCHEMES = {
    "1d1t": make_weight_scheme("1d1t"),
    "1dtt": make_weight_scheme("1dtt", t=1),
    "sdtt": make_weight_scheme("sdtt", s=1, t=1),
    "extended": make_weight_scheme("extended", s_d=1),
    "asym0": make_weight_scheme("asymmetric", s=1),
    "asym1": make_weight_scheme("asymmetric", s=1, t_plus=1, t_minus=1),
}


@given(st.integers(0, 14), st.integers(2, 5))
def test_run_census_partitions_all_words(m, q):
    assert sum(count_sequences_with_runs(m, q, r) for r in range(m + 1)) == q**m


def test_run_census_matches_enumeration():
    for q, m in ((2, 9), (3, 6)):
        counts = [0] * (m + 1)
        for y in words(m, q):
            counts[run_count(y)] += 1
        assert counts == [count_sequences_with_runs(m, q, r) for r in range(m + 1)]


def test_falling_product():
    assert falling_product(5, 0) == 5
    assert falling_product(5, 2) == 60
    with pytest.raises(PreconditionError):
        falling_product(5, -1)


@pytest.mark.parametrize("name", sorted(SCHEMES))
def test_closed_form_total_matches_direct_sum(name):
    scheme = SCHEMES[name]
    for n in range(3, 13):
        assert certificate_bound(scheme, n, 2) == certificate_bound_bruteforce(scheme, n, 2)
    if scheme.kind is WeightKind.W_EXTENDED:
        scheme = make_weight_scheme("extended", s_d=1, q=3)
    if scheme.kind is not WeightKind.W_ASYMMETRIC:
        for n in range(3, 8):
            assert certificate_bound(scheme, n, 3) == certificate_bound_bruteforce(scheme, n, 3)


@pytest.mark.parametrize("name", sorted(SCHEMES))
def test_certificates_cover_every_center(name):
    scheme = SCHEMES[name]
    for n in range(3, 13):
        rep = certificate_check(scheme, scheme.channel(), n, 2)
        assert rep.feasible, (n, rep.min_sum, rep.witness)
        assert rep.centers_checked == 2**n


def test_scaled_weights_lose_feasibility_with_witness():
    scheme = make_weight_scheme("1d1t")
    bad = type(scheme)(scheme.kind, scale=Fraction(1, 2))
    rep = certificate_check(bad, bad.channel(), 8, 2)
    assert not rep.feasible
    assert covering_sum(bad, rep.witness, 8, 2) == rep.min_sum < 1
    # the witness is the least center attaining the minimum
    sums = {x: covering_sum(bad, x, 8, 2) for x in words(8, 2)}
    assert rep.witness == min(x for x, v in sums.items() if v == rep.min_sum)


def test_covering_sum_matches_member_weights():
    scheme = SCHEMES["sdtt"]
    x = (0, 1, 1, 0, 1, 0, 0, 1, 0)
    direct = sum(scheme(y, 9) for y in ball_members(x, scheme.channel(), 2))
    assert covering_sum(scheme, x, 9, 2) == direct


def test_certificate_check_thread_count_does_not_change_report():
    scheme = SCHEMES["1d1t"]
    a = certificate_check(scheme, scheme.channel(), 10, 2, threads=1)
    b = certificate_check(scheme, scheme.channel(), 10, 2, threads=2)
    assert (a.min_sum, a.witness) == (b.min_sum, b.witness)


def test_sampled_check_is_deterministic():
    scheme = SCHEMES["1d1t"]
    a = certificate_check(scheme, scheme.channel(), 12, 2, CheckMode.SAMPLE, samples=50, seed=3)
    b = certificate_check(scheme, scheme.channel(), 12, 2, CheckMode.SAMPLE, samples=50, seed=3)
    assert a == b and a.centers_checked <= 50
    assert a.to_json_dict()["mode"] == "sample"


def test_scheme_must_match_channel():
    scheme = SCHEMES["1d1t"]
    with pytest.raises(PreconditionError):
        certificate_check(scheme, ChannelSpec.del_trans(1, 2), 6, 2)
    with pytest.raises(PreconditionError):
        certificate_bound(make_weight_scheme("extended", s_d=1, q=3), 6, 2)
    with pytest.raises(PreconditionError):
        make_weight_scheme("sdtt", s=0, t=1)


def test_weight_values():
    assert SCHEMES["1d1t"].weight(4) == 1
    assert SCHEMES["1d1t"].weight(5) == Fraction(1, 3)
    assert SCHEMES["1d1t"].weight(12) == Fraction(1, 59)
    assert SCHEMES["sdtt"].weight(12) == Fraction(1, 7)
    assert certificate_bound(SCHEMES["1d1t"], 6, 2) == Fraction(92, 3)


def test_weights_never_exceed_one():
    for scheme in SCHEMES.values():
        for r in range(0, 60):
            w = scheme.weight(r, 40)
            assert 0 < w <= 1


def test_weight_cap_applies_when_denominator_is_small():
    # the ratio form dips below 1 just above the unit threshold
    scheme = make_weight_scheme("asymmetric", s=1, t_minus=2)
    assert scheme.unit_below() == 9
    assert scheme.denominator(9) == Fraction(9, 64)
    assert scheme.weight(9) == 1
    assert scheme.weight(12) == 1 / scheme.denominator(12)
    # a vanishing factor is capped rather than divided by
    zero = make_weight_scheme("asymmetric", s=1, t_plus=1, t_minus=1)
    assert zero.denominator(14) == 0 and zero.weight(14) == 1


# ---------------------------------------------------------------------------
# lambda functions, thresholds, theorem values

def _lambda_1d1t_oracle(q, u, n):
    """Transcription of the mu / nu identity from the proof, in plain integer arithmetic."""
    mu = q * sum(math.comb(n - 2, r) * (q - 1) ** r for r in range(4))
    mu += q * sum(Fraction((q - 1) ** r * math.comb(n - 2, r), (r - 1) * (r - 6) + 9) for r in range(4, u + 1))
    nu = Fraction((u + 2) * (u + 3), u * (u - 5) + 9)
    part = sum(math.comb(n, r) * (q - 1) ** r for r in range(u + 3))
    return mu - nu * q * part / (n * (n - 1) * (q - 1) ** 2)


def test_lambda_1d1t_matches_independent_transcription():
    rng = random.Random(20)
    for _ in range(20):
        q, u, n = rng.randint(2, 5), rng.randint(4, 16), rng.randint(2, 60)
        assert lambda_1d1t(q, u, n) == _lambda_1d1t_oracle(q, u, n)


def test_certificate_below_lambda_plus_main_for_single_transposition():
    rng = random.Random(21)
    for _ in range(20):
        u, n = rng.randint(4, 14), rng.randint(3, 40)
        p = BoundParams(19, u=u)
        main = p.main_coefficient() * 2**n / p.divisor(n)
        assert certificate_bound(SCHEMES["1d1t"], n, 2) <= p.lam(n) + main
    for u in (12, 16):
        p = BoundParams(20, t=1, u=u)
        for n in range(3, 50):
            main = p.main_coefficient() * 2**n / p.divisor(n)
            assert certificate_bound(SCHEMES["1dtt"], n, 2) <= p.lam(n) + main


def test_sdtt_nu_is_too_small_for_the_certificate():
    """The s-deletion decomposition undershoots its own certificate for mid-range n."""
    p = BoundParams(21, s=1, t=1, u=7)
    over = [
        n
        for n in range(3, 60)
        if certificate_bound(SCHEMES["sdtt"], n, 2) > p.lam(n) + p.main_coefficient() * 2**n / p.divisor(n)
    ]
    assert over == list(range(10, 24))
    # at n = 17, 18 this pushes the certificate above the bound flagged valid there
    for n in (17, 18):
        b = theorem_bound(p, n)
        assert b.valid and certificate_bound(SCHEMES["sdtt"], n, 2) > b.exact()


@pytest.mark.parametrize(
    "params,expected",
    [
        (BoundParams(19, u=4), 2),
        (BoundParams(19, u=6), 17),
        (BoundParams(19, u=10), 23),
        (BoundParams(20, t=1, u=12), 37),
        (BoundParams(21, s=1, t=1, u=7), 17),
        (BoundParams(21, s=1, t=1, u=20), 32),
    ],
)
def test_threshold_regression(params, expected):
    thr = threshold_n(params)
    assert thr == expected
    assert all(lambda_condition(params, n) for n in range(thr, thr + 200))
    if thr > params.min_n():
        assert not lambda_condition(params, thr - 1)


def test_theorem_bound_fields():
    b = bound_1d1t(2, 6, Fraction(1, 2), 40)
    assert b.valid and b.threshold_n == 17
    assert b.coefficient == Fraction(3, 2) * main_coefficient_1d1t(2, 6)
    assert b.exact() == b.coefficient * 2**40 / (40 * 39)
    assert not bound_1d1t(2, 6, Fraction(1, 2), 10).valid
    assert bound_1dtt(2, 1, 12, Fraction(1, 2), 40).divisor == 40 * 39
    assert bound_sdtt(2, 1, 1, 7, Fraction(1, 2), 40).divisor == 40 * 39
    with pytest.raises(PreconditionError):
        bound_1d1t(2, 3, Fraction(1, 2), 40)
    with pytest.raises(PreconditionError):
        bound_1d1t(2, 6, Fraction(1, 2), 1)
    with pytest.raises(PreconditionError):
        BoundParams(19, eps=Fraction(1))


def test_coefficient_ratio_closed_forms():
    for u in range(12, 200):
        r20_19 = main_coefficient_1dtt(2, 1, u) / main_coefficient_1d1t(2, u)
        assert r20_19 == Fraction(4 * (u * (u - 5) + 9), u * (u - 7))
    for u in range(13, 200):
        r21_20 = main_coefficient_sdtt(2, 1, 1, u) / main_coefficient_1dtt(2, 1, u)
        assert r21_20 == Fraction(2 * (u + 5) * (u + 4) * (u - 7), (u - 1) * (u + 3) * (u + 2))


def test_coefficient_ratios_reach_the_stated_limits_slowly():
    def r20(u):
        return main_coefficient_1dtt(2, 1, u) / main_coefficient_1d1t(2, u)

    def r21(u):
        return main_coefficient_sdtt(2, 1, 1, u) / main_coefficient_1dtt(2, 1, u)

    assert min(u for u in range(12, 400) if all(r20(v) <= Fraction(9, 2) for v in range(u, 400))) == 26
    assert min(u for u in range(13, 400) if all(r21(v) >= Fraction(9, 5) for v in range(u, 400))) == 32
    assert abs(float(r20(10**6)) - 4) < 1e-4
    assert abs(float(r21(10**6)) - 2) < 1e-4


def test_redundancy_of_theorem_bound():
    b = bound_sdtt(2, 1, 1, 20, Fraction(1, 2), 1000)
    red = redundancy_lower(2, 1000, b)
    direct = math.log2(1000 * 999) - math.log2(float(b.coefficient))
    assert red.lo <= direct <= red.hi
    assert red.hi - red.lo < 1e-12
    with pytest.raises(PreconditionError):
        redundancy_lower(2, 999, b)
    assert abs(redundancy_lower(2, 10, 256).value - 2) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(12, 40), st.integers(30, 400))
def test_log2_enclosure(u, n):
    b = bound_1dtt(2, 1, u, Fraction(1, 2), n)
    lg = b.log2()
    direct = math.log2(float(b.coefficient)) + n - math.log2(b.divisor)
    assert float(lg.a) - 1e-9 <= direct <= float(lg.b) + 1e-9
    assert float(lg.b - lg.a) < 1e-20


def test_block_bound():
    b = block_bound(2, 1, 1, 2, 10**6, Fraction(1, 2))
    assert b.valid
    assert b.divisor == 10**12
    assert b.terms["packing"] == Fraction(2 * 4 * 4**2, Fraction(1, 2) * 4)
    assert b.coefficient == b.terms["packing"] + Fraction(121, 100) ** 6 / 10**6
    assert not block_hypothesis(2, 1, 1, 2, 100, Fraction(1, 2))
    assert not block_bound(2, 1, 1, 2, 100, Fraction(1, 2)).valid
    with pytest.raises(PreconditionError):
        block_bound(2, 1, 1, 2, 5, Fraction(1, 2))
    with pytest.raises(PreconditionError):
        block_bound(2, 1, 1, 2, 100, Fraction(1))


def test_block_hypothesis_is_monotone_in_n():
    flags = [block_hypothesis(2, 1, 1, 2, n, Fraction(1, 2)) for n in (10**3, 10**4, 10**5, 10**6, 10**7)]
    assert flags == sorted(flags)
    assert flags[-1]


def test_implied_constant():
    assert implied_constant(Fraction(2**10, 100), 2, 10, 2) == 1
