"""Closed-form ball sizes and ball-size bounds.

Bounds take run counts and error counts rather than words so they can be
tabulated directly; :func:`ball_bounds` is the word-level convenience entry.
Fractional bounds are returned un-floored as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errorballs import ChannelKind, ChannelSpec
from .errors import PreconditionError
from .seqcore import RunStats, Word, run_count, run_stats

Rational = Union[int, Fraction]


def binom(m: int, k: int) -> int:
    """C(m, k) with C(m, 0) = 1 for every integer m and 0 for any other out-of-range pair."""
    if k == 0:
        return 1
    if k < 0 or m < k:
        return 0
    return math.comb(m, k)


def power_factor(num: Rational, den: Rational, e: int) -> Fraction:
    """(num/den)**e with the convention that a zero exponent gives 1 even when den = 0."""
    if e == 0:
        return Fraction(1)
    return Fraction(num) ** e / Fraction(den) ** e


@dataclass(frozen=True)
class SizeBounds:
    """Bounds on a ball size; ``None`` marks a bound whose hypothesis fails."""

    lower: Rational | None = None
    upper: Rational | None = None
    exact: int | None = None
    lower_weak: Rational | None = None

    @property
    def applicable(self) -> bool:
        return any(v is not None for v in (self.lower, self.upper, self.exact, self.lower_weak))

    def brackets(self, size: int) -> bool:
        ok = True
        for lo in (self.lower, self.lower_weak):
            if lo is not None:
                ok &= lo <= size
        if self.upper is not None:
            ok &= size <= self.upper
        if self.exact is not None:
            ok &= size == self.exact
        return ok


# ---------------------------------------------------------------------------
# one deletion, one transposition

def _require_len2(stats: RunStats) -> None:
    if stats.n < 2:
        raise PreconditionError(f"need a word of length >= 2, got n={stats.n}")


def b11_size_exact(stats: RunStats) -> int:
    """Closed form in the six run statistics. Exact for q = 2; overcounts by r3_rot when q > 2."""
    _require_len2(stats)
    return (
        stats.r**2
        - 4 * stats.r1_prime
        - stats.r1_dprime
        - stats.r1_side
        - stats.r1_pair
        - stats.r2_in
    )


def b11_size(stats: RunStats) -> int:
    """|B_{1,1}(x)| for any q: the closed form less the length-3 rotations x^(i), x^(i+3)."""
    return b11_size_exact(stats) - stats.r3_rot


def b11_size_lower(stats: RunStats) -> int:
    """Piecewise lower bound by r1_prime. The r1_prime = 0 branch can exceed the size when q > 2;
    the r(r-5)+9 floor holds for every q."""
    _require_len2(stats)
    r = stats.r
    if stats.r1_prime == 0:
        return max(r * (r - 1), 1)
    if stats.r1_prime == 1:
        return r * (r - 2)
    return r * (r - 5) + 9


# ---------------------------------------------------------------------------
# simultaneous transpositions

def _paired_sum(m: int, t: int) -> int:
    return sum(binom(m, i) * binom(m - 2 * i - 1, t - i) for i in range(t + 1))


def simultaneous_trans_lower(r: int, t: int) -> int:
    """Lower bound on |T'_t(x)| for a word with r >= 2t+1 runs."""
    if t < 0 or r < 2 * t + 1:
        raise PreconditionError(f"need r >= 2t+1, got r={r}, t={t}")
    return _paired_sum(r // 2, t)


def simultaneous_trans_lower_binom(r: int, t: int) -> int:
    if t < 0 or r < 2 * t + 1:
        raise PreconditionError(f"need r >= 2t+1, got r={r}, t={t}")
    return binom(r // 2, t)


def simultaneous_trans_lower_crude(r: int, t: int) -> Fraction:
    if t < 0 or r < 2 * t + 1:
        raise PreconditionError(f"need r >= 2t+1, got r={r}, t={t}")
    return power_factor(r - 1, 2 * t, t)


# ---------------------------------------------------------------------------
# deletions, and deletions with transpositions

def deletion_ball_bounds(r: int, s: int) -> SizeBounds:
    if s < 0:
        raise PreconditionError("s must be non-negative")
    lower = sum(binom(r - s, i) for i in range(s + 1))
    return SizeBounds(lower=lower, upper=binom(r + s - 1, s), lower_weak=binom(r - s + 1, s))


def _trans_product(r: int, start: int, t: int) -> int:
    return math.prod(r + 2 * i for i in range(start, t))


def b1t_bounds(r: int, t: int) -> SizeBounds:
    """Bounds on |B_{1,t}(x)|; the lower pair needs r >= 8t+3."""
    if t < 1:
        raise PreconditionError(f"need t >= 1, got {t}")
    upper = r * r * _trans_product(r, 1, t)
    if r < 8 * t + 3:
        return SizeBounds(upper=upper)
    m = (r - 4 * t - 1) // 4
    return SizeBounds(
        lower=r * _paired_sum(m, t),
        upper=upper,
        lower_weak=r * power_factor(r - 4 * t - 3, 4 * t, t),
    )


def bst_bounds(r: int, s: int, t: int) -> SizeBounds:
    """Bounds on |B_{s,t}(x)|.

    The structured lower bound needs r >= 4t+2, the product-form one
    r >= max(4s+1, 4t+2).  Zero error counts contribute a factor 1.
    """
    if s < 0 or t < 0:
        raise PreconditionError("error counts must be non-negative")
    upper = binom(r + s - 1, s) * _trans_product(r, 0, t)
    lower = None
    if r >= 4 * t + 2:
        c = -(-(r - 2) // 4)
        lower = sum(binom(r // 2 - s, i) for i in range(s + 1)) * _paired_sum(c, t)
    weak = None
    if r >= max(4 * s + 1, 4 * t + 2):
        weak = power_factor(r - 1 - 2 * s, 2 * s, s) * power_factor(r - 2, 4 * t, t)
    return SizeBounds(lower=lower, upper=upper, lower_weak=weak)


# ---------------------------------------------------------------------------
# insertions, substitutions, and the four-operation ball

def insertion_ball_size(n: int, q: int, s_i: int) -> int:
    return sum(binom(n + s_i, i) * (q - 1) ** i for i in range(s_i + 1))


def substitution_ball_size(n: int, q: int, t_s: int) -> int:
    return sum(binom(n, i) * (q - 1) ** i for i in range(t_s + 1))


def _check_damerau(n: int, r: int, s_d: int, s_i: int, t_t: int, t_s: int) -> None:
    if min(s_d, s_i, t_t, t_s) < 0:
        raise PreconditionError("error counts must be non-negative")
    if r < max(8 * s_d + 3, 8 * t_t + 7) and (s_d or t_t):
        raise PreconditionError(f"need r >= max(8s_D+3, 8t_T+7), got r={r}")
    if n < max(8 * s_i + 3, 4 * t_s + 3) and (s_i or t_s):
        raise PreconditionError(f"need n >= max(8s_I+3, 4t_S+3), got n={n}")


def damerau_ball_lower(n: int, r: int, q: int, s_d: int, s_i: int, t_t: int, t_s: int) -> Fraction:
    """Product-of-ratios lower bound on the four-operation ball size.

    Each of the four factors is required only when its count is positive.
    """
    _check_damerau(n, r, s_d, s_i, t_t, t_s)
    return (
        Fraction(q - 1) ** (s_i + t_s)
        * power_factor(n - 3 - 4 * s_i, 4 * s_i, s_i)
        * power_factor(n - 3, 4 * t_s, t_s)
        * power_factor(r - 3 - 4 * s_d, 4 * s_d, s_d)
        * power_factor(r - 7, 8 * t_t, t_t)
    )


def damerau_ball_lower_product(
    n: int, r: int, q: int, s_d: int, s_i: int, t_t: int, t_s: int
) -> Fraction:
    """Four-segment product bound that the ratio form above relaxes."""
    _check_damerau(n, r, s_d, s_i, t_t, t_s)
    n4, r4 = n // 4, r // 4
    return (
        insertion_ball_size(n4, q, s_i)
        * substitution_ball_size(n4, q, t_s)
        * sum(binom(r4 - s_d, i) for i in range(s_d + 1))
        * power_factor(r4 - 1, 2 * t_t, t_t)
    )


def asymmetric_ball_lower(r: int, s: int, t_plus: int, t_minus: int) -> SizeBounds:
    """``lower`` is the binomial form (with r1 = floor(r/2)), ``lower_weak`` the ratio form."""
    if min(s, t_plus, t_minus) < 0:
        raise PreconditionError("error counts must be non-negative")
    if r < max(4 * s + 1, 8 * t_plus + 2):
        raise PreconditionError(f"need r >= max(4s+1, 8t+ + 2), got r={r}")
    r1 = r // 2
    half = (-(-r // 2)) // 2
    binomial = (
        sum(binom(r1 - s, i) for i in range(s + 1))
        * binom(half, t_plus)
        * binom(half - 2 * t_plus, t_minus)
    )
    crude = (
        power_factor(r - 1 - 2 * s, 2 * s, s)
        * power_factor(r - 2, 4 * t_plus, t_plus)
        * power_factor(r - 2 - 8 * t_plus, 4 * t_minus, t_minus)
    )
    return SizeBounds(lower=binomial, lower_weak=crude)


# ---------------------------------------------------------------------------
# word-level entry

def run_bounds(r: int, channel: ChannelSpec) -> SizeBounds:
    """Bounds that depend on the run count alone; empty where no hypothesis holds."""
    if r < 0:
        raise PreconditionError(f"run count must be non-negative, got {r}")
    kind = channel.kind
    if kind is ChannelKind.DEL_TRANS:
        s, t = channel.s, channel.t
        if s == 0 and t == 0:
            return SizeBounds(lower=1, upper=1, exact=1)
        if t == 0:
            return deletion_ball_bounds(r, s)
        if s == 0:
            return SizeBounds(upper=_trans_product(r, 0, t))
        if s == 1:
            return b1t_bounds(r, t)
        return bst_bounds(r, s, t)
    if kind is ChannelKind.ASYMMETRIC:
        try:
            return asymmetric_ball_lower(r, channel.s, channel.t_plus, channel.t_minus)
        except PreconditionError:
            return SizeBounds()
    return SizeBounds()


def ball_bounds(x: Word, channel: ChannelSpec, q: int) -> SizeBounds:
    """Every applicable closed form for the ball of ``channel`` around ``x``."""
    n = len(x)
    channel.validate(n, q)
    r = run_count(x)
    kind = channel.kind
    if kind is ChannelKind.DEL_TRANS and channel.s == 1 and channel.t == 1 and n >= 2:
        st = run_stats(x)
        lower = b11_size_lower(st) if q == 2 else None
        return SizeBounds(lower=lower, upper=r * r, exact=b11_size(st))
    if kind in (ChannelKind.DEL_TRANS, ChannelKind.ASYMMETRIC):
        return run_bounds(r, channel)
    if kind is ChannelKind.DAMERAU:
        sd, si, tt, ts = channel.s_d, channel.s_i, channel.t_t, channel.t_s
        exact = None
        if sd == tt == 0 and ts == 0:
            exact = insertion_ball_size(n, q, si)
        elif sd == tt == 0 and si == 0:
            exact = substitution_ball_size(n, q, ts)
        try:
            lower = damerau_ball_lower(n, r, q, sd, si, tt, ts)
        except PreconditionError:
            lower = None
        return SizeBounds(lower=lower, exact=exact)
    return SizeBounds()
