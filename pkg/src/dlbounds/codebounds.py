"""Code-size upper bounds in exact arithmetic and the covering certificates behind them.

A bound of the form ``coefficient * q**n / divisor`` is stored as a
:class:`BoundValue` so q**n never has to be expanded; everything that decides
validity or feasibility is a :class:`fractions.Fraction` comparison.
"""

from __future__ import annotations

import contextlib
import enum
import functools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from mpmath import iv

from .ballmath import binom, power_factor
from .errorballs import ChannelKind, ChannelSpec, ball_members
from .errors import PreconditionError
from .seqcore import Word, all_words, format_sequence, run_count

Rational = Union[int, Fraction]

INTERVAL_PREC = 100


@contextlib.contextmanager
def _interval_prec():
    saved = iv.prec
    iv.prec = INTERVAL_PREC
    try:
        yield
    finally:
        iv.prec = saved


def falling_product(m: int, t: int) -> int:
    """[m]_t = m (m-1) ... (m-t), a product of t+1 factors."""
    if t < 0:
        raise PreconditionError(f"t must be non-negative, got {t}")
    return math.prod(m - i for i in range(t + 1))


def count_sequences_with_runs(m: int, q: int, r: int) -> int:
    """Number of q-ary words of length m with exactly r runs."""
    if m == 0:
        return 1 if r == 0 else 0
    if not 1 <= r <= m:
        return 0
    return math.comb(m - 1, r - 1) * q * (q - 1) ** (r - 1)


# ---------------------------------------------------------------------------
# bound values

@dataclass(frozen=True)
class BoundValue:
    """``coefficient * q**n / divisor`` with validity metadata.

    ``main_coefficient`` excludes the (1 + eps) slack; ``terms`` holds any
    named summands for bounds that have more than one.
    """

    coefficient: Fraction
    q: int
    n: int
    divisor: int
    main_coefficient: Fraction
    valid: bool
    threshold_n: int | None = None
    terms: dict = field(default_factory=dict)

    def exact(self) -> Fraction:
        return self.coefficient * self.q**self.n / self.divisor

    def log2(self) -> "iv.mpf":
        with _interval_prec():
            return (
                _iv_log2(self.coefficient) + self.n * _iv_log2(self.q) - _iv_log2(self.divisor)
            )


def _iv_log2(v: Rational) -> "iv.mpf":
    v = Fraction(v)
    if v <= 0:
        raise PreconditionError(f"logarithm of non-positive value {v}")
    with _interval_prec():
        x = iv.mpf(v.numerator) / iv.mpf(v.denominator)
        return iv.log(x) / iv.log(2)


@dataclass(frozen=True)
class Bits:
    """A quantity in bits with a guaranteed enclosure [lo, hi]."""

    value: float
    lo: float
    hi: float


def _to_bits(x: "iv.mpf") -> Bits:
    lo, hi = float(x.a), float(x.b)
    return Bits((lo + hi) / 2, lo, hi)


def redundancy_lower(q: int, n: int, upper: BoundValue | Rational) -> Bits:
    """n log2 q - log2(upper): the redundancy forced by a code-size upper bound."""
    with _interval_prec():
        if isinstance(upper, BoundValue):
            if upper.q != q or upper.n != n:
                raise PreconditionError("bound was evaluated at a different (q, n)")
            # q**n cancels exactly
            x = _iv_log2(upper.divisor) - _iv_log2(upper.coefficient)
        else:
            x = n * _iv_log2(q) - _iv_log2(upper)
    return _to_bits(x)


# ---------------------------------------------------------------------------
# one deletion, one transposition

def nu_1d1t(u: int) -> Fraction:
    return Fraction((u + 2) * (u + 3), u * (u - 5) + 9)


def _check_q(q: int) -> None:
    if q < 2:
        raise PreconditionError(f"alphabet size must be >= 2, got {q}")


def _check_1d1t(q: int, u: int) -> None:
    _check_q(q)
    if u < 4:
        raise PreconditionError(f"need u >= 4, got {u}")


def main_coefficient_1d1t(q: int, u: int) -> Fraction:
    _check_1d1t(q, u)
    return nu_1d1t(u) * q / (q - 1) ** 2


def lambda_1d1t(q: int, u: int, n: int) -> Fraction:
    _check_1d1t(q, u)
    if n < 2:
        raise PreconditionError(f"need n >= 2, got {n}")
    head = q * sum(binom(n - 2, r) * (q - 1) ** r for r in range(4))
    mid = q * sum(
        Fraction((q - 1) ** r * binom(n - 2, r), (r - 1) * (r - 6) + 9) for r in range(4, u + 1)
    )
    tail = sum(binom(n, r) * (q - 1) ** r for r in range(u + 3))
    return head + mid - nu_1d1t(u) * q * tail / (n * (n - 1) * (q - 1) ** 2)


# ---------------------------------------------------------------------------
# one deletion, t transpositions

def nu_1dtt(t: int, u: int) -> Fraction:
    return Fraction(falling_product(u + t + 2, t), (u + 2 - 2 * t) * (u - 6 * t - 1) ** t)


def _check_1dtt(q: int, t: int, u: int) -> None:
    _check_q(q)
    if t < 1:
        raise PreconditionError(f"need t >= 1, got {t}")
    if u < 10 * t + 2:
        raise PreconditionError(f"need u >= 10t+2 = {10 * t + 2}, got {u}")


def main_coefficient_1dtt(q: int, t: int, u: int) -> Fraction:
    _check_1dtt(q, t, u)
    return (4 * q * t) ** t * nu_1dtt(t, u) / (q - 1) ** (t + 1)


def lambda_1dtt(q: int, t: int, u: int, n: int) -> Fraction:
    _check_1dtt(q, t, u)
    if n < 2:
        raise PreconditionError(f"need n >= 2, got {n}")
    fp = falling_product(n + t - 1, t)
    head = q * sum(binom(n - 2, r) * (q - 1) ** r for r in range(10 * t + 2))
    mid = sum(
        Fraction(
            falling_product(r + t + 1, t) * (q - 1) ** r * binom(n + t - 1, r + t + 1),
            (r + 1 - 2 * t) * (r - 6 * t - 2) ** t,
        )
        for r in range(10 * t + 2, u + 1)
    )
    tail = sum(binom(n + t - 1, r) * (q - 1) ** r for r in range(u + t + 2))
    scale = Fraction(q * (4 * t) ** t, fp)
    return head + scale * mid - scale * nu_1dtt(t, u) * tail / (q - 1) ** (t + 1)


# ---------------------------------------------------------------------------
# s deletions, t transpositions

def r_st(s: int, t: int) -> int:
    return max(4 * s + 2 * t + 1, 6 * t + 2)


def nu_sdtt(s: int, t: int, u: int) -> Fraction:
    return Fraction(
        falling_product(u + 2 * s + 2 * t + 1, s + t - 1),
        (u - s - t + 1) ** s * (u + s - t) ** t,
    )


def _check_sdtt(q: int, s: int, t: int, u: int) -> None:
    _check_q(q)
    if s < 1 or t < 1:
        raise PreconditionError(f"need s, t >= 1, got s={s}, t={t}")
    if u < r_st(s, t) - 1:
        raise PreconditionError(f"need u >= r_(s,t) - 1 = {r_st(s, t) - 1}, got {u}")


def main_coefficient_sdtt(q: int, s: int, t: int, u: int) -> Fraction:
    _check_sdtt(q, s, t, u)
    return (2 * s) ** s * (4 * q * t) ** t * nu_sdtt(s, t, u) / (q - 1) ** (s + t)


def lambda_sdtt(q: int, s: int, t: int, u: int, n: int) -> Fraction:
    _check_sdtt(q, s, t, u)
    if n < s + 2:
        raise PreconditionError(f"need n >= s+2, got {n}")
    rst = r_st(s, t)
    c = q * (2 * s) ** s * (4 * t) ** t
    head = q * sum(binom(n - s - 1, r) * (q - 1) ** r for r in range(rst - 1))
    mid = sum(
        Fraction(c * (q - 1) ** r * binom(n - s - 1, r), (r - 2 * s - 2 * t) ** s * (r - 1 - 2 * t) ** t)
        for r in range(rst - 1, u + 1)
    )
    tail = sum(binom(n + t - 1, r) * (q - 1) ** r for r in range(u + s + t + 1))
    fp = falling_product(n + t - 1, s + t - 1)
    return head + mid - Fraction(c, (q - 1) ** (s + t)) * nu_sdtt(s, t, u) * tail / fp


# ---------------------------------------------------------------------------
# parameters, dispatch and thresholds

@dataclass(frozen=True)
class BoundParams:
    """Parameters of one theorem-level bound; unused fields stay at their defaults."""

    theorem: int
    q: int = 2
    s: int = 0
    t: int = 0
    u: int = 0
    eps: Fraction = Fraction(1, 2)
    b: int = 1
    mu: Fraction = Fraction(1, 2)
    s_d: int = 0
    s_i: int = 0
    t_t: int = 0
    t_s: int = 0
    t_plus: int = 0
    t_minus: int = 0

    def __post_init__(self) -> None:
        if self.theorem not in (19, 20, 21, 22, 24, 26):
            raise PreconditionError(f"unknown theorem {self.theorem}")
        if self.theorem in (19, 20, 21) and not 0 < self.eps < 1:
            raise PreconditionError(f"need 0 < eps < 1, got {self.eps}")
        if self.theorem == 22 and not 0 < self.mu < 1:
            raise PreconditionError(f"need 0 < mu < 1, got {self.mu}")

    def main_coefficient(self) -> Fraction:
        if self.theorem == 19:
            return main_coefficient_1d1t(self.q, self.u)
        if self.theorem == 20:
            return main_coefficient_1dtt(self.q, self.t, self.u)
        if self.theorem == 21:
            return main_coefficient_sdtt(self.q, self.s, self.t, self.u)
        raise PreconditionError(f"theorem {self.theorem} has no lambda/main-term form")

    def divisor(self, n: int) -> int:
        if self.theorem == 19:
            return n * (n - 1)
        if self.theorem == 20:
            return falling_product(n + self.t - 1, self.t)
        if self.theorem == 21:
            return falling_product(n + self.t - 1, self.s + self.t - 1)
        if self.theorem == 22:
            return n ** (self.s + self.t)
        raise PreconditionError(f"theorem {self.theorem} has no closed-form divisor")

    def lam(self, n: int) -> Fraction:
        if self.theorem == 19:
            return lambda_1d1t(self.q, self.u, n)
        if self.theorem == 20:
            return lambda_1dtt(self.q, self.t, self.u, n)
        if self.theorem == 21:
            return lambda_sdtt(self.q, self.s, self.t, self.u, n)
        raise PreconditionError(f"theorem {self.theorem} has no lambda function")

    def min_n(self) -> int:
        return self.s + 2 if self.theorem == 21 else 2


def lambda_condition(params: BoundParams, n: int) -> bool:
    """lambda(n) <= eps * main coefficient * q**n / divisor(n), decided exactly."""
    lam = params.lam(n)
    rhs = params.eps * params.main_coefficient() * params.q**n
    return lam * params.divisor(n) <= rhs


@functools.lru_cache(maxsize=256)
def threshold_n(params: BoundParams, window: int = 64) -> int:
    """Smallest n after which the lambda condition holds at every scanned length.

    Scans upward and stops once the condition has held for
    ``max(window, last_failure)`` consecutive lengths; lambda is polynomial in
    n while the main term grows exponentially, so later failures do not occur
    in practice.
    """
    n = params.min_n()
    last_fail = n - 1
    while n - last_fail <= max(window, last_fail):
        if not lambda_condition(params, n):
            last_fail = n
        n += 1
    return last_fail + 1


def theorem_bound(params: BoundParams, n: int) -> BoundValue:
    if n < params.min_n():
        raise PreconditionError(f"need n >= {params.min_n()}, got n={n}")
    main = params.main_coefficient()
    thr = threshold_n(params)
    return BoundValue(
        coefficient=(1 + params.eps) * main,
        q=params.q,
        n=n,
        divisor=params.divisor(n),
        main_coefficient=main,
        valid=n >= thr,
        threshold_n=thr,
    )


def bound_1d1t(q: int, u: int, eps: Rational, n: int) -> BoundValue:
    return theorem_bound(BoundParams(19, q=q, u=u, eps=Fraction(eps)), n)


def bound_1dtt(q: int, t: int, u: int, eps: Rational, n: int) -> BoundValue:
    return theorem_bound(BoundParams(20, q=q, t=t, u=u, eps=Fraction(eps)), n)


def bound_sdtt(q: int, s: int, t: int, u: int, eps: Rational, n: int) -> BoundValue:
    return theorem_bound(BoundParams(21, q=q, s=s, t=t, u=u, eps=Fraction(eps)), n)


# ---------------------------------------------------------------------------
# block deletions and block transpositions

def block_f(q: int):
    """The auxiliary min-expression attached to the block bound; kept for reference only."""
    with _interval_prec():
        qq = iv.mpf(q)
        c = (qq - 1) ** 2 / (qq**2 - 3 * qq + 6) * (1 / qq - (qq - 1) * iv.log(qq) / (2 * qq**3))
        return min(float((1 / qq).a), float(((qq - 1) / (2 * qq)).a), float(c.a))


def block_epsilon(q: int, s: int, t: int, n: int) -> "iv.mpf":
    with _interval_prec():
        return iv.sqrt(4 * (s + t + 1) * iv.log(iv.mpf(n)) / (n * iv.log(iv.mpf(q))))


def block_hypothesis(q: int, s: int, t: int, b: int, n: int, mu: Rational) -> bool:
    """True only if (1 - eps q/(q-1))^(s+t) (1 - b/n)^(s+t) >= mu is certain."""
    with _interval_prec():
        eps = block_epsilon(q, s, t, n)
        base = 1 - eps * q / (q - 1)
        if not base.a > 0:
            return False
        lhs = base ** (s + t) * (1 - iv.mpf(b) / n) ** (s + t)
        mu = Fraction(mu)
        return bool(lhs.a >= iv.mpf(mu.numerator) / mu.denominator)


def block_bound(q: int, s: int, t: int, b: int, n: int, mu: Rational) -> BoundValue:
    _check_q(q)
    if min(s, t, b) < 1:
        raise PreconditionError("need s, t, b >= 1")
    if n < (s + 2) * b:
        raise PreconditionError(f"need n >= (s+2)b = {(s + 2) * b}, got {n}")
    mu = Fraction(mu)
    if not 0 < mu < 1:
        raise PreconditionError(f"need 0 < mu < 1, got {mu}")
    first = Fraction((2 * s) ** s * (4 * t) ** t * (b * q) ** (s + t)) / (
        mu * q ** (s * b) * (q - 1) ** (s + t)
    )
    second = Fraction(121, 100) ** ((s + t + 1) * b) / n
    return BoundValue(
        coefficient=first + second,
        q=q,
        n=n,
        divisor=n ** (s + t),
        main_coefficient=first,
        valid=block_hypothesis(q, s, t, b, n, mu),
        terms={"packing": first, "low_run": second, "f_q": block_f(q)},
    )


# ---------------------------------------------------------------------------
# weight schemes

class WeightKind(enum.Enum):
    W_1D1T = "1d1t"
    W_1DTT = "1dtt"
    W_SDTT = "sdtt"
    W_EXTENDED = "extended"
    W_ASYMMETRIC = "asymmetric"


@dataclass(frozen=True)
class WeightScheme:
    """Run-count based weights y -> w_y in [0, 1].

    ``q`` matters only for the extended scheme.  ``scale`` multiplies every
    weight; values other than 1 exist only to build negative controls.
    """

    kind: WeightKind
    s: int = 0
    t: int = 0
    s_d: int = 0
    s_i: int = 0
    t_t: int = 0
    t_s: int = 0
    t_plus: int = 0
    t_minus: int = 0
    q: int = 2
    scale: Fraction = Fraction(1)

    def channel(self) -> ChannelSpec:
        k = self.kind
        if k is WeightKind.W_1D1T:
            return ChannelSpec.del_trans(1, 1)
        if k is WeightKind.W_1DTT:
            return ChannelSpec.del_trans(1, self.t)
        if k is WeightKind.W_SDTT:
            return ChannelSpec.del_trans(self.s, self.t)
        if k is WeightKind.W_EXTENDED:
            return ChannelSpec.damerau(self.s_d, self.s_i, self.t_t, self.t_s)
        return ChannelSpec.asymmetric(self.s, self.t_plus, self.t_minus)

    def member_length(self, n: int) -> int:
        return self.channel().output_length(n)

    def unit_below(self) -> int:
        """Weights are 1 for every run count strictly below this value."""
        k = self.kind
        if k is WeightKind.W_1D1T:
            return 5
        if k is WeightKind.W_1DTT:
            return 10 * self.t + 3
        if k is WeightKind.W_SDTT:
            return r_st(self.s, self.t)
        if k is WeightKind.W_EXTENDED:
            r0 = max(8 * self.s_d + 3, 8 * self.t_t + 7)
            return r0 + 2 * (self.s_i + self.t_s + self.t_t)
        r0 = max(4 * self.s + 1, 8 * self.t_plus + 2)
        return r0 + 2 * (self.t_plus + self.t_minus)

    def denominator(self, r: int, n: int | None = None) -> Fraction:
        """The reciprocal of the raw weight at run count r (above the unit threshold)."""
        k = self.kind
        if k is WeightKind.W_1D1T:
            return Fraction((r - 2) * (r - 7) + 9)
        if k is WeightKind.W_1DTT:
            t = self.t
            return (r - 2 * t) * power_factor(r - 6 * t - 3, 4 * t, t)
        if k is WeightKind.W_SDTT:
            s, t = self.s, self.t
            return power_factor(r - 2 * s - 2 * t - 1, 2 * s, s) * power_factor(r - 2 * t - 2, 4 * t, t)
        if k is WeightKind.W_EXTENDED:
            if n is None:
                raise PreconditionError("the extended scheme needs the code length n")
            rs = r - 2 * self.s_i - 2 * self.t_s - 2 * self.t_t
            nq = _extended_nq(n, self.q, self.s_i, self.t_s)
            return (
                nq
                * power_factor(rs - 3 - 4 * self.s_d, 4 * self.s_d, self.s_d)
                * power_factor(rs - 7, 8 * self.t_t, self.t_t)
            )
        rs = r - 2 * self.t_plus - 2 * self.t_minus
        return (
            power_factor(rs - 1 - 2 * self.s, 2 * self.s, self.s)
            * power_factor(rs - 2, 4 * self.t_plus, self.t_plus)
            * power_factor(rs - 2 - 8 * self.t_plus, 4 * self.t_minus, self.t_minus)
        )

    def weight(self, r: int, n: int | None = None) -> Fraction:
        if r < self.unit_below():
            return self.scale
        den = self.denominator(r, n)
        # a denominator below 1 would push the weight above 1; cap it
        if den <= 1:
            return self.scale
        return self.scale / den

    def __call__(self, y: Word, n: int | None = None) -> Fraction:
        return self.weight(run_count(y), n)


def _extended_nq(n: int, q: int, s_i: int, t_s: int) -> Fraction:
    return (
        Fraction(q - 1) ** (s_i + t_s)
        * power_factor(n - 3 - 4 * s_i, 4 * s_i, s_i)
        * power_factor(n - 3, 4 * t_s, t_s)
    )


def make_weight_scheme(kind: WeightKind | str, **params: int) -> WeightScheme:
    kind = WeightKind(kind) if not isinstance(kind, WeightKind) else kind
    scheme = WeightScheme(kind, **params)
    if min(scheme.s, scheme.t, scheme.s_d, scheme.s_i, scheme.t_t, scheme.t_s, scheme.t_plus, scheme.t_minus) < 0:
        raise PreconditionError("error counts must be non-negative")
    if kind is WeightKind.W_1DTT and scheme.t < 1:
        raise PreconditionError("the 1-deletion t-transposition scheme needs t >= 1")
    if kind is WeightKind.W_SDTT and (scheme.s < 1 or scheme.t < 1):
        raise PreconditionError("the s-deletion t-transposition scheme needs s, t >= 1")
    if kind is WeightKind.W_EXTENDED and scheme.s_d + scheme.s_i + scheme.t_t + scheme.t_s < 1:
        raise PreconditionError("the extended scheme needs at least one error")
    if kind is WeightKind.W_ASYMMETRIC and scheme.s + scheme.t_plus + scheme.t_minus < 1:
        raise PreconditionError("the asymmetric scheme needs at least one error")
    return scheme


# ---------------------------------------------------------------------------
# certificates

class CheckMode(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


@dataclass(frozen=True)
class CertificateReport:
    channel: ChannelSpec
    n: int
    q: int
    scheme: WeightKind
    min_sum: Fraction
    witness: Word
    total: Fraction
    feasible: bool
    centers_checked: int
    mode: CheckMode

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel.to_dict(),
            "n": self.n,
            "q": self.q,
            "scheme": self.scheme.value,
            "mode": self.mode.value,
            "centers_checked": self.centers_checked,
            "min_sum": str(self.min_sum),
            "witness": format_sequence(self.witness, self.q),
            "total": str(self.total),
            "feasible": self.feasible,
        }


def covering_sum(scheme: WeightScheme, x: Word, n: int, q: int) -> Fraction:
    counts = Counter(run_count(y) for y in ball_members(x, scheme.channel(), q))
    return sum((c * scheme.weight(r, n) for r, c in counts.items()), Fraction(0))


def _min_over(args: tuple[WeightScheme, list[Word], int, int]) -> tuple[Fraction, Word]:
    scheme, centers, n, q = args
    best: tuple[Fraction, Word] | None = None
    for x in centers:
        v = covering_sum(scheme, x, n, q)
        if best is None or (v, x) < best:
            best = (v, x)
    assert best is not None
    return best


def _check_scheme_q(scheme: WeightScheme, q: int) -> None:
    if scheme.kind is WeightKind.W_EXTENDED and scheme.q != q:
        raise PreconditionError(f"extended scheme built for q={scheme.q}, used with q={q}")


def certificate_check(
    scheme: WeightScheme,
    channel: ChannelSpec,
    n: int,
    q: int,
    mode: CheckMode = CheckMode.EXHAUSTIVE,
    samples: int = 1000,
    seed: int = 0,
    threads: int = 1,
) -> CertificateReport:
    """Check sum_{y in B(x)} w_y >= 1 over all (or sampled) centers x.

    The reported witness is the lexicographically least center attaining the
    minimum, whatever the thread count.
    """
    if scheme.channel() != channel:
        raise PreconditionError(f"scheme {scheme.kind.value} does not match channel {channel.to_dict()}")
    _check_scheme_q(scheme, q)
    channel.validate(n, q)
    if mode is CheckMode.EXHAUSTIVE:
        centers = list(all_words(n, q))
    else:
        rng = random.Random(seed)
        centers = sorted({tuple(rng.randrange(q) for _ in range(n)) for _ in range(samples)})
    threads = max(1, threads)
    if threads == 1 or len(centers) < 256:
        best = _min_over((scheme, centers, n, q))
    else:
        size = -(-len(centers) // threads)
        chunks = [(scheme, centers[i : i + size], n, q) for i in range(0, len(centers), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            best = min(pool.map(_min_over, chunks))
    min_sum, witness = best
    return CertificateReport(
        channel=channel,
        n=n,
        q=q,
        scheme=scheme.kind,
        min_sum=min_sum,
        witness=witness,
        total=certificate_bound(scheme, n, q),
        feasible=min_sum >= 1,
        centers_checked=len(centers),
        mode=mode,
    )


def certificate_bound(scheme: WeightScheme, n: int, q: int) -> Fraction:
    """sum over all words y of the member length of w_y, aggregated by run count."""
    _check_scheme_q(scheme, q)
    m = scheme.member_length(n)
    if m < 0:
        raise PreconditionError(f"member length {m} is negative")
    if m == 0:
        return scheme.weight(0, n)
    return sum(
        (count_sequences_with_runs(m, q, r) * scheme.weight(r, n) for r in range(1, m + 1)),
        Fraction(0),
    )


def certificate_bound_bruteforce(scheme: WeightScheme, n: int, q: int) -> Fraction:
    m = scheme.member_length(n)
    return sum((scheme(y, n) for y in all_words(m, q)), Fraction(0))


def implied_constant(value: Rational, q: int, n: int, order: int) -> Fraction:
    """C such that value = C q**n / n**order; for theorems stated only up to a constant."""
    return Fraction(value) * n**order / q**n
