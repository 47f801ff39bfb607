"""Exhaustive error-ball enumeration.

Every channel is enumerated in a fixed stage order with deduplication after
each stage:

* DEL_TRANS   deletions, then at most t transpositions
* ASYMMETRIC  deletions, then at most t+ 0-right and t- 0-left shifts (any mix)
* BLOCK       s disjoint b-block deletions, then at most t b-block transpositions
* DAMERAU     deletions, insertions, substitutions, transpositions

For DEL_TRANS this order loses nothing (deleting first reaches every word).
The other three channels have no such guarantee, so :func:`interleaved_ball`
enumerates every interleaving of single operations and serves as the oracle
for order sensitivity.  Memory use of every enumerator is O(|ball|).
"""

from __future__ import annotations

import bisect
import enum
import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import PreconditionError
from .seqcore import GapRule, Word, check_word, format_sequence, legal_positions, parse_sequence


class ChannelKind(enum.Enum):
    DEL_TRANS = "del-trans"
    ASYMMETRIC = "asymmetric"
    BLOCK = "block"
    DAMERAU = "damerau"


@dataclass(frozen=True)
class ChannelSpec:
    kind: ChannelKind
    s: int = 0
    t: int = 0
    t_plus: int = 0
    t_minus: int = 0
    b: int = 1
    s_d: int = 0
    s_i: int = 0
    t_t: int = 0
    t_s: int = 0

    def __post_init__(self) -> None:
        counts = (self.s, self.t, self.t_plus, self.t_minus, self.s_d, self.s_i, self.t_t, self.t_s)
        if any(c < 0 for c in counts):
            raise PreconditionError(f"negative error count in {self}")
        if self.b < 1:
            raise PreconditionError(f"block length must be >= 1, got {self.b}")

    @classmethod
    def del_trans(cls, s: int, t: int) -> ChannelSpec:
        return cls(ChannelKind.DEL_TRANS, s=s, t=t)

    @classmethod
    def asymmetric(cls, s: int, t_plus: int, t_minus: int) -> ChannelSpec:
        return cls(ChannelKind.ASYMMETRIC, s=s, t_plus=t_plus, t_minus=t_minus)

    @classmethod
    def block(cls, s: int, t: int, b: int) -> ChannelSpec:
        return cls(ChannelKind.BLOCK, s=s, t=t, b=b)

    @classmethod
    def damerau(cls, s_d: int, s_i: int, t_t: int, t_s: int) -> ChannelSpec:
        return cls(ChannelKind.DAMERAU, s_d=s_d, s_i=s_i, t_t=t_t, t_s=t_s)

    def params(self) -> dict[str, int]:
        if self.kind is ChannelKind.DEL_TRANS:
            return {"s": self.s, "t": self.t}
        if self.kind is ChannelKind.ASYMMETRIC:
            return {"s": self.s, "t_plus": self.t_plus, "t_minus": self.t_minus}
        if self.kind is ChannelKind.BLOCK:
            return {"s": self.s, "t": self.t, "b": self.b}
        return {"s_d": self.s_d, "s_i": self.s_i, "t_t": self.t_t, "t_s": self.t_s}

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, **self.params()}

    @classmethod
    def from_dict(cls, d: dict) -> ChannelSpec:
        d = dict(d)
        kind = ChannelKind(d.pop("kind"))
        return cls(kind, **d)

    def output_length(self, n: int) -> int:
        if self.kind is ChannelKind.BLOCK:
            return n - self.s * self.b
        if self.kind is ChannelKind.DAMERAU:
            return n - self.s_d + self.s_i
        return n - self.s

    def validate(self, n: int, q: int) -> None:
        kind = self.kind
        if kind is ChannelKind.DEL_TRANS:
            if self.s > 0 and self.s >= n:
                raise PreconditionError(f"need n > s, got n={n}, s={self.s}")
        elif kind is ChannelKind.ASYMMETRIC:
            if q != 2:
                raise PreconditionError("asymmetric shifts are defined for q = 2 only")
            if self.s > n:
                raise PreconditionError(f"need s <= n, got n={n}, s={self.s}")
        elif kind is ChannelKind.BLOCK:
            if n < (self.s + 2) * self.b:
                raise PreconditionError(
                    f"need n >= (s+2)b = {(self.s + 2) * self.b}, got n={n}"
                )
        elif kind is ChannelKind.DAMERAU:
            if self.s_d > n:
                raise PreconditionError(f"need s_D <= n, got n={n}, s_D={self.s_d}")

    def is_trivial(self) -> bool:
        return all(v == 0 for k, v in self.params().items() if k != "b")


@dataclass(frozen=True)
class Ball:
    """Sorted, duplicate-free set of equal-length words around ``center``."""

    center: Word
    members: tuple[Word, ...]
    q: int
    channel: ChannelSpec | None = None

    @classmethod
    def from_members(
        cls, center: Word, members: Iterable[Word], q: int, channel: ChannelSpec | None = None
    ) -> Ball:
        return cls(center, tuple(sorted(set(members))), q, channel)

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.members)

    def __contains__(self, y: object) -> bool:
        i = bisect.bisect_left(self.members, y)
        return i < len(self.members) and self.members[i] == y

    def as_set(self) -> frozenset[Word]:
        return frozenset(self.members)

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel.to_dict() if self.channel else None,
            "q": self.q,
            "center": format_sequence(self.center, self.q),
            "size": self.size,
            "members": [format_sequence(y, self.q) for y in self.members],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> Ball:
        q = d["q"]
        channel = ChannelSpec.from_dict(d["channel"]) if d.get("channel") else None
        members = [parse_sequence(m, q) for m in d["members"]]
        return cls.from_members(parse_sequence(d["center"], q), members, q, channel)


# ---------------------------------------------------------------------------
# single-step moves

def _one_deletions(x: Word) -> set[Word]:
    # deleting any symbol of a run gives the same word: one per run
    out = set()
    for i in range(len(x)):
        if i == 0 or x[i] != x[i - 1]:
            out.add(x[:i] + x[i + 1 :])
    return out


def _one_transpositions(x: Word) -> list[Word]:
    return [x[:k] + (x[k + 1], x[k]) + x[k + 2 :] for k in range(len(x) - 1) if x[k] != x[k + 1]]


def _one_insertions(x: Word, q: int) -> set[Word]:
    return {x[:i] + (a,) + x[i:] for i in range(len(x) + 1) for a in range(q)}


def _one_substitutions(x: Word, q: int) -> list[Word]:
    return [x[:i] + (a,) + x[i + 1 :] for i in range(len(x)) for a in range(q) if a != x[i]]


def _right_shifts(x: Word) -> list[Word]:
    return [x[:k] + (1, 0) + x[k + 2 :] for k in range(len(x) - 1) if x[k] == 0 and x[k + 1] == 1]


def _left_shifts(x: Word) -> list[Word]:
    return [x[:k] + (0, 1) + x[k + 2 :] for k in range(len(x) - 1) if x[k] == 1 and x[k + 1] == 0]


def _block_transpositions(x: Word, b: int) -> set[Word]:
    return {
        x[:i] + x[i + b : i + 2 * b] + x[i : i + b] + x[i + 2 * b :]
        for i in range(len(x) - 2 * b + 1)
    }


# ---------------------------------------------------------------------------
# staged set enumerators

def _deletions(x: Word, s: int) -> frozenset[Word]:
    layer = {x}
    for _ in range(s):
        layer = {z for y in layer for z in _one_deletions(y)}
    return frozenset(layer)


@functools.lru_cache(maxsize=1 << 18)
def _trans_upto(x: Word, t: int) -> frozenset[Word]:
    seen = {x}
    frontier = [x]
    for _ in range(t):
        nxt = []
        for y in frontier:
            for z in _one_transpositions(y):
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
        if not frontier:
            break
    return frozenset(seen)


def _trans_exact(x: Word, t: int) -> frozenset[Word]:
    layer = {x}
    for _ in range(t):
        layer = {z for y in layer for z in _one_transpositions(y)}
    return frozenset(layer)


def _trans_simultaneous(x: Word, t: int, gap_rule: GapRule) -> frozenset[Word]:
    gap = gap_rule.min_gap
    legal = [k - 1 for k in legal_positions(x)]
    out = set()
    for combo in itertools.combinations(legal, t):
        if any(b - a < gap for a, b in zip(combo, combo[1:])):
            continue
        y = list(x)
        for k in combo:
            y[k], y[k + 1] = x[k + 1], x[k]
        out.add(tuple(y))
    return frozenset(out)


def _trans_upto_set(words: Iterable[Word], t: int) -> set[Word]:
    out: set[Word] = set()
    for y in words:
        out |= _trans_upto(y, t)
    return out


def _shifts(words: Iterable[Word], t_plus: int, t_minus: int) -> set[Word]:
    states = {(y, 0, 0) for y in words}
    frontier = list(states)
    while frontier:
        nxt = []
        for y, up, um in frontier:
            if up < t_plus:
                for z in _right_shifts(y):
                    st = (z, up + 1, um)
                    if st not in states:
                        states.add(st)
                        nxt.append(st)
            if um < t_minus:
                for z in _left_shifts(y):
                    st = (z, up, um + 1)
                    if st not in states:
                        states.add(st)
                        nxt.append(st)
        frontier = nxt
    return {y for y, _, _ in states}


def _block_deletions(x: Word, s: int, b: int) -> set[Word]:
    n = len(x)
    out = set()

    def rec(start: int, left: int, kept: Word) -> None:
        # kept: symbols of x[:start] that survive; intervals chosen left to right
        if left == 0:
            out.add(kept + x[start:])
            return
        for i in range(start, n - left * b + 1):
            rec(i + b, left - 1, kept + x[start:i])

    rec(0, s, ())
    return out


def _block_trans_upto(words: Iterable[Word], t: int, b: int) -> set[Word]:
    seen = set(words)
    frontier = list(seen)
    for _ in range(t):
        nxt = []
        for y in frontier:
            for z in _block_transpositions(y, b):
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return seen


def _insertions(words: Iterable[Word], s: int, q: int) -> set[Word]:
    layer = set(words)
    for _ in range(s):
        layer = {z for y in layer for z in _one_insertions(y, q)}
    return layer


def _substitutions_upto(words: Iterable[Word], t: int, q: int) -> set[Word]:
    seen = set(words)
    frontier = list(seen)
    for _ in range(t):
        nxt = []
        for y in frontier:
            for z in _one_substitutions(y, q):
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return seen


def ball_members(x: Word, channel: ChannelSpec, q: int) -> frozenset[Word]:
    """Members of the channel's ball around x, canonical stage order, no validation."""
    kind = channel.kind
    if kind is ChannelKind.DEL_TRANS:
        if channel.s == 0:
            return _trans_upto(x, channel.t)
        return frozenset(_trans_upto_set(_deletions(x, channel.s), channel.t))
    if kind is ChannelKind.ASYMMETRIC:
        return frozenset(_shifts(_deletions(x, channel.s), channel.t_plus, channel.t_minus))
    if kind is ChannelKind.BLOCK:
        return frozenset(
            _block_trans_upto(_block_deletions(x, channel.s, channel.b), channel.t, channel.b)
        )
    words = _deletions(x, channel.s_d)
    words = _insertions(words, channel.s_i, q)
    words = _substitutions_upto(words, channel.t_s, q)
    return frozenset(_trans_upto_set(words, channel.t_t))


def enumerate_ball(x: Word, channel: ChannelSpec, q: int) -> Ball:
    x = check_word(x, q)
    channel.validate(len(x), q)
    return Ball.from_members(x, ball_members(x, channel, q), q, channel)


# ---------------------------------------------------------------------------
# public per-ball operations

def deletion_ball(x: Word, s: int, q: int = 2) -> Ball:
    """D_s(x): all subsequences of length n - s."""
    if not 0 <= s <= len(x):
        raise PreconditionError(f"need 0 <= s <= n, got s={s}, n={len(x)}")
    return Ball.from_members(x, _deletions(x, s), q, ChannelSpec.del_trans(s, 0) if s < len(x) else None)


def transposition_ball_upto(x: Word, t: int, q: int = 2) -> Ball:
    """T_{<=t}(x): at most t sequential transpositions."""
    if t < 0:
        raise PreconditionError("t must be non-negative")
    return Ball.from_members(x, _trans_upto(x, t), q, ChannelSpec.del_trans(0, t))


def transposition_ball_exact(x: Word, t: int, q: int = 2) -> Ball:
    """T_t(x): exactly t sequential transpositions (may be empty)."""
    if t < 0:
        raise PreconditionError("t must be non-negative")
    return Ball.from_members(x, _trans_exact(x, t), q)


def transposition_ball_simultaneous(
    x: Word, t: int, gap_rule: GapRule = GapRule.STRICT, q: int = 2
) -> Ball:
    """T'_t(x): exactly t transpositions applied at once to x under ``gap_rule``."""
    if t < 0:
        raise PreconditionError("t must be non-negative")
    return Ball.from_members(x, _trans_simultaneous(x, t, gap_rule), q)


def del_trans_ball(x: Word, s: int, t: int, q: int = 2) -> Ball:
    """B_{s,t}(x) = T_{<=t}(D_s(x))."""
    return enumerate_ball(x, ChannelSpec.del_trans(s, t), q)


def trans_then_del_ball(x: Word, s: int, t: int, q: int = 2) -> Ball:
    """D_s(T_{<=t}(x)); a subset of B_{s,t}(x), equal to it when q = 2."""
    ChannelSpec.del_trans(s, t).validate(len(x), q)
    members: set[Word] = set()
    for y in _trans_upto(x, t):
        members |= _deletions(y, s)
    return Ball.from_members(x, members, q)


def asymmetric_ball(x: Word, s: int, t_plus: int, t_minus: int, q: int = 2) -> Ball:
    return enumerate_ball(x, ChannelSpec.asymmetric(s, t_plus, t_minus), q)


def block_ball(x: Word, s: int, t: int, b: int, q: int = 2) -> Ball:
    return enumerate_ball(x, ChannelSpec.block(s, t, b), q)


def damerau_ball(x: Word, s_d: int, s_i: int, t_t: int, t_s: int, q: int = 2) -> Ball:
    return enumerate_ball(x, ChannelSpec.damerau(s_d, s_i, t_t, t_s), q)


# ---------------------------------------------------------------------------
# all-interleavings oracle

def interleaved_ball(x: Word, channel: ChannelSpec, q: int) -> frozenset[Word]:
    """Every word reachable by any ordering of single edits within the channel's budget.

    Exact-count operations (deletions, insertions, block deletions) must be used
    up; "at most" operations may be left over.  Exponential, small n only.
    """
    kind = channel.kind
    if kind is ChannelKind.DEL_TRANS:
        budget = (channel.s, channel.t)

        def moves(y: Word) -> Iterator[tuple[int, Word]]:
            for i in range(len(y)):
                yield 0, y[:i] + y[i + 1 :]
            for k in range(len(y) - 1):
                if y[k] != y[k + 1]:
                    yield 1, y[:k] + (y[k + 1], y[k]) + y[k + 2 :]

        exact = (0,)
    elif kind is ChannelKind.ASYMMETRIC:
        budget = (channel.s, channel.t_plus, channel.t_minus)

        def moves(y: Word) -> Iterator[tuple[int, Word]]:
            for i in range(len(y)):
                yield 0, y[:i] + y[i + 1 :]
            for k in range(len(y) - 1):
                if (y[k], y[k + 1]) == (0, 1):
                    yield 1, y[:k] + (1, 0) + y[k + 2 :]
                elif (y[k], y[k + 1]) == (1, 0):
                    yield 2, y[:k] + (0, 1) + y[k + 2 :]

        exact = (0,)
    elif kind is ChannelKind.BLOCK:
        budget = (channel.s, channel.t)
        b = channel.b

        def moves(y: Word) -> Iterator[tuple[int, Word]]:
            for i in range(len(y) - b + 1):
                yield 0, y[:i] + y[i + b :]
            for i in range(len(y) - 2 * b + 1):
                yield 1, y[:i] + y[i + b : i + 2 * b] + y[i : i + b] + y[i + 2 * b :]

        exact = (0,)
    else:
        budget = (channel.s_d, channel.s_i, channel.t_t, channel.t_s)

        def moves(y: Word) -> Iterator[tuple[int, Word]]:
            for i in range(len(y)):
                yield 0, y[:i] + y[i + 1 :]
            for i in range(len(y) + 1):
                for a in range(q):
                    yield 1, y[:i] + (a,) + y[i:]
            for k in range(len(y) - 1):
                if y[k] != y[k + 1]:
                    yield 2, y[:k] + (y[k + 1], y[k]) + y[k + 2 :]
            for i in range(len(y)):
                for a in range(q):
                    if a != y[i]:
                        yield 3, y[:i] + (a,) + y[i + 1 :]

        exact = (0, 1)

    start = (x, (0,) * len(budget))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for y, used in frontier:
            for op, z in moves(y):
                if used[op] >= budget[op]:
                    continue
                u = used[:op] + (used[op] + 1,) + used[op + 1 :]
                st = (z, u)
                if st not in seen:
                    seen.add(st)
                    nxt.append(st)
        frontier = nxt
    return frozenset(y for y, used in seen if all(used[i] == budget[i] for i in exact))


# ---------------------------------------------------------------------------
# block arrays

@dataclass(frozen=True)
class BlockArray:
    """b x (n/b) array whose j-th column is the j-th length-b block of x."""

    rows: tuple[Word, ...]

    @property
    def b(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> tuple[Word, ...]:
        return tuple(zip(*self.rows))

    def flatten(self) -> Word:
        return tuple(a for col in self.columns for a in col)


def block_array(x: Word, b: int) -> BlockArray:
    n = len(x)
    if b < 1 or n % b:
        raise PreconditionError(f"block length {b} does not divide n={n}")
    return BlockArray(tuple(tuple(x[i::b]) for i in range(b)))


def block_array_row(array: BlockArray, i: int) -> Word:
    """A(x)_i, 1-based."""
    if not 1 <= i <= array.b:
        raise PreconditionError(f"row {i} outside [1, {array.b}]")
    return array.rows[i - 1]


def column_edited_arrays(array: BlockArray, s: int, t: int, q: int) -> set[BlockArray]:
    """Arrays obtained by deleting s columns and at most t adjacent column swaps."""
    b = array.b
    base = q**b
    cols = array.columns

    def encode(col: Word) -> int:
        v = 0
        for a in col:
            v = v * q + a
        return v

    def decode(v: int) -> Word:
        out = []
        for _ in range(b):
            v, a = divmod(v, q)
            out.append(a)
        return tuple(reversed(out))

    word = tuple(encode(c) for c in cols)
    edited = interleaved_ball(word, ChannelSpec.del_trans(s, t), base)
    arrays = set()
    for w in edited:
        new_cols = [decode(v) for v in w]
        arrays.add(BlockArray(tuple(zip(*new_cols)) if new_cols else ((),) * b))
    return arrays


# ---------------------------------------------------------------------------
# corruption sampler

def sample_corruption(x: Word, channel: ChannelSpec, seed: int = 0, q: int = 2) -> Word:
    """One output of the channel drawn along a random legal edit path.

    Each stage picks how many optional edits to make uniformly from 0..max and
    then each edit uniformly among the moves legal at that moment.  The result
    is a member of :func:`enumerate_ball`, but the draw is NOT uniform over it.
    """
    x = check_word(x, q)
    channel.validate(len(x), q)
    rng = random.Random(seed)
    y = x

    def delete(y: Word, k: int) -> Word:
        for _ in range(k):
            i = rng.randrange(len(y))
            y = y[:i] + y[i + 1 :]
        return y

    def transpose(y: Word, k: int) -> Word:
        for _ in range(k):
            options = _one_transpositions(y)
            if not options:
                break
            y = rng.choice(options)
        return y

    kind = channel.kind
    if kind is ChannelKind.DEL_TRANS:
        y = delete(y, channel.s)
        y = transpose(y, rng.randint(0, channel.t))
    elif kind is ChannelKind.ASYMMETRIC:
        y = delete(y, channel.s)
        ops = ["+"] * rng.randint(0, channel.t_plus) + ["-"] * rng.randint(0, channel.t_minus)
        rng.shuffle(ops)
        for op in ops:
            options = _right_shifts(y) if op == "+" else _left_shifts(y)
            if options:
                y = rng.choice(options)
    elif kind is ChannelKind.BLOCK:
        b = channel.b
        for _ in range(channel.s):
            i = rng.randrange(len(y) - b + 1)
            y = y[:i] + y[i + b :]
        for _ in range(rng.randint(0, channel.t)):
            options = sorted(_block_transpositions(y, b))
            y = rng.choice(options)
    else:
        y = delete(y, channel.s_d)
        for _ in range(channel.s_i):
            i = rng.randrange(len(y) + 1)
            y = y[:i] + (rng.randrange(q),) + y[i:]
        for _ in range(rng.randint(0, channel.t_s)):
            i = rng.randrange(len(y))
            a = rng.choice([c for c in range(q) if c != y[i]])
            y = y[:i] + (a,) + y[i + 1 :]
        y = transpose(y, rng.randint(0, channel.t_t))
    return y
