"""Words over the alphabet {0, ..., q-1}, their runs and adjacent transpositions.

A word is a plain ``tuple`` of ints; the alphabet size ``q`` travels alongside it.
Positions at the public surface are 1-based: ``transpose_at(x, k)`` swaps the
k-th and (k+1)-th symbols.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence as _Seq

from .errors import AlphabetError, IllegalTranspositionError, ParseError, PreconditionError

Word = tuple[int, ...]

EMPTY: Word = ()


class GapRule(enum.Enum):
    """Minimum spacing between the positions of simultaneous transpositions.

    STRICT requires k[i+1] - k[i] > 2; DISJOINT only requires the swapped
    pairs not to share a symbol, i.e. k[i+1] - k[i] >= 2.
    """

    STRICT = 3
    DISJOINT = 2

    @property
    def min_gap(self) -> int:
        return self.value


def check_word(x: _Seq[int], q: int) -> Word:
    if q < 2:
        raise PreconditionError(f"alphabet size must be >= 2, got {q}")
    w = tuple(x)
    for a in w:
        if not 0 <= a < q:
            raise AlphabetError(f"symbol {a} outside alphabet of size {q}")
    return w


def parse_sequence(text: str, q: int) -> Word:
    """Digits for q <= 10, comma separated indices otherwise. Empty text is the empty word."""
    text = text.strip()
    if not text:
        return check_word((), q)
    if q <= 10:
        if not text.isdigit():
            raise ParseError(f"expected a digit string, got {text!r}")
        return check_word([int(c) for c in text], q)
    try:
        symbols = [int(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"expected comma separated integers, got {text!r}") from exc
    return check_word(symbols, q)


def format_sequence(x: Iterable[int], q: int) -> str:
    if q <= 10:
        return "".join(str(a) for a in x)
    return ",".join(str(a) for a in x)


def all_words(n: int, q: int) -> Iterator[Word]:
    """Every word of length n in lexicographic order."""
    return itertools.product(range(q), repeat=n)


@dataclass(frozen=True)
class RunDecomposition:
    symbols: tuple[int, ...]
    lengths: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.symbols)

    def reconstruct(self) -> Word:
        out: list[int] = []
        for a, length in zip(self.symbols, self.lengths):
            out.extend([a] * length)
        return tuple(out)


def run_decompose(x: Word) -> RunDecomposition:
    if not x:
        raise PreconditionError("the empty word has no run decomposition")
    symbols = [x[0]]
    lengths = [1]
    for a in x[1:]:
        if a == symbols[-1]:
            lengths[-1] += 1
        else:
            symbols.append(a)
            lengths.append(1)
    return RunDecomposition(tuple(symbols), tuple(lengths))


def run_count(x: Word) -> int:
    """r(x); 0 for the empty word."""
    if not x:
        return 0
    return 1 + sum(1 for i in range(1, len(x)) if x[i] != x[i - 1])


@dataclass(frozen=True)
class RunStats:
    r: int
    r1_prime: int
    r1_dprime: int
    r1_side: int
    r_ge2: int
    r1_pair: int
    r2_in: int
    n: int = 0
    r3_rot: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "r": self.r,
            "r1_prime": self.r1_prime,
            "r1_dprime": self.r1_dprime,
            "r1_side": self.r1_side,
            "r_ge2": self.r_ge2,
            "r1_pair": self.r1_pair,
            "r2_in": self.r2_in,
            "r3_rot": self.r3_rot,
        }


def run_stats(x: Word) -> RunStats:
    dec = run_decompose(x)
    a, l, r = dec.symbols, dec.lengths, dec.r
    # 1-based index i maps to a[i - 1]
    r1_prime = sum(1 for i in range(2, r) if l[i - 1] == 1 and a[i - 2] == a[i])
    r1_dprime = sum(1 for i in range(2, r) if l[i - 1] == 1 and a[i - 2] != a[i])
    r1_side = len({i for i in (1, r) if l[i - 1] == 1})
    r_ge2 = sum(1 for length in l if length >= 2)
    r1_pair = sum(
        1
        for i in range(1, r - 3)
        if l[i] == 1 and l[i + 2] == 1 and a[i - 1] == a[i + 1] == a[i + 3]
    )
    r2_in = sum(1 for i in range(1, r - 1) if l[i] == 2 and a[i - 1] == a[i + 1])
    # singleton pair b c between equal symbols a with c != a; zero when q = 2
    r3_rot = sum(
        1
        for i in range(r - 3)
        if l[i + 1] == 1 and l[i + 2] == 1 and a[i] == a[i + 3] and a[i + 2] != a[i]
    )
    return RunStats(r, r1_prime, r1_dprime, r1_side, r_ge2, r1_pair, r2_in, n=len(x), r3_rot=r3_rot)


def delete_from_run(x: Word, i: int) -> Word:
    """x^(i): the word obtained by deleting one symbol of the i-th run (1-based)."""
    dec = run_decompose(x)
    if not 1 <= i <= dec.r:
        raise PreconditionError(f"run index {i} outside [1, {dec.r}]")
    start = sum(dec.lengths[: i - 1])
    return x[:start] + x[start + 1 :]


def hamming(x: Word, y: Word) -> int:
    if len(x) != len(y):
        raise PreconditionError(f"length mismatch: {len(x)} != {len(y)}")
    return sum(1 for a, b in zip(x, y) if a != b)


def transpose_at(x: Word, k: int) -> Word:
    """T(x, k): swap positions k and k+1 (1-based); the two symbols must differ."""
    n = len(x)
    if not 1 <= k < n:
        raise PreconditionError(f"position {k} outside [1, {n - 1}]")
    if x[k - 1] == x[k]:
        raise IllegalTranspositionError(f"x_{k} == x_{k + 1}; nothing to transpose")
    return x[: k - 1] + (x[k], x[k - 1]) + x[k + 1 :]


def transpose_simultaneous(
    x: Word, positions: _Seq[int], gap_rule: GapRule = GapRule.STRICT
) -> Word:
    """T_{k1,...,kt}(x): all swaps read the original x; positions ascend under gap_rule."""
    positions = list(positions)
    for k1, k2 in zip(positions, positions[1:]):
        if k2 - k1 < gap_rule.min_gap:
            raise IllegalTranspositionError(
                f"positions {k1}, {k2} violate the {gap_rule.name} gap rule"
            )
    y = list(x)
    n = len(x)
    for k in positions:
        if not 1 <= k < n:
            raise PreconditionError(f"position {k} outside [1, {n - 1}]")
        if x[k - 1] == x[k]:
            raise IllegalTranspositionError(f"x_{k} == x_{k + 1}; nothing to transpose")
        y[k - 1], y[k] = x[k], x[k - 1]
    return tuple(y)


def legal_positions(x: Word) -> list[int]:
    """1-based positions k with x_k != x_{k+1}."""
    return [k for k in range(1, len(x)) if x[k - 1] != x[k]]
