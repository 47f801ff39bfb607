"""Extremal code sizes at small lengths.

Every word of length n is a vertex; two words conflict when their error balls
share a member.  Codes are exactly the independent sets of this graph.  The
graph is built through an inverted index (member -> centers), so the cost is
the total ball size rather than all pairwise intersections.  Adjacency rows
are Python ints used as bitsets, with vertex i the word whose base-q value is i.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errorballs import ChannelSpec, ball_members
from .errors import BudgetExceeded, PreconditionError
from .seqcore import Word, all_words, check_word

DEFAULT_VERTEX_BUDGET = 1 << 16


@dataclass(frozen=True)
class ConflictGraph:
    n: int
    q: int
    channel: ChannelSpec
    words: tuple[Word, ...]
    adj: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.words)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def is_independent(self, vertices: list[int]) -> bool:
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return all(not (self.adj[v] & mask) for v in vertices)

    def index_of(self, x: Word) -> int:
        v = 0
        for a in x:
            v = v * self.q + a
        return v


@dataclass(frozen=True)
class Code:
    n: int
    q: int
    channel: ChannelSpec
    codewords: tuple[Word, ...]
    optimal: bool = False

    @property
    def size(self) -> int:
        return len(self.codewords)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _balls(args: tuple[list[Word], ChannelSpec, int]) -> list[frozenset[Word]]:
    words, channel, q = args
    return [ball_members(x, channel, q) for x in words]


def _all_balls(words: list[Word], channel: ChannelSpec, q: int, threads: int) -> list[frozenset[Word]]:
    if threads <= 1 or len(words) < 512:
        return _balls((words, channel, q))
    size = -(-len(words) // threads)
    chunks = [(words[i : i + size], channel, q) for i in range(0, len(words), size)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return [b for part in pool.map(_balls, chunks) for b in part]


def conflict_graph(
    n: int,
    q: int,
    channel: ChannelSpec,
    budget: int = DEFAULT_VERTEX_BUDGET,
    threads: int = 1,
) -> ConflictGraph:
    if q**n > budget:
        raise BudgetExceeded(f"q^n = {q**n} exceeds the vertex budget {budget}")
    channel.validate(n, q)
    words = list(all_words(n, q))
    balls = _all_balls(words, channel, q, threads)
    index: dict[Word, int] = {}
    for i, ball in enumerate(balls):
        bit = 1 << i
        for y in ball:
            index[y] = index.get(y, 0) | bit
    adj = []
    for i, ball in enumerate(balls):
        row = 0
        for y in ball:
            row |= index[y]
        adj.append(row & ~(1 << i))
    return ConflictGraph(n, q, channel, tuple(words), tuple(adj))


# ---------------------------------------------------------------------------
# greedy

class GreedyOrder(enum.Enum):
    LEX = "lex"
    MIN_DEGREE = "min-degree"


def max_code_greedy(graph: ConflictGraph, order: GreedyOrder = GreedyOrder.LEX) -> Code:
    """Greedy independent set.

    LEX scans vertices in lexicographic order.  MIN_DEGREE repeatedly takes the
    vertex of least degree in the remaining graph (ties to the smaller index).
    """
    chosen = []
    if order is GreedyOrder.LEX:
        blocked = 0
        for v in range(graph.order):
            if not (blocked >> v) & 1:
                chosen.append(v)
                blocked |= graph.adj[v] | (1 << v)
    else:
        alive = (1 << graph.order) - 1
        while alive:
            v = min(_bits(alive), key=lambda u: ((graph.adj[u] & alive).bit_count(), u))
            chosen.append(v)
            alive &= ~(graph.adj[v] | (1 << v))
    return Code(graph.n, graph.q, graph.channel, tuple(graph.words[v] for v in sorted(chosen)))


# ---------------------------------------------------------------------------
# exact search

class _Timeout(Exception):
    pass


class _Found(Exception):
    pass


def dominated_vertices(adj: tuple[int, ...] | list[int]) -> int:
    """Bitset of vertices removable without lowering the independence number.

    u is dropped when some neighbour v has N[v] inside N[u] among the
    surviving vertices: any independent set through u can trade u for v.
    Vertices are scanned in index order until nothing changes.
    """
    nv = len(adj)
    closed = [adj[v] | (1 << v) for v in range(nv)]
    alive = (1 << nv) - 1
    changed = True
    while changed:
        changed = False
        for u in _bits(alive):
            cu = closed[u] & alive
            for v in _bits(cu & ~(1 << u)):
                if not (closed[v] & alive) & ~cu:
                    alive &= ~(1 << u)
                    changed = True
                    break
    return ((1 << nv) - 1) & ~alive


def bandwidth_order(adj: tuple[int, ...] | list[int]) -> list[int]:
    """Reverse Cuthill-McKee order.

    Breadth-first from a vertex of least degree, neighbours queued by
    (degree, index).  On the deletion/transposition graphs this roughly sorts
    words by Hamming weight, so every suffix of the order is a band of
    adjacent weight layers.
    """
    nv = len(adj)
    deg = [a.bit_count() for a in adj]
    seen = 0
    out: list[int] = []
    while len(out) < nv:
        start = min((v for v in range(nv) if not (seen >> v) & 1), key=lambda v: (deg[v], v))
        queue = [start]
        seen |= 1 << start
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            fresh = sorted(_bits(adj[v] & ~seen), key=lambda u: (deg[u], u))
            for u in fresh:
                seen |= 1 << u
            queue.extend(fresh)
        out.extend(queue)
    return out[::-1]


def _clique_cover_size(p: int, adj: list[int]) -> int:
    k = 0
    while p:
        k += 1
        cand = p
        while cand:
            low = cand & -cand
            p &= ~low
            cand &= adj[low.bit_length() - 1]
    return k


def max_code_exact(
    graph: ConflictGraph, time_budget: float | None = None, threads: int = 1
) -> Code:
    """Maximum independent set by Russian-doll search.

    Dominated vertices are removed first.  The rest are ordered by
    :func:`bandwidth_order` of the full graph, and c[i], the independence
    number of the suffix starting at position i, is computed from the back.
    Each doll asks only whether c[i+1] + 1 is reachable through vertex i, and
    a branch whose first candidate sits at position j is cut once
    ``size + c[j]`` falls short.  A greedy clique cover prunes the first level
    of each doll.  The returned set is the witness of the last doll that grew,
    so it depends on the graph alone.  ``threads`` is accepted for interface
    symmetry; the dolls are inherently sequential.  If ``time_budget`` seconds
    run out, the better of the largest doll and a min-degree greedy code is
    returned with ``optimal=False``.
    """
    del threads
    removed = dominated_vertices(graph.adj)
    order = [v for v in bandwidth_order(graph.adj) if not (removed >> v) & 1]
    pos = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        row = 0
        for u in _bits(graph.adj[v] & ~removed):
            row |= 1 << pos[u]
        adj.append(row)
    nv = len(order)

    deadline = None if time_budget is None else time.monotonic() + time_budget
    c = [0] * (nv + 1)
    best: list[int] = []
    cur: list[int] = []
    ticks = 0

    def expand(p: int, target: int) -> None:
        nonlocal ticks
        ticks += 1
        if deadline is not None and ticks & 0x3FF == 0 and time.monotonic() > deadline:
            raise _Timeout
        size = len(cur)
        if size == 1 and size + _clique_cover_size(p, adj) < target:
            return
        while p:
            low = p & -p
            j = low.bit_length() - 1
            if size + c[j] < target:
                return
            p ^= low
            cur.append(j)
            if size + 1 == target:
                raise _Found
            rest = p & ~adj[j]
            if rest:
                expand(rest, target)
            cur.pop()

    optimal = True
    full = (1 << nv) - 1
    try:
        for i in range(nv - 1, -1, -1):
            target = c[i + 1] + 1
            cur[:] = [i]
            try:
                if target == 1:
                    raise _Found
                expand(full >> (i + 1) << (i + 1) & ~adj[i], target)
                c[i] = c[i + 1]
            except _Found:
                c[i] = target
                best = list(cur)
    except _Timeout:
        optimal = False

    chosen = [order[v] for v in best]
    if not optimal:
        greedy = max_code_greedy(graph, GreedyOrder.MIN_DEGREE)
        if greedy.size > len(chosen):
            return Code(graph.n, graph.q, graph.channel, greedy.codewords, False)
    words = sorted(graph.words[v] for v in chosen)
    return Code(graph.n, graph.q, graph.channel, tuple(words), optimal)


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class Verdict:
    valid: bool
    witness: tuple[Word, Word, Word] | None = None


def verify_code(code: Code) -> Verdict:
    """Pairwise ball disjointness; on failure returns (x, x', shared corrupted word)."""
    seen: dict[Word, Word] = {}
    words = list(code.codewords)
    if len(set(words)) != len(words):
        raise PreconditionError("code contains a repeated codeword")
    for x in words:
        if len(x) != code.n:
            raise PreconditionError(f"codeword length {len(x)} differs from n={code.n}")
        check_word(x, code.q)
    code.channel.validate(code.n, code.q)
    for x in words:
        for y in sorted(ball_members(x, code.channel, code.q)):
            other = seen.get(y)
            if other is not None and other != x:
                return Verdict(False, (other, x, y))
            seen[y] = x
    return Verdict(True)
