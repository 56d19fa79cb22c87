"""Exact depth-first search for vertex-disjoint spanning paths.

Everything runs on adjacency bitmasks.  A search asks for k paths
``s_0->t_0, ..., s_{k-1}->t_{k-1}`` that together visit every active vertex
exactly once.  Paths are grown one after another from their start.

Pruning at every node:

* forced edges: a vertex with exactly as many usable neighbours as it needs
  (two inside a path, one at an end) commits all of them, repeatedly;
* committed edges may not close a cycle or join ends of different paths;
* reachability and per-component bipartite balance of what is left.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

DEFAULT_BUDGET = 50_000_000
RESTART_CAPS = (400, 1_600, 6_400, 25_600, 102_400)


class SearchBudgetExceeded(RuntimeError):
    """The node cap was hit: the answer is unknown, not negative."""

    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} node expansions")
        self.nodes = nodes


@dataclass
class SearchStats:
    nodes: int = 0


@lru_cache(maxsize=None)
def even_mask(order: int) -> int:
    m = 0
    for v in range(0, order, 2):
        m |= 1 << v
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def reach(adj: Sequence[int], allowed: int, src: int) -> int:
    """Vertices of ``allowed`` reachable from src (src included)."""
    seen = 1 << src
    frontier = seen
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= adj[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def _balance(s: int, t: int) -> int:
    # even-count minus odd-count of a path from s to t
    if (s & 1) != (t & 1):
        return 0
    return 1 if s & 1 == 0 else -1


class _Search:
    def __init__(self, adj, active, segments, budget, stats):
        self.adj = adj
        self.segments = segments
        self.starts = [s for s, _ in segments]
        self.ends = [t for _, t in segments]
        self.last = len(segments) - 1
        self.budget = budget
        self.stats = stats
        self.even = even_mask(len(adj))
        # terminals still owned by later segments, per current segment
        self.reserved = []
        for k in range(len(segments)):
            m = 0
            for s, t in segments[k + 1 :]:
                m |= (1 << s) | (1 << t)
            self.reserved.append(m)
        self.paths: list[list[int]] = [[] for _ in segments]
        self.active = active
        self.rank = list(range(len(adj)))

    # -- forced-edge propagation ---------------------------------------------

    def _propagate(self, k: int, h: int, unv: int):
        """Commit edges at vertices with no slack until nothing changes.

        Returns the pruned adjacency masks and the committed edges, or None
        when some vertex cannot get its required degree, committed edges
        close a cycle, or they join endpoints of different paths.
        """
        adj = self.adj
        size = len(adj)
        live = unv | (1 << h)
        avail = [0] * size
        need = [2] * size
        label = [-1] * size
        label[h] = k
        need[h] = 1
        t = self.ends[k]
        label[t] = k
        need[t] = 1
        for j in range(k + 1, self.last + 1):
            s, tj = self.segments[j]
            label[s] = label[tj] = j
            need[s] = need[tj] = 1
        ends_mask = (1 << h) | (1 << t) | self.reserved[k]
        for x in _bits(live):
            m = adj[x] & live
            if label[x] >= 0:
                # two path ends from different paths can never be joined
                for y in _bits(m & ends_mask):
                    if label[y] != label[x]:
                        m &= ~(1 << y)
            avail[x] = m
        if k == self.last and unv != (1 << t):
            avail[h] &= ~(1 << t)
            avail[t] &= ~(1 << h)

        forced = [0] * size
        parent = list(range(size))
        comp_label = label[:]
        comp_size = [1] * size

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        stack = [x for x in _bits(live) if avail[x].bit_count() <= need[x]]
        while stack:
            x = stack.pop()
            a = avail[x]
            c = a.bit_count()
            if c < need[x]:
                return None
            if c != need[x] or forced[x] == a:
                continue
            for y in _bits(a & ~forced[x]):
                rx, ry = find(x), find(y)
                if rx == ry:
                    return None
                lx, ly = comp_label[rx], comp_label[ry]
                if lx >= 0 and ly >= 0:
                    if lx != ly:
                        return None
                    if k == self.last and comp_size[rx] + comp_size[ry] != live.bit_count():
                        return None
                parent[rx] = ry
                comp_size[ry] += comp_size[rx]
                if comp_label[ry] < 0:
                    comp_label[ry] = lx
                forced[x] |= 1 << y
                forced[y] |= 1 << x
                for z in (x, y):
                    fz = forced[z].bit_count()
                    if fz > need[z]:
                        return None
                    if fz == need[z] and avail[z] != forced[z]:
                        extra = avail[z] & ~forced[z]
                        avail[z] = forced[z]
                        zbit = ~(1 << z)
                        for w in _bits(extra):
                            avail[w] &= zbit
                            stack.append(w)
        return avail, forced

    def _components_ok(self, avail, k: int, cur: int, unv: int) -> bool:
        allowed = unv | (1 << cur)
        main = reach(avail, allowed, cur)
        t = self.ends[k]
        if not (main >> t) & 1:
            return False
        if k == self.last:
            return main == allowed
        rest = allowed & ~main
        # balance of cur's component: its own segment plus any later ones inside
        want = _balance(cur, t)
        for j in range(k + 1, self.last + 1):
            s, tj = self.segments[j]
            ins, int_ = (main >> s) & 1, (main >> tj) & 1
            if ins != int_:
                return False
            if ins:
                want += _balance(s, tj)
        if (main & self.even).bit_count() - (main & ~self.even).bit_count() != want:
            return False
        while rest:
            low = rest & -rest
            comp = reach(avail, rest, low.bit_length() - 1)
            rest &= ~comp
            want = 0
            hosted = False
            for j in range(k + 1, self.last + 1):
                s, tj = self.segments[j]
                ins, int_ = (comp >> s) & 1, (comp >> tj) & 1
                if ins != int_:
                    return False
                if ins:
                    hosted = True
                    want += _balance(s, tj)
            if not hosted:
                return False
            if (comp & self.even).bit_count() - (comp & ~self.even).bit_count() != want:
                return False
        return True

    # -- search ------------------------------------------------------------

    def run(self) -> list[list[int]] | None:
        s0 = self.starts[0]
        self.paths[0].append(s0)
        if self._extend(0, s0, self.active & ~(1 << s0)):
            return self.paths
        return None

    def _extend(self, k: int, cur: int, unv: int) -> bool:
        stats = self.stats
        stats.nodes += 1
        if stats.nodes > self.budget:
            raise SearchBudgetExceeded(stats.nodes)

        if cur == self.ends[k]:
            if k == self.last:
                return unv == 0
            s = self.starts[k + 1]
            self.paths[k + 1].append(s)
            if self._extend(k + 1, s, unv & ~(1 << s)):
                return True
            self.paths[k + 1].pop()
            return False

        state = self._propagate(k, cur, unv)
        if state is None:
            return False
        avail, forced = state
        if not self._components_ok(avail, k, cur, unv):
            return False
        nxt = forced[cur] or avail[cur]
        order = sorted(_bits(nxt), key=lambda w: (avail[w].bit_count(), self.rank[w]))
        path = self.paths[k]
        for w in order:
            path.append(w)
            if self._extend(k, w, unv & ~(1 << w)):
                return True
            path.pop()
        return False


def spanning_paths(
    adj: Sequence[int],
    active: int,
    segments: Sequence[tuple[int, int]],
    budget: int = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
    exhaustive: bool = True,
) -> list[list[int]] | None:
    """Vertex-disjoint paths s_k -> t_k jointly covering ``active``.

    Returns None when the search space is exhausted.  Raises
    SearchBudgetExceeded when more than ``budget`` nodes are expanded, or
    after the short restarts when ``exhaustive`` is false.
    """
    segments = [tuple(s) for s in segments]
    if not segments:
        raise ValueError("need at least one segment")
    terms = [v for st in segments for v in st]
    if len(set(terms)) != len(terms):
        raise ValueError("segment terminals must be pairwise distinct")
    for v in terms:
        if not (active >> v) & 1:
            raise ValueError(f"terminal {v} is not an active vertex")
    even = even_mask(len(adj))
    want = sum(_balance(s, t) for s, t in segments)
    if (active & even).bit_count() - (active & ~even).bit_count() != want:
        return None
    adj = [m & active for m in adj]
    stats = stats if stats is not None else SearchStats()
    # Short restarts with shuffled tie-breaks tame the heavy tail of
    # backtracking; the final run is exhaustive.  Any run that finishes
    # without hitting its cap is a definitive answer.
    spent = 0
    for seed, cap in enumerate(RESTART_CAPS, start=1):
        if spent + cap >= budget:
            break
        search = _Search(adj, active, segments, cap, SearchStats())
        rank = list(range(len(adj)))
        random.Random(seed).shuffle(rank)
        search.rank = rank
        try:
            result = search.run()
        except SearchBudgetExceeded:
            spent += cap
            stats.nodes += cap
            continue
        stats.nodes += search.stats.nodes
        return result
    if not exhaustive:
        raise SearchBudgetExceeded(spent)
    search = _Search(adj, active, segments, budget - spent, SearchStats())
    try:
        return search.run()
    finally:
        stats.nodes += search.stats.nodes
