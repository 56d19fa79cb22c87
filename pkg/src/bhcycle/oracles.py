"""Exact-search oracles for Hamiltonian paths and cycles in BH_n - F.

Each function returns a witness or ``None`` for proven absence, and raises
SearchBudgetExceeded when the answer is unknown.  The fault-tolerance
bounds of the matching theorems are not enforced; exceeding one is logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .faults import FaultSet, surviving_masks
from .search import DEFAULT_BUDGET, SearchBudgetExceeded, SearchStats, spanning_paths
from .topology import Edge, Topology, canonical

log = logging.getLogger(__name__)

__all__ = [
    "HamPath",
    "HamCycle",
    "DisjointPathPair",
    "SearchBudgetExceeded",
    "ham_cycle",
    "ham_cycle_through_edge",
    "ham_path_laceable",
    "two_disjoint_paths",
    "ham_path_minus_vertex",
]


@dataclass(frozen=True)
class HamPath:
    vertices: tuple[int, ...]

    @property
    def s(self) -> int:
        return self.vertices[0]

    @property
    def t(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class HamCycle:
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [canonical(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]


@dataclass(frozen=True)
class DisjointPathPair:
    first: HamPath
    second: HamPath


def _edges(f) -> frozenset:
    if f is None:
        return frozenset()
    if isinstance(f, FaultSet):
        return f.edges
    return frozenset(canonical(*e) for e in f)


def _over_budget(what: str, faults: int, bound: int) -> None:
    if faults > bound:
        log.info("%s called with %d faults, above the cited bound %d", what, faults, bound)


def _full(t: Topology) -> int:
    return (1 << t.order) - 1


def ham_cycle(
    t: Topology, f: FaultSet | Iterable[Edge] | None = None, budget: int = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
) -> HamCycle | None:
    """Any Hamiltonian cycle of BH_n - F."""
    faults = _edges(f)
    adj = surviving_masks(t, faults)
    stats = stats if stats is not None else SearchStats()
    if t.order < 4:
        return None
    v0 = min(t.vertices, key=lambda v: (adj[v].bit_count(), v))
    nbrs = sorted(w for w in range(t.order) if (adj[v0] >> w) & 1)
    if len(nbrs) < 2:
        return None
    # a cycle uses two edges at v0, so one of any d-1 of them is on it;
    # cheap restarts on every candidate first, then exhaustive runs
    cands = nbrs[:-1]
    for u in cands:
        try:
            paths = spanning_paths(adj, _full(t), [(u, v0)], budget - stats.nodes, stats, exhaustive=False)
        except SearchBudgetExceeded:
            continue
        if paths is not None:
            return HamCycle(tuple(paths[0]))
    for u in cands:
        paths = spanning_paths(adj, _full(t), [(u, v0)], budget - stats.nodes, stats)
        if paths is not None:
            return HamCycle(tuple(paths[0]))
    return None


def ham_cycle_through_edge(
    t: Topology, f: FaultSet | Iterable[Edge] | None, e: Edge, budget: int = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
) -> HamCycle | None:
    """A Hamiltonian cycle of BH_n - F that uses the edge e.

    The cycle starts at one end of e and ends at the other.
    """
    faults = _edges(f)
    a, b = e
    if not t.has_edge(a, b):
        raise ValueError(f"{t.label(a)}-{t.label(b)} is not an edge")
    if canonical(a, b) in faults:
        raise ValueError(f"edge {t.label(a)}-{t.label(b)} is faulty")
    _over_budget("ham_cycle_through_edge", len(faults), 4 * t.n - 5)
    adj = surviving_masks(t, faults)
    if t.order == 2:
        return HamCycle((a, b))
    paths = spanning_paths(adj, _full(t), [(a, b)], budget, stats)
    return None if paths is None else HamCycle(tuple(paths[0]))


def ham_path_laceable(
    t: Topology, f: FaultSet | Iterable[Edge] | None, s: int, t_end: int, budget: int = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
) -> HamPath | None:
    """Hamiltonian s -> t_end path of BH_n - F; the ends must be in opposite classes."""
    if (s & 1) == (t_end & 1):
        raise ValueError("laceable path endpoints must lie in different partite classes")
    faults = _edges(f)
    _over_budget("ham_path_laceable", len(faults), 2 * t.n - 2)
    adj = surviving_masks(t, faults)
    paths = spanning_paths(adj, _full(t), [(s, t_end)], budget, stats)
    return None if paths is None else HamPath(tuple(paths[0]))


def two_disjoint_paths(
    t: Topology, f: FaultSet | Iterable[Edge] | None, s1: int, t1: int, s2: int, t2: int,
    budget: int = DEFAULT_BUDGET, stats: SearchStats | None = None,
) -> DisjointPathPair | None:
    """Disjoint s1->t1 and s2->t2 paths that together span BH_n - F.

    {s1, s2} must share one partite class and {t1, t2} the other.
    """
    ends = (s1, t1, s2, t2)
    if len(set(ends)) != 4:
        raise ValueError("the four path endpoints must be distinct")
    if (s1 & 1) != (s2 & 1) or (t1 & 1) != (t2 & 1) or (s1 & 1) == (t1 & 1):
        raise ValueError("{s1, s2} and {t1, t2} must lie in different partite classes")
    faults = _edges(f)
    _over_budget("two_disjoint_paths", len(faults), 2 * t.n - 3)
    adj = surviving_masks(t, faults)
    paths = spanning_paths(adj, _full(t), [(s1, t1), (s2, t2)], budget, stats)
    if paths is None:
        return None
    return DisjointPathPair(HamPath(tuple(paths[0])), HamPath(tuple(paths[1])))


def ham_path_minus_vertex(
    t: Topology, v: int, s: int, t_end: int, f: FaultSet | Iterable[Edge] | None = None,
    budget: int = DEFAULT_BUDGET, stats: SearchStats | None = None,
) -> HamPath | None:
    """Hamiltonian s -> t_end path of BH_n - F - v.

    s and t_end share a partite class and v lies in the other one.
    """
    if (s & 1) != (t_end & 1) or (v & 1) == (s & 1):
        raise ValueError("need s, t_end in one partite class and v in the other")
    if len({v, s, t_end}) != 3:
        raise ValueError("v, s and t_end must be distinct")
    faults = _edges(f)
    if faults:
        _over_budget("ham_path_minus_vertex", len(faults), 0)
    adj = surviving_masks(t, faults)
    active = _full(t) & ~(1 << v)
    paths = spanning_paths(adj, active, [(s, t_end)], budget, stats)
    return None if paths is None else HamPath(tuple(paths[0]))
