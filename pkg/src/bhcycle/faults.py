"""Edge-fault sets on BH_n and the conditional-fault vocabulary.

Most helpers take an explicit ``split`` dimension rather than a
decomposition object, so they work for any dimension including 0.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .topology import Edge, Topology, canonical, decode, digit, drop_digit, encode


class FaultFileError(ValueError):
    pass


@dataclass(frozen=True)
class FaultSet:
    """A sealed set of faulty edges of one topology."""

    topology: Topology = field(compare=False, repr=False)
    edges: frozenset = frozenset()

    @classmethod
    def of(cls, t: Topology, edges: Iterable[Sequence[int]] = ()) -> "FaultSet":
        canon = set()
        for k, e in enumerate(edges):
            u, v = e
            if not t.has_edge(u, v):
                raise ValueError(f"fault #{k} {t.label(u)}-{t.label(v)} is not an edge of BH_{t.n}")
            canon.add(canonical(u, v))
        return cls(t, frozenset(canon))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return canonical(*e) in self.edges

    def __iter__(self):
        return iter(sorted(self.edges))

    @property
    def n(self) -> int:
        return self.topology.n

    def by_dimension(self) -> list[int]:
        counts = [0] * self.topology.n
        for e in self.edges:
            counts[self.topology.edge_dim[e]] += 1
        return counts

    def slice(self, i: int) -> frozenset:
        """F_i."""
        return frozenset(e for e in self.edges if self.topology.edge_dim[e] == i)

    def without(self, *edges: Edge) -> "FaultSet":
        drop = {canonical(*e) for e in edges}
        return FaultSet(self.topology, self.edges - drop)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_json(self) -> str:
        t = self.topology
        return json.dumps([[list(t.label(u)), list(t.label(v))] for u, v in self.sorted_edges()])

    # __hash__/__eq__ from the dataclass use only ``edges``; include n
    def __hash__(self) -> int:
        return hash((self.topology.n, self.edges))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FaultSet)
            and other.topology.n == self.topology.n
            and other.edges == self.edges
        )


def load_faults(t: Topology, text: str) -> FaultSet:
    """Parse the JSON fault-file format: ``[[[digits], [digits]], ...]``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FaultFileError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, list):
        raise FaultFileError("fault file must hold a JSON array of edges")
    edges = []
    for k, item in enumerate(doc):
        if not (isinstance(item, list) and len(item) == 2):
            raise FaultFileError(f"edge #{k}: expected a pair of vertex labels")
        ends = []
        for side, label in enumerate(item):
            if not (isinstance(label, list) and len(label) == t.n and all(isinstance(d, int) for d in label)):
                raise FaultFileError(f"edge #{k} endpoint {side}: expected {t.n} integer digits, got {label!r}")
            try:
                ends.append(encode(label))
            except ValueError as exc:
                raise FaultFileError(f"edge #{k} endpoint {side}: {exc}") from None
        if not t.has_edge(*ends):
            raise FaultFileError(f"edge #{k}: {item[0]}-{item[1]} is not an edge of BH_{t.n}")
        edges.append(ends)
    return FaultSet.of(t, edges)


# --- degrees ----------------------------------------------------------------


def surviving_masks(t: Topology, faults: Iterable[Edge]) -> list[int]:
    """Adjacency bitmasks of BH_n - F."""
    adj = list(t.adj_mask)
    for u, v in faults:
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
    return adj


def min_degree(t: Topology, f: FaultSet | Iterable[Edge]) -> int:
    edges = f.edges if isinstance(f, FaultSet) else f
    return min(m.bit_count() for m in surviving_masks(t, edges))


def cross_faulty(t: Topology, faults: frozenset, v: int, split: int) -> int:
    """Number of faulty dimension-``split`` edges at v."""
    return sum(1 for w, d in t.neighbors[v] if d == split and canonical(v, w) in faults)


def subcube_degree(t: Topology, faults: frozenset, v: int, split: int) -> int:
    """Nonfaulty degree of v once D_split is deleted."""
    return sum(1 for w, d in t.neighbors[v] if d != split and canonical(v, w) not in faults)


# --- partitions and classes ---------------------------------------------------


@dataclass(frozen=True)
class Partition:
    split: int
    cross: frozenset  # F_i
    inside: tuple[frozenset, frozenset, frozenset, frozenset]  # F^0..F^3, global coords

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return tuple(len(p) for p in self.inside)


@lru_cache(maxsize=4096)
def partition(f: FaultSet, i: int) -> Partition:
    """Split F into F_i and the four subcube slices of the i-decomposition."""
    t = f.topology
    if not 1 <= i <= t.n - 1:
        raise ValueError(f"split dimension must be in 1..{t.n - 1}, got {i}")
    cross = set()
    inside: list[set] = [set(), set(), set(), set()]
    for e in f.edges:
        d = t.edge_dim.get(e)
        if d is None:
            raise ValueError(f"{e} is not an edge of BH_{t.n}")
        if d == i:
            cross.add(e)
        else:
            inside[digit(e[0], i)].add(e)
    return Partition(i, frozenset(cross), tuple(frozenset(s) for s in inside))


def local_faults(part: Partition, j: int) -> frozenset:
    """F^j relabelled into BH_{n-1} coordinates by dropping the split digit."""
    i = part.split
    return frozenset(canonical(drop_digit(u, i), drop_digit(v, i)) for u, v in part.inside[j])


class EdgeClass(enum.Enum):
    R_EDGE = "r_edge"
    NON_R_EDGE = "non_r_edge"


def classify_edge(t: Topology, f: FaultSet | frozenset, e: Edge, i: int) -> EdgeClass:
    """r-edge iff both ends keep a nonfaulty dimension-i edge."""
    faults = f.edges if isinstance(f, FaultSet) else f
    u, v = canonical(*e)
    if t.dimension(u, v) == i:
        raise ValueError(f"{t.label(u)}-{t.label(v)} is a cross edge of dimension {i}")
    for x in (u, v):
        if cross_faulty(t, faults, x, i) == 2:
            return EdgeClass.NON_R_EDGE
    return EdgeClass.R_EDGE


def is_r_edge(t: Topology, faults: frozenset, e: Edge, i: int) -> bool:
    return classify_edge(t, faults, e, i) is EdgeClass.R_EDGE


def pivot_vertices(t: Topology, f: FaultSet | frozenset, i: int, vertices: Iterable[int] | None = None) -> list[int]:
    """Vertices with exactly one nonfaulty edge after deleting D_i."""
    faults = f.edges if isinstance(f, FaultSet) else f
    pool = t.vertices if vertices is None else vertices
    return sorted(v for v in pool if subcube_degree(t, faults, v, i) == 1)


def isolated_vertices(t: Topology, f: FaultSet | frozenset, i: int, vertices: Iterable[int] | None = None) -> list[int]:
    faults = f.edges if isinstance(f, FaultSet) else f
    pool = t.vertices if vertices is None else vertices
    return sorted(v for v in pool if subcube_degree(t, faults, v, i) == 0)


# --- f4-cycles ----------------------------------------------------------------


@dataclass(frozen=True)
class F4Cycle:
    cycle: tuple[int, int, int, int]  # u, x, v, y in cyclic order
    pair: tuple[int, int]  # the nonadjacent degree-2 vertices u < v

    def labels(self, n: int) -> dict:
        return {
            "cycle": [list(decode(x, n)) for x in self.cycle],
            "pair": [list(decode(x, n)) for x in self.pair],
        }


def f4_cycles_from_masks(adj: Sequence[int], vertices: Iterable[int] | None = None) -> list[F4Cycle]:
    """f4-cycles of the graph given by adjacency bitmasks.

    A degree-2 pair u, v with identical neighbourhoods {x, y} is exactly the
    nonadjacent degree-2 pair of the 4-cycle u-x-v-y.
    """
    pool = range(len(adj)) if vertices is None else vertices
    by_nbhd: dict[int, list[int]] = {}
    for v in pool:
        if adj[v].bit_count() == 2:
            by_nbhd.setdefault(adj[v], []).append(v)
    out = []
    for nbhd, group in by_nbhd.items():
        x = (nbhd & -nbhd).bit_length() - 1
        y = nbhd.bit_length() - 1
        group.sort()
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                u, v = group[a], group[b]
                out.append(F4Cycle((u, x, v, y), (u, v)))
    out.sort(key=lambda c: c.pair)
    return out


def find_f4_cycles(t: Topology, f: FaultSet | Iterable[Edge]) -> list[F4Cycle]:
    """All f4-cycles of BH_n - F."""
    edges = f.edges if isinstance(f, FaultSet) else f
    return f4_cycles_from_masks(surviving_masks(t, edges))
