"""A relabelled view of BH_n - F split on one dimension.

Inside a frame the split dimension is the top digit, subcube ``j`` is the
set of vertices whose top digit is j (its *role*), and the low digits give
the vertex's code in BH_{n-1}.  Even vertices have their cross edges into
role j+1, odd vertices into role j-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..faults import f4_cycles_from_masks, surviving_masks
from ..topology import Topology, build_direct, canonical, frame_map, invert


@dataclass(frozen=True)
class FrameKey:
    split: int
    rotate: int
    reflect: bool

    def to_json(self) -> dict:
        return {"split": self.split, "rotate": self.rotate, "reflect": self.reflect}


@dataclass
class Frame:
    t: Topology
    faults: frozenset  # in level coordinates
    key: FrameKey
    perm: tuple = field(init=False, repr=False)
    inv: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self.perm = frame_map(self.t.n, self.key.split, self.key.rotate, self.key.reflect)
        self.inv = invert(self.perm)
        self.n = self.t.n
        self.shift = 2 * (self.n - 1)
        self.mask = (1 << self.shift) - 1
        self.sub = build_direct(self.n - 1)
        perm = self.perm
        self.ffaults = frozenset(canonical(perm[u], perm[v]) for u, v in self.faults)
        local: list[set] = [set(), set(), set(), set()]
        cross = set()
        for u, v in self.ffaults:
            ju, jv = u >> self.shift, v >> self.shift
            if ju == jv:
                local[ju].add(canonical(u & self.mask, v & self.mask))
            else:
                cross.add((u, v))
        self.local = tuple(frozenset(s) for s in local)
        self.cross = frozenset(cross)

    # -- coordinates ---------------------------------------------------------

    def g(self, j: int, x: int) -> int:
        """Frame vertex of local x in role j."""
        return ((j % 4) << self.shift) | x

    def to_level(self, j: int, x: int) -> int:
        return self.inv[self.g(j, x)]

    def edge_to_level(self, j1: int, x1: int, j2: int, x2: int) -> tuple[int, int]:
        return canonical(self.to_level(j1, x1), self.to_level(j2, x2))

    # -- cross edges ---------------------------------------------------------

    def cross_targets(self, j: int, x: int) -> list[tuple[int, int]]:
        """Nonfaulty cross neighbours of (j, x) as (role, local) pairs."""
        step = 1 if x % 2 == 0 else -1
        jj = (j + step) % 4
        a0 = x & 3
        out = []
        me = self.g(j, x)
        for d in (1, -1):
            y = (x & ~3) | ((a0 + d) & 3)
            if canonical(me, self.g(jj, y)) not in self.cross:
                out.append((jj, y))
        return sorted(out)

    def up(self, j: int, x: int) -> list[int]:
        """Nonfaulty cross neighbours in role j+1 of an even x."""
        assert x % 2 == 0
        return [y for _, y in self.cross_targets(j, x)]

    def down(self, j: int, x: int) -> list[int]:
        """Nonfaulty cross neighbours in role j-1 of an odd x."""
        assert x % 2 == 1
        return [y for _, y in self.cross_targets(j, x)]

    def has_cross(self, j: int, x: int) -> bool:
        return bool(self.cross_targets(j, x))

    def is_r(self, j: int, x: int, y: int) -> bool:
        return self.has_cross(j, x) and self.has_cross(j, y)

    # -- subcubes ------------------------------------------------------------

    @cached_property
    def sub_adj(self) -> tuple[list[int], ...]:
        return tuple(surviving_masks(self.sub, self.local[j]) for j in range(4))

    def sub_degree(self, j: int, x: int) -> int:
        return self.sub_adj[j][x].bit_count()

    def sub_neighbors(self, j: int, x: int) -> list[int]:
        m = self.sub_adj[j][x]
        return [y for y in range(self.sub.order) if (m >> y) & 1]

    def min_sub_degree(self, j: int) -> int:
        return min(m.bit_count() for m in self.sub_adj[j])

    def pivots(self, j: int) -> list[int]:
        return [x for x, m in enumerate(self.sub_adj[j]) if m.bit_count() == 1]

    def isolated(self, j: int) -> list[int]:
        return [x for x, m in enumerate(self.sub_adj[j]) if m.bit_count() == 0]

    def f4(self, j: int):
        return f4_cycles_from_masks(self.sub_adj[j])

    def counts(self) -> list[int]:
        return [len(s) for s in self.local]
