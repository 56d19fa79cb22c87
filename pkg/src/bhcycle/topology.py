"""Balanced hypercube BH_n: construction, decomposition and symmetries.

Vertices are packed into a single int, two bits per base-4 digit, with the
inner index in the lowest two bits::

    code = a0 + 4*a1 + 16*a2 + ... + 4**(n-1) * a_{n-1}

Edges are canonical ``(u, v)`` pairs with ``u < v``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

Edge = tuple[int, int]


def encode(digits: Sequence[int]) -> int:
    if not digits:
        raise ValueError("a vertex label needs at least one digit")
    code = 0
    for i, d in enumerate(digits):
        if d not in (0, 1, 2, 3):
            raise ValueError(f"digit {i} = {d!r} is not in {{0,1,2,3}}")
        code |= d << (2 * i)
    return code


def decode(code: int, n: int) -> tuple[int, ...]:
    return tuple((code >> (2 * i)) & 3 for i in range(n))


def digit(code: int, i: int) -> int:
    return (code >> (2 * i)) & 3


def set_digit(code: int, i: int, value: int) -> int:
    shift = 2 * i
    return (code & ~(3 << shift)) | ((value & 3) << shift)


def parity(code: int) -> int:
    """Partite class: parity of the inner index."""
    return code & 1


def canonical(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def definition_neighbors(code: int, n: int) -> list[tuple[int, int]]:
    """The 2n neighbours of a vertex, straight from the coordinate rule.

    Returns ``(neighbour, dimension)`` pairs.
    """
    a0 = code & 3
    sign = 1 if a0 % 2 == 0 else -1
    out = []
    for step in (1, -1):
        out.append((set_digit(code, 0, a0 + step), 0))
    for i in range(1, n):
        moved = set_digit(code, i, digit(code, i) + sign)
        for step in (1, -1):
            out.append((set_digit(moved, 0, a0 + step), i))
    return out


@dataclass(frozen=True, eq=False)
class Topology:
    """Immutable BH_n with per-edge dimension labels."""

    n: int
    # neighbors[v] is a tuple of (w, dim), sorted by w
    neighbors: tuple[tuple[tuple[int, int], ...], ...]
    edge_dim: dict = field(repr=False)
    adj_mask: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return 1 << (2 * self.n)

    @property
    def vertices(self) -> range:
        return range(self.order)

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.edge_dim)

    def labelled_edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, self.edge_dim[(u, v)]) for u, v in self.edges]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return frozenset(w for w, _ in self.neighbors[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canonical(u, v) in self.edge_dim

    def dimension(self, u: int, v: int) -> int:
        try:
            return self.edge_dim[canonical(u, v)]
        except KeyError:
            raise ValueError(f"{self.label(u)}-{self.label(v)} is not an edge of BH_{self.n}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def label(self, v: int) -> tuple[int, ...]:
        return decode(v, self.n)

    def partite_class(self, v: int) -> int:
        return v & 1

    def dimension_edges(self, i: int) -> list[Edge]:
        """D_i, the dimension-i edges."""
        return [e for e in self.edges if self.edge_dim[e] == i]

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "vertices": [list(self.label(v)) for v in self.vertices],
            "edges": [[u, v, d] for u, v, d in self.labelled_edges()],
        }
        return json.dumps(doc, indent=1)

    def to_dot(self) -> str:
        palette = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown", "gray"]
        lines = [f"graph BH{self.n} {{"]
        for v in self.vertices:
            name = "".join(map(str, self.label(v)))
            lines.append(f'  {v} [label="{name}"];')
        for u, v, d in self.labelled_edges():
            lines.append(f'  {u} -- {v} [color={palette[d % len(palette)]}, label="{d}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _from_edges(n: int, labelled: Iterable[tuple[int, int, int]]) -> Topology:
    edge_dim: dict[Edge, int] = {}
    for u, v, d in labelled:
        e = canonical(u, v)
        if edge_dim.setdefault(e, d) != d:
            raise ValueError(f"edge {e} labelled with two dimensions")
    order = 1 << (2 * n)
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(order)]
    for (u, v), d in edge_dim.items():
        nbrs[u].append((v, d))
        nbrs[v].append((u, d))
    masks = []
    for v in range(order):
        nbrs[v].sort()
        m = 0
        for w, _ in nbrs[v]:
            m |= 1 << w
        masks.append(m)
    return Topology(n, tuple(tuple(x) for x in nbrs), edge_dim, tuple(masks))


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"BH_n needs n >= 1, got {n!r}")


@lru_cache(maxsize=None)
def build_direct(n: int) -> Topology:
    """BH_n from the per-coordinate neighbour rule."""
    _check_n(n)
    labelled = []
    for v in range(1 << (2 * n)):
        for w, d in definition_neighbors(v, n):
            if v < w:
                labelled.append((v, w, d))
    return _from_edges(n, labelled)


def _recursive_edges(n: int) -> list[tuple[int, int, int]]:
    if n == 1:
        return [(0, 1, 0), (1, 2, 0), (2, 3, 0), (0, 3, 0)]
    lower = _recursive_edges(n - 1)
    block = 1 << (2 * (n - 1))
    out = []
    for j in range(4):
        base = j * block
        out.extend((u + base, v + base, d) for u, v, d in lower)
    for j in range(4):
        for x in range(block):
            a0 = x & 3
            if a0 % 2:
                continue  # odd vertices are reached from the even side
            for step in (1, -1):
                y = (x & ~3) | ((a0 + step) & 3)
                out.append((j * block + x, ((j + 1) % 4) * block + y, n - 1))
    return out


def build_recursive(n: int) -> Topology:
    """BH_n from four copies of BH_{n-1} plus the extra top-digit neighbours."""
    _check_n(n)
    return _from_edges(n, _recursive_edges(n))


def backup_vertex(v: int) -> int:
    """The unique other vertex with the same neighbourhood (inner index + 2)."""
    return (v & ~3) | (((v & 3) + 2) & 3)


def drop_digit(code: int, i: int) -> int:
    low = code & ((1 << (2 * i)) - 1)
    high = code >> (2 * (i + 1))
    return low | (high << (2 * i))


def insert_digit(code: int, i: int, value: int) -> int:
    low = code & ((1 << (2 * i)) - 1)
    high = code >> (2 * i)
    return low | (value << (2 * i)) | (high << (2 * (i + 1)))


@dataclass(frozen=True)
class SubcubeDecomposition:
    """BH_n split into four BH_{n-1} copies by deleting D_i."""

    topology: Topology
    split_dimension: int
    parts: tuple[tuple[int, ...], ...]
    cross_edges: tuple[Edge, ...]

    def part_of(self, v: int) -> int:
        return digit(v, self.split_dimension)

    def to_local(self, v: int) -> tuple[int, int]:
        """Global vertex -> (subcube index, BH_{n-1} code)."""
        return digit(v, self.split_dimension), drop_digit(v, self.split_dimension)

    def to_global(self, j: int, x: int) -> int:
        return insert_digit(x, self.split_dimension, j)

    def local_edges(self, j: int) -> list[Edge]:
        """Edges inside subcube j, in BH_{n-1} coordinates."""
        out = []
        for v in self.parts[j]:
            for w, d in self.topology.neighbors[v]:
                if v < w and d != self.split_dimension:
                    out.append(canonical(drop_digit(v, self.split_dimension), drop_digit(w, self.split_dimension)))
        return sorted(out)


def decompose(t: Topology, i: int) -> SubcubeDecomposition:
    if not 1 <= i <= t.n - 1:
        raise ValueError(f"split dimension must be in 1..{t.n - 1}, got {i}")
    parts = tuple(tuple(v for v in t.vertices if digit(v, i) == j) for j in range(4))
    cross = tuple(e for e in t.edges if t.edge_dim[e] == i)
    return SubcubeDecomposition(t, i, parts, cross)


# --- symmetries -----------------------------------------------------------
#
# Vertex permutations verified (see tests) to be automorphisms of BH_n.  They
# let the constructor move any split dimension to the top digit and pick the
# orientation of a witness.


def swap_inner_map(n: int, k: int) -> tuple[int, ...]:
    """Automorphism exchanging D_0 and D_k (k >= 1), fixing every other D_j.

    Digit k becomes ``[a0 odd] - (a1 + ... + a_{n-1})`` mod 4.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1}")
    out = []
    for v in range(1 << (2 * n)):
        total = sum(digit(v, j) for j in range(1, n))
        out.append(set_digit(v, k, (v & 1) - total))
    return tuple(out)


def swap_digits_map(n: int, i: int, k: int) -> tuple[int, ...]:
    if not (1 <= i <= n - 1 and 1 <= k <= n - 1):
        raise ValueError("only non-inner digits can be exchanged this way")
    out = []
    for v in range(1 << (2 * n)):
        a, b = digit(v, i), digit(v, k)
        out.append(set_digit(set_digit(v, i, b), k, a))
    return tuple(out)


def reflect_map(n: int) -> tuple[int, ...]:
    """Automorphism ``(a0, a1, ..) -> (a0 + 1, -a1, .., -a_{n-1})``.

    Keeps every dimension, flips the partite classes and sends subcube j of
    any split to subcube -j.
    """
    out = []
    for v in range(1 << (2 * n)):
        w = set_digit(v, 0, (v & 3) + 1)
        for j in range(1, n):
            w = set_digit(w, j, -digit(v, j))
        out.append(w)
    return tuple(out)


def rotate_map(n: int, i: int, r: int) -> tuple[int, ...]:
    """Add r to digit i (i >= 1)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"rotation digit must be in 1..{n - 1}")
    return tuple(set_digit(v, i, digit(v, i) + r) for v in range(1 << (2 * n)))


def compose(first: Sequence[int], then: Sequence[int]) -> tuple[int, ...]:
    return tuple(then[first[v]] for v in range(len(first)))


def invert(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for v, w in enumerate(perm):
        inv[w] = v
    return tuple(inv)


def is_automorphism(t: Topology, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(t.vertices):
        return False
    return all(t.has_edge(perm[u], perm[v]) for u, v in t.edge_dim)


@lru_cache(maxsize=None)
def frame_map(n: int, split: int, rotate: int = 0, reflect: bool = False) -> tuple[int, ...]:
    """Relabelling that moves D_split to the top digit.

    Afterwards subcube ``rotate`` of the split sits at top digit 0, and with
    ``reflect`` the partite classes and the subcube order are flipped too.
    """
    if n < 2:
        raise ValueError("a split needs n >= 2")
    if not 0 <= split <= n - 1:
        raise ValueError(f"split dimension must be in 0..{n - 1}")
    top = n - 1
    if split == top:
        perm = tuple(range(1 << (2 * n)))
    elif split == 0:
        perm = swap_inner_map(n, top)
    else:
        perm = swap_digits_map(n, split, top)
    if rotate % 4:
        perm = compose(perm, rotate_map(n, top, -rotate))
    if reflect:
        perm = compose(perm, reflect_map(n))
    return perm
