"""Independent checks of cycles, paths and construction traces.

Nothing here imports the constructor or the search code.  Adjacency comes
from the coordinate rule in ``definition_neighbors`` and every case guard
is recomputed from the recorded fault set.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .topology import Topology, build_direct, canonical, definition_neighbors, frame_map

CYCLE_KINDS = ("repeat", "missing", "not-adjacent", "faulty-edge", "bad-vertex")


@dataclass(frozen=True)
class Violation:
    kind: str
    vertex: int | None = None
    edge: tuple | None = None
    position: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        if d["edge"] is not None:
            d["edge"] = list(d["edge"])
        return d


def _fault_set(f) -> frozenset:
    edges = getattr(f, "edges", f)
    return frozenset(canonical(*e) for e in (edges or ()))


def _adjacent(u: int, v: int, n: int) -> bool:
    return any(w == v for w, _ in definition_neighbors(u, n))


def _walk(t: Topology, faults: frozenset, vs: Sequence[int], closed: bool) -> list[Violation]:
    n, order = t.n, t.order
    out = []
    seen: dict[int, int] = {}
    for k, v in enumerate(vs):
        if not isinstance(v, int) or not 0 <= v < order:
            out.append(Violation("bad-vertex", vertex=v, position=k))
            continue
        if v in seen:
            out.append(Violation("repeat", vertex=v, position=k, detail=f"first seen at {seen[v]}"))
        else:
            seen[v] = k
    for v in range(order):
        if v not in seen:
            out.append(Violation("missing", vertex=v))
    m = len(vs)
    steps = m if closed else m - 1
    for k in range(max(steps, 0)):
        u, w = vs[k], vs[(k + 1) % m]
        if not (isinstance(u, int) and isinstance(w, int) and 0 <= u < order and 0 <= w < order):
            continue
        if not _adjacent(u, w, n):
            out.append(Violation("not-adjacent", edge=(u, w), position=k))
        elif canonical(u, w) in faults:
            out.append(Violation("faulty-edge", edge=canonical(u, w), position=k))
    return out


def verify_cycle(t: Topology, f, cycle) -> list[Violation]:
    """Violations of ``cycle`` as a Hamiltonian cycle of BH_n - F; empty means ok."""
    vs = list(getattr(cycle, "vertices", cycle))
    if len(vs) < 3:
        return [Violation("missing", detail=f"a cycle needs at least 3 vertices, got {len(vs)}")] + \
            _walk(t, _fault_set(f), vs, closed=False)
    return _walk(t, _fault_set(f), vs, closed=True)


def verify_path(t: Topology, f, path, s: int | None = None, t_end: int | None = None,
                skip: Iterable[int] = ()) -> list[Violation]:
    """Violations of ``path`` as a Hamiltonian path of BH_n - F - skip from s to t_end."""
    vs = list(getattr(path, "vertices", path))
    skip = set(skip)
    out = [v for v in _walk(t, _fault_set(f), vs, closed=False)
           if not (v.kind == "missing" and v.vertex in skip)]
    for k, v in enumerate(vs):
        if v in skip:
            out.append(Violation("repeat", vertex=v, position=k, detail="vertex should be skipped"))
    if vs and s is not None and vs[0] != s:
        out.append(Violation("endpoint", vertex=vs[0], position=0, detail=f"expected {s}"))
    if vs and t_end is not None and vs[-1] != t_end:
        out.append(Violation("endpoint", vertex=vs[-1], position=len(vs) - 1, detail=f"expected {t_end}"))
    return out


# --- traces --------------------------------------------------------------------


class _View:
    """BH_n - F split on one dimension, recomputed from scratch."""

    def __init__(self, t: Topology, faults: frozenset, split: int):
        self.t, self.faults, self.split, self.n = t, faults, split, t.n
        perm = frame_map(t.n, split, 0, False)
        shift = 2 * (t.n - 1)
        self.part = [perm[v] >> shift for v in range(t.order)]
        self.dims = [0] * t.n
        self.counts = [0, 0, 0, 0]
        for u, v in faults:
            d = self.dim(u, v)
            self.dims[d] += 1
            if d != split:
                self.counts[self.part[u]] += 1
        self.sub_deg = [self.subcube_degree(v) for v in range(t.order)]

    def dim(self, u: int, v: int) -> int:
        for w, d in definition_neighbors(u, self.n):
            if w == v:
                return d
        raise ValueError(f"{u}-{v} is not an edge")

    def subcube_degree(self, v: int) -> int:
        return sum(1 for w, d in definition_neighbors(v, self.n)
                   if d != self.split and canonical(v, w) not in self.faults)

    def live_cross(self, v: int) -> int:
        return sum(1 for w, d in definition_neighbors(v, self.n)
                   if d == self.split and canonical(v, w) not in self.faults)

    def vertices_with(self, degree: int) -> list[int]:
        return [v for v in range(self.t.order) if self.sub_deg[v] == degree]

    def pivots(self) -> list[int]:
        return self.vertices_with(1)

    def isolated(self) -> list[int]:
        return self.vertices_with(0)

    def f4_parts(self) -> set[int]:
        """Subcubes whose surviving graph holds two degree-2 vertices with equal neighbourhoods."""
        seen: dict[tuple, int] = {}
        out = set()
        for v in range(self.t.order):
            if self.sub_deg[v] != 2:
                continue
            nb = tuple(sorted(w for w, d in definition_neighbors(v, self.n)
                              if d != self.split and canonical(v, w) not in self.faults))
            key = (self.part[v], nb)
            if key in seen:
                out.add(self.part[v])
            seen[key] = v
        return out

    def is_r(self, e) -> bool:
        return all(self.live_cross(x) > 0 for x in e)


def _guard(label: str, n: int, view: _View, entry) -> str | None:
    """Why ``label``'s case condition fails on this view, or None if it holds."""
    c, piv, iso = view.counts, view.pivots(), view.isolated()
    top = max(c)
    heavy = [j for j in range(4) if c[j] == top]
    small = 2 * n - 4
    f4 = view.f4_parts()
    case1 = not piv and not iso

    def need(ok: bool, why: str):
        return None if ok else why

    if label == "n2/oracle":
        return need(n == 2, "oracle base case used above n = 2")
    if label.startswith("L8/"):
        if n != 3:
            return f"{label} at n = {n}"
        if label == "L8/3":
            return need(bool(iso), "no isolated vertex in any subcube")
        if label.startswith("L8/2"):
            if iso or not piv:
                return "needs pivots and no isolated vertex"
            parts = {view.part[v] for v in piv}
            s = max(parts, key=lambda j: (c[j], -j))
            k = sum(1 for v in piv if view.part[v] == s)
            if label == "L8/2.1.1":
                return need(c[s] >= 5 and k == 1, f"|F^s| = {c[s]}, {k} pivot(s)")
            if label == "L8/2.1.2":
                return need(c[s] >= 5 and k == 2, f"|F^s| = {c[s]}, {k} pivot(s)")
            return need(c[s] <= 4, f"|F^s| = {c[s]} > 4")
        if not case1:
            return "a subcube has minimum degree below 2"
        if label == "L8/1.1":
            return need(top <= 3, f"max |F^j| = {top}")
        if label.startswith("L8/1.2"):
            if top != 4:
                return f"max |F^j| = {top}, expected 4"
            return None
        if label.startswith("L8/1.3"):
            if top != 5:
                return f"max |F^j| = {top}, expected 5"
            named = entry.witnesses.get("named", {})
            if label in ("L8/1.3.1", "L8/1.3.2") and "f1" in named and "f2" in named:
                shared = set(named["f1"]) & set(named["f2"])
                if label == "L8/1.3.1" and not shared:
                    return "f1 and f2 are not adjacent"
                if label == "L8/1.3.2" and shared:
                    return "f1 and f2 are adjacent"
            return None
        return f"unknown label {label}"
    if not label.startswith("T/"):
        return f"unknown label {label}"
    if n < 4:
        return f"{label} at n = {n}"
    if label.startswith("T/1."):
        if not case1:
            return "a subcube has minimum degree below 2"
        if label == "T/1.2":
            return need(bool(f4), "no subcube holds an f4-cycle")
        if f4:
            return "a subcube holds an f4-cycle"
        if label == "T/1.1.1":
            return need(top >= 5 * n - 11, f"max |F^j| = {top} < 5n-11")
        if top > 5 * n - 12:
            return f"max |F^j| = {top} > 5n-12"
        if label == "T/1.1.2(1)":
            return need(any(c[(s + 2) % 4] <= small for s in heavy), "opposite subcube above 2n-4")
        if label == "T/1.1.2(2)":
            return need(any(c[(s + d) % 4] <= small for s in heavy for d in (1, 3)),
                        "no neighbouring subcube within 2n-4")
        return need(label == "T/1.1.2(nonr)", f"unknown label {label}")
    if label.startswith("T/2."):
        if iso:
            return "an isolated vertex exists"
        if label.startswith("T/2.1"):
            if len(piv) != 1:
                return f"{len(piv)} pivot(s), expected 1"
            s = view.part[piv[0]]
            if label == "T/2.1(1)":
                return need(c[(s + 2) % 4] <= small, "opposite subcube above 2n-4")
            if label == "T/2.1(2)":
                return need(any(c[(s + d) % 4] <= small for d in (1, 3)), "no neighbouring subcube within 2n-4")
            return f"unknown label {label}"
        if len(piv) != 2:
            return f"{len(piv)} pivot(s), expected 2"
        u, v = piv
        joined = view.part[u] == view.part[v] and canonical(u, v) in view.faults and view.dim(u, v) != view.split \
            if _adjacent(u, v, n) else False
        if label == "T/2.2":
            return need(joined, "the pivots are not joined by a faulty subcube edge")
        if label == "T/2.2-redec":
            return need(not joined, "the pivots are joined by a faulty subcube edge")
        return f"unknown label {label}"
    if label.startswith("T/3."):
        if not iso:
            return "no isolated vertex"
        others = [k for i, k in enumerate(view.dims) if i != view.split]
        if label in ("T/3.1", "T/3.1-redec"):
            if len(iso) != 1 or piv:
                return f"{len(iso)} isolated and {len(piv)} pivot vertices"
            if label == "T/3.1":
                return need(all(k <= 3 for k in others), "another dimension has 4 faults")
            return need(any(k >= 4 for k in others), "no other dimension has 4 faults")
        if label == "T/3.2":
            return need(len(iso) + len(piv) >= 2, "fewer than two degenerate vertices")
    return f"unknown label {label}"


def _heaviest(view_dims: list[int], skip: set) -> list[int]:
    dims = [i for i in range(len(view_dims)) if i not in skip]
    top = max(view_dims[i] for i in dims)
    return [i for i in dims if view_dims[i] == top]


def _dispatch_splits(entries) -> list[int | None]:
    """The split each entry's case was dispatched on, or None for a free choice."""
    out = []
    for k, e in enumerate(entries):
        prev = entries[k - 1] if k else None
        if prev is not None and prev.depth == e.depth and "to_split" in prev.witnesses.get("named", {}):
            out.append(prev.witnesses.get("named", {}).get("to_split"))
        else:
            out.append(None)
    return out


def verify_trace(t: Topology, f, trace, cycle=None) -> list[Violation]:
    """Re-check every level of a trace against its own faults.

    The top level must carry F itself.  For every level: the case guard
    holds on the dispatch split, cross-edge witnesses are nonfaulty edges
    of the split dimension, r-edge witnesses are r-edges, pivot and
    isolated witnesses have subcube degree 1 and 0, and the recorded
    subcube counts match.  ``cycle`` is checked too when given.
    """

    entries = list(getattr(trace, "entries", trace))
    out: list[Violation] = []
    if not entries:
        return [Violation("trace", detail="empty trace")]
    faults = _fault_set(f)
    if frozenset(canonical(*e) for e in entries[0].faults) != faults:
        out.append(Violation("trace", position=0, detail="top level faults differ from F"))
    if entries[0].n != t.n:
        out.append(Violation("trace", position=0, detail=f"top level n = {entries[0].n}, expected {t.n}"))
    if cycle is not None:
        out += verify_cycle(t, faults, cycle)
    forced = _dispatch_splits(entries)
    for k, e in enumerate(entries):
        out += _check_entry(build_direct(e.n), e, k, forced[k])
    return out


def _check_entry(t: Topology, e, k: int, forced: int | None) -> list[Violation]:
    out = []
    faults = frozenset(canonical(*x) for x in e.faults)
    for x in faults:
        if not (0 <= x[0] < t.order and 0 <= x[1] < t.order and _adjacent(x[0], x[1], t.n)):
            out.append(Violation("trace", edge=x, position=k, detail="fault is not an edge"))
            return out
    if t.n == 2:
        if e.case != "n2/oracle":
            out.append(Violation("guard", position=k, detail=f"{e.case} at n = 2"))
        return out
    # the guard is judged on the split the case was dispatched on
    if forced is None:
        split = _heaviest(_View(t, faults, 1).dims, set())[0]
    else:
        split = forced
    v = _View(t, faults, split)
    if forced is not None and v.dims[split] < 4:
        out.append(Violation("guard", position=k, detail=f"re-split on dimension {split} with {v.dims[split]} faults"))
    why = _guard(e.case, t.n, v, e)
    if why is not None:
        out.append(Violation("guard", position=k, detail=f"{e.case} on split {split}: {why}"))
    if e.split_dim is None:
        return out
    w = _View(t, faults, e.split_dim)
    if e.counts is not None and sorted(e.counts) != sorted(w.counts):
        out.append(Violation("counts", position=k, detail=f"recorded {e.counts}, recomputed {w.counts}"))
    if e.cross_count is not None and e.cross_count != w.dims[e.split_dim]:
        out.append(Violation("counts", position=k, detail=f"recorded |F_i| = {e.cross_count}, recomputed {w.dims[e.split_dim]}"))
    wit = e.witnesses or {}
    for x in wit.get("cross_edges", []):
        x = canonical(*x)
        if not _adjacent(*x, t.n) or w.dim(*x) != e.split_dim:
            out.append(Violation("witness", edge=x, position=k, detail="cross edge not in D_i"))
        elif x in faults:
            out.append(Violation("witness", edge=x, position=k, detail="cross edge is faulty"))
    for x in wit.get("r_edges", []):
        x = canonical(*x)
        if not _adjacent(*x, t.n) or w.dim(*x) == e.split_dim:
            out.append(Violation("witness", edge=x, position=k, detail="r-edge is not a subcube edge"))
        elif not w.is_r(x):
            out.append(Violation("witness", edge=x, position=k, detail="edge is not an r-edge"))
    for x in wit.get("pivots", []):
        if w.sub_deg[x] != 1:
            out.append(Violation("witness", vertex=x, position=k, detail=f"pivot has subcube degree {w.sub_deg[x]}"))
    for x in wit.get("isolated", []):
        if w.sub_deg[x] != 0:
            out.append(Violation("witness", vertex=x, position=k, detail=f"isolated vertex has subcube degree {w.sub_deg[x]}"))
    for name, val in wit.get("named", {}).items():
        if not isinstance(val, list):
            continue
        x = canonical(*val)
        if not _adjacent(*x, t.n):
            out.append(Violation("witness", edge=x, position=k, detail=f"{name} is not an edge"))
        elif name[0] == "f" and x not in faults:
            out.append(Violation("witness", edge=x, position=k, detail=f"{name} is not faulty"))
        elif name[0] == "e" and x in faults:
            out.append(Violation("witness", edge=x, position=k, detail=f"{name} is faulty"))
    return out
