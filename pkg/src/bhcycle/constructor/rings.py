"""Completing a role-0 piece into a Hamiltonian cycle through roles 1..3.

A *single ring* runs one chain a0 -> b1 .. a1 -> b2 .. a2 -> b3 .. a3 -> b0
around the four subcubes.  A *double ring* runs two such chains side by
side, splitting every subcube into two disjoint paths, or, in its hyper
variant, joins both chains through one role-3 vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .. import oracles
from ..search import SearchBudgetExceeded, SearchStats
from .frame import Frame
from .trace import Impasse, TraceEntry

# oracle calls (cache misses) one ring completion may spend
RING_CALL_CAP = 120
# exits tried per role when a laceable path may end anywhere
LACE_EXITS = 8
PAIR_EXITS = 16


class StitchError(ValueError):
    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind


@dataclass
class Context:
    """Per-construction state: oracle cache, budgets and the trace."""

    budget: int
    trace: object
    depth: int = 0
    cache: dict = field(default_factory=dict)
    calls: int = 0
    recurse: object = None  # (n, faults, depth) -> (cycle, entries) | None
    redispatch: object = None  # (t, faults, depth, split, tried) -> (cycle, entries)

    def _run(self, key, fn):
        if key in self.cache:
            return self.cache[key]
        self.calls += 1
        try:
            res = fn(SearchStats())
        except SearchBudgetExceeded:
            res = None
            self.cache[key] = None
            raise
        self.cache[key] = res
        return res

    def lace(self, fr: Frame, j: int, s: int, t: int):
        key = ("lace", fr.n - 1, fr.local[j], s, t)
        r = self._run(key, lambda st: oracles.ham_path_laceable(fr.sub, fr.local[j], s, t, self.budget, st))
        return None if r is None else list(r.vertices)

    def through(self, fr: Frame, j: int, a: int, b: int, faults=None):
        """Hamiltonian a -> b path of role j closed into a cycle by the edge ab."""
        faults = fr.local[j] if faults is None else faults
        key = ("through", fr.n - 1, faults, a, b)
        r = self._run(key, lambda st: oracles.ham_cycle_through_edge(fr.sub, faults, (a, b), self.budget, st))
        return None if r is None else list(r.vertices)

    def disjoint(self, fr: Frame, j: int, s1: int, t1: int, s2: int, t2: int):
        key = ("disjoint", fr.n - 1, fr.local[j], s1, t1, s2, t2)
        r = self._run(
            key, lambda st: oracles.two_disjoint_paths(fr.sub, fr.local[j], s1, t1, s2, t2, self.budget, st)
        )
        return None if r is None else (list(r.first.vertices), list(r.second.vertices))

    def cycle(self, fr: Frame, faults: frozenset):
        """Any Hamiltonian cycle of subcube BH_{n-1} minus ``faults``."""
        key = ("cycle", fr.n - 1, faults)
        r = self._run(key, lambda st: oracles.ham_cycle(fr.sub, faults, self.budget, st))
        return None if r is None else list(r.vertices)

    def minus(self, fr: Frame, j: int, v: int, s: int, t: int):
        key = ("minus", fr.n - 1, fr.local[j], v, s, t)
        r = self._run(key, lambda st: oracles.ham_path_minus_vertex(fr.sub, v, s, t, fr.local[j], self.budget, st))
        return None if r is None else list(r.vertices)


def _guarded(ctx: Context, entry: TraceEntry, fn):
    """Run an oracle, turning an exhausted budget into a failed witness."""
    try:
        return fn()
    except SearchBudgetExceeded as exc:
        entry.add_event("budget", str(exc))
        return None


# --- bound bookkeeping ---------------------------------------------------------

BOUNDS = {
    "lace": lambda m: 2 * m - 2,
    "edge": lambda m: 4 * m - 5,
    "disjoint": lambda m: 2 * m - 3,
    "hyper": lambda m: 0,
}


def note_bound(entry: TraceEntry, fr: Frame, j: int, kind: str) -> None:
    m = fr.n - 1
    bound = BOUNDS[kind](m)
    have = len(fr.local[j])
    if have > bound:
        entry.add_event("over-bound", f"{kind} in role {j}: {have} faults > {bound}")


# --- single ring ------------------------------------------------------------------


@dataclass
class Ring:
    ports: dict  # name -> (role, local)
    paths: dict  # role -> local path from entry to exit
    kinds: dict  # role -> 'lace' | 'edge'
    r_edges: list  # (role, x, y)
    cross: list  # ((role, x), (role, y))


def _evens_with_up(fr: Frame, j: int) -> list[int]:
    return [x for x in range(0, fr.sub.order, 2) if fr.up(j, x)]


def single_ring(ctx: Context, entry: TraceEntry, fr: Frame, a0: int, b0: int, policies=("lace",) * 3) -> Ring | None:
    """Close a role-0 path b0 .. a0 (b0 odd, a0 even) into a ring.

    ``policies[j-1]`` says how role j is crossed: 'lace' uses a laceable
    path between the ports, 'edge' makes the ports adjacent inside the
    subcube and removes that edge from a cycle through it.
    """
    start = ctx.calls
    exits3 = fr.down(0, b0)
    if not exits3 or not fr.up(0, a0):
        return None

    def role_exits(j, b):
        if policies[j - 1] == "edge":
            return [x for x in fr.sub_neighbors(j, b) if x % 2 == 0 and fr.up(j, x)]
        return _evens_with_up(fr, j)[:LACE_EXITS]

    def role_path(j, b, a):
        if policies[j - 1] == "edge":
            return _guarded(ctx, entry, lambda: ctx.through(fr, j, b, a))
        return _guarded(ctx, entry, lambda: ctx.lace(fr, j, b, a))

    # when role 3 must be crossed by an edge, its entry b3 is fixed by a3,
    # which restricts the exits of role 2
    if policies[2] == "edge":
        role3_entries = {}
        for a3 in exits3:
            for b3 in fr.sub_neighbors(3, a3):
                if b3 % 2 == 1 and fr.down(3, b3):
                    role3_entries.setdefault(b3, []).append(a3)
    for b1 in fr.up(0, a0):
        for a1 in role_exits(1, b1):
            if ctx.calls - start > RING_CALL_CAP:
                return None
            h1 = role_path(1, b1, a1)
            if h1 is None:
                continue
            for b2 in fr.up(1, a1):
                if policies[2] == "edge":
                    ex2 = sorted({a2 for b3 in role3_entries for a2 in fr.down(3, b3)})
                    if policies[1] == "edge":
                        ex2 = [a for a in ex2 if a in fr.sub_neighbors(2, b2)]
                else:
                    ex2 = role_exits(2, b2)
                for a2 in ex2:
                    if ctx.calls - start > RING_CALL_CAP:
                        return None
                    h2 = role_path(2, b2, a2)
                    if h2 is None:
                        continue
                    for b3 in fr.up(2, a2):
                        if policies[2] == "edge":
                            cands3 = [a3 for a3 in exits3 if b3 in fr.sub_neighbors(3, a3)]
                        else:
                            cands3 = exits3
                        for a3 in cands3:
                            h3 = role_path(3, b3, a3)
                            if h3 is None:
                                continue
                            ports = {"a0": (0, a0), "b0": (0, b0), "b1": (1, b1), "a1": (1, a1),
                                     "b2": (2, b2), "a2": (2, a2), "b3": (3, b3), "a3": (3, a3)}
                            kinds = {j: policies[j - 1] for j in (1, 2, 3)}
                            r_edges = [(j, ports[f"b{j}"][1], ports[f"a{j}"][1]) for j in (1, 2, 3) if kinds[j] == "edge"]
                            cross = [((0, a0), (1, b1)), ((1, a1), (2, b2)), ((2, a2), (3, b3)), ((3, a3), (0, b0))]
                            for j in (1, 2, 3):
                                note_bound(entry, fr, j, kinds[j])
                            return Ring(ports, {1: h1, 2: h2, 3: h3}, kinds, r_edges, cross)
    return None


def ring_segments(ring: Ring, h0: list[int]) -> list[tuple[int, list[int]]]:
    """<a0, b1, H1, a1, b2, H2, a2, b3, H3, a3, b0, H0> as role segments.

    ``h0`` runs from b0 to a0.
    """
    return [(1, ring.paths[1]), (2, ring.paths[2]), (3, ring.paths[3]), (0, h0)]


# --- double ring ----------------------------------------------------------------------


@dataclass
class DoubleRing:
    ports: dict
    chain_a: dict  # role -> path b_j .. a_j
    chain_b: dict  # role -> path d_j .. c_j (roles 1, 2 only when hyper)
    hyper_path: list | None  # b3 .. d3 avoiding x3
    x3: int | None
    cross: list


def _exit_pairs(fr: Frame, j: int) -> list[tuple[int, int]]:
    evens = _evens_with_up(fr, j)
    out = []
    for a, c in itertools.permutations(evens, 2):
        out.append((a, c))
    # spread the choices: pairs far apart in the ordering first tend to work
    out.sort(key=lambda p: (abs(p[0] - p[1]) < 4, p))
    return out[:PAIR_EXITS]


def double_ring(
    ctx: Context, entry: TraceEntry, fr: Frame, ua: int, da: int, ub: int, db: int, allow_hyper: bool = False,
    hyper_only: bool = False,
) -> DoubleRing | None:
    """Two chains UA -> .. -> a3 -> DA and UB -> .. -> c3 -> DB.

    UA, UB are even role-0 vertices (possibly equal), DA, DB odd ones.  In
    the hyper variant one role-3 vertex x3 adjacent to both DA and DB takes
    the place of a3 = c3 and role 3 is crossed by a path b3 .. d3 of the
    subcube minus x3.
    """
    start = ctx.calls
    down_a, down_b = fr.down(0, da), fr.down(0, db)
    if not down_a or not down_b:
        return None

    def over():
        return ctx.calls - start > RING_CALL_CAP

    for b1 in fr.up(0, ua):
        for d1 in fr.up(0, ub):
            if d1 == b1:
                continue
            for a1, c1 in _exit_pairs(fr, 1):
                if over():
                    return None
                p1 = _guarded(ctx, entry, lambda: ctx.disjoint(fr, 1, b1, a1, d1, c1))
                if p1 is None:
                    continue
                for b2, d2 in itertools.product(fr.up(1, a1), fr.up(1, c1)):
                    if b2 == d2:
                        continue
                    for a2, c2 in _exit_pairs(fr, 2):
                        if over():
                            return None
                        p2 = _guarded(ctx, entry, lambda: ctx.disjoint(fr, 2, b2, a2, d2, c2))
                        if p2 is None:
                            continue
                        for b3, d3 in itertools.product(fr.up(2, a2), fr.up(2, c2)):
                            if b3 == d3:
                                continue
                            res = _role3(ctx, entry, fr, b3, d3, down_a, down_b, allow_hyper, hyper_only)
                            if res is None:
                                continue
                            ports = {"b1": (1, b1), "a1": (1, a1), "d1": (1, d1), "c1": (1, c1),
                                     "b2": (2, b2), "a2": (2, a2), "d2": (2, d2), "c2": (2, c2),
                                     "b3": (3, b3), "d3": (3, d3)}
                            cross = [((0, ua), (1, b1)), ((0, ub), (1, d1)), ((1, a1), (2, b2)),
                                     ((1, c1), (2, d2)), ((2, a2), (3, b3)), ((2, c2), (3, d3))]
                            kind, payload = res
                            if kind == "pair":
                                a3, c3, (h30, h31) = payload
                                ports.update({"a3": (3, a3), "c3": (3, c3)})
                                cross += [((3, a3), (0, da)), ((3, c3), (0, db))]
                                for j in (1, 2, 3):
                                    note_bound(entry, fr, j, "disjoint")
                                return DoubleRing(ports, {1: p1[0], 2: p2[0], 3: h30}, {1: p1[1], 2: p2[1], 3: h31},
                                                  None, None, cross)
                            x3, h3 = payload
                            ports.update({"x3": (3, x3)})
                            cross += [((3, x3), (0, da)), ((3, x3), (0, db))]
                            for j in (1, 2):
                                note_bound(entry, fr, j, "disjoint")
                            note_bound(entry, fr, 3, "hyper")
                            return DoubleRing(ports, {1: p1[0], 2: p2[0]}, {1: p1[1], 2: p2[1]}, h3, x3, cross)
    return None


def _role3(ctx, entry, fr, b3, d3, down_a, down_b, allow_hyper, hyper_only):
    if not hyper_only:
        for a3 in down_a:
            for c3 in down_b:
                if a3 == c3:
                    continue
                p3 = _guarded(ctx, entry, lambda: ctx.disjoint(fr, 3, b3, a3, d3, c3))
                if p3 is not None:
                    return "pair", (a3, c3, p3)
    if allow_hyper or hyper_only:
        for x3 in sorted(set(down_a) & set(down_b)):
            h3 = _guarded(ctx, entry, lambda: ctx.minus(fr, 3, x3, b3, d3))
            if h3 is not None:
                return "hyper", (x3, h3)
    return None


def chain_a(dr: DoubleRing) -> list[tuple[int, list[int]]]:
    """Role segments of chain A: b1 .. a1, b2 .. a2, b3 .. a3."""
    return [(j, dr.chain_a[j]) for j in (1, 2, 3)]


def chain_b(dr: DoubleRing) -> list[tuple[int, list[int]]]:
    """Role segments of chain B: d1 .. c1, d2 .. c2, d3 .. c3."""
    return [(j, dr.chain_b[j]) for j in (1, 2, 3)]


def reverse(segs: list[tuple[int, list[int]]]) -> list[tuple[int, list[int]]]:
    return [(j, list(reversed(p))) for j, p in reversed(segs)]


# --- stitching ----------------------------------------------------------------------------


def stitch(fr: Frame, segments: list[tuple[int, list[int]]]) -> list[int]:
    """Join role segments into one cycle and map it back to level coordinates.

    Every segment must stay inside its role on nonfaulty edges, consecutive
    segments (cyclically) must be joined by nonfaulty cross edges, and the
    segments must cover each vertex exactly once.
    """
    seq = []
    for j, path in segments:
        if not path:
            raise StitchError("empty-segment", f"role {j}")
        for k, x in enumerate(path):
            if k and not (fr.sub_adj[j][path[k - 1]] >> x) & 1:
                raise StitchError("broken-segment", f"role {j}: {path[k - 1]}-{x} is not a live subcube edge")
        seq.append((j, path))
    cycle = [fr.g(j, x) for j, path in seq for x in path]
    if len(set(cycle)) != len(cycle):
        raise StitchError("overlap", "a vertex is covered twice")
    if len(cycle) != fr.t.order:
        raise StitchError("coverage", f"{len(cycle)} of {fr.t.order} vertices covered")
    for k, (j, path) in enumerate(seq):
        jn, nxt = seq[(k + 1) % len(seq)]
        u, v = fr.g(j, path[-1]), fr.g(jn, nxt[0])
        if j == jn:
            raise StitchError("junction", f"consecutive segments both in role {j}")
        if (u & 1) == (v & 1):
            raise StitchError("parity", f"junction {u}-{v} joins one partite class")
        if (jn, nxt[0]) not in fr.cross_targets(j, path[-1]):
            raise StitchError("junction", f"{u}-{v} is not a nonfaulty cross edge")
    return [fr.inv[v] for v in cycle]


# --- plans ------------------------------------------------------------------------------


@dataclass
class Plan:
    """Role segments of a finished cycle plus the witnesses that built it."""

    segments: list
    named: dict = field(default_factory=dict)  # name -> (role, local) or ((role, x), (role, y))
    r_edges: list = field(default_factory=list)  # (role, x, y)
    pivots: list = field(default_factory=list)  # (role, x)
    isolated: list = field(default_factory=list)
    variant: str | None = None
    subtrace: list = field(default_factory=list)
    label: str | None = None  # set when the handler picks its own sub-label


def cycle_path(cyc: list[int], x: int, y: int) -> list[int]:
    """The cycle ``cyc`` without its edge xy, as a path y .. x."""
    k = len(cyc)
    i = cyc.index(y)
    if cyc[(i + 1) % k] == x:
        return [cyc[(i - s) % k] for s in range(k)]
    if cyc[(i - 1) % k] == x:
        return [cyc[(i + s) % k] for s in range(k)]
    raise ValueError(f"{x}-{y} is not an edge of the cycle")


def on_cycle(cyc: list[int], x: int, y: int) -> bool:
    k = len(cyc)
    i = cyc.index(x)
    return y in (cyc[(i + 1) % k], cyc[(i - 1) % k])


def ring_plan(ring: Ring, h0: list[int], **named) -> Plan:
    plan = Plan(ring_segments(ring, h0), r_edges=[(0, h0[-1], h0[0])] + ring.r_edges)
    plan.named.update({k: v for k, v in ring.ports.items()})
    plan.named.update(named)
    return plan


def double_segments(dr: DoubleRing, p: list[int], q: list[int]) -> list:
    """UA -> chain A -> DA -> p -> UB -> chain B -> DB -> q -> UA.

    p runs DA .. UB and q runs DB .. UA.  In the hyper variant the cycle
    becomes UA -> chain A -> H3 -> reversed chain B -> UB -> reversed p
    -> DA -> x3 -> DB -> q.
    """
    if dr.x3 is None:
        return chain_a(dr) + [(0, p)] + chain_b(dr) + [(0, q)]
    return [
        (1, dr.chain_a[1]),
        (2, dr.chain_a[2]),
        (3, dr.hyper_path),
        (2, list(reversed(dr.chain_b[2]))),
        (1, list(reversed(dr.chain_b[1]))),
        (0, list(reversed(p))),
        (3, [dr.x3]),
        (0, q),
    ]


def crossed_segments(dr: DoubleRing, p: list[int], q: list[int]) -> list:
    """UA -> chain A -> DA -> p -> DB -> reversed chain B -> UB -> q -> UA.

    p runs DA .. DB and q runs UB .. UA.
    """
    if dr.x3 is not None:
        raise ValueError("the crossed pattern has no hyper variant")
    return chain_a(dr) + [(0, p)] + reverse(chain_b(dr)) + [(0, q)]


def double_plan(dr: DoubleRing, segments: list, **named) -> Plan:
    plan = Plan(segments)
    plan.named.update(dr.ports)
    plan.named.update(named)
    if dr.x3 is not None:
        plan.variant = "hyper"
    return plan


@dataclass
class Redecomposed:
    """A case that re-split on another dimension and handed over."""

    cycle: list  # level coordinates
    entries: list  # trace entries of the re-split, same depth
    named: dict = field(default_factory=dict)
    pivots: list = field(default_factory=list)  # (role, x)
    isolated: list = field(default_factory=list)
