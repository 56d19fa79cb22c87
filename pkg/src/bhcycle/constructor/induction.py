"""The case tree for n >= 4, recursing into BH_{n-1} subcubes.

Handlers take the recursion depth as a fourth argument so that cycles of
the role-0 subcube can come from the construction itself.
"""

from __future__ import annotations

import itertools

from ..faults import f4_cycles_from_masks, surviving_masks
from ..topology import Topology, canonical
from .frame import Frame, FrameKey
from .lemma8 import faulty_r_edges, oriented
from .rings import (
    Context,
    Plan,
    Redecomposed,
    _guarded,
    crossed_segments,
    cycle_path,
    double_plan,
    double_ring,
    on_cycle,
    ring_plan,
    single_ring,
)
from .trace import Impasse, TraceEntry

RING_EDGES = 6
# the small-count role is looked for in this order; ties go to the earlier one
J_ORDER = (2, 3, 1)
POLICIES = {2: ("edge", "lace", "edge"), 3: ("edge", "edge", "lace")}
LACE_PAIRS = 4


def _depth(fn):
    fn.wants_depth = True
    return fn


def j_rule(fr: Frame) -> int:
    counts = fr.counts()
    return min(J_ORDER, key=lambda j: (counts[j], J_ORDER.index(j)))


def _j_label(base: str, j: int) -> str:
    return f"{base}(1)" if j == 2 else f"{base}(2)"


def role0_cycle(ctx: Context, entry: TraceEntry, fr: Frame, faults: frozenset, depth: int, through=None):
    """A Hamiltonian cycle of role 0 minus ``faults`` as (cycle, sub-trace).

    Uses the construction on BH_{n-1} when the subcube meets its
    preconditions, else exact search (through the edge ``through`` when
    given).
    """
    res = ctx.recurse(fr.n - 1, faults, depth + 1)
    if res is not None:
        cyc, sub = res
        if through is None or on_cycle(cyc, *through):
            return cyc, sub
        entry.add_event("recurse-oracle", "the recursive cycle of role 0 misses the required edge; searched instead")
    else:
        entry.add_event("recurse-oracle", f"role 0 minus {len(faults)} faults misses the BH_{fr.n - 1} preconditions; searched instead")
    if through is not None:
        p = _guarded(ctx, entry, lambda: ctx.through(fr, 0, through[0], through[1], faults))
    else:
        p = _guarded(ctx, entry, lambda: ctx.cycle(fr, faults))
    return None if p is None else (p, [])


def cycle_r_edges(fr: Frame, cyc: list[int]) -> list[tuple[int, int]]:
    """Nonfaulty edges of a role-0 cycle whose even end has an up edge and odd end a down edge."""
    out = []
    k = len(cyc)
    for i in range(k):
        e = canonical(cyc[i], cyc[(i + 1) % k])
        if e in fr.local[0]:
            continue
        a, b = oriented(e)
        if fr.up(0, a) and fr.down(0, b):
            out.append((a, b))
    out.sort(key=lambda e: (-len(fr.up(0, e[0])) - len(fr.down(0, e[1])), e))
    return out


def _edge(a, b):
    return ((0, a), (0, b))


# --- Case 1 ----------------------------------------------------------------------


@_depth
def faulty_r_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """f0 a faulty r-edge of role 0; C0 through f0, or through an r-edge on C0."""
    for a0, b0 in faulty_r_edges(fr, 0):
        f0 = canonical(a0, b0)
        res = role0_cycle(ctx, entry, fr, fr.local[0] - {f0}, depth)
        if res is None:
            continue
        cyc, sub = res
        if on_cycle(cyc, a0, b0):
            cands = [(a0, b0)]
        else:
            cands = cycle_r_edges(fr, cyc)[:RING_EDGES]
        for a, b in cands:
            h0 = cycle_path(cyc, a, b)
            ring = single_ring(ctx, entry, fr, a, b)
            if ring is not None:
                plan = ring_plan(ring, h0, f0=_edge(a0, b0))
                if (a, b) != (a0, b0):
                    plan.named["e1"] = _edge(a, b)
                    plan.variant = "f0 off C0"
                    plan.r_edges.append((0, a0, b0))
                plan.subtrace = sub
                return plan
    return None


@_depth
def live_r_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """C0 of role 0, an r-edge e0 on it, and ports e1 / e3 or e1 / e2 per the j rule."""
    j = j_rule(fr)
    if j == 1:
        return None
    res = role0_cycle(ctx, entry, fr, fr.local[0], depth)
    if res is None:
        return None
    cyc, sub = res
    for a0, b0 in cycle_r_edges(fr, cyc)[:RING_EDGES]:
        h0 = cycle_path(cyc, a0, b0)
        ring = single_ring(ctx, entry, fr, a0, b0, POLICIES[j])
        if ring is not None:
            plan = ring_plan(ring, h0, e0=_edge(a0, b0))
            plan.variant = f"j={j}"
            plan.label = _j_label("T/1.1.2", j)
            plan.subtrace = sub
            return plan
    return None


@_depth
def lace_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """Laceable paths in all four roles, role 0 included."""
    evens = [x for x in range(0, fr.sub.order, 2) if fr.up(0, x)][:LACE_PAIRS]
    odds = [x for x in range(1, fr.sub.order, 2) if fr.down(0, x)][:LACE_PAIRS]
    for a0, b0 in itertools.product(evens, odds):
        h0 = _guarded(ctx, entry, lambda: ctx.lace(fr, 0, b0, a0))
        if h0 is None:
            continue
        ring = single_ring(ctx, entry, fr, a0, b0)
        if ring is not None:
            plan = ring_plan(ring, h0)
            plan.r_edges = []
            return plan
    return None


@_depth
def f4_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """An f4-cycle in role 0: route through a pair vertex a0 and a faulty r-edge at it."""
    for c in fr.f4(0):
        for a0 in c.pair:
            if a0 % 2 or not fr.up(0, a0):
                continue
            for x, b0 in faulty_r_edges(fr, 0):
                if x != a0:
                    continue
                f0 = canonical(a0, b0)
                res = role0_cycle(ctx, entry, fr, fr.local[0] - {f0}, depth, through=(a0, b0))
                if res is None:
                    continue
                cyc, sub = res
                h0 = cycle_path(cyc, a0, b0)
                ring = single_ring(ctx, entry, fr, a0, b0)
                if ring is not None:
                    other = c.pair[1] if c.pair[0] == a0 else c.pair[0]
                    plan = ring_plan(ring, h0, f0=_edge(a0, b0), c0=(0, other))
                    plan.subtrace = sub
                    return plan
    return None


# --- Case 2 -----------------------------------------------------------------------------


def _has_f4(fr: Frame, faults: frozenset) -> bool:
    return bool(f4_cycles_from_masks(surviving_masks(fr.sub, faults)))


@_depth
def pivot_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """One pivot u: a faulty r-edge f0 = ub0 put back, then the j rule."""
    j = j_rule(fr)
    if j == 1:
        return None
    for u in fr.pivots(0):
        if u % 2 or not fr.up(0, u):
            continue
        for x, b0 in faulty_r_edges(fr, 0):
            if x != u:
                continue
            faults = fr.local[0] - {canonical(u, b0)}
            if _has_f4(fr, faults):
                continue
            res = role0_cycle(ctx, entry, fr, faults, depth, through=(u, b0))
            if res is None:
                continue
            cyc, sub = res
            h0 = cycle_path(cyc, u, b0)
            ring = single_ring(ctx, entry, fr, u, b0, POLICIES[j])
            if ring is not None:
                plan = ring_plan(ring, h0, f0=_edge(u, b0), u=(0, u))
                plan.variant = f"j={j}"
                plan.pivots = [(0, u)]
                plan.label = _j_label("T/2.1", j)
                plan.subtrace = sub
                return plan
    return None


@_depth
def pivot_pair_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """Pivots u, v of role 0 joined by the faulty edge f0 = uv."""
    pivots = fr.pivots(0)
    for u in pivots:
        if u % 2 or not fr.up(0, u):
            continue
        for v in pivots:
            f0 = canonical(u, v)
            if f0 not in fr.local[0] or not fr.has_cross(0, v):
                continue
            res = role0_cycle(ctx, entry, fr, fr.local[0] - {f0}, depth, through=(u, v))
            if res is None:
                continue
            cyc, sub = res
            h0 = cycle_path(cyc, u, v)
            ring = single_ring(ctx, entry, fr, u, v)
            if ring is not None:
                plan = ring_plan(ring, h0, f0=_edge(u, v))
                plan.pivots = [(0, u), (0, v)]
                plan.subtrace = sub
                return plan
    return None


# --- Case 3 -------------------------------------------------------------------------------


@_depth
def isolated_ring(ctx: Context, entry: TraceEntry, fr: Frame, depth: int) -> Plan | None:
    """Isolated u with cross edges ub1, ud1 and faulty r-edges f1 = ub0, f2 = ud0.

    C0 passes through f1 and f2; the chains run u -> b1 .. a3 -> d0 and
    u -> d1 .. c3 -> b0, joined by H0 = C0 - u.
    """
    for u in fr.isolated(0):
        if u % 2 or len(fr.up(0, u)) < 2:
            continue
        rs = [e for e in faulty_r_edges(fr, 0) if e[0] == u]
        for f1, f2 in itertools.permutations(rs, 2):
            b0, d0 = f1[1], f2[1]
            faults = fr.local[0] - {canonical(*f1), canonical(*f2)}
            res = role0_cycle(ctx, entry, fr, faults, depth, through=(u, b0))
            if res is None:
                continue
            cyc, sub = res
            p = cycle_path(cyc, u, b0)  # b0 .. d0, u
            if p[-2] != d0:
                continue
            h0 = list(reversed(p[:-1]))
            dr = double_ring(ctx, entry, fr, u, d0, u, b0)
            if dr is None:
                continue
            plan = double_plan(dr, crossed_segments(dr, h0, [u]), u=(0, u), b0=(0, b0), d0=(0, d0),
                               f1=_edge(u, b0), f2=_edge(u, d0))
            plan.r_edges = [(0, *f1), (0, *f2)]
            plan.isolated = [(0, u)]
            plan.subtrace = sub
            return plan
    return None


# --- re-decomposition -----------------------------------------------------------------------


def _dim_counts(t: Topology, faults: frozenset) -> list[int]:
    counts = [0] * t.n
    for e in faults:
        counts[t.edge_dim[e]] += 1
    return counts


def _faulty_at(t: Topology, faults: frozenset, v: int, dim: int) -> int:
    return sum(1 for w, d in t.neighbors[v] if d == dim and canonical(v, w) in faults)


def _shared_dims(t: Topology, faults: frozenset, u: int, v: int, skip) -> list[int]:
    """Dimensions where u and v both lose both edges, carrying at least 4 faults."""
    counts = _dim_counts(t, faults)
    dims = [i for i in range(t.n) if i not in skip and counts[i] >= 4
            and _faulty_at(t, faults, u, i) == 2 and _faulty_at(t, faults, v, i) == 2]
    return sorted(dims, key=lambda i: (-counts[i], i))


def _heavy_dims(t: Topology, faults: frozenset, skip) -> list[int]:
    counts = _dim_counts(t, faults)
    return sorted((i for i in range(t.n) if i not in skip and counts[i] >= 4), key=lambda i: (-counts[i], i))


def _redo(ctx, fr, depth, tried, dims, reason, pivots=(), isolated=()):
    if not dims:
        raise Impasse(reason)
    split = dims[0]
    cycle, entries = ctx.redispatch(fr.t, fr.faults, depth, split, tried + (fr.key.split,))
    named = {"to_split": split}
    return Redecomposed(cycle, entries, named, list(pivots), list(isolated))


def _degenerate(fr: Frame):
    piv = [(j, x) for j in range(4) for x in fr.pivots(j)]
    iso = [(j, x) for j in range(4) for x in fr.isolated(j)]
    return piv, iso


def redec_pivots(tried):
    @_depth
    def handler(ctx, entry, fr, depth):
        piv, _ = _degenerate(fr)
        (j1, x1), (j2, x2) = piv[:2]
        u, v = fr.to_level(j1, x1), fr.to_level(j2, x2)
        dims = _shared_dims(fr.t, fr.faults, u, v, tried + (fr.key.split,))
        return _redo(ctx, fr, depth, tried, dims, "no dimension where both pivots lose both edges", pivots=piv[:2])

    return handler


def redec_isolated(tried):
    @_depth
    def handler(ctx, entry, fr, depth):
        _, iso = _degenerate(fr)
        dims = _heavy_dims(fr.t, fr.faults, tried + (fr.key.split,))
        return _redo(ctx, fr, depth, tried, dims, "no other dimension with 4 faults", isolated=iso[:1])

    return handler


def redec_pair(tried):
    @_depth
    def handler(ctx, entry, fr, depth):
        piv, iso = _degenerate(fr)
        pair = (iso + piv)[:2]
        (j1, x1), (j2, x2) = pair
        u, v = fr.to_level(j1, x1), fr.to_level(j2, x2)
        dims = _shared_dims(fr.t, fr.faults, u, v, tried + (fr.key.split,))
        return _redo(ctx, fr, depth, tried, dims, "no dimension where both vertices lose both edges",
                     pivots=[p for p in pair if p in piv], isolated=[p for p in pair if p in iso])

    return handler


# --- dispatch -------------------------------------------------------------------------------------


def _even_pivot(fr: Frame) -> bool:
    return any(x % 2 == 0 for x in fr.pivots(0))


def _j_ok(fr: Frame) -> bool:
    return j_rule(fr) != 1


def _pivot_j(fr: Frame) -> bool:
    return _even_pivot(fr) and _j_ok(fr)


def _even_isolated(fr: Frame) -> bool:
    return any(x % 2 == 0 for x in fr.isolated(0))


def _even_f4_pair(fr: Frame) -> bool:
    return any(x % 2 == 0 for c in fr.f4(0) for x in c.pair)


def classify(fr: Frame, tried=()) -> tuple[list[tuple], int, str]:
    """Labels with handlers and applicability tests, the role-0 subcube, and the dictated label."""
    t, n = fr.t, fr.n
    piv, iso = _degenerate(fr)
    counts = fr.counts()
    if iso:
        if len(iso) == 1 and not piv:
            s = iso[0][0]
            others = [c for i, c in enumerate(_dim_counts(t, fr.faults)) if i != fr.key.split]
            if all(c <= 3 for c in others):
                return [("T/3.1", isolated_ring, _even_isolated, False)], s, "T/3.1"
            return [("T/3.1-redec", redec_isolated(tried), None, True)], s, "T/3.1-redec"
        return [("T/3.2", redec_pair(tried), None, True)], iso[0][0], "T/3.2"
    if piv:
        if len(piv) == 1:
            s = piv[0][0]
            label = _j_label("T/2.1", j_rule(fr.__class__(t, fr.faults, FrameKey(fr.key.split, s, False))))
            return [(label, pivot_ring, _pivot_j, False)], s, label
        (j1, u), (j2, v) = piv[:2]
        if j1 == j2 and canonical(u, v) in fr.local[j1]:
            return [("T/2.2", pivot_pair_ring, _even_pivot, False)], j1, "T/2.2"
        return [("T/2.2-redec", redec_pivots(tried), None, True)], j1, "T/2.2-redec"
    f4 = [j for j in range(4) if fr.f4(j)]
    if f4:
        return [("T/1.2", f4_ring, _even_f4_pair, False)], f4[0], "T/1.2"
    s = max(range(4), key=lambda j: (counts[j], -j))
    if counts[s] >= 5 * n - 11:
        return [("T/1.1.1", faulty_r_ring, None, False)], s, "T/1.1.1"
    label = _j_label("T/1.1.2", j_rule(fr.__class__(t, fr.faults, FrameKey(fr.key.split, s, False))))
    return [(label, live_r_ring, _j_ok, False), ("T/1.1.2(nonr)", lace_ring, None, False)], s, label


def tries(t: Topology, faults: frozenset, split: int | None = None, tried: tuple = ()):
    counts = _dim_counts(t, faults)
    splits = sorted((i for i in range(t.n) if i not in tried), key=lambda i: (-counts[i], i))
    if split is not None:
        splits = [split] + [i for i in splits if i != split]
    out = []
    dictated = None
    for rank, sp in enumerate(splits):
        fr0 = Frame(t, faults, FrameKey(sp, 0, False))
        members, s, label = classify(fr0, tried)
        if dictated is None:
            dictated = label
        for name, handler, applies, single in members:
            for reflect in ((False,) if single else (False, True)):
                out.append((name, FrameKey(sp, s, reflect), handler, rank == 0, applies))
        if rank == 0:
            for name, handler in (("T/1.1.1", faulty_r_ring), ("T/1.1.2(nonr)", lace_ring)):
                for rot in range(4):
                    for reflect in (False, True):
                        out.append((name, FrameKey(sp, rot, reflect), handler, False, None))
        if rank >= 1:
            break
    return dictated, out
