"""The BH_3 case tree.

Every handler works in a frame whose role 0 is the subcube the case is
about and returns a Plan, or None when no witness choice works.  Handlers
assume the vertex called a0 is even; the reflected frame covers the other
parity.
"""

from __future__ import annotations

import itertools

from .frame import Frame
from .rings import (
    Context,
    Plan,
    _guarded,
    crossed_segments,
    double_plan,
    double_ring,
    double_segments,
    on_cycle,
    ring_plan,
    single_ring,
)
from .trace import TraceEntry

# role-0 r-edges tried by the plain ring before giving up
RING_EDGES = 8


def oriented(e: tuple[int, int]) -> tuple[int, int]:
    """(even end, odd end) of a subcube edge."""
    x, y = e
    return (x, y) if x % 2 == 0 else (y, x)


def live_r_edges(fr: Frame, j: int) -> list[tuple[int, int]]:
    out = []
    for x in range(0, fr.sub.order, 2):
        if not fr.up(j, x):
            continue
        for y in fr.sub_neighbors(j, x):
            if fr.has_cross(j, y):
                out.append((x, y))
    # ends with two cross edges first: more room for the ring
    out.sort(key=lambda e: (-len(fr.cross_targets(j, e[0])) - len(fr.cross_targets(j, e[1])), e))
    return out


def faulty_r_edges(fr: Frame, j: int) -> list[tuple[int, int]]:
    return [oriented(e) for e in sorted(fr.local[j]) if fr.is_r(j, *e)]


# --- Case 1 --------------------------------------------------------------------


def ring_on_live_edge(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """An r-edge e0 of role 0, a cycle C0 through it, and a laceable ring."""
    for a0, b0 in live_r_edges(fr, 0)[:RING_EDGES]:
        h0 = _guarded(ctx, entry, lambda: ctx.through(fr, 0, b0, a0))
        if h0 is None:
            continue
        ring = single_ring(ctx, entry, fr, a0, b0)
        if ring is not None:
            return ring_plan(ring, h0, e0=((0, a0), (0, b0)))
    return None


def ring_on_faulty_edge(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """A faulty r-edge f0 of role 0 put back for a cycle C0 through it."""
    for a0, b0 in faulty_r_edges(fr, 0):
        faults = fr.local[0] - {tuple(sorted((a0, b0)))}
        h0 = _guarded(ctx, entry, lambda: ctx.through(fr, 0, b0, a0, faults))
        if h0 is None:
            continue
        ring = single_ring(ctx, entry, fr, a0, b0)
        if ring is not None:
            return ring_plan(ring, h0, f0=((0, a0), (0, b0)))
    return None


def rerouted(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """f0 = a0b0 with b0 cut off from both cross edges.

    C0 = <a0, H00, e0, c0, d0, H01, b0, a0> where c0 is a neighbour of b0
    off C0.  Either d0 has a cross edge and a single ring enters there, or
    an r-edge f g on <b0, c0, d0, H01, b0> feeds a double ring.
    """
    for f0 in sorted(fr.local[0]):
        a0, b0 = oriented(f0)
        if not fr.has_cross(0, a0) or fr.has_cross(0, b0):
            continue
        p = _guarded(ctx, entry, lambda: ctx.through(fr, 0, a0, b0, fr.local[0] - {f0}))
        if p is None:
            continue
        for c0 in fr.sub_neighbors(0, b0):
            if c0 == p[-2]:
                continue
            k = p.index(c0)
            e0, d0 = p[k - 1], p[k + 1]
            named = {"f0": ((0, a0), (0, b0)), "c0": (0, c0), "d0": (0, d0), "e0": (0, e0)}
            if fr.has_cross(0, d0):
                h0 = p[k + 1 :] + [c0] + p[k - 1 :: -1]
                ring = single_ring(ctx, entry, fr, a0, d0)
                if ring is not None:
                    plan = ring_plan(ring, h0, **named)
                    plan.r_edges = [e for e in plan.r_edges if e[0] != 0]
                    plan.variant = "(1)"
                    return plan
            if not fr.has_cross(0, e0):
                continue
            for i in range(k + 1, len(p) - 1):
                fv, gv = p[i], p[i + 1]
                if fv % 2 == 0 or not fr.is_r(0, fv, gv):
                    continue
                dr = double_ring(ctx, entry, fr, a0, fv, gv, e0)
                if dr is None:
                    continue
                seg_p = p[i:k:-1] + [c0] + p[:i:-1]
                seg_q = p[k - 1 :: -1]
                plan = double_plan(dr, double_segments(dr, seg_p, seg_q), g0=(0, gv), **named)
                plan.named["f0*"] = (0, fv)
                plan.r_edges = [(0, gv, fv)]
                plan.variant = "(2)"
                return plan
    return None


def two_r_edges(ctx: Context, entry: TraceEntry, fr: Frame, want: str) -> Plan | None:
    """Two faulty r-edges f1, f2 of role 0 and a cycle C0 through f1.

    ``want`` picks the shape: 'adjacent', 'nonadjacent' or 'off' (f2 not on
    C0, closed by a single ring as when f0 is an r-edge).
    """
    rs = faulty_r_edges(fr, 0)
    for f1, f2 in itertools.permutations(rs, 2):
        faults = fr.local[0] - {tuple(sorted(f1)), tuple(sorted(f2))}
        shared = set(f1) & set(f2)
        if want == "adjacent":
            if not shared:
                continue
            a0 = shared.pop()
            if a0 % 2:
                continue
            b0 = f1[1]
        else:
            if shared:
                if want == "nonadjacent":
                    continue
            a0, b0 = f1
        p = _guarded(ctx, entry, lambda: ctx.through(fr, 0, b0, a0, faults))
        if p is None:
            continue
        cyc = [a0] + p[:-1]
        f2_on = on_cycle(cyc, *f2)
        named = {"f1": ((0, f1[0]), (0, f1[1])), "f2": ((0, f2[0]), (0, f2[1]))}
        if want == "off":
            if f2_on:
                continue
            ring = single_ring(ctx, entry, fr, a0, b0)
            if ring is not None:
                plan = ring_plan(ring, p, **named)
                plan.r_edges = [(0, *f1), (0, *f2)] + plan.r_edges[1:]
                return plan
            continue
        if not f2_on:
            continue
        if want == "adjacent":
            plan = _adjacent(ctx, entry, fr, cyc, named)
        else:
            plan = _nonadjacent(ctx, entry, fr, cyc, f2, named)
        if plan is not None:
            plan.r_edges = [(0, *f1), (0, *f2)]
            return plan
    return None


def _adjacent(ctx, entry, fr, cyc, named):
    # cyc = a0, b0, ..., d0 with a0b0 and d0a0 the two faulty edges
    a0, b0 = cyc[0], cyc[1]
    for q0 in fr.sub_neighbors(0, a0):
        i = cyc.index(q0)
        t0 = cyc[i - 1]
        d0 = cyc[-1]
        dr = double_ring(ctx, entry, fr, a0, b0, t0, d0, allow_hyper=True)
        if dr is None:
            continue
        seg_p = cyc[1:i]
        seg_q = cyc[: i - 1 : -1] + [a0]
        plan = double_plan(dr, double_segments(dr, seg_p, seg_q), q0=(0, q0), t0=(0, t0), **named)
        return plan
    return None


def _nonadjacent(ctx, entry, fr, cyc, f2, named):
    a0, b0 = cyc[0], cyc[1]
    i = next(k for k in range(1, len(cyc) - 1) if {cyc[k], cyc[k + 1]} == set(f2))
    x, y = cyc[i], cyc[i + 1]
    if x % 2 == 0:
        # <a0, b0, H00, c0, d0, H01, a0>
        dr = double_ring(ctx, entry, fr, a0, b0, x, y, allow_hyper=True)
        if dr is None:
            return None
        seg_p = cyc[1 : i + 1]
        seg_q = cyc[i + 1 :] + [a0]
        return double_plan(dr, double_segments(dr, seg_p, seg_q), c0=(0, x), d0=(0, y), **named)
    # f2 is met odd end first: chain B runs backwards
    dr = double_ring(ctx, entry, fr, a0, b0, y, x)
    if dr is None:
        return None
    entry.add_event("gap", "f2 traversed odd end first on C0; chain B reversed")
    seg_p = cyc[1 : i + 1]
    seg_q = cyc[i + 1 :] + [a0]
    plan = double_plan(dr, crossed_segments(dr, seg_p, seg_q), c0=(0, y), d0=(0, x), **named)
    plan.variant = "crossed"
    return plan


# --- Case 2 ------------------------------------------------------------------------


def one_pivot_two_r(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """Pivot a0 with live edge e0 = a0d0 and faulty r-edges f0, f1 at a0."""
    for a0 in fr.pivots(0):
        if a0 % 2 or not fr.up(0, a0):
            continue
        (d0,) = fr.sub_neighbors(0, a0)
        rs = [e for e in faulty_r_edges(fr, 0) if a0 in e]
        for f0, f1 in itertools.combinations(rs, 2):
            faults = fr.local[0] - {tuple(sorted(f0)), tuple(sorted(f1))}
            p = _guarded(ctx, entry, lambda: ctx.through(fr, 0, a0, d0, faults))
            if p is None:
                continue
            b0 = p[1]
            h0 = p[1:] + [a0]
            ring = single_ring(ctx, entry, fr, a0, b0)
            if ring is not None:
                plan = ring_plan(ring, h0, e0=((0, a0), (0, d0)))
                used = f0 if b0 in f0 else f1
                plan.named["f0"] = ((0, used[0]), (0, used[1]))
                plan.r_edges = [(0, *f0), (0, *f1)] + plan.r_edges[1:]
                plan.pivots = [(0, a0)]
                return plan
    return None


def two_pivots(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """Pivots a0, b0 joined by the faulty edge f0; f1 another fault at a0."""
    pivots = fr.pivots(0)
    for a0 in pivots:
        if a0 % 2 or not fr.up(0, a0):
            continue
        for b0 in pivots:
            f0 = tuple(sorted((a0, b0)))
            if f0 not in fr.local[0] or not fr.has_cross(0, b0):
                continue
            (d0,) = fr.sub_neighbors(0, a0)
            for f1 in sorted(e for e in fr.local[0] if a0 in e and e != f0):
                faults = fr.local[0] - {f0, f1}
                p = _guarded(ctx, entry, lambda: ctx.through(fr, 0, a0, d0, faults))
                if p is None or p[1] != b0:
                    continue
                h0 = p[1:] + [a0]
                ring = single_ring(ctx, entry, fr, a0, b0)
                if ring is not None:
                    plan = ring_plan(ring, h0, e0=((0, a0), (0, d0)), f1=((0, f1[0]), (0, f1[1])))
                    plan.named["f0"] = ((0, a0), (0, b0))
                    plan.pivots = [(0, a0), (0, b0)]
                    return plan
    return None


def pivot_r_edge(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """Pivot a0 and a faulty r-edge f0 = a0b0 put back for C0."""
    for a0 in fr.pivots(0):
        if a0 % 2 or not fr.up(0, a0):
            continue
        for f0 in faulty_r_edges(fr, 0):
            if a0 not in f0:
                continue
            b0 = f0[1]
            faults = fr.local[0] - {tuple(sorted(f0))}
            h0 = _guarded(ctx, entry, lambda: ctx.through(fr, 0, b0, a0, faults))
            if h0 is None:
                continue
            ring = single_ring(ctx, entry, fr, a0, b0)
            if ring is not None:
                plan = ring_plan(ring, h0, f0=((0, a0), (0, b0)))
                plan.pivots = [(0, a0)]
                return plan
    return None


# --- Case 3 ---------------------------------------------------------------------------


def isolated_vertex(ctx: Context, entry: TraceEntry, fr: Frame) -> Plan | None:
    """Isolated a0 with cross edges a0b1, a0d1 and r-edges f1 = a0b0, f2 = a0d0.

    C0 passes through f1 and f2, so H0 = C0 - a0 runs d0 .. b0; the chains
    run a0 -> b1 .. a3 -> d0 and a0 -> d1 .. c3 -> b0.
    """
    for a0 in fr.isolated(0):
        if a0 % 2 or len(fr.up(0, a0)) < 2:
            continue
        rs = [e for e in faulty_r_edges(fr, 0) if a0 in e]
        for f1, f2 in itertools.permutations(rs, 2):
            b0, d0 = f1[1], f2[1]
            faults = fr.local[0] - {tuple(sorted(f1)), tuple(sorted(f2))}
            p = _guarded(ctx, entry, lambda: ctx.through(fr, 0, a0, b0, faults))
            if p is None or p[1] != d0:
                continue
            h0 = p[1:]
            dr = double_ring(ctx, entry, fr, a0, d0, a0, b0)
            if dr is None:
                continue
            plan = double_plan(dr, crossed_segments(dr, h0, [a0]), a0=(0, a0), b0=(0, b0), d0=(0, d0),
                               f1=((0, a0), (0, b0)), f2=((0, a0), (0, d0)))
            plan.r_edges = [(0, *f1), (0, *f2)]
            plan.isolated = [(0, a0)]
            return plan
    return None


def _even_pivot(fr: Frame) -> bool:
    return any(x % 2 == 0 for x in fr.pivots(0))


def _even_isolated(fr: Frame) -> bool:
    return any(x % 2 == 0 for x in fr.isolated(0))


def _even_shared(fr: Frame) -> bool:
    rs = faulty_r_edges(fr, 0)
    return any(f1[0] == f2[0] for f1, f2 in itertools.combinations(rs, 2))


def _cut_off_end(fr: Frame) -> bool:
    for e in fr.local[0]:
        a0, b0 = oriented(e)
        if fr.has_cross(0, a0) and not fr.has_cross(0, b0):
            return True
    return False


# frames where a handler cannot even name its witnesses are skipped silently
APPLIES = {
    "L8/1.2(non-r)": _cut_off_end,
    "L8/1.3.1": _even_shared,
    "L8/2.1.1": _even_pivot,
    "L8/2.1.2": _even_pivot,
    "L8/2.2": _even_pivot,
    "L8/3": _even_isolated,
}

HANDLERS = {
    "L8/1.1": ring_on_live_edge,
    "L8/1.2(r)": ring_on_faulty_edge,
    "L8/1.2(non-r)": rerouted,
    "L8/1.3(f2-off-C0)": lambda c, e, f: two_r_edges(c, e, f, "off"),
    "L8/1.3.1": lambda c, e, f: two_r_edges(c, e, f, "adjacent"),
    "L8/1.3.2": lambda c, e, f: two_r_edges(c, e, f, "nonadjacent"),
    "L8/2.1.1": one_pivot_two_r,
    "L8/2.1.2": two_pivots,
    "L8/2.2": pivot_r_edge,
    "L8/3": isolated_vertex,
}


def classify(fr: Frame) -> tuple[list[str], int]:
    """Case family of a rotate-0 frame and the subcube that plays role 0.

    Returns the ordered list of labels to try and the subcube index.
    """
    iso = [j for j in range(4) if fr.isolated(j)]
    if iso:
        return ["L8/3"], iso[0]
    piv = [j for j in range(4) if fr.pivots(j)]
    counts = fr.counts()
    if piv:
        s = max(piv, key=lambda j: (counts[j], -j))
        if counts[s] >= 5:
            return (["L8/2.1.1"] if len(fr.pivots(s)) == 1 else ["L8/2.1.2"]), s
        return ["L8/2.2"], s
    s = max(range(4), key=lambda j: (counts[j], -j))
    if counts[s] <= 3:
        return ["L8/1.1"], s
    if counts[s] == 4:
        if any(fr.is_r(s, *e) for e in fr.local[s]):
            return ["L8/1.2(r)", "L8/1.2(non-r)"], s
        return ["L8/1.2(non-r)", "L8/1.2(r)"], s
    return ["L8/1.3.1", "L8/1.3.2", "L8/1.3(f2-off-C0)"], s
