"""Preconditions, dispatch and the fallback ladder."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .. import oracles
from ..faults import FaultSet, F4Cycle, f4_cycles_from_masks, surviving_masks
from ..oracles import HamCycle
from ..search import DEFAULT_BUDGET, SearchBudgetExceeded, SearchStats
from ..topology import Topology, build_direct, canonical
from . import lemma8
from .frame import Frame, FrameKey
from .rings import Context, Plan, Redecomposed, StitchError, stitch
from .trace import CaseTrace, Impasse, TraceEntry, empty_witnesses

# node cap of a single oracle call made from inside a case
CALL_BUDGET = 2_000_000


class PreconditionError(ValueError):
    def __init__(self, report: "PreconditionReport"):
        super().__init__("; ".join(report.violations()))
        self.report = report


class ConstructionUnknown(RuntimeError):
    """The global search ran out of budget: no answer either way."""


class ConstructionFailed(RuntimeError):
    """Every case and the global search failed: BH_n - F has no Hamiltonian cycle."""


@dataclass
class PreconditionReport:
    n: int
    fault_count: int
    low_degree: list = field(default_factory=list)  # (vertex, degree) with degree < 2
    f4_cycles: list = field(default_factory=list)

    @property
    def bound(self) -> int:
        return 5 * self.n - 7

    @property
    def size_ok(self) -> bool:
        return self.fault_count <= self.bound

    @property
    def degree_ok(self) -> bool:
        return not self.low_degree

    @property
    def f4_ok(self) -> bool:
        return not self.f4_cycles

    @property
    def ok(self) -> bool:
        return self.size_ok and self.degree_ok and self.f4_ok

    def violations(self) -> list[str]:
        out = []
        if not self.size_ok:
            out.append(f"|F| = {self.fault_count} exceeds 5n-7 = {self.bound}")
        for v, d in self.low_degree:
            out.append(f"vertex {v} has degree {d}")
        for c in self.f4_cycles:
            out.append(f"f4-cycle {list(c.cycle)} with degree-2 pair {list(c.pair)}")
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "faults": self.fault_count,
            "bound": self.bound,
            "size_ok": self.size_ok,
            "degree_ok": self.degree_ok,
            "f4_ok": self.f4_ok,
            "low_degree": [list(x) for x in self.low_degree],
            "f4_cycles": [{"cycle": list(c.cycle), "pair": list(c.pair)} for c in self.f4_cycles],
        }


def _edges(f) -> frozenset:
    if isinstance(f, FaultSet):
        return f.edges
    return frozenset(canonical(*e) for e in (f or ()))


def check_preconditions(t: Topology, f) -> PreconditionReport:
    faults = _edges(f)
    adj = surviving_masks(t, faults)
    low = [(v, m.bit_count()) for v, m in enumerate(adj) if m.bit_count() < 2]
    return PreconditionReport(t.n, len(faults), low, f4_cycles_from_masks(adj))


# --- solver ------------------------------------------------------------------------


class Solver:
    """Runs the case analysis for one input, recursing into subcubes."""

    def __init__(self, budget: int = CALL_BUDGET, fallback_budget: int = DEFAULT_BUDGET):
        self.ctx = Context(budget, None)
        self.ctx.recurse = self.recurse
        self.ctx.redispatch = self.redispatch
        self.fallback_budget = fallback_budget
        self._sub: dict = {}

    def recurse(self, n: int, faults: frozenset, depth: int):
        """(cycle, entries) for BH_n - faults when it meets the preconditions, else None."""
        key = (n, faults)
        if key not in self._sub:
            t = build_direct(n)
            if not check_preconditions(t, faults).ok:
                self._sub[key] = None
            else:
                self._sub[key] = self.level(t, faults, depth)
        res = self._sub[key]
        if res is None:
            return None
        cycle, entries = res
        base = entries[0].depth
        return cycle, [_shifted(e, depth - base) for e in entries]

    def level(self, t: Topology, faults: frozenset, depth: int = 0) -> tuple[list[int], list[TraceEntry]]:
        if t.n == 2:
            entry = TraceEntry(depth, 2, sorted(faults), "n2/oracle", witnesses=empty_witnesses())
            cyc = self._global(t, faults)
            return cyc, [entry]
        if t.n == 3:
            return self._ladder(t, faults, depth, lemma8_tries)
        from . import induction

        return self._ladder(t, faults, depth, induction.tries)

    def redispatch(self, t: Topology, faults: frozenset, depth: int, split: int, tried: tuple):
        """Run the case analysis again on a chosen split dimension."""
        from . import induction

        def tries(t_, f_):
            return induction.tries(t_, f_, split=split, tried=tried)

        return self._ladder(t, faults, depth, tries)

    def _global(self, t, faults) -> list[int]:
        try:
            c = oracles.ham_cycle(t, faults, budget=self.fallback_budget, stats=SearchStats())
        except SearchBudgetExceeded as exc:
            raise ConstructionUnknown(str(exc)) from exc
        if c is None:
            raise ConstructionFailed(f"BH_{t.n} minus {len(faults)} faults has no Hamiltonian cycle")
        return list(c.vertices)

    def _ladder(self, t, faults, depth, tries_fn):
        entry = TraceEntry(depth, t.n, sorted(faults), "", witnesses=empty_witnesses())
        dictated, tries = tries_fn(t, faults)
        entry.case = dictated
        for label, key, handler, family, applies in tries:
            fr = Frame(t, faults, key)
            if applies is not None and not applies(fr):
                continue
            try:
                plan = handler(self.ctx, entry, fr, depth) if _wants_depth(handler) else handler(self.ctx, entry, fr)
            except Impasse as exc:
                entry.add_event("impasse", f"{label} {_key_text(key)}: {exc}")
                continue
            if plan is None:
                entry.add_event("impasse", f"{label} {_key_text(key)}: no witness choice closed a cycle")
                continue
            if isinstance(plan, Redecomposed):
                if family:
                    entry.case = label
                else:
                    entry.via = label
                _record_redec(entry, fr, plan)
                return plan.cycle, [entry] + plan.entries
            try:
                cycle = stitch(fr, plan.segments)
            except StitchError as exc:
                entry.add_event("impasse", f"{label} {_key_text(key)}: stitch failed, {exc}")
                continue
            label = plan.label or label
            if family:
                entry.case = label
            else:
                entry.via = label
            _record(entry, fr, plan)
            return cycle, [entry] + plan.subtrace
        entry.via = "oracle"
        entry.add_event("fallback", "every case procedure failed; global search used")
        return self._global(t, faults), [entry]


def _wants_depth(handler) -> bool:
    return getattr(handler, "wants_depth", False)


def _key_text(key: FrameKey) -> str:
    return f"[split {key.split}, rotate {key.rotate}{', reflected' if key.reflect else ''}]"


def _shifted(e: TraceEntry, offset: int) -> TraceEntry:
    d = TraceEntry.from_json(e.to_json())
    d.depth += offset
    return d


def _record_redec(entry: TraceEntry, fr: Frame, plan: Redecomposed) -> None:
    entry.frame = fr.key.to_json()
    entry.split_dim = fr.key.split
    entry.cross_count = len(fr.cross)
    entry.counts = fr.counts()
    w = empty_witnesses()
    w["pivots"] = sorted(fr.to_level(j, x) for j, x in plan.pivots)
    w["isolated"] = sorted(fr.to_level(j, x) for j, x in plan.isolated)
    w["named"] = dict(plan.named)
    entry.witnesses = w


def _record(entry: TraceEntry, fr: Frame, plan: Plan) -> None:
    entry.frame = fr.key.to_json()
    entry.split_dim = fr.key.split
    entry.cross_count = len(fr.cross)
    entry.counts = fr.counts()
    w = empty_witnesses()
    cross = set()
    segs = plan.segments
    for k, (j, path) in enumerate(segs):
        jn, nxt = segs[(k + 1) % len(segs)]
        cross.add(fr.edge_to_level(j, path[-1], jn, nxt[0]))
    w["cross_edges"] = sorted(list(e) for e in cross)
    w["r_edges"] = sorted(list(fr.edge_to_level(j, x, j, y)) for j, x, y in plan.r_edges)
    w["pivots"] = sorted(fr.to_level(j, x) for j, x in plan.pivots)
    w["isolated"] = sorted(fr.to_level(j, x) for j, x in plan.isolated)
    named = {}
    for name, val in plan.named.items():
        if isinstance(val[0], tuple):
            (j1, x1), (j2, x2) = val
            named[name] = list(fr.edge_to_level(j1, x1, j2, x2))
        else:
            named[name] = fr.to_level(*val)
    if plan.variant:
        named["variant"] = plan.variant
    w["named"] = named
    entry.witnesses = w


# --- n = 3 dispatch ---------------------------------------------------------------------


def split_order(t: Topology, faults: frozenset, dims=None) -> list[int]:
    counts = [0] * t.n
    for e in faults:
        counts[t.edge_dim[e]] += 1
    dims = range(t.n) if dims is None else dims
    return sorted(dims, key=lambda i: (-counts[i], i))


def lemma8_tries(t: Topology, faults: frozenset):
    splits = split_order(t, faults)
    tries = []
    dictated = None
    for rank, split in enumerate(splits):
        fr0 = Frame(t, faults, FrameKey(split, 0, False))
        labels, s = lemma8.classify(fr0)
        if dictated is None:
            dictated = labels[0]
        for label in labels:
            for reflect in (False, True):
                tries.append((label, FrameKey(split, s, reflect), lemma8.HANDLERS[label], rank == 0,
                              lemma8.APPLIES.get(label)))
        if rank == 0:
            # siblings: the plain rings in every frame of this split
            for label in ("L8/1.1", "L8/1.2(r)"):
                for rot in range(4):
                    for reflect in (False, True):
                        tries.append((label, FrameKey(split, rot, reflect), lemma8.HANDLERS[label], False, None))
    return dictated, tries


# --- public entry point ---------------------------------------------------------------------


def construct(t: Topology, f=None, budget: int = CALL_BUDGET, fallback_budget: int = DEFAULT_BUDGET,
              check: bool = True) -> tuple[HamCycle, CaseTrace]:
    """A Hamiltonian cycle of BH_n - F and the trace of the cases used.

    Raises PreconditionError when F breaks the hypotheses (unless ``check``
    is false), ConstructionUnknown when the global search runs out of budget.
    """
    faults = _edges(f)
    if check:
        report = check_preconditions(t, faults)
        if not report.ok:
            raise PreconditionError(report)
    solver = Solver(budget, fallback_budget)
    cycle, entries = solver.level(t, faults, 0)
    return HamCycle(tuple(cycle)), CaseTrace(entries)


def lemma8_construct(t: Topology, f=None, **kw) -> tuple[HamCycle, CaseTrace]:
    """The n = 3 case analysis (construct restricted to BH_3)."""
    if t.n != 3:
        raise ValueError(f"lemma8_construct needs BH_3, got BH_{t.n}")
    return construct(t, f, **kw)


def inductive_construct(t: Topology, f=None, **kw) -> tuple[HamCycle, CaseTrace]:
    """The inductive case analysis for n >= 4."""
    if t.n < 4:
        raise ValueError(f"inductive_construct needs n >= 4, got {t.n}")
    return construct(t, f, **kw)
