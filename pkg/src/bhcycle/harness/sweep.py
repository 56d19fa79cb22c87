"""Sweeps over fault sets: one JSON record per instance, a summary record last."""

from __future__ import annotations

import itertools
import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Iterator

from .. import oracles
from ..constructor import ConstructionFailed, ConstructionUnknown, check_preconditions, construct
from ..constructor.core import CALL_BUDGET
from ..faults import FaultSet
from ..search import DEFAULT_BUDGET, SearchBudgetExceeded
from ..topology import build_direct
from ..verifier import verify_cycle, verify_trace
from .generators import GENERATORS, generate_faults

EXIT_CLEAN, EXIT_VIOLATION, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3

# outcomes that break the theorem or the constructor's soundness
BAD = ("violation", "invalid")


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    n: int
    mode: str = "random"  # exhaustive | random
    max_faults: int | None = None  # defaults to 5n-7
    samples: int = 100
    generator: str = "uniform"
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    call_budget: int = CALL_BUDGET
    cross_check: float = 0.1  # share of instances re-solved by the oracle
    workers: int = 1
    out: str | None = None
    bundle_dir: str | None = None

    def __post_init__(self):
        if self.max_faults is None:
            self.max_faults = 5 * self.n - 7
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.mode not in ("exhaustive", "random"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "exhaustive" and not (self.n == 2 or self.max_faults <= 2):
            raise ConfigError("exhaustive mode needs n = 2 or at most 2 faults")
        if self.generator not in GENERATORS:
            raise ConfigError(f"unknown generator {self.generator!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits")
        if not 0.0 <= self.cross_check <= 1.0:
            raise ConfigError("cross_check is a fraction in [0, 1]")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class ResultRecord:
    id: str
    n: int
    seed: int
    generator: str | None
    index: int
    faults: list
    preconditions: dict
    outcome: str  # cycle | fallback | unknown | violation | invalid | skipped
    case_path: list = field(default_factory=list)
    events: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    oracle: str | None = None  # agree | disagree | unknown | confirmed-absent | None
    wall: float = 0.0
    error: str | None = None

    def to_json(self) -> dict:
        return asdict(self)


def exhaustive_count(n: int, max_faults: int) -> int:
    m = len(build_direct(n).edge_dim)
    return sum(math.comb(m, k) for k in range(max_faults + 1))


def instances(cfg: SweepConfig) -> Iterator[tuple[str, int, list]]:
    """(id, index, fault edges) in a fixed order."""
    t = build_direct(cfg.n)
    if cfg.mode == "exhaustive":
        index = 0
        for k in range(cfg.max_faults + 1):
            for combo in itertools.combinations(t.edges, k):
                yield f"x{k}:{index}", index, [list(e) for e in combo]
                index += 1
        return
    for index in range(cfg.samples):
        f = generate_faults(cfg.generator, cfg.n, cfg.max_faults, seed=cfg.seed, index=index)
        yield f"{cfg.generator}:{cfg.seed}:{index}", index, [list(e) for e in f.sorted_edges()]


def _cross_checked(cfg: SweepConfig, index: int) -> bool:
    if cfg.cross_check <= 0:
        return False
    step = max(1, round(1 / cfg.cross_check))
    return index % step == 0


def run_instance(cfg: SweepConfig, iid: str, index: int, edges: list) -> ResultRecord:
    t = build_direct(cfg.n)
    f = FaultSet.of(t, edges)
    report = check_preconditions(t, f)
    rec = ResultRecord(iid, cfg.n, cfg.seed, cfg.generator if cfg.mode == "random" else None, index,
                       [list(e) for e in f.sorted_edges()], report.to_json(), "skipped")
    start = time.perf_counter()
    if not report.ok:
        # an f4-cycle rules out a Hamiltonian cycle at any size; at n = 2 the oracle confirms it
        if cfg.n == 2 and report.degree_ok and not report.f4_ok:
            rec.oracle = _oracle_verdict(t, f, cfg.budget, expect=False)
        rec.wall = time.perf_counter() - start
        return rec
    try:
        cycle, trace = construct(t, f, budget=cfg.call_budget, fallback_budget=cfg.budget, check=False)
    except ConstructionUnknown as exc:
        rec.outcome, rec.error = "unknown", str(exc)
    except ConstructionFailed as exc:
        rec.outcome, rec.error = "violation", str(exc)
    else:
        rec.case_path = trace.case_path()
        rec.events = dict(Counter(ev.kind for ev in trace.events()))
        bad = verify_cycle(t, f, cycle) + verify_trace(t, f, trace)
        rec.violations = [v.to_json() for v in bad]
        if bad:
            rec.outcome = "invalid"
        else:
            rec.outcome = "fallback" if trace.has_fallback() else "cycle"
        if _cross_checked(cfg, index):
            rec.oracle = _oracle_verdict(t, f, cfg.budget, expect=True)
    rec.wall = time.perf_counter() - start
    return rec


def _oracle_verdict(t, f, budget: int, expect: bool) -> str:
    try:
        c = oracles.ham_cycle(t, f, budget=budget)
    except SearchBudgetExceeded:
        return "unknown"
    found = c is not None
    if not expect:
        return "confirmed-absent" if not found else "hamiltonian"
    return "agree" if found else "disagree"


def _run_packed(args):
    return run_instance(*args)


def sweep(cfg: SweepConfig) -> Iterator[ResultRecord]:
    """Records for every instance; order follows the instance order when workers = 1."""
    jobs = ((cfg, iid, index, edges) for iid, index, edges in instances(cfg))
    if cfg.workers <= 1:
        for job in jobs:
            yield run_instance(*job)
        return
    with ProcessPoolExecutor(cfg.workers) as pool:
        yield from pool.map(_run_packed, jobs, chunksize=16)


@dataclass
class Summary:
    total: int = 0
    outcomes: Counter = field(default_factory=Counter)
    oracle: Counter = field(default_factory=Counter)
    cases: Counter = field(default_factory=Counter)
    events: Counter = field(default_factory=Counter)
    wall: float = 0.0

    def add(self, rec: ResultRecord) -> None:
        self.total += 1
        self.outcomes[rec.outcome] += 1
        if rec.oracle:
            self.oracle[rec.oracle] += 1
        for label in rec.case_path:
            self.cases[label] += 1
        self.events.update(rec.events)
        self.wall += rec.wall

    @property
    def violations(self) -> int:
        return sum(self.outcomes[k] for k in BAD) + self.oracle["disagree"] + self.oracle["hamiltonian"]

    def exit_code(self, n: int) -> int:
        if self.violations:
            return EXIT_VIOLATION
        if n <= 3 and self.outcomes["unknown"]:
            return EXIT_UNKNOWN
        return EXIT_CLEAN

    def to_json(self) -> dict:
        return {
            "summary": True,
            "total": self.total,
            "outcomes": dict(sorted(self.outcomes.items())),
            "oracle": dict(sorted(self.oracle.items())),
            "cases": dict(sorted(self.cases.items())),
            "events": dict(sorted(self.events.items())),
            "violations": self.violations,
            "wall": round(self.wall, 3),
        }


def needs_bundle(rec: ResultRecord) -> bool:
    return rec.outcome in BAD or rec.outcome == "fallback" or rec.oracle in ("disagree", "hamiltonian")


def write_bundle(directory: str, cfg: SweepConfig, rec: ResultRecord) -> str:
    """A self-contained replay bundle: config, instance coordinates and fault edges."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, rec.id.replace(":", "_") + ".json")
    doc = {"config": cfg.to_json(), "id": rec.id, "index": rec.index, "faults": rec.faults, "record": rec.to_json()}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
    return path


def run_sweep(cfg: SweepConfig, stream: IO[str]) -> Summary:
    """Write records as JSON lines to ``stream`` and return the summary (also written)."""
    summary = Summary()
    for rec in sweep(cfg):
        summary.add(rec)
        line = rec.to_json()
        if cfg.bundle_dir and needs_bundle(rec):
            line["bundle"] = write_bundle(cfg.bundle_dir, cfg, rec)
        stream.write(json.dumps(line, sort_keys=True) + "\n")
    stream.write(json.dumps(summary.to_json(), sort_keys=True) + "\n")
    stream.flush()
    return summary


def load_bundle(path: str) -> tuple[SweepConfig, ResultRecord]:
    with open(path) as fh:
        doc = json.load(fh)
    cfg = SweepConfig(**doc["config"])
    return cfg, run_instance(cfg, doc["id"], doc["index"], doc["faults"])
