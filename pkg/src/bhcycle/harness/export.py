"""DOT and JSON renderings of topologies, cycles and traces."""

from __future__ import annotations

import json

from ..constructor import CaseTrace
from ..topology import Topology, canonical

FORMATS = ("dot", "json")


def _check(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose dot or json")


def _name(t: Topology, v: int) -> str:
    return "".join(map(str, t.label(v)))


def export_topology(t: Topology, fmt: str = "json") -> str:
    _check(fmt)
    return t.to_dot() if fmt == "dot" else t.to_json() + "\n"


def export_cycle(t: Topology, cycle, faults=(), fmt: str = "json") -> str:
    """The cycle over BH_n: faulty edges dashed, cycle edges bold."""
    _check(fmt)
    vs = list(getattr(cycle, "vertices", cycle))
    if fmt == "json":
        doc = {"n": t.n, "vertices": vs, "labels": [list(t.label(v)) for v in vs]}
        return json.dumps(doc) + "\n"
    on = {canonical(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))}
    bad = {canonical(*e) for e in faults}
    lines = [f"graph cycle{t.n} {{"]
    for v in t.vertices:
        lines.append(f'  {v} [label="{_name(t, v)}"];')
    for u, v in t.edges:
        if (u, v) in on:
            lines.append(f"  {u} -- {v} [penwidth=3];")
        elif (u, v) in bad:
            lines.append(f"  {u} -- {v} [style=dashed, color=red];")
        else:
            lines.append(f"  {u} -- {v} [color=gray];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_cycle(text: str) -> list[int]:
    doc = json.loads(text)
    if isinstance(doc, dict):
        doc = doc["vertices"]
    if not isinstance(doc, list) or not all(isinstance(v, int) for v in doc):
        raise ValueError("cycle file must hold a list of vertex codes or {'vertices': [...]}")
    return doc


def export_trace(trace: CaseTrace, fmt: str = "json") -> str:
    """JSON is the trace's own serialization; DOT draws one node per level."""
    _check(fmt)
    if fmt == "json":
        return trace.to_json() + "\n"
    lines = ["digraph trace {", "  node [shape=box];"]
    for k, e in enumerate(trace.entries):
        label = e.case if not e.via else f"{e.case} via {e.via}"
        extra = f"\\nsplit {e.split_dim}, |F^j| {e.counts}" if e.split_dim is not None else ""
        lines.append(f'  l{k} [label="depth {e.depth}, BH_{e.n}\\n{label}{extra}"];')
        if k:
            lines.append(f"  l{k - 1} -> l{k};")
    lines.append("}")
    return "\n".join(lines) + "\n"
