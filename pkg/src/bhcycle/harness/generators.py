"""Seeded fault-set generators.

Every generator draws from ``random.Random(f"{seed}:{name}:{n}:{k}:{index}")``
so an instance is fully named by (name, n, k, seed, index).  Unless
``require_ok`` is false, a generator redraws until the fault set meets the
theorem's preconditions.
"""

from __future__ import annotations

import random
from typing import Callable

from ..constructor.core import check_preconditions
from ..faults import FaultSet
from ..topology import Topology, backup_vertex, build_direct, canonical

MAX_DRAWS = 20_000


class GeneratorError(ValueError):
    pass


def _rng(name: str, n: int, k: int, seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{name}:{n}:{k}:{index}")


def _fill(t: Topology, rng: random.Random, chosen: set, k: int, pool=None) -> set:
    """Top ``chosen`` up to k edges drawn from ``pool`` (default: all edges)."""
    pool = [e for e in (t.edges if pool is None else pool) if e not in chosen]
    need = k - len(chosen)
    if need > 0:
        chosen |= set(rng.sample(pool, min(need, len(pool))))
    return chosen


def _edges_at(t: Topology, v: int, skip_dim: int | None = None) -> list:
    return [canonical(v, w) for w, d in t.neighbors[v] if d != skip_dim]


def _subcube_edges(t: Topology, split: int, j: int) -> list:
    shift = 2 * split
    return [e for e in t.edges if t.edge_dim[e] != split and (e[0] >> shift) & 3 == j]


def _cross_threshold(n: int) -> int:
    return 3 if n == 3 else 4


# --- the generators -------------------------------------------------------------


def uniform(t: Topology, k: int, rng: random.Random, **_) -> set:
    return set(rng.sample(t.edges, k))


def dim_heavy(t: Topology, k: int, rng: random.Random, dim: int | None = None, heavy: int | None = None, **_) -> set:
    """At least ``heavy`` faults on dimension ``dim``."""
    dim = rng.randrange(t.n) if dim is None else dim
    thr = min(k, _cross_threshold(t.n))
    heavy = rng.randint(thr, max(thr, min(k, 2 * thr))) if heavy is None else heavy
    chosen = set(rng.sample(t.dimension_edges(dim), heavy))
    return _fill(t, rng, chosen, k)


def star(t: Topology, k: int, rng: random.Random, centers: int | None = None, mode: str | None = None,
         split: int | None = None, **_) -> set:
    """Faults packed around one or two vertices of a subcube.

    ``mode`` 'isolated' removes every subcube edge of the centre, 'pivot'
    all but one.  A second centre is a subcube neighbour of the first and
    shares the faulty edge between them.
    """
    n = t.n
    split = rng.randrange(1, n) if split is None else split
    centers = rng.choice((1, 1, 2)) if centers is None else centers
    mode = rng.choice(("isolated", "pivot")) if mode is None else mode
    v = rng.randrange(t.order)
    inner = _edges_at(t, v, split)
    chosen = set()
    if centers == 1:
        drop = 0 if mode == "isolated" else 1
        chosen |= set(rng.sample(inner, len(inner) - drop))
    else:
        e = rng.choice(inner)
        w = e[0] if e[1] == v else e[1]
        others_v = [x for x in inner if x != e]
        others_w = [x for x in _edges_at(t, w, split) if x != e]
        kv = len(others_v) if mode == "isolated" else len(others_v) - 1
        chosen.add(e)
        chosen |= set(rng.sample(others_v, kv))
        chosen |= set(rng.sample(others_w, len(others_w) - 1))
    if len(chosen) > k:
        chosen = set(rng.sample(sorted(chosen), k))
    # spend part of the rest on the split dimension so it stays the heaviest
    cross = [e for e in t.dimension_edges(split) if v not in e]
    want_cross = rng.randint(min(_cross_threshold(n), k - len(chosen)), max(0, k - len(chosen)))
    chosen = _fill(t, rng, chosen, len(chosen) + want_cross, cross)
    return _fill(t, rng, chosen, k)


def f4_forge(t: Topology, k: int, rng: random.Random, variant: str | None = None, exact: bool = False,
             mixed: bool = False, **_) -> set:
    """The f4 pattern: a vertex u, its backup v and two kept common neighbours.

    'full' faults every other edge at u and v (4n-4 faults, an f4-cycle);
    'near' leaves one of them alive; 'inner' keeps u and v's edges of one
    dimension so the f4-cycle exists only inside a subcube.  ``exact`` picks
    u = 0 and its two lowest neighbours; with ``mixed`` it keeps the lowest
    dimension-0 and the lowest dimension-1 neighbour instead.  The two kept
    neighbours of the plain choice are backups of each other, so the two
    dropped ones become a second degree-2 pair at n = 2.
    """
    n = t.n
    variant = variant or rng.choice(("near", "inner") if n >= 3 else ("near",))
    if exact:
        u = 0
        if mixed:
            keep = [min(w for w, d in t.neighbors[u] if d == 0), min(w for w, d in t.neighbors[u] if d == 1)]
        else:
            keep = sorted(w for w, _ in t.neighbors[u])[:2]
    else:
        u = rng.randrange(t.order)
        keep = None
    v = backup_vertex(u)
    split = None
    if variant == "inner":
        split = rng.randrange(1, n)
        pool = sorted(w for w, d in t.neighbors[u] if d != split)
    else:
        pool = sorted(w for w, _ in t.neighbors[u])
    if keep is None:
        keep = rng.sample(pool, 2)
    chosen = set()
    for c in (u, v):
        for w, d in t.neighbors[c]:
            if w in keep or (split is not None and d == split):
                continue
            chosen.add(canonical(c, w))
    if variant == "near":
        chosen.discard(rng.choice(sorted(chosen)))
    if variant == "inner":
        cross = [e for e in t.dimension_edges(split) if u not in e and v not in e]
        want = min(_cross_threshold(n), max(0, k - len(chosen)))
        chosen = _fill(t, rng, chosen, len(chosen) + want, cross)
    if len(chosen) > k:
        raise GeneratorError(f"f4-forge needs {len(chosen)} faults, k = {k}")
    return _fill(t, rng, chosen, k)


def subcube_heavy(t: Topology, k: int, rng: random.Random, inside: int | None = None, split: int | None = None, **_) -> set:
    """|F^j| at a case threshold (5 or 4 at n = 3, 5n-11 or 5n-12 above), rest on D_split."""
    n = t.n
    split = rng.randrange(1, n) if split is None else split
    if inside is None:
        inside = rng.choice((4, 5)) if n == 3 else rng.choice((5 * n - 11, 5 * n - 12))
    inside = max(0, min(inside, k))
    j = rng.randrange(4)
    chosen = set(rng.sample(_subcube_edges(t, split, j), inside))
    chosen = _fill(t, rng, chosen, k, t.dimension_edges(split))
    return chosen


GENERATORS: dict[str, Callable] = {
    "uniform": uniform,
    "dim-heavy": dim_heavy,
    "star": star,
    "f4-forge": f4_forge,
    "subcube-heavy": subcube_heavy,
}


def generate_faults(name: str, n: int, k: int, seed: int = 0, index: int = 0, require_ok: bool = True,
                    **params) -> FaultSet:
    """Fault set number ``index`` of generator ``name`` for (n, k, seed)."""
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise GeneratorError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}") from None
    t = build_direct(n)
    if not 0 <= k <= len(t.edge_dim):
        raise GeneratorError(f"k = {k} out of range for BH_{n}")
    rng = _rng(name, n, k, seed, index)
    for _ in range(MAX_DRAWS):
        try:
            edges = gen(t, k, rng, **params)
        except (GeneratorError, ValueError):
            if params:
                raise
            continue
        if not require_ok or check_preconditions(t, edges).ok:
            return FaultSet.of(t, edges)
    raise GeneratorError(f"{name} found no fault set meeting the preconditions in {MAX_DRAWS} draws")
