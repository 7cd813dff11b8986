"""Exhaustive multigraph enumeration up to isomorphism, at desk scale.

Connected multigraphs (loops allowed) are generated level by level: every
connected multigraph with m edges and no isolated vertices arises from one
with m - 1 edges by adding a parallel/new edge, a loop, or a pendant edge to
a fresh vertex.  Inseparable graphs are generated by open ear decomposition:
start from a circle and repeatedly attach paths with distinct existing
endpoints.  Duplicates are removed with the canonical form from graphcore.

Graphs are kept in a compact internal form ``(n, ((i, j, mult), ...))`` with
``i <= j`` (loops on the diagonal) and materialized as :class:`Graph` values
with vertices ``v0..`` and edges ``e0..`` on demand.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .graphcore import Graph, canonical_labeling

Compact = tuple[int, tuple[tuple[int, int, int], ...]]


def _compact_canonical(n: int, cells: dict[tuple[int, int], int]) -> Compact:
    edges = {}
    eid = 0
    for (i, j), mult in cells.items():
        for _ in range(mult):
            edges[f"e{eid}"] = (f"v{i}", f"v{j}")
            eid += 1
    g = Graph(edges, {f"v{i}" for i in range(n)})
    _, vmap = canonical_labeling(g)
    pos = {int(v[1:]): p for v, p in vmap.items()}
    out: dict[tuple[int, int], int] = {}
    for (i, j), mult in cells.items():
        a, b = pos[i], pos[j]
        if a > b:
            a, b = b, a
        out[(a, b)] = out.get((a, b), 0) + mult
    return n, tuple(sorted((a, b, m) for (a, b), m in out.items()))


def materialize(c: Compact) -> Graph:
    n, items = c
    edges = {}
    eid = 0
    for i, j, mult in items:
        for _ in range(mult):
            edges[f"e{eid}"] = (f"v{i}", f"v{j}")
            eid += 1
    return Graph(edges, {f"v{i}" for i in range(n)})


def _cells(c: Compact) -> dict[tuple[int, int], int]:
    return {(i, j): m for i, j, m in c[1]}


@lru_cache(maxsize=None)
def connected_multigraphs(max_edges: int) -> tuple[tuple[Compact, ...], ...]:
    """Tuple indexed by edge count: all connected multigraphs with that many
    edges (loops allowed, no isolated vertices), up to isomorphism.

    Index 0 holds the single-vertex graph.
    """
    levels: list[tuple[Compact, ...]] = [((1, ()),)]
    for m in range(1, max_edges + 1):
        seen: set[Compact] = set()
        for base in levels[m - 1]:
            n, items = base
            cells = _cells(base)
            candidates: list[tuple[int, dict]] = []
            for i in range(n):
                for j in range(i, n):
                    grown = dict(cells)
                    grown[(i, j)] = grown.get((i, j), 0) + 1
                    candidates.append((n, grown))
            if m >= 1:
                for i in range(n):  # pendant edge to one fresh vertex
                    grown = dict(cells)
                    grown[(i, n)] = 1
                    candidates.append((n + 1, grown))
            for nn, grown in candidates:
                seen.add(_compact_canonical(nn, grown))
        levels.append(tuple(sorted(seen)))
    return tuple(levels)


def all_multigraphs(max_edges: int) -> Iterator[Graph]:
    """All multigraphs with 1..max_edges edges and no isolated vertices, up
    to isomorphism: connected ones plus every disjoint union."""
    levels = connected_multigraphs(max_edges)
    conn: list[Compact] = [c for m in range(1, max_edges + 1) for c in levels[m]]
    conn.sort(key=lambda c: (sum(x[2] for x in c[1]), c))

    def unions(start: int, remaining: int) -> Iterator[tuple[Compact, ...]]:
        for idx in range(start, len(conn)):
            c = conn[idx]
            m = sum(x[2] for x in c[1])
            if m > remaining:
                break
            yield (c,)
            for tail in unions(idx, remaining - m):
                yield (c,) + tail

    for combo in unions(0, max_edges):
        n_off = 0
        edges = {}
        eid = 0
        verts = set()
        for c in combo:
            n, items = c
            for i, j, mult in items:
                for _ in range(mult):
                    edges[f"e{eid}"] = (f"v{i + n_off}", f"v{j + n_off}")
                    eid += 1
            verts |= {f"v{k + n_off}" for k in range(n)}
            n_off += n
        yield Graph(edges, verts)


@lru_cache(maxsize=None)
def inseparable_multigraphs(max_edges: int) -> tuple[Graph, ...]:
    """All inseparable multigraphs with 1..max_edges edges up to isomorphism:
    the loop vertex, the single edge, and every 2-connected loopless
    multigraph built by open ear decomposition."""
    seen: dict[int, set[Compact]] = {m: set() for m in range(max_edges + 1)}
    if max_edges >= 1:
        seen[1].add(_compact_canonical(1, {(0, 0): 1}))  # loop vertex
        seen[1].add(_compact_canonical(2, {(0, 1): 1}))  # single edge
    # seed circles: digon, triangle, ... (cycle with k edges)
    frontier: list[Compact] = []
    for k in range(2, max_edges + 1):
        cells = {}
        if k == 2:
            cells = {(0, 1): 2}
        else:
            for i in range(k):
                a, b = i, (i + 1) % k
                if a > b:
                    a, b = b, a
                cells[(a, b)] = cells.get((a, b), 0) + 1
        c = _compact_canonical(k if k > 2 else 2, cells)
        m = sum(x[2] for x in c[1])
        if c not in seen[m]:
            seen[m].add(c)
            frontier.append(c)
    # grow by open ears
    while frontier:
        base = frontier.pop()
        n, items = base
        m = sum(x[2] for x in items)
        cells = _cells(base)
        for length in range(1, max_edges - m + 1):
            fresh = length - 1
            for u in range(n):
                for v in range(u + 1, n):
                    grown = dict(cells)
                    path = [u] + [n + t for t in range(fresh)] + [v]
                    for a, b in zip(path, path[1:]):
                        aa, bb = (a, b) if a <= b else (b, a)
                        grown[(aa, bb)] = grown.get((aa, bb), 0) + 1
                    c = _compact_canonical(n + fresh, grown)
                    if c not in seen[m + length]:
                        seen[m + length].add(c)
                        if m + length < max_edges:
                            frontier.append(c)
    out = []
    for m in range(1, max_edges + 1):
        out.extend(materialize(c) for c in sorted(seen[m]))
    return tuple(out)
