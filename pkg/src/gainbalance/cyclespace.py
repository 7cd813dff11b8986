"""GF(2) cycle-space algebra: binary cycles, circles, bases, orientations.

A binary cycle is an edge set meeting every vertex in even degree; a circle
is the edge set of a nontrivial simple closed walk.  Bases here are ordered
sequences; all GF(2) linear algebra pivots in edge-identifier order so
results are deterministic.

Basis text format: one line per member listing its edge identifiers; an
optional following ``walk:`` line attaches a cyclic orientation as signed
edge identifiers (``walk: e3 -e7 e3``); a trivial walk is ``walk: @ v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import BudgetError, GraphError, ParseError
from .graphcore import (
    ClosedWalk,
    DirectedEdge,
    Graph,
    components,
    spanning_forest,
    walk_support,
    walk_vertices,
)


@dataclass(frozen=True)
class BinaryCycle:
    """An element of the binary cycle space, by its support edge set."""

    support: frozenset

    def __iter__(self):
        return iter(self.support)

    def __len__(self):
        return len(self.support)


@dataclass(frozen=True)
class Circle:
    """A circle: connected 2-regular support plus its canonical simple walk
    (least start vertex, lexicographically least edge sequence)."""

    support: frozenset
    walk: ClosedWalk

    @property
    def cycle(self) -> BinaryCycle:
        return BinaryCycle(self.support)

    def __len__(self):
        return len(self.support)


@dataclass(frozen=True)
class CycleBasis:
    """An ordered basis of the binary cycle space of ``host``."""

    members: tuple
    host: Graph


@dataclass(frozen=True)
class OrientedBasis:
    """Basis members paired with cyclic orientations (closed walks whose
    mod-2 edge counts reproduce the member)."""

    pairs: tuple  # of (BinaryCycle, ClosedWalk)
    host: Graph

    @property
    def cycles(self) -> tuple:
        return tuple(c for c, _ in self.pairs)

    @property
    def walks(self) -> tuple:
        return tuple(w for _, w in self.pairs)


def cycle_space_dimension(g: Graph) -> int:
    return len(g.edge_list) - len(g.vertex_list) + len(components(g))


def binary_cycle(g: Graph, edges: Iterable[str]) -> BinaryCycle:
    """Validated constructor: every vertex must have even degree in the
    support subgraph."""
    support = frozenset(edges)
    deg: dict[str, int] = {}
    for e in support:
        t, h = g.ends(e)
        if t == h:
            continue
        deg[t] = deg.get(t, 0) + 1
        deg[h] = deg.get(h, 0) + 1
    odd = [v for v, d in deg.items() if d % 2]
    if odd:
        raise GraphError(f"support has odd degree at {sorted(odd)}")
    return BinaryCycle(support)


def _support_is_circle(g: Graph, support: frozenset) -> bool:
    if not support:
        return False
    if len(support) == 1:
        return g.is_loop(next(iter(support)))
    deg: dict[str, int] = {}
    for e in support:
        t, h = g.ends(e)
        if t == h:
            return False
        deg[t] = deg.get(t, 0) + 1
        deg[h] = deg.get(h, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    # connectivity over the support subgraph
    verts = list(deg)
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for e in support:
        t, h = g.ends(e)
        adj[t].append(h)
        adj[h].append(t)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(verts)


def circle_from_support(g: Graph, edges: Iterable[str]) -> Circle:
    """Build a circle with its canonical walk; raises if the support is not
    connected and 2-regular."""
    support = frozenset(edges)
    if not _support_is_circle(g, support):
        raise GraphError(f"{sorted(support)} is not a circle")
    if len(support) == 1:
        e = next(iter(support))
        return Circle(support, ClosedWalk(g.ends(e)[0], (DirectedEdge(e, True),)))
    verts = {v for e in support for v in g.ends(e)}
    start = min(verts)
    first_edges = sorted(e for e in support if start in g.ends(e))

    def traverse(first: str) -> tuple[tuple[str, ...], ClosedWalk]:
        steps = []
        at = start
        e = first
        remaining = set(support)
        while True:
            t, h = g.ends(e)
            steps.append(DirectedEdge(e, at == t))
            at = h if at == t else t
            remaining.discard(e)
            if at == start:
                break
            e = next(x for x in remaining if at in g.ends(x))
        return tuple(s.edge for s in steps), ClosedWalk(start, tuple(steps))

    options = [traverse(e) for e in first_edges[:2]]
    options.sort(key=lambda p: p[0])
    return Circle(support, options[0][1])


# -- GF(2) helpers -----------------------------------------------------------


def _edge_index(g: Graph) -> dict[str, int]:
    return {e: i for i, e in enumerate(g.edge_list)}

def _mask(support: Iterable[str], index: dict[str, int]) -> int:
    m = 0
    for e in support:
        m |= 1 << index[e]
    return m


def gf2_rank(masks: Iterable[int]) -> int:
    lead: dict[int, int] = {}
    r = 0
    for m in masks:
        while m:
            h = m.bit_length() - 1
            if h in lead:
                m ^= lead[h]
            else:
                lead[h] = m
                r += 1
                break
    return r


def gf2_extract_basis(items: Sequence[tuple[int, object]], dim: int) -> Optional[list]:
    """Greedily pick items whose masks are independent until ``dim`` are
    found; returns the picked payloads or None if the masks do not span."""
    lead: dict[int, int] = {}
    picked = []
    for m, payload in items:
        reduced = m
        while reduced:
            h = reduced.bit_length() - 1
            if h in lead:
                reduced ^= lead[h]
            else:
                lead[h] = reduced
                picked.append(payload)
                break
        if len(picked) == dim:
            return picked
    return None


def is_cycle_basis(members: Sequence, g: Graph) -> bool:
    """True iff the member supports are independent and span Z1(g; GF(2))."""
    index = _edge_index(g)
    supports = [frozenset(getattr(m, "support", m)) for m in members]
    if any(not s <= set(g.edge_list) for s in supports):
        raise GraphError("basis member uses edges outside the host graph")
    dim = cycle_space_dimension(g)
    masks = [_mask(s, index) for s in supports]
    return len(members) == dim and gf2_rank(masks) == dim


def is_circle_basis(members: Sequence, g: Graph) -> bool:
    """True iff all members are circles and they form a cycle basis."""
    for m in members:
        support = frozenset(getattr(m, "support", m))
        if not _support_is_circle(g, support):
            return False
    return is_cycle_basis(members, g)


# -- fundamental systems ------------------------------------------------------


def fundamental_circles(g: Graph, forest: frozenset) -> CycleBasis:
    """One circle per non-forest edge: the unique circle in forest + e."""
    _check_forest(g, forest)
    tree_adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertex_list}
    for e in forest:
        t, h = g.ends(e)
        tree_adj[t].append((e, h))
        tree_adj[h].append((e, t))

    def tree_path(a: str, b: str) -> list[str]:
        if a == b:
            return []
        prev: dict[str, tuple[str, str]] = {}
        stack = [a]
        seen = {a}
        while stack:
            v = stack.pop()
            for e, u in tree_adj[v]:
                if u not in seen:
                    seen.add(u)
                    prev[u] = (v, e)
                    if u == b:
                        stack = []
                        break
                    stack.append(u)
        if b not in prev:
            raise GraphError("endpoints lie in different forest components")
        path = []
        at = b
        while at != a:
            v, e = prev[at]
            path.append(e)
            at = v
        return path[::-1]

    members = []
    for e in g.edge_list:
        if e in forest:
            continue
        t, h = g.ends(e)
        support = {e} if t == h else {e, *tree_path(h, t)}
        members.append(circle_from_support(g, support))
    return CycleBasis(tuple(members), g)


def _check_forest(g: Graph, forest: frozenset) -> None:
    for e in forest:
        g.ends(e)
        if g.is_loop(e):
            raise GraphError("forest contains a loop")
    parent = {v: v for v in g.vertex_list}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merged = 0
    for e in sorted(forest):
        t, h = g.ends(e)
        rt, rh = find(t), find(h)
        if rt == rh:
            raise GraphError("forest contains a cycle")
        parent[rt] = rh
        merged += 1
    if merged != len(g.vertex_list) - len(components(g)):
        raise GraphError("forest is not maximal")


# -- circle enumeration -------------------------------------------------------


def enumerate_circles(g: Graph, max_edges: int = 24) -> list[Circle]:
    """All circles of g, each once, sorted canonically.

    DFS over simple paths from each minimal vertex, closing back to it; the
    default edge bound keeps the search at desk scale.
    """
    if len(g.edge_list) > max_edges:
        raise BudgetError(f"circle enumeration bound exceeded ({len(g.edge_list)} > {max_edges})")
    found: set[frozenset] = set()
    for e in g.edge_list:
        if g.is_loop(e):
            found.add(frozenset({e}))
    order = {v: i for i, v in enumerate(g.vertex_list)}

    def dfs(root: str, at: str, used_edges: list[str], visited: set[str]) -> None:
        for eid, u in g.incident(at):
            if u == at:
                continue
            if u == root and len(used_edges) >= 1 and eid != used_edges[0]:
                if len(used_edges) >= 2 or eid > used_edges[0]:
                    found.add(frozenset(used_edges + [eid]))
                continue
            if order.get(u, -1) <= order[root] or u in visited:
                continue
            visited.add(u)
            used_edges.append(eid)
            dfs(root, u, used_edges, visited)
            used_edges.pop()
            visited.discard(u)

    for root in g.vertex_list:
        dfs(root, root, [], set())
    circles = [circle_from_support(g, s) for s in found]
    circles.sort(key=lambda c: (len(c.support), tuple(sorted(c.support))))
    return circles


# -- cyclic orientations ------------------------------------------------------


def _euler_walk(g: Graph, support: frozenset, start: str) -> list[DirectedEdge]:
    """Closed Euler walk on a connected even-degree support, Hierholzer with
    least-identifier-first edge choice."""
    remaining: dict[str, list[str]] = {}
    for e in sorted(support):
        t, h = g.ends(e)
        remaining.setdefault(t, []).append(e)
        if h != t:
            remaining.setdefault(h, []).append(e)
    used: set[str] = set()

    def pick(v: str) -> Optional[str]:
        for e in remaining.get(v, []):
            if e not in used:
                return e
        return None

    def tour(v0: str) -> list[DirectedEdge]:
        walk = []
        at = v0
        while True:
            e = pick(at)
            if e is None:
                break
            used.add(e)
            t, h = g.ends(e)
            walk.append(DirectedEdge(e, at == t))
            at = h if at == t else t
        return walk

    walk = tour(start)
    # splice in detours at vertices with unused edges
    i = 0
    at = start
    while i <= len(walk):
        if pick(at) is not None:
            detour = tour(at)
            walk[i:i] = detour
            continue
        if i == len(walk):
            break
        step = walk[i]
        t, h = g.ends(step.edge)
        at = h if step.forward else t
        i += 1
    return walk


def cyclic_orientations(b: BinaryCycle, g: Graph, budget: int = 4) -> list[ClosedWalk]:
    """Closed walks projecting to ``b``: the canonical one first (per-component
    Euler walks linked by out-and-back forest paths), then alternate direction
    choices, up to ``budget`` walks."""
    support = frozenset(b.support)
    if not support:
        return [ClosedWalk(g.vertex_list[0] if g.vertex_list else "", ())]
    comp_sets = []
    left = set(support)
    while left:
        e0 = min(left)
        comp = {e0}
        verts = set(g.ends(e0))
        grew = True
        while grew:
            grew = False
            for e in list(left - comp):
                t, h = g.ends(e)
                if t in verts or h in verts:
                    comp.add(e)
                    verts |= {t, h}
                    grew = True
        comp_sets.append((min(verts), frozenset(comp)))
        left -= comp
    comp_sets.sort()

    forest = spanning_forest(g)
    tree_adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertex_list}
    for e in forest:
        t, h = g.ends(e)
        tree_adj[t].append((e, h))
        tree_adj[h].append((e, t))

    def tree_walk(a: str, bv: str) -> list[DirectedEdge]:
        if a == bv:
            return []
        prev: dict[str, tuple[str, str]] = {}
        stack = [a]
        seen = {a}
        while stack:
            v = stack.pop()
            for e, u in sorted(tree_adj[v]):
                if u not in seen:
                    seen.add(u)
                    prev[u] = (v, e)
                    stack.append(u)
        if bv not in prev:
            raise GraphError("support spans multiple components of a disconnected host")
        steps = []
        at = bv
        while at != a:
            v, e = prev[at]
            t, h = g.ends(e)
            steps.append(DirectedEdge(e, t == v))
            at = v
        return steps[::-1]

    base = comp_sets[0][0]
    euler = [(anchor, _euler_walk(g, comp, anchor)) for anchor, comp in comp_sets]

    out = []
    n = len(euler)
    for flips in range(min(budget, 1 << n)):
        steps: list[DirectedEdge] = []
        for i, (anchor, tour) in enumerate(euler):
            part = list(tour)
            if (flips >> i) & 1:
                part = [s.reversed() for s in reversed(part)]
            go = tree_walk(base, anchor)
            steps.extend(go)
            steps.extend(part)
            steps.extend(s.reversed() for s in reversed(go))
        out.append(ClosedWalk(base, tuple(steps)))
    return out


def natural_orientation(b, g: Graph) -> ClosedWalk:
    """Canonical walk for a circle member, else the canonical linked Euler
    walk."""
    support = frozenset(getattr(b, "support", b))
    if _support_is_circle(g, support):
        return circle_from_support(g, support).walk
    return cyclic_orientations(BinaryCycle(support), g, budget=1)[0]


def oriented_basis(g: Graph, members: Sequence, walks: Optional[Sequence[ClosedWalk]] = None) -> OrientedBasis:
    """Pair basis members with orientations (natural ones when not given) and
    validate the projection invariant."""
    pairs = []
    for i, m in enumerate(members):
        support = frozenset(getattr(m, "support", m))
        w = walks[i] if walks is not None and walks[i] is not None else natural_orientation(m, g)
        if walk_support(w) != support:
            raise GraphError(f"walk {i} does not project to its cycle")
        walk_vertices(g, w)
        pairs.append((BinaryCycle(support), w))
    return OrientedBasis(tuple(pairs), g)


# -- theta sums, improper edges, digons --------------------------------------


def theta_sum(c1: Circle, c2: Circle, g: Graph) -> Optional[Circle]:
    """The circle c1 + c2 when the union is a theta graph, else None."""
    union = c1.support | c2.support
    deg: dict[str, int] = {}
    for e in union:
        t, h = g.ends(e)
        if t == h:
            return None
        deg[t] = deg.get(t, 0) + 1
        deg[h] = deg.get(h, 0) + 1
    if sorted(deg.values(), reverse=True)[:2] != [3, 3]:
        return None
    if any(d not in (2, 3) for d in deg.values()):
        return None
    summed = c1.support ^ c2.support
    if not _support_is_circle(g, summed):
        return None
    # union must be connected; the sum being a circle plus the shared path
    # condition guarantees it, but check directly for safety
    verts = list(deg)
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for e in union:
        t, h = g.ends(e)
        adj[t].append(h)
        adj[h].append(t)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(verts):
        return None
    return circle_from_support(g, summed)


def improper_edges(b: CycleBasis) -> frozenset:
    """Edges lying in exactly one member of the basis."""
    counts: dict[str, int] = {}
    for m in b.members:
        for e in getattr(m, "support", m):
            counts[e] = counts.get(e, 0) + 1
    return frozenset(e for e, c in counts.items() if c == 1)


def digon_condition(b: CycleBasis, d: Circle) -> bool:
    """True iff the basis neither contains the digon nor two members summing
    to it."""
    if len(d.support) != 2:
        raise GraphError("digon condition requires a 2-edge circle")
    supports = [frozenset(getattr(m, "support", m)) for m in b.members]
    if d.support in supports:
        return False
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if supports[i] ^ supports[j] == d.support:
                return False
    return True


# -- basis text format --------------------------------------------------------


def parse_basis_text(text: str, g: Graph) -> OrientedBasis:
    members: list[frozenset] = []
    walks: list[Optional[ClosedWalk]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("walk:"):
            if not members:
                raise ParseError("walk line before any basis member", line=lineno)
            tokens = line[len("walk:"):].split()
            if tokens and tokens[0] == "@":
                if len(tokens) != 2:
                    raise ParseError("trivial walk syntax is 'walk: @ <vertex>'", line=lineno)
                walks[-1] = ClosedWalk(tokens[1], ())
                continue
            steps = []
            for tok in tokens:
                fwd = not tok.startswith("-")
                eid = tok.lstrip("-")
                if eid not in g.edges:
                    raise ParseError(f"unknown edge {eid!r} in walk", line=lineno)
                steps.append(DirectedEdge(eid, fwd))
            if not steps:
                raise ParseError("empty walk line", line=lineno)
            first = steps[0]
            t, h = g.ends(first.edge)
            walks[-1] = ClosedWalk(t if first.forward else h, tuple(steps))
        else:
            eids = line.split()
            for eid in eids:
                if eid not in g.edges:
                    raise ParseError(f"unknown edge {eid!r}", line=lineno)
            members.append(frozenset(eids))
            walks.append(None)
    try:
        return oriented_basis(g, members, walks)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def basis_to_text(ob: OrientedBasis) -> str:
    lines = []
    for cycle, walk in ob.pairs:
        lines.append(" ".join(sorted(cycle.support)))
        if walk.is_trivial:
            lines.append(f"walk: @ {walk.start}")
        else:
            lines.append("walk: " + " ".join(("" if s.forward else "-") + s.edge for s in walk.steps))
    return "\n".join(lines) + "\n"
