"""Deletion, contraction, minor containment, witness lifting, extrusion,
Whitney twists, and 2-bridge theory.

Minor search enumerates disjoint connected branch sets by DFS with pruning on
edge multiplicities; targets are small (at most 6 vertices, 10 edges) so the
worst case stays manageable at desk scale.  A loop-vertex target is special
cased: it is present exactly when the host contains any circle.

The basis-lifting constructions preserve bad witnesses: lifting a basis along
an edge deletion adds one circle per restored non-forest edge, with its gain
solved to keep the circle balanced; lifting along a forest contraction
splices tree paths (with identity gains) into each walk.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .cyclespace import BinaryCycle, OrientedBasis, enumerate_circles
from .errors import GraphError
from .gaingraph import GainAssignment, GainGraph
from .graphcore import (
    ClosedWalk,
    DirectedEdge,
    Graph,
    canonical_key,
    components,
    is_isomorphic,
    spanning_forest,
    walk_support,
    walk_vertices,
)
from .groups import identity, inverse, op


# -- deletion and contraction ---------------------------------------------------


def delete(g: Graph, s: Iterable[str]) -> Graph:
    """Remove edges; isolated vertices are retained."""
    drop = set(s)
    for e in drop:
        g.ends(e)
    return Graph({e: g.edges[e] for e in g.edge_list if e not in drop}, g.vertices)


def contract(g: Graph, s: Iterable[str]) -> tuple[Graph, dict[str, str]]:
    """Contract an edge set: endpoints merge per connected components of s.

    All non-contracted edges survive (loops and parallels may arise; loops in
    ``s`` simply disappear).  The merged vertex takes the least name in its
    component.  Returns the contracted graph and the vertex projection.
    """
    group = set(s)
    for e in group:
        g.ends(e)
    parent = {v: v for v in g.vertex_list}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in group:
        t, h = g.ends(e)
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[rt] = rh
    classes: dict[str, list[str]] = {}
    for v in g.vertex_list:
        classes.setdefault(find(v), []).append(v)
    name = {root: min(members) for root, members in classes.items()}
    vmap = {v: name[find(v)] for v in g.vertex_list}
    edges = {}
    for e in g.edge_list:
        if e in group:
            continue
        t, h = g.ends(e)
        edges[e] = (vmap[t], vmap[h])
    return Graph(edges, set(vmap.values())), vmap


# -- minor containment ------------------------------------------------------------


@dataclass(frozen=True)
class MinorWitness:
    """Branch sets (target vertex -> connected host vertex set) plus an
    injective target-edge -> host-edge assignment."""

    branch_sets: Mapping[str, frozenset]
    edge_map: Mapping[str, str]

    def to_json(self) -> dict:
        return {
            "branch_sets": {t: sorted(vs) for t, vs in sorted(self.branch_sets.items())},
            "edge_map": dict(sorted(self.edge_map.items())),
        }


MINOR_SEARCH_MAX_VERTICES = 6
MINOR_SEARCH_MAX_EDGES = 10


def branch_forest(g: Graph, branch_sets: Mapping[str, frozenset]) -> frozenset:
    """Deterministic spanning forest of each induced branch set."""
    picked = set()
    for t in sorted(branch_sets):
        vs = branch_sets[t]
        sub = g.subgraph([e for e in g.edge_list if set(g.ends(e)) <= vs], vs)
        picked |= spanning_forest(sub)
    return frozenset(picked)


def verify_minor_witness(g: Graph, target: Graph, w: MinorWitness) -> bool:
    """Re-check a witness by performing the deletions and contractions."""
    seen: set = set()
    for t, vs in w.branch_sets.items():
        if t not in target.vertices or not vs <= g.vertices or seen & vs:
            return False
        seen |= vs
        sub = g.subgraph([e for e in g.edge_list if set(g.ends(e)) <= vs], vs)
        if len(components(sub)) != 1:
            return False
    if set(w.branch_sets) != set(target.vertices):
        return False
    if set(w.edge_map) != set(target.edges) or len(set(w.edge_map.values())) != len(w.edge_map):
        return False
    forest = branch_forest(g, w.branch_sets)
    if set(w.edge_map.values()) & forest:
        return False
    location = {}
    for t, vs in w.branch_sets.items():
        for v in vs:
            location[v] = t
    for te, he in w.edge_map.items():
        tt, th = target.ends(te)
        ht, hh = g.ends(he)
        if ht not in location or hh not in location:
            return False
        if {location[ht], location[hh]} != {tt, th}:
            return False
    keep = set(w.edge_map.values()) | forest
    reduced = delete(g, set(g.edge_list) - keep)
    contracted, _ = contract(reduced, forest)
    trimmed = Graph(
        dict(contracted.edges),
        {min(vs) for vs in w.branch_sets.values()},
    )
    return is_isomorphic(trimmed, target)


def _loop_vertex_witness(g: Graph) -> Optional[MinorWitness]:
    """A loop-vertex minor exists iff the host contains any circle."""
    best: Optional[frozenset] = None
    for c in _short_circle(g):
        best = c
        break
    if best is None:
        return None
    verts = {v for e in best for v in g.ends(e)}
    sub = g.subgraph(best, verts)
    tree = spanning_forest(sub)
    loop_edge = min(best - tree)
    target_vertex = "v"
    return MinorWitness({target_vertex: frozenset(verts)}, {"e": loop_edge})


def _short_circle(g: Graph):
    for e in g.edge_list:
        if g.is_loop(e):
            yield frozenset({e})
            return
    seen_pairs = set()
    for e in g.edge_list:
        t, h = g.ends(e)
        key = frozenset({t, h})
        if key in seen_pairs:
            others = [f for f in g.edges_between(t, h) if f != e]
            yield frozenset({e, others[0]})
            return
        seen_pairs.add(key)
    try:
        circles = enumerate_circles(g, max_edges=64)
    except Exception:
        circles = []
    for c in circles:
        yield c.support
        return


def has_minor(
    g: Graph,
    target: Graph,
    roots: Optional[Mapping[str, str]] = None,
) -> Optional[MinorWitness]:
    """A verified MinorWitness if target is a minor of g, else None.

    ``roots`` optionally pins target vertices to host vertices (the branch
    set of a rooted target vertex must contain its host root).  Respects
    multiplicities: distinct target parallels need distinct host edges.
    """
    if len(target.vertex_list) > MINOR_SEARCH_MAX_VERTICES or len(target.edge_list) > MINOR_SEARCH_MAX_EDGES:
        raise GraphError("minor search bound exceeded (target too large)")
    if len(g.edge_list) < len(target.edge_list) or len(g.vertex_list) < len(target.vertex_list):
        return None
    loops_at_target = {v: len(target.loops_at(v)) for v in target.vertex_list}
    if not roots and set(target.edge_list) and all(
        len(target.vertex_list) == 1 and loops_at_target[v] == 1 for v in target.vertex_list
    ):
        w = _loop_vertex_witness(g)
        if w is not None:
            tv = target.vertex_list[0]
            te = target.edge_list[0]
            w = MinorWitness({tv: w.branch_sets["v"]}, {te: w.edge_map["e"]})
            return w if verify_minor_witness(g, target, w) else None
        return None

    tverts = sorted(target.vertex_list, key=lambda v: -target.degree(v))
    host_vertices = g.vertex_list
    roots = dict(roots or {})

    def candidate_sets(tv: str, used: set) -> Iterable[frozenset]:
        """Connected vertex sets avoiding ``used``; rooted sets must contain
        the root."""
        must = roots.get(tv)
        if must is not None and must in used:
            return
        seeds = [must] if must is not None else [v for v in host_vertices if v not in used]
        emitted = set()
        for seed in seeds:
            # grow connected sets from the seed
            frontier: list[frozenset] = [frozenset({seed})]
            while frontier:
                cur = frontier.pop()
                if cur not in emitted:
                    emitted.add(cur)
                    yield cur
                if len(cur) >= len(host_vertices) - len(used):
                    continue
                expand = sorted(
                    {
                        u
                        for v in cur
                        for _, u in g.incident(v)
                        if u not in cur and u not in used and (must is not None or u > seed)
                    }
                )
                for u in expand:
                    frontier.append(cur | {u})

    order = tverts
    assignment: dict[str, frozenset] = {}

    def feasible_partial(i: int) -> bool:
        tv = order[i]
        vs = assignment[tv]
        # loops need enough cyclomatic slack inside the branch set
        if loops_at_target[order[i]]:
            sub = g.subgraph([e for e in g.edge_list if set(g.ends(e)) <= vs], vs)
            slack = len(sub.edge_list) - (len(vs) - 1)
            if slack < loops_at_target[tv]:
                return False
        for j in range(i):
            tu = order[j]
            need = target.multiplicity(tu, tv) if tu != tv else 0
            if need:
                have = sum(1 for e in g.edge_list if set(map(lambda x: _loc(x, assignment), g.ends(e))) == {tu, tv})
                if have < need:
                    return False
        return True

    def _loc(v, asg):
        for t, vs in asg.items():
            if v in vs:
                return t
        return None

    def search(i: int) -> Optional[dict[str, frozenset]]:
        if i == len(order):
            return dict(assignment)
        tv = order[i]
        used = set().union(*assignment.values()) if assignment else set()
        for vs in candidate_sets(tv, used):
            assignment[tv] = vs
            if feasible_partial(i):
                res = search(i + 1)
                if res is not None:
                    return res
            del assignment[tv]
        return None

    found = search(0)
    if found is None:
        return None
    # build the explicit edge injection
    forest = branch_forest(g, found)
    location = {}
    for t, vs in found.items():
        for v in vs:
            location[v] = t
    pools: dict[frozenset, list[str]] = {}
    for e in g.edge_list:
        if e in forest:
            continue
        t, h = g.ends(e)
        lt, lh = location.get(t), location.get(h)
        if lt is None or lh is None:
            continue
        pools.setdefault(frozenset({lt, lh}), []).append(e)
    emap: dict[str, str] = {}
    for te in target.edge_list:
        tt, th = target.ends(te)
        pool = pools.get(frozenset({tt, th}), [])
        if not pool:
            return None
        emap[te] = pool.pop(0)
    w = MinorWitness({t: frozenset(vs) for t, vs in found.items()}, emap)
    return w if verify_minor_witness(g, target, w) else None


def doubled_path_target() -> tuple[Graph, str, str]:
    """The doubled length-two path 2P2 with its end vertices, used for
    classifying bridges."""
    g = Graph(
        {
            "a1": ("u", "x"),
            "a2": ("u", "x"),
            "b1": ("x", "v"),
            "b2": ("x", "v"),
        }
    )
    return g, "u", "v"


# -- basis and witness lifting -----------------------------------------------------


def _tree_path_steps(g: Graph, tree: frozenset, a: str, b: str) -> list[DirectedEdge]:
    if a == b:
        return []
    adj: dict[str, list[tuple[str, str]]] = {}
    for e in tree:
        t, h = g.ends(e)
        adj.setdefault(t, []).append((e, h))
        adj.setdefault(h, []).append((e, t))
    prev: dict[str, tuple[str, str]] = {}
    seen = {a}
    stack = [a]
    while stack:
        v = stack.pop()
        for e, u in sorted(adj.get(v, [])):
            if u not in seen:
                seen.add(u)
                prev[u] = (v, e)
                stack.append(u)
    if b not in prev:
        raise GraphError("no tree path between lift endpoints")
    steps = []
    at = b
    while at != a:
        v, e = prev[at]
        t, _ = g.ends(e)
        steps.append(DirectedEdge(e, t == v))
        at = v
    return steps[::-1]


def lift_basis_deletion(
    g: Graph,
    s: Iterable[str],
    b: OrientedBasis,
    gains: GainAssignment,
) -> tuple[OrientedBasis, GainAssignment]:
    """Extend a basis and gains from g - s to g.

    Deleted edges that reconnect components get identity gain and join the
    implicit forest; each remaining deleted edge e contributes the circle
    through e in (g - s') + e, its gain solved so the circle is balanced.
    Identity-gain walks stay identity-gain and unbalancedness is preserved.
    """
    s = set(s)
    reduced = delete(g, s)
    if b.host.edges != reduced.edges:
        raise GraphError("basis does not live on g minus s")
    comp_index: dict[str, int] = {}
    for i, comp in enumerate(components(reduced)):
        for v in comp:
            comp_index[v] = i
    parent = list(range(len(components(reduced))))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    bridge_like: list[str] = []  # the forest T inside s
    rest: list[str] = []
    for e in sorted(s):
        t, h = g.ends(e)
        rt, rh = find(comp_index[t]), find(comp_index[h])
        if rt != rh:
            parent[rt] = rh
            bridge_like.append(e)
        else:
            rest.append(e)

    group = gains.group
    new_gains = dict(gains.gains)
    for e in bridge_like:
        new_gains[e] = identity(group)
    pairs = list(b.pairs)
    present = set(reduced.edge_list) | set(bridge_like)
    for e in rest:
        # circle through e in the edges restored so far plus e
        partial = Graph({x: g.edges[x] for x in present}, g.vertices)
        t, h = g.ends(e)
        path = _tree_path_steps(partial, spanning_forest(partial), h, t)
        support = frozenset({e} | {st.edge for st in path})
        walk = ClosedWalk(t, (DirectedEdge(e, True), *path))
        if walk_support(walk) != support:
            raise GraphError("lift produced an inconsistent circle walk")
        # solve gain(e) so the walk product is the identity
        acc = identity(group)
        for st in path:
            x = new_gains[st.edge]
            acc = op(acc, x if st.forward else inverse(x))
        new_gains[e] = inverse(acc)
        pairs.append((BinaryCycle(support), walk))
        present.add(e)
    ob = OrientedBasis(tuple(pairs), g)
    return ob, GainAssignment(group, new_gains)


def lift_basis_contraction(
    g: Graph,
    t: Iterable[str],
    b: OrientedBasis,
    gains: GainAssignment,
) -> tuple[OrientedBasis, GainAssignment]:
    """Lift a basis and gains from g/t (t a forest) back to g.

    Each walk has the unique tree path spliced in between consecutive edges;
    contracted edges receive identity gain, so walk gains are unchanged.
    """
    t = frozenset(t)
    contracted, vmap = contract(g, t)
    if b.host.edges != contracted.edges:
        raise GraphError("basis does not live on g/t")
    for e in t:
        te, th = g.ends(e)
        if te == th:
            raise GraphError("contraction set contains a loop")
    # contract() tolerates cycles in t; the lift needs a forest, since a
    # contracted circle would collapse a dimension
    tsub = g.subgraph(t, set())
    if len(tsub.edge_list) != len(tsub.vertices) - len(components(tsub)):
        raise GraphError("contraction set contains a circle")

    inverse_class: dict[str, list[str]] = {}
    for v in g.vertex_list:
        inverse_class.setdefault(vmap[v], []).append(v)

    def lift_walk(w: ClosedWalk) -> ClosedWalk:
        if not w.steps:
            return ClosedWalk(min(inverse_class[w.start]), ())
        ends = []
        for st in w.steps:
            a, bb = g.ends(st.edge)
            ends.append((a, bb) if st.forward else (bb, a))
        steps: list[DirectedEdge] = []
        for i, st in enumerate(w.steps):
            steps.append(st)
            nxt = ends[(i + 1) % len(ends)][0]
            steps.extend(_tree_path_steps(g, t, ends[i][1], nxt))
        start = ends[0][0]
        return ClosedWalk(start, tuple(steps))

    pairs = []
    for cycle, w in b.pairs:
        lw = lift_walk(w)
        walk_vertices(g, lw)
        pairs.append((BinaryCycle(walk_support(lw)), lw))
    group = gains.group
    new_gains = dict(gains.gains)
    for e in t:
        new_gains[e] = identity(group)
    return OrientedBasis(tuple(pairs), g), GainAssignment(group, new_gains)


# -- extrusion -----------------------------------------------------------------


def extrude(g: Graph, v: str, w: str, moved: Iterable[str]) -> Graph:
    """Split off a new vertex v' joined to v by a fresh edge, moving the
    selected v-w edges to v'.  Extruding along loops is not allowed."""
    moved = set(moved)
    if v == w:
        raise GraphError("cannot extrude along a loop")
    if not moved:
        raise GraphError("extrusion must move at least one edge")
    between = set(g.edges_between(v, w))
    if not moved <= between:
        raise GraphError("moved edges must join v and w")
    prime = v + "'"
    while prime in g.vertices:
        prime += "'"
    counter = 0
    new_edge = f"ext{counter}_{v}"
    while new_edge in g.edges:
        counter += 1
        new_edge = f"ext{counter}_{v}"
    edges = dict(g.edges)
    for e in moved:
        t, h = g.ends(e)
        edges[e] = (prime, h) if t == v else (t, prime)
    edges[new_edge] = (v, prime)
    return Graph(edges, g.vertices | {prime})


@dataclass(frozen=True)
class ReverseStep:
    """One reverse extrusion: contract ``edge`` (the single edge joining the
    split vertex to ``kept``), returning its parallel class to ``kept``."""

    vertex: str
    kept: str
    other: str
    edge: str
    returned_edges: tuple[str, ...]


def _reverse_moves(g: Graph) -> list[ReverseStep]:
    moves = []
    for y in g.vertex_list:
        nbrs = g.neighbors(y)
        if len(nbrs) != 2 or g.loops_at(y):
            continue
        for kept, other in ((nbrs[0], nbrs[1]), (nbrs[1], nbrs[0])):
            e = g.edges_between(y, kept)
            if len(e) == 1:
                moves.append(ReverseStep(y, kept, other, e[0], g.edges_between(y, other)))
    return moves


def is_extrusion_irreducible(g: Graph) -> bool:
    """No single reverse-extrusion step applies: every vertex with exactly
    two neighbors is multiply adjacent to both."""
    return not _reverse_moves(g)


def reverse_extrusion_reduce(
    g: Graph,
    prefer: Optional[Sequence[Graph]] = None,
) -> tuple[Graph, tuple[ReverseStep, ...]]:
    """Exhaustively search single reverse-extrusion steps down to an
    extrusion-irreducible graph.

    Reverse steps need not commute, so all reduction orders are explored with
    memoization on canonical forms.  When ``prefer`` is given, a reachable
    irreducible graph isomorphic to one of those is returned if any exists.
    """
    if any(g.is_loop(e) for e in g.edge_list):
        raise GraphError("reverse extrusion operates on loopless graphs")
    prefer_keys = {canonical_key(p) for p in (prefer or ())}
    memo: dict[tuple, tuple] = {}

    def run(h: Graph) -> tuple:
        """Returns (preferred result or None, fallback result)."""
        key = canonical_key(h)
        if key in memo:
            return memo[key]
        moves = _reverse_moves(h)
        if not moves:
            hit = (h, ()) if (not prefer_keys or key in prefer_keys) else None
            memo[key] = (hit, (h, ()))
            return memo[key]
        preferred = None
        fallback = None
        for mv in moves:
            reduced, _ = contract(h, {mv.edge})
            sub_pref, sub_fall = run(reduced)
            if fallback is None:
                fallback = (sub_fall[0], (mv,) + sub_fall[1])
            if sub_pref is not None:
                preferred = (sub_pref[0], (mv,) + sub_pref[1])
                break
        memo[key] = (preferred, fallback)
        return memo[key]

    preferred, fallback = run(g)
    return preferred if preferred is not None else fallback


def verify_reverse_steps(g: Graph, base: Graph, steps: Sequence[ReverseStep]) -> bool:
    """Check a reduction log: applying the contractions in order reaches a
    graph isomorphic to ``base``, and each step is invertible by extrusion."""
    h = g
    for step in steps:
        reduced, vmap = contract(h, {step.edge})
        rebuilt = extrude(reduced, vmap[step.vertex], vmap[step.other], step.returned_edges)
        if not is_isomorphic(rebuilt, h):
            return False
        h = reduced
    return is_isomorphic(h, base)


# -- Whitney twist ---------------------------------------------------------------


def whitney_twist(gg: GainGraph, u: str, v: str, side: Iterable[str]) -> GainGraph:
    """Twist a union of bridges of {u, v}: its edges swap their attachments
    at u and v and their gains are inverted.  Balance status is preserved."""
    g = gg.graph
    side = set(side)
    report = bridges_of_pair(g, u, v)
    bridge_edge_sets = [frozenset(b.subgraph.edge_list) for b in report.bridges]
    if len(bridge_edge_sets) < 2:
        raise GraphError("pair does not separate: fewer than two bridges")
    chosen = [bs for bs in bridge_edge_sets if bs <= side]
    covered = set().union(*chosen) if chosen else set()
    if covered != side or not side:
        raise GraphError("side must be a union of bridges")
    if len(chosen) == len(bridge_edge_sets):
        raise GraphError("side must exclude at least one bridge")
    swap = {u: v, v: u}
    edges = dict(g.edges)
    gains = dict(gg.assignment.gains)
    for e in side:
        t, h = g.ends(e)
        edges[e] = (swap.get(t, t), swap.get(h, h))
        gains[e] = inverse(gains[e])
    return GainGraph(Graph(edges, g.vertices), GainAssignment(gg.group, gains))


# -- bridges ---------------------------------------------------------------------

EDGE_BRIDGE = "EdgeBridge"
TYPE_I = "TypeI"
TYPE_II = "TypeII"


@dataclass(frozen=True)
class Bridge:
    subgraph: Graph
    kind: str
    separating_vertex: Optional[str] = None


@dataclass(frozen=True)
class BridgeReport:
    pair: tuple[str, str]
    bridges: tuple[Bridge, ...]


def bridges_of_pair(g: Graph, u: str, v: str) -> BridgeReport:
    """Partition the edges off {u, v} into bridges and classify each as an
    edge bridge, type I (no doubled-path minor; carries a separating vertex),
    or type II."""
    if u == v:
        raise GraphError("bridge pair must be two distinct vertices")
    for x in (u, v):
        if x not in g.vertices:
            raise GraphError(f"unknown vertex {x!r}")
    bridges: list[Bridge] = []
    # single-edge bridges: u-v edges and loops at u or v
    for e in g.edge_list:
        t, h = g.ends(e)
        if {t, h} <= {u, v}:
            bridges.append(Bridge(g.subgraph([e]), EDGE_BRIDGE))
    # component bridges
    comp_of: dict[str, int] = {}
    nxt = 0
    for root in g.vertex_list:
        if root in (u, v) or root in comp_of:
            continue
        comp_of[root] = nxt
        stack = [root]
        while stack:
            x = stack.pop()
            for _, y in g.incident(x):
                if y in (u, v) or y in comp_of:
                    continue
                comp_of[y] = nxt
                stack.append(y)
        nxt += 1
    groups: dict[int, set] = {}
    for e in g.edge_list:
        t, h = g.ends(e)
        inner = [x for x in (t, h) if x not in (u, v)]
        if not inner:
            continue
        groups.setdefault(comp_of[inner[0]], set()).add(e)
    target, tu, tv = doubled_path_target()
    for i in sorted(groups):
        edges = groups[i]
        verts = {x for e in edges for x in g.ends(e)}
        sub = g.subgraph(edges, verts)
        if {u, v} <= verts:
            witness = has_minor(sub, target, roots={tu: u, tv: v})
            if witness is not None:
                bridges.append(Bridge(sub, TYPE_II))
                continue
        bridges.append(Bridge(sub, TYPE_I, _separating_vertex(sub, u, v)))
    return BridgeReport((u, v), tuple(bridges))


def _separating_vertex(sub: Graph, u: str, v: str) -> Optional[str]:
    if u not in sub.vertices or v not in sub.vertices:
        return None
    inner = [x for x in sub.vertex_list if x not in (u, v)]
    for w in inner:
        remaining = [e for e in sub.edge_list if w not in sub.ends(e)]
        h = Graph({e: sub.edges[e] for e in remaining}, set(sub.vertices) - {w})
        # u disconnected from v without w?
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for _, y in h.incident(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if v not in seen:
            return w
    return None


def has_two_separation(g: Graph) -> Optional[tuple[str, str]]:
    """A vertex pair whose removal disconnects g, i.e. with at least two
    non-edge bridges; None if no such pair exists."""
    for u, v in itertools.combinations(g.vertex_list, 2):
        report = bridges_of_pair(g, u, v)
        non_edge = [b for b in report.bridges if b.kind != EDGE_BRIDGE]
        if len(non_edge) >= 2:
            return (u, v)
    return None
