"""Gain assignments, walk gains, switching, and the balance decision.

Gains are stored in reference orientation only; traversing an edge against
its orientation contributes the inverse element.  Balance is decided by
switching to identity gains on a maximal forest and inspecting the
fundamental circles; the certificate for an unbalanced graph is the
least-identifier unbalanced fundamental circle.

Gain file format: a ``group`` header line, then ``gain <edge-id> <element>``
lines; edges omitted default to the identity::

    group Z 3
    gain f12 1
    gain g12 2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .cyclespace import Circle, fundamental_circles
from .errors import GraphError, ParseError
from .graphcore import ClosedWalk, Graph, spanning_forest, walk_vertices
from .groups import Group, GroupElement, identity, inverse, op, parse_element, parse_group_header


@dataclass(frozen=True)
class GainAssignment:
    """Edge gains in reference orientation; must cover every host edge."""

    group: Group
    gains: Mapping[str, GroupElement]

    def gain(self, eid: str, forward: bool = True) -> GroupElement:
        x = self.gains[eid]
        return x if forward else inverse(x)


@dataclass(frozen=True)
class GainGraph:
    graph: Graph
    assignment: GainAssignment

    def __post_init__(self):
        missing = set(self.graph.edge_list) - set(self.assignment.gains)
        extra = set(self.assignment.gains) - set(self.graph.edge_list)
        if missing or extra:
            raise GraphError(f"gain assignment mismatch (missing {sorted(missing)}, extra {sorted(extra)})")

    @property
    def group(self) -> Group:
        return self.assignment.group


def gain_graph(g: Graph, group: Group, gains: Mapping[str, GroupElement] | None = None) -> GainGraph:
    """Build a gain graph, filling unlisted edges with the identity."""
    full = {e: identity(group) for e in g.edge_list}
    for eid, x in (gains or {}).items():
        if eid not in full:
            raise GraphError(f"gain for unknown edge {eid!r}")
        if x.group != group:
            raise GraphError("gain element from a different group")
        full[eid] = x
    return GainGraph(g, GainAssignment(group, full))


@dataclass(frozen=True)
class Switching:
    """A vertex-indexed group function used to conjugate gains."""

    values: Mapping[str, GroupElement]


def walk_gain(gg: GainGraph, w: ClosedWalk) -> GroupElement:
    """Ordered product of step gains; reversed steps contribute inverses."""
    walk_vertices(gg.graph, w)
    acc = identity(gg.group)
    for step in w.steps:
        acc = op(acc, gg.assignment.gain(step.edge, step.forward))
    return acc


def switch(gg: GainGraph, f: Switching) -> GainGraph:
    """Replace g(e) by f(tail)^-1 g(e) f(head)."""
    missing = set(gg.graph.vertex_list) - set(f.values)
    if missing:
        raise GraphError(f"switching misses vertices {sorted(missing)}")
    new = {}
    for eid in gg.graph.edge_list:
        t, h = gg.graph.ends(eid)
        new[eid] = op(op(inverse(f.values[t]), gg.assignment.gains[eid]), f.values[h])
    return GainGraph(gg.graph, GainAssignment(gg.group, new))


def switch_to_forest(gg: GainGraph, forest: frozenset) -> tuple[GainGraph, Switching]:
    """Switch so every forest edge has identity gain.

    Walks the forest from the least vertex of each component; the returned
    switching satisfies switch(gg, f) == first result.
    """
    g = gg.graph
    tree_adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertex_list}
    for e in forest:
        if e not in g.edges:
            raise GraphError(f"forest edge {e!r} not in graph")
        t, h = g.ends(e)
        tree_adj[t].append((e, h))
        tree_adj[h].append((e, t))
    values: dict[str, GroupElement] = {}
    for root in g.vertex_list:
        if root in values:
            continue
        values[root] = identity(gg.group)
        stack = [root]
        while stack:
            v = stack.pop()
            for e, u in sorted(tree_adj[v]):
                if u in values:
                    continue
                t, _ = g.ends(e)
                # solve f(tail)^-1 g(e) f(head) = 1 along the traversal
                if t == v:
                    values[u] = op(inverse(gg.assignment.gains[e]), values[v])
                else:
                    values[u] = op(gg.assignment.gains[e], values[v])
                stack.append(u)
    f = Switching(values)
    switched = switch(gg, f)
    for e in forest:
        if not switched.assignment.gains[e].is_identity:
            raise GraphError("forest switching failed to reach identity gains")
    return switched, f


@dataclass(frozen=True)
class BalanceResult:
    balanced: bool
    certificate: Optional[Circle] = None
    certificate_gain: Optional[GroupElement] = None

    def __bool__(self):
        return self.balanced


def is_balanced(gg: GainGraph) -> BalanceResult:
    """Decide balance via a fundamental system of circles.

    If unbalanced, the certificate is the unbalanced fundamental circle whose
    defining non-forest edge has the least identifier.
    """
    forest = spanning_forest(gg.graph)
    switched, _ = switch_to_forest(gg, forest)
    basis = fundamental_circles(gg.graph, forest)
    # fundamental circles are ordered by their non-forest edge id
    for circle in basis.members:
        gain = walk_gain(switched, circle.walk)
        if not gain.is_identity:
            original_gain = walk_gain(gg, circle.walk)
            return BalanceResult(False, circle, original_gain)
    return BalanceResult(True)


# -- gain file format ---------------------------------------------------------


def parse_gain_text(text: str, g: Graph) -> GainGraph:
    group: Optional[Group] = None
    gains: dict[str, GroupElement] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "group":
            if group is not None:
                raise ParseError("duplicate group header", line=lineno)
            group = parse_group_header(" ".join(parts[1:]))
        elif parts[0] == "gain":
            if group is None:
                raise ParseError("gain line before group header", line=lineno)
            if len(parts) < 2:
                raise ParseError("gain line needs an edge id", line=lineno)
            eid = parts[1]
            if eid not in g.edges:
                raise ParseError(f"unknown edge {eid!r}", line=lineno)
            if eid in gains:
                raise ParseError(f"duplicate gain for {eid!r}", line=lineno)
            tokens = parts[2:]
            gains[eid] = identity(group) if not tokens else parse_element(group, tokens)
        else:
            raise ParseError(f"unrecognized declaration {line!r}", line=lineno)
    if group is None:
        raise ParseError("gain file lacks a group header")
    return gain_graph(g, group, gains)


def gains_to_text(gg: GainGraph) -> str:
    group = gg.group
    if group.kind == "FreeOn":
        header = "group free " + " ".join(group.symbols)
    else:
        header = "group " + " x ".join(f"Z {k}" for k in group.moduli)
    lines = [header]
    for eid in gg.graph.edge_list:
        x = gg.assignment.gains[eid]
        if not x.is_identity:
            lines.append(f"gain {eid} {x}")
    return "\n".join(lines) + "\n"
