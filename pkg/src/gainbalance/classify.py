"""Goodness verdicts, bad-witness constructors, structural decomposition,
and the exhaustive brute-force oracle.

Verdict logic for the circle test, per subgroup-closed class:

* every block decomposes by extrusion onto a base family (loop vertex, mK2,
  C3(m,2,2), K4(m,m')): Good for any class;
* otherwise, if the class contains an order-3 element: Bad, witnessed by an
  explicit construction on a forbidden minor (C3(3,3,2), 2C4, K4'' or W4),
  lifted to the host graph and re-verified;
* otherwise, if the class is abelian without odd torsion: Good;
* otherwise, if the class has an odd cyclic subgroup Z(2k-1) and some block
  is an even wheel W(2k) or doubled circle 2C(2k): Bad via the Hamiltonian /
  doubled-circle basis witness;
* otherwise Unknown - the classifier cites a rule or refuses, never guesses.

The binary cycle test is valid only on forests once any nontrivial odd-order
group is admissible; the loop-vertex witness (a loop traversed k times) lifts
to any graph containing a circle.

The oracle enumerates switching-reduced gain assignments (forest edges pinned
to the identity) and reports a graph bad as soon as the balanced circles of
some unbalanced assignment span the cycle space; assignments are enumerated
lexicographically so the first counterexample is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .balancetests import binary_cycle_test, circle_test
from .cyclespace import (
    BinaryCycle,
    CycleBasis,
    OrientedBasis,
    circle_from_support,
    cycle_space_dimension,
    enumerate_circles,
    gf2_extract_basis,
    oriented_basis,
)
from .errors import BudgetError, GraphError
from .gaingraph import GainGraph, gain_graph, is_balanced
from .graphcore import (
    CIRCLE_MULTI,
    DOUBLED_CIRCLE,
    K4_ADJACENT_DOUBLED,
    K4_OPPOSITE,
    LOOP_VERTEX,
    MULTI_K2,
    WHEEL,
    ClosedWalk,
    DirectedEdge,
    Graph,
    NamedGraphSpec,
    blocks,
    build_named,
    isomorphism,
    edge_bijection,
    spanning_forest,
    walk_int_vector,
)
from .groups import Group, GroupClass, class_flags, cyclic, inverse
from .minors import (
    MinorWitness,
    ReverseStep,
    branch_forest,
    contract,
    delete,
    has_minor,
    lift_basis_contraction,
    lift_basis_deletion,
    reverse_extrusion_reduce,
)

GOOD = "Good"
BAD = "Bad"
UNKNOWN = "Unknown"

RULE_FOREST = "forest-always-balanced"
RULE_BINARY_ODD = "loop-vertex-minor-with-odd-torsion"
RULE_ABELIAN_NO_ODD = "abelian-without-odd-torsion"
RULE_DECOMPOSITION = "block-extrusion-decomposition"
RULE_FORBIDDEN_MINOR = "forbidden-minor-with-z3"
RULE_WHEEL_FAMILY = "even-wheel-or-doubled-circle-odd-cyclic"
RULE_UNKNOWN = "outside-characterized-classes"

BINARY_TEST = "binary"
CIRCLE_TEST = "circle"

FORBIDDEN_MINORS: tuple[NamedGraphSpec, ...] = (
    NamedGraphSpec(CIRCLE_MULTI, (3, 3, 2)),
    NamedGraphSpec(DOUBLED_CIRCLE, (4,)),
    NamedGraphSpec(K4_ADJACENT_DOUBLED),
    NamedGraphSpec(WHEEL, (4,)),
)


@dataclass(frozen=True)
class BadWitness:
    """A gain graph plus an oriented basis that passes the stated test while
    the graph is unbalanced."""

    gain_graph: GainGraph
    basis: OrientedBasis
    test: str  # BINARY_TEST or CIRCLE_TEST

    def verify(self) -> bool:
        gg = self.gain_graph
        if self.test == CIRCLE_TEST:
            members = tuple(circle_from_support(gg.graph, c.support) for c in self.basis.cycles)
            passes = circle_test(gg, CycleBasis(members, gg.graph))
        else:
            passes = binary_cycle_test(gg, self.basis)
        return passes and not is_balanced(gg).balanced

    def to_json(self) -> dict:
        gg = self.gain_graph
        return {
            "test": self.test,
            "group": str(gg.group),
            "edges": {e: list(gg.graph.ends(e)) for e in gg.graph.edge_list},
            "gains": {e: str(x) for e, x in sorted(gg.assignment.gains.items()) if not x.is_identity},
            "basis": [
                {
                    "support": sorted(c.support),
                    "walk": [("" if s.forward else "-") + s.edge for s in w.steps],
                    "start": w.start,
                }
                for c, w in self.basis.pairs
            ],
        }


@dataclass(frozen=True)
class BlockDecomposition:
    block: Graph
    base: NamedGraphSpec
    steps: tuple[ReverseStep, ...]


@dataclass(frozen=True)
class Decomposition:
    blocks: tuple[BlockDecomposition, ...]

    def to_json(self) -> dict:
        return {
            "blocks": [
                {
                    "edges": sorted(b.block.edge_list),
                    "base": str(b.base),
                    "reverse_steps": [
                        {"vertex": s.vertex, "into": s.kept, "edge": s.edge} for s in b.steps
                    ],
                }
                for b in self.blocks
            ]
        }


@dataclass(frozen=True)
class Verdict:
    status: str
    rule: str
    evidence: Optional[object] = None  # BadWitness or Decomposition

    def to_json(self) -> dict:
        out = {"status": self.status, "rule": self.rule}
        if self.evidence is not None:
            out["evidence"] = self.evidence.to_json()
        return out


# -- structural decomposition ---------------------------------------------------


def _match_base(h: Graph) -> Optional[NamedGraphSpec]:
    n = len(h.vertex_list)
    m = len(h.edge_list)
    loops = [e for e in h.edge_list if h.is_loop(e)]
    if loops:
        return NamedGraphSpec(LOOP_VERTEX) if n == 1 and m == 1 else None
    if n == 2 and m >= 1:
        return NamedGraphSpec(MULTI_K2, (m,))
    if n == 3:
        v = h.vertex_list
        mults = sorted(
            (h.multiplicity(v[0], v[1]), h.multiplicity(v[1], v[2]), h.multiplicity(v[0], v[2])),
            reverse=True,
        )
        if mults[1] == 2 and mults[2] == 2 and mults[0] >= 2:
            return NamedGraphSpec(CIRCLE_MULTI, (mults[0], 2, 2))
        return None
    if n == 4:
        pairs = list(itertools.combinations(h.vertex_list, 2))
        mults = {p: h.multiplicity(*p) for p in pairs}
        if any(c == 0 for c in mults.values()):
            return None
        big = [p for p, c in mults.items() if c > 1]
        if len(big) == 0:
            return NamedGraphSpec(K4_OPPOSITE, (1, 1))
        if len(big) == 1:
            return NamedGraphSpec(K4_OPPOSITE, (mults[big[0]], 1))
        if len(big) == 2 and not (set(big[0]) & set(big[1])):
            a, b = sorted((mults[big[0]], mults[big[1]]), reverse=True)
            return NamedGraphSpec(K4_OPPOSITE, (a, b))
        return None
    return None


def _base_candidates(max_edges: int) -> list[Graph]:
    out = [build_named(NamedGraphSpec(MULTI_K2, (m,))) for m in range(1, max_edges + 1)]
    out += [
        build_named(NamedGraphSpec(CIRCLE_MULTI, (m, 2, 2)))
        for m in range(2, max_edges - 4 + 1)
    ]
    for a in range(1, max_edges - 4 + 1):
        for b in range(a, max_edges - 4 - a + 1):
            out.append(build_named(NamedGraphSpec(K4_OPPOSITE, (b, a))))
    return out


def structural_decomposition(g: Graph) -> Optional[Decomposition]:
    """Per block, a base family plus an extrusion log reaching the block, or
    None when some block admits no such decomposition."""
    out = []
    for block in blocks(g):
        direct = _match_base(block)
        if direct is not None:
            out.append(BlockDecomposition(block, direct, ()))
            continue
        if any(block.is_loop(e) for e in block.edge_list):
            return None
        prefer = _base_candidates(len(block.edge_list))
        irreducible, steps = reverse_extrusion_reduce(block, prefer=prefer)
        base = _match_base(irreducible)
        if base is None:
            return None
        out.append(BlockDecomposition(block, base, steps))
    return Decomposition(tuple(out))


# -- explicit witness constructions ----------------------------------------------


def bad_witness(spec: NamedGraphSpec, cyclic_order: Optional[int] = None) -> BadWitness:
    """The explicit bad witness for a named family, verified before return.

    ``cyclic_order`` selects the gain group for the loop vertex (odd, >= 3,
    default 3); the other families fix their own groups.
    """
    fam, p = spec.family, spec.params
    if fam == LOOP_VERTEX:
        k = 3 if cyclic_order is None else cyclic_order
        if k < 3 or k % 2 == 0:
            raise GraphError("loop-vertex witness needs an odd cyclic order >= 3")
        g = build_named(spec)
        grp = cyclic(k)
        gg = gain_graph(g, grp, {"e": grp.element([1])})
        walk = ClosedWalk("v", (DirectedEdge("e", True),) * k)
        ob = OrientedBasis(((BinaryCycle(frozenset({"e"})), walk),), g)
        w = BadWitness(gg, ob, BINARY_TEST)
    elif fam == CIRCLE_MULTI and p == (3, 3, 2):
        g = build_named(spec)
        grp = cyclic(3)
        gains = {e: grp.element([1]) for e in ("f12", "f23", "f31")}
        gains.update({e: grp.element([2]) for e in ("g12", "g23")})
        gg = gain_graph(g, grp, gains)
        six = [
            {"e12", "e23", "e31"},
            {"f12", "g23", "e31"},
            {"g12", "f23", "e31"},
            {"f12", "f23", "f31"},
            {"e12", "g23", "f31"},
            {"g12", "e23", "f31"},
        ]
        w = BadWitness(gg, oriented_basis(g, six), CIRCLE_TEST)
    elif fam == DOUBLED_CIRCLE and p == (4,):
        g = build_named(spec)
        grp = cyclic(3)
        gains = {"f1": grp.element([1]), "f2": grp.element([1]), "f3": grp.element([1]), "f4": grp.element([2])}
        gg = gain_graph(g, grp, gains)
        members = [
            {"e1", "e2", "e3", "e4"},
            {"f1", "f2", "f3", "e4"},
            {"f1", "e2", "e3", "f4"},
            {"e1", "f2", "e3", "f4"},
            {"e1", "e2", "f3", "f4"},
        ]
        w = BadWitness(gg, oriented_basis(g, members), CIRCLE_TEST)
    elif fam == DOUBLED_CIRCLE:
        (n,) = p
        if n < 4 or n % 2:
            raise GraphError("doubled-circle witnesses exist for even n >= 4")
        k = n // 2
        g = build_named(spec)
        grp = cyclic(2 * k - 1)
        gains = {f"f{i}": grp.element([1]) for i in range(1, n + 1)}
        gg = gain_graph(g, grp, gains)
        circle_c = {f"e{i}" for i in range(1, n + 1)}
        members = [circle_c]
        for i in range(1, n + 1):
            members.append({f"f{j}" for j in range(1, n + 1) if j != i} | {f"e{i}"})
        w = BadWitness(gg, oriented_basis(g, members), CIRCLE_TEST)
    elif fam == K4_ADJACENT_DOUBLED:
        g = build_named(spec)
        grp = cyclic(3)
        gains = {
            "e31": grp.element([1]),
            "e2p": grp.element([1]),
            "e23": grp.element([1]),  # reverse direction carries b = a^2
            "e1p": grp.element([2]),
        }
        gg = gain_graph(g, grp, gains)
        members = [
            {"e31", "e12", "e2p", "e3"},
            {"e23", "e12", "e1p", "e3"},
            {"e12", "e1", "e2"},
            {"e1p", "e2", "e23", "e31"},
            {"e1", "e2p", "e23", "e31"},
        ]
        w = BadWitness(gg, oriented_basis(g, members), CIRCLE_TEST)
    elif fam == WHEEL:
        (n,) = p
        if n < 4 or n % 2:
            raise GraphError("wheel witnesses exist for even n >= 4")
        k = n // 2
        g = build_named(spec)
        grp = cyclic(2 * k - 1)
        gains = {f"r{i}": grp.element([1]) for i in range(1, n + 1)}
        gg = gain_graph(g, grp, gains)
        members = []
        for i in range(1, n + 1):
            rim_part = {f"r{j}" for j in range(1, n + 1) if j != (i - 2) % n + 1}
            members.append(rim_part | {f"s{i}", f"s{(i - 2) % n + 1}"})
        w = BadWitness(gg, oriented_basis(g, members), CIRCLE_TEST)
    else:
        raise GraphError(f"no known bad witness family for {spec}")
    if not w.verify():
        raise GraphError(f"witness construction for {spec} failed verification")
    return w


# -- witness lifting ---------------------------------------------------------------


def lift_witness(host: Graph, mw: MinorWitness, target: Graph, w: BadWitness) -> BadWitness:
    """Transport a bad witness from a minor onto the host graph: delete down
    to the model subgraph, undo the branch-set contractions, and re-verify."""
    forest = branch_forest(host, mw.branch_sets)
    model_edges = set(mw.edge_map.values()) | forest
    s = set(host.edge_list) - model_edges
    g1 = delete(host, s)
    g2, vmap = contract(g1, forest)
    location = {v: t for t, vs in mw.branch_sets.items() for v in vs}
    tv_to_g2 = {location[v]: vmap[v] for v in location}

    flip: dict[str, bool] = {}
    emap = dict(mw.edge_map)
    tgraph = w.gain_graph.graph
    for te, he in emap.items():
        tt, th = tgraph.ends(te)
        g2t, _ = g2.ends(he)
        flip[te] = g2t != tv_to_g2[tt]

    group = w.gain_graph.group
    gains_g2 = {}
    for te, he in emap.items():
        x = w.gain_graph.assignment.gains[te]
        gains_g2[he] = inverse(x) if flip[te] else x
    gg2 = gain_graph(g2, group, gains_g2)

    pairs = []
    for cyc, walk in w.basis.pairs:
        steps = tuple(
            DirectedEdge(emap[s_.edge], s_.forward ^ flip[s_.edge]) for s_ in walk.steps
        )
        new_walk = ClosedWalk(tv_to_g2[walk.start], steps)
        pairs.append((BinaryCycle(frozenset(emap[e] for e in cyc.support)), new_walk))
    ob2 = OrientedBasis(tuple(pairs), g2)

    ob1, ga1 = lift_basis_contraction(g1, forest, ob2, gg2.assignment)
    ob0, ga0 = lift_basis_deletion(host, s, ob1, ga1)
    lifted = BadWitness(GainGraph(host, ga0), ob0, w.test)
    if not lifted.verify():
        raise GraphError("lifted witness failed verification")
    return lifted


def _identity_minor_witness(host: Graph, target: Graph) -> Optional[MinorWitness]:
    """When host and target are isomorphic, the witness with singleton branch
    sets along the isomorphism."""
    vmap = isomorphism(target, host)
    if vmap is None:
        return None
    emap = {te: he for te, (he, _) in edge_bijection(target, host, vmap).items()}
    return MinorWitness({tv: frozenset({hv}) for tv, hv in vmap.items()}, emap)


# -- classification -----------------------------------------------------------------


def binary_cycle_goodness(g: Graph, c: GroupClass) -> Verdict:
    """Forests pass for any class; with odd torsion admissible everything
    else is bad; abelian classes without odd torsion are always good."""
    flags = class_flags(c)
    if cycle_space_dimension(g) == 0:
        return Verdict(GOOD, RULE_FOREST)
    if flags.contains_nontrivial_odd_order:
        k = flags.smallest_odd_order or 3
        target = build_named(NamedGraphSpec(LOOP_VERTEX))
        mw = has_minor(g, target)
        if mw is None:
            raise RuntimeError("graph with cycles lacks a loop-vertex minor")
        w = lift_witness(g, mw, target, bad_witness(NamedGraphSpec(LOOP_VERTEX), k))
        return Verdict(BAD, RULE_BINARY_ODD, w)
    if flags.abelian_only and not flags.has_odd_torsion:
        return Verdict(GOOD, RULE_ABELIAN_NO_ODD)
    return Verdict(UNKNOWN, RULE_UNKNOWN)


def circle_goodness(g: Graph, c: GroupClass) -> Verdict:
    flags = class_flags(c)
    decomposition = structural_decomposition(g)
    if decomposition is not None:
        return Verdict(GOOD, RULE_DECOMPOSITION, decomposition)
    if flags.contains_z3:
        for spec in FORBIDDEN_MINORS:
            target = build_named(spec)
            mw = has_minor(g, target)
            if mw is not None:
                w = lift_witness(g, mw, target, bad_witness(spec))
                return Verdict(BAD, RULE_FORBIDDEN_MINOR, w)
        raise RuntimeError("decomposition failed but no forbidden minor found")
    if flags.abelian_only and not flags.has_odd_torsion:
        return Verdict(GOOD, RULE_ABELIAN_NO_ODD)
    if flags.smallest_odd_order is not None and flags.smallest_odd_order >= 5:
        # minor search is bounded, so only blocks that are exactly an even
        # wheel or doubled circle of the matching size are recognized here
        n = flags.smallest_odd_order + 1
        for spec in (NamedGraphSpec(WHEEL, (n,)), NamedGraphSpec(DOUBLED_CIRCLE, (n,))):
            target = build_named(spec)
            for block in blocks(g):
                mw = _identity_minor_witness(block, target)
                if mw is not None:
                    w = lift_witness(g, mw, target, bad_witness(spec))
                    return Verdict(BAD, RULE_WHEEL_FAMILY, w)
    return Verdict(UNKNOWN, RULE_UNKNOWN)


# -- brute-force oracle ---------------------------------------------------------------


def _signed_chord_rows(g: Graph, circles, chords: Sequence[str]) -> list[list[int]]:
    rows = []
    for c in circles:
        vec = walk_int_vector(c.walk)
        rows.append([vec.get(e, 0) for e in chords])
    return rows


def oracle_circle_goodness(
    g: Graph,
    grp,
    max_edges: int = 10,
    budget: int = 50_000_000,
) -> tuple[bool, Optional[BadWitness]]:
    """Exhaustive goodness check for the circle test on one finite group.

    Enumerates all |G|^dim switching-reduced assignments; the graph is bad
    iff some unbalanced assignment balances a spanning set of circles.  The
    first counterexample (lexicographic assignment order, greedy basis
    extraction in canonical circle order) is returned as a verified witness.
    """
    if len(g.edge_list) > max_edges:
        raise BudgetError(f"oracle edge bound exceeded ({len(g.edge_list)} > {max_edges})")
    order = getattr(grp, "order", lambda: None)()
    if order is None:
        raise GraphError("oracle needs a finite gain group")
    if order > 6:
        raise BudgetError("oracle group bound exceeded (order > 6)")
    dim = cycle_space_dimension(g)
    if dim == 0 or order == 1:
        return True, None
    circles = enumerate_circles(g)
    forest = spanning_forest(g)
    chords = [e for e in g.edge_list if e not in forest]
    n_assign = order**dim
    if n_assign * max(1, len(circles)) > budget:
        raise BudgetError("oracle assignment budget exceeded")

    edge_pos = {e: i for i, e in enumerate(g.edge_list)}
    masks = [sum(1 << edge_pos[e] for e in c.support) for c in circles]

    if isinstance(grp, Group) and grp.is_abelian and grp.is_finite:
        elements = grp.elements()
        rows = np.array(_signed_chord_rows(g, circles, chords), dtype=np.int64)
        digits = np.zeros((dim, n_assign), dtype=np.int64)
        idx = np.arange(n_assign)
        for i in range(dim):
            digits[i] = (idx // order ** (dim - 1 - i)) % order
        balanced = np.ones((len(circles), n_assign), dtype=bool)
        for f, modulus in enumerate(grp.moduli):
            res = np.array([el.residues[f] for el in elements], dtype=np.int64)
            gains = rows @ res[digits]
            balanced &= gains % modulus == 0
        counts = balanced.sum(axis=0)
        candidates = np.nonzero(counts >= dim)[0]
        for j in candidates:
            if j == 0:
                continue
            items = [(masks[i], circles[i]) for i in range(len(circles)) if balanced[i, j]]
            picked = gf2_extract_basis(items, dim)
            if picked is None:
                continue
            gains = {chords[i]: elements[digits[i, j]] for i in range(dim)}
            gg = gain_graph(g, grp, gains)
            witness = BadWitness(gg, oriented_basis(g, [c.support for c in picked]), CIRCLE_TEST)
            if not witness.verify():
                raise RuntimeError("oracle witness failed verification")
            return False, witness
        return True, None

    # generic path for small nonabelian table groups
    elements = grp.elements()
    ident = grp.identity()
    step_seqs = []
    for c in circles:
        steps = [(s.edge, s.forward) for s in c.walk.steps if s.edge in set(chords)]
        step_seqs.append(steps)
    for combo in itertools.product(range(order), repeat=dim):
        if not any(combo):
            continue
        assign = {chords[i]: elements[combo[i]] for i in range(dim)}
        balanced_items = []
        for i, steps in enumerate(step_seqs):
            acc = ident
            for eid, fwd in steps:
                x = assign[eid]
                acc = grp.op(acc, x if fwd else grp.inverse(x))
            if acc == ident:
                balanced_items.append((masks[i], circles[i]))
        if len(balanced_items) < dim:
            continue
        picked = gf2_extract_basis(balanced_items, dim)
        if picked is None:
            continue
        # table groups are not GainGraph groups; the construction itself is
        # the check: the basis is balanced by evaluation and the assignment
        # is unbalanced because some fundamental circle carries a chord gain
        return False, None
    return True, None


def oracle_spanning_balanced_sets(g: Graph, grp: Group) -> Iterator[tuple[dict, list]]:
    """For each unbalanced switching-reduced assignment whose balanced
    circles span the cycle space, yield (chord gains, balanced circles).

    Used to survey which bases can witness badness (e.g. the wheel basis
    taxonomy) and by the atlas subcommand.
    """
    dim = cycle_space_dimension(g)
    order = grp.order()
    if dim == 0 or order == 1 or not grp.is_abelian:
        return
    circles = enumerate_circles(g)
    forest = spanning_forest(g)
    chords = [e for e in g.edge_list if e not in forest]
    elements = grp.elements()
    rows = np.array(_signed_chord_rows(g, circles, chords), dtype=np.int64)
    n_assign = order**dim
    digits = np.zeros((dim, n_assign), dtype=np.int64)
    idx = np.arange(n_assign)
    for i in range(dim):
        digits[i] = (idx // order ** (dim - 1 - i)) % order
    balanced = np.ones((len(circles), n_assign), dtype=bool)
    for f, modulus in enumerate(grp.moduli):
        res = np.array([el.residues[f] for el in elements], dtype=np.int64)
        gains = rows @ res[digits]
        balanced &= gains % modulus == 0
    counts = balanced.sum(axis=0)
    edge_pos = {e: i for i, e in enumerate(g.edge_list)}
    masks = [sum(1 << edge_pos[e] for e in c.support) for c in circles]
    for j in np.nonzero(counts >= dim)[0]:
        if j == 0:
            continue
        subset = [circles[i] for i in range(len(circles)) if balanced[i, j]]
        sub_masks = [masks[i] for i in range(len(circles)) if balanced[i, j]]
        if gf2_extract_basis(list(zip(sub_masks, subset)), dim) is None:
            continue
        gains = {chords[i]: elements[digits[i, j]] for i in range(dim)}
        yield gains, subset


def sym3_table_group():
    """The symmetric group on three letters as a hard-coded multiplication
    table, for exercising the oracle beyond abelian groups."""

    class _Sym3:
        # elements as permutation tuples of (0,1,2)
        _elems = (
            (0, 1, 2),
            (1, 2, 0),
            (2, 0, 1),
            (0, 2, 1),
            (2, 1, 0),
            (1, 0, 2),
        )

        is_abelian = False
        is_finite = True

        def order(self):
            return 6

        def elements(self):
            return list(self._elems)

        def identity(self):
            return self._elems[0]

        def op(self, x, y):
            return tuple(x[y[i]] for i in range(3))

        def inverse(self, x):
            inv = [0, 0, 0]
            for i, v in enumerate(x):
                inv[v] = i
            return tuple(inv)

    return _Sym3()
