"""Binary Cycle Test, Circle Test, and the exact abelian balance analysis.

The abelian analysis works in the integer lattice spanned by the signed
traversal vectors of the basis walks (entry +1 when a walk crosses an edge in
reference orientation).  The Smith normal form of that lattice decides, for
any query circle, the order of its image in the quotient: order 1 means the
basis forces the circle balanced over every abelian gain group; a finite
order d > 1 admits explicit unbalanced witnesses over suitable cyclic groups;
infinite order admits one over the integers.

Switching is ignored throughout the abelian analysis: a switching changes a
closed walk's gain by a telescoping product that cancels, so it moves no
traversal vector.

All arithmetic is exact (Python integers).  Reports serialize to JSON.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .cyclespace import Circle, OrientedBasis, circle_from_support, is_cycle_basis
from .errors import GraphError
from .gaingraph import GainAssignment, GainGraph, gain_graph, is_balanced, walk_gain
from .graphcore import Graph, walk_int_vector
from .groups import cyclic


def binary_cycle_test(gg: GainGraph, ob: OrientedBasis) -> bool:
    """True iff every attached walk has identity gain.

    The orientations are taken as given; no search over alternative cyclic
    orientations is performed.
    """
    if ob.host.edges != gg.graph.edges:
        raise GraphError("oriented basis belongs to a different graph")
    if not is_cycle_basis(ob.cycles, gg.graph):
        raise GraphError("oriented cycles do not form a basis")
    return all(walk_gain(gg, w).is_identity for w in ob.walks)


def circle_test(gg: GainGraph, basis) -> bool:
    """True iff every member circle's canonical walk has identity gain."""
    members = list(basis.members)
    supports = [frozenset(getattr(m, "support", m)) for m in members]
    circles = [m if isinstance(m, Circle) else circle_from_support(gg.graph, s) for m, s in zip(members, supports)]
    if not is_cycle_basis(circles, gg.graph):
        raise GraphError("members do not form a basis")
    return all(walk_gain(gg, c.walk).is_identity for c in circles)


# -- Smith normal form ---------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """D = left @ A @ right with left/right unimodular and D diagonal with
    the divisibility chain d1 | d2 | ... ."""

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    shape: tuple[int, int]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    """Exact Smith normal form with minimal-absolute-value pivoting."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise GraphError("ragged matrix")
    left = [[int(i == j) for j in range(m)] for i in range(m)]
    right = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row i -= q * row j
        ai, aj = a[i], a[j]
        li, lj = left[i], left[j]
        for k in range(n):
            ai[k] -= q * aj[k]
        for k in range(m):
            li[k] -= q * lj[k]

    def col_op(i, j, q):  # col i -= q * col j
        for row in a:
            row[i] -= q * row[j]
        for row in right:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # minimal absolute value pivot in the remaining block
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t, then row t; rounding division keeps entries small
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility: pivot must divide the remaining block
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
            for k in range(m):
                left[t][k] = -left[t][k]
        t += 1
    diagonal = tuple(a[i][i] for i in range(min(m, n)))
    return SmithForm(diagonal, tuple(map(tuple, left)), tuple(map(tuple, right)), (m, n))


def _mat_vec(mat: Sequence[Sequence[int]], vec: Sequence[int]) -> list[int]:
    return [sum(r * v for r, v in zip(row, vec)) for row in mat]


def _vec_mat(vec: Sequence[int], mat: Sequence[Sequence[int]]) -> list[int]:
    n = len(mat[0]) if mat else 0
    return [sum(vec[i] * mat[i][j] for i in range(len(vec))) for j in range(n)]


# -- universal abelian analysis -------------------------------------------------


@dataclass(frozen=True)
class QueryReport:
    support: tuple[str, ...]
    order: Optional[int]  # None encodes infinite order


@dataclass(frozen=True)
class UniversalAbelianReport:
    """Torsion data of Z^E modulo the lattice of basis traversal vectors."""

    edge_order: tuple[str, ...]
    lattice_rank: int
    invariant_factors: tuple[int, ...]  # the nontrivial ones (> 1)
    queries: tuple[QueryReport, ...]
    _smith: SmithForm
    _graph: Graph
    _basis: OrientedBasis

    def order_of(self, z: Circle) -> Optional[int]:
        for q in self.queries:
            if set(q.support) == set(z.support):
                return q.order
        raise GraphError("circle was not among the report's queries")

    def to_json(self) -> dict:
        return {
            "edge_order": list(self.edge_order),
            "lattice_rank": self.lattice_rank,
            "invariant_factors": list(self.invariant_factors),
            "queries": [
                {"support": sorted(q.support), "order": q.order} for q in self.queries
            ],
        }


def _query_coordinates(report: UniversalAbelianReport, z: Circle) -> list[int]:
    vec = walk_int_vector(z.walk)
    v = [vec.get(e, 0) for e in report.edge_order]
    return _vec_mat(v, report._smith.right)


def _image_order(diag: Sequence[int], w: Sequence[int], rank: int) -> Optional[int]:
    if any(w[j] for j in range(rank, len(w))):
        return None
    n = 1
    for j in range(rank):
        n = math.lcm(n, diag[j] // math.gcd(diag[j], w[j]))
    return n


def implies_balance_abelian(g: Graph, b: OrientedBasis, queries: Sequence[Circle]) -> UniversalAbelianReport:
    """Order of each query circle in Z^E modulo the basis walk lattice.

    Order 1: the basis forces the circle balanced over every abelian group.
    Finite order d > 1: a witness exists over Cyclic(k) for suitable k (see
    :func:`abelian_witness`).  Infinite: a witness exists over the integers.
    """
    if not is_cycle_basis(b.cycles, g):
        raise GraphError("oriented cycles do not form a basis")
    edge_order = tuple(g.edge_list)
    rows = []
    for _, w in b.pairs:
        vec = walk_int_vector(w)
        rows.append([vec.get(e, 0) for e in edge_order])
    if not rows:
        rows = [[0] * len(edge_order)]
    sf = smith_normal_form(rows)
    rank = sf.rank
    diag = sf.diagonal
    out = []
    for z in queries:
        vec = walk_int_vector(z.walk)
        v = [vec.get(e, 0) for e in edge_order]
        w = _vec_mat(v, sf.right)
        out.append(QueryReport(tuple(sorted(z.support)), _image_order(diag, w, rank)))
    factors = tuple(d for d in sf.invariant_factors if d > 1)
    return UniversalAbelianReport(edge_order, rank, factors, tuple(out), sf, g, b)


def abelian_witness(report: UniversalAbelianReport, z: Circle, d: int) -> GainAssignment:
    """Explicit gains over Cyclic(d) balancing every basis walk while leaving
    ``z`` unbalanced; verified before return.

    Raises when no such assignment exists over Cyclic(d) (possible even for
    some divisors of the image order).
    """
    if d <= 1:
        raise GraphError("witness group must be nontrivial")
    sf = report._smith
    rank = sf.rank
    diag = sf.diagonal
    w = _query_coordinates(report, z)
    ncols = len(report.edge_order)
    y = [0] * ncols
    chosen = None
    for j in range(rank):
        gj = math.gcd(diag[j], d)
        if w[j] % gj:
            y[j] = d // gj
            chosen = j
            break
    if chosen is None:
        for j in range(rank, ncols):
            if w[j] % d:
                y[j] = 1
                chosen = j
                break
    if chosen is None:
        raise GraphError(f"no unbalanced witness over Cyclic({d}) for this query")
    x = _mat_vec(sf.right, y)
    group = cyclic(d)
    gains = {e: group.element([x[i] % d]) for i, e in enumerate(report.edge_order)}
    gg = gain_graph(report._graph, group, gains)
    balanced_basis = all(walk_gain(gg, w).is_identity for w in report._basis.walks)
    if balanced_basis and not walk_gain(gg, z.walk).is_identity and not is_balanced(gg).balanced:
        return gg.assignment
    raise GraphError("constructed witness failed verification")
