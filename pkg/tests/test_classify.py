import random

import pytest

from gainbalance.balancetests import implies_balance_abelian
from gainbalance.classify import (
    BAD,
    BINARY_TEST,
    CIRCLE_TEST,
    GOOD,
    UNKNOWN,
    BadWitness,
    FORBIDDEN_MINORS,
    bad_witness,
    binary_cycle_goodness,
    circle_goodness,
    lift_witness,
    oracle_circle_goodness,
    oracle_spanning_balanced_sets,
    structural_decomposition,
    sym3_table_group,
)
from gainbalance.cyclespace import (
    circle_from_support,
    enumerate_circles,
    oriented_basis,
)
from gainbalance.enumeration import inseparable_multigraphs
from gainbalance.errors import BudgetError, GraphError
from gainbalance.gaingraph import gain_graph
from gainbalance.graphcore import (
    Graph,
    build_named,
    grid_faces,
    is_isomorphic,
    parse_graph_spec,
    spanning_forest,
)
from gainbalance.groups import ALL, EXPLICIT, GroupClass, abelian_product, cyclic, free_on, parse_class_spec
from gainbalance.minors import extrude, has_minor, verify_reverse_steps
from conftest import named, triangle


Z3 = cyclic(3)
CZ3 = parse_class_spec("contains-z3")


# -- witnesses ----------------------------------------------------------------


@pytest.mark.parametrize(
    "tag,order",
    [
        ("K1loop", 3),
        ("K1loop", 5),
        ("K1loop", 7),
        ("C3(3,3,2)", None),
        ("2C4", None),
        ("K4dd", None),
        ("W4", None),
        ("W6", None),
        ("W8", None),
        ("2C6", None),
        ("2C8", None),
    ],
)
def test_bad_witness_families_verify(tag, order):
    spec = parse_graph_spec(tag)
    w = bad_witness(spec, order)
    assert w.verify()
    expected_group = {
        "K1loop": order or 3,
        "C3(3,3,2)": 3,
        "2C4": 3,
        "K4dd": 3,
        "W4": 3,
        "W6": 5,
        "W8": 7,
        "2C6": 5,
        "2C8": 7,
    }[tag]
    assert w.gain_graph.group == cyclic(expected_group)


def test_bad_witness_rejects_even_loop_order():
    with pytest.raises(GraphError):
        bad_witness(parse_graph_spec("K1loop"), 4)


def test_bad_witness_unknown_family():
    with pytest.raises(GraphError):
        bad_witness(parse_graph_spec("C3(2,2,2)"))


def test_w4_witness_details():
    w = bad_witness(parse_graph_spec("W4"))
    gg = w.gain_graph
    assert all(gg.assignment.gains[f"s{i}"].is_identity for i in range(1, 5))
    rim = circle_from_support(gg.graph, {"r1", "r2", "r3", "r4"})
    from gainbalance.gaingraph import walk_gain

    assert walk_gain(gg, rim.walk) == Z3.element([1])


def test_2c4_witness_is_odd_sequence_type():
    w = bad_witness(parse_graph_spec("2C4"))
    weights = sorted(sum(1 for e in c.support if e.startswith("f")) for c, _ in w.basis.pairs)
    assert weights == [0, 2, 2, 2, 3]  # exactly one odd-weight member


# -- structural decomposition -----------------------------------------------------


def test_decomposition_fan():
    d = structural_decomposition(named("Fan(1;1,1)"))
    assert d is not None
    assert str(d.blocks[0].base) == "MultiK2(3)"
    assert verify_reverse_steps(d.blocks[0].block, build_named(d.blocks[0].base), d.blocks[0].steps)


def test_decomposition_w4_fails(w4):
    assert structural_decomposition(w4) is None


def test_decomposition_base_graph_identity():
    d = structural_decomposition(named("K4(3,2)"))
    assert d is not None
    assert str(d.blocks[0].base) == "K4Opposite(3,2)"
    assert d.blocks[0].steps == ()


def test_decomposition_loop_and_blocks():
    g = Graph({"l": ("a", "a"), "e1": ("a", "b"), "e2": ("b", "a"), "e3": ("b", "c")})
    d = structural_decomposition(g)
    assert d is not None
    bases = sorted(str(b.base) for b in d.blocks)
    assert bases == ["LoopVertex", "MultiK2(1)", "MultiK2(2)"]


def test_decomposition_quartet_fails():
    for spec in FORBIDDEN_MINORS:
        assert structural_decomposition(build_named(spec)) is None


def test_decomposition_replay_various():
    for tag in ("C3(2,2,1)", "C3(4,2,2)", "Fan(2;1,3)", "mK2(5)", "C4(1,1,1,1)", "C5(1,1,1,1,1)"):
        g = named(tag)
        d = structural_decomposition(g)
        assert d is not None, tag
        for blk in d.blocks:
            assert verify_reverse_steps(blk.block, build_named(blk.base), blk.steps)


def test_grid_contains_wheel_minor_and_is_bad():
    # contracting the four corners of the 3x3 grid into mid-side vertices
    # leaves the four-spoke wheel, so the grid is bad once Z3 is admissible
    g = named("Grid(2,2)")
    assert structural_decomposition(g) is None
    assert has_minor(g, named("W4")) is not None
    v = circle_goodness(g, CZ3)
    assert v.status == BAD and v.evidence.verify()


# -- circle goodness -----------------------------------------------------------------


def test_quartet_bad_with_verified_witness():
    for spec in FORBIDDEN_MINORS:
        g = build_named(spec)
        v = circle_goodness(g, CZ3)
        assert v.status == BAD
        assert isinstance(v.evidence, BadWitness)
        assert v.evidence.verify()


def test_quartet_good_without_z3():
    for spec in FORBIDDEN_MINORS:
        g = build_named(spec)
        assert circle_goodness(g, parse_class_spec("groups:Z2,Z4")).status == GOOD
        assert circle_goodness(g, parse_class_spec("groups:Z2xZ2")).status == GOOD


def test_good_families_any_class():
    classes = [
        GroupClass(ALL),
        parse_class_spec("abelian"),
        CZ3,
        GroupClass(EXPLICIT, (free_on("a", "b"),)),
    ]
    for tag in ("C3(5,2,2)", "K4(3,2)", "mK2(6)", "Fan(1;1,1)", "C3(2,2,1)", "K1loop"):
        g = named(tag)
        for c in classes:
            v = circle_goodness(g, c)
            assert v.status == GOOD, (tag, str(c))
            assert v.rule == "block-extrusion-decomposition"


def test_wheel_6_bad_for_z5():
    v = circle_goodness(named("W6"), parse_class_spec("groups:Z5"))
    assert v.status == BAD
    assert v.evidence.verify()
    assert v.evidence.gain_graph.group == cyclic(5)


def test_doubled_circle_6_bad_for_z5():
    v = circle_goodness(named("2C6"), parse_class_spec("groups:Z5"))
    assert v.status == BAD and v.evidence.verify()


def test_unknown_for_uncharacterized():
    # W4 with a nonabelian torsion-free class: no rule applies
    v = circle_goodness(named("W4"), GroupClass(EXPLICIT, (free_on("a", "b"),)))
    assert v.status == UNKNOWN


def test_bad_verdict_lifts_to_bigger_host():
    host = extrude(named("C3(3,3,2)"), "v1", "v2", ["e12"])
    host2 = Graph({**host.edges, "pend": ("v3", "z")}, host.vertices | {"z"})
    v = circle_goodness(host2, CZ3)
    assert v.status == BAD
    assert v.evidence.verify()
    assert v.evidence.gain_graph.graph == host2


def test_circle_goodness_w5():
    # W5 contains W4, so it is bad once Z3 is admissible
    v = circle_goodness(named("W5"), CZ3)
    assert v.status == BAD and v.evidence.verify()


# -- binary goodness -------------------------------------------------------------------


def test_binary_forest_good_any_class():
    tree = Graph({"e1": ("a", "b"), "e2": ("b", "c")})
    for c in (GroupClass(ALL), CZ3, parse_class_spec("groups:Z2")):
        assert binary_cycle_goodness(tree, c).status == GOOD


def test_binary_triangle_bad_with_z3():
    v = binary_cycle_goodness(triangle(), parse_class_spec("groups:Z3"))
    assert v.status == BAD
    assert v.evidence.test == BINARY_TEST
    assert v.evidence.verify()
    walk = v.evidence.basis.pairs[0][1]
    assert len(walk.steps) == 9  # three times around the lifted triangle


def test_binary_uses_smallest_odd_order():
    v = binary_cycle_goodness(triangle(), parse_class_spec("groups:Z10"))
    assert v.status == BAD
    assert v.evidence.gain_graph.group == cyclic(5)


def test_binary_two_groups_good():
    for tag in ("W4", "2C4", "K4dd"):
        assert binary_cycle_goodness(named(tag), parse_class_spec("groups:Z2,Z4")).status == GOOD


def test_binary_unknown_for_free():
    v = binary_cycle_goodness(named("W4"), GroupClass(EXPLICIT, (free_on("a", "b"),)))
    assert v.status == UNKNOWN


# -- oracle ------------------------------------------------------------------------------


def test_oracle_2c3_good():
    good, w = oracle_circle_goodness(named("C3(2,2,2)"), Z3)
    assert good and w is None


def test_oracle_2c4_bad_odd_sequence_resolution():
    good, w = oracle_circle_goodness(named("2C4"), Z3)
    assert not good
    assert w.verify()
    # the basis of one all-e quadrilateral plus the four weight-one
    # quadrilaterals is never balanced by an unbalanced assignment: balancing
    # each weight-one member forces every parallel gain equal, i.e. balance.
    # The genuinely bad bases pair the all-e quadrilateral either with the
    # four all-but-one-f quadrilaterals or with the one-odd-sequence family.
    g = named("2C4")
    weight_one_family = {frozenset({"e1", "e2", "e3", "e4"})} | {
        frozenset({f"f{i}"} | {f"e{j}" for j in range(1, 5) if j != i}) for i in range(1, 5)
    }
    seen_any = False
    for gains, subset in oracle_spanning_balanced_sets(g, Z3):
        seen_any = True
        supports = {frozenset(c.support) for c in subset}
        assert not weight_one_family <= supports
        weights = sorted(sum(1 for e in c.support if e.startswith("f")) % 2 for c in subset)
        assert weights.count(1) in (1, 4)
    assert seen_any


def test_oracle_c332():
    assert oracle_circle_goodness(named("C3(3,3,2)"), cyclic(2))[0]
    good, w = oracle_circle_goodness(named("C3(3,3,2)"), Z3)
    assert not good and w.verify()


def test_oracle_w4_groups():
    assert not oracle_circle_goodness(named("W4"), Z3)[0]
    assert oracle_circle_goodness(named("W4"), cyclic(2))[0]
    assert oracle_circle_goodness(named("W4"), cyclic(4))[0]
    assert oracle_circle_goodness(named("W4"), abelian_product(2, 2))[0]


def test_oracle_budget_and_bounds():
    with pytest.raises(BudgetError):
        oracle_circle_goodness(named("Grid(2,3)"), Z3)
    with pytest.raises(BudgetError):
        oracle_circle_goodness(named("2C4"), Z3, budget=10)
    with pytest.raises(GraphError):
        oracle_circle_goodness(named("W4"), free_on("a"))


def test_oracle_sym3():
    s3 = sym3_table_group()
    assert oracle_circle_goodness(named("C3(2,2,2)"), s3)[0]
    good, _ = oracle_circle_goodness(named("2C4"), s3)
    assert not good  # S3 contains Z3


def test_oracle_first_counterexample_deterministic():
    a = oracle_circle_goodness(named("2C4"), Z3)[1]
    b = oracle_circle_goodness(named("2C4"), Z3)[1]
    assert a.gain_graph.assignment.gains == b.gain_graph.assignment.gains
    assert [c.support for c, _ in a.basis.pairs] == [c.support for c, _ in b.basis.pairs]


def test_w4_basis_taxonomy_smoke():
    w4 = named("W4")
    hams = {frozenset(c.support) for c in enumerate_circles(w4) if len(c.support) == 5}
    seen = 0
    for gains, subset in oracle_spanning_balanced_sets(w4, Z3):
        seen += 1
        assert {frozenset(c.support) for c in subset} == hams
    assert seen == 2  # the generator and its inverse


def test_grid_face_basis_implies_balance():
    rng = random.Random(1234)
    for r, c in ((2, 2), (2, 3)):
        g = named(f"Grid({r},{c})")
        faces = grid_faces(r, c)
        ob = oriented_basis(g, faces)
        circles = enumerate_circles(g)
        queries = rng.sample(circles, min(100, len(circles)))
        rep = implies_balance_abelian(g, ob, queries)
        assert all(q.order == 1 for q in rep.queries)


# -- classifier vs oracle spot checks ----------------------------------------------------


def test_classifier_never_contradicts_oracle_small():
    for g in inseparable_multigraphs(5):
        for grp in (cyclic(2), Z3, cyclic(4)):
            c = GroupClass(EXPLICIT, (grp,))
            verdict = circle_goodness(g, c)
            good, _ = oracle_circle_goodness(g, grp)
            if verdict.status == GOOD:
                assert good
            elif verdict.status == BAD:
                assert not good


def test_classifier_matches_oracle_on_eight_edge_boundary():
    # at eight edges the forbidden minors themselves enter the universe, so
    # the Z3 verdict flips to Bad exactly on the quartet
    bad_seen = 0
    for g in inseparable_multigraphs(8):
        if len(g.edge_list) != 8:
            continue
        verdict = circle_goodness(g, CZ3)
        good, _ = oracle_circle_goodness(g, Z3)
        assert (verdict.status == GOOD) == good, sorted(g.edges.items())
        if verdict.status == BAD:
            assert verdict.evidence.verify()
            bad_seen += 1
    assert bad_seen == 4  # exactly the forbidden-minor quartet
