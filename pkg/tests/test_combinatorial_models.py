import pytest

from combinatorial_models import (
    antiexceedances,
    blocks_cross,
    check_aexc_laws,
    closure_projection,
    element_from_partition,
    is_noncrossing,
    partition_of,
    reflections_below_D,
    render_partition,
    subset_law_applies,
    supports_closure,
)
from group_engine import CoxeterKind, CoxeterSpec, ProductConvention, build_group
from pop_dynamics import PopOperator
from utils.element_parser import parse_element

RL = ProductConvention.RIGHT_TO_LEFT


@pytest.mark.parametrize("cox_type,rank", [("A", 3), ("A", 4), ("B", 3), ("B", 4), ("D", 4), ("D", 5)])
def test_closure_matches_lattice_projection(make_context, make_lattice, make_scan, cox_type, rank):
    ctx = make_context(cox_type, rank)
    op = PopOperator(ctx, make_lattice(ctx))
    for w in make_scan(ctx).elements:
        assert closure_projection(ctx, w) == op.projection(w)


@pytest.mark.slow
def test_closure_matches_lattice_projection_d6_sample(make_context, make_lattice):
    import random

    from commands.verify_commands import random_signed_permutation

    ctx = make_context("D", 6)
    op = PopOperator(ctx, make_lattice(ctx))
    rng = random.Random(11)
    for _ in range(2000):
        w = random_signed_permutation(rng, 6, even=True)
        assert closure_projection(ctx, w) == op.projection(w)


def test_supports_closure(make_context):
    assert supports_closure(make_context("B", 3))
    assert not supports_closure(make_context("H", 3))
    assert not supports_closure(build_group("A", 3, coxeter=CoxeterSpec(CoxeterKind.BIPARTITE)))


def test_partition_round_trip(make_context, make_scan):
    ctx = make_context("B", 3)
    for w in make_scan(ctx).elements:
        assert element_from_partition(ctx, partition_of(ctx, w)) == w


def test_partition_of_coxeter_element(a3):
    partition = partition_of(a3, a3.c)
    assert partition.blocks == [(1, 2, 3, 4)]
    assert is_noncrossing(partition)
    assert not is_noncrossing(partition_of(a3, parse_element(a3, "(13)(24)")))


def test_type_b_partitions_are_symmetric(make_context, make_scan):
    ctx = make_context("B", 3)
    for w in make_scan(ctx).elements[:20]:
        assert partition_of(ctx, w).is_negation_closed()


def test_blocks_cross():
    assert blocks_cross([0, 2], [1, 3])
    assert not blocks_cross([0, 1], [2, 3])
    assert not blocks_cross([0, 3], [1, 2])
    assert not blocks_cross([0], [1, 2])


def test_render_partition(a3):
    text = render_partition(partition_of(a3, parse_element(a3, "(12)(34)")))
    assert text.splitlines()[0] == "A4 circle: 1 2 3 4"
    assert "  {1 2}" in text
    assert "  {3 4}" in text


def test_render_type_d_partition(make_context):
    ctx = make_context("D", 4)
    text = render_partition(partition_of(ctx, ctx.c))
    assert text.splitlines()[1] == "center: -4 4"


def test_reflections_below_d(make_context):
    ctx = make_context("D", 4)
    w = parse_element(ctx, "(1 2)")
    assert reflections_below_D(ctx, w, 1, 2)
    assert not reflections_below_D(ctx, w, 1, 3)
    assert not reflections_below_D(ctx, ctx.identity, 1, 2)
    with pytest.raises(ValueError):
        reflections_below_D(ctx, w, 1, -1)


def test_type_a_antiexceedances_of_c_inverse():
    ctx = build_group("A", 3, RL)
    c_inv = ctx.invert(ctx.c)
    stat = antiexceedances(ctx, c_inv)
    assert stat.aexc_set == {1, 2, 3}
    assert stat.cyc_gt1 == 1
    assert antiexceedances(ctx, ctx.identity).aexc == 0


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_type_a_laws(make_context, make_lattice, make_scan, rank):
    ctx = make_context("A", rank, RL)
    op = PopOperator(ctx, make_lattice(ctx))
    elements = make_scan(ctx).elements
    reports = check_aexc_laws(ctx, elements, op, op.projection)
    assert reports["count_by_projection"].passed
    assert reports["subset"].passed
    top = [w for w in elements if antiexceedances(ctx, w).aexc == rank]
    assert top == [ctx.invert(ctx.c)]


def test_type_b_laws(make_context, make_lattice, make_scan):
    ctx = make_context("B", 3, RL)
    op = PopOperator(ctx, make_lattice(ctx))
    reports = check_aexc_laws(ctx, make_scan(ctx).elements, op, op.projection, domain="signed")
    assert reports["subset"].passed
    assert reports["count_by_projection"].passed or reports["count_by_element"].passed
    assert antiexceedances(ctx, ctx.invert(ctx.c), "signed").aexc == 5


def test_s10_projection_and_antiexceedances():
    ctx = build_group("A", 9, RL)
    w = parse_element(ctx, "(1 2 4 6 5)(7 9)(8 10)")
    projection = closure_projection(ctx, w)
    assert projection == parse_element(ctx, "(1 2 4 5 6)(7 8 9 10)")
    pop = ctx.multiply(w, ctx.invert(projection))
    assert pop == parse_element(ctx, "(1 5 6)(7 8 9 10)")
    assert antiexceedances(ctx, w).aexc_set == {1, 5, 7, 8}
    assert antiexceedances(ctx, projection).cyc_gt1 == 2
    assert antiexceedances(ctx, pop).aexc_set == {1, 7}


@pytest.mark.parametrize("cox_type,rank,text", [
    ("B", 6, "(1̄ 3̄ 6)(1 3 6̄)(2̄)(2)(4̄ 5̄ 4 5)"),
    ("D", 7, "(1̄ 3̄ 6)(1 3 6̄)(2̄)(2)(4̄ 5̄ 4 5)(7̄ 7)"),
    ("D", 7, "(1̄)(1)(2̄ 7̄ 6)(2 7 6̄)(3̄ 4̄ 5̄)(3 4 5)"),
])
def test_noncrossing_diagrams_are_fixed_by_closure(cox_type, rank, text):
    ctx = build_group(cox_type, rank)
    w = parse_element(ctx, text)
    assert is_noncrossing(partition_of(ctx, w))
    assert closure_projection(ctx, w) == w


def test_type_b_closure_merges_crossing_balanced_blocks():
    ctx = build_group("B", 6)
    w = parse_element(ctx, "(-1 -3 6)(1 3 -6)(-4 4)(-5 5)")
    assert closure_projection(ctx, w) == parse_element(ctx, "(-1 -3 6)(1 3 -6)(-4 -5 4 5)")


def test_subset_law_only_reported_right_to_left(make_context, make_lattice, make_scan):
    ctx = make_context("A", 3)
    assert not subset_law_applies(ctx)
    op = PopOperator(ctx, make_lattice(ctx))
    reports = check_aexc_laws(ctx, make_scan(ctx).elements, op, op.projection)
    assert set(reports) == {"count_by_projection", "count_by_element"}
    assert subset_law_applies(make_context("A", 3, RL))



def test_models_need_typed_context(make_context):
    ctx = make_context("H", 3)
    with pytest.raises(ValueError):
        partition_of(ctx, ctx.c)
