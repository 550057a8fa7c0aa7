import pytest

from normal_forms import (
    block_decompose,
    commutation_components,
    dual_braid_lift,
    is_sif,
    projection_histogram,
    reflection_word,
    sif_count,
)
from pop_dynamics import PERIODIC, PopOperator
from utils.element_parser import parse_element
from utils.errors import PeriodicOrbitError
from utils.golden_tables import SIF_COUNTS


def test_worked_normal_form(a5, make_lattice):
    lattice = make_lattice(a5)
    w = parse_element(a5, "(135642)")
    op = PopOperator(a5, lattice)
    assert a5.format(op(w)) == "(12634)"
    lift = dual_braid_lift(a5, lattice, w)
    assert lift.format(a5) == "(246)·(12346)·(123456)"
    assert lift.product(a5) == w
    assert lift.is_monotone(lattice)


def test_lift_of_identity_is_empty(a3, make_lattice):
    lift = dual_braid_lift(a3, make_lattice(a3), a3.identity)
    assert len(lift) == 0
    assert lift.format(a3) == "e"


def test_lift_of_noncrossing_element_is_itself(a3, make_lattice):
    lift = dual_braid_lift(a3, make_lattice(a3), a3.c)
    assert lift.factors == [a3.c]


@pytest.mark.parametrize("cox_type,rank", [("A", 4), ("B", 3), ("D", 4), ("H", 3), ("I2", 8)])
def test_lift_soundness(make_context, make_lattice, make_scan, cox_type, rank):
    ctx = make_context(cox_type, rank)
    lattice = make_lattice(ctx)
    op = PopOperator(ctx, lattice)
    for w in make_scan(ctx).elements:
        lift = dual_braid_lift(ctx, lattice, w, op)
        assert lift.product(ctx) == w
        assert lift.is_monotone(lattice)
        assert all(f in lattice for f in lift.factors)


def test_periodic_elements_have_no_lift(make_context, make_lattice, make_scan):
    ctx = make_context("F", 4)
    scan = make_scan(ctx)
    periodic = [scan.elements[i] for i in range(len(scan)) if scan.depths[i] == PERIODIC]
    assert len(periodic) == 24
    with pytest.raises(PeriodicOrbitError):
        dual_braid_lift(ctx, make_lattice(ctx), periodic[0])


def test_lift_to_dict(a3, make_lattice):
    data = dual_braid_lift(a3, make_lattice(a3), a3.c).to_dict(a3)
    assert data == {"element": "(1234)", "factors": ["(1234)"], "indices": [make_lattice(a3).coxeter_index]}


def test_is_sif(a3, make_lattice):
    lattice = make_lattice(a3)
    assert is_sif(a3, lattice, a3.c)
    assert not is_sif(a3, lattice, a3.identity)
    assert is_sif(a3, lattice, parse_element(a3, "(13)(24)"))


@pytest.mark.parametrize("cox_type,rank", [("A", 2), ("A", 3), ("A", 4), ("A", 5), ("B", 2), ("B", 3), ("B", 4),
                                           ("D", 4), ("D", 5), ("F", 4), ("H", 3)])
def test_sif_counts(make_context, make_lattice, make_scan, cox_type, rank):
    ctx = make_context(cox_type, rank)
    assert sif_count(ctx, make_lattice(ctx), scan=make_scan(ctx)) == SIF_COUNTS[(cox_type, rank)]


def test_sif_count_without_scan(a3, make_lattice):
    assert sif_count(a3, make_lattice(a3)) == 7


@pytest.mark.parametrize("m", range(3, 9))
def test_dihedral_sif_count(make_context, make_lattice, m):
    ctx = make_context("I2", m)
    assert sif_count(ctx, make_lattice(ctx)) == m - 1


def test_d3_is_a3(make_context, make_lattice):
    ctx = make_context("D", 3)
    assert sif_count(ctx, make_lattice(ctx)) == SIF_COUNTS[("D", 3)]


@pytest.mark.slow
@pytest.mark.parametrize("cox_type,rank", [("A", 6), ("B", 5), ("D", 6), ("E", 6), ("H", 4)])
def test_large_sif_counts(make_context, make_lattice, make_scan, cox_type, rank):
    ctx = make_context(cox_type, rank)
    assert sif_count(ctx, make_lattice(ctx), scan=make_scan(ctx)) == SIF_COUNTS[(cox_type, rank)]


def test_projection_histogram(make_context, make_scan):
    ctx = make_context("B", 3)
    scan = make_scan(ctx)
    histogram = projection_histogram(scan)
    assert sum(histogram.values()) == ctx.group_order
    assert histogram[scan.lattice.coxeter_index] == SIF_COUNTS[("B", 3)]
    assert histogram[scan.lattice.identity_index] == 1


def test_reflection_word(make_context):
    ctx = make_context("B", 3)
    for w in (ctx.c, ctx.identity, ctx.invert(ctx.c)):
        word = reflection_word(ctx, w)
        assert len(word) == ctx.reflection_length(w)
        assert ctx.product([ctx.reflections[t] for t in word]) == w


def test_block_decomposition_of_commuting_pair(a3, make_lattice):
    lattice = make_lattice(a3)
    w = parse_element(a3, "(12)(34)")
    decomposition = block_decompose(a3, lattice, w)
    assert len(decomposition.blocks) == 2
    assert decomposition.all_sif
    assert sorted(a3.format(f) for f in decomposition.factors) == ["(12)", "(34)"]


def test_block_decomposition_factors_multiply_back(make_context, make_lattice, make_scan):
    ctx = make_context("B", 3)
    lattice = make_lattice(ctx)
    for w in make_scan(ctx).elements:
        decomposition = block_decompose(ctx, lattice, w)
        assert ctx.product(decomposition.factors) == w


def test_coxeter_element_is_one_block(a3, make_lattice):
    decomposition = block_decompose(a3, make_lattice(a3), a3.c)
    assert decomposition.block_coxeter == [a3.c]
    assert decomposition.all_sif
    assert commutation_components(a3, 0) == []
