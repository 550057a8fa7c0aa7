import numpy as np
import pytest

from group_engine import CoxeterKind, CoxeterSpec, ProductConvention
from pop_dynamics import (
    EVENTUALLY_PERIODIC,
    PERIODIC,
    PopOperator,
    Terminal,
    _find_conjugator,
    conjugation_orbit_set,
    depth_table,
    forward_orbit,
    inverse_coxeter_report,
    is_single_cycle,
    max_orbit_size,
    monotonicity_failures,
    pop_map,
    resolve_depths,
    sif_preimage_failures,
    table_from_scan,
    verify_equivariance,
)
from utils.golden_tables import DEPTH_TABLES, PARTIAL_DEPTH_TABLES, compare_depth_row, dihedral_table

FAST_TABLES = [("A", 2), ("A", 3), ("A", 4), ("A", 5), ("B", 2), ("B", 3), ("B", 4), ("H", 3), ("D", 5)]


@pytest.mark.parametrize("cox_type,rank", FAST_TABLES)
def test_depth_tables(make_context, make_scan, cox_type, rank):
    table = table_from_scan(make_scan(make_context(cox_type, rank)))
    counts, periodic = DEPTH_TABLES[(cox_type, rank)]
    assert table.row() == counts
    assert table.periodic_count == periodic
    assert table.eventually_periodic_count == 0


def test_d4_table_fixed_entries(make_context, make_scan):
    ctx = make_context("D", 4)
    table = table_from_scan(make_scan(ctx))
    assert table.total == 192
    assert compare_depth_row("D", 4, table.row(), table.periodic_count)
    for depth, count in PARTIAL_DEPTH_TABLES[("D", 4)].items():
        assert table.counts[depth] == count


def test_f4_table_has_two_periodic_orbits(make_context, make_scan):
    table = table_from_scan(make_scan(make_context("F", 4)))
    assert table.row() == DEPTH_TABLES[("F", 4)][0]
    assert table.periodic_count == 24
    assert table.periodic_cycle_lengths == [12, 12]


@pytest.mark.parametrize("m", range(3, 11))
def test_dihedral_closed_form(make_context, make_scan, m):
    table = table_from_scan(make_scan(make_context("I2", m)))
    assert list(table.row()) == dihedral_table(m)


@pytest.mark.slow
@pytest.mark.parametrize("cox_type,rank", [("B", 5), ("D", 6), ("E", 6), ("H", 4)])
def test_large_depth_tables(make_context, make_scan, cox_type, rank):
    table = table_from_scan(make_scan(make_context(cox_type, rank)))
    counts, periodic = DEPTH_TABLES[(cox_type, rank)]
    assert table.row() == counts
    assert table.periodic_count == periodic


@pytest.mark.slow
def test_h4_periodic_orbits(make_context, make_scan):
    table = table_from_scan(make_scan(make_context("H", 4)))
    assert table.periodic_orbits == 60
    assert set(table.periodic_cycle_lengths) == {30}


def test_identity_orbit(a3, make_lattice):
    orbit = forward_orbit(a3, make_lattice(a3), a3.identity)
    assert orbit.trajectory == [a3.identity]
    assert orbit.terminal is Terminal.REACHES_IDENTITY
    assert orbit.transient_length == 0


def test_noncrossing_elements_pop_to_identity(make_context, make_lattice):
    ctx = make_context("B", 3)
    lattice = make_lattice(ctx)
    op = PopOperator(ctx, lattice)
    for w in lattice.elements:
        assert op(w) == ctx.identity


def test_coxeter_element_orbit(a3, make_lattice):
    orbit = forward_orbit(a3, make_lattice(a3), a3.c)
    assert orbit.trajectory == [a3.c, a3.identity]
    assert orbit.projections[0] == a3.c


def test_catalan_preimages_of_identity(make_context, make_scan):
    ctx = make_context("H", 3)
    scan = make_scan(ctx)
    assert scan.preimage_counts()[scan.index[ctx.identity]] == ctx.catalan_number


@pytest.mark.parametrize("cox_type,rank", [("A", 4), ("B", 3), ("D", 4), ("H", 3), ("I2", 7)])
def test_inverse_coxeter_orbit(make_context, make_lattice, make_scan, cox_type, rank):
    ctx = make_context(cox_type, rank)
    report = inverse_coxeter_report(ctx, make_lattice(ctx), make_scan(ctx))
    assert report.passed
    assert report.orbit_size == ctx.coxeter_number


@pytest.mark.parametrize("cox_type,rank", [("A", 5), ("B", 4), ("D", 4), ("H", 3)])
def test_monotonicity(make_context, make_lattice, make_scan, cox_type, rank):
    ctx = make_context(cox_type, rank)
    op = PopOperator(ctx, make_lattice(ctx))
    assert monotonicity_failures(op, make_scan(ctx).elements) == []


def test_max_orbit_size_is_h_for_coincidental_types(make_context, make_scan):
    for cox_type, rank in (("A", 4), ("B", 4), ("H", 3)):
        ctx = make_context(cox_type, rank)
        assert max_orbit_size(make_scan(ctx)) == ctx.coxeter_number


@pytest.mark.parametrize("rank", [4, 5])
def test_type_d_orbits_end_by_step_2n_minus_3(make_context, make_scan, rank):
    scan = make_scan(make_context("D", rank))
    table = table_from_scan(scan)
    assert (scan.depths >= 0).all()
    assert int(scan.depths.max()) == 2 * rank - 3
    assert len(table.counts) == 2 * rank - 2
    assert table.periodic_count == 0
    assert max_orbit_size(scan) == 2 * rank - 2


@pytest.mark.parametrize("cox_type,rank", [("B", 3), ("D", 4), ("H", 3)])
def test_only_preimage_of_full_projection_is_wc(make_context, make_scan, cox_type, rank):
    scan = make_scan(make_context(cox_type, rank))
    assert (scan.projection_index == scan.lattice.coxeter_index).any()
    assert sif_preimage_failures(scan) == []


def test_resolve_depths():
    pop_index = np.array([0, 0, 1, 4, 3, 3])
    depths, cycles = resolve_depths(pop_index, 0)
    assert depths.tolist() == [0, 1, 2, PERIODIC, PERIODIC, EVENTUALLY_PERIODIC]
    assert cycles == [2]


def test_standard_and_bipartite_tables_agree(make_context):
    report = verify_equivariance(make_context("A", 4), CoxeterSpec(), CoxeterSpec(CoxeterKind.BIPARTITE))
    assert report.tables_equal
    assert report.conjugation_checked == 120
    assert report.passed


def test_convention_does_not_change_tables(make_context, make_lattice):
    left = make_context("B", 3)
    right = make_context("B", 3, ProductConvention.RIGHT_TO_LEFT)
    assert depth_table(left, make_lattice(left)).row() == depth_table(right, make_lattice(right)).row()


def test_closure_mode_matches_lattice_mode(make_context, make_lattice):
    ctx = make_context("A", 4)
    lattice = make_lattice(ctx)
    by_closure = depth_table(ctx, lattice, mode="closure")
    assert by_closure.row() == DEPTH_TABLES[("A", 4)][0]


def test_closure_mode_needs_typed_context(make_context, make_lattice):
    ctx = make_context("H", 3)
    with pytest.raises(ValueError):
        PopOperator(ctx, make_lattice(ctx), mode="closure")


def test_conjugation_orbit_set_f4(make_context, make_lattice):
    ctx = make_context("F", 4)
    op = PopOperator(ctx, make_lattice(ctx))
    for k in (5, 7):
        members = conjugation_orbit_set(ctx, k)
        assert len(members) == 12
        target = ctx.power(ctx.c, k)
        assert all(ctx.conjugate(ctx.c, ctx.invert(w)) == target for w in members)
        assert is_single_cycle(op, members)


def test_conjugation_orbit_search_strategies_agree(make_context):
    ctx = make_context("F", 4)
    assert set(conjugation_orbit_set(ctx, 5, search="scan")) == set(conjugation_orbit_set(ctx, 5, search="conjugate"))


def test_conjugation_orbit_needs_coprime_k(make_context):
    with pytest.raises(ValueError):
        conjugation_orbit_set(make_context("F", 4), 2)


@pytest.mark.parametrize("k", [5, 7])
def test_e6_coxeter_powers_conjugate_to_c(make_context, k):
    ctx = make_context("E", 6)
    target = ctx.power(ctx.c, k)
    g = _find_conjugator(ctx, target)
    assert g is not None
    assert ctx.conjugate(ctx.c, g) == target


def test_identity_is_not_a_cycle(a3, make_lattice):
    op = PopOperator(a3, make_lattice(a3))
    assert is_single_cycle(op, [a3.c]) is False
    assert is_single_cycle(op, []) is False


@pytest.mark.slow
def test_h4_conjugacy(make_context, make_lattice):
    ctx = make_context("H", 4)
    op = PopOperator(ctx, make_lattice(ctx))
    for k in (11, 19):
        members = conjugation_orbit_set(ctx, k)
        assert len(members) == 30
        assert is_single_cycle(op, members)
    for k in (7, 13, 17, 23):
        assert conjugation_orbit_set(ctx, k) == []


@pytest.mark.slow
def test_parallel_map_matches_serial(make_context, make_lattice, make_scan):
    ctx = make_context("B", 5)
    op = PopOperator(ctx, make_lattice(ctx))
    elements = make_scan(ctx).elements
    assert pop_map(op, elements, jobs=2) == pop_map(op, elements, jobs=1)
