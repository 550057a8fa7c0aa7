import pytest

from folding import (
    FOLDINGS,
    build_folding,
    coxeter_plane_dihedral,
    e8_stretch_report,
    h4_coxeter_candidates,
    is_injective,
    periodic_lift_report,
    sublattice_failures,
    unfold_image_size,
    verify_unfold_equivariance,
)
from group_engine import CoxeterKind, CoxeterSpec, build_group
from utils.errors import FoldingError


@pytest.fixture(scope="module")
def a_to_b():
    return build_folding("A->B", 3)


def test_a_to_b_shape(a_to_b):
    assert a_to_b.name == "A5->B3"
    assert a_to_b.fibers == [(0, 4), (1, 3), (2,)]
    assert a_to_b.unfold(a_to_b.source.c) == a_to_b.target.c
    assert a_to_b.describe()["fibers"] == [[1, 5], [2, 4], [3]]


def test_a_to_b_is_injective(a_to_b):
    assert is_injective(a_to_b)


def test_a_to_b_equivariance(a_to_b):
    report = verify_unfold_equivariance(a_to_b)
    assert report.checked == 48
    assert report.passed
    assert all(entry["pass"] for entry in report.entries)
    assert report.to_dict(with_entries=False)["passed"] is True


def test_a_to_b_sublattice(a_to_b):
    assert sublattice_failures(a_to_b) == []


@pytest.mark.parametrize("rank", [2, 4])
def test_a_to_b_other_ranks(rank):
    fmap = build_folding("A->B", rank)
    assert fmap.target.rank == 2 * rank - 1
    assert verify_unfold_equivariance(fmap).passed


def test_d_to_b():
    fmap = build_folding("D->B", 3)
    assert fmap.name == "D4->B3"
    assert fmap.fibers == [(0,), (1,), (2, 3)]
    assert verify_unfold_equivariance(fmap).passed


def test_bipartite_folding():
    fmap = build_folding("A->B", 3, coxeter=CoxeterSpec(CoxeterKind.BIPARTITE))
    assert fmap.unfold(fmap.source.c) == fmap.target.c
    assert verify_unfold_equivariance(fmap).passed


def test_unknown_pair():
    with pytest.raises(FoldingError):
        build_folding("A->D", 3)


def test_fixed_rank_pairs_reject_other_ranks():
    with pytest.raises(FoldingError):
        build_folding("E6->F4", 3)
    with pytest.raises(FoldingError):
        build_folding("A->B", None)


def test_recipes_cover_the_classical_and_exceptional_pairs():
    assert set(FOLDINGS) == {"A->B", "D->B", "E6->F4", "E8->H4"}


@pytest.mark.parametrize("cox_type,rank", [("A", 3), ("A", 4), ("B", 3)])
def test_coxeter_plane(cox_type, rank):
    ctx = build_group(cox_type, rank, coxeter=CoxeterSpec(CoxeterKind.BIPARTITE))
    fmap = coxeter_plane_dihedral(ctx)
    assert fmap.source.label == f"I2({ctx.coxeter_number})"
    assert unfold_image_size(fmap) == 2 * ctx.coxeter_number
    assert verify_unfold_equivariance(fmap).passed


def test_coxeter_plane_needs_bipartite_c(a3):
    with pytest.raises(FoldingError):
        coxeter_plane_dihedral(a3)


@pytest.mark.slow
def test_e6_to_f4():
    fmap = build_folding("E6->F4")
    assert fmap.name == "E6->F4"
    assert verify_unfold_equivariance(fmap).passed
    for lift in periodic_lift_report(fmap, (5, 7)):
        assert lift.source_size == 12
        assert lift.passed


@pytest.mark.slow
def test_e8_to_h4_relations():
    fmap = build_folding("E8->H4")
    assert fmap.name == "E8->H4"
    assert fmap.target.coxeter_number == 30
    sample = [fmap.source.c, fmap.source.invert(fmap.source.c)] + list(fmap.source.simple_generators)
    assert verify_unfold_equivariance(fmap, elements=sample).passed


def test_h4_coxeter_candidates():
    candidates = h4_coxeter_candidates()
    assert len(candidates) == 8
    h4 = build_group("H", 4)
    assert len({h4.word_element(spec.word) for spec in candidates}) == 8
    assert all(sorted(spec.word) == [0, 1, 2, 3] for spec in candidates)


@pytest.mark.slow
def test_e8_stretch_report_verdict():
    entries = e8_stretch_report()
    assert len(entries) == 8
    assert {entry["h4_reading"] for entry in entries} <= {"word", "reversed"}
    passing = [entry for entry in entries if entry["passed"]]
    assert passing
    for entry in passing:
        orbit = entry["explicit_orbit"]
        assert orbit["terminal"] == "periodic_nonidentity"
        assert orbit["size"] == 30
        assert orbit["cycle_length"] == 30
        assert orbit["transient"] == 0
        assert entry["h4_orbit"]["cycle_length"] == 30
    for entry in entries:
        if entry["explicit_orbit"] is not None:
            assert entry["passed"]
