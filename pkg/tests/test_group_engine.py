import pytest

from group_engine import (
    CoxeterKind,
    CoxeterSpec,
    ProductConvention,
    bipartition,
    build_group,
    enumerate_group,
    generic_twin,
)
from utils.errors import BudgetExceededError, ContextMismatchError, UnsupportedGroupError

GROUPS = [
    ("A", 3, 24, 4, 14),
    ("B", 3, 48, 6, 20),
    ("D", 4, 192, 6, 50),
    ("H", 3, 120, 10, 32),
    ("F", 4, 1152, 12, 105),
    ("I2", 5, 10, 5, 7),
]


@pytest.mark.parametrize("cox_type,rank,order,h,catalan", GROUPS)
def test_group_invariants(make_context, cox_type, rank, order, h, catalan):
    ctx = make_context(cox_type, rank)
    assert ctx.group_order == order
    assert ctx.coxeter_number == h
    assert ctx.catalan_number == catalan
    assert ctx.order_of(ctx.c) == h
    assert ctx.coxeter_length(ctx.c) == len(ctx.simple_generators)


@pytest.mark.parametrize("cox_type,rank", [("A", 3), ("B", 3), ("D", 4), ("H", 3), ("I2", 6)])
def test_enumeration_visits_every_element_once(make_context, cox_type, rank):
    ctx = make_context(cox_type, rank)
    elements = list(enumerate_group(ctx))
    assert len(elements) == ctx.group_order
    assert len(set(elements)) == ctx.group_order
    assert elements[0] == ctx.identity


def test_enumeration_respects_budget(make_context):
    ctx = make_context("B", 3)
    with pytest.raises(BudgetExceededError):
        list(enumerate_group(ctx, budget=10))


def test_e7_needs_allow_large():
    ctx = build_group("E", 7)
    assert ctx.large
    with pytest.raises(BudgetExceededError):
        next(enumerate_group(ctx))


@pytest.mark.parametrize("cox_type,rank", [("D", 2), ("E", 5), ("F", 3), ("H", 5), ("A", 0)])
def test_unsupported_rank(cox_type, rank):
    with pytest.raises(UnsupportedGroupError):
        build_group(cox_type, rank)


def test_unknown_type():
    with pytest.raises(UnsupportedGroupError):
        build_group("X", 3)


def test_standard_coxeter_element_is_the_same_map_in_both_conventions():
    left = build_group("A", 3, ProductConvention.LEFT_TO_RIGHT)
    right = build_group("A", 3, ProductConvention.RIGHT_TO_LEFT)
    assert left.c == right.c
    assert left.format(left.c) == "(1234)"


def test_multiply_convention(a3):
    s1, s2 = a3.simple_generators[:2]
    right = build_group("A", 3, ProductConvention.RIGHT_TO_LEFT)
    assert a3.multiply(s1, s2) == right.multiply(s2, s1)


def test_group_axioms(make_context):
    ctx = make_context("B", 3)
    elements = list(enumerate_group(ctx))
    for w in elements[::5]:
        assert ctx.multiply(w, ctx.invert(w)) == ctx.identity
        assert ctx.multiply(ctx.identity, w) == w
        assert ctx.word_element(ctx.word_of(w)) == w


def test_mixed_contexts_are_rejected(a3):
    b3 = build_group("B", 3)
    with pytest.raises(ContextMismatchError):
        a3.multiply(a3.c, b3.c)
    with pytest.raises(ContextMismatchError):
        a3.reflection_length(b3.c)


@pytest.mark.parametrize("cox_type,rank", [("A", 3), ("B", 3), ("D", 4)])
def test_typed_reflection_data_matches_geometry(make_context, cox_type, rank):
    ctx = make_context(cox_type, rank)
    for w in enumerate_group(ctx):
        assert ctx.reflection_length(w) == ctx.geometric_reflection_length(w)
        assert ctx.reflections_below(w) == ctx.geometric_reflections_below(w)


def test_reflections_below_matches_absolute_order(make_context):
    ctx = make_context("H", 3)
    for w in enumerate_group(ctx):
        bits = ctx.reflections_below(w)
        for k, t in enumerate(ctx.reflections):
            assert bool(bits >> k & 1) == ctx.leq_abs(t, w)


def test_type_a_reflection_length_counts_cycles(a3):
    for w in enumerate_group(a3):
        assert a3.reflection_length(w) == 4 - len(a3.backend.cycles(w))


def test_generic_twin_agrees(make_context):
    ctx = make_context("B", 3)
    twin = generic_twin(ctx)
    assert twin.backend.kind == "root"
    assert twin.group_order == ctx.group_order
    assert twin.n_reflections == ctx.n_reflections == 9


def test_coxeter_spec_parsing():
    assert CoxeterSpec.parse(None) == CoxeterSpec()
    assert CoxeterSpec.parse("bipartite").kind is CoxeterKind.BIPARTITE
    assert CoxeterSpec.parse("1 3 2").word == (0, 2, 1)
    assert CoxeterSpec.parse("word:s1 s3 s2").word == (0, 2, 1)
    with pytest.raises(ValueError):
        CoxeterSpec.parse("one two")


def test_coxeter_word_must_use_each_generator_once(a3):
    with pytest.raises(ValueError):
        a3.with_coxeter(CoxeterSpec.from_word((0, 0, 1)))


def test_bipartition():
    ctx = build_group("A", 4)
    assert bipartition(ctx) == ([0, 2], [1, 3])
    bip = build_group("A", 4, coxeter=CoxeterSpec(CoxeterKind.BIPARTITE))
    assert bip.c_word == (0, 2, 1, 3)
    assert bip.order_of(bip.c) == 5


def test_coxeter_matrix_b3(make_context):
    matrix = make_context("B", 3).coxeter_matrix()
    assert matrix[0][1] == 3
    assert matrix[1][2] == 4
    assert matrix[0][2] == 2


def test_i2_format_uses_words(make_context):
    ctx = make_context("I2", 5)
    assert ctx.format(ctx.identity) == "e"
    assert ctx.format(ctx.simple_generators[0]) == "w:s1"
