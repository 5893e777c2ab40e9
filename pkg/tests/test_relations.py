import itertools

import pytest
from hypothesis import given

from gradsum import relations as rel
from gradsum.harness import oracles
from gradsum.harness.enumerate import enum_types
from gradsum.relations import CastClass
from gradsum.syntax import BOTTOM, TUNIT, Ctx, EMPTY, SumCon, TargetSum, parse_expr, parse_ttype, parse_type
from strategies import types

S = SumCon
P, P1, P2 = TargetSum.PLUS, TargetSum.PLUS1, TargetSum.PLUS2
T = parse_type
ORDER = [S.PLUS, S.PLUS1, S.PLUS2, S.DYN, S.DYN1, S.DYN2, S.STAR1, S.STAR2]

# Rows/columns in the order + +1 +2 +? +?1 +?2 +*1 +*2, computed by the
# matrix-squaring oracle from the edge lists and frozen here.
FROZEN_SUBSUM = ["1.......", "11....1.", "1.1....1", "1..1..11",
                 "11.11.11", "1.11.111", "1.....1.", "1......1"]
FROZEN_PRECISION = ["1..1....", ".1.11.1.", "..11.1.1", "...1....",
                    "...11...", "...1.1..", "...1..1.", "...1...1"]
FROZEN_DCONS_SUM = ["1..1....", "11.11.1.", "1.11.1.1", "11111111",
                    "11.11.11", "1.11.111", "11.11.1.", "1.11.1.1"]


def _rows(relation):
    return ["".join("1" if relation(a, b) else "." for b in ORDER) for a in ORDER]


def test_sumcon_order_matches_enum():
    assert ORDER == list(SumCon)


def test_tables_match_frozen_oracle():
    assert _rows(rel.subsum) == FROZEN_SUBSUM
    assert _rows(rel.sum_precision) == FROZEN_PRECISION
    assert _rows(rel.dcons_sum) == FROZEN_DCONS_SUM


def test_tables_match_live_oracle():
    for edges, table in ((rel.SUBSUM_EDGES, rel.SUBSUM), (rel.PRECISION_EDGES, rel.PRECISION)):
        m = oracles.closure_matrix(ORDER, edges)
        assert (m == oracles.matrix(ORDER, table)).all()
    assert (oracles.dcons_sum_oracle() == oracles.table_matrix(ORDER, rel.dcons_sum)).all()


def test_direct_dyn_to_plus_edge_is_redundant():
    without = [e for e in rel.SUBSUM_EDGES if e != (S.DYN, S.PLUS)]
    assert rel.closure(ORDER, without) == rel.SUBSUM


def test_subsum_examples():
    assert rel.subsum(S.DYN2, S.STAR1)
    assert not rel.subsum(S.DYN, S.PLUS1)
    assert rel.subsum(S.STAR2, S.STAR2)
    assert rel.subsum(S.DYN1, S.PLUS)


def test_subsum_partial_order_with_top():
    for a, b in itertools.product(ORDER, ORDER):
        if a != b:
            assert not (rel.subsum(a, b) and rel.subsum(b, a))
        assert rel.subsum(a, S.PLUS)
        assert rel.sum_precision(a, S.DYN)


def test_subtype_examples():
    assert rel.subtype(T("Unit +?1 Unit"), T("Unit + Unit"))
    assert rel.subtype(T("Unit + Unit -> Unit"), T("Unit +1 Unit -> Unit"))
    assert not rel.subtype(T("Unit"), T("Unit -> Unit"))


def test_precision_examples():
    assert rel.sum_precision(S.PLUS, S.DYN)
    assert not rel.sum_precision(S.DYN1, S.STAR1)
    assert not rel.sum_precision(S.DYN, S.PLUS1)
    assert rel.sum_precision(S.STAR2, S.STAR2)
    assert rel.type_precision(T("Unit +1 Unit -> Unit"), T("Unit +?1 Unit -> Unit"))
    assert rel.type_precision(T("Unit + Unit"), T("Unit +? Unit"))


def test_ctx_precision():
    assert rel.ctx_precision(Ctx({"x": T("Unit +1 Unit")}), Ctx({"x": T("Unit +? Unit")}))
    assert rel.ctx_precision(EMPTY, EMPTY)
    assert not rel.ctx_precision(Ctx({"x": T("Unit")}), Ctx({"y": T("Unit")}))


def test_expr_precision():
    assert rel.expr_precision(parse_expr("(x : Unit +2 Unit)"), parse_expr("(x : Unit +? Unit)"))
    assert not rel.expr_precision(parse_expr("(x : Unit)"), parse_expr("x"))
    assert not rel.expr_precision(parse_expr("(x : Unit +? Unit)"), parse_expr("(x : Unit +2 Unit)"))


@given(types)
def test_reflexivity(a):
    assert rel.subtype(a, a) and rel.type_precision(a, a) and rel.dcons(a, a)


def test_dcons_examples():
    assert rel.dcons(T("Unit +? Unit"), T("Unit +2 Unit"))
    assert not rel.dcons(T("Unit +1 Unit"), T("Unit +2 Unit"))
    # contravariant in the domain
    assert rel.dcons(T("Unit +2 Unit -> Unit"), T("Unit +? Unit -> Unit"))
    assert rel.dcons(T("Unit +? Unit -> Unit"), T("Unit +1 Unit -> Unit"))
    assert not rel.dcons(T("Unit +1 Unit -> Unit"), T("Unit +2 Unit -> Unit"))


def test_dcons_matches_brute_force_depth_1():
    for group in oracles.shape_groups(enum_types(1)).values():
        assert (oracles.brute_dcons(group) == oracles.structural_dcons(group)).all()


def test_depth_2_same_shape_pair_count_frozen():
    # 901 types; pairs within each shape group, and how many of them are dcons
    u = enum_types(2)
    assert len(u) == 901
    assert oracles.same_shape_pairs(u) == 283141
    assert sum(int(oracles.structural_dcons(g).sum()) for g in oracles.shape_groups(u).values()) == 83249


def test_sum_synth():
    assert rel.sum_synth(S.DYN, S.STAR1)
    assert not rel.sum_synth(S.DYN2, S.STAR1)
    assert rel.sum_synth(S.PLUS2, S.PLUS)
    assert {d for d in ORDER if rel.sum_synth(d, S.STAR1)} == {S.DYN1, S.PLUS1, S.DYN, S.STAR1}
    for d in ORDER:
        assert rel.sum_synth(d, S.PLUS)
        for goal in rel.SYNTH_GOALS:
            if rel.sum_synth(d, goal):
                assert rel.subsum(d, goal)
    with pytest.raises(ValueError):
        rel.sum_synth(S.PLUS, S.DYN)


def test_target_subsum():
    assert rel.target_subsum(P1, P)
    assert not rel.target_subsum(P1, P2)
    assert rel.target_subtype(BOTTOM, TUNIT)
    assert rel.target_subtype(parse_ttype("Unit +1 Unit"), parse_ttype("Unit + Unit"))
    assert rel.target_subtype(parse_ttype("Unit + Unit -> Unit"), parse_ttype("Unit +1 Unit -> Unit"))


def test_cast_class():
    assert rel.cast_class(P1, P) is CastClass.SAFE
    assert rel.cast_class(P, P2) is CastClass.BACKWARD
    assert rel.cast_class(P2, P1) is CastClass.MATCH
    counts = {c: sum(1 for p, q in rel.CAST_PAIRS if rel.cast_class(p, q) is c) for c in CastClass}
    assert counts == {CastClass.SAFE: 5, CastClass.BACKWARD: 2, CastClass.MATCH: 2}


def test_cast_precision_examples():
    assert rel.cast_precision((P, P), (P1, P))
    assert rel.cast_precision((P1, P2), (P, P1))
    assert rel.cast_precision((P1, P), (P1, P))


def test_cast_precision_stated_rules_reflexive_transitive():
    stated = rel.STATED_CAST_PRECISION
    for c in rel.CAST_PAIRS:
        assert (c, c) in stated
    for a, b, c in itertools.product(rel.CAST_PAIRS, repeat=3):
        if (a, b) in stated and (b, c) in stated:
            assert (a, c) in stated


def test_cast_precision_additions_are_sound_and_listed():
    added = rel.CAST_PRECISION - rel.STATED_CAST_PRECISION
    assert added == {((i, i), (i, P)) for i in (P1, P2)} | {((i, i), (P, i)) for i in (P1, P2)} \
        | {((i, P), (P, P)) for i in (P1, P2)} | {((i, i), (P, P)) for i in (P1, P2)}
    for c1, c2 in rel.CAST_PRECISION:
        assert rel.cast_precision_sound(c1, c2)


def test_cast_precision_cannot_be_both_sound_and_transitive():
    # <+ => +1> is below <+2 => +2> by a stated rule (bc below sc), and the
    # needed rule puts <+2 => +2> below <+ => +2>; chaining them would relate
    # two backward casts that disagree on every injection.
    a, b, c = (P, P1), (P2, P2), (P, P2)
    assert rel.cast_precision(a, b) and rel.cast_precision(b, c)
    assert not rel.cast_precision_sound(a, c)
    assert not rel.cast_precision(a, c)


def test_sum_table_shapes():
    for name in rel.TABLES:
        rows, cols, cells = rel.sum_table(name)
        assert len(cells) == len(rows) and all(len(r) == len(cols) for r in cells)
    assert len(rel.sum_table("subsum")[0]) == 8
    assert len(rel.sum_table("cast-class")[0]) == 3
