import pytest
from hypothesis import given

from gradsum import relations as rel
from gradsum.elaborate import (
    ElabMode, Fresh, coerce, coerce_sum, elab_check, elab_derivation, elab_synth, ty_trans,
)
from gradsum.harness.enumerate import enum_types
from gradsum.harness.oracles import shape_groups
from gradsum.syntax import (
    EMPTY, HOLE, UNIT, Cast, Ctx, SumCon, TVar, TargetSum, alpha_eq, hole_count, parse_expr,
    parse_target, parse_ttype, parse_type, plug, print_target,
)
from gradsum.target import (
    evaluate, has_type, is_cast_free, is_matchfail_free, subterms, value_shape,
)
from gradsum.typecheck import FULL
from strategies import programs

T, E = parse_type, parse_expr
STD, SAT = ElabMode.STANDARD, ElabMode.SATURATING
S = SumCon


def same(coercion, text):
    return alpha_eq(coercion, parse_target(text))


def test_ty_trans():
    assert ty_trans(T("Unit +? Unit")) == parse_ttype("Unit + Unit")
    assert ty_trans(T("Unit +*1 Unit")) == parse_ttype("Unit +1 Unit")
    assert ty_trans(T("Unit -> Unit")) == parse_ttype("Unit -> Unit")
    assert ty_trans(T("Unit +?2 Unit -> Unit +2 Unit")) == parse_ttype("Unit +2 Unit -> Unit +2 Unit")


def test_coerce_sum():
    assert coerce_sum(S.DYN, S.PLUS2, STD) == Cast(TargetSum.PLUS, TargetSum.PLUS2, HOLE)
    assert coerce_sum(S.PLUS1, S.PLUS, STD) == HOLE
    assert coerce_sum(S.PLUS1, S.PLUS, SAT) == Cast(TargetSum.PLUS1, TargetSum.PLUS, HOLE)


def test_coerce_examples():
    assert same(coerce(T("Unit +? Unit"), T("Unit +2 Unit"), STD),
                "<+ => +2>(case [] of inj1 x1 => inj1 x1 | inj2 x2 => inj2 x2)")
    assert coerce(UNIT, UNIT, STD) == HOLE and coerce(UNIT, UNIT, SAT) == HOLE
    assert same(coerce(T("Unit +1 Unit"), T("Unit + Unit"), STD), "case [] of inj1 x1 => inj1 x1")
    assert same(coerce(T("Unit +*2 Unit"), T("Unit + Unit"), STD),
                "case [] of inj1 x1 => <+1 => +2>(inj1 x1) | inj2 x2 => inj2 x2")


def test_coerce_saturating_one_armed():
    assert same(coerce(T("Unit +1 Unit"), T("Unit + Unit"), SAT),
                "<+1 => +>(case [] of inj1 x1 => <+1 => +1>(inj1 x1))")


def test_coerce_function_is_contravariant():
    c = coerce(T("Unit + Unit -> Unit"), T("Unit +1 Unit -> Unit"), STD)
    assert same(c, "fn (y : Unit +1 Unit) => [] (case y of inj1 x1 => inj1 x1)")


def test_coerce_requires_dcons():
    with pytest.raises(ValueError):
        coerce(T("Unit +1 Unit"), T("Unit +2 Unit"))


def test_fresh_avoids_names():
    f = Fresh({"c1", "c2"})
    assert f() == "c3"


def test_coercion_typing_depth_1_and_2_sample():
    # every dcons pair over depth 1, and every pair in a few depth-2 shape groups
    groups = list(shape_groups(enum_types(1)).values()) + list(shape_groups(enum_types(2)).values())[:4]
    count = 0
    for group in groups:
        for a1 in group:
            for a2 in group:
                if not rel.dcons(a1, a2):
                    continue
                for mode in ElabMode:
                    c = coerce(a1, a2, mode)
                    assert hole_count(c) == 1
                    m = plug(c, TVar("v"))
                    assert has_type(Ctx({"v": ty_trans(a1)}), m, ty_trans(a2))
                    count += 1
    assert count > 1000


def test_elab_examples():
    g = Ctx({"x": T("Unit +? Unit")})
    a, m = elab_synth(g, E("(x : Unit +2 Unit)"))
    assert a == T("Unit +2 Unit")
    assert same(m, "<+ => +2>(case x of inj1 x1 => inj1 x1 | inj2 x2 => inj2 x2)")
    m = elab_check(g, E("case x of inj2 y => y"), UNIT)
    assert same(m, "case <+ => +2>(x) of inj2 y => y")
    _, m = elab_synth(EMPTY, E("(fn x => x : Unit -> Unit)"))
    assert same(m, "fn (x : Unit) => x")


def test_elab_matchfail_example():
    a, m = elab_synth(EMPTY, E("((fn y => case y of inj2 z => z) : (Unit +? Unit) -> Unit) (inj1 () : Unit +? Unit)"))
    assert evaluate(m).is_matchfail
    a, m = elab_synth(EMPTY, E("((fn y => case y of inj2 z => z) : (Unit +? Unit) -> Unit) (inj2 () : Unit +? Unit)"))
    assert evaluate(m).is_value


@given(programs(ctx_size=1))
def test_translation_soundness(p):
    d = p.derive(FULL)
    th = Ctx({x: ty_trans(a) for x, a in p.ctx.items()})
    for mode in ElabMode:
        m = elab_derivation(d, mode)
        assert has_type(th, m, ty_trans(p.type)), print_target(m)


@given(programs())
def test_standard_and_saturating_agree(p):
    d = p.derive(FULL)
    v1, v2 = (evaluate(elab_derivation(d, mode)) for mode in ElabMode)
    assert v1.kind == v2.kind
    if v1.is_value:
        assert value_shape(v1.term) == value_shape(v2.term)


@given(programs(fragment="static", ctx_size=1))
def test_static_programs_elaborate_cast_free(p):
    m = elab_derivation(p.derive(FULL), STD)
    assert is_cast_free(m) and is_matchfail_free(m)


@given(programs(fragment="static"))
def test_closed_static_programs_evaluate_to_values(p):
    assert evaluate(elab_derivation(p.derive(FULL), STD)).is_value


def test_saturating_never_leaves_constructor_holes():
    m = elab_check(EMPTY, E("inj1 ()"), T("Unit + Unit"), SAT)
    assert same(m, "<+1 => +>(inj1 ())")
    assert not any(isinstance(s, type(HOLE)) for s in subterms(m))
