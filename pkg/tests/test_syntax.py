import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradsum.syntax import (
    HOLE, MATCHFAIL, TUNIT, UNIT, Anno, App, Arrow, Cast, CaseOne, CaseTwo, Ctx, EMPTY, Inj, Lam, ParseError,
    Pos, Sum, SumCon, TInj, TLam, TSum, TUnitVal, TVar, TargetSum, UnitVal, Var, alpha_eq, expr_size,
    free_vars, hole_count, parse_expr, parse_target, parse_type, plug, print_expr, print_target,
    print_type,
)

from strategies import exprs, tterms, types

U = UNIT


def test_parse_examples():
    assert parse_expr("inj1 ()") == Inj(1, UnitVal())
    assert parse_expr("fn x => x") == Lam("x", Var("x"))
    assert parse_expr("case x of inj2 y => y") == CaseOne(Var("x"), 2, "y", Var("y"))
    assert parse_expr("case x of inj1 a => a | inj2 b => b") == CaseTwo(Var("x"), "a", Var("a"), "b", Var("b"))


def test_type_precedence():
    assert parse_type("Unit +? Unit -> Unit") == Arrow(Sum(U, SumCon.DYN, U), U)
    assert parse_type("Unit +*1 Unit") == Sum(U, SumCon.STAR1, U)
    assert parse_type("Unit -> Unit -> Unit") == Arrow(U, Arrow(U, U))


def test_sum_tokens():
    for tok in ["+", "+1", "+2", "+?", "+?1", "+?2", "+*1", "+*2"]:
        assert print_type(parse_type(f"Unit {tok} Unit")) == f"Unit {tok} Unit"
    assert len(SumCon) == 8 and len(TargetSum) == 3


def test_application_left_assoc_and_annotation():
    assert parse_expr("f x y") == App(App(Var("f"), Var("x")), Var("y"))
    assert parse_expr("(inj2 () : Unit +? Unit)") == Anno(Inj(2, UnitVal()), Sum(U, SumCon.DYN, U))


def test_print_examples():
    e = parse_expr("(inj2 () : Unit +? Unit)")
    assert parse_expr(print_expr(e)) == e
    assert print_type(Sum(U, SumCon.DYN2, U)) == "Unit +?2 Unit"
    assert print_target(Cast(TargetSum.PLUS, TargetSum.PLUS2, TInj(1, TUnitVal()))) == "<+ => +2>(inj1 ())"


def test_comments_and_positions():
    e = parse_expr("-- identity\nfn x =>\n  x")
    assert e == Lam("x", Var("x"))
    assert e.body.pos == Pos(3, 3)


def test_parse_error_has_position_and_expected():
    with pytest.raises(ParseError) as err:
        parse_expr("fn x x")
    assert err.value.pos == Pos(1, 6)
    assert "=>" in err.value.expected


def test_target_syntax():
    m = parse_target("fn (x : Unit +1 Unit) => <+1 => +>(x)")
    one = TSum(TUNIT, TargetSum.PLUS1, TUNIT)
    assert m == TLam("x", one, Cast(TargetSum.PLUS1, TargetSum.PLUS, TVar("x")))
    assert parse_target("matchfail") == MATCHFAIL


def test_plug_and_holes():
    c = parse_target("<+ => +2>([])")
    assert hole_count(c) == 1
    assert plug(c, TUnitVal()) == Cast(TargetSum.PLUS, TargetSum.PLUS2, TUnitVal())
    assert plug(HOLE, MATCHFAIL) == MATCHFAIL


def test_alpha_equivalence():
    assert alpha_eq(parse_expr("fn x => x"), parse_expr("fn y => y"))
    assert not alpha_eq(parse_expr("fn x => y"), parse_expr("fn y => y"))
    # shadowing: the inner binder wins
    assert alpha_eq(parse_expr("fn x => fn x => x"), parse_expr("fn a => fn b => b"))
    assert not alpha_eq(parse_expr("fn x => fn x => x"), parse_expr("fn a => fn b => a"))


def test_helpers():
    e = parse_expr("fn x => f x")
    assert free_vars(e) == {"f"}
    assert expr_size(e) == 4
    g = EMPTY.extend("x", U).extend("x", Arrow(U, U))
    assert g["x"] == Arrow(U, U) and len(g) == 1
    assert Ctx({"x": U}) == EMPTY.extend("x", U)


@given(types)
def test_type_round_trip(a):
    assert parse_type(print_type(a)) == a


@given(exprs)
def test_expr_round_trip(e):
    assert alpha_eq(parse_expr(print_expr(e)), e)


@given(tterms)
def test_target_round_trip(m):
    assert alpha_eq(parse_target(print_target(m)), m)


@given(st.text(alphabet="()fnxy=>:|+?*12-Unitcaseofj \n<>[]", max_size=40))
def test_parser_total_on_fuzz(text):
    for parse in (parse_expr, parse_type, parse_target):
        try:
            parse(text)
        except ParseError as exc:
            assert exc.pos.line >= 1 and exc.pos.col >= 1


@given(st.binary(max_size=30))
def test_parser_total_on_bytes(data):
    text = data.decode("utf-8", errors="replace")
    try:
        parse_expr(text)
    except ParseError:
        pass
