"""Elaboration of checked source terms into the cast calculus.

Every place the checker used directed consistency or a sum judgment becomes a
coercion: a target context with one hole.  Two modes differ only in how
coercions between sums are built.  In the standard mode a cast that is sure to
succeed is omitted; in the saturating mode every sum coercion is an explicit
cast, which makes the precision of the output line up with the precision of
the input.
"""

from __future__ import annotations

import enum
import itertools

from . import relations as rel
from .syntax import (
    Arrow, Cast, Ctx, EMPTY, Expr, HOLE, Sum, SumCon, TApp, TArrow, TCaseOne, TCaseTwo,
    TInj, TLam, TSum, TUNIT, TUnitVal, TVar, TargetSum, TargetTerm, Type, Unit, all_names,
    innate, plug, star,
)
from .typecheck import BiDerivation, check, synth


class ElabMode(enum.Enum):
    STANDARD = "standard"
    SATURATING = "saturating"


TRANS_SUM = {
    SumCon.PLUS: TargetSum.PLUS,
    SumCon.DYN: TargetSum.PLUS,
    SumCon.PLUS1: TargetSum.PLUS1,
    SumCon.DYN1: TargetSum.PLUS1,
    SumCon.STAR1: TargetSum.PLUS1,
    SumCon.PLUS2: TargetSum.PLUS2,
    SumCon.DYN2: TargetSum.PLUS2,
    SumCon.STAR2: TargetSum.PLUS2,
}


def ty_trans(a: Type):
    match a:
        case Unit():
            return TUNIT
        case Sum(l, d, r):
            return TSum(ty_trans(l), TRANS_SUM[d], ty_trans(r))
        case Arrow(d, c):
            return TArrow(ty_trans(d), ty_trans(c))
    raise ValueError(f"not a source type: {a!r}")


def ctx_trans(g: Ctx) -> Ctx:
    return Ctx({x: ty_trans(a) for x, a in g.items()})


class Fresh:
    """Deterministic supply of variable names avoiding a fixed set."""

    def __init__(self, avoid=(), stem="c"):
        self.avoid = set(avoid)
        self.stem = stem
        self.counter = itertools.count(1)

    def __call__(self) -> str:
        while True:
            name = f"{self.stem}{next(self.counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def coerce_sum(d1: SumCon, d2: SumCon, mode: ElabMode = ElabMode.STANDARD) -> TargetTerm:
    """Coercion between two sum constructors, as a context with a hole."""
    p, q = TRANS_SUM[d1], TRANS_SUM[d2]
    if mode is ElabMode.STANDARD and rel.target_subsum(p, q):
        return HOLE
    return Cast(p, q, HOLE)


def coerce(a1: Type, a2: Type, mode: ElabMode = ElabMode.STANDARD, fresh: Fresh | None = None) -> TargetTerm:
    """Coercion witnessing ``a1 ~> a2``; raises ValueError if the types are not directed consistent."""
    if not rel.dcons(a1, a2):
        raise ValueError(f"coerce: {a1} is not directed consistent with {a2}")
    return _coerce(a1, a2, mode, fresh or Fresh())


def _coerce(a1, a2, mode, fresh) -> TargetTerm:
    match a1, a2:
        case Unit(), Unit():
            return HOLE
        case Arrow(d1, c1), Arrow(d2, c2):
            x = fresh()
            arg = plug(_coerce(d2, d1, mode, fresh), TVar(x))
            body = plug(_coerce(c1, c2, mode, fresh), TApp(HOLE, arg))
            # fn (x : |A1'|) => C2[[] C1[x]]
            return TLam(x, ty_trans(d2), body)
        case Sum(l1, d1, r1), Sum(l2, d2, r2):
            return _sum_coercion(l1, d1, r1, l2, d2, r2, mode, fresh)
    raise ValueError(f"coerce: shapes of {a1} and {a2} differ")


def _sum_coercion(l1, d1, r1, l2, d2, r2, mode, fresh) -> TargetTerm:
    """Dispatch on the source constructor; only an arm that can fire is rebuilt."""
    left = lambda v: plug(_coerce(l1, l2, mode, fresh), v)    # noqa: E731
    right = lambda v: plug(_coerce(r1, r2, mode, fresh), v)   # noqa: E731

    for i in (1, 2):
        if d1 in (SumCon.DYN1 if i == 1 else SumCon.DYN2, SumCon.PLUS1 if i == 1 else SumCon.PLUS2):
            x = fresh()
            inner = TInj(i, (left if i == 1 else right)(TVar(x)))
            if mode is ElabMode.SATURATING:
                inner = plug(coerce_sum(innate(i), d1, mode), inner)
            scrut_case = TCaseOne(HOLE, i, x, inner)
            return plug(coerce_sum(d1, d2, mode), scrut_case)

    # Two-armed: +?, +*1, +*2, +
    x1, x2 = fresh(), fresh()
    arm1 = plug(coerce_sum(innate(1), d1, mode), TInj(1, left(TVar(x1))))
    arm2 = plug(coerce_sum(innate(2), d1, mode), TInj(2, right(TVar(x2))))
    return plug(coerce_sum(d1, d2, mode), TCaseTwo(HOLE, x1, arm1, x2, arm2))


def elab_derivation(d: BiDerivation, mode: ElabMode = ElabMode.STANDARD,
                    fresh: Fresh | None = None) -> TargetTerm:
    """Translate along a bidirectional derivation."""
    if fresh is None:
        fresh = Fresh(all_names(d.expr) | set(d.ctx))
    return _elab(d, mode, fresh)


def _elab(d: BiDerivation, mode, fresh) -> TargetTerm:
    e, a, kids = d.expr, d.type, d.children
    go = lambda k: _elab(k, mode, fresh)  # noqa: E731
    match d.rule:
        case "SynVar":
            return TVar(e.name)
        case "SynAnno":
            return go(kids[0])
        case "ChkCSub":
            return plug(coerce(kids[0].type, a, mode, fresh), go(kids[0]))
        case "ChkUnitIntro":
            return TUnitVal()
        case "ChkFunIntro":
            return TLam(e.bound, ty_trans(a.dom), go(kids[0]))
        case "SynFunElim":
            return TApp(go(kids[0]), go(kids[1]))
        case "ChkSumIntro":
            return plug(coerce_sum(innate(e.i), a.con, mode), TInj(e.i, go(kids[0])))
        case "ChkSumElimOne":
            delta = kids[0].type.con
            scrut = plug(coerce_sum(delta, star(e.i), mode), go(kids[0]))
            return TCaseOne(scrut, e.i, e.x, go(kids[1]))
        case "ChkSumElimTwo":
            delta = kids[0].type.con
            scrut = plug(coerce_sum(delta, SumCon.PLUS, mode), go(kids[0]))
            return TCaseTwo(scrut, e.x1, go(kids[1]), e.x2, go(kids[2]))
    raise ValueError(f"cannot elaborate rule {d.rule}")


def elab_check(g: Ctx, e: Expr, a: Type, mode: ElabMode = ElabMode.STANDARD) -> TargetTerm:
    return elab_derivation(check(g, e, a), mode)


def elab_synth(g: Ctx, e: Expr, mode: ElabMode = ElabMode.STANDARD) -> tuple[Type, TargetTerm]:
    a, d = synth(g, e)
    return a, elab_derivation(d, mode)


__all__ = [
    "ElabMode", "TRANS_SUM", "ty_trans", "ctx_trans", "Fresh", "coerce_sum", "coerce",
    "elab_derivation", "elab_check", "elab_synth", "EMPTY",
]
