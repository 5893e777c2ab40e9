"""Bidirectional type checking for gradual sums.

One syntax-directed engine serves three systems: the full gradual system, the
static fragment (sums ``+``, ``+1``, ``+2`` only) and the dynamic fragment
(``+?`` only).  They differ only in the side conditions of subsumption and of
the sum rules.

Besides checking, this module validates type-assignment derivations, embeds
bidirectional derivations into them, and re-annotates them back.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from . import relations as rel
from .syntax import (
    Anno, App, Arrow, CaseOne, CaseTwo, Ctx, EMPTY, Expr, Inj, Lam, Pos, Sum, SumCon,
    Type, Unit, UnitVal, Var, annotations, innate, print_expr, star, sum_cons,
)


class ErrorKind(enum.Enum):
    NOT_A_SUBSUM = "NotASubsum"
    NO_DCONS = "NoDcons"
    NOT_A_FUNCTION = "NotAFunction"
    NEEDS_ANNOTATION = "NeedsAnnotation"
    WRONG_INJECTION = "WrongInjection"
    DOOMED_ONE_ARMED_CASE = "DoomedOneArmedCase"
    SHAPE_MISMATCH = "ShapeMismatch"
    UNBOUND_VARIABLE = "UnboundVariable"
    FRAGMENT_VIOLATION = "FragmentViolation"
    INVALID_DERIVATION = "InvalidDerivation"

    def __str__(self):
        return self.value


class TypeCheckError(Exception):
    def __init__(self, kind: ErrorKind, message: str, pos: Pos | None = None,
                 expected=None, actual=None):
        self.kind = kind
        self.pos = pos
        self.expected = expected
        self.actual = actual
        where = f"{pos}: " if pos else ""
        super().__init__(f"{where}{kind}: {message}")


CHECK, SYNTH = "check", "synth"


@dataclass(frozen=True)
class BiDerivation:
    rule: str
    ctx: Ctx
    expr: Expr
    direction: str
    type: Type
    children: tuple["BiDerivation", ...] = ()
    side: tuple = field(default=())

    def nodes(self) -> Iterator["BiDerivation"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def to_json(self) -> dict:
        node = {
            "rule": self.rule,
            "ctx": {x: str(a) for x, a in self.ctx.items()},
            "expr": print_expr(self.expr),
            "dir": self.direction,
            "type": str(self.type),
            "children": [c.to_json() for c in self.children],
        }
        if self.side:
            node["side"] = [str(s) for s in self.side]
        return node


# ---------------------------------------------------------------------------
# The three systems

def static_subsum(d1: SumCon, d2: SumCon) -> bool:
    return d1 == d2 or (d1 in (SumCon.PLUS1, SumCon.PLUS2) and d2 is SumCon.PLUS)


def static_subtype(a1: Type, a2: Type) -> bool:
    match a1, a2:
        case Unit(), Unit():
            return True
        case Sum(l1, d1, r1), Sum(l2, d2, r2):
            return static_subsum(d1, d2) and static_subtype(l1, l2) and static_subtype(r1, r2)
        case Arrow(d1, c1), Arrow(d2, c2):
            return static_subtype(d2, d1) and static_subtype(c1, c2)
    return False


@dataclass(frozen=True)
class System:
    name: str
    prefix: str  # rule-name prefix; the full system uses Chk/Syn names

    def rule(self, base: str) -> str:
        if self.name == "full":
            return FULL_RULES[base]
        return self.prefix + base

    def admits(self, d: SumCon) -> bool:
        if self.name == "static":
            return d.is_static
        if self.name == "dynamic":
            return d is SumCon.DYN
        return True

    def subsumes(self, a_syn: Type, a_goal: Type) -> bool:
        if self.name == "static":
            return static_subtype(a_syn, a_goal)
        if self.name == "dynamic":
            return a_syn == a_goal
        return rel.dcons(a_syn, a_goal)

    def intro(self, i: int, d: SumCon):
        if self.name == "static":
            return static_subsum((SumCon.PLUS1, SumCon.PLUS2)[i - 1], d)
        if self.name == "dynamic":
            return d is SumCon.DYN
        return rel.subsum(innate(i), d)

    def elim_one(self, d: SumCon, i: int) -> bool:
        if self.name == "static":
            return d is (SumCon.PLUS1, SumCon.PLUS2)[i - 1]
        if self.name == "dynamic":
            return d is SumCon.DYN
        return rel.sum_synth(d, star(i))

    def elim_two(self, d: SumCon) -> bool:
        if self.name == "static":
            return static_subsum(d, SumCon.PLUS)
        if self.name == "dynamic":
            return d is SumCon.DYN
        return rel.sum_synth(d, SumCon.PLUS)


FULL_RULES = {
    "Var": "SynVar", "Sub": "ChkCSub", "Anno": "SynAnno", "UnitIntro": "ChkUnitIntro",
    "FunIntro": "ChkFunIntro", "FunElim": "SynFunElim", "SumIntro": "ChkSumIntro",
    "SumElimOne": "ChkSumElimOne", "SumElimTwo": "ChkSumElimTwo",
}
FULL = System("full", "")
STATIC = System("static", "SS")
DYNAMIC = System("dynamic", "D")


class Checker:
    def __init__(self, system: System = FULL):
        self.sys = system

    def check(self, g: Ctx, e: Expr, a: Type) -> BiDerivation:
        r = self.sys.rule
        match e:
            case UnitVal():
                if not isinstance(a, Unit):
                    raise _shape(e, "()", a)
                return BiDerivation(r("UnitIntro"), g, e, CHECK, a)
            case Lam(x, body):
                if not isinstance(a, Arrow):
                    raise _shape(e, "a function type", a)
                d = self.check(g.extend(x, a.dom), body, a.cod)
                return BiDerivation(r("FunIntro"), g, e, CHECK, a, (d,))
            case Inj(i, p):
                if not isinstance(a, Sum):
                    raise _shape(e, "a sum type", a)
                if not self.sys.intro(i, a.con):
                    raise TypeCheckError(
                        ErrorKind.WRONG_INJECTION,
                        f"inj{i} cannot check against {a.con} ({innate(i)} is not a subsum of {a.con})",
                        e.pos, expected=a, actual=innate(i))
                d = self.check(g, p, a.left if i == 1 else a.right)
                return BiDerivation(r("SumIntro"), g, e, CHECK, a, (d,), (innate(i), a.con))
            case CaseOne(s, i, x, arm):
                b, ds = self.synth(g, s)
                if not isinstance(b, Sum):
                    raise _shape(s, "a sum type", b)
                if not self.sys.elim_one(b.con, i):
                    raise TypeCheckError(
                        ErrorKind.DOOMED_ONE_ARMED_CASE,
                        f"one-armed case on inj{i} cannot eliminate {b.con}",
                        e.pos, expected=star(i), actual=b)
                da = self.check(g.extend(x, b.left if i == 1 else b.right), arm, a)
                return BiDerivation(r("SumElimOne"), g, e, CHECK, a, (ds, da), (b.con, star(i)))
            case CaseTwo(s, x1, a1, x2, a2):
                b, ds = self.synth(g, s)
                if not isinstance(b, Sum):
                    raise _shape(s, "a sum type", b)
                if not self.sys.elim_two(b.con):
                    raise TypeCheckError(ErrorKind.NOT_A_SUBSUM,
                                         f"two-armed case cannot eliminate {b.con}", e.pos)
                d1 = self.check(g.extend(x1, b.left), a1, a)
                d2 = self.check(g.extend(x2, b.right), a2, a)
                return BiDerivation(r("SumElimTwo"), g, e, CHECK, a, (ds, d1, d2), (b.con, SumCon.PLUS))
            case Var() | App() | Anno():
                b, d = self.synth(g, e)
                if not self.sys.subsumes(b, a):
                    raise TypeCheckError(
                        ErrorKind.NO_DCONS, f"{b} is not directed consistent with {a}",
                        e.pos, expected=a, actual=b)
                return BiDerivation(r("Sub"), g, e, CHECK, a, (d,), (b, a))
        raise TypeError(f"not an expression: {e!r}")

    def synth(self, g: Ctx, e: Expr) -> tuple[Type, BiDerivation]:
        r = self.sys.rule
        match e:
            case Var(x):
                if x not in g:
                    raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, f"unbound variable {x}", e.pos)
                return g[x], BiDerivation(r("Var"), g, e, SYNTH, g[x])
            case Anno(inner, a):
                d = self.check(g, inner, a)
                return a, BiDerivation(r("Anno"), g, e, SYNTH, a, (d,))
            case App(f, arg):
                fa, df = self.synth(g, f)
                if not isinstance(fa, Arrow):
                    raise TypeCheckError(ErrorKind.NOT_A_FUNCTION,
                                         f"applying a term of type {fa}", e.pos, actual=fa)
                da = self.check(g, arg, fa.dom)
                return fa.cod, BiDerivation(r("FunElim"), g, e, SYNTH, fa.cod, (df, da))
        raise TypeCheckError(ErrorKind.NEEDS_ANNOTATION,
                             f"cannot synthesize a type for {print_expr(e)}; add an annotation",
                             getattr(e, "pos", None))


def _shape(e, wanted, a):
    return TypeCheckError(ErrorKind.SHAPE_MISMATCH, f"expected {wanted}, got {a}",
                          getattr(e, "pos", None), expected=wanted, actual=a)


_FULL = Checker(FULL)
_STATIC = Checker(STATIC)
_DYNAMIC = Checker(DYNAMIC)


def check(g: Ctx, e: Expr, a: Type) -> BiDerivation:
    return _FULL.check(g, e, a)


def synth(g: Ctx, e: Expr) -> tuple[Type, BiDerivation]:
    return _FULL.synth(g, e)


def _require_fragment(system: System, *things):
    for t in things:
        ok = is_static(t) if system is STATIC else is_dynamic(t)
        if not ok:
            raise TypeCheckError(ErrorKind.FRAGMENT_VIOLATION,
                                 f"input uses a sum outside the {system.name} fragment")


def static_check(g: Ctx, e: Expr, a: Type) -> BiDerivation:
    _require_fragment(STATIC, g, e, a)
    return _STATIC.check(g, e, a)


def static_synth(g: Ctx, e: Expr) -> tuple[Type, BiDerivation]:
    _require_fragment(STATIC, g, e)
    return _STATIC.synth(g, e)


def dyn_check(g: Ctx, e: Expr, a: Type) -> BiDerivation:
    _require_fragment(DYNAMIC, g, e, a)
    return _DYNAMIC.check(g, e, a)


def dyn_synth(g: Ctx, e: Expr) -> tuple[Type, BiDerivation]:
    _require_fragment(DYNAMIC, g, e)
    return _DYNAMIC.synth(g, e)


def _cons_of(x) -> Iterator[SumCon]:
    if isinstance(x, Ctx):
        for a in x.values():
            yield from sum_cons(a)
    elif isinstance(x, (Unit, Sum, Arrow)):
        yield from sum_cons(x)
    else:
        for a in annotations(x):
            yield from sum_cons(a)


def is_static(x) -> bool:
    return all(d.is_static for d in _cons_of(x))


def is_dynamic(x) -> bool:
    return all(d is SumCon.DYN for d in _cons_of(x))


# ---------------------------------------------------------------------------
# Type assignment

@dataclass(frozen=True)
class TADerivation:
    rule: str
    ctx: Ctx
    expr: Expr
    type: Type
    children: tuple["TADerivation", ...] = ()

    def nodes(self) -> Iterator["TADerivation"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "ctx": {x: str(a) for x, a in self.ctx.items()},
            "expr": print_expr(self.expr),
            "type": str(self.type),
            "children": [c.to_json() for c in self.children],
        }


class DerivationError(TypeCheckError):
    def __init__(self, node, reason: str):
        self.node = node
        super().__init__(ErrorKind.INVALID_DERIVATION,
                         f"{node.rule} at {print_expr(node.expr)}: {reason}",
                         getattr(node.expr, "pos", None))


def validate_assignment(d: TADerivation) -> bool:
    """Check every node against its type-assignment rule; raise on the first bad node."""

    def need(cond, reason):
        if not cond:
            raise DerivationError(d, reason)

    def arity(n):
        need(len(d.children) == n, f"expected {n} premises, got {len(d.children)}")

    def premise(c, ctx, expr, ty=None):
        need(c.ctx == ctx, "premise context does not match")
        need(c.expr == expr, "premise expression does not match")
        if ty is not None:
            need(c.type == ty, f"premise type {c.type} should be {ty}")

    g, e, a = d.ctx, d.expr, d.type
    match d.rule:
        case "SVar":
            arity(0)
            need(isinstance(e, Var) and g.get(e.name) == a, "variable type does not match context")
        case "SCSub":
            arity(1)
            premise(d.children[0], g, e)
            need(rel.dcons(d.children[0].type, a),
                 f"{d.children[0].type} is not directed consistent with {a}")
        case "SAnno":
            arity(1)
            need(isinstance(e, Anno) and e.ty == a, "conclusion must be the annotated type")
            premise(d.children[0], g, e.inner, a)
        case "SUnitIntro":
            arity(0)
            need(isinstance(e, UnitVal) and isinstance(a, Unit), "() has type Unit")
        case "SFunIntro":
            arity(1)
            need(isinstance(e, Lam) and isinstance(a, Arrow), "expected a lambda at a function type")
            premise(d.children[0], g.extend(e.bound, a.dom), e.body, a.cod)
        case "SFunElim":
            arity(2)
            need(isinstance(e, App), "expected an application")
            f, x = d.children
            need(isinstance(f.type, Arrow) and f.type.cod == a, "function premise must return the conclusion type")
            premise(f, g, e.fn)
            premise(x, g, e.arg, f.type.dom)
        case "SSumIntro":
            arity(1)
            need(isinstance(e, Inj), "expected an injection")
            need(isinstance(a, Sum) and a.con is innate(e.i),
                 f"injection must be typed at {innate(e.i)}")
            premise(d.children[0], g, e.payload, a.left if e.i == 1 else a.right)
        case "SSumElimOne":
            arity(2)
            need(isinstance(e, CaseOne), "expected a one-armed case")
            s, arm = d.children
            need(isinstance(s.type, Sum) and s.type.con is star(e.i),
                 f"scrutinee must have a {star(e.i)} sum")
            premise(s, g, e.scrut)
            premise(arm, g.extend(e.x, s.type.left if e.i == 1 else s.type.right), e.arm, a)
        case "SSumElimTwo":
            arity(3)
            need(isinstance(e, CaseTwo), "expected a two-armed case")
            s, a1, a2 = d.children
            need(isinstance(s.type, Sum) and s.type.con is SumCon.PLUS, "scrutinee must have a + sum")
            premise(s, g, e.scrut)
            premise(a1, g.extend(e.x1, s.type.left), e.arm1, a)
            premise(a2, g.extend(e.x2, s.type.right), e.arm2, a)
        case _:
            need(False, "unknown rule")
    for c in d.children:
        validate_assignment(c)
    return True


def embed(d: BiDerivation) -> TADerivation:
    """Turn a bidirectional derivation into a type-assignment derivation of the same judgment."""
    g, e, a = d.ctx, d.expr, d.type
    kids = d.children
    match d.rule:
        case "SynVar":
            return TADerivation("SVar", g, e, a)
        case "ChkCSub":
            return TADerivation("SCSub", g, e, a, (embed(kids[0]),))
        case "SynAnno":
            return TADerivation("SAnno", g, e, a, (embed(kids[0]),))
        case "ChkUnitIntro":
            return TADerivation("SUnitIntro", g, e, a)
        case "ChkFunIntro":
            return TADerivation("SFunIntro", g, e, a, (embed(kids[0]),))
        case "SynFunElim":
            return TADerivation("SFunElim", g, e, a, (embed(kids[0]), embed(kids[1])))
        case "ChkSumIntro":
            born = Sum(a.left, innate(e.i), a.right)
            intro = TADerivation("SSumIntro", g, e, born, (embed(kids[0]),))
            return TADerivation("SCSub", g, e, a, (intro,))
        case "ChkSumElimOne":
            s = _lift_scrutinee(kids[0], star(e.i))
            return TADerivation("SSumElimOne", g, e, a, (s, embed(kids[1])))
        case "ChkSumElimTwo":
            s = _lift_scrutinee(kids[0], SumCon.PLUS)
            return TADerivation("SSumElimTwo", g, e, a, (s, embed(kids[1]), embed(kids[2])))
    raise ValueError(f"cannot embed rule {d.rule}")


def _lift_scrutinee(ds: BiDerivation, goal: SumCon) -> TADerivation:
    b = ds.type
    target = Sum(b.left, goal, b.right)
    return TADerivation("SCSub", ds.ctx, ds.expr, target, (embed(ds),))


def annotate(d: TADerivation) -> tuple[Expr, BiDerivation]:
    """Add annotations until the expression synthesizes the derivation's type.

    Annotations go where the bidirectional rules demand synthesis: the root,
    function heads, case scrutinees, and the premise of each consistent
    subsumption.  Every other node is left to check as it is.
    """
    e2 = _synthesizing(d)
    a, bd = synth(d.ctx, e2)
    if a != d.type:
        raise DerivationError(d, f"annotated term synthesizes {a}, not {d.type}")
    return e2, bd


def _synthesizing(d: TADerivation) -> Expr:
    """An extension of ``d.expr`` that synthesizes ``d.type``."""
    e, kids = d.expr, d.children
    match d.rule:
        case "SVar":
            return e
        case "SAnno":
            return Anno(_checking(kids[0]), e.ty)
        case "SFunElim":
            return App(_synthesizing(kids[0]), _checking(kids[1]))
    return Anno(_checking(d), d.type)


def _checking(d: TADerivation) -> Expr:
    """An extension of ``d.expr`` that checks against ``d.type``."""
    e, kids = d.expr, d.children
    match d.rule:
        case "SCSub":
            return _synthesizing(kids[0])
        case "SUnitIntro":
            return e
        case "SFunIntro":
            return Lam(e.bound, _checking(kids[0]))
        case "SSumIntro":
            return Inj(e.i, _checking(kids[0]))
        case "SSumElimOne":
            return CaseOne(_synthesizing(kids[0]), e.i, e.x, _checking(kids[1]))
        case "SSumElimTwo":
            s, a1, a2 = kids
            return CaseTwo(_synthesizing(s), e.x1, _checking(a1), e.x2, _checking(a2))
        case "SVar" | "SAnno" | "SFunElim":
            return _synthesizing(d)
    raise DerivationError(d, "unknown rule")


def eq_anno(e1: Expr, e2: Expr) -> bool:
    """``e2`` is ``e1`` with (possibly) extra annotations."""
    match e1, e2:
        case UnitVal(), UnitVal():
            return True
        case Var(x), Var(y) if x == y:
            return True
        case Lam(x, b1), Lam(y, b2) if x == y and eq_anno(b1, b2):
            return True
        case App(f1, a1), App(f2, a2) if eq_anno(f1, f2) and eq_anno(a1, a2):
            return True
        case Inj(i, b1), Inj(k, b2) if i == k and eq_anno(b1, b2):
            return True
        case Anno(b1, t1), Anno(b2, t2) if t1 == t2 and eq_anno(b1, b2):
            return True
        case CaseOne(s1, i, x, b1), CaseOne(s2, k, y, b2) if (i, x) == (k, y) and eq_anno(s1, s2) and eq_anno(b1, b2):
            return True
        case CaseTwo(s1, x1, a1, x2, b1), CaseTwo(s2, y1, a2, y2, b2) if (
            (x1, x2) == (y1, y2) and eq_anno(s1, s2) and eq_anno(a1, a2) and eq_anno(b1, b2)
        ):
            return True
    return isinstance(e2, Anno) and eq_anno(e1, e2.inner)


__all__ = [
    "BiDerivation", "TADerivation", "TypeCheckError", "DerivationError", "ErrorKind",
    "Checker", "System", "FULL", "STATIC", "DYNAMIC", "EMPTY",
    "check", "synth", "static_check", "static_synth", "dyn_check", "dyn_synth",
    "is_static", "is_dynamic", "validate_assignment", "embed", "annotate", "eq_anno",
    "static_subtype", "static_subsum",
]
