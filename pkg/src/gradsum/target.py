"""The cast calculus: typing, reduction, and term precision.

Target terms carry sums ``+``, ``+1`` and ``+2`` only.  A cast ``<p => q>(M)``
checks at run time that a value of sum ``p`` really fits ``q``; a failed check
yields ``matchfail``, which then swallows its evaluation context.

Types are computed as principal types.  Components that nothing constrains
(the other side of an injection, the type of ``matchfail``) are ``Bottom``,
which sits below every type.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from . import relations as rel
from .syntax import (
    BOTTOM, HOLE, MATCHFAIL, Bottom, Cast, Ctx, EMPTY, Hole, Matchfail, TApp, TArrow, TCaseOne,
    TCaseTwo, TInj, TLam, TSum, TUNIT, TUnit, TUnitVal, TVar, TargetSum, TargetTerm,
    TargetType, plug, print_target, tsubscript,
)

T = TargetSum


class TargetTypeError(Exception):
    def __init__(self, term, reason: str):
        self.term = term
        super().__init__(f"{reason} in {print_target(term)}")


class JoinFailure(TargetTypeError):
    pass


# ---------------------------------------------------------------------------
# Lattice operations on target types

def join(t1: TargetType, t2: TargetType) -> TargetType | None:
    match t1, t2:
        case Bottom(), _:
            return t2
        case _, Bottom():
            return t1
        case TUnit(), TUnit():
            return TUNIT
        case TSum(l1, p1, r1), TSum(l2, p2, r2):
            l, r = join(l1, l2), join(r1, r2)
            if l is None or r is None:
                return None
            return TSum(l, p1 if p1 == p2 else T.PLUS, r)
        case TArrow(d1, c1), TArrow(d2, c2):
            d, c = meet(d1, d2), join(c1, c2)
            if d is None or c is None:
                return None
            return TArrow(d, c)
    return None


def meet(t1: TargetType, t2: TargetType) -> TargetType | None:
    match t1, t2:
        case Bottom(), _:
            return BOTTOM
        case _, Bottom():
            return BOTTOM
        case TUnit(), TUnit():
            return TUNIT
        case TSum(l1, p1, r1), TSum(l2, p2, r2):
            l, r = meet(l1, l2), meet(r1, r2)
            if l is None or r is None:
                return None
            if p1 == p2 or p2 is T.PLUS:
                p = p1
            elif p1 is T.PLUS:
                p = p2
            else:
                return None
            return TSum(l, p, r)
        case TArrow(d1, c1), TArrow(d2, c2):
            d, c = join(d1, d2), meet(c1, c2)
            if d is None or c is None:
                return None
            return TArrow(d, c)
    return None


def default_components(t: TargetType) -> TargetType:
    """Replace ``Bottom`` components by ``Unit`` for display; a bare ``Bottom`` stays."""
    if isinstance(t, Bottom):
        return t
    return _default(t)


def _default(t):
    match t:
        case Bottom():
            return TUNIT
        case TSum(l, p, r):
            return TSum(_default(l), p, _default(r))
        case TArrow(d, c):
            return TArrow(_default(d), _default(c))
    return t


# ---------------------------------------------------------------------------
# Principal typing

def principal_type(th: Ctx, m: TargetTerm, rules: list | None = None) -> TargetType:
    """The least type of ``m`` under ``th``; raises TargetTypeError if it has none."""

    def fire(name):
        if rules is not None:
            rules.append(name)

    def go(th, m):
        match m:
            case TUnitVal():
                fire("TUnitIntro")
                return TUNIT
            case TVar(x):
                if x not in th:
                    raise TargetTypeError(m, f"unbound variable {x}")
                fire("TVar")
                return th[x]
            case TLam(x, dom, body):
                if dom is None:
                    raise TargetTypeError(m, "lambda without a domain annotation")
                fire("TFunIntro")
                return TArrow(dom, go(th.extend(x, dom), body))
            case TApp(f, a):
                tf, ta = go(th, f), go(th, a)
                fire("TFunElim")
                if isinstance(tf, Bottom):
                    return BOTTOM
                if not isinstance(tf, TArrow):
                    raise TargetTypeError(m, f"applying a term of type {tf}")
                if not rel.target_subtype(ta, tf.dom):
                    raise TargetTypeError(m, f"argument of type {ta} does not fit {tf.dom}")
                return tf.cod
            case TInj(i, p):
                tp = go(th, p)
                fire("TInjIntro")
                return TSum(tp, tsubscript(i), BOTTOM) if i == 1 else TSum(BOTTOM, tsubscript(i), tp)
            case Cast(p, q, inner):
                ti = go(th, inner)
                fire("TCast")
                if isinstance(ti, Bottom):
                    return TSum(BOTTOM, q, BOTTOM)
                if not isinstance(ti, TSum):
                    raise TargetTypeError(m, f"casting a term of type {ti}")
                if not rel.target_subsum(ti.con, p):
                    raise TargetTypeError(m, f"cast source {p} does not admit {ti.con}")
                return TSum(ti.left, q, ti.right)
            case TCaseOne(s, i, x, arm):
                ts = go(th, s)
                fire("TInjElimOne")
                if isinstance(ts, Bottom):
                    comp = BOTTOM
                elif isinstance(ts, TSum) and ts.con is tsubscript(i):
                    comp = ts.left if i == 1 else ts.right
                else:
                    raise TargetTypeError(m, f"one-armed case on inj{i} of a term of type {ts}")
                return go(th.extend(x, comp), arm)
            case TCaseTwo(s, x1, a1, x2, a2):
                ts = go(th, s)
                fire("TInjElimTwo")
                if isinstance(ts, Bottom):
                    l = r = BOTTOM
                elif isinstance(ts, TSum):
                    l, r = ts.left, ts.right
                else:
                    raise TargetTypeError(m, f"case on a term of type {ts}")
                t1 = go(th.extend(x1, l), a1)
                t2 = go(th.extend(x2, r), a2)
                j = join(t1, t2)
                if j is None:
                    raise JoinFailure(m, f"case arms have incompatible types {t1} and {t2}")
                return j
            case Matchfail():
                fire("TMatchfail")
                return BOTTOM
            case Hole():
                raise TargetTypeError(m, "a context hole is not a term")
        raise TargetTypeError(m, "not a target term")

    return go(th, m)


def target_typecheck(th: Ctx, m: TargetTerm) -> TargetType:
    """Principal type with unconstrained sum components shown as ``Unit``.

    Only a bare ``matchfail`` (or a term that is one) keeps ``Bottom``.  Use
    ``principal_type`` when the exact least type matters.
    """
    return default_components(principal_type(th, m))


def has_type(th: Ctx, m: TargetTerm, t: TargetType) -> bool:
    try:
        return rel.target_subtype(principal_type(th, m), t)
    except TargetTypeError:
        return False


# ---------------------------------------------------------------------------
# Values and substitution

def is_value(m: TargetTerm) -> bool:
    """Values are (), variables, lambdas, and injections of values."""
    match m:
        case TUnitVal() | TVar() | TLam():
            return True
        case TInj(_, p):
            return is_value(p)
    return False


def is_cast_free(m: TargetTerm) -> bool:
    return not any(isinstance(n, Cast) for n in subterms(m))


def is_matchfail_free(m: TargetTerm) -> bool:
    return not any(isinstance(n, Matchfail) for n in subterms(m))


def subterms(m: TargetTerm) -> Iterator[TargetTerm]:
    yield m
    match m:
        case TLam(_, _, b) | TInj(_, b) | Cast(_, _, b):
            yield from subterms(b)
        case TApp(f, a):
            yield from subterms(f)
            yield from subterms(a)
        case TCaseOne(s, _, _, a):
            yield from subterms(s)
            yield from subterms(a)
        case TCaseTwo(s, _, a1, _, a2):
            yield from subterms(s)
            yield from subterms(a1)
            yield from subterms(a2)


def free_tvars(m: TargetTerm) -> frozenset[str]:
    match m:
        case TVar(x):
            return frozenset({x})
        case TLam(x, _, b):
            return free_tvars(b) - {x}
        case TInj(_, b) | Cast(_, _, b):
            return free_tvars(b)
        case TApp(f, a):
            return free_tvars(f) | free_tvars(a)
        case TCaseOne(s, _, x, a):
            return free_tvars(s) | (free_tvars(a) - {x})
        case TCaseTwo(s, x1, a1, x2, a2):
            return free_tvars(s) | (free_tvars(a1) - {x1}) | (free_tvars(a2) - {x2})
    return frozenset()


def _rename_away(x: str, avoid: set) -> str:
    y = x
    while y in avoid:
        y += "'"
    return y


def subst(m: TargetTerm, x: str, w: TargetTerm) -> TargetTerm:
    """Capture-avoiding ``m[w/x]``."""
    return _subst(m, x, w, free_tvars(w))


def _binder(y, body, x, w, fv):
    """Substitute under binder ``y``; returns the (possibly renamed) binder and body."""
    if y == x:
        return y, body
    if y in fv:
        z = _rename_away(y, set(fv) | free_tvars(body) | {x})
        body = _subst(body, y, TVar(z), frozenset({z}))
        y = z
    return y, _subst(body, x, w, fv)


def _subst(m, x, w, fv):
    match m:
        case TVar(y):
            return w if y == x else m
        case TLam(y, d, b):
            y, b = _binder(y, b, x, w, fv)
            return TLam(y, d, b)
        case TInj(i, b):
            return TInj(i, _subst(b, x, w, fv))
        case Cast(p, q, b):
            return Cast(p, q, _subst(b, x, w, fv))
        case TApp(f, a):
            return TApp(_subst(f, x, w, fv), _subst(a, x, w, fv))
        case TCaseOne(s, i, y, a):
            y, a = _binder(y, a, x, w, fv)
            return TCaseOne(_subst(s, x, w, fv), i, y, a)
        case TCaseTwo(s, y1, a1, y2, a2):
            y1, a1 = _binder(y1, a1, x, w, fv)
            y2, a2 = _binder(y2, a2, x, w, fv)
            return TCaseTwo(_subst(s, x, w, fv), y1, a1, y2, a2)
    return m


# ---------------------------------------------------------------------------
# Reduction

def _principal_sum(w) -> TargetSum | None:
    """The constructor a sum value is born with, ``+i`` for ``inj_i``."""
    return tsubscript(w.i) if isinstance(w, TInj) else None


def matching_rules(m: TargetTerm) -> list[tuple[str, TargetTerm]]:
    """Every reduction rule whose left-hand side and side condition match ``m``."""
    out = []
    match m:
        case Cast(p, q, w) if is_value(w):
            if rel.target_subsum(p, q):
                out.append(("ReduceUpcast", w))
            if isinstance(w, TInj):
                k = q
                if p is T.PLUS and k is tsubscript(w.i):
                    out.append(("ReduceCastSuccess", w))
                if k in (T.PLUS1, T.PLUS2) and k is not tsubscript(w.i) and p in (tsubscript(w.i), T.PLUS):
                    out.append(("ReduceCastFailure", MATCHFAIL))
        case TCaseOne(TInj(i, w), k, x, arm) if i == k and is_value(w):
            out.append(("ReduceCaseOne", subst(arm, x, w)))
        case TCaseTwo(TInj(i, w), x1, a1, x2, a2) if is_value(w):
            out.append(("ReduceCaseTwo", subst(a1, x1, w) if i == 1 else subst(a2, x2, w)))
        case TApp(TLam(x, _, body), w) if is_value(w):
            out.append(("ReduceBeta", subst(body, x, w)))
    return out


def reduce(m: TargetTerm) -> TargetTerm | None:
    rules = matching_rules(m)
    return rules[0][1] if rules else None


@dataclass(frozen=True)
class Decomposition:
    """``m = context[focus]``; ``kind`` is value, redex, matchfail or stuck."""
    kind: str
    context: TargetTerm
    focus: TargetTerm


def decompose(m: TargetTerm) -> Decomposition:
    """The unique split of ``m`` into an evaluation context and its focus."""
    if is_value(m):
        return Decomposition("value", HOLE, m)
    if isinstance(m, Matchfail):
        return Decomposition("matchfail", HOLE, m)
    sub = _eval_position(m)
    if sub is None:
        kind = "redex" if matching_rules(m) else "stuck"
        return Decomposition(kind, HOLE, m)
    frame, inner = sub
    d = decompose(inner)
    return Decomposition(d.kind, plug(frame, d.context), d.focus)


def _eval_position(m) -> tuple[TargetTerm, TargetTerm] | None:
    """The single-level frame and subterm where evaluation continues, if not at ``m`` itself."""
    match m:
        case TInj(i, p) if not is_value(p):
            return TInj(i, HOLE), p
        case Cast(p, q, b) if not is_value(b):
            return Cast(p, q, HOLE), b
        case TCaseOne(s, i, x, a) if not is_value(s):
            return TCaseOne(HOLE, i, x, a), s
        case TCaseTwo(s, x1, a1, x2, a2) if not is_value(s):
            return TCaseTwo(HOLE, x1, a1, x2, a2), s
        case TApp(f, a) if not is_value(f):
            return TApp(HOLE, a), f
        case TApp(f, a) if not is_value(a):
            return TApp(f, HOLE), a
    return None


def all_decompositions(m: TargetTerm) -> Iterator[tuple[TargetTerm, TargetTerm]]:
    """Every way to read ``m`` as ``E[n]`` by the evaluation-context grammar alone."""
    yield HOLE, m
    match m:
        case TInj(i, p):
            for e, n in all_decompositions(p):
                yield TInj(i, e), n
        case Cast(p, q, b):
            for e, n in all_decompositions(b):
                yield Cast(p, q, e), n
        case TCaseOne(s, i, x, a):
            for e, n in all_decompositions(s):
                yield TCaseOne(e, i, x, a), n
        case TCaseTwo(s, x1, a1, x2, a2):
            for e, n in all_decompositions(s):
                yield TCaseTwo(e, x1, a1, x2, a2), n
        case TApp(f, a):
            for e, n in all_decompositions(f):
                yield TApp(e, a), n
            if is_value(f):
                for e, n in all_decompositions(a):
                    yield TApp(f, e), n


def possible_steps(m: TargetTerm) -> list[tuple[str, TargetTerm]]:
    """All steps the rules permit, found without the deterministic strategy."""
    out = []
    for e, n in all_decompositions(m):
        if isinstance(n, Matchfail):
            if not isinstance(e, Hole):
                out.append(("StepMatchfail", MATCHFAIL))
            continue
        for rule, contractum in matching_rules(n):
            out.append((rule, plug(e, contractum)))
    return out


class Stuck(Exception):
    def __init__(self, term):
        self.term = term
        super().__init__(f"stuck term: {print_target(term)}")


def step(m: TargetTerm) -> tuple[str, TargetTerm] | None:
    """One step: the rule that fired and the result; None if ``m`` is a value or matchfail."""
    if is_value(m) or isinstance(m, Matchfail):
        return None
    return _step(m)


def _step(m) -> tuple[str, TargetTerm]:
    sub = _eval_position(m)
    if sub is None:
        rules = matching_rules(m)
        if not rules:
            raise Stuck(m)
        return rules[0]
    frame, inner = sub
    if isinstance(inner, Matchfail):
        return "StepMatchfail", MATCHFAIL
    rule, new = _step(inner)
    if rule == "StepMatchfail":
        # the inner matchfail's context extends through this frame
        return rule, MATCHFAIL
    return rule, _refill(frame, new)


def _refill(frame, n):
    match frame:
        case TInj(i, _):
            return TInj(i, n)
        case Cast(p, q, _):
            return Cast(p, q, n)
        case TCaseOne(_, i, x, a):
            return TCaseOne(n, i, x, a)
        case TCaseTwo(_, x1, a1, x2, a2):
            return TCaseTwo(n, x1, a1, x2, a2)
        case TApp(Hole(), a):
            return TApp(n, a)
        case TApp(f, Hole()):
            return TApp(f, n)
    raise AssertionError(frame)


class VerdictKind(enum.Enum):
    VALUE = "value"
    MATCHFAIL = "matchfail"
    BUDGET = "budget"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    term: TargetTerm
    steps: int
    trace: tuple[tuple[str, TargetTerm], ...] = field(default=(), compare=False)

    @property
    def is_value(self):
        return self.kind is VerdictKind.VALUE

    @property
    def is_matchfail(self):
        return self.kind is VerdictKind.MATCHFAIL


def evaluate(m: TargetTerm, budget: int = 100_000, trace: bool = False,
             rules: list | None = None) -> Verdict:
    """Step ``m`` until it is a value, matchfail, or the budget runs out.  Raises Stuck."""
    steps = []
    n = 0
    while True:
        if is_value(m):
            return Verdict(VerdictKind.VALUE, m, n, tuple(steps))
        if isinstance(m, Matchfail):
            return Verdict(VerdictKind.MATCHFAIL, m, n, tuple(steps))
        if n >= budget:
            return Verdict(VerdictKind.BUDGET, m, n, tuple(steps))
        rule, m = _step(m)
        n += 1
        if rules is not None:
            rules.append(rule)
        if trace:
            steps.append((rule, m))


def value_shape(w: TargetTerm):
    """Observable shape of a value: unit, a function, or an injection of a shape."""
    match w:
        case TUnitVal():
            return "unit"
        case TLam():
            return "fn"
        case TInj(i, p):
            return (f"inj{i}", value_shape(p))
    raise ValueError(f"not a value: {print_target(w)}")


# ---------------------------------------------------------------------------
# Term precision

def term_precision(m1: TargetTerm, m2: TargetTerm) -> bool:
    """``m1`` fails at least as often as ``m2``: same shape up to casts that are more precise.

    Compared up to renaming of bound variables; lambda domains are ignored.
    """
    return _tp(m1, m2, {}, {})


def _tp(m1, m2, env1: dict, env2: dict) -> bool:
    def bind(x, y):
        n = 1 + max(env1.values(), default=0)
        return {**env1, x: n}, {**env2, y: n}

    if isinstance(m1, Matchfail):
        return True
    if isinstance(m1, Cast):
        if isinstance(m2, Cast) and rel.cast_precision((m1.src, m1.dst), (m2.src, m2.dst)) \
                and _tp(m1.inner, m2.inner, env1, env2):
            return True
        return _tp(m1.inner, m2, env1, env2)
    match m1, m2:
        case TUnitVal(), TUnitVal():
            return True
        case Hole(), Hole():
            return True
        case TVar(x), TVar(y):
            if x in env1 or y in env2:
                return env1.get(x) == env2.get(y)
            return x == y
        case TLam(x, _, b1), TLam(y, _, b2):
            return _tp(b1, b2, *bind(x, y))
        case TApp(f1, a1), TApp(f2, a2):
            return _tp(f1, f2, env1, env2) and _tp(a1, a2, env1, env2)
        case TInj(i, b1), TInj(k, b2):
            return i == k and _tp(b1, b2, env1, env2)
        case TCaseOne(s1, i, x, a1), TCaseOne(s2, k, y, a2):
            return i == k and _tp(s1, s2, env1, env2) and _tp(a1, a2, *bind(x, y))
        case TCaseOne(s1, i, x, a1), TCaseTwo(s2, y1, b1, y2, b2):
            y, b = (y1, b1) if i == 1 else (y2, b2)
            return _tp(s1, s2, env1, env2) and _tp(a1, b, *bind(x, y))
        case TCaseTwo(s1, x1, a1, x2, b1), TCaseTwo(s2, y1, a2, y2, b2):
            return (_tp(s1, s2, env1, env2) and _tp(a1, a2, *bind(x1, y1))
                    and _tp(b1, b2, *bind(x2, y2)))
    return False


__all__ = [
    "TargetTypeError", "JoinFailure", "join", "meet", "default_components",
    "principal_type", "target_typecheck", "has_type", "is_value", "is_cast_free",
    "is_matchfail_free", "subterms", "free_tvars", "subst", "matching_rules", "reduce",
    "Decomposition", "decompose", "all_decompositions", "possible_steps", "Stuck", "step",
    "VerdictKind", "Verdict", "evaluate", "value_shape", "term_precision", "EMPTY",
]
