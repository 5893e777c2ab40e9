"""Decision procedures for the binary relations on sums and types.

The 8x8 constructor relations are precomputed from their edge lists; the type
relations recurse structurally over same-shaped types.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterable

from .syntax import (
    Arrow, Bottom, Ctx, Expr, SumCon, Sum, TArrow, TargetSum, TSum, TUnit, Unit,
    UnitVal, Var, Lam, App, Inj, Anno, CaseOne, CaseTwo,
)

S = SumCon
SUMS = tuple(SumCon)
TSUMS = tuple(TargetSum)

# Subsum edges (lower, upper).  The direct +? <= + edge is redundant given
# +? <= +*i <= +; both variants close to the same table.
SUBSUM_EDGES = (
    (S.DYN1, S.PLUS1), (S.DYN2, S.PLUS2),
    (S.DYN1, S.DYN), (S.DYN2, S.DYN),
    (S.PLUS1, S.STAR1), (S.PLUS2, S.STAR2),
    (S.DYN, S.STAR1), (S.DYN, S.STAR2),
    (S.STAR1, S.PLUS), (S.STAR2, S.PLUS),
    (S.DYN, S.PLUS),
)

# Precision edges (more precise, less precise).  There is deliberately no edge
# between +?i and +*i.
PRECISION_EDGES = (
    (S.PLUS1, S.DYN1), (S.PLUS1, S.STAR1),
    (S.PLUS2, S.DYN2), (S.PLUS2, S.STAR2),
    (S.PLUS, S.DYN),
    (S.DYN1, S.DYN), (S.STAR1, S.DYN),
    (S.DYN2, S.DYN), (S.STAR2, S.DYN),
)


def closure(universe: Iterable, edges: Iterable[tuple]) -> frozenset[tuple]:
    """Reflexive-transitive closure (Warshall)."""
    universe = list(universe)
    rel = {(a, a) for a in universe} | set(edges)
    for k in universe:
        for i in universe:
            if (i, k) not in rel:
                continue
            for j in universe:
                if (k, j) in rel:
                    rel.add((i, j))
    return frozenset(rel)


SUBSUM = closure(SUMS, SUBSUM_EDGES)
PRECISION = closure(SUMS, PRECISION_EDGES)

# dcons on constructors: gain precision, then subsum, then lose precision.
DCONS_SUM = frozenset(
    (d1, d2)
    for d1, d2 in itertools.product(SUMS, SUMS)
    if any((a, d1) in PRECISION and (a, b) in SUBSUM and (b, d2) in PRECISION
           for a in SUMS for b in SUMS)
)


def subsum(d1: SumCon, d2: SumCon) -> bool:
    return (d1, d2) in SUBSUM


def sum_precision(d1: SumCon, d2: SumCon) -> bool:
    return (d1, d2) in PRECISION


def dcons_sum(d1: SumCon, d2: SumCon) -> bool:
    return (d1, d2) in DCONS_SUM


def subtype(a1, a2) -> bool:
    match a1, a2:
        case Unit(), Unit():
            return True
        case Sum(l1, d1, r1), Sum(l2, d2, r2):
            return subsum(d1, d2) and subtype(l1, l2) and subtype(r1, r2)
        case Arrow(d1, c1), Arrow(d2, c2):
            return subtype(d2, d1) and subtype(c1, c2)
    return False


def type_precision(a1, a2) -> bool:
    """``a1`` is at most as imprecise as ``a2``; covariant on both sides of an arrow."""
    match a1, a2:
        case Unit(), Unit():
            return True
        case Sum(l1, d1, r1), Sum(l2, d2, r2):
            return sum_precision(d1, d2) and type_precision(l1, l2) and type_precision(r1, r2)
        case Arrow(d1, c1), Arrow(d2, c2):
            return type_precision(d1, d2) and type_precision(c1, c2)
    return False


def ctx_precision(g1: Ctx, g2: Ctx) -> bool:
    return g1.keys() == g2.keys() and all(type_precision(g1[x], g2[x]) for x in g1)


def expr_precision(e1: Expr, e2: Expr) -> bool:
    """Same expression up to annotations, each annotation of ``e1`` at most as imprecise.

    Annotations must sit in the same places on both sides.
    """
    match e1, e2:
        case UnitVal(), UnitVal():
            return True
        case Var(x), Var(y):
            return x == y
        case Lam(x, b1), Lam(y, b2):
            return x == y and expr_precision(b1, b2)
        case App(f1, a1), App(f2, a2):
            return expr_precision(f1, f2) and expr_precision(a1, a2)
        case Inj(i, b1), Inj(k, b2):
            return i == k and expr_precision(b1, b2)
        case Anno(b1, a1), Anno(b2, a2):
            return type_precision(a1, a2) and expr_precision(b1, b2)
        case CaseOne(s1, i, x, b1), CaseOne(s2, k, y, b2):
            return (i, x) == (k, y) and expr_precision(s1, s2) and expr_precision(b1, b2)
        case CaseTwo(s1, x1, a1, x2, b1), CaseTwo(s2, y1, a2, y2, b2):
            return ((x1, x2) == (y1, y2) and expr_precision(s1, s2)
                    and expr_precision(a1, a2) and expr_precision(b1, b2))
    return False


def dcons(a1, a2) -> bool:
    """Directed consistency ``a1 ~> a2``, decomposed structurally."""
    match a1, a2:
        case Unit(), Unit():
            return True
        case Sum(l1, d1, r1), Sum(l2, d2, r2):
            return dcons_sum(d1, d2) and dcons(l1, l2) and dcons(r1, r2)
        case Arrow(d1, c1), Arrow(d2, c2):
            return dcons(d2, d1) and dcons(c1, c2)
    return False


SYNTH_GOALS = (S.STAR1, S.STAR2, S.PLUS)


def sum_synth(d: SumCon, goal: SumCon) -> bool:
    """The ``d =>> goal`` judgment gating case eliminations."""
    if goal not in SYNTH_GOALS:
        raise ValueError(f"sum synthesis goal must be +*1, +*2 or +, got {goal}")
    if goal is S.PLUS:
        return True
    i = 1 if goal is S.STAR1 else 2
    return d in ((S.DYN1, S.PLUS1, S.STAR1) if i == 1 else (S.DYN2, S.PLUS2, S.STAR2)) or d is S.DYN


# ---------------------------------------------------------------------------
# Target side

T = TargetSum
TARGET_SUBSUM = frozenset({(p, p) for p in TSUMS} | {(T.PLUS1, T.PLUS), (T.PLUS2, T.PLUS)})


def target_subsum(p1: TargetSum, p2: TargetSum) -> bool:
    return (p1, p2) in TARGET_SUBSUM


def target_subtype(t1, t2) -> bool:
    match t1, t2:
        case Bottom(), _:
            return True
        case TUnit(), TUnit():
            return True
        case TSum(l1, p1, r1), TSum(l2, p2, r2):
            return target_subsum(p1, p2) and target_subtype(l1, l2) and target_subtype(r1, r2)
        case TArrow(d1, c1), TArrow(d2, c2):
            return target_subtype(d2, d1) and target_subtype(c1, c2)
    return False


class CastClass(enum.Enum):
    SAFE = "sc"
    BACKWARD = "bc"
    MATCH = "mc"

    def __str__(self):
        return self.value


def cast_class(src: TargetSum, dst: TargetSum) -> CastClass:
    if target_subsum(src, dst):
        return CastClass.SAFE
    if src is T.PLUS:
        return CastClass.BACKWARD
    return CastClass.MATCH


def _base_cast_precision(c1, c2) -> bool:
    if c1 == c2:
        return True
    k1, k2 = cast_class(*c1), cast_class(*c2)
    if (k1, k2) in {
        (CastClass.MATCH, CastClass.BACKWARD),
        (CastClass.BACKWARD, CastClass.SAFE),
        (CastClass.MATCH, CastClass.SAFE),
    }:
        return True
    # <+ => +> is more precise than <+i => +>
    return c1 == (T.PLUS, T.PLUS) and c2[1] is T.PLUS and c2[0] in (T.PLUS1, T.PLUS2)


# Rules the precision pipeline needs beyond the stated ones.  Each relates two
# casts that both succeed on every well-typed input the left one accepts.
def _added_cast_precision(c1, c2) -> bool:
    for i in (T.PLUS1, T.PLUS2):
        if (c1, c2) in {
            ((i, i), (i, T.PLUS)),         # identity below the upcast
            ((i, i), (T.PLUS, i)),         # identity below the backward cast it agrees with
            ((i, T.PLUS), (T.PLUS, T.PLUS)),  # upcast below the identity on +
            ((i, i), (T.PLUS, T.PLUS)),       # composite of the first and third
        }:
            return True
    return False


CAST_PAIRS = tuple(itertools.product(TSUMS, TSUMS))
STATED_CAST_PRECISION = frozenset(
    (c1, c2) for c1 in CAST_PAIRS for c2 in CAST_PAIRS if _base_cast_precision(c1, c2)
)
ADDED_CAST_PRECISION = frozenset(
    (c1, c2) for c1 in CAST_PAIRS for c2 in CAST_PAIRS if _added_cast_precision(c1, c2)
)
# Not closed transitively: chaining a backward cast through a safe cast can
# relate two casts that disagree on some injection.
CAST_PRECISION = STATED_CAST_PRECISION | ADDED_CAST_PRECISION


def cast_succeeds_on(c, k: TargetSum) -> bool | None:
    """Whether cast ``c`` accepts ``inj`` with principal sum ``k`` (None if that input is ill-typed)."""
    src, dst = c
    if not target_subsum(k, src):
        return None
    return target_subsum(k, dst)


def cast_precision_sound(c1, c2) -> bool:
    """Left success implies right success on every injection both casts can receive."""
    for k in (T.PLUS1, T.PLUS2):
        s1, s2 = cast_succeeds_on(c1, k), cast_succeeds_on(c2, k)
        if s1 and s2 is False:
            return False
    return True


def cast_precision(c1: tuple[TargetSum, TargetSum], c2: tuple[TargetSum, TargetSum]) -> bool:
    """``<c1> ⊑ <c2>``: the left cast fails at least as often as the right."""
    return (tuple(c1), tuple(c2)) in CAST_PRECISION


# ---------------------------------------------------------------------------
# Tables for display

TABLES = ("subsum", "precision", "dcons-sum", "cast-class", "cast-precision")


def sum_table(name: str) -> tuple[list[str], list[str], list[list[str]]]:
    """Row labels, column labels, and cells for a named relation table."""
    if name == "cast-class":
        labels = [str(p) for p in TSUMS]
        cells = [[str(cast_class(p, q)) for q in TSUMS] for p in TSUMS]
        return labels, labels, cells
    if name == "cast-precision":
        labels = [f"<{p}=>{q}>" for p, q in CAST_PAIRS]
        cells = [["1" if cast_precision(c1, c2) else "." for c2 in CAST_PAIRS] for c1 in CAST_PAIRS]
        return labels, labels, cells
    rel = {"subsum": SUBSUM, "precision": PRECISION, "dcons-sum": DCONS_SUM}[name]
    labels = [str(d) for d in SUMS]
    cells = [["1" if (a, b) in rel else "." for b in SUMS] for a in SUMS]
    return labels, labels, cells
