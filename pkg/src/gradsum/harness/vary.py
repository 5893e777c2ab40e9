"""Varying the precision of annotations, contexts, and goal types."""

from __future__ import annotations

import itertools
from typing import Iterator

from .. import relations as rel
from ..syntax import (
    Anno, App, Arrow, CaseOne, CaseTwo, Ctx, Expr, Inj, Lam, Sum, SumCon, Type, Unit,
    annotations,
)

LOOSEN, TIGHTEN = "loosen", "tighten"

_UP = {d: tuple(c for c in SumCon if rel.sum_precision(d, c)) for d in SumCon}
_DOWN = {d: tuple(c for c in SumCon if rel.sum_precision(c, d)) for d in SumCon}


def related_types(a: Type, direction: str = LOOSEN) -> Iterator[Type]:
    """Every type above (loosen) or below (tighten) ``a`` in precision, ``a`` included."""
    table = _UP if direction == LOOSEN else _DOWN
    match a:
        case Sum(l, d, r):
            for ll, dd, rr in itertools.product(
                    tuple(related_types(l, direction)), table[d], tuple(related_types(r, direction))):
                yield Sum(ll, dd, rr)
        case Arrow(d, c):
            for dd, cc in itertools.product(tuple(related_types(d, direction)), tuple(related_types(c, direction))):
                yield Arrow(dd, cc)
        case _:
            yield a


def strictly_related(a: Type, direction: str = LOOSEN) -> Iterator[Type]:
    return (b for b in related_types(a, direction) if b != a)


def replace_annotation(e: Expr, index: int, new: Type) -> Expr:
    """Replace the ``index``-th annotation (pre-order) with ``new``."""
    counter = itertools.count()

    def go(e):
        match e:
            case Anno(b, a):
                k = next(counter)
                return Anno(go(b), new if k == index else a)
            case Lam(x, b):
                return Lam(x, go(b))
            case Inj(i, b):
                return Inj(i, go(b))
            case App(f, a):
                f2 = go(f)
                return App(f2, go(a))
            case CaseOne(s, i, x, a):
                s2 = go(s)
                return CaseOne(s2, i, x, go(a))
            case CaseTwo(s, x1, a1, x2, a2):
                s2 = go(s)
                b1 = go(a1)
                return CaseTwo(s2, x1, b1, x2, go(a2))
        return e

    return go(e)


def vary_precision(e: Expr, direction: str = LOOSEN) -> Iterator[Expr]:
    """Every expression obtained by moving one annotation strictly up (or down) in precision."""
    for k, a in enumerate(annotations(e)):
        for b in strictly_related(a, direction):
            yield replace_annotation(e, k, b)


def vary_ctx(g: Ctx, direction: str = LOOSEN) -> Iterator[Ctx]:
    for x, a in g.items():
        for b in strictly_related(a, direction):
            yield g.extend(x, b)


__all__ = ["LOOSEN", "TIGHTEN", "related_types", "strictly_related", "replace_annotation",
           "vary_precision", "vary_ctx"]
