"""Structural shrinking of failing programs.

A candidate replaces one subterm with something smaller that fits the same
judgment: a minimal term of the subterm's type, a variable of that type, or a
smaller subterm found inside it.  Candidates that no longer typecheck or no
longer fail are discarded.  Greedy, first improvement wins.
"""

from __future__ import annotations

from typing import Callable, Iterator

from .. import relations as rel
from ..syntax import (
    Anno, App, Arrow, CaseOne, CaseTwo, Expr, Inj, Lam, Sum, UnitVal, Var, expr_size, innate,
)
from ..typecheck import CHECK, FULL, BiDerivation, TypeCheckError
from .generate import Program

# Which expression child each derivation premise talks about.
_CHILD_PATHS = {
    "Sub": (None,), "Anno": (0,), "FunIntro": (0,), "FunElim": (0, 1), "SumIntro": (0,),
    "SumElimOne": (0, 1), "SumElimTwo": (0, 1, 2),
}
_BASE = {
    "SynVar": "Var", "ChkCSub": "Sub", "SynAnno": "Anno", "ChkUnitIntro": "UnitIntro",
    "ChkFunIntro": "FunIntro", "SynFunElim": "FunElim", "ChkSumIntro": "SumIntro",
    "ChkSumElimOne": "SumElimOne", "ChkSumElimTwo": "SumElimTwo",
}


def children(e: Expr) -> tuple:
    match e:
        case Lam(_, b) | Inj(_, b) | Anno(b, _):
            return (b,)
        case App(f, a):
            return (f, a)
        case CaseOne(s, _, _, a):
            return (s, a)
        case CaseTwo(s, _, a1, _, a2):
            return (s, a1, a2)
    return ()


def replace_at(e: Expr, path: tuple, new: Expr) -> Expr:
    if not path:
        return new
    k, rest = path[0], path[1:]
    match e:
        case Lam(x, b):
            return Lam(x, replace_at(b, rest, new))
        case Inj(i, b):
            return Inj(i, replace_at(b, rest, new))
        case Anno(b, a):
            return Anno(replace_at(b, rest, new), a)
        case App(f, a):
            return App(replace_at(f, rest, new), a) if k == 0 else App(f, replace_at(a, rest, new))
        case CaseOne(s, i, x, a):
            return CaseOne(replace_at(s, rest, new), i, x, a) if k == 0 else CaseOne(s, i, x, replace_at(a, rest, new))
        case CaseTwo(s, x1, a1, x2, a2):
            if k == 0:
                return CaseTwo(replace_at(s, rest, new), x1, a1, x2, a2)
            if k == 1:
                return CaseTwo(s, x1, replace_at(a1, rest, new), x2, a2)
            return CaseTwo(s, x1, a1, x2, replace_at(a2, rest, new))
    raise ValueError("bad path")


def positions(d: BiDerivation, path: tuple = ()) -> Iterator[tuple[tuple, BiDerivation]]:
    """Each derivation node with the path of its expression inside the root expression."""
    yield path, d
    base = _BASE.get(d.rule, d.rule)
    for step, child in zip(_CHILD_PATHS.get(base, ()), d.children):
        yield from positions(child, path if step is None else path + (step,))


def subterms(e: Expr) -> Iterator[Expr]:
    for c in children(e):
        yield c
        yield from subterms(c)


def minimal_term(g, a) -> Expr:
    """A smallest-ish checking term for ``a`` (full system)."""
    for x, b in g.items():
        if b == a:
            return Var(x)
    match a:
        case Arrow(d, c):
            x = "s0"
            while x in g:
                x += "'"
            return Lam(x, minimal_term(g.extend(x, d), c))
        case Sum(l, _, r):
            i = 1 if rel.subsum(innate(1), a.con) else 2
            return Inj(i, minimal_term(g, l if i == 1 else r))
    return UnitVal()


def candidates(p: Program) -> Iterator[Program]:
    try:
        d = p.derive(FULL)
    except (TypeCheckError, AssertionError):
        return
    size = expr_size(p.expr)
    seen = set()
    for path, node in positions(d):
        if node.rule == "ChkCSub":
            continue
        here = node.expr
        options = []
        if node.direction == CHECK:
            options.append(minimal_term(node.ctx, node.type))
        else:
            options.extend(Var(x) for x, t in node.ctx.items() if t == node.type)
            options.append(Anno(minimal_term(node.ctx, node.type), node.type))
        options.extend(subterms(here))
        for new in options:
            e2 = replace_at(p.expr, path, new)
            if expr_size(e2) >= size or e2 in seen:
                continue
            seen.add(e2)
            yield Program(p.ctx, e2, p.type, p.direction)


def shrink(p: Program, fails: Callable[[Program], bool], attempts: int = 1000) -> tuple[Program, int]:
    """Greedily minimize ``p`` while ``fails`` keeps holding.  Returns the result and attempts used."""
    used = 0
    improved = True
    while improved and used < attempts:
        improved = False
        for c in candidates(p):
            if used >= attempts:
                break
            used += 1
            try:
                c.derive(FULL)
            except (TypeCheckError, AssertionError):
                continue
            if fails(c):
                p, improved = c, True
                break
    return p, used


__all__ = ["children", "replace_at", "positions", "subterms", "minimal_term", "candidates", "shrink"]
