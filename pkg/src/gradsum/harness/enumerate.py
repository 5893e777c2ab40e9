"""Exhaustive enumeration of types and expressions.

Two independent routes produce expressions.  ``enum_exprs`` follows the
grammar blindly; ``enum_checking`` and ``enum_synth`` invert the bidirectional
rules and so only ever produce well-typed terms.  At small sizes the second
must equal the first filtered through the checker.

Binders are named canonically by nesting depth (``x0``, ``x1``, ...), so each
alpha-equivalence class appears exactly once.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Iterator, Sequence

from .. import relations as rel
from ..syntax import (
    UNIT, Anno, App, Arrow, CaseOne, CaseTwo, Ctx, Inj, Lam, Sum, SumCon, Type, UnitVal, Var,
    innate, star,
)
from ..typecheck import FULL, System

ALL_SUMS = tuple(SumCon)


@functools.lru_cache(maxsize=None)
def enum_types(depth: int, cons: tuple[SumCon, ...] = ALL_SUMS) -> tuple[Type, ...]:
    """All types of depth at most ``depth`` whose sums are drawn from ``cons``."""
    if depth <= 0:
        return (UNIT,)
    below = enum_types(depth - 1, cons)
    sums = tuple(Sum(a, d, b) for a in below for d in cons for b in below)
    arrows = tuple(Arrow(a, b) for a in below for b in below)
    return (UNIT,) + sums + arrows


def type_count(depth: int, ncons: int = 8) -> int:
    """Closed form for ``len(enum_types(depth))``: ``1 + (ncons + 1) * count(depth - 1) ** 2``."""
    if depth <= 0:
        return 1
    return 1 + (ncons + 1) * type_count(depth - 1, ncons) ** 2


def binder(depth: int) -> str:
    return f"x{depth}"


# ---------------------------------------------------------------------------
# Raw grammar enumeration

def enum_exprs(g: Ctx | Iterable[str], size: int, universe: Sequence[Type] | None = None,
               exact: bool = False) -> Iterator:
    """Every expression of the given size (or up to it) whose free variables lie in ``g``.

    Annotations range over ``universe`` (default: depth-1 types).
    """
    names = tuple(g)
    uni = tuple(universe) if universe is not None else enum_types(1)
    sizes = [size] if exact else range(1, size + 1)
    for n in sizes:
        yield from _raw(names, n, uni)


@functools.lru_cache(maxsize=None)
def _raw(scope: tuple[str, ...], n: int, uni: tuple) -> tuple:
    if n < 1:
        return ()
    out = []
    if n == 1:
        out.append(UnitVal())
        out.extend(Var(x) for x in scope)
        return tuple(out)
    x = binder(len(scope))
    inner = scope + (x,)
    out.extend(Lam(x, b) for b in _raw(inner, n - 1, uni))
    for i in (1, 2):
        out.extend(Inj(i, b) for b in _raw(scope, n - 1, uni))
    out.extend(Anno(b, a) for b in _raw(scope, n - 1, uni) for a in uni)
    for k in range(1, n - 1):
        for f in _raw(scope, k, uni):
            out.extend(App(f, a) for a in _raw(scope, n - 1 - k, uni))
    for k in range(1, n - 1):
        for s in _raw(scope, k, uni):
            for i in (1, 2):
                out.extend(CaseOne(s, i, x, arm) for arm in _raw(inner, n - 1 - k, uni))
    for k in range(1, n - 2):
        for s in _raw(scope, k, uni):
            for k1 in range(1, n - 1 - k):
                arms1 = _raw(inner, k1, uni)
                arms2 = _raw(inner, n - 1 - k - k1, uni)
                out.extend(CaseTwo(s, x, a1, x, a2) for a1 in arms1 for a2 in arms2)
    return tuple(out)


def raw_count(nvars: int, n: int, nuni: int) -> int:
    """Grammar counter for ``len(_raw(...))`` computed without building terms."""
    return _raw_count(nvars, n, nuni)


@functools.lru_cache(maxsize=None)
def _raw_count(v: int, n: int, u: int) -> int:
    if n < 1:
        return 0
    if n == 1:
        return 1 + v
    total = _raw_count(v + 1, n - 1, u) + (2 + u) * _raw_count(v, n - 1, u)
    for k in range(1, n - 1):
        total += _raw_count(v, k, u) * _raw_count(v, n - 1 - k, u)
        total += 2 * _raw_count(v, k, u) * _raw_count(v + 1, n - 1 - k, u)
    for k in range(1, n - 2):
        for k1 in range(1, n - 1 - k):
            total += _raw_count(v, k, u) * _raw_count(v + 1, k1, u) * _raw_count(v + 1, n - 1 - k - k1, u)
    return total


# ---------------------------------------------------------------------------
# Type-directed enumeration

class TypedEnumerator:
    """Enumerates exactly the expressions a system accepts, by inverting its rules.

    ``universe`` supplies annotation types.  Results are memoized per
    (context, goal, size).
    """

    def __init__(self, universe: Sequence[Type], system: System = FULL):
        self.uni = tuple(universe)
        self.sys = system
        self._chk: dict = {}
        self._syn: dict = {}

    def checking(self, g: Ctx, a: Type, n: int) -> tuple:
        key = (g, a, n)
        if key not in self._chk:
            self._chk[key] = tuple(self._checking(g, a, n))
        return self._chk[key]

    def synth(self, g: Ctx, n: int) -> tuple:
        """Pairs (expression, synthesized type)."""
        key = (g, n)
        if key not in self._syn:
            self._syn[key] = tuple(self._synth(g, n))
        return self._syn[key]

    def _checking(self, g, a, n) -> Iterator:
        if n < 1:
            return
        x = binder(len(g))
        match a:
            case _ if n == 1 and a == UNIT:
                yield UnitVal()
            case Arrow(dom, cod) if n > 1:
                yield from (Lam(x, b) for b in self.checking(g.extend(x, dom), cod, n - 1))
            case Sum(left, d, right) if n > 1:
                for i, comp in ((1, left), (2, right)):
                    if self.sys.intro(i, d):
                        yield from (Inj(i, b) for b in self.checking(g, comp, n - 1))
        for k in range(1, n - 1):
            for s, b in self.synth(g, k):
                if not isinstance(b, Sum):
                    continue
                for i, comp in ((1, b.left), (2, b.right)):
                    if self.sys.elim_one(b.con, i):
                        yield from (CaseOne(s, i, x, arm)
                                    for arm in self.checking(g.extend(x, comp), a, n - 1 - k))
        for k in range(1, n - 2):
            for s, b in self.synth(g, k):
                if not isinstance(b, Sum) or not self.sys.elim_two(b.con):
                    continue
                g1, g2 = g.extend(x, b.left), g.extend(x, b.right)
                for k1 in range(1, n - 1 - k):
                    arms2 = self.checking(g2, a, n - 1 - k - k1)
                    if not arms2:
                        continue
                    for a1 in self.checking(g1, a, k1):
                        yield from (CaseTwo(s, x, a1, x, a2) for a2 in arms2)
        for e, b in self.synth(g, n):
            if self.sys.subsumes(b, a):
                yield e

    def _synth(self, g, n) -> Iterator:
        if n == 1:
            yield from ((Var(x), t) for x, t in g.items())
            return
        for b in self.uni:
            yield from ((Anno(e, b), b) for e in self.checking(g, b, n - 1))
        for k in range(1, n - 1):
            for f, fa in self.synth(g, k):
                if isinstance(fa, Arrow):
                    yield from ((App(f, arg), fa.cod) for arg in self.checking(g, fa.dom, n - 1 - k))


def enum_checking(g: Ctx, a: Type, max_size: int, universe: Sequence[Type] | None = None,
                  system: System = FULL) -> Iterator:
    en = TypedEnumerator(universe if universe is not None else enum_types(1), system)
    for n in range(1, max_size + 1):
        yield from en.checking(g, a, n)


def enum_synth(g: Ctx, max_size: int, universe: Sequence[Type] | None = None,
               system: System = FULL) -> Iterator:
    en = TypedEnumerator(universe if universe is not None else enum_types(1), system)
    for n in range(1, max_size + 1):
        yield from en.synth(g, n)


def fragment_cons(fragment: str) -> tuple[SumCon, ...]:
    if fragment == "static":
        return (SumCon.PLUS, SumCon.PLUS1, SumCon.PLUS2)
    if fragment == "dynamic":
        return (SumCon.DYN,)
    return ALL_SUMS


__all__ = [
    "enum_types", "type_count", "binder", "enum_exprs", "raw_count", "TypedEnumerator",
    "enum_checking", "enum_synth", "fragment_cons", "ALL_SUMS",
]
