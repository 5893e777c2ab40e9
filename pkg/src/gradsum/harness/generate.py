"""Seeded random generation of well-typed programs.

Generation runs the bidirectional rules backwards: pick a goal type, pick a
rule whose conclusion fits, and generate premises.  Every program is
re-checked before it is handed out, so a generator bug surfaces as an
exception rather than as a bogus test case.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from .. import relations as rel
from ..syntax import (
    UNIT, Anno, App, Arrow, CaseOne, CaseTwo, Ctx, EMPTY, Expr, Inj, Lam, Sum, SumCon, Type,
    Unit, UnitVal, Var, expr_size, print_expr, print_type, type_depth,
)
from ..typecheck import CHECK, DYNAMIC, FULL, STATIC, SYNTH, System, Checker, static_subsum
from .enumerate import fragment_cons

SYSTEMS = {"full": FULL, "static": STATIC, "dynamic": DYNAMIC}


@dataclass(frozen=True)
class GenConfig:
    seed: int | str = 0
    count: int = 1000
    max_size: int = 25
    depth: int = 2
    ctx_size: int = 0
    anno_density: float = 0.3
    fragment: str = "full"
    synth_ratio: float = 0.15


@dataclass(frozen=True)
class Program:
    """A typing judgment: ``ctx |- expr <= type`` or ``ctx |- expr => type``."""
    ctx: Ctx
    expr: Expr
    type: Type
    direction: str = CHECK

    def derive(self, system: System = FULL):
        checker = Checker(system)
        if self.direction == CHECK:
            return checker.check(self.ctx, self.expr, self.type)
        a, d = checker.synth(self.ctx, self.expr)
        if a != self.type:
            raise AssertionError(f"synthesized {a}, recorded {self.type}")
        return d

    @property
    def closed(self) -> bool:
        return len(self.ctx) == 0

    def __str__(self):
        arrow = "<=" if self.direction == CHECK else "=>"
        return f"{self.ctx} |- {print_expr(self.expr)} {arrow} {print_type(self.type)}"

    def to_json(self) -> dict:
        return {"ctx": {x: str(a) for x, a in self.ctx.items()}, "expr": print_expr(self.expr),
                "type": str(self.type), "dir": self.direction}


def _sum_relation(system: System):
    if system is STATIC:
        return static_subsum
    if system is DYNAMIC:
        return lambda a, b: a == b
    return rel.dcons_sum


class Generator:
    def __init__(self, rng: random.Random, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self.sys = SYSTEMS[cfg.fragment]
        self.cons = fragment_cons(cfg.fragment)
        related = _sum_relation(self.sys)
        self.below = {d: [c for c in self.cons if related(c, d)] for d in self.cons}
        self.above = {d: [c for c in self.cons if related(d, c)] for d in self.cons}
        self.names = 0

    # types ------------------------------------------------------------------

    def rand_type(self, depth: int) -> Type:
        r = self.rng.random()
        if depth <= 0 or r < 0.25:
            return UNIT
        if r < 0.75:
            return Sum(self.rand_type(depth - 1), self.rng.choice(self.cons), self.rand_type(depth - 1))
        return Arrow(self.rand_type(depth - 1), self.rand_type(depth - 1))

    def pre(self, a: Type) -> Type:
        """A random B with B subsuming-into a (``dcons(B, a)`` in the full system)."""
        match a:
            case Sum(l, d, r):
                return Sum(self.pre(l), self.rng.choice(self.below[d]), self.pre(r))
            case Arrow(d, c):
                return Arrow(self.post(d), self.pre(c))
        return a

    def post(self, a: Type) -> Type:
        match a:
            case Sum(l, d, r):
                return Sum(self.post(l), self.rng.choice(self.above[d]), self.post(r))
            case Arrow(d, c):
                return Arrow(self.pre(d), self.post(c))
        return a

    def fresh(self) -> str:
        self.names += 1
        return f"v{self.names}"

    # expressions ----------------------------------------------------------------

    def minimal(self, g: Ctx, a: Type) -> Expr:
        """A small term checking against ``a``."""
        for x, b in g.items():
            if b == a:
                return Var(x)
        match a:
            case Arrow(d, c):
                x = self.fresh()
                return Lam(x, self.minimal(g.extend(x, d), c))
            case Sum(l, d, r):
                opts = [i for i in (1, 2) if self.sys.intro(i, d)]
                i = self.rng.choice(opts)
                return Inj(i, self.minimal(g, l if i == 1 else r))
        return UnitVal()

    def split(self, budget: int, parts: int) -> list[int]:
        cuts = sorted(self.rng.randint(0, budget) for _ in range(parts - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
        return [max(1, s) for s in sizes]

    def check(self, g: Ctx, a: Type, budget: int) -> Expr:
        if budget <= 2 or self.rng.random() < 1.0 / budget:
            return self.minimal(g, a)
        rng = self.rng
        choices = ["intro"] * 5 + ["sub"] * max(1, round(10 * self.cfg.anno_density)) + ["case1"] * 2 + ["case2"] * 2
        kind = rng.choice(choices)
        if kind == "intro" and isinstance(a, Unit):
            kind = rng.choice(("sub", "case1", "case2"))
        if kind == "intro":
            match a:
                case Arrow(d, c):
                    x = self.fresh()
                    return Lam(x, self.check(g.extend(x, d), c, budget - 1))
                case Sum(l, d, r):
                    opts = [i for i in (1, 2) if self.sys.intro(i, d)]
                    i = rng.choice(opts)
                    return Inj(i, self.check(g, l if i == 1 else r, budget - 1))
            return UnitVal()
        if kind == "sub":
            b = self.pre(a)
            return self.synth_at(g, b, budget)
        scrut_budget, rest = self.split(budget - 1, 2)
        if kind == "case1":
            i = rng.choice((1, 2))
            cons = [d for d in self.cons if self.sys.elim_one(d, i)]
            if not cons:
                return self.minimal(g, a)
            b = Sum(self.rand_type(1), rng.choice(cons), self.rand_type(1))
            x = self.fresh()
            scrut = self.synth_at(g, b, scrut_budget)
            arm = self.check(g.extend(x, b.left if i == 1 else b.right), a, rest)
            return CaseOne(scrut, i, x, arm)
        cons = [d for d in self.cons if self.sys.elim_two(d)]
        b = Sum(self.rand_type(1), rng.choice(cons), self.rand_type(1))
        x1, x2 = self.fresh(), self.fresh()
        r1, r2 = self.split(rest, 2)
        scrut = self.synth_at(g, b, scrut_budget)
        return CaseTwo(scrut, x1, self.check(g.extend(x1, b.left), a, r1),
                       x2, self.check(g.extend(x2, b.right), a, r2))

    def synth_at(self, g: Ctx, b: Type, budget: int) -> Expr:
        """A term synthesizing exactly ``b``."""
        vars_ = [x for x, t in g.items() if t == b]
        r = self.rng.random()
        if vars_ and (budget <= 2 or r < 0.3):
            return Var(self.rng.choice(vars_))
        if budget > 4 and r < 0.55:
            c = self.rand_type(1)
            fb, ab = self.split(budget - 1, 2)
            return App(self.synth_at(g, Arrow(c, b), fb), self.check(g, c, ab))
        return Anno(self.check(g, b, budget - 1), b)

    def program(self) -> Program:
        cfg = self.cfg
        g = EMPTY
        for k in range(cfg.ctx_size):
            g = g.extend(f"y{k}", self.rand_type(cfg.depth))
        a = self.rand_type(cfg.depth)
        budget = 1 + int(cfg.max_size * self.rng.random() ** 0.5)
        if self.rng.random() < cfg.synth_ratio:
            return Program(g, self.synth_at(g, a, budget), a, SYNTH)
        return Program(g, self.check(g, a, budget), a, CHECK)


def gen_welltyped(cfg: GenConfig) -> Iterator[Program]:
    """``cfg.count`` programs; program ``k`` depends only on ``(cfg, k)``."""
    for k in range(cfg.count):
        yield gen_one(cfg, k)


def gen_one(cfg: GenConfig, index: int, attempts: int = 20) -> Program:
    rng = random.Random(f"{cfg.seed}:{index}")
    gen = Generator(rng, cfg)
    best = None
    for _ in range(attempts):
        p = gen.program()
        p.derive(gen.sys)  # raises if the generator produced an ill-typed term
        if expr_size(p.expr) <= cfg.max_size:
            return p
        if best is None or expr_size(p.expr) < expr_size(best.expr):
            best = p
    return best


__all__ = ["GenConfig", "Program", "Generator", "gen_welltyped", "gen_one", "SYSTEMS"]
