"""Property suites over the generated corpus, with shrinking and coverage.

Each suite is a list of cases plus a property.  A property returns an
``Outcome``: failure messages, how many instances it checked, and which
typing or reduction rules fired.  ``run_suite`` runs the cases (optionally in
worker processes), shrinks failures, and produces a ``SuiteReport`` whose
JSON form is deterministic apart from the wall time.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from .. import relations as rel
from ..elaborate import (
    TRANS_SUM, ElabMode, Fresh, coerce, coerce_sum, ctx_trans, elab_derivation, ty_trans,
)
from ..syntax import EMPTY, Matchfail, SumCon, TVar, annotations, expr_size, plug, print_target
from ..target import (
    Stuck, TargetTypeError, VerdictKind, evaluate, is_cast_free, is_matchfail_free, is_value,
    possible_steps, principal_type, step, term_precision, value_shape,
)
from ..typecheck import (
    CHECK, DYNAMIC, FULL, STATIC, SYNTH, Checker, TypeCheckError, annotate, embed, eq_anno,
    is_dynamic, is_static, validate_assignment,
)
from . import oracles
from .enumerate import TypedEnumerator, enum_exprs, enum_types, fragment_cons
from .generate import GenConfig, Program, gen_one
from .shrink import shrink
from .vary import LOOSEN, related_types, strictly_related, vary_ctx, vary_precision


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    count: int = 1000          # random programs
    size: int = 25             # max size of random programs
    depth: int = 2             # type depth of random programs
    enum_size: int = 5         # exhaustive closed enumeration bound (0 turns it off)
    enum_depth: int = 1        # annotation universe for enumeration
    oracle_depth: int = 2      # type universe for the relation and coercion oracles
    budget: int = 10 ** 6      # evaluation step budget
    max_variants: int = 0      # cap on precision variants per program (0 = all)
    shrink_attempts: int = 1000
    jobs: int = 1


@dataclass
class Outcome:
    failures: list[str] = field(default_factory=list)
    instances: int = 0
    rules: Counter = field(default_factory=Counter)

    def fail(self, msg: str):
        self.failures.append(msg)

    def need(self, cond: bool, msg: str):
        if not cond:
            self.failures.append(msg)


@dataclass
class Failure:
    index: int
    case: str
    messages: list[str]
    shrunk: str | None = None
    shrunk_messages: list[str] | None = None
    shrink_attempts: int = 0

    def to_json(self) -> dict:
        return {"index": self.index, "case": self.case, "messages": self.messages,
                "shrunk": self.shrunk, "shrunk_messages": self.shrunk_messages,
                "shrink_attempts": self.shrink_attempts}


@dataclass
class SuiteReport:
    suite: str
    config: SuiteConfig
    cases: int
    instances: int
    failures: list[Failure]
    coverage: dict[str, int]
    expected_rules: list[str]
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def missing_rules(self) -> list[str]:
        return sorted(r for r in self.expected_rules if not self.coverage.get(r))

    def to_json(self, with_time: bool = True) -> dict:
        cfg = self.config.__dict__.copy()
        cfg.pop("jobs")
        out = {
            "suite": self.suite, "config": cfg, "cases": self.cases, "instances": self.instances,
            "failures": [f.to_json() for f in self.failures],
            "coverage": dict(sorted(self.coverage.items())),
            "missing_rules": self.missing_rules,
        }
        if with_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def dumps(self, with_time: bool = True) -> str:
        return json.dumps(self.to_json(with_time), indent=2, sort_keys=True)

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} FAILED"
        lines = [f"suite {self.suite}: {self.cases} cases, {self.instances} instances, {status} "
                 f"({self.wall_time:.1f}s)"]
        fired = sum(1 for r in self.expected_rules if self.coverage.get(r))
        lines.append(f"  coverage: {fired}/{len(self.expected_rules)} expected rules fired")
        if self.missing_rules:
            lines.append(f"  never fired: {', '.join(self.missing_rules)}")
        for f in self.failures[:10]:
            lines.append(f"  case {f.index}: {f.messages[0]}")
            lines.append(f"    program: {f.case}")
            if f.shrunk is not None and f.shrunk != f.case:
                lines.append(f"    shrunk:  {f.shrunk}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Corpus

def enumerated(cfg: SuiteConfig, universe=None, system=FULL) -> list[Program]:
    """Every closed well-typed judgment up to ``cfg.enum_size`` (goals from the universe)."""
    if cfg.enum_size <= 0:
        return []
    uni = universe if universe is not None else enum_types(cfg.enum_depth)
    en = TypedEnumerator(uni, system)
    out = []
    for n in range(1, cfg.enum_size + 1):
        for a in uni:
            out.extend(Program(EMPTY, e, a, CHECK) for e in en.checking(EMPTY, a, n))
        out.extend(Program(EMPTY, e, b, SYNTH) for e, b in en.synth(EMPTY, n))
    return out


def random_programs(cfg: SuiteConfig, closed: bool, fragment: str = "full", count: int | None = None,
                    salt: str = "") -> list[Program]:
    gc = GenConfig(seed=f"{cfg.seed}{salt}", count=count if count is not None else cfg.count,
                   max_size=cfg.size, depth=cfg.depth, ctx_size=0 if closed else 2, fragment=fragment)
    return [gen_one(gc, k) for k in range(gc.count)]


def corpus(cfg: SuiteConfig, closed: bool) -> list[Program]:
    return enumerated(cfg) + random_programs(cfg, closed)


# ---------------------------------------------------------------------------
# Shared checks

BIDIR_RULES = ("SynVar", "ChkCSub", "SynAnno", "ChkUnitIntro", "ChkFunIntro", "SynFunElim",
               "ChkSumIntro", "ChkSumElimOne", "ChkSumElimTwo")
TA_RULES = ("SVar", "SCSub", "SAnno", "SUnitIntro", "SFunIntro", "SFunElim", "SSumIntro",
            "SSumElimOne", "SSumElimTwo")
TARGET_RULES = ("TVar", "TCast", "TMatchfail", "TUnitIntro", "TInjIntro", "TInjElimOne",
                "TInjElimTwo", "TFunIntro", "TFunElim")
REDUCE_RULES = ("ReduceUpcast", "ReduceCastSuccess", "ReduceCastFailure", "ReduceCaseOne",
                "ReduceCaseTwo", "ReduceBeta", "StepMatchfail")
MODES = (ElabMode.STANDARD, ElabMode.SATURATING)


def _derive(p: Program, out: Outcome, system=FULL):
    try:
        return p.derive(system)
    except (TypeCheckError, AssertionError) as exc:
        out.fail(f"corpus program rejected: {exc}")
        return None


def _case_rng(cfg: SuiteConfig, index: int, salt: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{salt}:{index}")


def _limit(items: list, cfg: SuiteConfig, rng: random.Random) -> list:
    if cfg.max_variants and len(items) > cfg.max_variants:
        return rng.sample(items, cfg.max_variants)
    return items


# ---------------------------------------------------------------------------
# relations-oracle

def _relations_cases(cfg: SuiteConfig) -> list:
    cases = [("closures", None), ("orders", None), ("sum-synth", None), ("cast-precision", None),
             ("type-orders", 1)]
    groups = oracles.shape_groups(enum_types(cfg.oracle_depth))
    cases.extend(("dcons", key) for key in sorted(groups, key=repr))
    return cases


def _relations_prop(case, cfg: SuiteConfig, index: int) -> Outcome:
    kind, arg = case
    out = Outcome()
    sums = list(SumCon)
    if kind == "closures":
        with_edge = oracles.closure_matrix(sums, rel.SUBSUM_EDGES)
        without = oracles.closure_matrix(sums, [e for e in rel.SUBSUM_EDGES if e != (SumCon.DYN, SumCon.PLUS)])
        out.need((with_edge == without).all(), "the direct +? <= + edge changes the subsum closure")
        out.need((with_edge == oracles.table_matrix(sums, rel.subsum)).all(), "subsum table differs from closure")
        prec = oracles.closure_matrix(sums, rel.PRECISION_EDGES)
        out.need((prec == oracles.table_matrix(sums, rel.sum_precision)).all(), "precision table differs from closure")
        out.need((oracles.dcons_sum_oracle() == oracles.table_matrix(sums, rel.dcons_sum)).all(),
                 "dcons-sum table differs from composed relation")
        out.need(rel.subsum(SumCon.DYN2, SumCon.STAR1), "subsum(+?2, +*1)")
        out.need(not rel.subsum(SumCon.DYN, SumCon.PLUS1), "not subsum(+?, +1)")
        out.need(rel.sum_precision(SumCon.PLUS, SumCon.DYN), "sum_precision(+, +?)")
        out.need(not rel.sum_precision(SumCon.DYN1, SumCon.STAR1), "not sum_precision(+?1, +*1)")
        out.instances = 4 * 64
    elif kind == "orders":
        for name, f, top in (("subsum", rel.subsum, SumCon.PLUS), ("precision", rel.sum_precision, SumCon.DYN)):
            for a in sums:
                out.need(f(a, top), f"{name}: {a} below top {top}")
                for b in sums:
                    if a != b:
                        out.need(not (f(a, b) and f(b, a)), f"{name} not antisymmetric at {a}, {b}")
                    for c in sums:
                        if f(a, b) and f(b, c):
                            out.need(f(a, c), f"{name} not transitive at {a}, {b}, {c}")
        out.instances = 2 * 512
    elif kind == "sum-synth":
        for d in sums:
            for goal in rel.SYNTH_GOALS:
                out.instances += 1
                if rel.sum_synth(d, goal):
                    out.need(rel.subsum(d, goal), f"{d} =>> {goal} but not {d} <= {goal}")
    elif kind == "cast-precision":
        pairs = rel.CAST_PAIRS
        stated = rel.STATED_CAST_PRECISION
        for c1 in pairs:
            out.need(rel.cast_precision(c1, c1), f"cast precision not reflexive at {c1}")
            for c2 in pairs:
                if rel.cast_precision(c1, c2):
                    out.need(rel.cast_precision_sound(c1, c2), f"cast precision unsound: {c1} {c2}")
                for c3 in pairs:
                    out.instances += 1
                    if (c1, c2) in stated and (c2, c3) in stated:
                        out.need((c1, c3) in stated, f"stated cast precision not transitive: {c1} {c2} {c3}")
    elif kind == "type-orders":
        uni = enum_types(arg)
        for f, name in ((rel.subtype, "subtype"), (rel.type_precision, "type_precision")):
            for a in uni:
                out.need(f(a, a), f"{name} not reflexive at {a}")
                for b in uni:
                    if not f(a, b):
                        continue
                    for c in uni:
                        out.instances += 1
                        if f(b, c):
                            out.need(f(a, c), f"{name} not transitive at {a}, {b}, {c}")
    elif kind == "dcons":
        group = oracles.shape_groups(enum_types(cfg.oracle_depth))[arg]
        brute = oracles.brute_dcons(group)
        structural = oracles.structural_dcons(group)
        sub = oracles.table_matrix(group, rel.subtype)
        out.instances = len(group) ** 2
        for i, j in zip(*(brute != structural).nonzero()):
            out.fail(f"dcons({group[i]}, {group[j]}): structural {structural[i, j]}, brute force {brute[i, j]}")
        for i, j in zip(*(sub & ~structural).nonzero()):
            out.fail(f"{group[i]} <= {group[j]} but not dcons")
    return out


def _describe_relation_case(case) -> str:
    kind, arg = case
    return kind if arg is None else f"{kind} {arg}"


# ---------------------------------------------------------------------------
# metatheory-typing

def _typing_cases(cfg: SuiteConfig) -> list:
    return corpus(cfg, closed=False)


def _typing_prop(p: Program, cfg: SuiteConfig, index: int) -> Outcome:
    out = Outcome()
    d = _derive(p, out)
    if d is None:
        return out
    out.instances += 1
    out.rules.update(n.rule for n in d.nodes())
    size = expr_size(p.expr)
    out.need(d.size() <= 2 * size, f"derivation has {d.size()} nodes for an expression of size {size}")

    ta = embed(d)
    out.rules.update(n.rule for n in ta.nodes())
    try:
        validate_assignment(ta)
    except TypeCheckError as exc:
        out.fail(f"embedded derivation invalid: {exc}")
    try:
        e2, _ = annotate(ta)
        out.need(eq_anno(p.expr, e2), f"annotated term {e2} drops structure of {p.expr}")
    except TypeCheckError as exc:
        out.fail(f"annotation failed: {exc}")

    if is_static(p.ctx) and is_static(p.expr) and is_static(p.type):
        for n in d.nodes():
            if not (is_static(n.type) and is_static(n.ctx)):
                out.fail(f"non-static sum appears at {n.rule} in a static derivation")
                break

    rng = _case_rng(cfg, index, "vary")
    variants = [(g, p.expr, p.type) for g in vary_ctx(p.ctx)]
    variants += [(p.ctx, e, p.type) for e in vary_precision(p.expr)]
    if p.direction == CHECK:
        variants += [(p.ctx, p.expr, a) for a in strictly_related(p.type)]
    for g, e, a in _limit(variants, cfg, rng):
        out.instances += 1
        try:
            if p.direction == CHECK:
                Checker(FULL).check(g, e, a)
            else:
                b, _ = Checker(FULL).synth(g, e)
                out.need(rel.type_precision(p.type, b),
                         f"loosened synthesis gives {b}, not above {p.type}: {e}")
        except TypeCheckError as exc:
            out.fail(f"loosening broke typing ({exc}): {g} |- {e} : {a}")
    return out


# ---------------------------------------------------------------------------
# metatheory-runtime

def _runtime_cases(cfg: SuiteConfig) -> list:
    return corpus(cfg, closed=True)


def check_run(m, out: Outcome, budget: int, determinism: bool = True):
    """Step ``m`` to the end, checking preservation, progress, determinism, and freeness."""
    try:
        t = principal_type(EMPTY, m, rules=_RuleSink(out))
    except TargetTypeError as exc:
        out.fail(f"elaborated term ill-typed: {exc}")
        return None
    steps = 0
    while not (is_value(m) or isinstance(m, Matchfail)):
        if steps >= budget:
            out.fail(f"no value after {budget} steps")
            return None
        clean = is_cast_free(m) and is_matchfail_free(m)
        if determinism:
            options = possible_steps(m)
            if len(options) != 1:
                out.fail(f"{len(options)} possible steps from {print_target(m)}")
        try:
            rule, m2 = step(m)
        except Stuck:
            out.fail(f"stuck: {print_target(m)}")
            return None
        if determinism and options and options[0][1] != m2:
            out.fail(f"step disagrees with the rules at {print_target(m)}")
        out.rules[rule] += 1
        try:
            t2 = principal_type(EMPTY, m2, rules=_RuleSink(out))
        except TargetTypeError as exc:
            out.fail(f"preservation: {print_target(m2)} ill-typed ({exc})")
            return None
        if not rel.target_subtype(t2, t):
            out.fail(f"preservation: type grew from {t} to {t2} at {print_target(m)}")
        if clean:
            out.need(is_cast_free(m2) and is_matchfail_free(m2),
                     f"cast- and matchfail-freeness lost stepping {print_target(m)}")
        m, t = m2, t2
        steps += 1
    return m


class _RuleSink(list):
    """A list that also tallies rule names into an Outcome's coverage."""

    def __init__(self, out: Outcome):
        super().__init__()
        self.out = out

    def append(self, name):
        self.out.rules[name] += 1


def _runtime_prop(p: Program, cfg: SuiteConfig, index: int) -> Outcome:
    out = Outcome()
    d = _derive(p, out)
    if d is None:
        return out
    for mode in MODES:
        out.instances += 1
        check_run(elab_derivation(d, mode), out, cfg.budget)
    return out


# ---------------------------------------------------------------------------
# translation

def _translation_cases(cfg: SuiteConfig) -> list:
    cases = [("program", p) for p in corpus(cfg, closed=False)]
    cases.append(("coerce-sum", None))
    groups = oracles.shape_groups(enum_types(cfg.oracle_depth))
    cases.extend(("coerce", key) for key in sorted(groups, key=repr))
    return cases


def _translation_prop(case, cfg: SuiteConfig, index: int) -> Outcome:
    kind, arg = case
    out = Outcome()
    if kind == "coerce-sum":
        for a in SumCon:
            for b in SumCon:
                out.instances += 1
                p, q = TRANS_SUM[a], TRANS_SUM[b]
                std = coerce_sum(a, b, ElabMode.STANDARD)
                sat = coerce_sum(a, b, ElabMode.SATURATING)
                out.need((print_target(std) == "[]") == rel.target_subsum(p, q),
                         f"standard coerce_sum({a}, {b}) = {std}")
                out.need(print_target(sat) != "[]", f"saturating coerce_sum({a}, {b}) is a bare hole")
        return out
    if kind == "coerce":
        group = oracles.shape_groups(enum_types(cfg.oracle_depth))[arg]
        for a in group:
            for b in group:
                if not rel.dcons(a, b):
                    continue
                for mode in MODES:
                    out.instances += 1
                    c = coerce(a, b, mode, Fresh({"z"}))
                    th = EMPTY.extend("z", ty_trans(a))
                    try:
                        t = principal_type(th, plug(c, TVar("z")), rules=_RuleSink(out))
                        out.need(rel.target_subtype(t, ty_trans(b)),
                                 f"coerce({a}, {b}, {mode.value}) gives {t}, not <= {ty_trans(b)}")
                    except TargetTypeError as exc:
                        out.fail(f"coerce({a}, {b}, {mode.value}) ill-typed: {exc}")
        return out
    p = arg
    d = _derive(p, out)
    if d is None:
        return out
    th = ctx_trans(p.ctx)
    verdicts = []
    for mode in MODES:
        out.instances += 1
        m = elab_derivation(d, mode)
        try:
            t = principal_type(th, m, rules=_RuleSink(out))
            out.need(rel.target_subtype(t, ty_trans(p.type)),
                     f"{mode.value} elaboration has type {t}, not <= {ty_trans(p.type)}")
        except TargetTypeError as exc:
            out.fail(f"{mode.value} elaboration ill-typed: {exc}")
            continue
        if mode is ElabMode.STANDARD and is_static(p.ctx) and is_static(p.expr) and is_static(p.type):
            out.need(is_cast_free(m) and is_matchfail_free(m), "static program elaborated with casts")
        if p.closed:
            v = evaluate(m, budget=cfg.budget, rules=_RuleSink(out))
            verdicts.append(v)
    if len(verdicts) == 2:
        a, b = verdicts
        same = a.kind == b.kind and (a.kind is not VerdictKind.VALUE or value_shape(a.term) == value_shape(b.term))
        out.need(same, f"standard gives {a.kind.value} {print_target(a.term)}, "
                       f"saturating gives {b.kind.value} {print_target(b.term)}")
    return out


# ---------------------------------------------------------------------------
# precision-pipeline

def _precision_cases(cfg: SuiteConfig) -> list:
    return [p for p in corpus(cfg, closed=True) if any(True for _ in annotations(p.expr)) or p.direction == CHECK]


def _precision_prop(p: Program, cfg: SuiteConfig, index: int) -> Outcome:
    out = Outcome()
    d = _derive(p, out)
    if d is None:
        return out
    m_tight = elab_derivation(d, ElabMode.SATURATING)
    rng = _case_rng(cfg, index, "precision")
    looser = [Program(p.ctx, e, p.type, p.direction) for e in vary_precision(p.expr)]
    if p.direction == CHECK:
        looser += [Program(p.ctx, p.expr, a, CHECK) for a in strictly_related(p.type)]
    for q in _limit(looser, cfg, rng):
        out.instances += 1
        try:
            if q.direction == SYNTH:
                b, dq = Checker(FULL).synth(q.ctx, q.expr)
            else:
                dq = Checker(FULL).check(q.ctx, q.expr, q.type)
        except TypeCheckError as exc:
            out.fail(f"loosened program rejected ({exc}): {q.expr}")
            continue
        m_loose = elab_derivation(dq, ElabMode.SATURATING)
        if not term_precision(m_tight, m_loose):
            out.fail(f"elaborations not related: {print_target(m_tight)}  vs  {print_target(m_loose)}")
            continue
        co_step(m_tight, m_loose, out, cfg.budget)
    return out


def co_step(m1p, m1, out: Outcome, budget: int):
    """Step the more precise term and check the three-way simulation at every step."""
    steps = 0
    while not (is_value(m1p) or isinstance(m1p, Matchfail)):
        if steps >= budget:
            out.fail("co-stepping exceeded the budget")
            return
        try:
            rule, m2p = step(m1p)
        except Stuck:
            out.fail(f"precise term stuck: {print_target(m1p)}")
            return
        out.rules[rule] += 1
        if is_value(m1) or isinstance(m1, Matchfail):
            if not term_precision(m2p, m1):
                out.fail(f"simulation: {print_target(m1p)} -> {print_target(m2p)} "
                         f"not below terminal {print_target(m1)}")
                return
        else:
            try:
                _, m2 = step(m1)
            except Stuck:
                out.fail(f"imprecise term stuck: {print_target(m1)}")
                return
            if not term_precision(m2p, m2):
                out.fail(f"simulation: {print_target(m1p)} -> {print_target(m2p)} but "
                         f"{print_target(m1)} -> {print_target(m2)}")
                return
            m1 = m2
        m1p = m2p
        steps += 1
    if is_value(m1p):
        rest = evaluate(m1, budget=budget)
        if not rest.is_value:
            out.fail(f"precise term converges to {print_target(m1p)} but the imprecise one "
                     f"ends in {rest.kind.value}")
        elif hasattr(m1p, "i") and hasattr(rest.term, "i"):
            out.need(m1p.i == rest.term.i, f"converged to different injections: "
                                            f"{print_target(m1p)} vs {print_target(rest.term)}")


# ---------------------------------------------------------------------------
# fragments

def _fragment_cases(cfg: SuiteConfig) -> list:
    cases = []
    for frag in ("static", "dynamic"):
        progs = random_programs(cfg, closed=False, fragment=frag, salt=frag)
        closed = random_programs(cfg, closed=True, fragment=frag, count=max(1, cfg.count // 2), salt=frag + "c")
        cases.extend(("program", frag, p) for p in progs + closed)
        cons = fragment_cons(frag)
        uni = enum_types(cfg.enum_depth, cons)
        limit = min(cfg.enum_size, 4)
        for e in enum_exprs(EMPTY, limit, universe=uni):
            cases.append(("query", frag, (e, uni)))
    return cases


def _fragment_prop(case, cfg: SuiteConfig, index: int) -> Outcome:
    kind, frag, arg = case
    out = Outcome()
    system = STATIC if frag == "static" else DYNAMIC
    if kind == "query":
        e, uni = arg
        for a in uni:
            out.instances += 1
            ok_frag = _accepts(Checker(system).check, EMPTY, e, a)
            ok_full = _accepts(Checker(FULL).check, EMPTY, e, a)
            out.need(ok_frag == ok_full, f"{frag} {'accepts' if ok_frag else 'rejects'} but full "
                                         f"{'accepts' if ok_full else 'rejects'}: {e} <= {a}")
        out.instances += 1
        s_frag = _synth_or_none(Checker(system), e)
        s_full = _synth_or_none(Checker(FULL), e)
        out.need(s_frag == s_full, f"synthesis differs: {frag} {s_frag}, full {s_full}: {e}")
        return out
    p = arg
    out.instances += 1
    d = _derive(p, out, system)
    if d is None:
        return out
    out.rules.update(n.rule for n in d.nodes())
    try:
        full = p.derive(FULL)
    except (TypeCheckError, AssertionError) as exc:
        out.fail(f"full system rejects a {frag} program: {exc}")
        return out
    if frag == "static":
        m = elab_derivation(full, ElabMode.STANDARD)
        out.need(is_cast_free(m) and is_matchfail_free(m), f"static program elaborated with casts: {print_target(m)}")
        if p.closed:
            v = check_run(m, out, cfg.budget, determinism=False)
            out.need(v is not None and is_value(v), "static program did not evaluate to a value")
    return out


def _accepts(fn, g, e, a) -> bool:
    try:
        fn(g, e, a)
        return True
    except TypeCheckError:
        return False


def _synth_or_none(checker, e):
    try:
        return checker.synth(EMPTY, e)[0]
    except TypeCheckError:
        return None


def _describe_fragment_case(case) -> str:
    kind, frag, arg = case
    if kind == "query":
        return f"{frag} query: {arg[0]}"
    return f"{frag}: {arg}"


# ---------------------------------------------------------------------------
# Registry and runner

@dataclass(frozen=True)
class Suite:
    name: str
    cases: Callable
    prop: Callable
    expected_rules: tuple = ()
    describe: Callable = str
    program_of: Callable | None = None       # extracts a shrinkable Program from a case
    rebuild: Callable | None = None          # puts a shrunk Program back into a case


def _identity(case):
    return case


SUITES = {
    "relations-oracle": Suite("relations-oracle", _relations_cases, _relations_prop,
                              describe=_describe_relation_case),
    "metatheory-typing": Suite("metatheory-typing", _typing_cases, _typing_prop,
                               BIDIR_RULES + TA_RULES, program_of=_identity, rebuild=lambda c, p: p),
    "metatheory-runtime": Suite("metatheory-runtime", _runtime_cases, _runtime_prop,
                                TARGET_RULES + REDUCE_RULES, program_of=_identity, rebuild=lambda c, p: p),
    "translation": Suite("translation", _translation_cases, _translation_prop,
                         ("TVar", "TCast", "TUnitIntro", "TInjIntro", "TInjElimOne", "TInjElimTwo",
                          "TFunIntro", "TFunElim"),
                         describe=lambda c: str(c[1]) if c[0] == "program" else f"{c[0]} {c[1]}",
                         program_of=lambda c: c[1] if c[0] == "program" else None,
                         rebuild=lambda c, p: ("program", p)),
    "precision-pipeline": Suite("precision-pipeline", _precision_cases, _precision_prop,
                                REDUCE_RULES, program_of=_identity, rebuild=lambda c, p: p),
    "fragments": Suite("fragments", _fragment_cases, _fragment_prop,
                       tuple(f"SS{r}" for r in ("Var", "Sub", "Anno", "UnitIntro", "FunIntro", "FunElim",
                                                  "SumIntro", "SumElimOne", "SumElimTwo"))
                       + tuple(f"D{r}" for r in ("Var", "Sub", "Anno", "UnitIntro", "FunIntro", "FunElim",
                                                  "SumIntro", "SumElimOne", "SumElimTwo")),
                       describe=_describe_fragment_case,
                       program_of=lambda c: c[2] if c[0] == "program" else None,
                       rebuild=lambda c, p: (c[0], c[1], p)),
}


def _run_chunk(args):
    name, cfg, start, cases = args
    suite = SUITES[name]
    return [_safe(suite, case, cfg, start + k) for k, case in enumerate(cases)]


def _safe(suite: Suite, case, cfg, index) -> Outcome:
    try:
        return suite.prop(case, cfg, index)
    except Exception as exc:  # a crash is a failure of the case, not of the run
        out = Outcome()
        out.fail(f"crash: {type(exc).__name__}: {exc}")
        return out


def run_suite(name: str, cfg: SuiteConfig | None = None, progress: Callable | None = None) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    suite = SUITES[name]
    start = time.perf_counter()
    cases = suite.cases(cfg)
    if cfg.jobs > 1 and len(cases) > 1:
        chunk = -(-len(cases) // (cfg.jobs * 4))
        work = [(name, cfg, k, cases[k:k + chunk]) for k in range(0, len(cases), chunk)]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = [o for part in pool.map(_run_chunk, work) for o in part]
    else:
        outcomes = []
        for k, case in enumerate(cases):
            outcomes.append(_safe(suite, case, cfg, k))
            if progress:
                progress(k + 1, len(cases))

    coverage: Counter = Counter()
    failures = []
    instances = 0
    for k, (case, o) in enumerate(zip(cases, outcomes)):
        coverage.update(o.rules)
        instances += o.instances
        if o.failures:
            failures.append(_failure(suite, case, o, cfg, k))
    return SuiteReport(name, cfg, len(cases), instances, failures, dict(coverage),
                       sorted(suite.expected_rules), time.perf_counter() - start)


def _failure(suite: Suite, case, o: Outcome, cfg: SuiteConfig, index: int) -> Failure:
    f = Failure(index, suite.describe(case), o.failures[:5])
    prog = suite.program_of(case) if suite.program_of else None
    if prog is None:
        return f

    def fails(p):
        return bool(_safe(suite, suite.rebuild(case, p), cfg, index).failures)

    small, used = shrink(prog, fails, cfg.shrink_attempts)
    again = _safe(suite, suite.rebuild(case, small), cfg, index)
    if again.failures:  # re-checked: the shrunk program must still fail
        f.shrunk = str(small)
        f.shrunk_messages = again.failures[:5]
    f.shrink_attempts = used
    return f


__all__ = ["SuiteConfig", "SuiteReport", "Failure", "Outcome", "SUITES", "run_suite", "corpus",
           "enumerated", "random_programs", "check_run", "co_step"]
