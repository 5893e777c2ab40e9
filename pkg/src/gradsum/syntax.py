"""Source and target abstract syntax, the surface parser, and the printers.

Source types::

    A ::= Unit | A d A | A -> A        d in {+, +1, +2, +?, +?1, +?2, +*1, +*2}

Source expressions::

    e ::= () | x | fn x => e | e e | inj1 e | inj2 e | (e : A)
        | case e of inj1 x => e | inj2 y => e
        | case e of injK x => e

Target terms add ``fn (x : T) => M``, ``<p => q>(M)``, ``matchfail`` and, for
coercion and evaluation contexts, the hole ``[]``.  Sums bind tighter than
arrows, arrows associate to the right, application is left-associative
juxtaposition, and ``--`` starts a comment.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple, Union


class Pos(NamedTuple):
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


def _pos():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Sum constructors

class SumCon(enum.Enum):
    PLUS = "+"
    PLUS1 = "+1"
    PLUS2 = "+2"
    DYN = "+?"
    DYN1 = "+?1"
    DYN2 = "+?2"
    STAR1 = "+*1"
    STAR2 = "+*2"

    def __str__(self):
        return self.value

    @property
    def is_static(self) -> bool:
        return self in STATIC_SUMS

    @property
    def is_dynamic(self) -> bool:
        return self is SumCon.DYN


STATIC_SUMS = frozenset({SumCon.PLUS, SumCon.PLUS1, SumCon.PLUS2})


def subscript(i: int) -> SumCon:
    """``+i``"""
    return (SumCon.PLUS1, SumCon.PLUS2)[i - 1]


def innate(i: int) -> SumCon:
    """``+?i``, the constructor an injection is born with."""
    return (SumCon.DYN1, SumCon.DYN2)[i - 1]


def star(i: int) -> SumCon:
    """``+*i``, the constructor a one-armed case eliminates."""
    return (SumCon.STAR1, SumCon.STAR2)[i - 1]


class TargetSum(enum.Enum):
    PLUS = "+"
    PLUS1 = "+1"
    PLUS2 = "+2"

    def __str__(self):
        return self.value


def tsubscript(i: int) -> TargetSum:
    return (TargetSum.PLUS1, TargetSum.PLUS2)[i - 1]


# ---------------------------------------------------------------------------
# Source types

@dataclass(frozen=True)
class Unit:
    pos: Pos | None = _pos()

    def __str__(self):
        return print_type(self)


@dataclass(frozen=True)
class Sum:
    left: "Type"
    con: SumCon
    right: "Type"
    pos: Pos | None = _pos()

    def __str__(self):
        return print_type(self)


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"
    pos: Pos | None = _pos()

    def __str__(self):
        return print_type(self)


Type = Union[Unit, Sum, Arrow]
UNIT = Unit()


def shape(a) -> tuple:
    """The type with every sum constructor erased (works for target types too)."""
    match a:
        case Sum(l, _, r) | TSum(l, _, r):
            return ("sum", shape(l), shape(r))
        case Arrow(d, c) | TArrow(d, c):
            return ("arrow", shape(d), shape(c))
        case _:
            return ("unit",)


def sum_cons(a) -> Iterator:
    """Sum constructors of a type in left-to-right order."""
    match a:
        case Sum(l, d, r) | TSum(l, d, r):
            yield from sum_cons(l)
            yield d
            yield from sum_cons(r)
        case Arrow(d, c) | TArrow(d, c):
            yield from sum_cons(d)
            yield from sum_cons(c)


def type_depth(a: Type) -> int:
    match a:
        case Sum(l, _, r):
            return 1 + max(type_depth(l), type_depth(r))
        case Arrow(d, c):
            return 1 + max(type_depth(d), type_depth(c))
    return 0


# ---------------------------------------------------------------------------
# Source expressions

@dataclass(frozen=True)
class UnitVal:
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Lam:
    bound: str
    body: "Expr"
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Inj:
    i: int
    payload: "Expr"
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Anno:
    inner: "Expr"
    ty: Type
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class CaseTwo:
    scrut: "Expr"
    x1: str
    arm1: "Expr"
    x2: str
    arm2: "Expr"
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class CaseOne:
    scrut: "Expr"
    i: int
    x: str
    arm: "Expr"
    pos: Pos | None = _pos()


Expr = Union[UnitVal, Var, Lam, App, Inj, Anno, CaseTwo, CaseOne]

for _cls in (UnitVal, Var, Lam, App, Inj, Anno, CaseTwo, CaseOne):
    _cls.__str__ = lambda self: print_expr(self)


def expr_size(e: Expr) -> int:
    """Number of syntax nodes; annotation types do not count."""
    match e:
        case UnitVal() | Var():
            return 1
        case Lam(_, b) | Inj(_, b) | Anno(b, _):
            return 1 + expr_size(b)
        case App(f, a):
            return 1 + expr_size(f) + expr_size(a)
        case CaseTwo(s, _, a1, _, a2):
            return 1 + expr_size(s) + expr_size(a1) + expr_size(a2)
        case CaseOne(s, _, _, a):
            return 1 + expr_size(s) + expr_size(a)
    raise ValueError(f"not an expression: {e!r}")


def annotations(e: Expr) -> Iterator[Type]:
    """Annotation types in pre-order."""
    match e:
        case Anno(b, a):
            yield a
            yield from annotations(b)
        case Lam(_, b) | Inj(_, b):
            yield from annotations(b)
        case App(f, a):
            yield from annotations(f)
            yield from annotations(a)
        case CaseTwo(s, _, a1, _, a2):
            yield from annotations(s)
            yield from annotations(a1)
            yield from annotations(a2)
        case CaseOne(s, _, _, a):
            yield from annotations(s)
            yield from annotations(a)


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(x):
            return frozenset({x})
        case UnitVal():
            return frozenset()
        case Lam(x, b):
            return free_vars(b) - {x}
        case Inj(_, b) | Anno(b, _):
            return free_vars(b)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case CaseTwo(s, x1, a1, x2, a2):
            return free_vars(s) | (free_vars(a1) - {x1}) | (free_vars(a2) - {x2})
        case CaseOne(s, _, x, a):
            return free_vars(s) | (free_vars(a) - {x})
    raise ValueError(f"not an expression: {e!r}")


def all_names(t) -> set[str]:
    """Every identifier (bound or free) in a source expression or target term."""
    out: set[str] = set()

    def go(t):
        match t:
            case Var(x) | TVar(x):
                out.add(x)
            case Lam(x, b) | TLam(x, _, b):
                out.add(x)
                go(b)
            case CaseTwo(s, x1, a1, x2, a2) | TCaseTwo(s, x1, a1, x2, a2):
                out.update((x1, x2))
                go(s), go(a1), go(a2)
            case CaseOne(s, _, x, a) | TCaseOne(s, _, x, a):
                out.add(x)
                go(s), go(a)
            case Inj(_, b) | Anno(b, _) | TInj(_, b) | Cast(_, _, b):
                go(b)
            case App(f, a) | TApp(f, a):
                go(f), go(a)

    go(t)
    return out


# ---------------------------------------------------------------------------
# Typing contexts

class Ctx(Mapping):
    """Immutable variable-to-type map; ``extend`` shadows an existing binding."""

    __slots__ = ("_items",)

    def __init__(self, items=()):
        self._items = dict(items)

    def extend(self, x: str, a) -> "Ctx":
        new = Ctx()
        new._items = {**self._items, x: a}
        return new

    def __getitem__(self, x):
        return self._items[x]

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        return isinstance(other, Ctx) and self._items == other._items

    def __hash__(self):
        return hash(frozenset(self._items.items()))

    def __repr__(self):
        return f"Ctx({self._items!r})"

    def __str__(self):
        if not self._items:
            return "."
        return ", ".join(f"{x} : {a}" for x, a in self._items.items())


EMPTY = Ctx()


# ---------------------------------------------------------------------------
# Target types and terms

@dataclass(frozen=True)
class TUnit:
    def __str__(self):
        return print_ttype(self)


@dataclass(frozen=True)
class TSum:
    left: "TargetType"
    con: TargetSum
    right: "TargetType"

    def __str__(self):
        return print_ttype(self)


@dataclass(frozen=True)
class TArrow:
    dom: "TargetType"
    cod: "TargetType"

    def __str__(self):
        return print_ttype(self)


@dataclass(frozen=True)
class Bottom:
    """Least target type; only the principal-type algorithm produces it."""

    def __str__(self):
        return "Bottom"


TargetType = Union[TUnit, TSum, TArrow, Bottom]
TUNIT = TUnit()
BOTTOM = Bottom()


@dataclass(frozen=True)
class TUnitVal:
    pass


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TLam:
    bound: str
    dom: TargetType | None
    body: "TargetTerm"


@dataclass(frozen=True)
class TApp:
    fn: "TargetTerm"
    arg: "TargetTerm"


@dataclass(frozen=True)
class TInj:
    i: int
    payload: "TargetTerm"


@dataclass(frozen=True)
class TCaseTwo:
    scrut: "TargetTerm"
    x1: str
    arm1: "TargetTerm"
    x2: str
    arm2: "TargetTerm"


@dataclass(frozen=True)
class TCaseOne:
    scrut: "TargetTerm"
    i: int
    x: str
    arm: "TargetTerm"


@dataclass(frozen=True)
class Cast:
    src: TargetSum
    dst: TargetSum
    inner: "TargetTerm"


@dataclass(frozen=True)
class Matchfail:
    pass


@dataclass(frozen=True)
class Hole:
    pass


TargetTerm = Union[TUnitVal, TVar, TLam, TApp, TInj, TCaseTwo, TCaseOne, Cast, Matchfail, Hole]
MATCHFAIL = Matchfail()
HOLE = Hole()

for _cls in (TUnitVal, TVar, TLam, TApp, TInj, TCaseTwo, TCaseOne, Cast, Matchfail, Hole):
    _cls.__str__ = lambda self: print_target(self)


def plug(ctx: TargetTerm, m: TargetTerm) -> TargetTerm:
    """Fill the single hole of a coercion or evaluation context (no renaming)."""
    match ctx:
        case Hole():
            return m
        case TUnitVal() | TVar() | Matchfail():
            raise ValueError("context has no hole")
        case TLam(x, d, b):
            return TLam(x, d, plug(b, m))
        case TInj(i, b):
            return TInj(i, plug(b, m))
        case Cast(p, q, b):
            return Cast(p, q, plug(b, m))
        case TApp(f, a):
            if has_hole(f):
                return TApp(plug(f, m), a)
            return TApp(f, plug(a, m))
        case TCaseOne(s, i, x, a):
            if has_hole(s):
                return TCaseOne(plug(s, m), i, x, a)
            return TCaseOne(s, i, x, plug(a, m))
        case TCaseTwo(s, x1, a1, x2, a2):
            if has_hole(s):
                return TCaseTwo(plug(s, m), x1, a1, x2, a2)
            if has_hole(a1):
                return TCaseTwo(s, x1, plug(a1, m), x2, a2)
            return TCaseTwo(s, x1, a1, x2, plug(a2, m))
    raise ValueError(f"not a target term: {ctx!r}")


def hole_count(m: TargetTerm) -> int:
    match m:
        case Hole():
            return 1
        case TLam(_, _, b) | TInj(_, b) | Cast(_, _, b):
            return hole_count(b)
        case TApp(f, a):
            return hole_count(f) + hole_count(a)
        case TCaseOne(s, _, _, a):
            return hole_count(s) + hole_count(a)
        case TCaseTwo(s, _, a1, _, a2):
            return hole_count(s) + hole_count(a1) + hole_count(a2)
    return 0


def has_hole(m: TargetTerm) -> bool:
    return hole_count(m) > 0


def term_size(m: TargetTerm) -> int:
    match m:
        case TLam(_, _, b) | TInj(_, b) | Cast(_, _, b):
            return 1 + term_size(b)
        case TApp(f, a):
            return 1 + term_size(f) + term_size(a)
        case TCaseOne(s, _, _, a):
            return 1 + term_size(s) + term_size(a)
        case TCaseTwo(s, _, a1, _, a2):
            return 1 + term_size(s) + term_size(a1) + term_size(a2)
    return 1


# ---------------------------------------------------------------------------
# Alpha-equivalence

def alpha_eq(t1, t2) -> bool:
    """Alpha-equivalence for source expressions, target terms, or types."""
    return _alpha(t1, t2, {}, {})


def _alpha(t1, t2, m1: dict, m2: dict) -> bool:
    def bind(x, y):
        n = 1 + max(m1.values(), default=0)
        return {**m1, x: n}, {**m2, y: n}

    def var(x, y):
        if x in m1 or y in m2:
            return m1.get(x) == m2.get(y)
        return x == y

    match t1, t2:
        case (Var(x), Var(y)) | (TVar(x), TVar(y)):
            return var(x, y)
        case (Lam(x, b1), Lam(y, b2)):
            return _alpha(b1, b2, *bind(x, y))
        case (TLam(x, d1, b1), TLam(y, d2, b2)):
            return d1 == d2 and _alpha(b1, b2, *bind(x, y))
        case (App(f1, a1), App(f2, a2)) | (TApp(f1, a1), TApp(f2, a2)):
            return _alpha(f1, f2, m1, m2) and _alpha(a1, a2, m1, m2)
        case (Inj(i, b1), Inj(k, b2)) | (TInj(i, b1), TInj(k, b2)):
            return i == k and _alpha(b1, b2, m1, m2)
        case (Anno(b1, a1), Anno(b2, a2)):
            return a1 == a2 and _alpha(b1, b2, m1, m2)
        case (Cast(p1, q1, b1), Cast(p2, q2, b2)):
            return (p1, q1) == (p2, q2) and _alpha(b1, b2, m1, m2)
        case (CaseOne(s1, i, x, a1), CaseOne(s2, k, y, a2)) | (
            TCaseOne(s1, i, x, a1), TCaseOne(s2, k, y, a2)
        ):
            return i == k and _alpha(s1, s2, m1, m2) and _alpha(a1, a2, *bind(x, y))
        case (CaseTwo(s1, x1, a1, x2, b1), CaseTwo(s2, y1, a2, y2, b2)) | (
            TCaseTwo(s1, x1, a1, x2, b1), TCaseTwo(s2, y1, a2, y2, b2)
        ):
            return (
                _alpha(s1, s2, m1, m2)
                and _alpha(a1, a2, *bind(x1, y1))
                and _alpha(b1, b2, *bind(x2, y2))
            )
    return type(t1) is type(t2) and t1 == t2


# ---------------------------------------------------------------------------
# Lexer

class ParseError(Exception):
    def __init__(self, message: str, pos: Pos, expected=()):
        self.pos = pos
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{pos}: {message}{detail}")


KEYWORDS = {"fn", "case", "of", "inj1", "inj2", "Unit", "matchfail", "Bottom"}
SUM_TOKENS = ["+?1", "+?2", "+*1", "+*2", "+?", "+1", "+2", "+"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|--[^\n]*)
  | (?P<nl>\n)
  | (?P<sum>\+\?1|\+\?2|\+\*1|\+\*2|\+\?|\+1|\+2|\+)
  | (?P<sym>->|=>|\[\]|[():|<>\[\]])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # "sum", "sym", "ident", "kw", "eof"
    text: str
    pos: Pos


def tokenize(text: str) -> list[Token]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    toks = []
    i, line, col0 = 0, 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        pos = Pos(line, i - col0 + 1)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", pos)
        kind = m.lastgroup
        if kind == "nl":
            line, col0 = line + 1, m.end()
        elif kind != "ws":
            tok = m.group()
            if kind == "ident" and tok in KEYWORDS:
                kind = "kw"
            toks.append(Token(kind, tok, pos))
        i = m.end()
    toks.append(Token("eof", "", Pos(line, len(text) - col0 + 1)))
    return toks


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str, target: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.target = target

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts) -> bool:
        return self.tok.kind != "eof" and self.tok.text in texts

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.pos, expected)

    def expect(self, text) -> Token:
        if not self.at(text):
            self.fail([text])
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail(["identifier"])
        return self.advance()

    def index(self, prefix="inj") -> tuple[int, Pos]:
        t = self.tok
        if t.kind == "kw" and t.text in ("inj1", "inj2"):
            self.advance()
            return int(t.text[-1]), t.pos
        self.fail(["inj1", "inj2"])

    def done(self):
        if self.tok.kind != "eof":
            self.fail(["end of input"])

    # types -------------------------------------------------------------

    def type_(self):
        pos = self.tok.pos
        a = self.sum_type()
        if self.at("->"):
            self.advance()
            b = self.type_()
            return self.mk_arrow(a, b, pos)
        return a

    def sum_type(self):
        pos = self.tok.pos
        a = self.atom_type()
        while self.tok.kind == "sum":
            con = self.advance().text
            b = self.atom_type()
            a = self.mk_sum(a, con, b, pos)
        return a

    def atom_type(self):
        t = self.tok
        if t.kind == "kw" and t.text == "Unit":
            self.advance()
            return TUNIT if self.target else Unit(t.pos)
        if self.target and t.kind == "kw" and t.text == "Bottom":
            self.advance()
            return BOTTOM
        if self.at("("):
            self.advance()
            a = self.type_()
            self.expect(")")
            return a
        self.fail(["Unit", "("] + (["Bottom"] if self.target else []))

    def mk_sum(self, a, con, b, pos):
        if self.target:
            try:
                return TSum(a, TargetSum(con), b)
            except ValueError:
                raise ParseError(f"{con} is not a target sum", pos, ["+", "+1", "+2"])
        return Sum(a, SumCon(con), b, pos)

    def mk_arrow(self, a, b, pos):
        return TArrow(a, b) if self.target else Arrow(a, b, pos)

    # expressions -------------------------------------------------------

    def expr(self):
        t = self.tok
        if t.kind == "kw" and t.text == "fn":
            return self.lam()
        if t.kind == "kw" and t.text == "case":
            return self.case()
        return self.app()

    def lam(self):
        pos = self.advance().pos
        if self.target and self.at("("):
            self.advance()
            x = self.ident().text
            self.expect(":")
            dom = self.type_()
            self.expect(")")
        else:
            x, dom = self.ident().text, None
        self.expect("=>")
        body = self.expr()
        if self.target:
            return TLam(x, dom, body)
        return Lam(x, body, pos)

    def case(self):
        pos = self.advance().pos
        scrut = self.expr()
        self.expect("of")
        i, _ = self.index()
        x = self.ident().text
        self.expect("=>")
        arm = self.expr()
        if not self.at("|"):
            return TCaseOne(scrut, i, x, arm) if self.target else CaseOne(scrut, i, x, arm, pos)
        self.advance()
        if i != 1:
            raise ParseError("two-armed case must list inj1 first", pos, ["inj1"])
        k, kpos = self.index()
        if k != 2:
            raise ParseError("second arm must match inj2", kpos, ["inj2"])
        y = self.ident().text
        self.expect("=>")
        arm2 = self.expr()
        if self.target:
            return TCaseTwo(scrut, x, arm, y, arm2)
        return CaseTwo(scrut, x, arm, y, arm2, pos)

    def starts_prefix(self) -> bool:
        t = self.tok
        if t.kind == "ident":
            return True
        if t.kind == "kw":
            return t.text in ("inj1", "inj2") or (self.target and t.text == "matchfail")
        return t.text in ("(", "[]") or (self.target and t.text == "<")

    def app(self):
        pos = self.tok.pos
        f = self.prefix()
        while self.starts_prefix():
            a = self.prefix()
            f = TApp(f, a) if self.target else App(f, a, pos)
        return f

    def prefix(self):
        t = self.tok
        if t.kind == "kw" and t.text in ("inj1", "inj2"):
            self.advance()
            body = self.prefix()
            i = int(t.text[-1])
            return TInj(i, body) if self.target else Inj(i, body, t.pos)
        if self.target and self.at("<"):
            self.advance()
            p = self.tsum()
            self.expect("=>")
            q = self.tsum()
            self.expect(">")
            return Cast(p, q, self.prefix())
        return self.atom()

    def tsum(self) -> TargetSum:
        t = self.tok
        if t.kind == "sum" and t.text in ("+", "+1", "+2"):
            self.advance()
            return TargetSum(t.text)
        self.fail(["+", "+1", "+2"])

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return TVar(t.text) if self.target else Var(t.text, t.pos)
        if self.target and t.kind == "kw" and t.text == "matchfail":
            self.advance()
            return MATCHFAIL
        if self.target and t.text == "[]":
            self.advance()
            return HOLE
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return TUnitVal() if self.target else UnitVal(t.pos)
            e = self.expr()
            if not self.target and self.at(":"):
                self.advance()
                a = self.type_()
                self.expect(")")
                return Anno(e, a, t.pos)
            self.expect(")")
            return e
        expected = ["identifier", "(", "()", "inj1", "inj2", "fn", "case"]
        if self.target:
            expected += ["<", "matchfail", "[]"]
        self.fail(expected)


def parse_expr(text: str) -> Expr:
    p = _Parser(text, target=False)
    e = p.expr()
    p.done()
    return e


def parse_type(text: str) -> Type:
    p = _Parser(text, target=False)
    a = p.type_()
    p.done()
    return a


def parse_target(text: str) -> TargetTerm:
    p = _Parser(text, target=True)
    m = p.expr()
    p.done()
    return m


def parse_ttype(text: str) -> TargetType:
    p = _Parser(text, target=True)
    a = p.type_()
    p.done()
    return a


def strip_pos(t):
    """Copy of a source expression or type with positions removed (equality ignores them anyway)."""
    match t:
        case Unit():
            return UNIT
        case Sum(l, d, r):
            return Sum(strip_pos(l), d, strip_pos(r))
        case Arrow(d, c):
            return Arrow(strip_pos(d), strip_pos(c))
        case UnitVal():
            return UnitVal()
        case Var(x):
            return Var(x)
        case Lam(x, b):
            return Lam(x, strip_pos(b))
        case App(f, a):
            return App(strip_pos(f), strip_pos(a))
        case Inj(i, b):
            return Inj(i, strip_pos(b))
        case Anno(b, a):
            return Anno(strip_pos(b), strip_pos(a))
        case CaseTwo(s, x1, a1, x2, a2):
            return CaseTwo(strip_pos(s), x1, strip_pos(a1), x2, strip_pos(a2))
        case CaseOne(s, i, x, a):
            return CaseOne(strip_pos(s), i, x, strip_pos(a))
    return t


# ---------------------------------------------------------------------------
# Printers

def print_type(a) -> str:
    match a:
        case Unit() | TUnit():
            return "Unit"
        case Bottom():
            return "Bottom"
        case Sum(l, d, r) | TSum(l, d, r):
            return f"{_type_atom(l)} {d} {_type_atom(r)}"
        case Arrow(d, c) | TArrow(d, c):
            left = print_type(d)
            if isinstance(d, (Arrow, TArrow)):
                left = f"({left})"
            return f"{left} -> {print_type(c)}"
    raise ValueError(f"not a type: {a!r}")


def _type_atom(a) -> str:
    s = print_type(a)
    return f"({s})" if isinstance(a, (Sum, Arrow, TSum, TArrow)) else s


print_ttype = print_type

# Precedence levels: 0 = open (fn/case), 1 = application, 2 = prefix (inj/cast), 3 = atom.


def _level(t) -> int:
    match t:
        case Lam() | CaseOne() | CaseTwo() | TLam() | TCaseOne() | TCaseTwo():
            return 0
        case App() | TApp():
            return 1
        case Inj() | TInj() | Cast():
            return 2
    return 3


def _at(t, level: int) -> str:
    s = _show(t)
    return f"({s})" if _level(t) < level else s


def _show(t) -> str:
    match t:
        case UnitVal() | TUnitVal():
            return "()"
        case Var(x) | TVar(x):
            return x
        case Matchfail():
            return "matchfail"
        case Hole():
            return "[]"
        case Lam(x, b):
            return f"fn {x} => {_show(b)}"
        case TLam(x, None, b):
            return f"fn {x} => {_show(b)}"
        case TLam(x, d, b):
            return f"fn ({x} : {print_type(d)}) => {_show(b)}"
        case App(f, a) | TApp(f, a):
            return f"{_at(f, 1)} {_at(a, 2)}"
        case Inj(i, b) | TInj(i, b):
            return f"inj{i} {_at(b, 2)}"
        case Cast(p, q, b):
            return f"<{p} => {q}>({_show(b)})"
        case Anno(b, a):
            return f"({_show(b)} : {print_type(a)})"
        case CaseOne(s, i, x, a) | TCaseOne(s, i, x, a):
            return f"case {_show(s)} of inj{i} {x} => {_show(a)}"
        case CaseTwo(s, x1, a1, x2, a2) | TCaseTwo(s, x1, a1, x2, a2):
            # the first arm must not swallow the `|`
            return f"case {_show(s)} of inj1 {x1} => {_at(a1, 1)} | inj2 {x2} => {_show(a2)}"
    raise ValueError(f"cannot print {t!r}")


def print_expr(e: Expr) -> str:
    return _show(e)


def print_target(m: TargetTerm) -> str:
    return _show(m)
