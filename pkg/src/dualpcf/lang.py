"""Abstract syntax, concrete grammar, parser and printer for the language.

Surface programs are plain simply-typed lambda terms over the constant
signature; the evaluator additionally uses cost-tagged terms and raw
interval / dual-interval literals, which the parser never produces.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .numeric import DualInterval, Interval

# ---------------------------------------------------------------------------
# Types


class Type:
    pass


@dataclass(frozen=True)
class Ground(Type):
    name: str  # "o", "nu", "pi", "delta"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow(Type):
    src: Type
    dst: Type

    def __str__(self) -> str:
        s = f"({self.src})" if isinstance(self.src, Arrow) else str(self.src)
        return f"{s} -> {self.dst}"


BOOL = Ground("o")
NAT = Ground("nu")
REAL = Ground("pi")
DUAL = Ground("delta")


def arrow(*tys: Type) -> Type:
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


def uncurry(ty: Type) -> Tuple[Tuple[Type, ...], Type]:
    """Split a type into its argument list and final codomain."""
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.src)
        ty = ty.dst
    return tuple(args), ty


# ---------------------------------------------------------------------------
# Expressions


class Expr:
    pass


@dataclass(frozen=True)
class Const(Expr):
    name: str
    targs: Tuple[Type, ...] = ()
    pos: Optional[Tuple[int, int]] = field(default=None, compare=False)

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class Var(Expr):
    name: str
    pos: Optional[Tuple[int, int]] = field(default=None, compare=False)

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class Lam(Expr):
    var: str
    ty: Optional[Type]
    body: Expr

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    els: Expr
    ty: Optional[Type] = field(default=None, compare=False)

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class NatLit(Expr):
    n: int
    pos: Optional[Tuple[int, int]] = field(default=None, compare=False)

    def __str__(self) -> str:
        return print_expr(self)


# --- evaluation-only forms (never produced by the parser) ---


@dataclass(frozen=True)
class CostTagged(Expr):
    expr: Expr
    n: int

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class IvLit(Expr):
    iv: Interval

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class DualLit(Expr):
    dv: DualInterval

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class BoolLit(Expr):
    b: bool

    def __str__(self) -> str:
        return print_expr(self)


# int / sup carrying their (m, n) unfolding state
@dataclass(frozen=True)
class IntAt(Expr):
    m: int
    n: int

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class SupAt(Expr):
    m: int
    n: int

    def __str__(self) -> str:
        return print_expr(self)


EVAL_ONLY = (CostTagged, IvLit, DualLit, BoolLit, IntAt, SupAt)

# Constant names recognised by the surface language.  "In" is
# evaluation-only; the parser rejects it.
SURFACE_CONSTANTS = {
    "min", "max", "pr", "int", "sup", "in_pi", "in_delta",
    "Y", "L", "succ", "pred", "iszero", "tt", "ff",
}
OPERATORS = {"+", "-", "*", "/", "lt0"}
ALL_CONSTANTS = SURFACE_CONSTANTS | OPERATORS | {"In"}


def is_surface(e: Expr) -> bool:
    """True iff e contains no evaluation-only form."""
    if isinstance(e, EVAL_ONLY):
        return False
    if isinstance(e, Const):
        return e.name != "In"
    if isinstance(e, App):
        return is_surface(e.fn) and is_surface(e.arg)
    if isinstance(e, Lam):
        return is_surface(e.body)
    if isinstance(e, If):
        return is_surface(e.cond) and is_surface(e.then) and is_surface(e.els)
    return True


# ---------------------------------------------------------------------------
# Substitution

def free_vars(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, App):
        return free_vars(e.fn) | free_vars(e.arg)
    if isinstance(e, Lam):
        return free_vars(e.body) - {e.var}
    if isinstance(e, If):
        return free_vars(e.cond) | free_vars(e.then) | free_vars(e.els)
    if isinstance(e, CostTagged):
        return free_vars(e.expr)
    return set()


def subst(e: Expr, x: str, v: Expr) -> Expr:
    """Capture-avoiding substitution of v for x in e.

    The free variables of v are computed at most once, and binders are
    renamed only on an actual collision, so the common case of a closed v
    pays nothing extra.
    """
    fv = free_vars(v) if isinstance(v, (Var, Lam, App, If)) else frozenset()
    return _subst(e, x, v, fv)


def _subst(e: Expr, x: str, v: Expr, fv) -> Expr:
    if isinstance(e, Var):
        return v if e.name == x else e
    if isinstance(e, App):
        return App(_subst(e.fn, x, v, fv), _subst(e.arg, x, v, fv))
    if isinstance(e, Lam):
        if e.var == x:
            return e
        if e.var in fv:
            nv = fresh_var("r")
            body = _subst(e.body, e.var, Var(nv), frozenset())
            return Lam(nv, e.ty, _subst(body, x, v, fv))
        return Lam(e.var, e.ty, _subst(e.body, x, v, fv))
    if isinstance(e, If):
        return If(_subst(e.cond, x, v, fv), _subst(e.then, x, v, fv),
                  _subst(e.els, x, v, fv), e.ty)
    if isinstance(e, CostTagged):
        return CostTagged(_subst(e.expr, x, v, fv), e.n)
    return e


_FRESH = [0]


def fresh_var(hint: str = "x") -> str:
    _FRESH[0] += 1
    return f"%{hint}{_FRESH[0]}"


# ---------------------------------------------------------------------------
# Lexer


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->|→)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*|ν|π|δ|λ)
  | (?P<sym>[()\[\].,:=<\\+\-*/])
    """,
    re.VERBOSE,
)

KEYWORDS = {"fun", "let", "in", "if", "then", "else"}
TYPE_NAMES = {
    "o": BOOL, "bool": BOOL,
    "nu": NAT, "nat": NAT, "ν": NAT,
    "pi": REAL, "real": REAL, "π": REAL,
    "delta": DUAL, "dual": DUAL, "δ": DUAL,
}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def _lex(src: str):
    toks = []
    pos = 0
    line, col = 1, 1
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(Token(kind, text, line, col))
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, src: str):
        self.toks = _lex(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # -- types --

    def parse_type(self) -> Type:
        lhs = self.parse_type_atom()
        if self.peek().kind == "arrow":
            self.next()
            return Arrow(lhs, self.parse_type())
        return lhs

    def parse_type_atom(self) -> Type:
        t = self.peek()
        if t.text == "(":
            self.next()
            ty = self.parse_type()
            self.expect(")")
            return ty
        if t.text in TYPE_NAMES:
            self.next()
            return TYPE_NAMES[t.text]
        self.error(f"expected a type, found {t.text!r}")

    # -- expressions --

    def parse_expr(self, env) -> Expr:
        t = self.peek()
        if t.text in ("fun", "λ", "\\"):
            self.next()
            binders = []
            while True:
                b = self.parse_binder()
                binders.append(b)
                if self.peek().text == ".":
                    break
            self.expect(".")
            inner_env = env | {name for name, _ in binders}
            body = self.parse_expr(inner_env)
            for name, ty in reversed(binders):
                body = Lam(name, ty, body)
            return body
        if t.text == "let":
            self.next()
            name_tok = self.next()
            if name_tok.kind != "ident" or name_tok.text in KEYWORDS:
                raise ParseError("expected a name after 'let'",
                                 name_tok.line, name_tok.col)
            ty = None
            if self.peek().text == ":":
                self.next()
                ty = self.parse_type()
            self.expect("=")
            value = self.parse_expr(env)
            self.expect("in")
            body = self.parse_expr(env | {name_tok.text})
            return App(Lam(name_tok.text, ty, body), value)
        if t.text == "if":
            self.next()
            cond = self.parse_expr(env)
            self.expect("then")
            then = self.parse_expr(env)
            self.expect("else")
            els = self.parse_expr(env)
            return If(cond, then, els)
        return self.parse_cmp(env)

    def parse_binder(self):
        t = self.next()
        if t.text == "(":
            name_tok = self.next()
            self.expect(":")
            ty = self.parse_type()
            self.expect(")")
            return (name_tok.text, ty)
        if t.kind != "ident" or t.text in KEYWORDS:
            raise ParseError(f"expected a binder, found {t.text!r}", t.line, t.col)
        ty = None
        if self.peek().text == ":":
            self.next()
            ty = self.parse_type()
        return (t.text, ty)

    def parse_cmp(self, env) -> Expr:
        lhs = self.parse_add(env)
        if self.peek().text == "<":
            t = self.next()
            if lhs != NatLit(0):
                raise ParseError("only the zero test '0 < e' is supported",
                                 t.line, t.col)
            rhs = self.parse_add(env)
            return App(Const("lt0", pos=(t.line, t.col)), rhs)
        return lhs

    def parse_add(self, env) -> Expr:
        lhs = self.parse_mul(env)
        while self.peek().text in ("+", "-"):
            t = self.next()
            rhs = self.parse_mul(env)
            lhs = App(App(Const(t.text, pos=(t.line, t.col)), lhs), rhs)
        return lhs

    def parse_mul(self, env) -> Expr:
        lhs = self.parse_unary(env)
        while self.peek().text in ("*", "/"):
            t = self.next()
            rhs = self.parse_unary(env)
            lhs = App(App(Const(t.text, pos=(t.line, t.col)), lhs), rhs)
        return lhs

    def parse_unary(self, env) -> Expr:
        t = self.peek()
        if t.text == "-":
            self.next()
            inner = self.parse_unary(env)
            return App(App(Const("-", pos=(t.line, t.col)), NatLit(0)), inner)
        return self.parse_app(env)

    def parse_app(self, env) -> Expr:
        e = self.parse_atom(env)
        while self._starts_atom():
            if self.peek().text == "(":
                # argument lists: f(a, b) is sugar for f a b
                self.next()
                args = [self.parse_expr(env)]
                while self.peek().text == ",":
                    self.next()
                    args.append(self.parse_expr(env))
                self.expect(")")
                for a in args:
                    e = App(e, a)
            else:
                e = App(e, self.parse_atom(env))
        return e

    def _starts_atom(self) -> bool:
        t = self.peek()
        if t.kind == "num" or t.text == "(":
            return True
        return t.kind == "ident" and t.text not in KEYWORDS and t.text != "λ"

    def parse_atom(self, env) -> Expr:
        t = self.next()
        if t.kind == "num":
            return NatLit(int(t.text), pos=(t.line, t.col))
        if t.text == "(":
            e = self.parse_expr(env)
            self.expect(")")
            return e
        if t.kind == "ident":
            name = t.text
            if name in ("Y", "L"):
                self.expect("[")
                targs = [self.parse_type()]
                while self.peek().text == ",":
                    self.next()
                    targs.append(self.parse_type())
                self.expect("]")
                return Const(name, tuple(targs), pos=(t.line, t.col))
            if name in SURFACE_CONSTANTS:
                return Const(name, pos=(t.line, t.col))
            if name == "In":
                raise ParseError("'In' is not available in surface programs",
                                 t.line, t.col)
            if name in env:
                return Var(name, pos=(t.line, t.col))
            if name in ALL_CONSTANTS:
                return Const(name, pos=(t.line, t.col))
            raise ParseError(f"unbound variable {name!r}", t.line, t.col)
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)


def parse(src: str) -> Expr:
    p = _Parser(src)
    e = p.parse_expr(frozenset())
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return e


# ---------------------------------------------------------------------------
# Printer


def _print_ty_args(targs) -> str:
    return "[" + ", ".join(str(t) for t in targs) + "]" if targs else ""


def print_expr(e: Expr) -> str:
    return _pp(e, 0)


# precedence levels: 0 top (lambda/if), 1 additive, 2 multiplicative,
# 3 application, 4 atom
def _pp(e: Expr, prec: int) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, NatLit):
        return str(e.n)
    if isinstance(e, Const):
        if e.name == "lt0":
            return "(0 <)" if prec >= 3 else "(0 <)"
        return e.name + _print_ty_args(e.targs)
    if isinstance(e, Lam):
        binder = f"{e.var}: {e.ty}" if e.ty is not None else e.var
        s = f"fun {binder}. {_pp(e.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, If):
        s = f"if {_pp(e.cond, 0)} then {_pp(e.then, 0)} else {_pp(e.els, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, App):
        # render binary operator applications infix
        if isinstance(e.fn, App) and isinstance(e.fn.fn, Const) \
                and e.fn.fn.name in ("+", "-", "*", "/"):
            op = e.fn.fn.name
            lvl = 1 if op in ("+", "-") else 2
            s = f"{_pp(e.fn.arg, lvl)} {op} {_pp(e.arg, lvl + 1)}"
            return f"({s})" if prec > lvl else s
        if isinstance(e.fn, Const) and e.fn.name == "lt0":
            s = f"0 < {_pp(e.arg, 1)}"
            return f"({s})" if prec > 0 else s
        s = f"{_pp(e.fn, 3)} {_pp(e.arg, 4)}"
        return f"({s})" if prec > 3 else s
    if isinstance(e, CostTagged):
        return f"⟨{_pp(e.expr, 0)}, {e.n}⟩"
    if isinstance(e, IntAt):
        return f"⟨int, ({e.m},{e.n})⟩"
    if isinstance(e, SupAt):
        return f"⟨sup, ({e.m},{e.n})⟩"
    if isinstance(e, IvLit):
        return str(e.iv)
    if isinstance(e, DualLit):
        s = str(e.dv)
        return f"({s})" if prec > 1 else s
    if isinstance(e, BoolLit):
        return "tt" if e.b else "ff"
    raise TypeError(f"cannot print {e!r}")


def alpha_eq(a: Expr, b: Expr, env=None) -> bool:
    """Alpha-equivalence on surface terms."""
    env = env or {}
    if isinstance(a, Var) and isinstance(b, Var):
        return env.get(a.name, a.name) == b.name
    if isinstance(a, Lam) and isinstance(b, Lam):
        return a.ty == b.ty and alpha_eq(a.body, b.body, {**env, a.var: b.var})
    if isinstance(a, App) and isinstance(b, App):
        return alpha_eq(a.fn, b.fn, env) and alpha_eq(a.arg, b.arg, env)
    if isinstance(a, If) and isinstance(b, If):
        return (alpha_eq(a.cond, b.cond, env) and alpha_eq(a.then, b.then, env)
                and alpha_eq(a.els, b.els, env))
    return a == b
