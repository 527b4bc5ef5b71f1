"""Cost-indexed call-by-name evaluator.

`eval_at_cost` normalizes a cost-tagged closed term with a recursive
evaluator that applies the reduction rules depth-first in the order fixed
by the evaluation contexts (function position first, then operator
arguments left to right).  `step` is the literal one-redex-at-a-time
variant used by small conformance tests; both share the ground rules.

The cost index bounds recursion unfolding at continuous types and the
bisection depth of integration and supremum.  A separate global step
budget guards against divergence of the unbounded fixed point.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .lang import (
    App, Arrow, BoolLit, Const, CostTagged, DUAL, DualLit, Expr, If, IntAt,
    IvLit, Lam, NAT, NatLit, REAL, SupAt, Type, Var, fresh_var, subst,
)
from .numeric import (
    DUAL_BOTTOM, DualInterval, IV_BOTTOM, IV_UNIT, IV_ZERO, Interval,
    dual_eps, dual_max, dual_min, dual_pr, in_dual, iv_max, iv_min, iv_pr,
)
from .typecheck import is_continuous_type

sys.setrecursionlimit(100_000)

DEFAULT_BUDGET = 10_000_000

_ARITY = {
    "+": 2, "-": 2, "*": 2, "/": 2, "min": 2, "max": 2,
    "pr": 1, "in_pi": 1, "in_delta": 1,
    "succ": 1, "pred": 1, "iszero": 1, "lt0": 1, "In": 1,
}


class StuckTerm(RuntimeError):
    """An untypeable configuration was reached: an interpreter bug."""


class UndeterminedSignal(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class BudgetError(Exception):
    def __init__(self, steps: int):
        super().__init__(f"step budget exhausted after {steps} steps")
        self.steps = steps


class CeilingReached(Exception):
    def __init__(self, best, cost: int):
        super().__init__(f"refinement ceiling reached at cost {cost}")
        self.best = best
        self.cost = cost


# -- runtime values ---------------------------------------------------------

# Ground values are the literal AST nodes themselves (NatLit, BoolLit,
# IvLit, DualLit).  The remaining values:


@dataclass
class Closure:
    lam: Lam
    tag: Optional[int]


@dataclass
class PrimVal:
    name: str
    carrier: Optional[str]  # "pi" | "delta" | None (dynamic)
    args: Tuple[Expr, ...]


@dataclass
class IntSupVal:
    kind: str  # "int" | "sup"
    m: Optional[int]
    n: int


@dataclass
class YVal:
    ty: Type
    tag: Optional[int]  # None: standard unbounded unfolding


@dataclass
class LVal:
    targs: Tuple[Type, ...]
    n: int
    args: Tuple[Expr, ...]


BOOL_BOTTOM = object()  # result of the zero test on a zero-straddling interval


# -- outcomes ---------------------------------------------------------------


@dataclass
class Outcome:
    steps: int = 0


@dataclass
class Value(Outcome):
    value: object = None


@dataclass
class Undetermined(Outcome):
    reason: str = ""


@dataclass
class BudgetExhausted(Outcome):
    pass


# -- ground rules, shared by the recursive evaluator and by `step` ----------


def _as_iv(v) -> Interval:
    if isinstance(v, IvLit):
        return v.iv
    if isinstance(v, NatLit):
        return Interval.point(v.n)
    raise StuckTerm(f"expected a real value, found {v}")


def _as_dual(v) -> DualInterval:
    if isinstance(v, DualLit):
        return v.dv
    return in_dual(_as_iv(v))


def _is_dualish(vals) -> bool:
    return any(isinstance(v, DualLit) for v in vals)


def _carrier_of(c: Const) -> Optional[str]:
    if not c.targs:
        return None
    t = c.targs[0]
    return t if isinstance(t, str) else getattr(t, "name", None)


def apply_ground_rule(name: str, carrier: Optional[str], vals: List,
                      overrides=None):
    """Apply the delta-rule of a saturated first-order constant to values."""
    if overrides and name in overrides:
        return overrides[name](carrier, vals)
    if name in ("+", "-", "*", "min", "max"):
        use_dual = carrier == "delta" or (carrier is None and _is_dualish(vals))
        if use_dual:
            a, b = _as_dual(vals[0]), _as_dual(vals[1])
            out = {"+": lambda: a + b, "-": lambda: a - b,
                   "*": lambda: a * b, "min": lambda: dual_min(a, b),
                   "max": lambda: dual_max(a, b)}[name]()
            return DualLit(out)
        a, b = _as_iv(vals[0]), _as_iv(vals[1])
        out = {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b,
               "min": lambda: iv_min(a, b), "max": lambda: iv_max(a, b)}[name]()
        return IvLit(out)
    if name == "/":
        d = vals[1]
        if not isinstance(d, NatLit):
            raise StuckTerm(f"division by a non-natural: {d}")
        if carrier == "delta" or (carrier is None and _is_dualish(vals[:1])):
            return DualLit(_as_dual(vals[0]).div_nat(d.n))
        return IvLit(_as_iv(vals[0]).div_nat(d.n))
    if name == "pr":
        if carrier == "delta" or (carrier is None and _is_dualish(vals)):
            return DualLit(dual_pr(_as_dual(vals[0])))
        return IvLit(iv_pr(_as_iv(vals[0])))
    if name == "in_pi":
        v = vals[0]
        if not isinstance(v, NatLit):
            raise StuckTerm(f"in_pi on {v}")
        return IvLit(Interval.point(v.n))
    if name == "in_delta":
        return DualLit(in_dual(_as_iv(vals[0])))
    if name == "succ":
        return NatLit(vals[0].n + 1)
    if name == "pred":
        return NatLit(max(0, vals[0].n - 1))
    if name == "iszero":
        return BoolLit(vals[0].n == 0)
    if name == "lt0":
        iv = _as_iv(vals[0])
        if iv.lo > 0:
            return BoolLit(True)
        if iv.hi < 0:
            return BoolLit(False)
        return BOOL_BOTTOM
    if name == "In":
        v = vals[0]
        if not isinstance(v, DualLit):
            raise StuckTerm(f"In on {v}")
        return IvLit(v.dv.inf)
    raise StuckTerm(f"no ground rule for constant {name!r}")


def bottom_expr(ty: Type) -> Expr:
    """The bottom literal of a continuous type, lambda-wrapped as needed."""
    if ty == DUAL:
        return DualLit(DUAL_BOTTOM)
    if ty == REAL:
        return IvLit(IV_BOTTOM)
    if isinstance(ty, Arrow):
        return Lam(fresh_var("b"), ty.src, bottom_expr(ty.dst))
    raise StuckTerm(f"no bottom literal at type {ty}")


def _half_ast(x: Expr) -> Expr:
    return App(App(Const("/", ("pi",)), x), NatLit(2))


def _shift_half_ast(x: Expr) -> Expr:
    return _half_ast(App(App(Const("+", ("pi",)), x), NatLit(1)))


def _rescaled(f: Expr, upper_half: bool) -> Expr:
    x = fresh_var("t")
    arg = _shift_half_ast(Var(x)) if upper_half else _half_ast(Var(x))
    return Lam(x, REAL, App(f, arg))


def lift_eps(ty: Type, e: Expr) -> Expr:
    """The epsilon-scaling macro at an admissible type, applied to e."""
    if ty == DUAL:
        unit = DualLit(DualInterval.of(IV_ZERO, Interval.point(1)))
        return App(App(Const("*", ("delta",)), unit), e)
    if isinstance(ty, Arrow):
        x = fresh_var("e")
        return Lam(x, ty.src, lift_eps(ty.dst, App(e, Var(x))))
    raise StuckTerm(f"epsilon macro undefined at type {ty}")


def lift_plus(ty: Type, a: Expr, b: Expr) -> Expr:
    """The pointwise dual addition macro at an admissible type."""
    if ty == DUAL:
        return App(App(Const("+", ("delta",)), a), b)
    if isinstance(ty, Arrow):
        x = fresh_var("p")
        return Lam(x, ty.src, lift_plus(ty.dst, App(a, Var(x)), App(b, Var(x))))
    raise StuckTerm(f"plus macro undefined at type {ty}")


def lifted_l_arguments(targs, points, dirs) -> List[Expr]:
    return [lift_plus(ty, p, lift_eps(ty, d))
            for ty, p, d in zip(targs, points, dirs)]


# -- the recursive evaluator ------------------------------------------------


_LITERALS = (NatLit, BoolLit, IvLit, DualLit)


class Machine:
    def __init__(self, budget: int = DEFAULT_BUDGET, overrides=None):
        self.budget = budget
        self.overrides = overrides
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetError(self.steps)

    def evalc(self, e: Expr, tag: Optional[int]):
        while isinstance(e, CostTagged):
            tag = e.n
            e = e.expr
        if isinstance(e, _LITERALS):
            return e
        if isinstance(e, Lam):
            return Closure(e, tag)
        if isinstance(e, Const):
            return self._const_value(e, tag)
        if isinstance(e, (IntAt, SupAt)):
            kind = "int" if isinstance(e, IntAt) else "sup"
            return IntSupVal(kind, e.m, e.n)
        if isinstance(e, App):
            fv = self.evalc(e.fn, tag)
            return self.apply(fv, e.arg, tag)
        if isinstance(e, If):
            self._tick()
            cv = self.evalc(e.cond, tag)
            if cv is BOOL_BOTTOM:
                if e.ty is not None and is_continuous_type(e.ty):
                    return self.evalc(bottom_expr(e.ty), tag)
                raise UndeterminedSignal(
                    "conditional on a zero-straddling test at a "
                    "non-continuous type")
            if not isinstance(cv, BoolLit):
                raise StuckTerm(f"conditional on non-boolean {cv}")
            return self.evalc(e.then if cv.b else e.els, tag)
        raise StuckTerm(f"cannot evaluate {e!r}")

    def _const_value(self, c: Const, tag: Optional[int]):
        name = c.name
        if name in ("tt", "ff"):
            return BoolLit(name == "tt")
        if name in ("int", "sup"):
            return IntSupVal(name, None, tag if tag is not None else 0)
        if name == "Y":
            ty = c.targs[0]
            if is_continuous_type(ty):
                if tag is None:
                    raise StuckTerm("bounded fixed point without a cost tag")
                return YVal(ty, tag)
            return YVal(ty, None)
        if name == "L":
            if tag is None:
                raise StuckTerm("derivative operator without a cost tag")
            return LVal(c.targs, tag, ())
        if name in _ARITY:
            return PrimVal(name, _carrier_of(c), ())
        raise StuckTerm(f"unknown constant {name!r}")

    def apply(self, fv, arg: Expr, tag: Optional[int]):
        self._tick()
        if isinstance(fv, Closure):
            return self.evalc(subst(fv.lam.body, fv.lam.var, arg), fv.tag)
        if isinstance(fv, PrimVal):
            args = fv.args + (arg,)
            if len(args) < _ARITY[fv.name]:
                return PrimVal(fv.name, fv.carrier, args)
            vals = [self.evalc(a, tag) for a in args]
            return apply_ground_rule(fv.name, fv.carrier, vals, self.overrides)
        if isinstance(fv, IntSupVal):
            m = fv.m if fv.m is not None else fv.n
            return self._reduce_intsup(fv.kind, arg, m, fv.n)
        if isinstance(fv, YVal):
            if fv.tag is None:
                return self.evalc(
                    App(arg, App(Const("Y", (fv.ty,)), arg)), tag)
            if fv.tag == 0:
                return self.evalc(bottom_expr(fv.ty), None)
            return self.evalc(
                App(arg, App(Const("Y", (fv.ty,)), arg)), fv.tag - 1)
        if isinstance(fv, LVal):
            args = fv.args + (arg,)
            if len(args) < 1 + 2 * len(fv.targs):
                return LVal(fv.targs, fv.n, args)
            return self._reduce_l(fv.targs, fv.n, args)
        raise StuckTerm(f"cannot apply {fv}")

    def _reduce_intsup(self, kind: str, f: Expr, m: int, n: int,
                       lo: Fraction = Fraction(0), hi: Fraction = Fraction(1)):
        # The bisection rule rescales f with wrapper lambdas; composing
        # those affine maps sends [0,1] to an explicit dyadic cell, so the
        # cell endpoints are passed down directly.  Values are identical
        # (all the arithmetic involved is exact) and the association of
        # the combining tree is preserved.
        if m == 0:
            return self.evalc(App(f, IvLit(Interval(lo, hi))), n)
        self._tick()
        mid = (lo + hi) / 2
        lv = self._reduce_intsup(kind, f, m - 1, n, lo, mid)
        rv = self._reduce_intsup(kind, f, m - 1, n, mid, hi)
        if kind == "int":
            if isinstance(lv, DualLit) or isinstance(rv, DualLit):
                return DualLit(_as_dual(lv).div_nat(2) + _as_dual(rv).div_nat(2))
            return IvLit(_as_iv(lv).div_nat(2) + _as_iv(rv).div_nat(2))
        if isinstance(lv, DualLit) or isinstance(rv, DualLit):
            return DualLit(dual_max(_as_dual(lv), _as_dual(rv)))
        return IvLit(iv_max(_as_iv(lv), _as_iv(rv)))

    def _reduce_l(self, targs, n: int, args):
        k = len(targs)
        f, points, dirs = args[0], args[1:1 + k], args[1 + k:]
        spine: Expr = f
        for lifted in lifted_l_arguments(targs, points, dirs):
            spine = App(spine, lifted)
        v = self.evalc(spine, n)
        if not isinstance(v, DualLit):
            raise StuckTerm(f"derivative body evaluated to {v}")
        return IvLit(v.dv.inf)

    # -- public driver ------------------------------------------------

    def eval_at_cost(self, e: Expr, n: int) -> Outcome:
        """Normalize a closed, elaborated term of ground type at cost n."""
        self.steps = 0
        try:
            v = self.evalc(CostTagged(e, n), None)
        except UndeterminedSignal as u:
            return Undetermined(steps=self.steps, reason=u.reason)
        except BudgetError:
            return BudgetExhausted(steps=self.steps)
        return Value(steps=self.steps, value=_unlit(v))


def _unlit(v):
    if isinstance(v, DualLit):
        return v.dv
    if isinstance(v, IvLit):
        return v.iv
    if isinstance(v, NatLit):
        return v.n
    if isinstance(v, BoolLit):
        return v.b
    return v


def eval_at_cost(e: Expr, n: int, budget: int = DEFAULT_BUDGET,
                 overrides=None) -> Outcome:
    return Machine(budget, overrides).eval_at_cost(e, n)


def eval_dual(e: Expr, n: int, budget: int = DEFAULT_BUDGET) -> DualInterval:
    """Evaluate a closed term of type delta (or pi, embedded) at cost n."""
    out = eval_at_cost(e, n, budget)
    if isinstance(out, Undetermined):
        raise UndeterminedSignal(out.reason)
    if isinstance(out, BudgetExhausted):
        raise BudgetError(out.steps)
    v = out.value
    if isinstance(v, Interval):
        return in_dual(v)
    if not isinstance(v, DualInterval):
        raise StuckTerm(f"expected a numeric result, found {v!r}")
    return v


def _widths(v: DualInterval):
    return v.std.width, v.inf.width


def eval_refine(e: Expr, target_width, cost_ceiling: int = 4096,
                budget: int = DEFAULT_BUDGET,
                std_only: bool = False) -> Tuple[DualInterval, int]:
    """Evaluate at doubling costs until both component widths reach the
    target (or only the standard part's width, with std_only)."""
    target_width = Fraction(target_width)
    best, best_cost = None, 0
    n = 1
    while True:
        v = eval_dual(e, n, budget)
        best, best_cost = v, n
        ws, wi = _widths(v)
        if ws <= target_width and (std_only or wi <= target_width):
            return v, n
        if n >= cost_ceiling:
            raise CeilingReached(best, best_cost)
        n *= 2


# -- literal one-step reduction --------------------------------------------


def _is_value(e: Expr) -> bool:
    if isinstance(e, _LITERALS) or isinstance(e, (Lam, Const, IntAt, SupAt)):
        return True
    if isinstance(e, CostTagged):
        return isinstance(e.expr, (Lam, Const))
    if isinstance(e, App):
        # unsaturated constant application over values
        head, args = _strip_spine(e)
        name = _const_name(head)
        if name in _ARITY and len(args) < _ARITY[name]:
            return all(_is_value(a) for a in args)
        if name == "L":
            c = head.expr if isinstance(head, CostTagged) else head
            return len(args) < 1 + 2 * len(c.targs)
    return False


def _strip_spine(e: Expr):
    args = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fn
    return e, list(reversed(args))


def _const_name(head: Expr) -> Optional[str]:
    if isinstance(head, CostTagged):
        head = head.expr
    if isinstance(head, Const):
        return head.name
    return None


def step(e: Expr, overrides=None) -> Optional[Expr]:
    """Apply exactly one reduction rule; None if e is a normal form."""
    if isinstance(e, CostTagged):
        inner, n = e.expr, e.n
        if isinstance(inner, _LITERALS):
            return inner  # de-tagging
        if isinstance(inner, Const):
            if inner.name in ("int", "sup"):
                node = IntAt if inner.name == "int" else SupAt
                return node(n, n)
            if inner.name == "Y":
                if is_continuous_type(inner.targs[0]):
                    return None  # value: reduced when applied
                return inner  # constant de-tagging
            if inner.name == "L":
                return None  # value: reduced when applied
            return inner  # constant de-tagging
        if isinstance(inner, Lam):
            return None  # tagged closure: a value
        if isinstance(inner, App):
            head, args = _strip_spine(inner)
            name = _const_name(head)
            if name in _ARITY and len(args) == _ARITY[name]:
                # cost distribution over an operator application
                return _app_spine(head, [CostTagged(a, n) for a in args])
            return App(CostTagged(inner.fn, n), inner.arg)
        if isinstance(inner, If):
            return If(CostTagged(inner.cond, n), CostTagged(inner.then, n),
                      CostTagged(inner.els, n), inner.ty)
        if isinstance(inner, CostTagged):
            e2 = step(inner, overrides)
            return CostTagged(e2, n) if e2 is not None else inner
        return None
    if isinstance(e, App):
        head, args = _strip_spine(e)
        name = _const_name(head)
        if name in _ARITY and len(args) == _ARITY[name]:
            # reduce leftmost non-value argument, then fire the delta rule
            for i, a in enumerate(args):
                if not _is_value(a):
                    a2 = step(a, overrides)
                    if a2 is None:
                        raise StuckTerm(f"stuck operand {a}")
                    return _app_spine(head, args[:i] + [a2] + args[i + 1:])
            h = head.expr if isinstance(head, CostTagged) else head
            out = apply_ground_rule(name, _carrier_of(h), args, overrides)
            if out is BOOL_BOTTOM:
                raise UndeterminedSignal("zero test on a straddling interval")
            return out
        if isinstance(e.fn, CostTagged) and isinstance(e.fn.expr, Lam):
            lam, m = e.fn.expr, e.fn.n
            return CostTagged(subst(lam.body, lam.var, e.arg), m)
        if isinstance(e.fn, Lam):
            return subst(e.fn.body, e.fn.var, e.arg)
        if isinstance(e.fn, IntAt) or isinstance(e.fn, SupAt):
            node = e.fn
            kind = "int" if isinstance(node, IntAt) else "sup"
            f = e.arg
            if node.m == 0:
                return App(CostTagged(f, node.n), IvLit(IV_UNIT))
            lower = App(type(node)(node.m - 1, node.n), _rescaled(f, False))
            upper = App(type(node)(node.m - 1, node.n), _rescaled(f, True))
            if kind == "int":
                return App(App(Const("+"), _div2(lower)), _div2(upper))
            return App(App(Const("max"), lower), upper)
        if isinstance(e.fn, CostTagged) and isinstance(e.fn.expr, Const):
            c, n = e.fn.expr, e.fn.n
            if c.name == "Y" and is_continuous_type(c.targs[0]):
                if n == 0:
                    return bottom_expr(c.targs[0])
                return CostTagged(App(e.arg, App(Const("Y", c.targs), e.arg)),
                                  n - 1)
            if c.name in ("int", "sup"):
                node = IntAt if c.name == "int" else SupAt
                return App(node(n, n), e.arg)
        if name == "L":
            h = head.expr if isinstance(head, CostTagged) else head
            k = len(h.targs)
            if len(args) == 1 + 2 * k and isinstance(head, CostTagged):
                f, pts, dirs = args[0], args[1:1 + k], args[1 + k:]
                spine: Expr = f
                for lifted in lifted_l_arguments(h.targs, pts, dirs):
                    spine = App(spine, lifted)
                return App(Const("In"), CostTagged(spine, head.n))
        if name == "Y":
            h = head.expr if isinstance(head, CostTagged) else head
            if isinstance(head, Const) and not is_continuous_type(h.targs[0]):
                return App(args[0], App(head, args[0]))
        e2 = step(e.fn, overrides)
        if e2 is None:
            raise StuckTerm(f"stuck application head {e.fn}")
        return App(e2, e.arg)
    if isinstance(e, If):
        if isinstance(e.cond, BoolLit):
            return e.then if e.cond.b else e.els
        e2 = step(e.cond, overrides)
        if e2 is None:
            raise StuckTerm(f"stuck conditional scrutinee {e.cond}")
        return If(e2, e.then, e.els, e.ty)
    return None


def _div2(x: Expr) -> Expr:
    return App(App(Const("/"), x), NatLit(2))


def _app_spine(head: Expr, args) -> Expr:
    out = head
    for a in args:
        out = App(out, a)
    return out


def run_steps(e: Expr, max_steps: int = 1000, overrides=None):
    """Iterate `step` to a normal form; returns (normal form, step count)."""
    for i in range(max_steps):
        e2 = step(e, overrides)
        if e2 is None:
            return e, i
        e = e2
    raise BudgetError(max_steps)
