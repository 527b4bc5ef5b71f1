"""Conformance machinery: logical-relation checks, a finite-difference
oracle for the directional derivative, and refinement-chain checks.

The relation on dual intervals ties together a base evaluation, a
perturbed evaluation, and a dual evaluation whose infinitesimal part must
stay consistent with the observed difference quotient.  Universally
quantified premises are approximated by randomized sampling of related
input triples, built from the witness shapes that appear in consistency
arguments: a base interval f, its shift f + r*g, and the dual
(f meet (f + r*g)) + eps g.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .lang import App, Arrow, DUAL, DualLit, Expr, IvLit, Lam, REAL, Var, fresh_var
from .machine import (
    CeilingReached, DEFAULT_BUDGET, eval_at_cost, eval_refine, Value,
)
from .numeric import DualInterval, Interval, IV_ZERO, in_dual


class OracleInconclusive(Exception):
    pass


@dataclass
class Verdict:
    holds: bool
    checked: int = 0
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


# -- ground relations -------------------------------------------------------


def relation_holds_ground(r, x1: DualInterval, x2: DualInterval,
                          x3: DualInterval) -> bool:
    """The dual-interval relation at perturbation size r > 0.

    Requires the standard part of x3 to refine the hull of the standard
    parts of x1 and x2, and r times the infinitesimal part of x3 to be
    consistent with the difference of the standard parts.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("perturbation size must be positive")
    hull = x1.std.meet(x2.std)
    if not x3.std.leq(hull):
        return False
    return x3.inf.scale(r).consistent(x2.std - x1.std)


def relation_holds_real(i1: Interval, i2: Interval, i3: Interval) -> bool:
    """The real-interval relation: i3 refines the hull and i1, i2 agree."""
    return i3.leq(i1.meet(i2)) and i1.consistent(i2)


# -- sampling of related triples -------------------------------------------


def _dyadic(rng: random.Random, span: int = 4, max_denom_log: int = 10):
    d = 1 << rng.randint(0, max_denom_log)
    return Fraction(rng.randint(-span * d, span * d), d)


def _dyadic_interval(rng: random.Random) -> Interval:
    # bias toward point intervals: thin witnesses make the consistency
    # condition sharp, which is what distinguishes a broken constant
    a = _dyadic(rng)
    if rng.random() < 0.5:
        return Interval.point(a)
    b = _dyadic(rng)
    if a > b:
        a, b = b, a
    return Interval(a, b)


def sample_related_duals(rng: random.Random, r) -> Tuple[DualInterval,
                                                         DualInterval,
                                                         DualInterval]:
    """A triple of dual intervals related at perturbation size r."""
    r = Fraction(r)
    roll = rng.random()
    if roll < 0.2:
        x = DualInterval(_dyadic_interval(rng), IV_ZERO)
        return x, x, x
    f = _dyadic_interval(rng)
    g = _dyadic_interval(rng)
    shifted = f + g.scale(r)
    x1 = DualInterval(f, IV_ZERO)
    x2 = DualInterval(shifted, IV_ZERO)
    x3 = DualInterval(f.meet(shifted), g)
    return x1, x2, x3


def sample_related_reals(rng: random.Random) -> Tuple[Interval, Interval,
                                                      Interval]:
    base = _dyadic_interval(rng)
    pad1 = abs(_dyadic(rng, span=1))
    pad2 = abs(_dyadic(rng, span=1))
    i1, i2 = base.inflate(pad1), base.inflate(pad2)
    return i1, i2, i1.meet(i2)


def _sample_related_args(ty, rng: random.Random, r):
    """Related argument triples at a ground or first-order arrow type."""
    if ty == DUAL:
        x1, x2, x3 = sample_related_duals(rng, r)
        return DualLit(x1), DualLit(x2), DualLit(x3)
    if ty == REAL:
        i1, i2, i3 = sample_related_reals(rng)
        return IvLit(i1), IvLit(i2), IvLit(i3)
    if isinstance(ty, Arrow) and ty.dst == DUAL:
        a1, a2, a3 = _sample_related_args(DUAL, rng, r)
        x = fresh_var("s")
        if rng.random() < 0.5:
            return (Lam(x, ty.src, a1), Lam(x, ty.src, a2), Lam(x, ty.src, a3))
        # translations x + c preserve the relation pointwise
        from .lang import Const
        mk = lambda c: Lam(x, ty.src,
                           App(App(Const("+", ("delta",)), Var(x)), c))
        return mk(a1), mk(a2), mk(a3)
    raise ValueError(f"no sampler for arguments of type {ty}")


def _eval_ground(e: Expr, cost: int, budget: int, overrides=None):
    out = eval_at_cost(e, cost, budget, overrides)
    if not isinstance(out, Value):
        raise OracleInconclusive(f"evaluation did not produce a value: {out}")
    return out.value


def relation_holds(r, ty, f1: Expr, f2: Expr, f3: Expr, fuel: int = 50,
                   seed: int = 0, cost: int = 4,
                   budget: int = DEFAULT_BUDGET, overrides=None) -> Verdict:
    """Check the logical relation at ty on closed terms by sampling.

    At ground type this is a single direct check; at arrow types, related
    argument triples are sampled and the relation is checked on the
    results, recursively through the arrow spine.
    """
    rng = random.Random(seed)
    r = Fraction(r)

    def check(ty, e1, e2, e3):
        if ty == DUAL:
            v1, v2, v3 = (in_dual(v) if isinstance(v, Interval) else v
                          for v in (_eval_ground(e1, cost, budget, overrides),
                                    _eval_ground(e2, cost, budget, overrides),
                                    _eval_ground(e3, cost, budget, overrides)))
            if not relation_holds_ground(r, v1, v2, v3):
                return f"ground violation: {v1} ; {v2} ; {v3}"
            return None
        if ty == REAL:
            v1, v2, v3 = (_eval_ground(e, cost, budget, overrides)
                          for e in (e1, e2, e3))
            if not relation_holds_real(v1, v2, v3):
                return f"real violation: {v1} ; {v2} ; {v3}"
            return None
        if isinstance(ty, Arrow):
            a1, a2, a3 = _sample_related_args(ty.src, rng, r)
            return check(ty.dst, App(e1, a1), App(e2, a2), App(e3, a3))
        raise ValueError(f"relation undefined at type {ty}")

    checked = 0
    for _ in range(fuel):
        bad = check(ty, f1, f2, f3)
        checked += 1
        if bad is not None:
            return Verdict(False, checked, bad)
        if ty in (DUAL, REAL):
            break  # ground checks are deterministic
    return Verdict(True, checked)


# -- finite-difference oracle ----------------------------------------------


@dataclass
class OracleGrid:
    k_schedule: Tuple[int, ...] = tuple(range(3, 13))
    points: int = 9
    tol: Fraction = Fraction(1, 256)
    cost_ceiling: int = 4096


@dataclass
class OracleEstimate:
    quotients: List[Tuple[Fraction, Fraction, Fraction]] = field(
        default_factory=list)  # (y, r, quotient midpoint)
    hull: Optional[Interval] = None  # over the whole schedule
    hulls_by_radius: List[Tuple[Fraction, Interval]] = field(
        default_factory=list)

    @property
    def limit_hull(self) -> Interval:
        """Quotient hull at the smallest sampled radius: the best available
        estimate of the derivative envelope in the limit."""
        return self.hulls_by_radius[-1][1]


def _std_at(f: Expr, z: Fraction, width, ceiling: int) -> Interval:
    e = App(f, DualLit(DualInterval(Interval.point(z), IV_ZERO)))
    try:
        v, _ = eval_refine(e, width, cost_ceiling=ceiling, std_only=True)
    except CeilingReached as c:
        raise OracleInconclusive(
            f"refinement ceiling hit evaluating at {z}") from None
    return v.std if isinstance(v, DualInterval) else v


def finite_diff_oracle(f: Expr, x, xp, grid: OracleGrid = None) -> OracleEstimate:
    """Outer estimate of the directional derivative of f at x along xp.

    Evaluates difference quotients (f(y + r*xp) - f(y)) / r for r in a
    decreasing dyadic schedule and y on a symmetric grid of shrinking
    radius around x.  The hull of all quotient intervals is an outer
    bound for the limit-inferior/limit-superior envelope.
    """
    grid = grid or OracleGrid()
    x, xp = Fraction(x), Fraction(xp)
    est = OracleEstimate()
    half = grid.points // 2
    for k in grid.k_schedule:
        r = Fraction(1, 1 << k)
        width = grid.tol * r / 4
        k_hull = None
        for j in range(-half, half + 1):
            y = x + Fraction(j, max(1, half)) * r
            f0 = _std_at(f, y, width, grid.cost_ceiling)
            f1 = _std_at(f, y + r * xp, width, grid.cost_ceiling)
            q = (f1 - f0).scale(Fraction(1, 1) / r)
            est.quotients.append((y, r, q.midpoint()))
            est.hull = q if est.hull is None else est.hull.meet(q)
            k_hull = q if k_hull is None else k_hull.meet(q)
        est.hulls_by_radius.append((r, k_hull))
    return est


def check_L_soundness(f: Expr, x, xp, n_schedule=(0, 1, 2),
                      grid: OracleGrid = None,
                      budget: int = DEFAULT_BUDGET) -> Verdict:
    """The machine's infinitesimal part must cover every observed quotient.

    For each cost n, evaluates f(x + eps xp) and checks that the oracle's
    quotient hull lies inside the infinitesimal part, inflated by the
    oracle tolerance.
    """
    grid = grid or OracleGrid()
    est = finite_diff_oracle(f, x, xp, grid)
    hull = est.limit_hull
    arg = DualLit(DualInterval(Interval.point(Fraction(x)),
                               Interval.point(Fraction(xp))))
    checked = 0
    for n in n_schedule:
        v = _eval_ground(App(f, arg), n, budget)
        if isinstance(v, Interval):
            v = in_dual(v)
        padded = v.inf.inflate(grid.tol)
        if not padded.leq(hull):
            return Verdict(False, checked,
                           f"at cost {n}: machine {v.inf} does not cover "
                           f"oracle hull {hull}")
        checked += 1
    return Verdict(True, checked)


# -- refinement chains ------------------------------------------------------


def _leq_value(a, b) -> bool:
    if isinstance(a, DualInterval) and isinstance(b, DualInterval):
        return a.leq(b)
    if isinstance(a, Interval) and isinstance(b, Interval):
        return a.leq(b)
    if isinstance(a, Interval):
        return in_dual(a).leq(b)
    if isinstance(b, Interval):
        return a.leq(in_dual(b))
    return a == b


def check_monotone_refinement(e: Expr, costs, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Assert that results refine (gain information) along the cost list."""
    costs = list(costs)
    prev = None
    for i, n in enumerate(costs):
        v = _eval_ground(e, n, budget)
        if prev is not None and not _leq_value(prev, v):
            return Verdict(False, i,
                           f"cost {costs[i - 1]} gave {prev}, not refined by "
                           f"cost {n} giving {v}")
        prev = v
    return Verdict(True, len(costs))
