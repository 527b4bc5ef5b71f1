"""Parser, printer and substitution tests."""
import pytest

from dualpcf.lang import (
    App, Arrow, Const, DUAL, Lam, NatLit, ParseError, REAL, Var, alpha_eq,
    free_vars, parse, print_expr, subst,
)


class TestParser:
    def test_application_left_assoc(self):
        e = parse("fun f: delta -> delta -> delta. fun x: delta. f x x")
        body = e.body.body
        assert isinstance(body, App) and isinstance(body.fn, App)

    def test_comma_argument_lists(self):
        assert parse("max(1, 2)") == parse("max 1 2")
        assert parse("fun f: delta -> delta -> delta. f(1, 2)") == \
            parse("fun f: delta -> delta -> delta. f 1 2")

    def test_precedence(self):
        assert parse("1 + 2 * 3") == parse("1 + (2 * 3)")
        assert parse("1 - 2 - 3") == parse("(1 - 2) - 3")

    def test_unary_minus(self):
        assert parse("fun x: delta. -x") == parse("fun x: delta. 0 - x")

    def test_lambda_sugar(self):
        multi = parse("fun x: delta. fun y: delta. x + y")
        assert parse("fun (x: delta) (y: delta). x + y") == multi
        assert parse(r"\x: delta. \y: delta. x + y") == multi

    def test_let_desugars_to_application(self):
        e = parse("let y = 1 + 2 in y * y")
        assert isinstance(e, App) and isinstance(e.fn, Lam)
        assert e.fn.var == "y"

    def test_if_and_zero_test(self):
        e = parse("if 0 < in_pi 1 then 2 else 3")
        assert e.cond == App(Const("lt0"), App(Const("in_pi"), NatLit(1)))

    def test_only_zero_test_allowed(self):
        with pytest.raises(ParseError):
            parse("if 1 < 2 then 1 else 2")

    def test_type_arguments(self):
        e = parse("Y[delta -> delta]")
        assert e == Const("Y", (Arrow(DUAL, DUAL),))
        e = parse("L[real -> delta, delta]")
        assert e.targs == (Arrow(REAL, DUAL), DUAL)

    def test_unicode_types_and_arrows(self):
        assert parse("fun x: δ. x") == parse("fun x: delta. x")
        assert parse("fun f: π → δ. f") == \
            parse("fun f: real -> delta. f")

    def test_comments(self):
        assert parse("# a comment\n1 + 1  # trailing") == parse("1 + 1")

    def test_unbound_variable(self):
        with pytest.raises(ParseError, match="unbound"):
            parse("fun x: delta. y")

    def test_internal_constant_rejected(self):
        with pytest.raises(ParseError):
            parse("In (in_delta 1)")

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse("1 1)")


ROUND_TRIP_SOURCES = [
    "fun x: delta. max(x, 0 - x)",
    "L[delta] (fun x: delta. x * x) 3 1",
    "int (fun t: real. in_delta t)",
    "sup (fun t: real. t * (1/2) - t * t / 2)",
    "Y[delta -> delta] (fun f: delta -> delta. fun x: delta. f x)",
    "if 0 < in_pi 1 then in_pi 1 else in_pi 2",
    "fun g: delta -> delta. fun y: delta. g(y) * g(y)",
    "let h = fun x: delta. pr x in h 2",
]


@pytest.mark.parametrize("src", ROUND_TRIP_SOURCES)
def test_print_parse_round_trip(src):
    e = parse(src)
    assert alpha_eq(parse(print_expr(e)), e)


class TestSubstitution:
    def test_basic(self):
        e = parse("fun x: delta. x + x").body
        assert subst(e, "x", NatLit(3)) == parse("3 + 3")

    def test_shadowing(self):
        lam = Lam("x", DUAL, Var("x"))
        assert subst(lam, "x", NatLit(1)) == lam

    def test_capture_avoidance(self):
        # substituting a term mentioning y under a y-binder must rename
        lam = Lam("y", DUAL, App(Var("y"), Var("x")))
        out = subst(lam, "x", Var("y"))
        assert out.var != "y"
        assert out.body == App(Var(out.var), Var("y"))

    def test_free_vars(self):
        e = parse("fun x: delta. x + x")
        assert free_vars(e) == set()
        assert free_vars(e.body) == {"x"}
