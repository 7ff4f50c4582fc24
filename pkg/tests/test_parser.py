"""Grammar, parse errors, and round trips."""

from fractions import Fraction

import pytest

from liepde import fixtures
from liepde.expr import DELTA, OMEGA, R, S, X, Y, jet, rational
from liepde.parser import ParseError, parse, render


class TestGrammar:
    def test_equation_right_hand_side(self):
        e = parse("R*x*u_x + y*S*u_x")
        assert e == R * X * jet("u", "x") + S * Y * jet("u", "x")
        assert render(e) == "R*x*u_x + S*y*u_x"

    def test_exp_of_zero(self):
        assert render(parse("exp(0)")) == "1"

    def test_sqrt_maps_to_the_surd(self):
        assert parse("sqrt(R^2 - 4*S)") == OMEGA
        assert parse("sqrt(R*R - S*4)") == OMEGA  # same canonical radicand

    def test_rational_literals(self):
        assert parse("3/4") == rational(3, 4)
        assert parse("-1/2*x") == rational(-1, 2) * X

    def test_negative_exponents(self):
        assert parse("x^-2") == X ** -2
        assert parse("(2*(R*V + W))^-1") == Fraction(1, 2) * DELTA

    def test_unary_minus_and_parentheses(self):
        assert parse("-x + (y - x)") == Y - 2 * X

    def test_jet_identifiers(self):
        for name in ("u", "u_t", "u_x", "u_y", "u_xx", "u_xy", "u_yy",
                     "u_tx", "u_ty", "u_tt", "z", "z_t", "z_r", "z_rr"):
            parse(name)

    def test_user_constants(self):
        e = parse("lam*exp(lam*t)", constants={"lam"})
        assert render(e) == "lam*exp(lam*t)"


class TestErrors:
    @pytest.mark.parametrize("text", [
        "sqrt(R)", "sqrt(R^2 - 3*S)", "q + 1", "u_xt", "x +", "(x",
        "1/0", "R^-1", "exp(", "x ^ y",
    ])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse(text)

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse("x +\n  %")
        assert err.value.line == 2

    def test_unknown_identifier_lists_reserved_names(self):
        with pytest.raises(ParseError) as err:
            parse("foo")
        msg = str(err.value)
        for name in ("omega", "R", "S", "V", "W"):
            assert name in msg


class TestRoundTrip:
    def test_simple_round_trips(self):
        for text in ("u_tx + 3*u_yy", "z_rr - z_t + r*z_r",
                     "x^2*y - 4/7*t", "omega*x + omega^2",
                     "exp(-1/2*R*t)*u_x"):
            e = parse(text)
            assert parse(render(e)) == e

    def test_every_fixture_expression_round_trips(self):
        exprs = list(fixtures.coefficient_functions().values())
        exprs += [fixtures.K1, fixtures.K2, fixtures.K3]
        for name in ("delta3", "delta4", "delta5", "delta6"):
            exprs.append(fixtures.characteristic_r(name))
            exprs.append(fixtures.multiplier_exponent(name))
            exprs.append(fixtures.printed_reduced_equation(name)[0])
        exprs.append(fixtures.printed_stationary_equation())
        for vf in fixtures.known_basis():
            exprs.extend(vf.coefficients())
        assert len(exprs) > 30
        for e in exprs:
            assert parse(render(e)) == e
