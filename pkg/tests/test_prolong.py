"""Prolongation formulas, residuals, and determining-system extraction."""

import random
from fractions import Fraction

import pytest

from liepde import expr as ex
from liepde.expr import ONE, R, T, U, W, X, ZERO, exp_of, jet, tfun
from liepde.fixtures import coefficient_functions, known_basis
from liepde.prolong import (VectorField, determining_equations, prolong2,
                            residual)

from conftest import random_fraction

VARS3 = ("t", "x", "y")


def field3(xi_t, xi_x, xi_y, eta):
    return VectorField(VARS3, "u", (ex.as_expr(xi_t), ex.as_expr(xi_x),
                                    ex.as_expr(xi_y)), ex.as_expr(eta))


class TestProlong2:
    def test_translation_prolongs_to_zero(self):
        ext = prolong2(field3(0, 1, 0, 0))
        assert all(v.is_zero for v in ext.values())

    def test_scaling_prolongs_to_matching_jets(self):
        # u d/du extends with eta^J equal to the matching jet variable
        ext = prolong2(field3(0, 0, 0, U))
        for J, v in ext.items():
            assert v == jet("u", tuple(J))

    def test_delta5_extension_carries_scaling_term(self):
        # d/dx of C(t)(C3 x + C4 y) u contributes the term C(t) C3 u to
        # eta^x; isolate it by zeroing the derivative jets and x, y
        c = coefficient_functions()
        d5 = known_basis()[4]
        eta_x = prolong2(d5)[("x",)]
        bare = eta_x
        for j in sorted(ex.jets_of(eta_x, min_order=1),
                        key=lambda j: (j.order, j.idx)):
            bare = ex.subst_many(bare, {j: ZERO})
        bare = ex.substitute(ex.substitute(bare, "x", ZERO), "y", ZERO)
        assert bare == c["C"] * c["C3"] * U

    def test_rejects_jet_coefficients(self):
        with pytest.raises(ex.ExprError):
            field3(0, jet("u", "x"), 0, 0)


class TestResidual:
    def test_fixture_symmetry(self, hpz):
        d1 = field3(1, 0, 0, U)
        assert residual(d1, hpz).is_zero

    def test_heat_translation(self, heat):
        vf = VectorField(("t", "x"), "u", (ZERO, ONE), ZERO)
        assert residual(vf, heat).is_zero

    def test_non_symmetry_is_nonzero(self, hpz):
        # oracle: evaluate at 20 random rational points under the binding;
        # a vanishing field would be zero at all of them
        vf = field3(0, X, 0, 0)
        res = residual(vf, hpz)
        assert not res.is_zero
        rng = random.Random(7)
        base = {"R": 5, "S": 4, "V": 1, "W": 1, "omega": 3,
                "delta": Fraction(1, 6)}
        hits = 0
        for _ in range(20):
            point = dict(base)
            for k in ("t", "x", "y", "u", "u_x", "u_y", "u_xx", "u_xy", "u_yy"):
                point[k] = random_fraction(rng)
            if ex.evaluate(res, point):
                hits += 1
        assert hits >= 15
        # and the stated -2W u_xx term is present
        coeff = ex.split_terms(
            res, lambda b: isinstance(b, ex.Jet) and b.order >= 1)
        assert coeff[((ex.Jet("u", ("x", "x")), 1),)] == -2 * W

    def test_linearity(self, hpz):
        basis = known_basis()
        a, b = basis[2], basis[5]
        combo = a.scaled(Fraction(3, 2)).plus(b.scaled(-5))
        assert residual(combo, hpz) == \
            residual(a, hpz) * Fraction(3, 2) - residual(b, hpz) * 5

    def test_solution_symmetry(self, hpz):
        # phi = exp(R t) solves u_t = R u (the x,y-independent restriction)
        vf = field3(0, 0, 0, exp_of(R * T))
        assert residual(vf, hpz).is_zero


class TestDeterminingSystem:
    def test_pure_time_ansatz_forces_constant(self, hpz):
        vf = field3(tfun("a"), 0, 0, 0)
        rows = determining_equations(vf, hpz).equations()
        nontrivial = [eq for _, _, eq in rows if not eq.is_zero]
        assert nontrivial
        ap = tfun("a", 1)
        for eq in nontrivial:
            q = ex.divide_exact(eq, ap)
            assert not ex.tfuns_of(q), "every equation is a multiple of a'"

    def test_heat_shift_ansatz(self, heat):
        vf = VectorField(("t", "x"), "u", (ZERO, ONE), tfun("g") * U)
        rows = determining_equations(vf, heat).equations()
        nontrivial = [(jm, pm, eq) for jm, pm, eq in rows if not eq.is_zero]
        assert len(nontrivial) == 1
        jm, pm, eq = nontrivial[0]
        assert eq == -tfun("g", 1) or eq == tfun("g", 1)

    def test_zero_system_iff_symmetry(self, hpz):
        d3 = known_basis()[2]
        assert determining_equations(d3, hpz).is_zero()

    def test_no_time_jets_in_system(self, hpz):
        vf = field3(tfun("a"), tfun("b") * X, tfun("c"), tfun("f") * U)
        system = determining_equations(vf, hpz)
        for factors, coeff in system.by_jet:
            for base, _ in factors:
                assert "t" not in base.idx
