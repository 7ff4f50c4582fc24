"""Exact linear algebra: rational, polynomial and symbolic-field layers."""

from fractions import Fraction as Fr

import pytest

from liepde.expr import R, S, V, W
from liepde.linalg import (FieldFrac, RootExtractionError, f_nullspace,
                           f_rank, f_solve_unique, fraction_sqrt,
                           is_perfect_square, p_div_exact, p_eval, p_mul,
                           pencil_gram_poly, pencil_pivots, q_det,
                           q_nullspace, q_rank, q_solve,
                           rational_roots, sturm_root_count)


class TestRationalMatrices:
    def test_rank_and_nullspace(self):
        m = [[Fr(1), Fr(2), Fr(3)], [Fr(2), Fr(4), Fr(6)], [Fr(0), Fr(1), Fr(1)]]
        assert q_rank(m) == 2
        ns = q_nullspace(m)
        assert len(ns) == 1
        for row in m:
            assert sum(a * b for a, b in zip(row, ns[0])) == 0

    def test_solve(self):
        assert q_solve([[Fr(2), Fr(0)], [Fr(0), Fr(3)]], [Fr(4), Fr(9)]) == \
            [Fr(2), Fr(3)]
        assert q_solve([[Fr(1)], [Fr(1)]], [Fr(1), Fr(2)]) is None

    def test_det(self):
        assert q_det([[Fr(1), Fr(2)], [Fr(3), Fr(4)]]) == Fr(-2)
        assert q_det([[Fr(1), Fr(2)], [Fr(2), Fr(4)]]) == 0


class TestPolynomials:
    def test_roots_with_multiplicity_at_zero(self):
        p = p_mul((Fr(0), Fr(1)), p_mul((Fr(0), Fr(1)), (Fr(1), Fr(3))))
        assert rational_roots(p) == [Fr(-1, 3), Fr(0)]

    def test_irrational_roots_detected(self):
        with pytest.raises(RootExtractionError):
            rational_roots((Fr(-2), Fr(0), Fr(1)))  # x^2 - 2

    def test_complex_roots_are_fine(self):
        assert rational_roots((Fr(1), Fr(0), Fr(1))) == []  # x^2 + 1

    def test_non_strict_mode_tolerates(self):
        roots = rational_roots((Fr(-2), Fr(0), Fr(1)), strict=False)
        assert roots == []

    def test_sturm(self):
        assert sturm_root_count((Fr(-4), Fr(0), Fr(1))) == 2
        assert sturm_root_count((Fr(1), Fr(0), Fr(1))) == 0
        # squarefree handling: (x-1)^2
        assert sturm_root_count((Fr(1), Fr(-2), Fr(1))) == 1

    def test_exact_division(self):
        num = p_mul((Fr(-1), Fr(1)), (Fr(2), Fr(5)))
        assert p_div_exact(num, (Fr(-1), Fr(1))) == (Fr(2), Fr(5))


class TestPencil:
    def test_pivot_roots_cover_rank_drops(self):
        a = [[Fr(1), Fr(0)], [Fr(0), Fr(1)], [Fr(1), Fr(1)]]
        b = [[Fr(1), Fr(0)], [Fr(0), Fr(0)], [Fr(0), Fr(0)]]
        roots = set()
        for piv in pencil_pivots(a, b):
            roots.update(rational_roots(piv, strict=False))
        assert Fr(-1) in roots

    def test_gram_poly_roots_are_rank_drops(self):
        a = [[Fr(1), Fr(0)], [Fr(0), Fr(1)]]
        b = [[Fr(1), Fr(0)], [Fr(0), Fr(2)]]
        gram = pencil_gram_poly(a, b)
        # rank drops exactly at -1 and -1/2
        assert p_eval(gram, Fr(-1)) == 0
        assert p_eval(gram, Fr(-1, 2)) == 0
        assert p_eval(gram, Fr(1)) != 0


class TestPerfectSquares:
    def test_detection(self):
        assert is_perfect_square(Fr(9))
        assert is_perfect_square(Fr(9, 4))
        assert not is_perfect_square(Fr(8))
        assert fraction_sqrt(Fr(9, 4)) == Fr(3, 2)


class TestExpressionField:
    def test_solve_and_verify(self):
        m = [[R, S], [V, W]]
        rhs = [R * R + S * S, V * R + W * S]
        sol = f_solve_unique(m, rhs)
        assert (sol[0].num - R * sol[0].den).is_zero
        assert (sol[1].num - S * sol[1].den).is_zero

    def test_inconsistent_returns_none(self):
        assert f_solve_unique([[R], [S]], [R, R]) is None

    def test_rank_and_nullspace(self):
        assert f_rank([[R, S], [2 * R, 2 * S]]) == 1
        ns = f_nullspace([[R, S], [2 * R, 2 * S]])
        assert len(ns) == 1
        assert (R * ns[0][0] + S * ns[0][1]).is_zero

    def test_fieldfrac_arithmetic(self):
        a = FieldFrac(R, S)
        b = FieldFrac(V, W)
        s = a.add(b)
        assert (s.num - (R * W + V * S)).is_zero and (s.den - S * W).is_zero
        assert a.sub(a).is_zero
