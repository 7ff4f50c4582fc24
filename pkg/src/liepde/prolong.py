"""Second prolongation of point vector fields and determining equations.

A :class:`VectorField` is a point generator

    xi^t d/dt + xi^x d/dx (+ xi^y d/dy) + eta d/du

whose coefficients are jet-free expressions in the base variables and the
dependent symbol.  ``prolong2`` extends it to second-order jet space with
the characteristic formula

    eta^J = D_J(eta - sum_i xi^i u_i) + sum_i xi^i u_{J,i}

and ``residual`` applies the extended field to ``u_t - F`` and restricts to
the solution manifold: the result vanishes identically exactly when the
field is a Lie point symmetry of the evolution equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from . import expr as ex
from .expr import Atom, Expr, ExprError, Jet
from .jet import EvolutionPDE, eliminate_time_jets, total_derivative

__all__ = [
    "VectorField", "DeterminingSystem", "prolong2", "residual",
    "determining_equations",
]


@dataclass(frozen=True)
class VectorField:
    """Point generator with jet-free coefficients, aligned with ``variables``."""

    variables: tuple[str, ...]
    dependent: str
    xi: tuple[Expr, ...]
    eta: Expr

    def __post_init__(self):
        if len(self.xi) != len(self.variables):
            raise ExprError("one xi coefficient per independent variable")
        for c in self.coefficients():
            for j in ex.jets_of(c):
                if j.order >= 1:
                    raise ExprError(
                        "vector-field coefficients must be jet-free "
                        f"(found {ex.base_label(j)})")
                if j.dep != self.dependent:
                    raise ExprError(f"foreign dependent symbol {j.dep!r}")

    def coefficients(self) -> tuple[Expr, ...]:
        return self.xi + (self.eta,)

    def component(self, v: str) -> Expr:
        return self.xi[self.variables.index(v)]

    def apply_to(self, f: Expr) -> Expr:
        """First-order action on a jet-free function of the base variables."""
        out = ex.ZERO
        for v, c in zip(self.variables, self.xi):
            out = out + c * ex.partial(f, Atom(v))
        return out + self.eta * ex.partial(f, Jet(self.dependent, ()))

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coefficients())

    def scaled(self, factor) -> "VectorField":
        factor = ex.as_expr(factor)
        return VectorField(self.variables, self.dependent,
                           tuple(factor * c for c in self.xi),
                           factor * self.eta)

    def plus(self, other: "VectorField") -> "VectorField":
        if (other.variables, other.dependent) != (self.variables, self.dependent):
            raise ExprError("vector fields live on different spaces")
        return VectorField(self.variables, self.dependent,
                           tuple(a + b for a, b in zip(self.xi, other.xi)),
                           self.eta + other.eta)

    def render(self) -> dict[str, str]:
        out = {f"xi_{v}": ex.to_text(c) for v, c in zip(self.variables, self.xi)}
        out["eta"] = ex.to_text(self.eta)
        return out


def _multi_indices(variables: tuple[str, ...]) -> list[tuple[str, ...]]:
    first = [(v,) for v in variables]
    second = [tuple(sorted(c, key=ex.VARIABLE_NAMES.index))
              for c in combinations_with_replacement(variables, 2)]
    return first + second


def prolong2(vf: VectorField) -> dict[tuple[str, ...], Expr]:
    """Extended coefficients eta^J for 1 <= |J| <= 2 over the field's variables."""
    dep = vf.dependent
    characteristic = vf.eta
    for v, c in zip(vf.variables, vf.xi):
        characteristic = characteristic - c * ex.jet(dep, (v,))
    out: dict[tuple[str, ...], Expr] = {}
    for J in _multi_indices(vf.variables):
        value = characteristic
        for v in J:
            value = total_derivative(value, v)
        for v, c in zip(vf.variables, vf.xi):
            lifted = tuple(sorted(J + (v,), key=ex.VARIABLE_NAMES.index))
            value = value + c * ex.jet(dep, lifted)
        out[J] = value
    return out


def residual(vf: VectorField, pde: EvolutionPDE) -> Expr:
    """Prolonged action on u_t - F, restricted to the solution manifold.

    Zero iff the field is a Lie point symmetry of the equation.
    """
    if (vf.variables, vf.dependent) != (pde.variables, pde.dependent):
        raise ExprError("vector field and equation live on different spaces")
    theta = pde.rhs - ex.jet(pde.dependent, ("t",))
    extended = prolong2(vf)
    out = ex.ZERO
    for v, c in zip(vf.variables, vf.xi):
        out = out + c * ex.partial(theta, Atom(v))
    out = out + vf.eta * ex.partial(theta, Jet(vf.dependent, ()))
    for J, etaJ in extended.items():
        d = ex.partial(theta, Jet(vf.dependent, J))
        if not d.is_zero:
            out = out + etaJ * d
    return eliminate_time_jets(out, pde)


# ---------------------------------------------------------------------------
# determining equations
# ---------------------------------------------------------------------------

def _jet_key(e_factors) -> tuple:
    # graded lexicographic order on jet monomials: total degree, then the
    # fixed base order; keeps golden output stable
    degree = sum(p for _, p in e_factors)
    return (degree, tuple((ex._base_key(b), p) for b, p in e_factors))


@dataclass(frozen=True)
class DeterminingSystem:
    """Residual coefficients indexed by jet monomial, then by point monomial.

    ``by_jet`` maps each monomial in derivative jets (order >= 1) to its
    coefficient, an expression in the base variables, u, and the unknown
    t-functions.  The system vanishes identically iff the ansatz field is a
    symmetry.
    """

    pde: EvolutionPDE
    by_jet: tuple[tuple[tuple, Expr], ...]  # ((factors, coefficient), ...)

    def is_zero(self) -> bool:
        return all(c.is_zero for _, c in self.by_jet)

    def equations(self) -> list[tuple[str, str, Expr]]:
        """Flat list of (jet monomial, point monomial, equation) rows.

        Each coefficient is split further by monomials in the base variables
        and u; every row must vanish.  Rows are sorted by the graded-lex jet
        order, then by the point monomial.
        """
        rows: list[tuple[str, str, Expr]] = []
        point = ("x", "y", "r")

        def is_point(b) -> bool:
            return (isinstance(b, Atom) and b.name in point) or \
                (isinstance(b, Jet) and b.order == 0)

        for jet_factors, coeff in self.by_jet:
            jet_label = ex.factors_text(jet_factors)
            split = ex.split_terms(coeff, is_point)
            for mono in sorted(split, key=lambda fs: _jet_key(fs)):
                rows.append((jet_label, ex.factors_text(mono), split[mono]))
        return rows


def determining_equations(vf: VectorField, pde: EvolutionPDE) -> DeterminingSystem:
    """Collect the residual by jet monomials into a determining system."""
    res = residual(vf, pde)
    groups = ex.split_terms(
        res, lambda b: isinstance(b, Jet) and b.order >= 1)
    ordered = sorted(groups.items(), key=lambda kv: _jet_key(kv[0]))
    return DeterminingSystem(pde, tuple(ordered))
