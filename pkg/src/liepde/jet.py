"""Jet coordinates, total derivatives and evolution equations.

An :class:`EvolutionPDE` is a scalar equation solved for the first time
derivative, ``u_t = F(t, spatial variables, u, spatial jets)``, with F at
most second order.  Total derivatives act on jet expressions; when a PDE is
supplied, time-derivative jets are eliminated through the equation and its
total derivatives, which is what restricting to the solution manifold means
here.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as ex
from .expr import Atom, Expr, ExprError, Jet

__all__ = [
    "EvolutionPDE", "StationaryEquation", "JetOrderError",
    "make_hpz", "make_heat", "total_derivative", "eliminate_time_jets",
    "equation_names", "get_equation",
]

MAX_JET_ORDER = 3


class JetOrderError(ExprError):
    """A total derivative would create a jet above the supported order."""


@dataclass(frozen=True)
class EvolutionPDE:
    """u_t = rhs with rhs free of time jets and at most second order."""

    variables: tuple[str, ...]
    dependent: str
    rhs: Expr

    def __post_init__(self):
        if self.variables[0] != "t":
            raise ExprError("the first independent variable must be t")
        if self.dependent not in ex.DEPENDENT_NAMES:
            raise ExprError(f"unknown dependent symbol {self.dependent!r}")
        for j in ex.jets_of(self.rhs):
            if j.dep != self.dependent:
                raise ExprError(f"foreign dependent symbol {j.dep!r} in rhs")
            if "t" in j.idx:
                raise ExprError("rhs must not contain time-derivative jets")
            if j.order > 2:
                raise ExprError("rhs must be at most second order")
            if any(v not in self.variables for v in j.idx):
                raise ExprError(f"jet {j} uses a variable outside {self.variables}")

    @property
    def spatial(self) -> tuple[str, ...]:
        return self.variables[1:]

    @property
    def lhs_jet(self) -> Jet:
        return Jet(self.dependent, ("t",))

    def spatial_order(self) -> int:
        return max((j.order for j in ex.jets_of(self.rhs)), default=0)

    def is_autonomous(self) -> bool:
        return "t" not in ex.atoms_of(self.rhs)

    def residual_expr(self) -> Expr:
        """u_t - rhs; zero on solutions."""
        return ex.jet(self.dependent, ("t",)) - self.rhs

    def render(self) -> str:
        return f"{self.dependent}_t = {ex.to_text(self.rhs)}"


@dataclass(frozen=True)
class StationaryEquation:
    """lhs = 0 in the spatial variables only (produced by time reduction)."""

    variables: tuple[str, ...]
    dependent: str
    lhs: Expr

    def render(self) -> str:
        return f"{ex.to_text(self.lhs)} = 0"


def make_hpz() -> EvolutionPDE:
    """Constant-parameter Hu-Paz-Zhang master equation over (t, x, y)."""
    u, u_x, u_y = ex.U, ex.jet("u", "x"), ex.jet("u", "y")
    u_xx, u_xy = ex.jet("u", "xx"), ex.jet("u", "xy")
    rhs = (ex.R * u - ex.X * u_y + ex.R * ex.X * u_x + ex.S * ex.Y * u_x
           + ex.V * u_xy + ex.W * u_xx)
    return EvolutionPDE(("t", "x", "y"), "u", rhs)


def make_heat() -> EvolutionPDE:
    """Classical heat equation u_t = u_xx, the (1+1) control case."""
    return EvolutionPDE(("t", "x"), "u", ex.jet("u", "xx"))


def total_derivative(e: Expr, v: str, pde: EvolutionPDE | None = None) -> Expr:
    """Total derivative D_v, optionally on the solution manifold of ``pde``.

    D_v e = de/dv + sum_J u_{J+v} * de/du_J.  With a PDE supplied, time jets
    are eliminated before and after differentiating.
    """
    if v not in ex.VARIABLE_NAMES:
        raise ExprError(f"total derivative direction must be one of {ex.VARIABLE_NAMES}")
    if pde is not None:
        e = eliminate_time_jets(e, pde)
    out = ex.partial(e, Atom(v))
    for j in sorted(ex.jets_of(e), key=lambda j: (j.order, j.idx)):
        de = ex.partial(e, j)
        if de.is_zero:
            continue
        if j.order + 1 > MAX_JET_ORDER:
            raise JetOrderError(
                f"D_{v} of {ex.base_label(j)} exceeds jet order {MAX_JET_ORDER}")
        lifted = tuple(sorted(j.idx + (v,), key=ex.VARIABLE_NAMES.index))
        out = out + ex.jet(j.dep, lifted) * de
    if pde is not None:
        out = eliminate_time_jets(out, pde)
    return out


def _time_jet_rule(j: Jet, pde: EvolutionPDE) -> Expr:
    """Manifold value of a time jet: u_{K+t} = D_K(rhs), K the index minus one t."""
    rest = list(j.idx)
    rest.remove("t")
    value = pde.rhs
    for v in rest:
        if v == "t":
            # inner time derivative: replace after the spatial ones, recursively
            value = total_derivative(value, "t")
            value = eliminate_time_jets(value, pde)
        else:
            value = total_derivative(value, v)
    return value


def eliminate_time_jets(e: Expr, pde: EvolutionPDE) -> Expr:
    """Substitute every time-derivative jet via the equation.

    Fixed elimination order: u_t first, then mixed second-order time jets,
    then u_tt (whose replacement is cleaned recursively), then third order.
    """
    for _ in range(8):
        time_jets = sorted(
            (j for j in ex.jets_of(e)
             if j.dep == pde.dependent and "t" in j.idx),
            key=lambda j: (j.order, j.idx.count("t"), j.idx))
        if not time_jets:
            return e
        j = time_jets[0]
        e = ex.subst_many(e, {j: _time_jet_rule(j, pde)})
    raise ExprError("time-jet elimination did not terminate")


# ---------------------------------------------------------------------------
# equation registry
# ---------------------------------------------------------------------------

_REDUCED = {
    "reduced-3.2": "delta3",
    "reduced-3.5": "delta4",
    "reduced-3.7": "delta5",
    "reduced-3.9": "delta6",
}


def equation_names() -> tuple[str, ...]:
    return ("hpz", "heat") + tuple(_REDUCED) + ("stationary-2.6",)


def get_equation(name: str) -> EvolutionPDE | StationaryEquation:
    """Look up a named equation; reduced ones are derived on the fly."""
    if name == "hpz":
        return make_hpz()
    if name == "heat":
        return make_heat()
    if name in _REDUCED:
        from . import reduction
        from . import fixtures
        vf = fixtures.paper_generator(_REDUCED[name])
        rmap = reduction.invariants_for(vf)
        return reduction.reduce_pde(make_hpz(), rmap).equation
    if name == "stationary-2.6":
        from . import reduction
        return reduction.reduce_time(make_hpz())
    raise ExprError(
        f"unknown equation {name!r}; known names: {', '.join(equation_names())}")
