""" Registry of the time-space fractional equations whose invariant subspaces are studied.

Operators are built for a concrete space order β because the orders of their sequential derivatives (β, β+1 and
β+2) depend on it. Polynomial coefficient lists are addressed as `a[i]` / `b[i]`, so `a = [a0, a1, ..., an]`.
"""

from __future__ import annotations

import dataclasses
import typing as t

from fracsub.errors import UnknownFamily
from fracsub.fracderiv import DerivKind
from fracsub.parameters import Params, ParamValue, copy_params, indexed, scalar, vector
from fracsub.subspace import Factor, Field, OperatorSpec, SeqDeriv, Term

Components = t.Tuple[t.Tuple[Term, ...], ...]


def _u(q: int = 0, power: int = 1) -> tuple[Factor, ...]:
    return (Field(q),) * power


def _d(q: int, *orders: float) -> SeqDeriv:
    return SeqDeriv(q, tuple(orders))


def _terms(*terms: Term) -> tuple[Term, ...]:
    return tuple(term for term in terms if term.coefficient != 0.0)


def _diffusion_convection(params: Params, beta: float) -> Components:
    """[Σ r a_r u^(r-1)](D u)² + [Σ a_r u^r] D(D u) - [Σ (r+1) b_(r+1) u^r] D u"""

    a = vector(params, "a")
    n = len(a) - 1
    d, dd = _d(0, beta), _d(0, beta, beta)
    terms = [Term(r * a[r], _u(0, r - 1) + (d, d)) for r in range(1, n + 1)]
    terms += [Term(a[r], _u(0, r) + (dd,)) for r in range(n + 1)]
    terms += [Term(-(r + 1) * indexed(params, "b", r + 1), _u(0, r) + (d,)) for r in range(n + 1)]
    return (_terms(*terms),)


def _fe1(params: Params, beta: float) -> Components:
    a0, a1, b1, k = (scalar(params, name) for name in ("a0", "a1", "b1", "k"))
    d, dd = _d(0, beta), _d(0, beta, beta)
    return (
        _terms(
            Term(a1, (d, d)),
            Term(a1, (Field(0), dd)),
            Term(a0, (dd,)),
            Term(2 * k * a1, (Field(0), d)),
            Term(-b1, (d,)),
        ),
    )


def _re1(params: Params, beta: float) -> Components:
    return (_terms(Term(scalar(params, "a0"), (_d(0, beta, beta),)), Term(-scalar(params, "b1"), (_d(0, beta),))),)


def _re5(params: Params, beta: float) -> Components:
    a1, b2 = scalar(params, "a1"), scalar(params, "b2")
    d = _d(0, beta)
    return (_terms(Term(a1, (d, d)), Term(a1, (Field(0), _d(0, beta, beta))), Term(-b2, (Field(0), d))),)


def _re9(params: Params, beta: float) -> Components:
    d = _d(0, beta)
    return (_terms(Term(1.0, (d, d)), Term(1.0, (Field(0), _d(0, beta, beta)))),)


def _burgers(params: Params, beta: float) -> Components:
    return (_terms(Term(1.0, (_d(0, beta, beta),)), Term(1.0, (Field(0), _d(0, beta)))),)


def _reaction_diffusion(params: Params, beta: float) -> Components:
    """[Σ a_i u^i] D^(β+1) u + Σ b_i u^i"""

    a = vector(params, "a")
    n = len(a) - 1
    d1 = _d(0, beta + 1.0)
    terms = [Term(a[i], _u(0, i) + (d1,)) for i in range(n + 1)]
    terms += [Term(indexed(params, "b", i), _u(0, i)) for i in range(n + 2)]
    return (_terms(*terms),)


def _eqsr7(params: Params, beta: float) -> Components:
    a1, b1, b2 = (scalar(params, name) for name in ("a1", "b1", "b2"))
    return (_terms(Term(a1, (Field(0), _d(0, beta + 1.0))), Term(b2, _u(0, 2)), Term(b1, _u(0))),)


def _eqsr8(params: Params, beta: float) -> Components:
    k, b0 = scalar(params, "k"), scalar(params, "b0")
    return (_terms(Term(1.0, (Field(0), _d(0, beta + 1.0))), Term(-k, _u(0)), Term(b0)),)


def _eqsr9(params: Params, beta: float) -> Components:
    return (_terms(Term(scalar(params, "c"), (_d(0, beta + 1.0),)), Term(-scalar(params, "k"), _u(0))),)


def _eqsr10(params: Params, beta: float) -> Components:
    return (_terms(Term(scalar(params, "c"), (_d(0, beta + 1.0),))),)


def _diffusion_source(params: Params, beta: float) -> Components:
    """[Σ i a_i u^(i-1)](D u)² + [Σ a_i u^i] D(D u) + Σ_(i≥1) b_i u^i"""

    a = vector(params, "a")
    n = len(a) - 1
    d, dd = _d(0, beta), _d(0, beta, beta)
    terms = [Term(i * a[i], _u(0, i - 1) + (d, d)) for i in range(1, n + 1)]
    terms += [Term(a[i], _u(0, i) + (dd,)) for i in range(n + 1)]
    terms += [Term(indexed(params, "b", i), _u(0, i)) for i in range(1, n + 2)]
    return (_terms(*terms),)


def _ds7(params: Params, beta: float) -> Components:
    a0, b0, b1 = (scalar(params, name) for name in ("a0", "b0", "b1"))
    return (_terms(Term(a0, (_d(0, beta, beta),)), Term(b1, _u(0)), Term(b0)),)


def _ds8(params: Params, beta: float) -> Components:
    a0, b1 = scalar(params, "a0"), scalar(params, "b1")
    return (_terms(Term(a0, (_d(0, beta, beta),)), Term(b1, _u(0))),)


def _ds9(params: Params, beta: float) -> Components:
    a0, a1, b0, b1 = (scalar(params, name) for name in ("a0", "a1", "b0", "b1"))
    d, dd = _d(0, beta), _d(0, beta, beta)
    return (
        _terms(Term(a1, (d, d)), Term(a1, (Field(0), dd)), Term(a0, (dd,)), Term(b1, _u(0)), Term(b0)),
    )


def _cc1(params: Params, beta: float) -> Components:
    mu, rho, lam, gam, delta = (scalar(params, name) for name in ("mu", "rho", "lam", "gam", "delta"))
    dd1, dd2 = _d(0, beta, beta), _d(1, beta, beta)
    return (
        _terms(
            Term(1.0, (dd1,)),
            Term(mu, (Field(1), dd1)),
            Term(mu + rho, (_d(0, beta), _d(1, beta))),
            Term(rho, (Field(0), dd2)),
        ),
        _terms(Term(1.0, (dd2,)), Term(lam, (dd1,)), Term(gam, _u(0)), Term(delta, _u(1))),
    )


def _eqc1(params: Params, beta: float) -> Components:
    return (
        _terms(Term(1.0, (_d(1, beta),))),
        _terms(Term(-1.0, (Field(0), _d(0, beta)))),
    )


def _gkdv(params: Params, beta: float) -> Components:
    d3 = [_d(q, beta + 2.0) for q in range(3)]
    d = [_d(q, beta) for q in range(3)]
    return (
        _terms(
            Term(0.5, (d3[0],)),
            Term(-3.0, (Field(0), d[0])),
            Term(3.0, (Field(2), d[1])),
            Term(3.0, (Field(1), d[2])),
        ),
        _terms(Term(-1.0, (d3[1],)), Term(3.0, (Field(0), d[1]))),
        _terms(Term(-1.0, (d3[2],)), Term(3.0, (Field(0), d[2]))),
    )


@dataclasses.dataclass(frozen=True)
class Equation:
    id: str
    title: str
    build: t.Callable[[Params, float], Components]
    defaults: t.Mapping[str, ParamValue] = dataclasses.field(default_factory=dict)
    time_kind: DerivKind = DerivKind.CAPUTO

    def operator(self, params: Params | None = None, beta: float = 1.0) -> OperatorSpec:
        """Builds the operator with *params* layered over the defaults."""

        merged = copy_params(self.defaults)
        merged.update(copy_params(params or {}))
        return OperatorSpec(self.id, self.build(merged, beta), merged, time_kind=self.time_kind)


EQUATIONS: dict[str, Equation] = {
    eq.id: eq
    for eq in [
        Equation(
            "E2", "polynomial diffusion-convection", _diffusion_convection, {"a": [1.0, 1.0], "b": [0.0, 1.0, 1.0]}
        ),
        Equation(
            "FE1", "diffusion-convection with quadratic convection", _fe1, {"a0": 0.0, "a1": 2.0, "b1": 1.0, "k": 1.0}
        ),
        Equation("RE1", "linear diffusion-convection", _re1, {"a0": 1.0, "b1": 1.0}),
        Equation("RE5", "nonlinear diffusion-convection", _re5, {"a1": 0.5, "b2": 1.0}),
        Equation("RE9", "nonlinear diffusion", _re9),
        Equation("burgers", "Burgers", _burgers),
        Equation(
            "eqsr2", "polynomial reaction-diffusion", _reaction_diffusion, {"a": [1.0, 1.0], "b": [0.0, 1.0, 1.0]}
        ),
        Equation("eqsr7", "quadratic reaction-diffusion", _eqsr7, {"a1": 1.0, "b1": 1.0, "b2": 1.0}),
        Equation("eqsr8", "reaction-diffusion with source", _eqsr8, {"k": 1.0, "b0": 1.0}),
        Equation("eqsr9", "linear reaction-diffusion", _eqsr9, {"c": 1.0, "k": 1.0}),
        Equation("eqsr10", "linear sub-diffusion", _eqsr10, {"c": 1.0}),
        Equation(
            "DS2", "diffusion with polynomial source", _diffusion_source, {"a": [1.0, 1.0], "b": [0.0, 1.0, -2.0]}
        ),
        Equation("DS7", "linear diffusion with affine source", _ds7, {"a0": 1.0, "b0": 1.0, "b1": 1.0}),
        Equation("DS8", "linear diffusion with linear source", _ds8, {"a0": 1.0, "b1": 1.0}),
        Equation("DS9", "nonlinear diffusion with affine source", _ds9, {"a0": 1.0, "a1": 1.0, "b0": 1.0, "b1": 1.0}),
        Equation(
            "cc1",
            "coupled diffusion system",
            _cc1,
            {"mu": -1.0, "rho": 1.0, "lam": 1.0, "gam": -1.0, "delta": 1.0},
        ),
        Equation("eqc1", "transonic gas flow system", _eqc1),
        Equation("gkdv", "generalized Hirota-Satsuma KdV system", _gkdv, time_kind=DerivKind.RIEMANN_LIOUVILLE),
    ]
}


def get_equation(equation_id: str) -> Equation:
    try:
        return EQUATIONS[equation_id]
    except KeyError:
        raise UnknownFamily(f"unknown equation {equation_id!r} (known: {', '.join(EQUATIONS)})")
