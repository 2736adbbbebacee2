import math

import numpy as np
import pytest

from fracsub.catalog import list_families, lookup
from fracsub.equations import get_equation
from fracsub.errors import ConfigurationError, DegenerateBasis, NoClosedRule, NotInvariant
from fracsub.fracderiv import Constant, FracOrder, MLExp, Power
from fracsub.parameters import perturb
from fracsub.subspace import (
    DEFAULT_X_POINTS,
    Condition,
    SubspaceSpec,
    apply_operator,
    check_invariance,
    parse_subspace,
    reduce_to_fode,
)

BETA = 0.6


def test__check_invariance__linear_operator_keeps_mittag_leffler_span() -> None:
    op = get_equation("RE1").operator({"a0": 1.0, "b1": 2.0}, BETA)
    ss = SubspaceSpec(((Constant(), Power(BETA), MLExp(BETA, 0.5)),))
    report = check_invariance(op, ss, trials=5, seed=3)
    assert report.invariant
    assert report.max_fit_residual < 1e-10
    assert report.trials == 5


def test__check_invariance__detects_a_missing_direction() -> None:
    op = get_equation("E2").operator({"a": [1.0, 1.0], "b": [0.0, 1.0, 1.0]}, BETA)
    ss = SubspaceSpec(((Constant(), Power(2 * BETA)),))
    report = check_invariance(op, ss)
    assert not report.invariant
    assert report.max_fit_residual > 1e-3


def test__check_invariance__is_unaffected_by_rescaling_the_basis() -> None:
    op = get_equation("RE5").operator({"a1": 0.5, "b2": 1.0}, BETA)
    ss = SubspaceSpec(((Constant(), Power(BETA)),))
    assert check_invariance(op, ss).invariant
    assert check_invariance(op, ss.scaled(3.0)).invariant


def test__check_invariance__argument_validation() -> None:
    op = get_equation("RE1").operator({}, BETA)
    ss = SubspaceSpec(((Constant(), Power(BETA)),))
    with pytest.raises(ValueError):
        check_invariance(op, ss, trials=0)
    with pytest.raises(ValueError):
        check_invariance(op, ss, x_points=[0.5, 1.0])
    with pytest.raises(ValueError):
        check_invariance(op, ss, x_points=np.linspace(0.0, 2.0, 20))
    with pytest.raises(DegenerateBasis):
        check_invariance(op, SubspaceSpec(((Constant(), Constant()),)))


def test__check_invariance__reports_violated_conditions() -> None:
    op = get_equation("RE1").operator({"a0": 1.0, "b1": 2.0}, BETA)
    ss = SubspaceSpec(((Constant(), Power(BETA)),))
    condition = Condition("b1 = 1", lambda p, order: float(p["b1"]) - 1.0, knob="b1")
    report = check_invariance(op, ss, conditions=[condition], order=FracOrder(0.5, BETA))
    assert report.violated_conditions == ("b1 = 1",)
    with pytest.raises(ValueError):
        check_invariance(op, ss, conditions=[condition])


def test__apply_operator__raises_outside_the_closed_rules() -> None:
    op = get_equation("RE1").operator({}, BETA)
    ss = SubspaceSpec(((MLExp(0.9, 1.0),),))
    with pytest.raises(NoClosedRule):
        apply_operator(op, ss, [[1.0]], DEFAULT_X_POINTS)
    with pytest.raises(ValueError):
        apply_operator(op, SubspaceSpec(((Constant(), Power(BETA)),)), [[1.0]], DEFAULT_X_POINTS)


def test__apply_operator__evaluates_a_linear_operator() -> None:
    op = get_equation("RE1").operator({"a0": 1.0, "b1": 2.0}, BETA)
    ss = SubspaceSpec(((Constant(), Power(BETA)),))
    (values,) = apply_operator(op, ss, [[4.0, 3.0]], DEFAULT_X_POINTS)
    np.testing.assert_allclose(values, -2.0 * 3.0 * math.gamma(BETA + 1))


def test__reduce_to_fode__linear_system() -> None:
    op = get_equation("RE1").operator({"a0": 1.0, "b1": 1.0}, BETA)
    system = reduce_to_fode(op, SubspaceSpec(((Constant(), Power(BETA)),)), alpha=0.5)
    assert system.dimension == 2
    assert system.rhs.is_affine
    np.testing.assert_allclose(system.rhs([1.0, 2.0]), [-2.0 * math.gamma(BETA + 1), 0.0], atol=1e-9)


def test__reduce_to_fode__quadratic_system() -> None:
    op = get_equation("RE5").operator({"a1": 0.5, "b2": 1.0}, BETA)
    system = reduce_to_fode(op, SubspaceSpec(((Constant(), Power(BETA)),)), alpha=0.5)
    g = math.gamma(BETA + 1)
    a1, a2 = 1.0, 2.0
    expected = [0.5 * g**2 * a2**2 - g * a1 * a2, -g * a2**2]
    assert system.rhs.degree == 2
    np.testing.assert_allclose(system.rhs([a1, a2]), expected, rtol=1e-8)


def test__reduce_to_fode__rejects_non_invariant_pairs() -> None:
    op = get_equation("E2").operator({"a": [1.0, 1.0], "b": [0.0, 1.0, 1.0]}, BETA)
    with pytest.raises(NotInvariant):
        reduce_to_fode(op, SubspaceSpec(((Constant(), Power(2 * BETA)),)), alpha=0.5)


def test__parse_subspace__basis_items() -> None:
    ss = parse_subspace("1, x^b, E_b(-k*x^b)", BETA, {"k": 2.0})
    assert ss.components == ((Constant(), Power(BETA), MLExp(BETA, -2.0)),)
    ss = parse_subspace("1, x^(b+1)", BETA)
    assert ss.components == ((Constant(), Power(BETA + 1)),)
    ss = parse_subspace("1, x^β; E_(b+1)(0.5·x^(b+1))", BETA)
    assert ss.dimensions == (2, 1)
    assert ss.components[1] == (MLExp(BETA + 1, 0.5),)


@pytest.mark.parametrize("text", ["E_b(2*x^(b+1))", "sin(x)", "1;;x^b", "E_b(q*x^b)"])
def test__parse_subspace__rejects_malformed_text(text: str) -> None:
    with pytest.raises(ConfigurationError):
        parse_subspace(text, BETA, {})


@pytest.mark.parametrize("seed", [0, 11, 2024])
def test__check_invariance__same_seed_gives_the_same_report(seed: int) -> None:
    op = get_equation("E2").operator({"a": [1.0, 1.0], "b": [0.0, 1.0, 1.0]}, BETA)
    for ss in (SubspaceSpec(((MLExp(BETA, 1.0),),)), SubspaceSpec(((Constant(), Power(2 * BETA)),))):
        first = check_invariance(op, ss, trials=4, seed=seed)
        assert check_invariance(op, ss, trials=4, seed=seed) == first
        assert first.seed == seed


@pytest.mark.parametrize("seed", [0, 11, 2024])
def test__reduce_to_fode__same_seed_gives_the_same_system(seed: int) -> None:
    op = get_equation("RE5").operator({"a1": 0.5, "b2": 1.0}, BETA)
    ss = SubspaceSpec(((Constant(), Power(BETA)),))
    first = reduce_to_fode(op, ss, alpha=0.5, seed=seed)
    second = reduce_to_fode(op, ss, alpha=0.5, seed=seed)
    assert first == second
    assert first.rhs.format() == second.rhs.format()


def _guarded_conditions() -> list:
    cases = []
    for family in list_families():
        for condition in family.conditions_for(family.params()):
            if condition.knob is not None:
                cases.append(pytest.param(family.id, condition.name, id=f"{family.id}:{condition.knob}"))
    return cases


@pytest.mark.parametrize("family_id,condition_name", _guarded_conditions())
def test__check_invariance__shifting_a_condition_knob_breaks_invariance(family_id: str, condition_name: str) -> None:
    family = lookup(family_id)
    params, order = family.params(), family.resolve_order()
    (condition,) = [c for c in family.conditions_for(params) if c.name == condition_name]
    assert condition.knob is not None
    assert check_invariance(family.operator(params, order), family.subspace(params, order)).invariant

    broken = perturb(params, condition.knob, 0.5)
    report = check_invariance(family.operator(broken, order), family.subspace(broken, order),
                              conditions=family.conditions_for(broken), order=order)  # fmt: skip
    assert not report.invariant
    assert condition_name in report.violated_conditions
