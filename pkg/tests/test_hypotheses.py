# -*- coding: utf-8 -*-
"""tests for the dinc.hypotheses module"""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dinc.errors import (DimensionMismatch, HypothesisNotSatisfied,
                         InternalConsistencyError, NonpositivePotential,
                         OutOfRange, UndeclaredAsymptotics)
from dinc.hypotheses import (_agree, check_fourth_order_corollary, check_g1,
                             check_g2, check_h_conditions, corollary_interval,
                             corollary_prefactor, lambda_interval,
                             optimize_threshold, specialize_fourth_order,
                             specialize_grid, specialize_tridiagonal,
                             weighted_nonlinearities)
from dinc.matrices import GridShape, build_grid_laplacian, build_second_order
from dinc.nonlinearity import (AsymptoticBound, PiecewiseNonlinearity,
                               WeightVector, linear, truncated_power)
from tests.conftest import truncated_quadratic

LAMBDA_1_T5 = 2 - math.sqrt(3)


def test_check_g1_chain(h):
    """T_5(-1, 2, -1) with gamma=0.01 and delta=1"""
    report = check_g1(build_second_order(5), [h] * 5, 0.01, 1.0)
    assert report.lambda_1 == pytest.approx(LAMBDA_1_T5)
    assert report.ones_quadratic == 2.0
    assert report.delta_lower_bound == pytest.approx(math.sqrt(LAMBDA_1_T5 / 2) * 0.01)
    assert report.g1_lhs == pytest.approx(5 * 0.01 / 3)
    assert report.g1_rhs == pytest.approx(LAMBDA_1_T5 / 2 * 5 / 3)
    assert report.g2_margin == pytest.approx(LAMBDA_1_T5 / 2)
    assert report.satisfied
    assert report.lambda_interval.left == pytest.approx(0.6)
    assert report.lambda_interval.right == pytest.approx(30 * LAMBDA_1_T5)
    assert report.lambda_interval.right == pytest.approx(8.04, abs=5e-3)


def test_check_g1_fails_for_wide_gamma(h):
    report = check_g1(build_second_order(5), [h] * 5, 1.0, 1.0)
    assert not report.satisfied
    assert report.lambda_interval.is_empty
    with pytest.raises(HypothesisNotSatisfied):
        lambda_interval(build_second_order(5), [h] * 5, 1.0, 1.0)
    assert lambda_interval(build_second_order(5), [h] * 5, 1.0, 1.0, strict=False).is_empty


def test_check_g1_validation(h):
    A = build_second_order(2)
    with pytest.raises(OutOfRange):
        check_g1(A, [h, h], 0.0, 1.0)
    with pytest.raises(DimensionMismatch):
        check_g1(A, [h], 0.1, 1.0)


def test_check_g1_without_declaration():
    """an undeclared g leaves g2 unchecked and the report unsatisfied"""
    g = truncated_power(2)
    report = check_g1(build_second_order(2), [g, g], 0.01, 1.0)
    assert report.g2_margin is None
    assert not report.satisfied
    with pytest.raises(UndeclaredAsymptotics):
        check_g2(build_second_order(2), [g, g])


def test_check_g2_superquadratic():
    g = linear(2.0, AsymptoticBound(1.0))
    assert check_g2(build_second_order(2), [g, g]) == pytest.approx(0.5 - 1.0)


def test_lambda_interval_grid(h):
    """2x2 grid: lambda_1 = 2, 1^t B 1 = 8"""
    interval = lambda_interval(build_grid_laplacian(GridShape(2, 2)), [h] * 4, 0.01, 1.0)
    assert interval.left == pytest.approx(3.0)
    assert interval.right == pytest.approx(75.0)
    assert interval.auto_mid() == pytest.approx(39.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 0.9), st.floats(0.05, 3.0))
def test_interval_nonempty_iff_g1(gamma, delta):
    """the interval is nonempty exactly when the (g1) inequality holds"""
    h = truncated_quadratic()
    report = check_g1(build_second_order(5), [h] * 5, gamma, delta)
    interval = report.lambda_interval
    if abs(report.g1_lhs - report.g1_rhs) > 1e-9 * max(report.g1_lhs, report.g1_rhs):
        assert (interval.left < interval.right) == (report.g1_lhs < report.g1_rhs)


def test_scaling_g_scales_interval(h):
    """replacing g by c g divides both ends by c"""
    A = build_second_order(5)
    base = lambda_interval(A, [h] * 5, 0.01, 1.0)
    scaled = lambda_interval(A, [h.scaled(2.5)] * 5, 0.01, 1.0)
    assert scaled.left == pytest.approx(base.left / 2.5)
    assert scaled.right == pytest.approx(base.right / 2.5)


def test_corollary_threshold(h):
    """threshold 0.2 * delta^2 / H(delta) = 0.6 for T_5 and delta = 1"""
    A = build_second_order(5)
    report = check_h_conditions(h, WeightVector.ones(5), A, 1.0)
    assert report.threshold == pytest.approx(0.6)
    assert report.h_potential == pytest.approx(1 / 3)
    assert report.h1_ok and report.h2_ok and report.h3_ok
    assert report.satisfied
    assert report.optimized_threshold == pytest.approx(0.6, rel=1e-6)
    assert report.optimal_delta == pytest.approx(1.0, rel=1e-6)


def test_corollary_h1_fails_beyond_support(h):
    report = check_h_conditions(h, WeightVector.ones(5), build_second_order(5), 2.0)
    assert not report.h1_ok
    assert not report.satisfied
    assert report.threshold == pytest.approx(0.2 * 4 * 3)


def test_corollary_h2_fails():
    g = PiecewiseNonlinearity((-1.0, 1.0), ((0.0,), (0.0, 1.0), (0.0,)), AsymptoticBound(0.0, 1.0, 0.0))
    report = check_h_conditions(g, WeightVector.ones(2), build_second_order(2), 1.0)
    assert not report.h2_ok


def test_corollary_h3_fails():
    g = linear(1.0, AsymptoticBound(0.5, 1.0, 1.0))
    report = check_h_conditions(g, WeightVector.ones(5), build_second_order(5), 1.0)
    assert not report.h3_ok


def test_corollary_nonpositive_potential():
    g = linear(-1.0, AsymptoticBound(0.0, 1.0, 0.0))
    with pytest.raises(NonpositivePotential):
        check_h_conditions(g, WeightVector.ones(2), build_second_order(2), 1.0)
    with pytest.raises(NonpositivePotential):
        optimize_threshold(g, WeightVector.ones(2), build_second_order(2), [0.1, 10.0])


def test_optimize_threshold_interior_minimum():
    """h(t) = t on [-2, 2], 0 outside: delta^2 / H(delta) = 2 up to delta = 2"""
    g = PiecewiseNonlinearity((-2.0, 2.0), ((0.0,), (0.0, 1.0), (0.0,)))
    value = optimize_threshold(g, WeightVector.ones(2), build_second_order(2), [0.5, 10.0])
    assert value == pytest.approx(0.5 * 2.0)
    with pytest.raises(OutOfRange):
        optimize_threshold(g, WeightVector.ones(2), build_second_order(2), [])


def test_optimize_threshold_at_kink(h):
    """delta^2 / H(delta) = 3/delta inside the support, 3 delta^2 outside"""
    value = optimize_threshold(h, WeightVector.ones(5), build_second_order(5), [0.01, 100.0])
    assert value == pytest.approx(0.6, rel=1e-9)


def test_corollary_prefactor():
    A = build_second_order(5)
    assert corollary_prefactor(A, WeightVector.ones(5)) == pytest.approx(0.2)
    assert corollary_prefactor(A, WeightVector((1.0, 0.0, 0.0, 0.0, 1.0))) == pytest.approx(0.5)
    with pytest.raises(DimensionMismatch):
        corollary_prefactor(A, WeightVector.ones(2))


def test_corollary_interval(h):
    A = build_second_order(5)
    interval = corollary_interval(h, WeightVector.ones(5), A, 1.0, 0.01)
    assert interval.left == pytest.approx(0.6)
    assert interval.right == pytest.approx(30 * LAMBDA_1_T5)
    with pytest.raises(HypothesisNotSatisfied):
        corollary_interval(h, WeightVector.ones(5), A, 1.0, 10.0)


def test_weighted_nonlinearities(h):
    gs = weighted_nonlinearities(h, WeightVector((2.0, 0.0)))
    assert gs[0].eval(0.5) == 0.5
    assert gs[1].eval(0.5) == 0.0
    assert gs[1].asymptotic.c == 0.0
    with pytest.raises(DimensionMismatch):
        weighted_nonlinearities([h], WeightVector((1.0, 1.0)))


def test_specialize_tridiagonal(h):
    report = specialize_tridiagonal(5, -1.0, 2.5, [h] * 5, 0.01, 1.0)
    assert report.ones_quadratic == pytest.approx(2.5 * 5 - 2 * 4)
    assert report.lambda_1 == pytest.approx(2.5 - 2 * math.cos(math.pi / 6))


def test_specialize_fourth_order(h):
    report = specialize_fourth_order(9, [h] * 9, 1e-4, 1.0)
    assert report.ones_quadratic == 4.0
    assert report.lambda_interval.left == pytest.approx(2.0 / 3.0)
    assert report.satisfied
    assert specialize_fourth_order(1, [h], 0.01, 1.0).ones_quadratic == 6.0


def test_specialize_grid(h):
    report = specialize_grid(GridShape(2, 2), [h] * 4, 0.01, 1.0)
    assert report.lambda_1 == pytest.approx(2.0)
    assert report.delta_lower_bound == pytest.approx(0.005)
    assert report.lambda_interval.left == pytest.approx(3.0)


def test_agree():
    _agree('same', 1.0, 1.0 + 1e-14)
    with pytest.raises(InternalConsistencyError):
        _agree('different', 1.0, 1.001)


def test_fourth_order_corollary(h):
    """prefactor 2/T: threshold 2/9 * 3 at the kink delta = 1"""
    report = check_fourth_order_corollary(h, 9, (0.01, 100.0))
    assert report.optimized_threshold == pytest.approx(2.0 / 3.0, rel=1e-9)
    assert report.optimal_delta == pytest.approx(1.0)
    assert report.satisfied
