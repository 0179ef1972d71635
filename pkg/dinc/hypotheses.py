# -*- coding: utf-8 -*-
"""Mechanical checks of the growth conditions behind the three solution
result, the admissible lambda interval they produce, and the two nontrivial
solution threshold for weighted problems ``alpha_k h``.

Each structured matrix family has a ``specialize_*`` entry point which runs
the generic checks on the assembled matrix and cross-checks them against the
closed forms known for that family.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dinc.core import STRICT_SLACK, Interval
from dinc.errors import (DimensionMismatch, HypothesisNotSatisfied,
                         InternalConsistencyError, NonpositivePotential,
                         OutOfRange, UndeclaredAsymptotics)
from dinc.matrices import (build_fourth_order, build_grid_laplacian,
                           build_tridiagonal, ones_quadratic,
                           tridiagonal_eigenvalue)
from dinc.mixins import JsonMixin
from dinc.nonlinearity import (AsymptoticBound, WeightVector,
                               asymptotic_linear_bound,
                               asymptotic_quadratic_bound, constant)
from dinc.utils import log_grid

__author__ = 'pydinc developers'
__all__ = ['HypothesisReport', 'CorollaryReport', 'check_g1', 'check_g2',
           'lambda_interval', 'check_h_conditions', 'optimize_threshold',
           'corollary_prefactor', 'corollary_interval',
           'weighted_nonlinearities', 'specialize_tridiagonal',
           'specialize_fourth_order', 'specialize_grid',
           'check_fourth_order_corollary']

logger = logging.getLogger(__name__)

#: Points per pass of the delta search
THRESHOLD_POINTS = 256

#: Refinement passes of the delta search after the initial one
THRESHOLD_ROUNDS = 2

#: Each refinement pass divides the log-width of the search window by this
THRESHOLD_SHRINK = 4.0

#: Default delta search window is [delta / span, delta * span]
DELTA_SPAN = 100.0


@dataclass(frozen=True)
class HypothesisReport(JsonMixin):
    """Outcome of the (g1)/(g2) checks for one (gamma, delta) pair.

    ``lambda_interval`` always holds the raw endpoints, even when empty.
    ``g2_margin`` is None when some nonlinearity declares no asymptotic bound.
    """
    gamma: float
    delta: float
    delta_lower_bound: float
    g1_lhs: float
    g1_rhs: float
    g2_margin: Optional[float]
    lambda_interval: Interval
    satisfied: bool
    lambda_1: float
    ones_quadratic: float


@dataclass(frozen=True)
class CorollaryReport(JsonMixin):
    """Outcome of the (h1)-(h3) checks and the lambda threshold above which
    two nontrivial solutions exist
    """
    delta: float
    threshold: float
    h1_ok: bool
    h2_ok: bool
    h3_ok: bool
    optimized_threshold: float
    optimal_delta: float
    h_potential: float

    @property
    def satisfied(self):
        return self.h1_ok and self.h2_ok and self.h3_ok


def _positive(name, value):
    if not value > 0:
        raise OutOfRange(f'{name} must be positive, got {value}')


def _check_length(A, gs):
    if len(gs) != A.order:
        raise DimensionMismatch(f'{len(gs)} nonlinearities for order {A.order}')


def _endpoints(ones, lambda_1, gamma, delta, potential_sum, sup_sum):
    left = ones / 2.0 * delta ** 2 / potential_sum if potential_sum > 0 else math.inf
    right = lambda_1 / 2.0 * gamma ** 2 / sup_sum if sup_sum > 0 else math.inf
    return Interval(left, right)


def check_g2(A, gs):
    """lambda_1 / 2 minus the largest declared bound on G_k(t)/t^2; positive
    when (g2) holds

    :raises UndeclaredAsymptotics: if any g_k declares no bound
    """
    _check_length(A, gs)
    return A.lambda_min / 2.0 - max(asymptotic_quadratic_bound(g) for g in gs)


def check_g1(A, gs, gamma, delta):
    """Evaluate (g1) and (g2) for the pair (gamma, delta) and the interval
    they produce

    :param A: :class:`~dinc.matrices.SpdMatrix` of order T
    :param gs: T nonlinearities
    :return: :class:`HypothesisReport`
    """
    _positive('gamma', gamma)
    _positive('delta', delta)
    _check_length(A, gs)
    lambda_1, ones = A.lambda_min, ones_quadratic(A)
    sup_sum = math.fsum(g.sup_potential(gamma) for g in gs)
    potential_sum = math.fsum(g.potential(delta) for g in gs)
    g1_lhs = sup_sum / gamma ** 2
    g1_rhs = lambda_1 / ones * potential_sum / delta ** 2
    delta_lower_bound = math.sqrt(lambda_1 / ones) * gamma
    try:
        g2_margin = check_g2(A, gs)
    except UndeclaredAsymptotics as e:
        logger.info('(g2) not checked: %s', e)
        g2_margin = None

    satisfied = (delta > delta_lower_bound and g1_lhs < g1_rhs
                 and g2_margin is not None and g2_margin > 0)
    interval = _endpoints(ones, lambda_1, gamma, delta, potential_sum, sup_sum)
    logger.debug('g1: lhs=%g rhs=%g delta_lb=%g g2=%s -> %s',
                 g1_lhs, g1_rhs, delta_lower_bound, g2_margin, satisfied)
    return HypothesisReport(gamma, delta, delta_lower_bound, g1_lhs, g1_rhs,
                            g2_margin, interval, satisfied, lambda_1, ones)


def lambda_interval(A, gs, gamma, delta, strict=True):
    """Lambda = ]ones/2 delta^2 / sum G_k(delta), lambda_1/2 gamma^2 / sum sup G_k[

    :param strict: raise instead of returning an empty interval
    :raises HypothesisNotSatisfied: if the interval is empty and *strict*
    """
    report = check_g1(A, gs, gamma, delta)
    interval = report.lambda_interval
    if interval.is_empty and strict:
        raise HypothesisNotSatisfied(
            f'empty interval ]{interval.left:g}, {interval.right:g}[')
    return interval


def corollary_prefactor(A, alpha):
    """(trace(A)/2 + sum_{i<j} a_ij) / sum_k alpha_k"""
    if len(alpha) != A.order:
        raise DimensionMismatch(f'{len(alpha)} weights for order {A.order}')
    return ones_quadratic(A) / 2.0 / alpha.total


def _h2_holds(h):
    coef = h.segment(h.segment_index(0.0)).coef
    return coef[0] == 0 and (len(coef) < 2 or coef[1] == 0)


def _ratio(h, deltas):
    """delta^2 / H(delta), inf where H(delta) <= 0"""
    deltas = np.asarray(deltas, dtype=float)
    H = h.potential_many(deltas)
    with np.errstate(divide='ignore'):
        return np.where(H > 0, deltas ** 2 / np.where(H > 0, H, 1.0), math.inf)


def _minimize_ratio(h, delta_grid):
    grid = np.asarray(delta_grid, dtype=float).reshape(-1)
    if not grid.size or np.any(grid <= 0) or not np.all(np.isfinite(grid)):
        raise OutOfRange('delta grid must be a nonempty list of positive reals')
    lo, hi = float(grid.min()), float(grid.max())
    kinks = [t for t in h.breakpoints if lo <= t <= hi]
    points = np.concatenate([log_grid(lo, hi, THRESHOLD_POINTS), grid, kinks])
    values = _ratio(h, points)
    best = int(np.argmin(values))
    best_delta, best_value = float(points[best]), float(values[best])
    if not math.isfinite(best_value):
        raise NonpositivePotential(f'H(delta) <= 0 on the whole grid [{lo:g}, {hi:g}]')

    half_width = 0.5 * math.log(hi / lo)
    for _ in range(THRESHOLD_ROUNDS):
        half_width /= THRESHOLD_SHRINK
        window = (max(lo, best_delta * math.exp(-half_width)),
                  min(hi, best_delta * math.exp(half_width)))
        points = log_grid(window[0], window[1], THRESHOLD_POINTS)
        values = _ratio(h, points)
        i = int(np.argmin(values))
        if values[i] < best_value:
            best_delta, best_value = float(points[i]), float(values[i])
    return best_delta, best_value


def optimize_threshold(h, alpha, A, delta_grid):
    """Smallest threshold over delta: prefactor * min delta^2 / H(delta),
    searched on 256 log-spaced points spanning *delta_grid* (plus the grid
    itself and the breakpoints of h in range), refined twice around the
    minimizer

    :raises NonpositivePotential: if H <= 0 at every searched delta
    """
    _, value = _minimize_ratio(h, delta_grid)
    return corollary_prefactor(A, alpha) * value


def check_h_conditions(h, alpha, A, delta, delta_grid=None):
    """Check (h1)-(h3) for ``alpha_k h`` at *delta* and compute the threshold

    :param delta_grid: range searched for the optimized threshold, by default
        [delta / 100, delta * 100]
    :raises UndeclaredAsymptotics: if h declares no linear growth bound
    :raises NonpositivePotential: if H(delta) <= 0
    """
    _positive('delta', delta)
    prefactor = corollary_prefactor(A, alpha)
    h_potential = h.potential(delta)
    if not h_potential > 0:
        raise NonpositivePotential(f'H({delta:g}) = {h_potential:g}')

    h1_ok = h.is_positive_on(-delta, 0.0) and h.is_positive_on(0.0, delta)
    h2_ok = _h2_holds(h)
    h3_ok = asymptotic_linear_bound(h) < A.lambda_min / alpha.total
    threshold = prefactor * delta ** 2 / h_potential

    if delta_grid is None:
        delta_grid = (delta / DELTA_SPAN, delta * DELTA_SPAN)
    optimal_delta, value = _minimize_ratio(h, delta_grid)
    logger.debug('h1=%s h2=%s h3=%s threshold=%g optimized=%g at delta=%g',
                 h1_ok, h2_ok, h3_ok, threshold, prefactor * value, optimal_delta)
    return CorollaryReport(delta, threshold, h1_ok, h2_ok, h3_ok,
                           prefactor * value, optimal_delta, h_potential)


def corollary_interval(h, alpha, A, delta, gamma):
    """]threshold, lambda_1/2 gamma^2 / (sum alpha_k sup_{|t|<=gamma} H)[, the
    interval the threshold comes from once gamma is fixed.

    :raises HypothesisNotSatisfied: unless gamma < sqrt(ones / lambda_1) delta
        and the interval is nonempty
    """
    _positive('gamma', gamma)
    _positive('delta', delta)
    ones = ones_quadratic(A)
    if not gamma < math.sqrt(ones / A.lambda_min) * delta:
        raise HypothesisNotSatisfied(f'gamma={gamma:g} too large for delta={delta:g}')
    potential = h.potential(delta)
    if not potential > 0:
        raise NonpositivePotential(f'H({delta:g}) = {potential:g}')
    threshold = corollary_prefactor(A, alpha) * delta ** 2 / potential
    sup = alpha.total * h.sup_potential(gamma)
    right = A.lambda_min / 2.0 * gamma ** 2 / sup if sup > 0 else math.inf
    interval = Interval(threshold, right)
    if interval.is_empty:
        raise HypothesisNotSatisfied(f'empty interval ]{threshold:g}, {right:g}[')
    return interval


def weighted_nonlinearities(h, alpha):
    """The per-index nonlinearities alpha_k h_k of a weighted problem, for a
    shared *h* or a list with one nonlinearity per index
    """
    hs = list(h) if isinstance(h, (list, tuple)) else [h] * len(alpha)
    if len(hs) != len(alpha):
        raise DimensionMismatch(f'{len(hs)} nonlinearities for {len(alpha)} weights')
    zero = constant(0.0, AsymptoticBound(0.0, 1.0, 0.0))
    return [g.scaled(a) if a > 0 else zero for g, a in zip(hs, alpha.alpha)]


def _agree(name, generic, closed_form):
    if not abs(generic - closed_form) <= STRICT_SLACK * max(1.0, abs(closed_form)):
        raise InternalConsistencyError(f'{name}: generic {generic!r} != closed form {closed_form!r}')


def _left_endpoint(report, coefficient, gs):
    potential_sum = math.fsum(g.potential(report.delta) for g in gs)
    if potential_sum > 0:
        _agree('interval left end', report.lambda_interval.left,
               coefficient * report.delta ** 2 / potential_sum)


def specialize_tridiagonal(T, a, b, gs, gamma, delta):
    """check_g1 on T_T(a, b, a), cross-checked against
    lambda_1 = b + 2a cos(pi/(T+1)) and 1^t A 1 = bT + 2a(T-1)
    """
    A = build_tridiagonal(T, a, b)
    report = check_g1(A, gs, gamma, delta)
    lambda_1 = tridiagonal_eigenvalue(1, T, a, b)
    ones = b * T + 2.0 * a * (T - 1)
    _agree('lambda_1', report.lambda_1, lambda_1)
    _agree('ones quadratic', report.ones_quadratic, ones)
    _agree('delta lower bound', report.delta_lower_bound, math.sqrt(lambda_1 / ones) * gamma)
    _left_endpoint(report, ones / 2.0, gs)
    return report


def specialize_fourth_order(T, gs, gamma, delta):
    """check_g1 on the fourth order matrix, where 1^t A 1 = 4 for T >= 2 so
    the delta bound reads sqrt(lambda_1)/2 gamma and the interval starts at
    2 delta^2 / sum G_k(delta)
    """
    A = build_fourth_order(T)
    report = check_g1(A, gs, gamma, delta)
    if T >= 2:
        _agree('ones quadratic', report.ones_quadratic, 4.0)
        _agree('delta lower bound', report.delta_lower_bound,
               math.sqrt(report.lambda_1) / 2.0 * gamma)
        _left_endpoint(report, 2.0, gs)
    return report


def specialize_grid(shape, gs, gamma, delta):
    """check_g1 on the grid Laplacian B, where 1^t B 1 = 2(m + n)"""
    A = build_grid_laplacian(shape)
    report = check_g1(A, gs, gamma, delta)
    perimeter = shape.m + shape.n
    _agree('ones quadratic', report.ones_quadratic, 2.0 * perimeter)
    _agree('delta lower bound', report.delta_lower_bound,
           math.sqrt(report.lambda_1 / (2.0 * perimeter)) * gamma)
    _left_endpoint(report, float(perimeter), gs)
    return report


def check_fourth_order_corollary(h, T, delta_grid):
    """Threshold for the unweighted fourth order problem: the corollary
    prefactor is 2/T, so lambda > 2/T inf_delta delta^2 / H(delta)
    """
    A = build_fourth_order(T)
    alpha = WeightVector.ones(T)
    if T >= 2:
        _agree('prefactor', corollary_prefactor(A, alpha), 2.0 / T)
    optimal_delta, _ = _minimize_ratio(h, delta_grid)
    return check_h_conditions(h, alpha, A, optimal_delta, delta_grid)
