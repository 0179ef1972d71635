# -*- coding: utf-8 -*-
"""Scenario files: a matrix family, the nonlinearities, the hypotheses to
check and the solver options for one run, read from JSON.

A run checks the hypotheses of the scenario kind, resolves lambda, searches
for solutions and writes ``report.json`` and ``solutions.csv``.
"""

import csv
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from dinc.core import Interval, config
from dinc.errors import (HypothesisNotSatisfied, InternalConsistencyError,
                         NonpositivePotential, ParseError,
                         UndeclaredAsymptotics, ValidationError)
from dinc.hypotheses import (check_fourth_order_corollary, check_g1,
                             check_h_conditions, corollary_interval,
                             specialize_fourth_order, specialize_grid,
                             specialize_tridiagonal, weighted_nonlinearities)
from dinc.matrices import (GridShape, SpdMatrix, build_fourth_order,
                           build_grid_laplacian, build_second_order,
                           build_tridiagonal)
from dinc.mixins import JsonMixin
from dinc.nonlinearity import PiecewiseNonlinearity, WeightVector
from dinc.solvers import COROLLARY_KINDS, SCENARIO_KINDS, find_multiplicity
from dinc.variational import InclusionProblem, residual

__author__ = 'pydinc developers'
__all__ = ['Scenario', 'RunOutcome', 'matrix_from_spec', 'parse_matrix_spec',
           'run', 'recertify', 'write_solutions_csv', 'AUTO_MID']

logger = logging.getLogger(__name__)

AUTO_MID = 'auto_mid'

#: Exit code of a run whose hypotheses fail
HYPOTHESIS_FAILED = HypothesisNotSatisfied.exit_code

#: Exit code of a run that found fewer solutions than claimed
SOLVER_SHORTFALL = 3

REPORT_FILE = 'report.json'
SOLUTIONS_FILE = 'solutions.csv'

_MATRIX_ARGS = {
    'tridiagonal': ('T', 'a', 'b'),
    'second_order': ('T',),
    'fourth_order': ('T',),
    'grid': ('m', 'n'),
}


def matrix_from_spec(spec):
    """Build the :class:`~dinc.matrices.SpdMatrix` described by *spec*, e.g.
    ``{"type": "grid", "m": 2, "n": 2}`` or
    ``{"type": "explicit", "entries": [[2, -1], [-1, 2]]}``
    """
    try:
        kind = spec['type']
        if kind == 'tridiagonal':
            return build_tridiagonal(spec['T'], spec['a'], spec['b'])
        if kind == 'second_order':
            return build_second_order(spec['T'])
        if kind == 'fourth_order':
            return build_fourth_order(spec['T'])
        if kind == 'grid':
            return build_grid_laplacian(GridShape(spec['m'], spec['n']))
        if kind == 'explicit':
            return SpdMatrix(spec['entries'])
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f'malformed matrix spec {spec!r}: {e!r}')
    raise ValidationError(f'unknown matrix type {kind!r}')


def parse_matrix_spec(text):
    """Read the command line shorthand ``type:arg,arg`` (``second_order:5``,
    ``tridiagonal:5,-1,2``, ``grid:3,2``) into a matrix spec dict
    """
    kind, _, args = text.partition(':')
    names = _MATRIX_ARGS.get(kind)
    if names is None:
        raise ParseError(f'unknown matrix type {kind!r}, expected one of {sorted(_MATRIX_ARGS)}')
    values = [v for v in args.split(',') if v] if args else []
    if len(values) != len(names):
        raise ParseError(f'{kind} takes {",".join(names)}, got {args!r}')
    try:
        numbers = [float(v) for v in values]
    except ValueError as e:
        raise ParseError(str(e))
    spec = {'type': kind}
    for name, number in zip(names, numbers):
        spec[name] = int(number) if name in ('T', 'm', 'n') and number.is_integer() else number
    return spec


@dataclass
class Scenario(JsonMixin):
    """One run: matrix, nonlinearities, weights, (gamma, delta), lambda (a
    number or ``"auto_mid"``), solver overrides and the claim being checked
    """
    name: str
    matrix_spec: Dict[str, Any]
    nonlinearity_spec: Union[Dict[str, Any], List[Dict[str, Any]]]
    kind: str = 'theorem31'
    weights: Optional[List[float]] = None
    gamma: Optional[float] = None
    delta: Optional[float] = None
    lam: Union[float, str] = AUTO_MID
    solve: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValidationError(f'unknown scenario kind {self.kind!r}')
        for name in ('gamma', 'delta'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValidationError(f'{name} must be positive, got {value}')
        if self.lam != AUTO_MID and not (isinstance(self.lam, (int, float)) and self.lam > 0):
            raise ValidationError(f'lambda must be positive or {AUTO_MID!r}, got {self.lam!r}')
        if not isinstance(self.solve, dict):
            raise ValidationError(f'solve must be an object of solver options, got {self.solve!r}')

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ParseError('scenario must be a JSON object')
        data = dict(data)
        if 'lambda' in data:
            data['lam'] = data.pop('lambda')
        try:
            return cls(**data)
        except TypeError as e:
            raise ValidationError(f'bad scenario fields: {e}')

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as scenario_file:
                data = json.load(scenario_file)
        except (OSError, ValueError) as e:
            raise ParseError(f'{path}: {e}')
        scenario = cls.from_dict(data)
        logger.info('loaded scenario %r (%s) from %s', scenario.name, scenario.kind, path)
        return scenario

    def to_json(self):
        data = super().to_json()
        data['lambda'] = data.pop('lam')
        return data

    @property
    def is_corollary(self):
        return self.kind in COROLLARY_KINDS

    def build_matrix(self):
        return matrix_from_spec(self.matrix_spec)

    def shared_nonlinearity(self):
        """The single h of a corollary scenario"""
        if not isinstance(self.nonlinearity_spec, dict):
            raise ValidationError(f'{self.kind} needs one shared nonlinearity')
        return PiecewiseNonlinearity.from_json(self.nonlinearity_spec)

    def nonlinearities(self, order):
        if isinstance(self.nonlinearity_spec, dict):
            return [PiecewiseNonlinearity.from_json(self.nonlinearity_spec)] * order
        if not isinstance(self.nonlinearity_spec, list):
            raise ValidationError('nonlinearity_spec must be an object or a list of objects')
        gs = [PiecewiseNonlinearity.from_json(spec) for spec in self.nonlinearity_spec]
        if len(gs) != order:
            raise ValidationError(f'{len(gs)} nonlinearities for order {order}')
        return gs

    def weight_vector(self, order):
        if self.weights is None:
            return WeightVector.ones(order)
        alpha = WeightVector(self.weights)
        if len(alpha) != order:
            raise ValidationError(f'{len(alpha)} weights for order {order}')
        return alpha

    def solve_config(self, **overrides):
        """Solver options: defaults < stored config < scenario < *overrides*"""
        cfg = config(**self.solve)
        cfg.update(**{k: v for k, v in overrides.items() if v is not None})
        return cfg.validate()

    def require(self, *names):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ValidationError(f'{self.kind} scenario needs {", ".join(missing)}')

    def check(self):
        """Run the hypothesis checks of the scenario kind

        :return: (report, admissible lambda interval, satisfied)
        """
        A = self.build_matrix()
        if self.is_corollary:
            return self._check_corollary(A)
        self.require('gamma', 'delta')
        gs = weighted_nonlinearities(self.nonlinearities(A.order), self.weight_vector(A.order))
        matrix_type = self.matrix_spec.get('type')
        if self.kind == 'theorem41':
            if matrix_type == 'tridiagonal':
                spec = self.matrix_spec
                report = specialize_tridiagonal(spec['T'], spec['a'], spec['b'], gs,
                                                self.gamma, self.delta)
            elif matrix_type == 'second_order' and self.matrix_spec['T'] >= 2:
                report = specialize_tridiagonal(self.matrix_spec['T'], -1.0, 2.0, gs,
                                                self.gamma, self.delta)
            else:
                raise ValidationError('theorem41 needs a tridiagonal matrix')
        elif self.kind == 'section42':
            if matrix_type != 'fourth_order':
                raise ValidationError('section42 needs a fourth_order matrix')
            report = specialize_fourth_order(self.matrix_spec['T'], gs, self.gamma, self.delta)
        elif self.kind == 'theorem42':
            if matrix_type != 'grid':
                raise ValidationError('theorem42 needs a grid matrix')
            shape = GridShape(self.matrix_spec['m'], self.matrix_spec['n'])
            report = specialize_grid(shape, gs, self.gamma, self.delta)
        else:
            report = check_g1(A, gs, self.gamma, self.delta)
        return report, report.lambda_interval, report.satisfied

    def _check_corollary(self, A):
        self.require('delta')
        h = self.shared_nonlinearity()
        alpha = self.weight_vector(A.order)
        if self.kind == 'theorem11':
            if self.matrix_spec.get('type') != 'fourth_order' or self.weights is not None:
                raise ValidationError('theorem11 needs a fourth_order matrix and unit weights')
            report = check_fourth_order_corollary(
                h, A.order, (self.delta / 100.0, self.delta * 100.0))
            threshold = report.optimized_threshold
        else:
            report = check_h_conditions(h, alpha, A, self.delta)
            threshold = report.threshold
        admissible = Interval(threshold, math.inf)
        if self.gamma is not None and report.satisfied:
            try:
                admissible = corollary_interval(h, alpha, A, report.delta, self.gamma)
            except HypothesisNotSatisfied as e:
                logger.warning('gamma=%g gives no bounded interval: %s', self.gamma, e)
        return report, admissible, report.satisfied

    def resolve_lambda(self, admissible):
        if self.lam != AUTO_MID:
            return float(self.lam)
        lam = admissible.auto_mid()
        if lam is None:
            raise HypothesisNotSatisfied(
                f'auto_mid needs a nonempty interval, got ]{admissible.left:g}, {admissible.right:g}[')
        logger.info('auto_mid resolved lambda=%g in ]%g, %g[', lam, admissible.left, admissible.right)
        return lam

    def problem(self, lam):
        A = self.build_matrix()
        return InclusionProblem(A, self.nonlinearities(A.order), lam, self.weight_vector(A.order))


@dataclass
class RunOutcome(JsonMixin):
    """Everything a run reports"""
    scenario: str
    kind: str
    hypotheses: Any
    admissible: Interval
    satisfied: bool
    lam: Optional[float] = None
    multiplicity: Any = None
    exit_code: int = 0
    error: Optional[str] = None

    def to_json(self):
        data = super().to_json()
        data['lambda'] = data.pop('lam')
        data['claims_met'] = None if self.multiplicity is None else self.multiplicity.claims_met
        return data


def write_solutions_csv(path, solutions):
    """One row per solution: u_1..u_T, residual, energy, kind. Floats are
    written with repr so equal runs give equal files
    """
    order = len(solutions[0].u) if solutions else 0
    with open(path, 'w', newline='') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow([f'u_{k}' for k in range(1, order + 1)] + ['residual', 'energy', 'kind'])
        for s in solutions:
            writer.writerow([repr(float(v)) for v in s.u]
                            + [repr(float(s.residual)), repr(float(s.energy)), s.kind])


def _write(outcome, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, REPORT_FILE), 'w') as report_file:
        json.dump(outcome.to_json(), report_file, indent=2)
    solutions = outcome.multiplicity.solutions if outcome.multiplicity is not None else ()
    write_solutions_csv(os.path.join(out_dir, SOLUTIONS_FILE), solutions)


def run(scenario, out_dir, **overrides):
    """Check, solve and write ``report.json``/``solutions.csv`` to *out_dir*

    :param scenario: :class:`Scenario` or path to a scenario file
    :param overrides: solver options taking precedence over the scenario
    :return: :class:`RunOutcome`; its ``exit_code`` is 0 when the claim is
        met and every solution re-certifies, 2 when the hypotheses fail and
        3 on a solver shortfall
    :raises ParseError: scenario file unreadable
    :raises ValidationError: scenario invalid
    :raises NonpositivePotential: after writing a report without solutions;
        likewise for :class:`~dinc.errors.UndeclaredAsymptotics`
    """
    if not isinstance(scenario, Scenario):
        scenario = Scenario.from_file(scenario)
    cfg = scenario.solve_config(**overrides)
    try:
        report, admissible, satisfied = scenario.check()
    except (NonpositivePotential, UndeclaredAsymptotics) as e:
        outcome = RunOutcome(scenario.name, scenario.kind, None, None, False,
                             exit_code=e.exit_code, error=str(e))
        _write(outcome, out_dir)
        raise
    outcome = RunOutcome(scenario.name, scenario.kind, report, admissible, satisfied)

    try:
        lam = scenario.resolve_lambda(admissible)
    except HypothesisNotSatisfied as e:
        logger.warning('%s', e)
        lam = None
    if not satisfied or lam is None:
        logger.warning('hypotheses of %s not satisfied for scenario %r', scenario.kind, scenario.name)
        outcome.exit_code = HYPOTHESIS_FAILED
        _write(outcome, out_dir)
        return outcome

    problem = scenario.problem(lam)
    outcome.lam = lam
    outcome.multiplicity = find_multiplicity(problem, cfg, scenario.kind,
                                             scenario.delta, admissible)
    for solution in outcome.multiplicity.solutions:
        recomputed = residual(problem, solution.u)
        if recomputed > cfg.tol_residual:
            raise InternalConsistencyError(
                f'solution failed to re-certify: residual {recomputed:.3e}')
    outcome.exit_code = 0 if outcome.multiplicity.claims_met else SOLVER_SHORTFALL
    _write(outcome, out_dir)
    logger.info('scenario %r: %d solutions, exit %d', scenario.name,
                len(outcome.multiplicity.solutions), outcome.exit_code)
    return outcome


def recertify(path, scenario):
    """Re-read the solutions of a ``report.json`` and recompute their
    residuals against *scenario*; returns (stored, recomputed) pairs
    """
    with open(path) as report_file:
        data = json.load(report_file)
    try:
        problem = scenario.problem(data['lambda'])
        solutions = data['multiplicity']['solutions']
    except (KeyError, TypeError) as e:
        raise ParseError(f'{path}: {e!r}')
    return [(s['residual'], residual(problem, np.array(s['u']))) for s in solutions]

