# -*- coding: utf-8 -*-
"""End to end properties: closed forms, oracles and determinism"""
import math

import numpy as np
import pytest

from dinc.hypotheses import check_g1, check_h_conditions, lambda_interval
from dinc.matrices import (GridShape, build_fourth_order, build_grid_laplacian,
                           build_second_order, build_tridiagonal,
                           ones_quadratic, spectrum, tridiagonal_eigenvalue)
from dinc.nonlinearity import PiecewiseNonlinearity, WeightVector, linear, step
from dinc.scenario import Scenario, run
from dinc.solvers import brute_force_oracle, find_multiplicity
from dinc.variational import InclusionProblem, descent_direction, j_lambda
from tests.conftest import mock_scenario, truncated_quadratic

COEFFICIENTS = ((-1.0, 2.0), (-1.0, 3.0), (-0.5, 2.0))


def test_closed_form_spectrum():
    for a, b in COEFFICIENTS:
        for T in range(2, 51):
            observed = spectrum(build_tridiagonal(T, a, b)).eigenvalues
            expected = [tridiagonal_eigenvalue(k, T, a, b) for k in range(1, T + 1)]
            assert np.max(np.abs(np.array(observed) - expected)) <= 1e-9


def test_ones_quadratic_identities():
    for a, b in COEFFICIENTS:
        for T in range(2, 31):
            assert ones_quadratic(build_tridiagonal(T, a, b)) == b * T + 2 * a * (T - 1)
    for T in range(2, 31):
        assert ones_quadratic(build_fourth_order(T)) == 4.0
    for m in range(1, 11):
        for n in range(1, 11):
            assert ones_quadratic(build_grid_laplacian(GridShape(m, n))) == 2.0 * (m + n)


def test_spectral_sandwich():
    """lambda_1 |u|^2 <= u^t A u <= lambda_T |u|^2 and |u|_inf <= (u^t A u / lambda_1)^(1/2)"""
    matrices = [build_second_order(T) for T in (1, 4, 9)]
    matrices += [build_tridiagonal(6, -0.5, 2.0), build_tridiagonal(12, -1.0, 3.0)]
    matrices += [build_fourth_order(T) for T in (1, 5, 11)]
    matrices += [build_grid_laplacian(GridShape(2, 3)), build_grid_laplacian(GridShape(4, 4))]
    rng = np.random.default_rng(2024)
    for A in matrices:
        s = A.spectrum
        u = rng.standard_normal((1000, A.order)) * rng.uniform(0.01, 100.0, (1000, 1))
        energy = np.einsum('ij,jk,ik->i', u, A.entries, u)
        norm2 = np.sum(u ** 2, axis=1)
        slack = 1e-9 * np.maximum(energy, 1e-300)
        assert np.all(s.lambda_min * norm2 <= energy + slack)
        assert np.all(energy <= s.lambda_max * norm2 + slack)
        sup = np.max(np.abs(u), axis=1)
        assert np.all(sup <= np.sqrt(energy / s.lambda_min) * (1 + 1e-9))


def test_envelope_oracle():
    h = truncated_quadratic()
    assert h.one_sided_limits(-1.0) == (0.0, 1.0)
    assert h.one_sided_limits(1.0) == (1.0, 0.0)
    assert (h.envelope_minus(1.0), h.envelope_plus(1.0)) == (0.0, 1.0)
    g = PiecewiseNonlinearity((-1.0, 2.0), ((-1.0,), (0.5,), (3.0,)))
    assert (g.envelope_minus(-1.0), g.envelope_plus(-1.0)) == (-1.0, 0.5)
    assert (g.envelope_minus(2.0), g.envelope_plus(2.0)) == (0.5, 3.0)
    for f in (h, g, step(0.0, -1.0, 1.0)):
        for gamma in (0.5, 1.5, 3.0):
            xs = np.linspace(-gamma, gamma, 10 ** 6)
            assert f.sup_potential(gamma) == pytest.approx(np.max(f.potential_many(xs)), abs=1e-9)


def test_scalar_three_solutions(scalar_problem, quick_cfg):
    report = find_multiplicity(scalar_problem, quick_cfg)
    assert len(report.solutions) == 3
    assert sorted(s.u[0] for s in report.solutions) == pytest.approx([0.0, 0.5, 1.0], abs=1e-8)
    assert all(s.residual <= 1e-10 for s in report.solutions)
    oracle = brute_force_oracle(scalar_problem, 2.0, 401, quick_cfg)
    assert [s.u[0] for s in oracle] == pytest.approx([s.u[0] for s in report.solutions], abs=1e-8)


def test_corollary_scenario(h, chain_problem, pair_problem, quick_cfg):
    report = check_h_conditions(h, WeightVector.ones(5), build_second_order(5), 1.0)
    assert report.threshold == pytest.approx(0.6, rel=1e-12)
    multiplicity = find_multiplicity(chain_problem, quick_cfg, kind='corollary32')
    assert len(multiplicity.nontrivial) >= 2
    assert all(s.residual <= 1e-8 for s in multiplicity.solutions)

    pair = find_multiplicity(pair_problem, quick_cfg, kind='corollary32')
    oracle = brute_force_oracle(pair_problem, 2.0, 201, quick_cfg)
    assert len(pair.solutions) == len(oracle)
    for solution in pair.solutions:
        assert min(np.max(np.abs(solution.u - s.u)) for s in oracle) < quick_cfg.tol_distinct


def test_interval_consistency():
    h = truncated_quadratic()
    A = build_second_order(5)
    rng = np.random.default_rng(7)
    for gamma, delta in zip(rng.uniform(1e-3, 0.9, 200), rng.uniform(0.05, 3.0, 200)):
        report = check_g1(A, [h] * 5, gamma, delta)
        if abs(report.g1_lhs - report.g1_rhs) <= 1e-9 * report.g1_rhs:
            continue
        assert (not report.lambda_interval.is_empty) == report.satisfied

    base = lambda_interval(A, [h] * 5, 0.01, 1.0)
    for c in (0.1, 3.0, 250.0):
        scaled = lambda_interval(A, [h.scaled(c)] * 5, 0.01, 1.0)
        assert scaled.left == pytest.approx(base.left / c, rel=1e-12)
        assert scaled.right == pytest.approx(base.right / c, rel=1e-12)


def test_coercivity():
    scenario = Scenario.from_file(mock_scenario('grid_2x2'))
    report, admissible, _ = scenario.check()
    assert report.g2_margin > 0
    p = scenario.problem(scenario.resolve_lambda(admissible))
    rng = np.random.default_rng(11)
    directions = rng.standard_normal((64, p.order))
    for e in directions / np.linalg.norm(directions, axis=1, keepdims=True):
        energies = [j_lambda(p, R * e) for R in (10.0, 1e2, 1e3, 1e4)]
        assert all(b > a for a, b in zip(energies, energies[1:]))


@pytest.mark.parametrize('name', ['scalar', 'pair', 'corollary_t5', 'grid_2x2', 'wide_gamma'])
def test_runs_are_deterministic(tmp_path, name):
    run(mock_scenario(name), str(tmp_path / 'first'))
    run(mock_scenario(name), str(tmp_path / 'second'))
    first = (tmp_path / 'first' / 'solutions.csv').read_bytes()
    second = (tmp_path / 'second' / 'solutions.csv').read_bytes()
    assert first == second


def _smooth_points(p, rng, count, radius=1.8, margin=1e-3):
    points = []
    while len(points) < count:
        u = rng.uniform(-radius, radius, p.order)
        gaps = [min((abs(u[k] - t) for t in g.breakpoints), default=1.0)
                for k, g in enumerate(p.nonlinearities)]
        if min(gaps) > margin:
            points.append(u)
    return points


def test_descent_direction_matches_finite_differences(h):
    problems = [
        InclusionProblem(build_second_order(1), [h], 4.0),
        InclusionProblem(build_second_order(2), [h, h], 2.0),
        InclusionProblem(build_tridiagonal(4, -1.0, 3.0), [h, linear(0.5), h, step()], 1.5),
        InclusionProblem(build_fourth_order(3), [h] * 3, 2.0, WeightVector((1.0, 0.5, 2.0))),
        InclusionProblem(build_grid_laplacian(GridShape(2, 2)), [h] * 4, 39.0),
    ]
    rng = np.random.default_rng(5)
    eps = 1e-6
    for p in problems:
        for u in _smooth_points(p, rng, 100):
            numeric = np.array([(j_lambda(p, u + eps * e) - j_lambda(p, u - eps * e)) / (2 * eps)
                                for e in np.eye(p.order)])
            d = descent_direction(p, u)
            assert np.linalg.norm(d - numeric) <= 1e-5 * max(1.0, np.linalg.norm(d))
            assert math.isfinite(j_lambda(p, u))
