# -*- coding: utf-8 -*-
"""Numerical search for several distinct solutions of an inclusion problem:
backtracking descent on J from many seeded starts, a string method for the
mountain pass point between two minima, and a lattice scan oracle for tiny
problems.

Every point handed out has been certified, i.e. its residual was recomputed
from the stored vector and is below ``tol_residual``.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional, Tuple

import numpy as np

from dinc.core import config
from dinc.errors import (DidNotConverge, OutOfRange, PathCollapse, SolverError,
                         TooLarge, ValidationError)
from dinc.mixins import JsonMixin
from dinc.utils import as_vector, box_distance, sup_distance
from dinc.variational import (LOCAL_MIN, SADDLE_CANDIDATE, TRIVIAL,
                              UNCLASSIFIED, certify, descent_direction,
                              is_local_min, is_solution, j_lambda, residual)

__author__ = 'pydinc developers'
__all__ = ['MultiplicityReport', 'THEOREM_KINDS', 'COROLLARY_KINDS',
           'SCENARIO_KINDS', 'minimize_from', 'refine', 'multistart',
           'start_box_radius', 'mountain_pass', 'find_multiplicity',
           'brute_force_oracle']

logger = logging.getLogger(__name__)

#: Scenario kinds claiming three solutions
THEOREM_KINDS = ('theorem31', 'theorem41', 'section42', 'theorem42')

#: Scenario kinds claiming two nontrivial solutions
COROLLARY_KINDS = ('corollary32', 'theorem11')

SCENARIO_KINDS = THEOREM_KINDS + COROLLARY_KINDS

#: Backtracking gives up below this step
STEP_FLOOR = 1e-14

#: Relative slack under which two energies count as equal
ENERGY_NOISE = 1e-15

#: Newton polishing kicks in once the residual drops below this
POLISH_BELOW = 1e-3

#: Newton iterations per polish
NEWTON_STEPS = 50

#: A coordinate this close (relative) to a breakpoint is pinned on it
BREAKPOINT_PIN = 1e-12

#: Initial relative step of the coordinate search on the residual
COMPASS_STEP = 1e-2

#: Default half side of the box around 0 where delta-based starts live
DEFAULT_DELTA = 1.0


@dataclass(frozen=True)
class MultiplicityReport(JsonMixin):
    """Distinct certified solutions, lowest energy first"""
    solutions: Tuple
    lam: float
    claims_met: bool
    kind: Optional[str] = None

    @property
    def nontrivial(self):
        return [s for s in self.solutions if not s.is_trivial]

    def to_json(self):
        return {'lambda': self.lam, 'kind': self.kind, 'claims_met': self.claims_met,
                'solutions': [s.to_json() for s in self.solutions]}


def _claims_met(solutions, kind):
    if kind in COROLLARY_KINDS:
        return sum(not s.is_trivial for s in solutions) >= 2
    return len(solutions) >= 3


def _merge(found, solution, tol_distinct):
    """Append *solution* unless it lies within tol_distinct of a known one"""
    if all(sup_distance(solution.u, other.u) >= tol_distinct for other in found):
        found.append(solution)
        return True
    return False


def _ordered(solutions):
    return tuple(sorted(solutions, key=lambda s: (s.energy, tuple(s.u))))


def _not_higher(energy, reference):
    return energy <= reference + ENERGY_NOISE * (1.0 + abs(reference))


def _pinned(p, u):
    """Mask of coordinates sitting on a breakpoint of their g_k"""
    mask = np.zeros(u.shape, dtype=bool)
    for g, idx in p.groups:
        if g.breakpoints:
            bp = np.asarray(g.breakpoints)
            gap = np.min(np.abs(u[idx][:, None] - bp[None, :]), axis=1)
            mask[idx] = gap <= BREAKPOINT_PIN * np.maximum(1.0, np.abs(u[idx]))
    return mask


def _clamp_at_breakpoints(p, u, candidate):
    """*candidate* with every coordinate that crossed a breakpoint of its g_k
    on the way from *u* put back on the first breakpoint crossed; None when
    no coordinate crossed one
    """
    out = candidate.copy()
    moved = False
    for g, idx in p.groups:
        if not g.breakpoints:
            continue
        bp = np.asarray(g.breakpoints)
        a, b = u[idx], candidate[idx]
        above = np.searchsorted(bp, a, side='right')
        below = np.searchsorted(bp, a, side='left') - 1
        j_up, j_down = np.minimum(above, bp.size - 1), np.maximum(below, 0)
        up = (b > a) & (above < bp.size) & (bp[j_up] <= b)
        down = (b < a) & (below >= 0) & (bp[j_down] >= b)
        out[idx] = np.where(up, bp[j_up], np.where(down, bp[j_down], b))
        moved = moved or bool(np.any(up | down))
    return out if moved else None


def _newton(p, u, steps=NEWTON_STEPS):
    """Damped Newton on (A u)_k = lambda alpha_k g_k(u_k) for the coordinates
    off the breakpoints; pinned coordinates stay put. Steps are accepted only
    when they lower the inclusion residual
    """
    best, best_residual = u, residual(p, u)
    free = ~_pinned(p, u)
    if not free.any():
        return best, best_residual
    A = p.matrix.entries
    scale = p.lam * p.alpha
    block = A[np.ix_(free, free)]
    for _ in range(steps):
        if best_residual == 0.0:
            break
        F = (A @ best - scale * p.values(best))[free]
        jacobian = block - np.diag((scale * p.slopes(best))[free])
        step = np.linalg.lstsq(jacobian, F, rcond=None)[0]
        eta = 1.0
        while eta > 1e-6:
            candidate = best.copy()
            candidate[free] -= eta * step
            r = residual(p, candidate)
            if r < best_residual:
                best, best_residual = candidate, r
                break
            eta *= 0.5
        else:
            break
    return best, best_residual


def _compass_moves(g, value, step):
    yield value + step
    yield value - step
    for t in g.breakpoints:
        if 0 < abs(t - value) <= step:
            yield t


def _compass(p, u, r, cfg):
    """Coordinate search on the residual, able to land on breakpoints"""
    step = COMPASS_STEP * max(1.0, float(np.max(np.abs(u))))
    evaluations = 0
    while step > STEP_FLOOR and r > cfg.tol_residual and evaluations < cfg.max_iters:
        improved = False
        for k, g in enumerate(p.nonlinearities):
            for value in _compass_moves(g, u[k], step):
                candidate = u.copy()
                candidate[k] = value
                evaluations += 1
                cr = residual(p, candidate)
                if cr < r:
                    u, r, improved = candidate, cr, True
                    break
        if not improved:
            step *= 0.5
    return u, r


def _classify(p, u, cfg):
    if np.max(np.abs(u)) < cfg.tol_distinct and is_solution(p, np.zeros_like(u), cfg.tol_residual):
        return np.zeros_like(u), TRIVIAL
    return u, LOCAL_MIN if is_local_min(p, u) else UNCLASSIFIED


def refine(p, start, cfg=None, kind=UNCLASSIFIED, route=None):
    """Drive the residual to zero near *start* (Newton, then a coordinate
    search, then Newton again). Unlike :func:`minimize_from` this reaches
    critical points that are not minima

    :raises DidNotConverge: if the residual stays above ``cfg.tol_residual``
    """
    cfg = cfg or config()
    u, r = _newton(p, as_vector(start, p.order))
    if r > cfg.tol_residual:
        u, r = _compass(p, u, r, cfg)
        u, r = _newton(p, u)
    if r > cfg.tol_residual:
        raise DidNotConverge(f'residual {r:.3e} after refinement', best=certify(p, u, route=route))
    return certify(p, u, kind=kind, route=route)


def _best_candidate(p, u, candidate):
    best, best_energy = candidate, j_lambda(p, candidate)
    clamped = _clamp_at_breakpoints(p, u, candidate)
    if clamped is not None:
        energy = j_lambda(p, clamped)
        if energy < best_energy:
            best, best_energy = clamped, energy
    return best, best_energy


def minimize_from(p, start, cfg=None, history=None):
    """Backtracking descent u <- u - eta * descent_direction(u) from *start*.

    The step is halved until J decreases (or stays level while the residual
    drops) and reset to ``cfg.step_init`` after every accepted step. A trial
    step that crosses breakpoints is also tried with those coordinates
    clamped on the first breakpoint crossed, and once the residual is small
    the point is polished by Newton steps that never raise J.

    :param history: optional list receiving J after every accepted step
    :return: :class:`~dinc.variational.CertifiedSolution` of kind
        ``local_min`` when the discrete local minimum probe passes
    :raises DidNotConverge: carrying the best point reached
    """
    cfg = cfg or config()
    u = as_vector(start, p.order)
    energy, r = j_lambda(p, u), residual(p, u)
    iteration = 0
    for iteration in range(cfg.max_iters):
        if r <= cfg.tol_residual:
            break
        if r <= POLISH_BELOW:
            polished, polished_residual = _newton(p, u)
            polished_energy = j_lambda(p, polished)
            if polished_residual <= 0.5 * r and _not_higher(polished_energy, energy):
                u, energy, r = polished, polished_energy, polished_residual
                if history is not None:
                    history.append(energy)
                continue

        direction = descent_direction(p, u)
        eta = cfg.step_init
        while eta >= STEP_FLOOR:
            candidate, candidate_energy = _best_candidate(p, u, u - eta * direction)
            if candidate_energy < energy:
                break
            if _not_higher(candidate_energy, energy) and residual(p, candidate) < r:
                break
            eta *= 0.5
        else:
            logger.debug('descent stalled at iteration %d, residual %.3e', iteration, r)
            break
        u, energy, r = candidate, candidate_energy, residual(p, candidate)
        if history is not None:
            history.append(energy)

    if r > cfg.tol_residual:
        raise DidNotConverge(f'residual {r:.3e} after {iteration + 1} iterations',
                             best=certify(p, u))
    logger.debug('descent converged after %d iterations, J=%.6g', iteration, energy)
    return certify(p, u, kind=LOCAL_MIN if is_local_min(p, u) else UNCLASSIFIED)


def start_box_radius(p, delta=DEFAULT_DELTA):
    """2 max(delta, sqrt(2 T M / lambda_1)) with M = max_k sup_{|t|<=delta} G_k"""
    bound = max(g.sup_potential(delta) for g, _ in p.groups)
    return 2.0 * max(delta, math.sqrt(2.0 * p.order * max(bound, 0.0) / p.matrix.lambda_min))


def _starts(p, cfg, delta):
    ones = np.ones(p.order)
    fixed = [np.zeros(p.order), delta * ones, -delta * ones]
    radius = start_box_radius(p, delta)
    rng = np.random.default_rng(cfg.seed)
    drawn = rng.uniform(-radius, radius, size=(max(cfg.starts - len(fixed), 0), p.order))
    return (fixed + list(drawn))[:cfg.starts]


def _descend(p, start, cfg):
    try:
        return minimize_from(p, start, cfg)
    except DidNotConverge as e:
        logger.debug('start %s dropped: %s', np.array2string(start, precision=3), e)
        return None


def _collect(p, solutions, cfg, route):
    """Classify, relabel and deduplicate in the given order"""
    found = []
    for solution in solutions:
        if solution is None:
            continue
        u, kind = _classify(p, solution.u, cfg)
        _merge(found, certify(p, u, kind=kind, route=route), cfg.tol_distinct)
    return found


def multistart(p, cfg=None, delta=None, kind='theorem31'):
    """Descend from 0, +-delta 1 and ``starts - 3`` points drawn uniformly in
    the box of :func:`start_box_radius`, then keep the distinct certified
    limits. Starts are drawn before dispatching, so the report does not
    depend on ``cfg.workers``
    """
    cfg = cfg or config()
    delta = DEFAULT_DELTA if delta is None else delta
    starts = _starts(p, cfg, delta)
    run = partial(_descend, p, cfg=cfg)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            results = list(executor.map(run, starts))
    else:
        results = [run(start) for start in starts]

    found = _ordered(_collect(p, results, cfg, 'multistart'))
    logger.info('multistart: %d distinct solutions from %d starts', len(found), len(starts))
    return MultiplicityReport(found, p.lam, _claims_met(found, kind), kind)


def _arc_lengths(path):
    return np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(path, axis=0), axis=1))])


def _reparametrize(path):
    """Redistribute the nodes at equal arc length along the polyline"""
    s = _arc_lengths(path)
    if s[-1] == 0.0:
        return path
    targets = np.linspace(0.0, s[-1], len(path))
    return np.column_stack([np.interp(targets, s, path[:, k]) for k in range(path.shape[1])])


def _string_step(p, path):
    radius = float(np.max(np.abs(path))) + 1.0
    lipschitz = max(float(np.max(p.alpha[idx])) * g.lipschitz_bound(radius) for g, idx in p.groups)
    return 1.0 / (p.matrix.spectrum.lambda_max + p.lam * lipschitz)


def mountain_pass(p, u_a, u_b, cfg=None):
    """String method between two minima: relax the interior nodes of the
    segment [u_a, u_b] by descent steps (each capped at half the node
    spacing), redistribute them at equal arc length, and refine the highest
    node into a critical point

    :return: :class:`~dinc.variational.CertifiedSolution` of kind
        ``saddle_candidate``
    :raises PathCollapse: when the highest node is (or sits next to) an
        endpoint, i.e. no barrier separates u_a from u_b
    """
    cfg = cfg or config()
    u_a, u_b = as_vector(u_a, p.order), as_vector(u_b, p.order)
    if sup_distance(u_a, u_b) < cfg.tol_distinct:
        raise ValidationError('mountain pass endpoints coincide')
    nodes = cfg.path_nodes
    weights = np.linspace(0.0, 1.0, nodes)[:, None]
    path = (1.0 - weights) * u_a + weights * u_b
    tau = _string_step(p, path)

    for _ in range(cfg.string_iters):
        limit = 0.5 * _arc_lengths(path)[-1] / (nodes - 1)
        for i in range(1, nodes - 1):
            move = tau * descent_direction(p, path[i])
            length = float(np.linalg.norm(move))
            if length > limit:
                move *= limit / length
            path[i] = path[i] - move
        path = _reparametrize(path)

    energies = np.array([j_lambda(p, node) for node in path])
    top = int(np.argmax(energies))
    if top in (0, nodes - 1) or min(sup_distance(path[top], u_a),
                                    sup_distance(path[top], u_b)) < cfg.tol_distinct:
        raise PathCollapse(f'highest node {top} of {nodes} lies on an endpoint')
    logger.debug('mountain pass: highest node %d, J=%.6g', top, energies[top])
    return refine(p, path[top], cfg, kind=SADDLE_CANDIDATE, route='mountain_pass')


def find_multiplicity(p, cfg=None, kind='theorem31', delta=None, admissible=None):
    """Certify 0, run :func:`multistart` and, while the scenario claim is not
    met, look for mountain pass points between pairs of minima (lowest
    energies first).

    :param kind: scenario kind; corollary kinds claim two nontrivial
        solutions, theorem kinds three solutions
    :param admissible: :class:`~dinc.core.Interval` lambda should lie in
    :return: :class:`MultiplicityReport`; ``claims_met`` False is a valid
        outcome
    """
    cfg = cfg or config()
    if kind not in SCENARIO_KINDS:
        raise OutOfRange(f'unknown scenario kind {kind!r}')
    if admissible is not None and not admissible.contains(p.lam):
        logger.warning('lambda=%g lies outside ]%g, %g[, no multiplicity is guaranteed',
                       p.lam, admissible.left, admissible.right)

    found = []
    zero = np.zeros(p.order)
    if is_solution(p, zero, cfg.tol_residual):
        found.append(certify(p, zero, kind=TRIVIAL, route='zero'))
    for solution in multistart(p, cfg, delta, kind).solutions:
        _merge(found, solution, cfg.tol_distinct)

    if not _claims_met(found, kind):
        minima = sorted((s for s in found if s.kind in (TRIVIAL, LOCAL_MIN)),
                        key=lambda s: s.energy)
        for a, b in itertools.combinations(minima, 2):
            try:
                saddle = mountain_pass(p, a.u, b.u, cfg)
            except SolverError as e:
                logger.info('no mountain pass point between energies %.6g and %.6g: %s',
                            a.energy, b.energy, e)
                continue
            if _merge(found, saddle, cfg.tol_distinct):
                logger.info('mountain pass point found, J=%.6g', saddle.energy)
            if _claims_met(found, kind):
                break

    solutions = _ordered(found)
    met = _claims_met(solutions, kind)
    if not met:
        logger.warning('%s claim not met at lambda=%g: %d solutions, %d nontrivial',
                       kind, p.lam, len(solutions), sum(not s.is_trivial for s in solutions))
    else:
        logger.info('%s claim met at lambda=%g with %d solutions', kind, p.lam, len(solutions))
    return MultiplicityReport(solutions, p.lam, met, kind)


def _lattice_residuals(p, points):
    Au = points @ p.matrix.entries
    lo, hi = np.empty_like(points), np.empty_like(points)
    for k, g in enumerate(p.nonlinearities):
        lo[:, k], hi[:, k] = g.envelopes_many(points[:, k])
    scale = p.lam * p.alpha
    return np.max(box_distance(Au, scale * lo, scale * hi), axis=1)


def brute_force_oracle(p, radius, points_per_axis, cfg=None):
    """Scan the lattice [-radius, radius]^T (each axis also carrying the
    breakpoints of its g_k in range), keep the points whose residual is
    within the Lipschitz reach kappa * spacing of zero and refine them into
    distinct certified solutions

    :raises TooLarge: if T > 3
    """
    cfg = cfg or config()
    if p.order > 3:
        raise TooLarge(f'order {p.order}')
    if not radius > 0:
        raise OutOfRange(f'radius must be positive, got {radius}')
    if int(points_per_axis) != points_per_axis or points_per_axis < 2:
        raise OutOfRange(f'points_per_axis must be an integer >= 2, got {points_per_axis}')

    axes = [np.union1d(np.linspace(-radius, radius, int(points_per_axis)),
                       [t for t in g.breakpoints if -radius <= t <= radius])
            for g in p.nonlinearities]
    grids = np.meshgrid(*axes, indexing='ij')
    points = np.stack([grid.ravel() for grid in grids], axis=1)
    values = _lattice_residuals(p, points)

    spacing = 2.0 * radius / (points_per_axis - 1)
    row_sums = np.sum(np.abs(p.matrix.entries), axis=1)
    lipschitz = np.array([g.lipschitz_bound(radius) for g in p.nonlinearities])
    kappa = float(np.max(row_sums + p.lam * p.alpha * lipschitz))
    kept = np.flatnonzero(values <= kappa * spacing)
    kept = kept[np.argsort(values[kept], kind='stable')]

    seeds = []
    for i in kept:
        if all(sup_distance(points[i], seed) >= 2.0 * spacing for seed in seeds):
            seeds.append(points[i])
    logger.debug('oracle: %d of %d lattice points kept, %d seeds', kept.size, len(points), len(seeds))

    refined = []
    for seed in seeds:
        try:
            refined.append(refine(p, seed, cfg, route='oracle'))
        except DidNotConverge as e:
            logger.debug('oracle seed dropped: %s', e)
    return list(_ordered(_collect(p, refined, cfg, 'oracle')))
