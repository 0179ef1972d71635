# -*- coding: utf-8 -*-
"""The energy J = Phi - lambda Psi of an inclusion problem, the generalized
gradient box of Psi and the residual that certifies solutions.

A vector u solves ``A u in lambda [g-(u), g+(u)]`` exactly when every
component of A u lies in its box; the residual is the largest distance of a
component to its box.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from dinc.core import Interval
from dinc.decorators import vector_argument
from dinc.errors import DimensionMismatch, OutOfRange
from dinc.matrices import SpdMatrix
from dinc.mixins import JsonMixin
from dinc.nonlinearity import PiecewiseNonlinearity, WeightVector
from dinc.utils import box_distance

__author__ = 'pydinc developers'
__all__ = ['InclusionProblem', 'CertifiedSolution', 'TRIVIAL', 'LOCAL_MIN',
           'SADDLE_CANDIDATE', 'UNCLASSIFIED', 'phi', 'psi', 'j_lambda',
           'gradient_box', 'residual', 'is_solution', 'descent_direction',
           'certify', 'is_local_min']

logger = logging.getLogger(__name__)

TRIVIAL = 'trivial'
LOCAL_MIN = 'local_min'
SADDLE_CANDIDATE = 'saddle_candidate'
UNCLASSIFIED = 'unclassified'
KINDS = (TRIVIAL, LOCAL_MIN, SADDLE_CANDIDATE, UNCLASSIFIED)

#: Coordinate offset of the discrete local minimum probe
LOCAL_MIN_PROBE = 1e-4


@dataclass(frozen=True, eq=False)
class InclusionProblem(JsonMixin):
    """``A u in lambda alpha_k [g-_k(u_k), g+_k(u_k)]`` for k = 1..T.

    The same nonlinearity object may be shared by several indices; shared
    objects are evaluated once per call on all their coordinates.
    """
    matrix: SpdMatrix
    nonlinearities: Tuple[PiecewiseNonlinearity, ...]
    lam: float
    weights: Optional[WeightVector] = field(default=None)

    def __post_init__(self):
        nonlinearities = tuple(self.nonlinearities)
        if len(nonlinearities) != self.matrix.order:
            raise DimensionMismatch(
                f'{len(nonlinearities)} nonlinearities for order {self.matrix.order}')
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise OutOfRange(f'lambda must be positive, got {self.lam}')
        weights = self.weights or WeightVector.ones(self.matrix.order)
        if len(weights) != self.matrix.order:
            raise DimensionMismatch(f'{len(weights)} weights for order {self.matrix.order}')
        object.__setattr__(self, 'nonlinearities', nonlinearities)
        object.__setattr__(self, 'lam', float(self.lam))
        object.__setattr__(self, 'weights', weights)

    def __repr__(self):
        return f'<InclusionProblem>: order {self.order}, lambda {self.lam:g}'

    @property
    def order(self):
        return self.matrix.order

    @cached_property
    def alpha(self):
        alpha = self.weights.as_array()
        alpha.setflags(write=False)
        return alpha

    @cached_property
    def groups(self):
        """(nonlinearity, coordinate indices) for every distinct object"""
        indices = {}
        owners = {}
        for k, g in enumerate(self.nonlinearities):
            indices.setdefault(id(g), []).append(k)
            owners[id(g)] = g
        return tuple((owners[key], np.array(idx)) for key, idx in indices.items())

    def with_lambda(self, lam):
        return replace(self, lam=lam)

    def _gather(self, u, method):
        out = np.empty_like(u)
        for g, idx in self.groups:
            out[idx] = getattr(g, method)(u[idx])
        return out

    def values(self, u):
        """g_k(u_k), right segment at breakpoints"""
        return self._gather(u, 'eval_many')

    def slopes(self, u):
        return self._gather(u, 'derivative_many')

    def potentials(self, u):
        """G_k(u_k)"""
        return self._gather(u, 'potential_many')

    def envelopes(self, u):
        """(g-_k(u_k), g+_k(u_k)) as two arrays"""
        lo, hi = np.empty_like(u), np.empty_like(u)
        for g, idx in self.groups:
            lo[idx], hi[idx] = g.envelopes_many(u[idx])
        return lo, hi

    def box(self, u):
        """Lower and upper ends of lambda alpha_k [g-_k, g+_k] at u"""
        lo, hi = self.envelopes(u)
        scale = self.lam * self.alpha
        return scale * lo, scale * hi

    def to_json(self):
        return {'matrix': self.matrix.to_json(),
                'nonlinearities': [g.to_json() for g in self.nonlinearities],
                'weights': list(self.weights.alpha),
                'lambda': self.lam}


@dataclass(frozen=True, eq=False)
class CertifiedSolution(JsonMixin):
    """A point together with the residual and energy computed from it"""
    u: np.ndarray
    residual: float
    energy: float
    kind: str = UNCLASSIFIED
    route: Optional[str] = None

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        u.setflags(write=False)
        object.__setattr__(self, 'u', u)
        if self.kind not in KINDS:
            raise OutOfRange(f'unknown solution kind {self.kind!r}')
        if self.kind == TRIVIAL and np.any(u):
            raise OutOfRange('a trivial solution must be the zero vector')

    def __repr__(self):
        return f'<CertifiedSolution>: {self.kind}, residual {self.residual:.2e}'

    @property
    def norm(self):
        return float(np.linalg.norm(self.u))

    @property
    def sup_norm(self):
        return float(np.max(np.abs(self.u), initial=0.0))

    @property
    def is_trivial(self):
        return not np.any(self.u)

    def to_json(self):
        return {'u': self.u.tolist(), 'residual': self.residual,
                'energy': self.energy, 'kind': self.kind, 'route': self.route,
                'norm': self.norm, 'sup_norm': self.sup_norm}


@vector_argument
def phi(p, u):
    """u^t A u / 2"""
    return 0.5 * float(u @ p.matrix.entries @ u)


@vector_argument
def psi(p, u):
    """sum_k alpha_k G_k(u_k)"""
    return float(p.alpha @ p.potentials(u))


@vector_argument
def j_lambda(p, u):
    return phi(p, u) - p.lam * psi(p, u)


@vector_argument
def gradient_box(p, u):
    """The intervals lambda alpha_k [g-_k(u_k), g+_k(u_k)]"""
    lo, hi = p.box(u)
    return [Interval(float(a), float(b)) for a, b in zip(lo, hi)]


@vector_argument
def residual(p, u):
    """max_k dist((A u)_k, lambda alpha_k [g-_k(u_k), g+_k(u_k)])"""
    lo, hi = p.box(u)
    return float(np.max(box_distance(p.matrix.matvec(u), lo, hi)))


def is_solution(p, u, tol):
    if tol < 0:
        raise OutOfRange(f'tolerance must be nonnegative, got {tol}')
    return residual(p, u) <= tol


@vector_argument
def descent_direction(p, u):
    """A u - lambda s with s_k the point of [alpha_k g-_k, alpha_k g+_k](u_k)
    nearest to (A u)_k / lambda. Zero exactly when the residual is zero, and
    the classical gradient of J wherever every g_k is continuous
    """
    Au = p.matrix.matvec(u)
    lo, hi = p.box(u)
    return Au - np.clip(Au, lo, hi)


@vector_argument
def is_local_min(p, u, offset=LOCAL_MIN_PROBE):
    """Discrete probe: J(u) <= J(u +- offset e_k) for every k"""
    energy = j_lambda(p, u)
    for k in range(p.order):
        for sign in (1.0, -1.0):
            probe = u.copy()
            probe[k] += sign * offset
            if j_lambda(p, probe) < energy:
                return False
    return True


@vector_argument
def certify(p, u, kind=UNCLASSIFIED, route=None):
    """Freeze *u* into a :class:`CertifiedSolution`, residual and energy
    computed from the stored vector
    """
    return CertifiedSolution(u.copy(), residual(p, u), j_lambda(p, u), kind, route)
