# -*- coding: utf-8 -*-
"""Structured symmetric positive definite matrices of discrete boundary value
problems: tridiagonal and second-order operators, the fourth-order
(biharmonic) stencil and the five point grid Laplacian. Spectra are computed
with a cyclic Jacobi iteration
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Tuple

import numpy as np

from dinc.decorators import vector_argument
from dinc.errors import (AdmissibilityViolation, ConvergenceFailure,
                         InvalidSign, NotPositiveDefinite, NotSymmetric,
                         OutOfRange, ValidationError)
from dinc.mixins import JsonMixin

__author__ = 'pydinc developers'
__all__ = ['SpdMatrix', 'Spectrum', 'GridShape', 'build_tridiagonal',
           'build_second_order', 'build_fourth_order', 'build_grid_laplacian',
           'grid_index', 'grid_index_inverse', 'grid_neighbors', 'spectrum',
           'tridiagonal_eigenvalue', 'ones_quadratic', 'quadratic_form',
           'jacobi_eigenvalues']

logger = logging.getLogger(__name__)

#: Sweeps stop once the off-diagonal Frobenius norm drops below this fraction
#: of the Frobenius norm of the matrix
JACOBI_TOL = 1e-14

#: Sweep budget of the Jacobi iteration
JACOBI_SWEEPS = 100

#: Coefficients of the fourth difference, offsets -2..2
BIHARMONIC_STENCIL = (1.0, -4.0, 6.0, -4.0, 1.0)


def _check_order(T, minimum=1):
    if int(T) != T or T < minimum:
        raise OutOfRange(f'order must be an integer >= {minimum}, got {T}')
    return int(T)


@dataclass(frozen=True)
class Spectrum(JsonMixin):
    """Eigenvalues of a symmetric matrix in ascending order"""
    eigenvalues: Tuple[float, ...]
    lambda_min: float
    lambda_max: float

    @classmethod
    def from_values(cls, values):
        ordered = tuple(float(v) for v in np.sort(np.asarray(values, dtype=float)))
        return cls(ordered, ordered[0], ordered[-1])

    @property
    def order(self):
        return len(self.eigenvalues)

    @property
    def condition_number(self):
        return self.lambda_max / self.lambda_min


@dataclass(frozen=True, eq=False)
class SpdMatrix(JsonMixin):
    """Dense symmetric positive definite matrix, stored fully and read-only.

    Construction fails with :class:`~dinc.errors.NotSymmetric` unless the
    entries are bit-equal to their transpose, and with
    :class:`~dinc.errors.NotPositiveDefinite` when the Cholesky factorization
    does not exist.
    """
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        try:
            entries = np.array(self.entries, dtype=float)
        except (TypeError, ValueError) as e:
            raise ValidationError(f'matrix entries must be real numbers: {e}')
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise ValidationError(f'expected a non-empty square matrix, got shape {entries.shape}')
        if not np.array_equal(entries, entries.T):
            raise NotSymmetric()
        try:
            np.linalg.cholesky(entries)
        except np.linalg.LinAlgError as e:
            raise NotPositiveDefinite(str(e))
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    def __repr__(self):
        return f'<SpdMatrix>: order {self.order}'

    @property
    def order(self):
        return self.entries.shape[0]

    @cached_property
    def spectrum(self):
        """The :class:`Spectrum` of this matrix, computed once"""
        return Spectrum.from_values(jacobi_eigenvalues(self.entries))

    @property
    def lambda_min(self):
        return self.spectrum.lambda_min

    def matvec(self, u):
        return self.entries @ u

    def to_json(self):
        return {'order': self.order, 'entries': self.entries.tolist()}


@dataclass(frozen=True)
class GridShape:
    """Rectangular grid with *m* columns and *n* rows"""
    m: int
    n: int

    def __post_init__(self):
        _check_order(self.m)
        _check_order(self.n)

    @property
    def order(self):
        return self.m * self.n


@lru_cache(maxsize=None)
def _round_robin(n):
    """Split all index pairs p < q of an order *n* matrix into n - 1 (or n,
    for odd n) rounds of disjoint pairs, tournament style
    """
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[i], players[size - 1 - i]) for i in range(size // 2)]
        pairs = sorted((min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0)
        if pairs:
            rounds.append((np.array([p for p, _ in pairs]),
                           np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigenvalues(entries, tol=JACOBI_TOL, max_sweeps=JACOBI_SWEEPS):
    """Eigenvalues of the symmetric matrix *entries* by cyclic Jacobi
    rotations, ascending.

    Each sweep visits every pair p < q once; pairs are grouped into rounds of
    disjoint rotations which commute and are applied together.

    :raises ConvergenceFailure: if *max_sweeps* sweeps do not reduce the
        off-diagonal norm below ``tol * ||A||_F``
    """
    a = np.array(entries, dtype=float)
    scale = float(np.linalg.norm(a))
    rounds = _round_robin(a.shape[0])
    previous = math.inf
    for sweep in range(max_sweeps + 1):
        off = _off_norm(a)
        # rounding keeps the off-diagonal mass from shrinking any further
        stalled = off >= previous and off <= 1e-10 * scale
        if off <= tol * scale or stalled:
            logger.debug('Jacobi converged after %d sweeps (off=%.3e)', sweep, off)
            return np.sort(np.diag(a))
        previous = off
        if sweep == max_sweeps:
            break
        for P, Q in rounds:
            apq = a[P, Q]
            if not np.any(apq):
                continue
            app, aqq = a[P, P], a[Q, Q]
            active = apq != 0
            theta = (aqq - app) / (2.0 * np.where(active, apq, 1.0))
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.hypot(t, 1.0)
            s = t * c

            cols_p, cols_q = a[:, P], a[:, Q]
            a[:, P] = cols_p * c - cols_q * s
            a[:, Q] = cols_p * s + cols_q * c
            rows_p, rows_q = a[P, :], a[Q, :]
            a[P, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[Q, :] = s[:, None] * rows_p + c[:, None] * rows_q

            a[P, Q] = 0.0
            a[Q, P] = 0.0
            a[P, P] = app - t * apq
            a[Q, Q] = aqq + t * apq

    raise ConvergenceFailure(f'off-diagonal norm {off:.3e} after {max_sweeps} sweeps')


def _check_signs(a, b):
    if not (a < 0 < b):
        raise InvalidSign(f'a={a}, b={b}')


def build_tridiagonal(T, a, b):
    """Build T_T(a, b, a): *b* on the diagonal, *a* on both off-diagonals.

    :raises InvalidSign: unless a < 0 < b
    :raises AdmissibilityViolation: unless cos(pi/(T+1)) < -b/(2a)
    """
    T = _check_order(T, minimum=2)
    _check_signs(a, b)
    if not math.cos(math.pi / (T + 1)) < -b / (2.0 * a):
        raise AdmissibilityViolation(f'cos(pi/{T + 1}) >= {-b / (2.0 * a)}')
    entries = b * np.eye(T) + a * (np.eye(T, k=1) + np.eye(T, k=-1))
    return SpdMatrix(entries)


def build_second_order(T):
    """Matrix of -Delta^2 u_{k-1} with u_0 = u_{T+1} = 0, i.e. T_T(-1, 2, -1)"""
    T = _check_order(T)
    if T == 1:
        return SpdMatrix([[2.0]])
    return build_tridiagonal(T, -1.0, 2.0)


def build_fourth_order(T):
    """Matrix of Delta^4 u_{k-2} with three homogeneous conditions at each end:
    the (1, -4, 6, -4, 1) stencil truncated to columns inside [1, T]
    """
    T = _check_order(T)
    entries = sum(c * np.eye(T, k=offset)
                  for offset, c in zip(range(-2, 3), BIHARMONIC_STENCIL))
    return SpdMatrix(entries)


def _path_adjacency(size):
    return np.eye(size, k=1) + np.eye(size, k=-1)


def build_grid_laplacian(shape):
    """Five point Laplacian B of an m x n grid with Dirichlet boundary,
    flattened by :func:`grid_index`: diagonal blocks L = T_m(-1, 4, -1) and
    off-diagonal blocks -I_m
    """
    m, n = shape.m, shape.n
    entries = (4.0 * np.eye(m * n)
               - np.kron(np.eye(n), _path_adjacency(m))
               - np.kron(_path_adjacency(n), np.eye(m)))
    return SpdMatrix(entries)


def grid_index(i, j, shape):
    """1-based flat index z(i, j) = i + m(j - 1)"""
    if not (1 <= i <= shape.m and 1 <= j <= shape.n):
        raise OutOfRange(f'cell ({i}, {j}) outside {shape.m} x {shape.n} grid')
    return i + shape.m * (j - 1)


def grid_index_inverse(k, shape):
    """Inverse of :func:`grid_index`: the cell (i, j) of flat index *k*"""
    if not 1 <= k <= shape.order:
        raise OutOfRange(f'index {k} outside 1..{shape.order}')
    j = (k - 1) // shape.m + 1
    return k - shape.m * (j - 1), j


def grid_neighbors(i, j, shape):
    """Cells sharing an edge with (i, j) inside the grid"""
    candidates = ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))
    return [(p, q) for p, q in candidates if 1 <= p <= shape.m and 1 <= q <= shape.n]


def spectrum(A):
    """All eigenvalues of *A*, ascending"""
    return A.spectrum


def tridiagonal_eigenvalue(k, T, a, b):
    """Closed form k-th smallest eigenvalue of T_T(a, b, a),
    b + 2a cos(k pi / (T+1)); increasing in k because a < 0
    """
    _check_signs(a, b)
    T = _check_order(T)
    if int(k) != k or not 1 <= k <= T:
        raise OutOfRange(f'k={k} outside 1..{T}')
    return b + 2.0 * a * math.cos(k * math.pi / (T + 1))


def ones_quadratic(A):
    """1^t A 1, the sum of all entries: trace(A) + 2 sum_{i<j} a_ij"""
    return float(A.entries.sum())


@vector_argument
def quadratic_form(A, u):
    """u^t A u"""
    return float(u @ A.entries @ u)
