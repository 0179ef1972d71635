# -*- coding: utf-8 -*-
import numpy as np

from dinc.errors import DimensionMismatch

__author__ = 'pydinc developers'
__all__ = ['as_vector', 'box_distance', 'sup_distance', 'log_grid',
           'real_roots_in']


def as_vector(u, order=None):
    """Convert *u* to a one dimensional float array, checking its length
    against *order* when given
    """
    vector = np.array(u, dtype=float).reshape(-1)
    if order is not None and vector.shape[0] != order:
        raise DimensionMismatch(f'expected length {order}, got {vector.shape[0]}')
    return vector


def box_distance(x, lo, hi):
    """Distance from *x* to the closed interval [lo, hi], elementwise"""
    return np.maximum(np.maximum(lo - x, x - hi), 0.0)


def sup_distance(u, v):
    """Sup-norm distance between two vectors"""
    return float(np.max(np.abs(np.asarray(u) - np.asarray(v)), initial=0.0))


def log_grid(lo, hi, num):
    """*num* log-spaced points from *lo* to *hi* (both positive)"""
    if lo == hi:
        return np.array([float(lo)])
    return np.geomspace(lo, hi, num)


def real_roots_in(poly, lo, hi):
    """Real roots of the numpy Polynomial *poly* lying strictly inside
    ]lo, hi[ (either end may be infinite). The zero polynomial has none
    """
    if poly.degree() < 1 or not np.any(poly.coef):
        return np.array([])
    roots = poly.roots()
    real = roots[np.abs(roots.imag) <= 1e-10 * np.maximum(1.0, np.abs(roots))].real
    return np.sort(real[(real > lo) & (real < hi)])
