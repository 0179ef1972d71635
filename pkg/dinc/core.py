# -*- coding: utf-8 -*-
"""Objects, properties, and methods to be shared across other modules in the
dinc package
"""

import math
import os
from typing import NamedTuple

__author__ = 'pydinc developers'
__all__ = ['Interval', 'config', 'CONFIG_PATH', 'TOL_RESIDUAL',
           'TOL_DISTINCT', 'STARTS', 'SEED', 'MAX_ITERS', 'STEP_INIT',
           'PATH_NODES', 'STRING_ITERS', 'WORKERS', 'STRICT_SLACK',
           'AUTO_MID_RATIO']

#: Default path for a stored solver configuration
CONFIG_PATH = os.path.join(os.path.expanduser('~'), '.pydinc.json')

#: A point certifies as a solution when its inclusion residual is below this
TOL_RESIDUAL = 1e-8

#: Two solutions are distinct when their sup-norm distance reaches this
TOL_DISTINCT = 1e-4

#: Number of multistart descent runs
STARTS = 64

#: Seed of the generator drawing multistart points
SEED = 0

#: Iteration cap of a single descent run
MAX_ITERS = 100000

#: Initial (and reset) step of the backtracking descent
STEP_INIT = 1.0

#: Number of nodes of the mountain pass string, endpoints included
PATH_NODES = 33

#: Relaxation sweeps of the mountain pass string
STRING_ITERS = 200

#: Threads used to dispatch multistart runs
WORKERS = 1

#: Slack for strict inequalities evaluated in floating point
STRICT_SLACK = 1e-12

#: auto_mid uses the arithmetic midpoint up to this right/left ratio
AUTO_MID_RATIO = 100.0


def config(**overrides):
    """Build a :class:`SolveConfig` from the module level defaults, stored
    values at *CONFIG_PATH* and the given keyword overrides (in increasing
    order of precedence)
    """
    from dinc.config import SolveConfig

    cfg = SolveConfig(CONFIG_PATH).update(**overrides)
    cfg.load()
    cfg.update(**{
        key: value for key, value in dict(
            tol_residual=TOL_RESIDUAL,
            tol_distinct=TOL_DISTINCT,
            starts=STARTS,
            seed=SEED,
            max_iters=MAX_ITERS,
            step_init=STEP_INIT,
            path_nodes=PATH_NODES,
            string_iters=STRING_ITERS,
            workers=WORKERS,
        ).items() if cfg.get(key) is None
    })
    return cfg.validate()


class Interval(NamedTuple):
    """Open real interval ]left, right["""
    left: float
    right: float

    @property
    def is_empty(self):
        return not self.left < self.right

    def contains(self, value):
        return self.left < value < self.right

    def auto_mid(self):
        """Arithmetic midpoint when the interval is narrow (right/left at most
        *AUTO_MID_RATIO*), geometric mean otherwise. A half line ]left, inf[
        resolves to left * sqrt(AUTO_MID_RATIO)
        """
        if self.is_empty:
            return None
        if math.isinf(self.right):
            return self.left * math.sqrt(AUTO_MID_RATIO)
        if self.left > 0 and self.right / self.left > AUTO_MID_RATIO:
            return math.sqrt(self.left * self.right)
        return 0.5 * (self.left + self.right)
