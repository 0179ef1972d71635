"""Solver options, optionally persisted as JSON"""

__author__ = 'pydinc developers'

import json
import math
from dataclasses import dataclass, fields
from numbers import Integral, Real
from os.path import exists
from typing import Optional

from dinc.errors import InvalidConfig

#: Options that must be strictly positive reals
POSITIVE = ('tol_residual', 'tol_distinct', 'step_init')

#: Options counting iterations, starts or threads
COUNTS = ('starts', 'max_iters', 'string_iters', 'workers')


def _is_integer(value):
    return isinstance(value, Integral) and not isinstance(value, bool)


def _is_real(value):
    return isinstance(value, Real) and not isinstance(value, bool) and math.isfinite(value)


@dataclass
class SolveConfig:
    """Options shared by every solver route. Unset options read as None
    until :meth:`load` or :func:`dinc.core.config` fills them in.
    """
    tol_residual: Optional[float]
    tol_distinct: Optional[float]
    starts: Optional[int]
    seed: Optional[int]
    max_iters: Optional[int]
    step_init: Optional[float]
    path_nodes: Optional[int]
    string_iters: Optional[int]
    workers: Optional[int]

    def __init__(self, config_path=None, **options):
        self.config_path = config_path
        for name in self.names():
            setattr(self, name, None)
        self.update(**options)

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]

    def get(self, name, default=None):
        value = getattr(self, name, None)
        return default if value is None else value

    def set(self, name, value):
        if name not in self.names():
            raise InvalidConfig(f'unknown solver option {name!r}')
        setattr(self, name, value)

    def update(self, **options):
        for name, value in options.items():
            self.set(name, value)
        return self

    def all(self):
        return {name: getattr(self, name) for name in self.names()}

    def copy(self, **options):
        """Return an independent copy with *options* applied on top"""
        return SolveConfig(self.config_path, **self.all()).update(**options)

    def load(self):
        """Fill unset options from the JSON file at ``config_path``; explicit
        values are kept
        """
        if self.config_path is None or not exists(self.config_path):
            return self
        with open(self.config_path) as f:
            stored = json.load(f)
        if not isinstance(stored, dict):
            raise InvalidConfig(f'{self.config_path} does not hold a JSON object')
        for name in self.names():
            if getattr(self, name) is None:
                setattr(self, name, stored.get(name))
        return self

    def store(self):
        with open(self.config_path, 'w') as f:
            json.dump(self.all(), f, indent=2)

    def validate(self):
        """Check the option invariants and return self"""
        missing = [name for name, value in self.all().items() if value is None]
        if missing:
            raise InvalidConfig(f'missing solver options {missing}')
        for name in POSITIVE:
            value = getattr(self, name)
            if not _is_real(value) or value <= 0:
                raise InvalidConfig(f'{name} must be a positive real, got {value!r}')
        for name in COUNTS + ('seed', 'path_nodes'):
            if not _is_integer(getattr(self, name)):
                raise InvalidConfig(f'{name} must be an integer, got {getattr(self, name)!r}')
        for name in COUNTS:
            if getattr(self, name) < 1:
                raise InvalidConfig(f'{name} must be at least 1')
        if self.seed < 0:
            raise InvalidConfig('seed must be unsigned')
        if self.path_nodes < 3 or self.path_nodes % 2 == 0:
            raise InvalidConfig('path_nodes must be odd and at least 3')
        return self
