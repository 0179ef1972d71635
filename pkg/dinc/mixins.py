# -*- coding: utf-8 -*-
"""Contains various MixIns"""

__author__ = 'pydinc developers'

import math
from dataclasses import fields

import numpy as np


def jsonable(value):
    if hasattr(value, 'to_json'):
        return value.to_json()
    if hasattr(value, '_asdict'):
        return {k: jsonable(v) for k, v in value._asdict().items()}
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (np.floating, float)):
        value = float(value)
        # JSON has no infinity; keep the information as a string
        return value if math.isfinite(value) else str(value)
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    return value


class JsonMixin:
    """
    Provides Mixin to translate @dataclass reports into JSON ready dicts,
    using the field names of the dataclass as keys.
    """

    #: Fields left out of the JSON representation
    json_exclude = ()

    def to_json(self):
        return {
            f.name: jsonable(getattr(self, f.name))
            for f in fields(self) if f.name not in self.json_exclude
        }
