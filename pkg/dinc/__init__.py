# -*- coding: utf-8 -*-
"""Multiplicity of solutions for discrete differential inclusions"""

try:
    from dinc.core import *  # NOQA
except ImportError:
    pass

from .__version__ import __version__

__author__ = 'pydinc developers'
