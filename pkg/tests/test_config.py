# -*- coding: utf-8 -*-
"""tests for the solver configuration"""
import json

import numpy as np
import pytest

from dinc import core
from dinc.config import SolveConfig
from dinc.core import Interval, config
from dinc.errors import InvalidConfig


def test_defaults():
    cfg = config()
    assert cfg.tol_residual == core.TOL_RESIDUAL
    assert cfg.tol_distinct == core.TOL_DISTINCT
    assert cfg.starts == 64
    assert cfg.seed == 0
    assert cfg.path_nodes == 33
    assert cfg.workers == 1


def test_overrides_take_precedence():
    cfg = config(starts=8, seed=42)
    assert cfg.starts == 8
    assert cfg.seed == 42
    assert cfg.max_iters == core.MAX_ITERS


def test_unknown_option():
    with pytest.raises(InvalidConfig):
        config(stepsize=0.5)


def test_invalid_values():
    for bad in ({'tol_residual': 0.0}, {'starts': 0}, {'seed': -1},
                {'path_nodes': 4}, {'path_nodes': 1},
                {'starts': 16.5}, {'starts': True}, {'seed': 1.0}, {'path_nodes': 33.0},
                {'workers': '2'}, {'tol_residual': 'small'}, {'step_init': float('inf')}):
        with pytest.raises(InvalidConfig):
            config(**bad)


def test_missing_values():
    with pytest.raises(InvalidConfig):
        SolveConfig(None, starts=3).validate()


def test_store_and_load(tmp_path):
    """stored values fill the gaps but never overwrite explicit ones"""
    path = str(tmp_path / 'pydinc.json')
    stored = config(starts=12, seed=7).copy()
    stored.config_path = path
    stored.store()
    with open(path) as f:
        assert json.load(f)['starts'] == 12

    loaded = SolveConfig(path, seed=3)
    loaded.load()
    assert loaded.starts == 12
    assert loaded.seed == 3


def test_config_path(tmp_path, monkeypatch):
    path = tmp_path / 'pydinc.json'
    path.write_text(json.dumps({'starts': 5}))
    monkeypatch.setattr(core, 'CONFIG_PATH', str(path))
    assert config().starts == 5
    assert config(starts=9).starts == 9


def test_copy_is_independent():
    cfg = config()
    other = cfg.copy(seed=11)
    assert other.seed == 11
    assert cfg.seed == 0


def test_interval():
    interval = Interval(3.0, 75.0)
    assert not interval.is_empty
    assert interval.contains(4.0)
    assert not interval.contains(3.0)
    assert interval.auto_mid() == 39.0
    assert Interval(1.0, 1.0).is_empty
    assert Interval(2.0, 1.0).auto_mid() is None


def test_interval_auto_mid_wide():
    """geometric mean once the interval spans more than two decades"""
    assert Interval(1.0, 10000.0).auto_mid() == pytest.approx(100.0)
    assert Interval(0.6, float('inf')).auto_mid() == pytest.approx(6.0)


def test_numpy_integers_are_counts():
    assert config(starts=np.int64(8)).starts == 8
