import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cipc_covert.errors import ConfigError, DomainError
from cipc_covert.model import (
    ChannelDraw,
    Priors,
    Scheme,
    SchemeConfig,
    SystemParams,
    condition_c_probability,
    db_to_linear,
    is_decodable,
    linear_to_db,
    priors,
    validate,
)


@pytest.mark.parametrize("db, lin", [(0, 1.0), (10, 10.0), (20, 100.0)])
def test_db_to_linear(db, lin):
    assert db_to_linear(db) == pytest.approx(lin, rel=1e-15)


@given(st.floats(-100, 100))
def test_db_round_trip(x):
    assert linear_to_db(db_to_linear(x)) == pytest.approx(x, abs=1e-12)


def test_system_params_defaults_and_reciprocity():
    sp = SystemParams()
    assert (sp.lambda_ab, sp.lambda_aw, sp.lambda_bw, sp.lambda_bb) == (1, 1, 1, 1)
    assert sp.with_(lambda_ab=3.0).lambda_ba == 3.0


@pytest.mark.parametrize("field, value", [
    ("lambda_ab", 0.0), ("lambda_bw", -1.0), ("sigma2_b", 0.0), ("sigma2_w", float("inf")),
    ("phi", -0.1), ("phi", 1.5),
])
def test_system_params_rejects(field, value):
    with pytest.raises(ConfigError):
        SystemParams(**{field: value})


@pytest.mark.parametrize("changes", [
    {"q": 0.0}, {"p_b_max": -1.0}, {"rate": 0.0}, {"epsilon": 1.2},
    {"scheme": "truncated"}, {"scheme": "truncated", "p_a_max": 0.0},
])
def test_scheme_config_rejects(changes):
    base = dict(scheme="conventional", q=1.0, p_b_max=1.0, rate=1.0, epsilon=0.1)
    base.update(changes)
    with pytest.raises(ConfigError):
        SchemeConfig(**base)


def test_scheme_coercion():
    cfg = SchemeConfig("truncated", q=1, p_b_max=1, rate=1, epsilon=0.1, p_a_max=1)
    assert cfg.scheme is Scheme.TRUNCATED and cfg.truncated


def test_decodability_guard(unit_sys):
    assert not is_decodable(1.0, 1.0, unit_sys)
    assert is_decodable(1.0, 0.99, unit_sys)
    cfg = SchemeConfig("conventional", q=1.0, p_b_max=1.0, rate=1.0, epsilon=0.1)
    with pytest.raises(ConfigError):
        validate(cfg, unit_sys)
    validate(cfg.with_(q=1.5), unit_sys)


def test_channel_draw_rejects_negative():
    with pytest.raises(DomainError):
        ChannelDraw(g_ab=-1, g_aw=1, g_bw=1, g_bb=1, p_b=0)
    with pytest.raises(DomainError):
        ChannelDraw(g_ab=1, g_aw=1, g_bw=1, g_bb=1, p_b=-0.5)


def test_condition_c_examples(unit_sys, trunc_cfg, conv_cfg):
    assert condition_c_probability(trunc_cfg, unit_sys) == pytest.approx(math.exp(-1), rel=1e-15)
    assert condition_c_probability(trunc_cfg.with_(p_a_max=1e15), unit_sys) == pytest.approx(1.0)
    assert condition_c_probability(conv_cfg, unit_sys) == 1.0


def test_condition_c_monotone_grid(unit_sys, trunc_cfg):
    qs = np.geomspace(0.01, 10, 10)
    pas = np.geomspace(0.1, 100, 10)
    grid = np.array([[condition_c_probability(trunc_cfg.with_(q=q, p_a_max=pa), unit_sys)
                      for pa in pas] for q in qs])
    assert np.all(np.diff(grid, axis=0) < 0)
    assert np.all(np.diff(grid, axis=1) > 0)


def test_priors_examples(unit_sys, trunc_cfg, conv_cfg):
    assert priors(conv_cfg, unit_sys) == Priors(0.5, 0.5)
    p = priors(trunc_cfg, unit_sys)
    assert p.pi1 == pytest.approx(0.5 * math.exp(-1), rel=1e-15)
    assert p.pi0 == pytest.approx(1 - 0.5 * math.exp(-1), rel=1e-15)
    limit = priors(trunc_cfg.with_(p_a_max=1e15), unit_sys)
    assert limit.pi0 == pytest.approx(0.5) and limit.pi1 == pytest.approx(0.5)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(0.1, 10))
def test_priors_invariants(q, pa, lam):
    sp = SystemParams(lambda_ab=lam)
    cfg = SchemeConfig("truncated", q=q, p_b_max=1.0, rate=0.1, epsilon=0.1, p_a_max=pa)
    p = priors(cfg, sp)
    assert p.pi0 + p.pi1 == pytest.approx(1.0, abs=1e-15)
    assert 0 <= p.pi1 <= 0.5 and p.smaller == p.pi1
