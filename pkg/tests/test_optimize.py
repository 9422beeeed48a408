import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cipc_covert import optimize as op
from cipc_covert.errors import DomainError, InfeasibleError
from cipc_covert.model import SchemeConfig, SystemParams, db_to_linear
from cipc_covert.outage import outage_probability_at

# mpmath quadrature of (1 - ln(1+y)/y) e^-y on (0, inf)
XI_BAR_PHI_ONE = 0.25480404361390331748


def test_xi_bar_conventional_spot(unit_sys, conv_cfg):
    assert op.xi_bar_conventional(1.0, conv_cfg, unit_sys) == pytest.approx(XI_BAR_PHI_ONE, rel=1e-12)
    assert op.xi_bar_conventional_closed_form(1.0, conv_cfg, unit_sys) == \
        pytest.approx(XI_BAR_PHI_ONE, rel=1e-12)


@pytest.mark.parametrize("q", np.geomspace(0.01, 10, 10))
def test_closed_form_matches_quadrature(q, unit_sys, conv_cfg):
    cf = op.xi_bar_conventional_closed_form(q, conv_cfg, unit_sys)
    quad = op.xi_bar_conventional(q, conv_cfg, unit_sys)
    assert abs(cf - quad) <= 1e-7 * quad


def test_closed_form_domain(unit_sys, conv_cfg):
    with pytest.raises(DomainError):
        op.xi_bar_conventional_closed_form(100.0, conv_cfg, unit_sys)


def test_xi_bar_limits(unit_sys, conv_cfg, trunc_cfg):
    assert op.xi_bar_conventional(1e6, conv_cfg, unit_sys) < 1e-4
    for q in np.geomspace(0.01, 10, 10):
        v = op.xi_bar_truncated(q, trunc_cfg, unit_sys)
        assert 0.0 <= v <= 1.0
    with pytest.raises(DomainError):
        op.xi_bar_truncated(1.0, conv_cfg, unit_sys)


def test_xi_bar_decreasing_in_q(unit_sys, conv_cfg, trunc_cfg):
    qs = np.geomspace(1e-3, 1e2, 20)
    for cfg in (conv_cfg, trunc_cfg.with_(p_a_max=10.0)):
        vals = [op.xi_bar(q, cfg, unit_sys) for q in qs]
        assert all(b < a for a, b in zip(vals, vals[1:]))


@settings(max_examples=15)
@given(st.floats(0.05, 20), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.1, 10))
def test_conventional_depends_only_on_phi(p_b_max, l_ab, l_aw, l_bw, q):
    a_sys = SystemParams(lambda_ab=l_ab, lambda_aw=l_aw, lambda_bw=l_bw)
    a_cfg = SchemeConfig("conventional", q=q, p_b_max=p_b_max, rate=0.1, epsilon=0.1)
    phi = p_b_max * l_ab * l_bw / (q * l_aw)
    b_cfg = a_cfg.with_(q=1.0, p_b_max=phi)
    assert op.xi_bar_conventional(q, a_cfg, a_sys) == \
        pytest.approx(op.xi_bar_conventional(1.0, b_cfg, SystemParams()), rel=1e-9, abs=1e-12)


def test_truncated_xi_bar_converges(unit_sys, conv_cfg, trunc_cfg):
    conv = op.xi_bar_conventional(1.0, conv_cfg, unit_sys)
    trunc = op.xi_bar_truncated(1.0, trunc_cfg.with_(p_a_max=1e6), unit_sys)
    assert abs(trunc - conv) < 1e-4


def test_solve_q_epsilon(unit_sys, conv_cfg):
    q = op.solve_q_epsilon(conv_cfg, unit_sys)
    assert abs(op.xi_bar_conventional(q, conv_cfg, unit_sys) - 0.8) < 1e-8
    q2 = op.solve_q_epsilon(conv_cfg.with_(p_b_max=2.0), unit_sys)
    assert q2 / q == pytest.approx(2.0, rel=1e-6)
    small = [op.solve_q_epsilon(conv_cfg.with_(epsilon=e), unit_sys) for e in (1e-2, 1e-3, 1e-4)]
    assert small[0] > small[1] > small[2] and small[2] < 1e-4
    with pytest.raises(DomainError):
        op.solve_q_epsilon(conv_cfg.with_(epsilon=0.5), unit_sys)


def test_ect_examples(unit_sys, conv_cfg, trunc_cfg):
    no_si = unit_sys.with_(phi=0.0)
    assert op.ect(2.0, 1.0, conv_cfg, no_si) == 1.0
    assert op.ect(1.0, 0.5, trunc_cfg, no_si) == pytest.approx(0.5 * math.exp(-1), rel=1e-15)
    sp = SystemParams(phi=0.1)
    cfg = conv_cfg.with_(p_b_max=10.0)
    assert op.ect(2.0, 1.0, cfg, sp) == pytest.approx(1 - 0.14849550677592204792, abs=1e-12)
    with pytest.raises(DomainError):
        op.ect(1.0, 1.0, conv_cfg, unit_sys)


def test_optimize_conventional_paths():
    sp = SystemParams(phi=0.1)
    cfg = SchemeConfig("conventional", q=1.0, p_b_max=100.0, rate=1.0, epsilon=0.1)
    res = op.optimize_conventional(cfg, sp)
    assert res.constraint_slack >= -1e-9
    assert res.ect == pytest.approx(op.ect(res.q_star, res.r_used, cfg, sp), abs=1e-10)
    assert 0 <= res.ect <= res.r_used
    assert res.asymptotic_bound >= res.ect


def test_optimize_conventional_rate():
    sp = SystemParams(phi=0.1)
    cfg = SchemeConfig("conventional", q=1.0, p_b_max=100.0, rate=1.0, epsilon=0.1)
    res = op.optimize_conventional(cfg, sp, optimize_rate=True)
    for r in np.linspace(0.01, math.log2(1 + res.q_star) - 1e-6, 50):
        assert res.ect >= r * (1 - outage_probability_at(res.q_star, r, 100.0, sp)) - 1e-9


def test_asymptotic_bound():
    sp = SystemParams(phi=0.1)
    cfg = SchemeConfig("conventional", q=1.0, p_b_max=1.0, rate=1.0, epsilon=0.1)
    assert op.asymptotic_ect_bound(cfg, sp.with_(phi=0.0)) == 1.0
    bound = op.asymptotic_ect_bound(cfg, sp)
    vals = [op.optimize_conventional(cfg.with_(p_b_max=10.0 ** k), sp).ect for k in range(4, 8)]
    assert all(v <= bound for v in vals)
    gaps = [bound - v for v in vals]
    # gap shrinks tenfold per decade of p_b_max
    assert all(g2 == pytest.approx(g1 / 10, rel=1e-2) for g1, g2 in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-6


def test_bound_dominates_sweep():
    sp = SystemParams(phi=0.5)
    cfg = SchemeConfig("conventional", q=1.0, p_b_max=1.0, rate=1.0, epsilon=0.1)
    for db in range(0, 61, 10):
        res = op.optimize_conventional(cfg.with_(p_b_max=db_to_linear(db)), sp)
        assert res.ect <= res.asymptotic_bound


def test_optimize_truncated_probe_audit():
    sp = SystemParams(phi=0.1)
    cfg = SchemeConfig("truncated", q=1.0, p_b_max=100.0, rate=1.0, epsilon=0.05, p_a_max=10.0)
    res = op.optimize_truncated(cfg, sp)
    assert res.constraint_slack >= -1e-9
    assert 0 <= res.ect <= res.r_used
    rng = np.random.default_rng(7)
    probes = np.sort(np.exp(rng.uniform(0.0, math.log(res.q_star * 3), 100))) + 1e-9
    checked = 0
    for q in probes:
        xb = op.xi_bar_truncated(q, cfg, sp)
        if op.constraint_slack(q, xb, cfg, sp) < 0:
            break  # end of the low-Q feasible interval
        assert res.ect >= op.ect(q, 1.0, cfg, sp) - 1e-9
        checked += 1
    assert checked > 20


def test_optimize_truncated_all_branches_dominates():
    sp = SystemParams(phi=0.1, sigma2_b=0.1)
    cfg = SchemeConfig("truncated", q=1.0, p_b_max=100.0, rate=1.0, epsilon=0.1, p_a_max=1e3)
    low = op.optimize_truncated(cfg, sp, optimize_rate=True)
    full = op.optimize_truncated(cfg, sp, optimize_rate=True, branch="all")
    assert full.ect >= low.ect
    assert full.constraint_slack >= -1e-9


def test_truncated_converges_to_conventional_optimum():
    sp = SystemParams(phi=0.1)
    cfg = SchemeConfig("truncated", q=1.0, p_b_max=100.0, rate=1.0, epsilon=0.1, p_a_max=1e6)
    t = op.optimize_truncated(cfg, sp)
    c = op.optimize_conventional(cfg, sp)
    assert abs(t.ect - c.ect) < 1e-3


def test_truncated_infeasible():
    sp = SystemParams(phi=0.1)
    # rate threshold far above anything covert at this epsilon
    cfg = SchemeConfig("truncated", q=1.0, p_b_max=1e-3, rate=1.0, epsilon=1e-4, p_a_max=1e-3)
    with pytest.raises(InfeasibleError):
        op.optimize_truncated(cfg, sp)


def test_best_rate_empty_range():
    r, v = op.best_rate(1e-6, 1.0, SystemParams())
    assert math.isnan(r) and v == 0.0
