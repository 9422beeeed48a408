import mpmath
import pytest
from hypothesis import HealthCheck, settings

from cipc_covert import SchemeConfig, SystemParams

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def unit_sys():
    return SystemParams()


@pytest.fixture
def conv_cfg():
    return SchemeConfig("conventional", q=1.0, p_b_max=1.0, rate=1.0, epsilon=0.1)


@pytest.fixture
def trunc_cfg():
    return SchemeConfig("truncated", q=1.0, p_b_max=1.0, rate=1.0, epsilon=0.1, p_a_max=1.0)


def mp_ei(x, dps=40):
    with mpmath.workdps(dps):
        return float(mpmath.ei(x))
