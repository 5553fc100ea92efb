import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mch.classify import level_set_points, classify
from mch.profile import decay_peakon_parameters, periodic_peakon_parameters
from mch.quartic import WaveParameters, stumpon_a

settings.register_profile("mch", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mch")


@pytest.fixture
def smooth_params():
    return WaveParameters.two_real(-1.0, -0.5, 0.3)


@pytest.fixture
def cuspon_params():
    return WaveParameters.two_real(0.0, 2.0, 1.0)


@pytest.fixture
def peakon_params():
    return periodic_peakon_parameters(0.5)


@pytest.fixture
def decay_params():
    return decay_peakon_parameters(0.5)


def stumpon_cuspons(c=0.5, ms=(0.4, 0.45)):
    """Periodic cuspons on the ellipsoid whose a admits plateaus at phi = c."""
    out = []
    for m in ms:
        for p in level_set_points("ellipsoid", c, stumpon_a(c), m, (c + 1e-9, 3.0)):
            try:
                if classify(p).tag.value == "periodic-cuspon":
                    out.append(p)
            except ValueError:
                pass
    return out


def composite_pair(c=0.5, m_peak=0.45, m_cusp=0.4055):
    """A periodic peakon and a periodic cuspon sharing c and a."""
    r = 0.5 * (-(m_peak + c) + np.sqrt((m_peak + c) ** 2 - 4 * (m_peak**2 + c * c + m_peak * c - 2 * c)))
    peak = WaveParameters.four_real(m_peak, c, r, c)
    cusp = [p for p in level_set_points("ellipsoid", c, peak.a, m_cusp, (c + 1e-9, 1.5), n_scan=400)
            if classify(p).tag.value == "periodic-cuspon"][0]
    return peak, cusp


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
