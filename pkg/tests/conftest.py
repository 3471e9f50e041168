import functools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from modfrm import FilterSpec, ModalConfig, build_uniform_bank, design_modfrm

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")

PI = math.pi

# ripple/attenuation shared by every subfilter of the reference designs
RIPPLE_DB = 0.0065
ATTEN_DB = 60.0


@functools.lru_cache(maxsize=None)
def reference_design(m, L, theta_pi, phi_pi, case="I"):
    """Designs are deterministic, so one build per configuration is shared."""
    spec = FilterSpec(theta_pi * PI, phi_pi * PI, RIPPLE_DB, ATTEN_DB)
    config = ModalConfig(theta_pi * PI, phi_pi * PI, m, L, case)
    return design_modfrm(spec, config)


@functools.lru_cache(maxsize=None)
def reference_bank(m, L, theta_pi, phi_pi, case="I"):
    return build_uniform_bank(reference_design(m, L, theta_pi, phi_pi, case))


@pytest.fixture(scope="session")
def design_l10():
    return reference_design(3, 10, 0.2, 0.3)


@pytest.fixture(scope="session")
def design_l40():
    return reference_design(3, 40, 0.2, 0.3)


@pytest.fixture(scope="session")
def design_m1():
    return reference_design(1, 25, 0.4, 0.6)


@pytest.fixture(scope="session")
def bank8():
    return reference_bank(3, 10, 0.2, 0.3)


@pytest.fixture(scope="session")
def bank32():
    return reference_bank(3, 40, 0.2, 0.3)


@pytest.fixture(scope="session")
def bank10():
    return reference_bank(1, 25, 0.4, 0.6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
