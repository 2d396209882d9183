import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from iht.simulation import SimConfig, generate
from iht.standardize import standardize

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def ozone_csv():
    from importlib.resources import files

    return str(files("iht").joinpath("data/ozone330.csv"))


# Acceptance criterion outcomes, echoed after the run so they are visible
# without -s.
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_sample(model="linquad", n=200, p=4, sigma=0.4, seed=11, rep=0):
    """Standardized sample from a simulation draw, for unit tests."""
    cfg = SimConfig(model=model, n=n, p=p, sigma=sigma, reps=1, seed=seed)
    d = generate(cfg, rep)
    return d, standardize(d)
