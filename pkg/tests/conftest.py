import pytest

from satrelay.channels import SHADOWING
from satrelay.linkmodel import NetworkConfig, PowerProfile

GRID = [(sh, n, psi) for sh in ("HS", "AS") for n in (1, 3) for psi in (10.0, 20.0, 30.0)]


def grid_config(shadowing, n, psi_db):
    """Default CEEs (0.25), Phi = 10 dB, Theta = 1 dB, C_th = 1, unit rates."""
    return NetworkConfig(relays=(SHADOWING[shadowing],) * n, power=PowerProfile(psi_db=psi_db))


@pytest.fixture(params=GRID, ids=lambda c: f"{c[0]}-N{c[1]}-{c[2]:g}dB")
def grid_case(request):
    return request.param


# lines recorded by the acceptance suite, echoed after the run
REPORT = []


def report(line: str) -> None:
    REPORT.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
