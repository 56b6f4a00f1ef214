import pytest

from inductolink.model import InductorPart, SourceSpec, load_default_catalog
from inductolink.transient import ClampChain

# Worked example: 0.8 kVA generator on a 48 V link, 500 uH / 0.2 ohm coil,
# 1N5335B zener (3.9 V) with SBR20A200CTB freewheel diode (0.5 V, 1.34 mohm).
EXAMPLE_L = 500e-6
EXAMPLE_RC = 0.2
EXAMPLE_I0 = 17.6


@pytest.fixture(scope="session")
def catalog():
    return load_default_catalog()


@pytest.fixture
def example_source():
    return SourceSpec(v_ll=0.048, s=0.8, f=50.0, v_dc=48.0)


@pytest.fixture
def example_inductor():
    return InductorPart(name="example-500uH", l=EXAMPLE_L, r=EXAMPLE_RC, i_max=20.0, p_max=80.0)


@pytest.fixture
def example_chain():
    return ClampChain(v_z=3.9, v_f=0.5, r_d=1.34e-3)


ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
