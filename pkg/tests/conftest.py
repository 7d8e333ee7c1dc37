import pytest
from hypothesis import HealthCheck, settings

from toptheory import quantale as qmod
from toptheory.theory import make_theory

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

QUANTALES = {
    "two": qmod.two,
    "goedel-chain(3)": lambda: qmod.goedel_chain(3),
    "lawvere-chain(4)": lambda: qmod.lawvere_chain(4),
}
THEORY_NAMES = ("identity", "finite-ultrafilter")


@pytest.fixture(params=list(QUANTALES), scope="session")
def quantale(request):
    return QUANTALES[request.param]()


@pytest.fixture(params=THEORY_NAMES, scope="session")
def theory_name(request):
    return request.param




ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
