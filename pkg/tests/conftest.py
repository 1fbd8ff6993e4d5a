import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).parent))

# Scopes under which the repaired fixture is enumerated and counted.
REPAIRED_SCOPES = {"default_scope": 0, "per_class": {"TruckList": 3}}


@pytest.fixture(scope="session")
def tol_text():
    return (FIXTURES / "tol.aie").read_text()


@pytest.fixture(scope="session")
def tol(tol_text):
    from metareason.frontend import parse, resolve_and_typecheck

    return resolve_and_typecheck(parse(tol_text, "tol.aie"))


@pytest.fixture(scope="session")
def tol_problem(tol):
    from metareason.compiler import compile

    return compile(tol)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
