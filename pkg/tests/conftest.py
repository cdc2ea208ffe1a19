import pytest

from priyasim.topology import Node, Position

ACCEPTANCE = []


def make_nodes(positions, energy=2.0):
    return [Node(i, Position(float(x), float(y)), energy, energy) for i, (x, y) in enumerate(positions)]


@pytest.fixture
def acceptance():
    def record(number, ok, detail=""):
        ACCEPTANCE.append((number, ok, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {detail}")
