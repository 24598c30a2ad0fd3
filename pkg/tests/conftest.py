import pytest

from trifam import antilinear as al
from trifam import cube_subspace as cs


@pytest.fixture(scope="session")
def v1234():
    return cs.subspace_from_coloring(cs.coloring_from_perm(al.parse_perm("(1234)")))


# -- acceptance summary: one PASS/FAIL line per criterion ----------------------

_criteria: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    """Set ``criterion.note`` inside an acceptance test; it shows in the summary."""
    class Note:
        note = ""
    holder = Note()
    yield holder
    request.node.user_properties.append(("criterion_note", holder.note))


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    note = dict(report.user_properties).get("criterion_note", "")
    if report.when == "teardown" and name in _criteria and not report.failed:
        _criteria[name] = (_criteria[name][0], note)
        return
    if report.when == "call" or report.failed or report.skipped:
        if report.failed:
            status = "FAIL"
        elif report.skipped:
            status = "SKIP"
        else:
            status = "PASS"
        if name not in _criteria or status != "PASS":
            _criteria[name] = (status, note)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        status, note = _criteria[name]
        label = name[len("test_criterion_"):]
        terminalreporter.write_line(f"{status}  criterion {label}" + (f"  [{note}]" if note else ""))
