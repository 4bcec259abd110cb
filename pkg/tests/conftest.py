import socket
import time

import pytest

from mushannif.corpus import LabeledDocument

SUITE_BUDGET_SECONDS = 60.0

_started = time.monotonic()
_criteria: dict = {}


class NetworkBlocked(RuntimeError):
    pass


def _refuse(*args, **kwargs):
    raise NetworkBlocked("network access is not allowed during tests")


@pytest.fixture(autouse=True, scope="session")
def no_network():
    saved = socket.socket.connect, socket.socket.connect_ex, socket.create_connection
    socket.socket.connect = _refuse
    socket.socket.connect_ex = _refuse
    socket.create_connection = _refuse
    yield
    socket.socket.connect, socket.socket.connect_ex, socket.create_connection = saved


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by this test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _criterion_of.get(report.nodeid)
    if marker is None:
        return
    number, title = marker
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "tests": 0})
    entry["tests"] += 1
    entry["passed"] &= report.outcome == "passed"


_criterion_of: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_of[item.nodeid] = (m.args[0], m.args[1])


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.monotonic() - _started
    session.config._suite_elapsed = elapsed
    if _criteria and elapsed > SUITE_BUDGET_SECONDS and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    elapsed = getattr(config, "_suite_elapsed", time.monotonic() - _started)
    tr = terminalreporter
    tr.section("acceptance criteria")
    in_budget = elapsed <= SUITE_BUDGET_SECONDS
    for number in sorted(_criteria):
        entry = _criteria[number]
        passed = entry["passed"]
        detail = f"{entry['title']} ({entry['tests']} test(s))"
        if number == 8:
            passed = passed and in_budget
            detail += f"; wall time {elapsed:.1f}s of {SUITE_BUDGET_SECONDS:.0f}s"
        tr.write_line(f"AC{number} {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def write_corpus(tmp_path):
    """Write {class: {filename: text or bytes}} under a fresh root and return it."""

    def _write(layout, root=None):
        root = root or tmp_path / "corpus"
        root.mkdir(parents=True, exist_ok=True)
        for label, files in layout.items():
            (root / label).mkdir(exist_ok=True)
            for name, content in files.items():
                target = root / label / name
                if isinstance(content, bytes):
                    target.write_bytes(content)
                else:
                    target.write_text(content, encoding="utf-8")
        return root

    return _write


@pytest.fixture
def doc():
    def _doc(text, label=None, id="d.txt"):
        return LabeledDocument(id=id, text=text, label=label)

    return _doc
