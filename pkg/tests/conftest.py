import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[str, list[tuple[str, str, float]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, seconds): acceptance criterion with its time bound")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    label = key = mark.args[0]
    if hasattr(item, "callspec"):
        label += f"[{item.callspec.id}]"
    _results.setdefault(key.split(".")[0], []).append((label, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results, key=int):
        parts = _results[key]
        ok = all(o == "passed" for _, o, _ in parts)
        total = sum(d for _, _, d in parts)
        detail = ""
        if len(parts) > 1:
            detail = "  [" + ", ".join(f"{l}: {'pass' if o == 'passed' else 'FAIL'}" for l, o, _ in parts) + "]"
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({total:.1f} s){detail}")
