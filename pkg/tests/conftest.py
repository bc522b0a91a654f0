import pytest

_ACCEPTANCE_MODULE = "test_acceptance"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one PASS/FAIL line per acceptance criterion as it finishes."""
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    module = getattr(item, "module", None)
    if module is None or module.__name__ != _ACCEPTANCE_MODULE:
        return
    label = getattr(item.function, "_criterion", item.name)
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        word = "PASS" if rep.passed else "FAIL"
        reporter.write_line(f"[acceptance] {word} criterion {label}")
