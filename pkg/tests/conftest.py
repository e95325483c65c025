import importlib
import sys

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def _kernel_modules():
    mods = [importlib.import_module("dsqc.qcore._kernels_py")]
    try:
        mods.append(importlib.import_module("dsqc.qcore._kernels"))
    except ImportError:
        pass
    return mods


@pytest.fixture(params=_kernel_modules(), ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernels(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        passed, detail = results[number]
        terminalreporter.write_line(f"ACCEPTANCE {number} {'PASS' if passed else 'FAIL'} {detail}")
