import math

import numpy as np
import pytest

from qhm import golden
from qhm.classify43 import phi_t, rational_angle
from qhm.constructions import hopf_construction


def random_orthogonal(rng, m):
    Q, R = np.linalg.qr(rng.normal(size=(m, m)))
    return Q * np.sign(np.diag(R))


def golden_maps():
    """Exact golden harmonic morphisms, keyed by a readable name."""
    maps = {f"hopf{n}": hopf_construction(n) for n in (1, 2, 4, 8)}
    maps["nonumbilical_r8_r3"] = golden.nonumbilical_r8_r3()
    maps["umbilical_r8_r5"] = golden.umbilical_r8_r5()
    return maps


def sampled_phi_t(count=64):
    """phi_t(1, t) at rational points of the circle near t = 2 pi k / count."""
    return [phi_t(1, rational_angle(2 * math.pi * k / count)) for k in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {title}")
