"""Shared fixtures and the acceptance-criterion summary hook."""
import pytest

import eubalance as eb
from eubalance.reports import fit_series_points

# (criterion number, passed, detail), appended by tests/test_acceptance.py
CRITERION_RESULTS: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    CRITERION_RESULTS.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(CRITERION_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {number}: {status} - {detail}")


@pytest.fixture(scope="session")
def dataset():
    return eb.load_bundled()


@pytest.fixture(scope="session")
def regions():
    return eb.bundled_regions()


@pytest.fixture(scope="session")
def fit_points(dataset, regions):
    return {key: fit_series_points(dataset, regions, key)
            for key in ("eu9plus", "eu18minus", "euro7plus", "euro10minus")}


@pytest.fixture(scope="session")
def models(fit_points):
    return {key: eb.fit_exponential(points)
            for key, points in fit_points.items()}


@pytest.fixture(scope="session")
def analyses(models):
    return {
        "eu": eb.GapAnalysis(models["eu9plus"], models["eu18minus"]),
        "eurozone": eb.GapAnalysis(models["euro7plus"],
                                   models["euro10minus"]),
    }
