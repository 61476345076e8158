import pytest

from hom_coherence import Shape, SpectrumConfig, sample_spectrum

BANDWIDTH = 1.0e12
N_LARGE = 100_000


@pytest.fixture(scope="session")
def rect_pairs():
    return sample_spectrum(SpectrumConfig(Shape.RECT, BANDWIDTH, N_LARGE, seed=11))


@pytest.fixture(scope="session")
def gauss_pairs():
    return sample_spectrum(SpectrumConfig(Shape.GAUSSIAN, BANDWIDTH, N_LARGE, seed=12))


# criterion number -> (title, passed, seconds); filled by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, passed, seconds = ACCEPTANCE_RESULTS[num]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {num}: {title} ({seconds:.1f}s)")
