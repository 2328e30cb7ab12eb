import sys

import numpy as np
import pytest

from divcurl.torus import ScalarField, TorusGrid


def clean_field(grid: TorusGrid, rng, blocks=("full",)) -> ScalarField:
    """White noise with the Nyquist modes and the zero frequency of each block removed."""
    spec = np.fft.fftn(rng.standard_normal(grid.shape))
    keep = ~grid.nyquist_mask("full")
    for block in blocks:
        keep &= ~grid.zero_mask(block)
    return ScalarField(grid, np.fft.ifftn(np.where(keep, spec, 0)).real)


def rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.abs(a).max(), np.abs(b).max(), 1e-300)
    return float(np.abs(a - b).max() / scale)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda t: int(t.split()[1])):
            terminalreporter.write_line(line)
