import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import database  # noqa: E402
from datasets import simulated_fit_sample  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def dominated_sample():
    """10^4 draws from LogGev(2, 1, -0.2) x LogGev(0, 1, -1)."""
    return simulated_fit_sample("dominated", m=10_000, seed=42)


@pytest.fixture(scope="session")
def competing_sample():
    """10^4 draws from LogGev(3, 1, 0.1) x LogGev(2, 1, 0.5)."""
    return simulated_fit_sample("competing", m=10_000, seed=42)


@pytest.fixture
def run_store():
    """In-memory SQLite run store, unbound again after the test."""
    database.configure("sqlite://")
    yield database
    database.reset()


@pytest.fixture
def sample_csv(tmp_path):
    """Write values to a one-column CSV with a header and return its path."""

    def write(values, name="sample.csv", header="value"):
        path = tmp_path / name
        lines = ([header] if header else []) + [repr(float(v)) for v in values]
        path.write_text("\n".join(lines) + "\n")
        return str(path)

    return write
