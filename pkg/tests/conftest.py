"""Shared fixtures for the xy-disentangler test suite."""

import numpy as np
import pytest

from xy_disentangler.models import ConventionChoice
from xy_disentangler.state import convention_store


@pytest.fixture(autouse=True)
def clean_convention_store():
    """Start and finish every test without a stored convention."""
    convention_store.clear_all()
    yield
    convention_store.clear_all()


@pytest.fixture
def convention():
    """The HALF / AS_WRITTEN / PLUS convention the search resolves to."""
    return ConventionChoice()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
