from __future__ import annotations

import pytest

from mrex import minsets, solver


@pytest.fixture(autouse=True)
def strict_checks():
    """Audit every SAT model and every MCS/MUS extraction during tests."""
    solver.check_models = True
    minsets.check_minimality = True
    yield
    solver.check_models = False
    minsets.check_minimality = False
