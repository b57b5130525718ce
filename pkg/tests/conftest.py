import numpy as np
import pytest

from app.numerics.grid import build_grid, field_from_function
from app.sources import PowerSum


@pytest.fixture
def unit_grid():
    return build_grid(1, 1.0, 99)


@pytest.fixture
def fine_grid():
    return build_grid(1, 1.0, 999)


@pytest.fixture
def sine_field(fine_grid):
    return field_from_function(fine_grid, lambda x: np.sin(np.pi * x))


@pytest.fixture
def cubic():
    return PowerSum([(1.0, 3.0)])
