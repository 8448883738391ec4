import random

import numpy as np
import pytest

from circlesum.summation import (constant_field, monomial_field,
                                 plane_wave_field)
from circlesum.verify import random_lattice_polygon


@pytest.fixture
def rng():
    return random.Random(20260809)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def polygon_factory(rng):
    def make(box=6, max_boundary=40):
        return random_lattice_polygon(rng, box=box, max_boundary=max_boundary)
    return make


@pytest.fixture
def test_fields():
    return [
        ("1", constant_field(1.0)),
        ("x", monomial_field(1, 0)),
        ("x^2 y", monomial_field(2, 1)),
        ("e((x+2y)/5)", plane_wave_field(1, 2, 5)),
        ("e((3x-y)/7)", plane_wave_field(3, -1, 7)),
    ]
