import itertools

import numpy as np
import pytest

from lapqbe import _backend
from lapqbe.lattice import BoundaryCondition, LaplacianSpec

BCS = list(BoundaryCondition)


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


def spec_of(*axes):
    """``spec_of((n, h, bc), ...)`` shorthand."""
    return LaplacianSpec.from_axes(*axes)


def shift_matrix(n_points, step):
    """Dense permutation ``|j> -> |j + step mod N>``."""
    m = np.zeros((n_points, n_points))
    for j in range(n_points):
        m[(j + step) % n_points, j] += 1.0
    return m


def all_bc_tuples(length):
    return list(itertools.product(BCS, repeat=length))
