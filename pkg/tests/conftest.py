import numpy as np
import pytest

from cgmlab.lattice import LatticeWindow
from cgmlab.weights import ArrayWeights


@pytest.fixture
def two_by_two():
    """Y(0,0)=1, Y(1,0)=5, Y(0,1)=2, Y(1,1)=1."""
    return ArrayWeights(np.array([[1.0, 2.0], [5.0, 1.0]]), LatticeWindow((0, 0), (1, 1)))
