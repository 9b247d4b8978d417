import numpy as np
import pytest

from simplicial_hopfield import PatternSet


@pytest.fixture
def worked_example() -> PatternSet:
    """Six-neuron, three-pattern golden fixture.

    Hand-checkable weights on the full 3-skeleton (0-based labels):
    w((0,2)) = 1/6, w((2,4,5)) = -1/6, w((1,3,4,5)) = -1/2.
    """
    data = np.array(
        [
            [+1, +1, -1, +1, -1, +1],
            [+1, -1, +1, -1, -1, +1],
            [-1, -1, -1, +1, +1, +1],
        ],
        dtype=float,
    )
    return PatternSet(data, "binary")
