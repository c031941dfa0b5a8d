import numpy as np
import pytest

from distributions.laws import (DistributionKind, DistributionSpec,
                                make_distribution, sample_coordinates)
from edm.matrices import NodeCloud


@pytest.fixture
def uniform_spec():
    return DistributionSpec(DistributionKind.UNIFORM, support=(-1.0, 1.0))


@pytest.fixture
def uniform(uniform_spec):
    return make_distribution(uniform_spec)


@pytest.fixture
def make_cloud(uniform):
    def factory(n_nodes=50, dim=2, seed=0):
        return sample_coordinates(uniform, n_nodes, dim, seed)
    return factory


@pytest.fixture
def line_cloud():
    """Узлы 0, 1, 3 на прямой."""
    return NodeCloud(coords=np.array([0.0, 1.0, 3.0]))
