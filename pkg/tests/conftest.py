import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lpsharp.measure import FunctionFamily

positive = st.floats(min_value=1e-3, max_value=10.0, allow_nan=False)
nonneg = st.one_of(st.just(0.0), st.floats(min_value=1e-3, max_value=10.0))


@st.composite
def families(draw, n_min=2, n_max=5, m_max=8):
    n = draw(st.integers(n_min, n_max))
    m = draw(st.integers(1, m_max))
    weights = draw(arrays(float, m, elements=positive))
    values = draw(arrays(float, (n, m), elements=nonneg))
    if not np.any(values > 0):
        values[0, 0] = 1.0
    return FunctionFamily.from_arrays(weights, values)


@pytest.fixture
def rng():
    return np.random.default_rng(20191)


def random_family(rng, n, m, sparse=0.0):
    values = rng.random((n, m))
    if sparse:
        values *= rng.random((n, m)) >= sparse
    if not np.any(values > 0):
        values[0, 0] = 1.0
    return FunctionFamily.from_arrays(rng.uniform(0.1, 1.0, m), values)
