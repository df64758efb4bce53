import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from hopboltz.acceptance import FIXTURES
from hopboltz.hopfield import HopfieldParams, hebbian
from hopboltz.network import ZERO_ONE, NetworkSpec, NetworkState, Params

# numeric property tests vary in cost; wall-clock deadlines only add flakiness
settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []

P1 = (1, 1, -1, -1)
P2 = (-1, 1, -1, 1)
W3 = np.array([[0, 0, 4], [1, 0, 0], [-2, 3, 0]], dtype=float)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def hebb():
    return hebbian([P1, P2])


@pytest.fixture
def net3():
    return Params(NetworkSpec.from_weights(W3, domain=ZERO_ONE), W3, (1, 1, 1))


@st.composite
def hopfield_params(draw, min_n=2, max_n=6, wmax=4, tmax=3, integer=True):
    n = draw(st.integers(min_n, max_n))
    if integer:
        upper = draw(st.lists(st.integers(-wmax, wmax), min_size=n * (n - 1) // 2,
                              max_size=n * (n - 1) // 2))
        theta = draw(st.lists(st.integers(-tmax, tmax), min_size=n, max_size=n))
    else:
        fl = st.floats(-wmax, wmax, allow_nan=False)
        upper = draw(st.lists(fl, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
        theta = draw(st.lists(st.floats(-tmax, tmax, allow_nan=False), min_size=n, max_size=n))
    w = np.zeros((n, n))
    w[np.triu_indices(n, 1)] = upper
    w = w + w.T
    return HopfieldParams.from_weights(w, np.array(theta, dtype=float))


@st.composite
def params_and_state(draw, **kw):
    p = draw(hopfield_params(**kw))
    bits = draw(st.lists(st.sampled_from([-1, 1]), min_size=p.n, max_size=p.n))
    return p, NetworkState(bits)


temperatures = st.floats(0.1, 10.0)
seeds = st.integers(0, 2**64 - 1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
