import pytest
from hypothesis import strategies as st

from retrialcap import ModelParams


@pytest.fixture
def tiny():
    """The six-state instance used throughout the hand-worked examples."""
    return ModelParams(2, 1, 1, lambda_n=1.0, lambda_h=1.0, nu=1.0, p=0.8, mu_r=0.5)


@st.composite
def small_params(draw, c_max=12, m_max=6):
    c = draw(st.integers(1, c_max))
    rate = st.floats(0.05, 20.0, allow_nan=False, allow_infinity=False)
    return ModelParams(
        c=c,
        g=draw(st.integers(0, c)),
        m=draw(st.integers(0, m_max)),
        lambda_n=draw(rate),
        lambda_h=draw(rate),
        nu=draw(st.floats(0.1, 5.0)),
        p=draw(st.floats(0.0, 1.0)),
        mu_r=draw(st.floats(0.05, 5.0)),
    )
