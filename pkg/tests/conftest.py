import numpy as np
import pytest
from hypothesis import settings

from upb.assembler import build_theorem1_upb

settings.register_profile("repo", derandomize=True, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def upb_4_6():
    return build_theorem1_upb((4, 6), seed=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
