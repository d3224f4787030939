import numpy as np
import pytest
from hypothesis import settings, strategies as st

from semistrict.groups import (abelian, cyclic, dicyclic, dihedral, klein, quaternion, symmetric,
                               trivial_group)

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

SMALL_GROUPS = [trivial_group(), cyclic(2), cyclic(3), cyclic(4), klein(), cyclic(6), symmetric(3),
                abelian(2, 4), dihedral(4), quaternion(), dicyclic(3)]

small_groups = st.sampled_from(SMALL_GROUPS)


@st.composite
def group_elements(draw, g, k=1):
    return [draw(st.integers(0, g.order - 1)) for _ in range(k)]


@pytest.fixture
def s3():
    return symmetric(3)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
