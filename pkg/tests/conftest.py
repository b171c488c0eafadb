import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from catmeas.measurable import make_map, make_space
from catmeas.operators import HermitianOperator

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def spaces(draw, max_points=8, prefix="p"):
    """Random partition of a random point set; atom labels come from the draw."""
    n = draw(st.integers(1, max_points))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    points = [f"{prefix}{i}" for i in range(n)]
    blocks = {}
    for p, lab in zip(points, labels):
        blocks.setdefault(lab, []).append(p)
    return make_space(points, list(blocks.values()))


@st.composite
def maps_between(draw, domain, codomain):
    """Measurable map: every domain atom lands inside a single codomain atom."""
    assignment = [0] * len(domain.points)
    for atom in domain.atoms:
        target = codomain.atoms[draw(st.integers(0, codomain.n_atoms - 1))]
        for i in atom:
            assignment[i] = target[draw(st.integers(0, len(target) - 1))]
    return make_map(domain, codomain, assignment)


@st.composite
def chains(draw, length=3, max_points=6):
    sps = [draw(spaces(max_points=max_points, prefix=f"s{i}_")) for i in range(length + 1)]
    fs = [draw(maps_between(sps[i], sps[i + 1])) for i in range(length)]
    return sps, fs


seeds = st.integers(0, 2**32 - 1)


def rng_for(seed):
    return np.random.default_rng(seed)


def diag(*values):
    return HermitianOperator(np.diag(np.asarray(values, dtype=complex)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
