import numpy as np
import pytest
from hypothesis import strategies as st

from crooked import CrookedPlane, interp_path, unit_spacelike

COSH1 = np.cosh(1.0)
SINH1 = np.sinh(1.0)
E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

# filled in by test_acceptance, printed after the run
ACCEPTANCE = {}


def random_unit_spacelike(rng, max_rapidity=3.0, size=None):
    if size is None:
        return unit_spacelike(rng.uniform(0, 2 * np.pi), rng.uniform(-max_rapidity, max_rapidity))
    return np.array([random_unit_spacelike(rng, max_rapidity) for _ in range(size)])


@st.composite
def unit_spacelike_vectors(draw, max_rapidity=3.0):
    theta = draw(st.floats(0.0, 2 * np.pi, allow_nan=False))
    a = draw(st.floats(-max_rapidity, max_rapidity, allow_nan=False))
    return unit_spacelike(theta, a)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vectors = st.tuples(finite, finite, finite).map(np.array)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def canonical_planes():
    P = CrookedPlane([0.0, 0.0, 0.0], E1)
    Q = CrookedPlane([0.0, -2 * np.sqrt(2.0), 0.0], [-COSH1, 0.0, SINH1])
    return P, Q


@pytest.fixture
def canonical_path():
    return interp_path(E1, [COSH1, 0.0, SINH1])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
