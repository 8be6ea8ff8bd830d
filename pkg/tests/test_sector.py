import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisyqca.errors import DomainError, InvariantViolation
from noisyqca.sector import (
    SectorState,
    fidelity_with_pure,
    maximally_mixed,
    pure_site_state,
    random_sector_state,
    trace_distance,
)

sizes = st.integers(min_value=1, max_value=12)
seeds = st.integers(min_value=0, max_value=2**64 - 1)


def test_pure_site_state():
    np.testing.assert_array_equal(pure_site_state(4, 1).matrix, np.diag([1, 0, 0, 0]))
    np.testing.assert_array_equal(pure_site_state(2, 2).matrix, np.diag([0, 1]))
    with pytest.raises(DomainError):
        pure_site_state(4, 5)
    with pytest.raises(DomainError):
        pure_site_state(4, 0)


def test_maximally_mixed():
    np.testing.assert_allclose(maximally_mixed(2).matrix, np.diag([0.5, 0.5]))
    np.testing.assert_allclose(maximally_mixed(4).matrix, np.eye(4) / 4)
    with pytest.raises(DomainError):
        maximally_mixed(0)


def test_trace_distance_examples():
    rho = random_sector_state(5, 1)
    assert trace_distance(rho, rho) == 0.0
    assert trace_distance(pure_site_state(3, 1), pure_site_state(3, 2)) == pytest.approx(1.0, abs=1e-15)
    assert trace_distance(pure_site_state(2, 1), maximally_mixed(2)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DomainError):
        trace_distance(maximally_mixed(2), maximally_mixed(3))


def test_random_state_is_deterministic():
    a = random_sector_state(3, 7)
    b = random_sector_state(3, 7)
    assert a.matrix.tobytes() == b.matrix.tobytes()
    assert random_sector_state(3, 8).matrix.tobytes() != a.matrix.tobytes()
    a.validate()


def test_random_state_single_site():
    np.testing.assert_array_equal(random_sector_state(1, 12345).matrix, [[1.0]])


def test_fidelity_with_pure():
    assert fidelity_with_pure(pure_site_state(4, 1), 1) == 1.0
    assert fidelity_with_pure(maximally_mixed(8), 1) == pytest.approx(1 / 8)
    assert fidelity_with_pure(pure_site_state(4, 2), 1) == 0.0
    with pytest.raises(DomainError):
        fidelity_with_pure(pure_site_state(4, 2), 9)


def test_state_is_frozen():
    rho = pure_site_state(3, 1)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 2.0


def test_validate_rejects_bad_states():
    with pytest.raises(InvariantViolation):
        SectorState(np.diag([0.5, 0.6])).validate()
    with pytest.raises(InvariantViolation):
        SectorState(np.diag([1.5, -0.5])).validate()
    with pytest.raises(InvariantViolation):
        SectorState(np.array([[0.5, 0.1], [0.2, 0.5]])).validate()
    with pytest.raises(DomainError):
        SectorState(np.zeros((2, 3)))


@given(sizes, seeds)
def test_random_states_satisfy_invariants(n, seed):
    v = random_sector_state(n, seed).violations()
    assert v["hermitian"] <= 1e-12
    assert v["trace"] <= 1e-12
    assert v["psd"] <= 1e-10


@given(st.integers(min_value=2, max_value=10), seeds, seeds, seeds)
def test_trace_distance_is_a_metric(n, s1, s2, s3):
    a, b, c = (random_sector_state(n, s) for s in (s1, s2, s3))
    ab, ba = trace_distance(a, b), trace_distance(b, a)
    assert ab >= 0
    assert abs(ab - ba) <= 1e-10
    assert ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-10
    assert ab <= 1 + 1e-12


@given(st.integers(min_value=2, max_value=10), st.data())
def test_trace_distance_bounded_for_pure_states(n, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n))
    d = trace_distance(pure_site_state(n, i), pure_site_state(n, j))
    assert d == pytest.approx(0.0 if i == j else 1.0, abs=1e-14)
