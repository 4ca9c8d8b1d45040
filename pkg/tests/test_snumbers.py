import numpy as np
import pytest

from banachlab.errors import DimensionError, PreconditionError
from banachlab.snumbers import (Operator, bernstein_number, cosingularity_number, exact_rank,
                                intersection_dimension_check, min_truncation_index,
                                truncation_preserves_lower_bound)
from banachlab.spaces import Lp


def test_bernstein_examples():
    assert bernstein_number(Operator(np.diag([3.0, 2.0, 1.0]), 2, 2), 2).value == pytest.approx(2.0, rel=1e-12)
    assert bernstein_number(Operator(np.eye(3), 1.5, 1.5), 1).value == pytest.approx(1.0, rel=1e-12)
    assert bernstein_number(Operator(np.zeros((3, 3)), 2, 2), 2).value == 0
    with pytest.raises(DimensionError):
        bernstein_number(Operator(np.eye(2), 2, 2), 3)


def test_bernstein_hilbert_matches_svd(rng):
    for _ in range(15):
        d = int(rng.integers(1, 5))
        A = rng.standard_normal((int(rng.integers(d, 5)), d))
        s = np.linalg.svd(A, compute_uv=False)
        for n in range(1, d + 1):
            assert bernstein_number(Operator(A, 2, 2), n, seed=n).value == pytest.approx(s[n - 1], rel=2e-3)


def test_bernstein_monotone_and_bounded(rng):
    A = rng.standard_normal((3, 3))
    T = Operator(A, 1.5, 3)
    vals = [bernstein_number(T, n, restarts=4) for n in (1, 2, 3)]
    norm = T.norm().upper
    for est in vals:
        assert est.lower <= est.value <= norm * (1 + 1e-9)
    assert vals[0].value >= vals[1].value * (1 - 1e-6) >= vals[2].value * (1 - 1e-6) - 1e-9


def test_bernstein_ideal_property(rng):
    for _ in range(5):
        A, T, B = (rng.standard_normal((3, 3)) for _ in range(3))
        bt = bernstein_number(Operator(T, 2, 2), 2).value
        bbta = bernstein_number(Operator(B @ T @ A, 2, 2), 2).value
        assert bbta <= np.linalg.norm(B, 2) * bt * np.linalg.norm(A, 2) * (1 + 1e-9)


def test_cosingularity_examples():
    assert cosingularity_number(Operator(np.eye(3), 2, 2), 1).value == pytest.approx(1.0, rel=1e-12)
    assert cosingularity_number(Operator(np.zeros((3, 3)), 2, 2), 1).value == 0
    rank_one = np.outer([1.0, 2.0, 3.0], [1.0, 0.0, 1.0])
    assert cosingularity_number(Operator(rank_one, 2, 2), 2).value == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DimensionError):
        cosingularity_number(Operator(np.eye(3), 2, 2), 3)


def test_cosingularity_hilbert_singular_values(rng):
    A = rng.standard_normal((4, 3))
    s = np.linalg.svd(A, compute_uv=False)
    for n in (1, 2, 3):
        assert cosingularity_number(Operator(A, 2, 2), n).value == pytest.approx(s[n - 1], rel=2e-3)


def test_truncation_index_examples():
    E = np.zeros((6, 1))
    E[0] = E[4] = 1
    space = Lp(6, 2)
    assert min_truncation_index(E, space, 0.5) == 5
    assert min_truncation_index(E, space, 0.8) == 1
    assert min_truncation_index(np.eye(6)[:, :1], space, 0.3) == 1


def test_truncation_index_general_space():
    E = np.zeros((5, 1))
    E[0], E[3] = 1.0, 0.5
    # ratio 0.5 / (1 + 0.5^1.5)^(2/3) at N in 1..3
    r = 0.5 / (1 + 0.5 ** 1.5) ** (2 / 3)
    assert min_truncation_index(E, Lp(5, 1.5), r + 1e-9) == 1
    assert min_truncation_index(E, Lp(5, 1.5), r - 1e-9) == 4


def test_truncation_rejects_dependent_basis():
    with pytest.raises(PreconditionError):
        min_truncation_index(np.ones((3, 2)), Lp(3, 2), 0.5)


def test_truncation_preserves_lower_bound():
    res = truncation_preserves_lower_bound(Operator(np.diag([1.0, 1.0, 0.1, 0.1]), 2, 2), np.eye(4)[:, :2], 1.0, 0.5)
    assert res.N == 2 and res.certified_delta >= 0.5 and res.dimension == 2
    E = np.array([[1.0, 0.0], [0.0, 1.0], [0.2, 0.0], [0.0, 0.1]])
    res = truncation_preserves_lower_bound(Operator(np.eye(4), 2, 2), E, 1.0, 0.9)
    assert res.certified_delta >= 0.9
    assert res.measured_lower >= 0.9
    with pytest.raises(PreconditionError):
        truncation_preserves_lower_bound(Operator(np.zeros((4, 4)), 2, 2), E, 1.0, 0.5)


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank(np.eye(4, dtype=int)) == 4
    assert exact_rank([[0, 0]]) == 0


def test_intersection_dimension_random(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        E = rng.integers(-2, 3, (d, int(rng.integers(1, d + 1))))
        Z = rng.integers(-2, 3, (d, int(rng.integers(1, d + 1))))
        res = intersection_dimension_check(E, Z)
        assert res["holds"]
        assert res["dimE"] - res["codimZ"] <= res["dimIntersection"]
