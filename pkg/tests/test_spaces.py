import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import minimize

from banachlab.constructions import three_valued_system
from banachlab.errors import CapacityError, DimensionError
from banachlab.exponent import INF, Exponent
from banachlab.spaces import (EMax, FSpan, Lp, BlockSum, Vector, blocksum_norm, complex_vector_norm,
                              emax_dual_norm, emax_norm, fspan_moment, fspan_norm, lp_norm,
                              parse_vectors_csv, space_from_json)

finite = st.floats(-1e3, 1e3, allow_nan=False)
exponents = st.sampled_from([1.0, 1.25, 1.5, 2.0, 3.0, 7.0, INF])


def test_exponent_conjugates():
    assert Exponent.of(2).conjugate == 2
    assert Exponent.of(1).conjugate == INF
    assert Exponent.of("inf").conjugate == 1
    p = Exponent.of(1.5)
    assert p.conjugate == pytest.approx(3.0)
    assert p.dual().dual() == p


@given(st.floats(1.0, 50.0))
def test_exponent_holder_relation(p):
    e = Exponent.of(p)
    assert 1 / e.value + (0 if e.conjugate == INF else 1 / e.conjugate) == pytest.approx(1.0)
    assert e.dual().dual().value == e.value


def test_lp_norm_examples():
    assert lp_norm([1, 1], 2) == pytest.approx(math.sqrt(2))
    assert lp_norm([3, 4], INF) == 4
    assert lp_norm([1, 1, 1, 1], 1.5) == pytest.approx(2 ** (math.log2(4) / 1.5), rel=1e-14)


def test_lp_norm_no_overflow():
    assert lp_norm([1e300, 1e300], 4) == pytest.approx(1e300 * 2 ** 0.25)


def test_lp_dimension_mismatch():
    with pytest.raises(DimensionError):
        Lp(3, 2).norm([1, 2])


def test_emax_norm_examples():
    assert emax_norm([1, 0], 3, 0.5) == 1
    assert emax_norm([1, 1], 3, 1.0) == pytest.approx(math.sqrt(2))
    assert emax_norm([1, 1], 3, 0.5) == pytest.approx(2 ** (1 / 3))


def test_emax_flags_small_exponent():
    assert EMax(2, 1.5, 0.5).flagged
    assert not EMax(2, 3, 0.5).flagged


def _dual_oracle(y, p_prime, v):
    """Direct SLSQP maximization of <x, y> over the intersection of both balls."""
    y = np.abs(np.asarray(y, float))
    cons = [{"type": "ineq", "fun": lambda u: 1 - np.sum(u ** p_prime)},
            {"type": "ineq", "fun": lambda u: 1 / v ** 2 - u @ u}]
    best = 0.0
    for s in range(6):
        u0 = np.random.default_rng(s).uniform(0.01, 0.3, y.size)
        res = minimize(lambda u: -u @ y, u0, constraints=cons, bounds=[(0, None)] * y.size, method="SLSQP",
                       options={"ftol": 1e-15, "maxiter": 1000})
        u = np.maximum(res.x, 0)
        scale = max(np.sum(u ** p_prime) ** (1 / p_prime), v * np.linalg.norm(u), 1.0)
        best = max(best, (u / scale) @ y)
    return best


def test_emax_dual_examples_against_oracle():
    cases = [([1, 0], 3, 0.5), ([1, 1], 3, 0.5), ([1, 0], 2, 1.0)]
    for y, pp, v in cases:
        oracle = _dual_oracle(y, pp, v)
        res = emax_dual_norm(y, pp, v)
        assert res.value == pytest.approx(oracle, rel=1e-6)
    assert emax_dual_norm([1, 0], 3, 0.5).value == pytest.approx(1.0, rel=1e-12)
    assert emax_dual_norm([1, 1], 3, 0.5).value == pytest.approx(2 ** (2 / 3), rel=1e-12)
    assert emax_dual_norm([1, 0], 2, 1.0).value == pytest.approx(1.0, rel=1e-12)


def test_emax_dual_interior_split_against_oracle(rng):
    # v large enough that both constraints are active
    for _ in range(5):
        y = rng.standard_normal(5)
        pp, v = 3.0, 0.9
        res = emax_dual_norm(y, pp, v)
        assert res.gap <= 1e-6 * res.value
        assert res.value == pytest.approx(_dual_oracle(y, pp, v), rel=1e-5)


@given(arrays(np.float64, st.integers(1, 8), elements=st.floats(-10, 10, allow_nan=False)),
       st.sampled_from([2.0, 2.5, 3.0, 4.0, INF]), st.floats(0.05, 1.0))
def test_emax_dual_certificate(y, pp, v):
    res = emax_dual_norm(y, pp, v)
    assert res.primal_lower <= res.value <= res.dual_upper
    assert res.gap <= 1e-6 * max(res.value, 1e-300) + 1e-12
    y1, y2 = res.split
    assert np.max(np.abs(np.asarray(y1) + np.asarray(y2) - y), initial=0) <= 1e-9 * (1 + np.abs(y).max(initial=0))


@given(arrays(np.float64, 4, elements=st.floats(-5, 5, allow_nan=False)),
       arrays(np.float64, 4, elements=st.floats(-5, 5, allow_nan=False)),
       st.sampled_from([2.0, 3.0, 6.0]), st.floats(0.1, 1.0))
def test_emax_dual_holder(x, y, pp, v):
    assert abs(x @ y) <= emax_norm(x, pp, v) * emax_dual_norm(y, pp, v).dual_upper * (1 + 1e-9) + 1e-12


def test_emax_dual_methods_agree(rng):
    for _ in range(10):
        y = rng.standard_normal(4)
        a = emax_dual_norm(y, 3.0, 0.7)
        b = emax_dual_norm(y, 3.0, 0.7, method="dykstra")
        assert a.value == pytest.approx(b.value, rel=1e-6)


def test_fspan_examples():
    s = three_valued_system(3, 1.5, 0.5)
    for j in range(3):
        assert fspan_norm(np.eye(3)[j], s) == pytest.approx(1.0, rel=1e-14)
    assert fspan_norm([-2.5, 0, 0], s) == pytest.approx(2.5, rel=1e-14)
    r = three_valued_system(2, 1.5, 1.0)
    # Rademacher oracle: the four sign atoms of r1 + r2 take |.| in {2, 0, 0, 2}
    oracle = (sum(abs(a + b) ** 1.5 for a, b in itertools.product((1, -1), repeat=2)) / 4) ** (1 / 1.5)
    assert fspan_norm([1, 1], r) == pytest.approx(oracle, rel=1e-14)
    assert oracle == pytest.approx(2 ** (1 / 3), rel=1e-14)


def test_fspan_capacity():
    with pytest.raises(CapacityError):
        three_valued_system(13, 1.5, 0.5)


@given(arrays(np.float64, 4, elements=st.floats(-10, 10, allow_nan=False)),
       st.sampled_from([1.3, 1.5, 1.8]), st.sampled_from([0.25, 0.5, 1.0]))
def test_fspan_second_moment(a, p, v):
    s = three_valued_system(4, p, v)
    assert fspan_moment(a, s, 2) == pytest.approx(math.hypot(*a) / v, rel=1e-12, abs=1e-300)


def test_fspan_exchangeability(rng):
    s = three_valued_system(6, 1.5, 0.5)
    for k in range(1, 7):
        vals = set()
        for _ in range(10):
            a = np.zeros(6)
            a[rng.choice(6, k, replace=False)] = 1
            vals.add(fspan_norm(a, s))
        assert len(vals) == 1


def _spaces():
    s = three_valued_system(3, 1.5, 0.5)
    return [Lp(3, 1.5), Lp(3, INF), EMax(3, 3, 0.5), FSpan(s),
            BlockSum(1.5, (Lp(1, 2), Lp(2, 2))), BlockSum(INF, (FSpan(s), Lp(2, 3)))]


@pytest.mark.parametrize("space", _spaces(), ids=lambda s: s.to_json()["kind"])
def test_norm_axioms(space, rng):
    for _ in range(1000):
        x, y = rng.standard_normal((2, space.dim)) * rng.uniform(0.01, 100)
        c = rng.uniform(-10, 10)
        nx, ny = space.norm(x), space.norm(y)
        assert space.norm(c * x) == pytest.approx(abs(c) * nx, rel=1e-12)
        assert space.norm(x + y) <= (nx + ny) * (1 + 1e-12)


@pytest.mark.parametrize("space", _spaces(), ids=lambda s: s.to_json()["kind"])
def test_space_json_roundtrip(space, rng):
    back = space_from_json(space.to_json())
    x = rng.standard_normal(space.dim)
    assert back.norm(x) == space.norm(x)
    assert "kind" in space.to_json()


def test_blocksum_examples():
    assert blocksum_norm([Vector([1], Lp(1, 2)), Vector([1], Lp(1, 2))], 2) == pytest.approx(math.sqrt(2))
    assert blocksum_norm([Vector([3], Lp(1, 2)), Vector([0, 4], Lp(2, 2))], INF) == 4
    assert blocksum_norm([Vector([3, 4], Lp(2, 2))], 1.5) == pytest.approx(5.0)


def test_vector_length_checked():
    with pytest.raises(DimensionError):
        Vector([1, 2, 3], Lp(2, 2))


def test_parse_vectors_csv():
    rows = parse_vectors_csv("1,2\n3.5,-4\n")
    assert [list(r) for r in rows] == [[1.0, 2.0], [3.5, -4.0]]


def test_complex_norm_examples():
    e1, e2 = np.eye(2)
    est = complex_vector_norm(e1, e2, Lp(2, 2))
    assert est.lower <= 1 + 1e-15 and 1 <= est.upper and est.value == pytest.approx(1.0, abs=1e-12)
    est = complex_vector_norm([1.0], [1.0], Lp(1, 2))
    assert est.lower <= math.sqrt(2) * (1 + 1e-15) and math.sqrt(2) <= est.upper
    assert est.value == pytest.approx(math.sqrt(2), rel=1e-12)
    est = complex_vector_norm([3.0, 4.0], [0.0, 0.0], Lp(2, 1.5))
    assert est.value == pytest.approx(lp_norm([3, 4], 1.5), rel=1e-14)


@given(arrays(np.float64, 3, elements=st.floats(-10, 10, allow_nan=False)),
       arrays(np.float64, 3, elements=st.floats(-10, 10, allow_nan=False)), exponents)
def test_complex_norm_sandwich(x, y, p):
    space = Lp(3, p)
    est = complex_vector_norm(x, y, space, grid_size=256)
    s = space.norm(x) + space.norm(y)
    assert 0.5 * s <= est.lower * (1 + 1e-12) + 1e-300
    assert est.upper <= s * (1 + 1e-12) + 1e-300
    assert est.lower <= est.upper
