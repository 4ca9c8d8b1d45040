"""Bernstein and cosingularity numbers, truncation indices and the
intersection-dimension count."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionError, PreconditionError
from .estimate import NormEstimate
from .exponent import Exponent
from .opnorm import _dual_map, as_matrix, op_norm_estimate
from .search import multistart_max, random_sphere
from .spaces import Lp, lp_norm, lp_norm_rows


@dataclass(frozen=True, eq=False)
class Operator:
    """A matrix viewed as a map l_p^cols -> l_q^rows."""

    matrix: np.ndarray
    p: Exponent
    q: Exponent

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        object.__setattr__(self, "p", Exponent.of(self.p))
        object.__setattr__(self, "q", Exponent.of(self.q))

    @property
    def is_hilbert(self):
        return self.p.value == 2 and self.q.value == 2

    def transpose(self):
        return Operator(self.matrix.T, self.q.dual(), self.p.dual())

    def norm(self, restarts=16, seed=0):
        return op_norm_estimate(self.matrix, self.p, self.q, restarts=restarts, seed=seed)


def _sphere_points(k, rng, count):
    pts = [np.eye(k)]
    if k > 1:
        pts.append(np.array([s for s in itertools.product((1.0, -1.0), repeat=k) if s[0] > 0]) / math.sqrt(k))
    pts.append(random_sphere(rng, count, k))
    return np.vstack(pts)


def min_ratio(B, G, p, q, rng, samples=96, polish=2):
    """Estimate min over c of ||B c||_q / ||G c||_p; returns (value, c)."""
    k = B.shape[1]
    if k == 1:
        return lp_norm(B[:, 0], q) / lp_norm(G[:, 0], p), np.ones(1)

    def batch(C):
        return -lp_norm_rows(C @ B.T, q) / lp_norm_rows(C @ G.T, p)

    def f(c):
        d = lp_norm(G @ c, p)
        return -lp_norm(B @ c, q) / d if d > 0 else -np.inf

    val, c = multistart_max(f, _sphere_points(k, rng, samples), polish=polish, batch=batch)
    return -val, c / np.linalg.norm(c)


def covering_lower(B, G, p, q, step=0.1):
    """Certified lower bound for min over c of ||Bc||_q / ||Gc||_p.

    The normalized cube-surface grid with the given step is a net of the
    Euclidean sphere of radius step*sqrt(k-1)/2; ||Bc||_q moves by at most
    sum_i ||row_i(B)||_2 per unit of c, and likewise for G.
    """
    k = B.shape[1]
    if k == 1:
        return lp_norm(B[:, 0], q) / lp_norm(G[:, 0], p)
    ticks = np.linspace(-1.0, 1.0, int(round(2.0 / step)) + 1)
    face = np.array(list(itertools.product(ticks, repeat=k - 1)))
    P = np.vstack([np.insert(face, i, 1.0, axis=1) for i in range(k)])
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    rho = (ticks[1] - ticks[0]) * math.sqrt(k - 1) / 2.0
    LB = np.linalg.norm(B, axis=1).sum()
    LG = np.linalg.norm(G, axis=1).sum()
    num = np.maximum(lp_norm_rows(P @ B.T, q) - LB * rho, 0.0)
    den = lp_norm_rows(P @ G.T, p) + LG * rho
    return float((num / den).min())


def _inner(T: Operator, F, rng):
    """Lower bound of T on span(F): (value, minimizing coefficients)."""
    B = T.matrix @ F
    if T.is_hilbert:
        _, s, vt = np.linalg.svd(B, full_matrices=False)
        if len(s) < F.shape[1]:
            return 0.0, np.eye(F.shape[1])[-1]
        return float(s[-1]), vt[-1]
    return min_ratio(B, F, T.p.value, T.q.value, rng, samples=48, polish=1)


def _frame_gradient(T: Operator, F, c, val):
    x = F @ c
    nx = lp_norm(x, T.p.value)
    y = T.matrix @ x
    gy = _dual_map(y[:, None], T.q.value)[:, 0]
    gx = _dual_map(x[:, None], T.p.value)[:, 0]
    return (np.outer(T.matrix.T @ gy, c) - val * np.outer(gx, c)) / nx


def _retract(M):
    Q, R = np.linalg.qr(M)
    return Q * np.where(np.diag(R) < 0, -1.0, 1.0)


def _frame_starts(d, n, restarts, rng):
    starts = []
    for combo in itertools.islice(itertools.combinations(range(d), n), 20):
        starts.append(np.eye(d)[:, list(combo)])
    for _ in range(restarts):
        starts.append(_retract(rng.standard_normal((d, n))))
    return starts


def _ascend(T, F, rng, iters):
    val, c = _inner(T, F, rng)
    step = 0.5
    for _ in range(iters):
        G = _frame_gradient(T, F, c, val)
        G = G - F @ (0.5 * (F.T @ G + G.T @ F))
        if np.linalg.norm(G) < 1e-12:
            break
        moved = False
        while step > 1e-10:
            Fn = _retract(F + step * G)
            vn, cn = _inner(T, Fn, rng)
            if vn > val * (1 + 1e-14):
                F, val, c, moved = Fn, vn, cn, True
                step *= 2.0
                break
            step *= 0.5
        if not moved:
            break
    return val, F


def bernstein_number(T: Operator, n: int, restarts: int = 8, seed: int = 0, iters: int = 200) -> NormEstimate:
    """sup over n-dimensional subspaces E of inf over unit x in E of ||Tx||.

    The witness is the best frame found, flattened column by column.  For
    p = q = 2 the inner infimum is a smallest singular value and ``lower``
    is exact for that frame; otherwise ``lower`` comes from a covering of
    the coefficient sphere.
    """
    d = T.matrix.shape[1]
    if not 1 <= n <= d:
        raise DimensionError("n must lie between 1 and the domain dimension", n=n, dim=d)
    rng = np.random.default_rng(seed)
    upper = T.norm(seed=seed).upper
    if not np.any(T.matrix):
        return NormEstimate(0.0, 0.0, 0.0, "zero", restarts, tuple(np.eye(d)[:, :n].T.ravel().tolist()))
    best_val, best_F = -1.0, None
    for F in _frame_starts(d, n, restarts, rng):
        val, F = _ascend(T, F, rng, iters)
        if val > best_val:
            best_val, best_F = val, F
    if T.is_hilbert:
        lower = best_val
    else:
        lower = min(best_val, covering_lower(T.matrix @ best_F, best_F, T.p.value, T.q.value))
    upper = max(upper, best_val)
    return NormEstimate(best_val, max(lower, 0.0), upper, "frame-ascent", restarts, tuple(best_F.T.ravel().tolist()))


def cosingularity_number(T: Operator, n: int, restarts: int = 8, seed: int = 0, iters: int = 200) -> NormEstimate:
    """sup over codimension-n subspaces E of the codomain of the largest
    eps with Q_E T(ball) containing eps times the quotient ball.

    By duality that radius is the infimum of ||T^* phi|| over unit phi in
    the annihilator of E, an n-dimensional subspace of the dual codomain,
    so the computation is a Bernstein number of the transpose.
    """
    m = T.matrix.shape[0]
    if not 1 <= n < m:
        raise DimensionError("n must be positive and below the codomain dimension", n=n, dim=m)
    est = bernstein_number(T.transpose(), n, restarts=restarts, seed=seed, iters=iters)
    return NormEstimate(est.value, est.lower, est.upper, "annihilator-frame-ascent", restarts, est.witness)


# ---------------------------------------------------------------------------


def _check_basis(E):
    E = as_matrix(E)
    if np.linalg.matrix_rank(E) < E.shape[1]:
        raise PreconditionError("basis columns are linearly dependent")
    return E


def tail_ratio(E, space, N, rng=None, samples=64):
    """sup over e in span(E) of ||e - S_N e|| / ||e||."""
    R = E.copy()
    R[:N] = 0.0
    if not np.any(R):
        return 0.0
    if isinstance(space, Lp) and space.p.value == 2:
        Q, Rq = np.linalg.qr(E)
        Rt = Q.copy()
        Rt[:N] = 0.0
        return float(np.linalg.svd(Rt, compute_uv=False)[0])
    k = E.shape[1]
    if k == 1:
        return space.norm(R[:, 0]) / space.norm(E[:, 0])
    rng = rng or np.random.default_rng(0)

    def f(c):
        d = space.norm(E @ c)
        return space.norm(R @ c) / d if d > 0 else -np.inf

    def batch(C):
        return space.norm_rows(C @ R.T) / space.norm_rows(C @ E.T)

    return multistart_max(f, _sphere_points(k, rng, samples), polish=3, batch=batch)[0]


def min_truncation_index(E, space, delta: float) -> int:
    """Least N with ||e - S_N e|| <= delta ||e|| on span(E)."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    E = _check_basis(E)
    if E.shape[0] != space.dim:
        raise DimensionError("basis rows differ from the space dimension", expected=space.dim, got=E.shape[0])
    rng = np.random.default_rng(0)
    for N in range(E.shape[0] + 1):
        if tail_ratio(E, space, N, rng) <= delta:
            return N
    raise PreconditionError("no truncation index within the ambient dimension")


@dataclass(frozen=True)
class TruncationResult:
    N: int
    certified_delta: float
    gamma: float
    operator_norm_upper: float
    measured_lower: float
    dimension: int

    def to_json(self):
        return {"N": self.N, "certifiedDelta": self.certified_delta, "gamma": self.gamma,
                "operatorNormUpper": self.operator_norm_upper, "measuredLower": self.measured_lower,
                "dimension": self.dimension}


def _lower_on(T: Operator, E, rng):
    if T.is_hilbert:
        Q, _ = np.linalg.qr(E)
        return float(np.linalg.svd(T.matrix @ Q, compute_uv=False)[-1]) if Q.shape[1] <= T.matrix.shape[0] else 0.0
    return min_ratio(T.matrix @ E, E, T.p.value, T.q.value, rng)[0]


def truncation_preserves_lower_bound(T: Operator, E, epsilon: float, delta: float) -> TruncationResult:
    """Truncate span(E) to its first N coordinates while keeping T bounded below.

    With gamma chosen as large as possible subject to
    delta <= epsilon/(1+gamma) - ||T|| gamma/(1-gamma), N is the truncation
    index of E at gamma, and T is bounded below by that right-hand side on
    S_N(E).
    """
    if not 0 < delta < epsilon:
        raise ValueError("need 0 < delta < epsilon")
    E = _check_basis(E)
    rng = np.random.default_rng(0)
    measured = _lower_on(T, E, rng)
    if measured < epsilon * (1 - 1e-9):
        raise PreconditionError("T is not bounded below by epsilon on span(E)", measured=measured, epsilon=epsilon)
    norm_t = T.norm().upper

    def slack(g):
        return epsilon / (1 + g) - norm_t * g / (1 - g) - delta

    gamma = brentq(slack, 0.0, 1.0 - 1e-15, xtol=1e-15) * (1 - 1e-12)
    gamma = min(gamma, 1.0 - 1e-12)
    certified = epsilon / (1 + gamma) - norm_t * gamma / (1 - gamma)
    N = min_truncation_index(E, Lp(E.shape[0], T.p), gamma)
    SE = E.copy()
    SE[N:] = 0.0
    dim = int(np.linalg.matrix_rank(SE))
    if dim != E.shape[1]:
        raise AssertionError("truncation lost dimension")
    return TruncationResult(N, certified, gamma, norm_t, _lower_on(T, SE, rng), dim)


# ---------------------------------------------------------------------------


def exact_rank(M) -> int:
    """Rank over the rationals by fraction-exact Gaussian elimination."""
    rows = [[Fraction(x) for x in row] for row in np.asarray(M).tolist()]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def intersection_dimension_check(E, Z) -> dict:
    """Column spans E, Z in Q^d: dim E - dim(Q^d / Z) <= dim(E cap Z)."""
    E, Z = np.asarray(E), np.asarray(Z)
    if E.shape[0] != Z.shape[0]:
        raise DimensionError("E and Z must live in the same space")
    d = E.shape[0]
    rE, rZ = exact_rank(E), exact_rank(Z)
    rSum = exact_rank(np.hstack([E, Z]))
    inter = rE + rZ - rSum
    codim = d - rZ
    return {"dimE": rE, "codimZ": codim, "dimIntersection": inter, "holds": rE - codim <= inter}
