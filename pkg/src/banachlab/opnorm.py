"""Mixed (p, q) operator norms of real matrices.

``op_norm_estimate`` returns a :class:`NormEstimate` whose ``lower`` is the
ratio ||Ax||_q / ||x||_p at an explicit witness found by a batched
generalized power iteration, and whose ``upper`` is the best available
analytic certificate (closed forms, interpolation between closed forms,
and norm-inclusion chains).
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from typing import Optional

import numpy as np

from .errors import CapacityError, DimensionError
from .estimate import NormEstimate
from .exponent import INF, Exponent
from .spaces import lp_norm, lp_norm_rows

MAX_AMBIENT = 4096
SIGN_PATTERN_COLS = 12


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise DimensionError("expected a non-empty 2-D matrix", shape=list(A.shape))
    if max(A.shape) > MAX_AMBIENT:
        raise CapacityError(f"dimension above {MAX_AMBIENT}", shape=list(A.shape))
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [[float(c) for c in row] for row in csv.reader(io.StringIO(text)) if row and any(c.strip() for c in row)]
    if len({len(r) for r in rows}) > 1:
        raise DimensionError("ragged matrix rows")
    return as_matrix(rows)


def matrix_to_json(A):
    A = as_matrix(A)
    return {"rows": A.shape[0], "cols": A.shape[1], "entries": [float(x) for x in A.ravel()]}


def matrix_from_json(obj):
    r, c, e = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    if len(e) != r * c:
        raise DimensionError("entries length differs from rows*cols", rows=r, cols=c, entries=len(e))
    return as_matrix(np.array(e, dtype=float).reshape(r, c))


def ratio(A, x, p, q) -> float:
    nx = lp_norm(x, p)
    return lp_norm(A @ x, q) / nx if nx > 0 else 0.0


# ---------------------------------------------------------------------------
# duality maps, column-wise


def _dual_map(Z, r):
    """Columns g with ||g||_{r'} = 1 and <g, z> = ||z||_r (zero for z = 0)."""
    if r == 1:
        return np.sign(Z)
    if r == INF:
        G = np.zeros_like(Z)
        idx = np.argmax(np.abs(Z), axis=0)
        cols = np.arange(Z.shape[1])
        G[idx, cols] = np.sign(Z[idx, cols])
        return G
    nz = lp_norm_rows(Z.T, r)
    safe = np.where(nz > 0, nz, 1.0)
    return np.sign(Z) * (np.abs(Z) / safe) ** (r - 1.0)


def _column_ratios(A, X, p, q):
    num = lp_norm_rows((A @ X).T, q)
    den = lp_norm_rows(X.T, p)
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


# ---------------------------------------------------------------------------
# closed forms and certificates


def _max_col(A, q):
    return float(lp_norm_rows(A.T, q).max())


def _max_row(A, p_conj):
    return float(lp_norm_rows(A, p_conj).max())


def _sigma1(A):
    return float(np.linalg.svd(A, compute_uv=False)[0])


def _exact_at(A, alpha, beta, cache):
    """Exact norm at (1/p, 1/q) = (alpha, beta) if it is a closed-form point."""
    key = (alpha, beta)
    if key in cache:
        return cache[key]
    val = None
    if alpha == 1.0:
        val = _max_col(A, INF if beta == 0 else 1.0 / beta)
    elif beta == 0.0:
        val = _max_row(A, INF if alpha == 1 else 1.0 / (1.0 - alpha))
    elif alpha == 0.5 and beta == 0.5:
        val = _sigma1(A)
    cache[key] = val
    return val


def op_norm_exact(A, p, q) -> Optional[float]:
    """Closed-form norm for p = 1, q = inf or p = q = 2; otherwise None."""
    A = as_matrix(A)
    p, q = Exponent.of(p), Exponent.of(q)
    if p.value == 1:
        return _max_col(A, q.value)
    if q.value == INF:
        return _max_row(A, p.conjugate)
    if p.value == 2 and q.value == 2:
        return _sigma1(A)
    return None


def _exact_witness(A, p, q):
    if p.value == 1:
        j = int(np.argmax(lp_norm_rows(A.T, q.value)))
        return np.eye(A.shape[1])[j]
    if q.value == INF:
        i = int(np.argmax(lp_norm_rows(A, p.conjugate)))
        return _dual_map(A[i][:, None], p.conjugate)[:, 0]
    if p.value == 2 and q.value == 2:
        return np.linalg.svd(A)[2][0]
    return None


def _inclusion(n, r_from, r_to):
    """||id: l_{r_from}^n -> l_{r_to}^n||."""
    a = 0.0 if r_to == INF else 1.0 / r_to
    b = 0.0 if r_from == INF else 1.0 / r_from
    return float(n) ** max(0.0, a - b)


def op_norm_upper(A, p, q, anchors=21) -> tuple:
    """Best analytic upper bound and a tag naming the certificate."""
    A = as_matrix(A)
    p, q = Exponent.of(p), Exponent.of(q)
    m, n = A.shape
    exact = op_norm_exact(A, p, q)
    if exact is not None:
        return exact, "exact"
    alpha, beta = p.inverse, q.inverse
    cache = {}
    best, tag = math.inf, "none"

    def offer(val, name):
        nonlocal best, tag
        if val < best:
            best, tag = val, name

    offer(_inclusion(n, p.value, 1) * _max_col(A, q.value), "chain-(1,q)")
    offer(_max_row(A, p.conjugate) * _inclusion(m, INF, q.value), "chain-(p,inf)")
    offer(_inclusion(n, p.value, 2) * _sigma1(A) * _inclusion(m, 2, q.value), "chain-(2,2)")

    grid = np.linspace(0.0, 1.0, anchors)
    starts = [(0.5, 0.5), (1.0, beta), (alpha, 0.0)]
    starts += [(1.0, float(b)) for b in grid] + [(float(a), 0.0) for a in grid]
    for a0, b0 in starts:
        da, db = alpha - a0, beta - b0
        if abs(da) < 1e-15 and abs(db) < 1e-15:
            continue
        hits = []
        if da > 0:
            hits.append((1.0 - a0) / da)
        if db < 0:
            hits.append(b0 / -db)
        hits = [t for t in hits if t >= 1.0]
        if not hits:
            continue
        t = min(hits)
        a1, b1 = a0 + t * da, b0 + t * db
        a1 = 1.0 if abs(a1 - 1.0) < 1e-13 else a1
        b1 = 0.0 if abs(b1) < 1e-13 else b1
        if not (0 <= a1 <= 1 and 0 <= b1 <= 1):
            continue
        n0 = _exact_at(A, a0, b0, cache)
        n1 = _exact_at(A, a1, b1, cache)
        if n0 is None or n1 is None:
            continue
        theta = 1.0 / t
        offer(n0 ** (1.0 - theta) * n1 ** theta, "interpolation")
    return best, tag


# ---------------------------------------------------------------------------


def _starts(A, p, q, restarts, rng):
    n = A.shape[1]
    cols = [np.eye(n)]
    if n <= SIGN_PATTERN_COLS:
        pats = np.array(list(itertools.product((1.0, -1.0), repeat=n - 1))) if n > 1 else np.ones((1, 0))
        cols.append(np.hstack([np.ones((len(pats), 1)), pats]).T)
    else:
        cols.append(rng.choice((-1.0, 1.0), size=(n, restarts)))
    cols.append(rng.standard_normal((n, restarts)))
    w = _exact_witness(A, p, q)
    if w is not None:
        cols.append(w[:, None])
    if min(A.shape) > 0:
        cols.append(np.linalg.svd(A)[2][:1].T)
    return np.hstack(cols)


def power_iterate(A, X, p, q, max_iter=500, tol=1e-14, keep=8, prune_after=40):
    """Batched iteration x <- J_{p'}(A^T J_q(A x)); returns best ratio and vector."""
    ratios = _column_ratios(A, X, p.value, q.value)
    best_vals, best_X = ratios.copy(), X.copy()
    for it in range(max_iter):
        G = _dual_map(A @ X, q.value)
        W = A.T @ G
        X = _dual_map(W, p.conjugate)
        vals = _column_ratios(A, X, p.value, q.value)
        improved = vals > best_vals
        best_X[:, improved] = X[:, improved]
        gain = np.max((vals - best_vals) / np.maximum(best_vals, 1e-300), initial=0.0)
        best_vals = np.maximum(best_vals, vals)
        if it == prune_after and X.shape[1] > keep:
            order = np.argsort(-best_vals, kind="stable")[:keep]
            X, best_X, best_vals = X[:, order], best_X[:, order], best_vals[order]
        if gain <= tol and it > 2:
            break
    k = int(np.argmax(best_vals))
    return float(best_vals[k]), best_X[:, k]


def op_norm_estimate(A, p, q, restarts: int = 16, seed: int = 0, max_iter: int = 500) -> NormEstimate:
    """Certified lower bound (the reported value) and analytic upper bound."""
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    A = as_matrix(A)
    p, q = Exponent.of(p), Exponent.of(q)
    upper, tag = op_norm_upper(A, p, q)
    if not np.any(A):
        return NormEstimate(0.0, 0.0, 0.0, "zero", restarts, tuple(np.eye(A.shape[1])[0]))
    rng = np.random.default_rng(seed)
    X = _starts(A, p, q, restarts, rng)
    _, x = power_iterate(A, X, p, q, max_iter=max_iter)
    x = x / lp_norm(x, p)
    lower = ratio(A, x, p, q)
    w = _exact_witness(A, p, q)
    if w is not None and ratio(A, w, p, q) > lower:
        x = w / lp_norm(w, p)
        lower = ratio(A, x, p, q)
    if lower > upper * (1 + 1e-9):
        raise AssertionError(f"witness ratio {lower} exceeds certificate {upper}")
    upper = max(upper, lower)
    return NormEstimate(lower, lower, upper, f"power-iteration/{tag}", restarts, tuple(float(t) for t in x))


# ---------------------------------------------------------------------------


def op_norm_bruteforce(A, p, q, grid_depth: int = 30, grid_points: int = 17) -> float:
    """Deterministic lower bound for matrices with at most 4 columns.

    Enumerates every vector with entries in {-1, 0, 1}, then a grid on each
    face x_i = 1 of the cube (the ratio is scale invariant), then runs a
    compass search from the best grid points with the step halved
    ``grid_depth`` times.
    """
    A = as_matrix(A)
    p, q = Exponent.of(p).value, Exponent.of(q).value
    n = A.shape[1]
    if n > 4:
        raise CapacityError("brute force limited to 4 columns", cols=n)

    def f(X):
        return _column_ratios(A, X.T, p, q)

    pats = np.array([s for s in itertools.product((-1.0, 0.0, 1.0), repeat=n) if any(s)])
    best = float(f(pats).max())
    if n == 1:
        return best
    ticks = np.linspace(-1.0, 1.0, grid_points)
    face = np.array(list(itertools.product(ticks, repeat=n - 1)))
    pts = np.vstack([np.insert(face, i, 1.0, axis=1) for i in range(n)])
    vals = f(pts)
    best = max(best, float(vals.max()))
    order = np.argsort(-vals, kind="stable")[:8]
    moves = np.array([s for s in itertools.product((-1.0, 0.0, 1.0), repeat=n) if any(s)])
    for x0 in pts[order]:
        x, fx = x0.copy(), float(f(x0[None, :])[0])
        h = ticks[1] - ticks[0]
        for _ in range(grid_depth):
            for _ in range(1000):
                cand = x + h * moves
                cv = f(cand)
                k = int(np.argmax(cv))
                if cv[k] <= fx:
                    break
                x, fx = cand[k], float(cv[k])
            h *= 0.5
        best = max(best, fx)
    return best
