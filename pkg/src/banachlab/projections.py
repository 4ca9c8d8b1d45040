"""Euclidean projections onto norm balls and their intersections."""

import numpy as np

from .errors import NonConvergenceError

FEASIBILITY_TOL = 1e-10


def project_l2_ball(x, radius=1.0):
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x)
    if nrm <= radius:
        return x.copy()
    return x * (radius / nrm)


def _project_simplex_abs(a, radius):
    # projection of |x| onto {t >= 0, sum t <= radius}
    if a.sum() <= radius:
        return a.copy()
    u = np.sort(a)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, len(u) + 1)
    rho = np.nonzero(u * idx > css - radius)[0][-1]
    tau = (css[rho] - radius) / (rho + 1.0)
    return np.maximum(a - tau, 0.0)


def _shrink(a, lam, q, iters=200):
    """Solve t + lam*q*t**(q-1) = a coordinatewise for t in [0, a]."""
    c = lam * q
    if q >= 2:
        # convex left side: Newton from t = a decreases monotonically to the root
        t = a.copy()
        for _ in range(iters):
            h = t + c * t ** (q - 1) - a
            step = h / (1.0 + c * (q - 1) * t ** (q - 2))
            t = np.maximum(t - step, 0.0)
            if np.all(step <= 4e-16 * np.maximum(t, 1e-300)):
                break
        return t
    lo = np.zeros_like(a)
    hi = a.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        over = mid + c * mid ** (q - 1) > a
        hi = np.where(over, mid, hi)
        lo = np.where(over, lo, mid)
        if np.all(hi - lo <= 1e-16 * np.maximum(a, 1e-300)):
            break
    return hi


def project_lq_ball(x, q, radius=1.0, tol=FEASIBILITY_TOL, max_iter=200):
    """Project ``x`` onto the l_q ball of the given radius.

    For 1 < q < inf the multiplier of the constraint sum |z_i|^q <= r^q is
    located by bisection; every coordinate then solves a monotone scalar
    equation, also by bisection.  The returned point is feasible: the
    bisection keeps the end of the bracket that satisfies the constraint.
    """
    x = np.asarray(x, dtype=float)
    sign = np.sign(x)
    a = np.abs(x) / radius
    if q == np.inf:
        return sign * np.minimum(a, 1.0) * radius
    if q == 1:
        return sign * _project_simplex_abs(a, 1.0) * radius
    if q == 2:
        return project_l2_ball(x, radius)
    if np.sum(a ** q) <= 1.0:
        return x.copy()

    def excess(lam):
        return np.sum(_shrink(a, lam, q) ** q) - 1.0

    lo, hi = 0.0, 1.0
    while excess(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise NonConvergenceError("multiplier bracket diverged")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        e = excess(mid)
        if e > 0:
            lo = mid
        else:
            hi = mid
            if e >= -tol:
                break
        if hi - lo <= 1e-15 * hi:
            break
    return sign * _shrink(a, hi, q) * radius


def dykstra(x, projections, tol=1e-12, max_iter=10000):
    """Project onto the intersection of convex sets by Dykstra's algorithm."""
    x = np.asarray(x, dtype=float).copy()
    increments = [np.zeros_like(x) for _ in projections]
    for _ in range(max_iter):
        prev = x.copy()
        for i, proj in enumerate(projections):
            y = proj(x + increments[i])
            increments[i] = x + increments[i] - y
            x = y
        if np.linalg.norm(x - prev) <= tol * max(1.0, np.linalg.norm(x)):
            return x
    return x


def projected_ascent(y, project, step=1.0, iters=200, tol=1e-15, patience=3):
    """Maximize <x, y> over a compact convex set given its projection map.

    Steps double each iteration, so the iterates approach the projection of
    a far point along y, which is the maximizer.
    """
    y = np.asarray(y, dtype=float)
    x = project(np.zeros_like(y))
    t = step / max(np.linalg.norm(y), 1e-300)
    t_max = 1e8 * t
    value, still = float(x @ y), 0
    for _ in range(iters):
        x = project(x + t * y)
        new = float(x @ y)
        still = still + 1 if abs(new - value) <= tol * max(abs(new), 1e-300) else 0
        value = new
        if still >= patience:
            break
        t = min(2.0 * t, t_max)
    return x
