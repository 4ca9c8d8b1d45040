"""Deterministic multistart local search used by the brute-force oracles."""

import numpy as np
from scipy.optimize import minimize


def random_sphere(rng, count, dim):
    X = rng.standard_normal((count, dim))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def multistart_max(f, starts, polish=4, method="Nelder-Mead", options=None, batch=None):
    """Maximize ``f`` over R^d from a list of starting points.

    Every start is evaluated (through ``batch`` when given, a function of a
    2-D array of points), then the ``polish`` best ones are refined by a
    local optimizer.  Returns ``(value, argmax)``.
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    if batch is not None:
        vals = np.asarray(batch(starts), dtype=float)
    else:
        vals = np.array([f(s) for s in starts])
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    order = np.argsort(-vals, kind="stable")
    best_val, best_x = float(vals[order[0]]), starts[order[0]].copy()
    opts = {"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000, "maxfev": 8000}
    if method != "Nelder-Mead":
        opts = {}
    if options:
        opts.update(options)
    for i in order[:polish]:
        res = minimize(lambda z: -f(z), starts[i], method=method, options=opts)
        val = f(res.x)
        if val > best_val:
            best_val, best_x = float(val), np.array(res.x, dtype=float)
    return best_val, best_x
