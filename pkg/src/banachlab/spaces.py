"""Norms of the finite-dimensional spaces used throughout the package.

Coordinates are plain numpy arrays.  Space descriptors (:class:`Lp`,
:class:`EMax`, :class:`FSpan`, :class:`BlockSum`) bundle a dimension with a
norm and serialize to tagged JSON objects.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import DimensionError, NonConvergenceError
from .estimate import NormEstimate
from .exponent import INF, Exponent
from .projections import dykstra, project_l2_ball, project_lq_ball, projected_ascent


def _as_vector(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError("expected a one-dimensional coordinate list", shape=list(x.shape))
    return x


def lp_norm(x, p) -> float:
    """l_p norm with the largest magnitude factored out."""
    p = Exponent.of(p).value
    a = np.abs(_as_vector(x))
    if a.size == 0:
        return 0.0
    m = a.max()
    if m == 0 or p == INF:
        return float(m)
    if p == 1:
        return float(a.sum())
    return float(m * np.sum((a / m) ** p) ** (1.0 / p))


def lp_norm_rows(X, p) -> np.ndarray:
    """Row-wise l_p norms of a 2-D array."""
    p = Exponent.of(p).value
    A = np.abs(np.asarray(X, dtype=float))
    m = A.max(axis=1) if A.shape[1] else np.zeros(A.shape[0])
    if p == INF:
        return m
    if p == 1:
        return A.sum(axis=1)
    safe = np.where(m > 0, m, 1.0)
    return m * np.sum((A / safe[:, None]) ** p, axis=1) ** (1.0 / p)


def emax_norm(x, p_prime, v) -> float:
    """max(||x||_{p'}, v ||x||_2)."""
    _check_v(v)
    return max(lp_norm(x, p_prime), v * lp_norm(x, 2))


def _check_v(v):
    if not 0 < v <= 1:
        raise ValueError(f"v must lie in (0, 1], got {v}")


# ---------------------------------------------------------------------------
# dual of the max-norm


@dataclass(frozen=True)
class DualNormResult:
    value: float
    primal_lower: float
    dual_upper: float
    gap: float
    split: tuple

    def to_json(self):
        return {
            "value": self.value,
            "primalLower": self.primal_lower,
            "dualUpper": self.dual_upper,
            "gap": self.gap,
            "split": [list(map(float, self.split[0])), list(map(float, self.split[1]))],
        }


def _split_cost(y1, y, p, radius):
    return lp_norm(y1, p) + radius * lp_norm(y - y1, 2)


def _primal_value(x, y, q, v):
    den = max(lp_norm(x, q), v * lp_norm(x, 2))
    return float(np.dot(x, y)) / den if den > 0 else 0.0


def _newton_root(y, s, q):
    # z**(q-1) + s*z = y, q > 2, started right of the root (h is convex)
    z = np.minimum(y / s, y ** (1.0 / (q - 1.0)))
    for _ in range(200):
        h = z ** (q - 1.0) + s * z - y
        step = h / ((q - 1.0) * z ** (q - 2.0) + s)
        z = np.maximum(z - step, 0.5 * z)
        if np.all(np.abs(step) <= 4e-16 * z):
            break
    return z


def _capped_multiplier(y, radius):
    """mu with ||min(1, y/mu)||_2 = radius, solved exactly between breakpoints."""
    ys = np.sort(y)[::-1]
    tail = np.cumsum((ys ** 2)[::-1])[::-1]
    for c in range(ys.size):
        room = radius ** 2 - c
        if room <= 0:
            break
        mu = math.sqrt(tail[c] / room)
        if ys[c] <= mu and (c == 0 or mu <= ys[c - 1]):
            return mu
    raise NonConvergenceError("no multiplier bracket for the capped problem")


def _sup_form_multiplier(y, q, v):
    """Maximizer of <x,y> over the intersection of the two balls.

    ``y`` is positive.  Returns ``(x, y1)`` where ``y1`` is the l_p part of
    the split read off from the optimality conditions.
    """
    radius = 1.0 / v
    p = q / (q - 1.0) if q != INF else 1.0
    if q == INF:
        # x_i = min(1, y_i/mu) with ||x||_2 = radius
        if math.sqrt(y.size) <= radius:
            return np.ones_like(y), y.copy()
        mu2 = np.linalg.norm(y) / radius
        if mu2 >= y.max():
            return y / mu2, np.zeros_like(y)

        mu = _capped_multiplier(y, radius)
        return np.minimum(1.0, y / mu), np.maximum(y - mu, 0.0)
    xq = y ** (p - 1.0)
    xq = xq / lp_norm(xq, q)
    if v * lp_norm(xq, 2) <= 1.0:
        return xq, y.copy()
    x2 = y / lp_norm(y, 2) * radius
    if lp_norm(x2, q) <= 1.0:
        return x2, np.zeros_like(y)
    scale = y.max() ** ((q - 2.0) / (q - 1.0))

    def phi(t):
        z = _newton_root(y, math.exp(t), q)
        return math.log(lp_norm(z, 2) / lp_norm(z, q)) - math.log(radius)

    lo, hi = math.log(scale) - 10.0, math.log(scale) + 10.0
    while phi(lo) < 0:
        lo -= 10.0
        if lo < -700:
            return xq, y.copy()
    while phi(hi) > 0:
        hi += 10.0
        if hi > 700:
            return x2, np.zeros_like(y)
    t = brentq(phi, lo, hi, xtol=1e-14, rtol=1e-15)
    s = math.exp(t)
    z = _newton_root(y, s, q)
    x = z / lp_norm(z, q)
    return x, y - s * z


def _sup_form_dykstra(y, q, v):
    radius = 1.0 / v
    projs = [lambda z: project_lq_ball(z, q), lambda z: project_l2_ball(z, radius)]
    return projected_ascent(y, lambda z: dykstra(z, projs))


def _inf_form(y, p, radius, starts=(0.5,)):
    """Minimize ||y1||_p + radius*||y - y1||_2 over y1 by quasi-Newton."""

    def fun(y1):
        a = np.abs(y1)
        n1 = lp_norm(y1, p)
        d = y - y1
        n2 = np.linalg.norm(d)
        g = np.zeros_like(y1)
        if n1 > 0:
            if p == 1:
                g += np.sign(y1)
            else:
                g += np.sign(y1) * (a / n1) ** (p - 1.0)
        if n2 > 0:
            g -= radius * d / n2
        return n1 + radius * n2, g

    best_val, best = _split_cost(y, y, p, radius), y.copy()
    zero_val = radius * lp_norm(y, 2)
    if zero_val < best_val:
        best_val, best = zero_val, np.zeros_like(y)
    for t in starts:
        res = minimize(fun, t * y, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": 500})
        val = _split_cost(res.x, y, p, radius)
        if val < best_val:
            best_val, best = val, res.x.copy()
    return best_val, best


def emax_dual_norm(y, p_prime, v, rtol=1e-6, method="multiplier", inf_form=True) -> DualNormResult:
    """Dual norm of ``y`` for the norm max(||x||_{p'}, v||x||_2).

    The primal side maximizes <x, y> over the intersection of the l_{p'} unit
    ball and the l_2 ball of radius 1/v; ``method`` selects either the
    multiplier search on the optimality conditions or projected ascent with
    Dykstra projections.  The dual side minimizes ||y1||_p + ||y2||_2 / v over
    splits y = y1 + y2.  Any feasible x certifies a lower bound and any split
    an upper bound; the two are required to agree within ``rtol``.
    """
    _check_v(v)
    pp = Exponent.of(p_prime)
    q, p = pp.value, pp.conjugate
    y = _as_vector(y)
    n = y.size
    sign = np.where(y < 0, -1.0, 1.0)
    supp = np.nonzero(y)[0]
    if supp.size == 0:
        z = np.zeros(n)
        return DualNormResult(0.0, 0.0, 0.0, 0.0, (z, z.copy()))
    scale = float(np.abs(y[supp]).max())
    ys = np.abs(y[supp]) / scale
    radius = 1.0 / v

    if q <= 2:
        # the l_2 constraint never binds: the space is l_{p'} itself
        if p == INF:
            x = np.zeros_like(ys)
            x[np.argmax(ys)] = 1.0
        else:
            x = ys ** (p - 1.0)
        y1 = ys.copy()
        candidates = [(x, y1)]
    elif method == "multiplier":
        candidates = [_sup_form_multiplier(ys, q, v)]
    elif method == "dykstra":
        candidates = [(_sup_form_dykstra(ys, q, v), None)]
    else:
        raise ValueError(f"unknown method {method!r}")

    lower = max(_primal_value(x, ys, q, v) for x, _ in candidates)
    upper, split1 = _split_cost(ys, ys, p, radius), ys.copy()
    for _, y1 in candidates:
        if y1 is not None:
            c = _split_cost(y1, ys, p, radius)
            if c < upper:
                upper, split1 = c, y1
    interior = any(y1 is None or (np.any(y1 > 0) and np.any(y1 < ys)) for _, y1 in candidates)
    if inf_form and q > 2 and interior:
        # at a corner split the two bounds already coincide
        c, y1 = _inf_form(ys, p, radius)
        if c < upper:
            upper, split1 = c, y1

    if lower > upper * (1 + 1e-12):
        raise NonConvergenceError("primal bound exceeds dual bound", lower=lower, upper=upper)
    upper = max(upper, lower)
    gap = upper - lower
    if gap > rtol * upper:
        raise NonConvergenceError("dual-norm gap above tolerance", lower=lower, upper=upper, gap=gap)
    lower, upper, gap = scale * lower, scale * upper, scale * gap
    y1_full = np.zeros(n)
    y1_full[supp] = scale * split1 * sign[supp]
    return DualNormResult(0.5 * (lower + upper), lower, upper, gap, (y1_full, y - y1_full))


# ---------------------------------------------------------------------------
# spans of three-valued systems


def fspan_norm(a, system) -> float:
    """L_p norm of sum_j a_j f_j, summed exactly over the atoms."""
    return fspan_moment(a, system, system.p.value)


def fspan_moment(a, system, r) -> float:
    """L_r norm of sum_j a_j f_j for any r >= 1 (r = inf allowed)."""
    a = _as_vector(a)
    if a.size != system.n:
        raise DimensionError("coefficient length differs from system size", expected=system.n, got=int(a.size))
    m = np.abs(a).max() if a.size else 0.0
    if m == 0:
        return 0.0
    vals = np.abs(system.signs @ (a / m))
    if r == INF:
        return float(system.amplitude * m * vals[system.probs > 0].max())
    total = math.fsum(system.probs * vals ** r)
    return float(system.amplitude * m * total ** (1.0 / r))


def fspan_norm_rows(A, system) -> np.ndarray:
    """Vectorized fspan_norm for the rows of ``A`` (ordinary summation)."""
    A = np.asarray(A, dtype=float)
    vals = np.abs(A @ system.signs.T)
    p = system.p.value
    return system.amplitude * (np.abs(vals) ** p @ system.probs) ** (1.0 / p)


def fspan_embed(a, system) -> np.ndarray:
    """Image of sum_j a_j f_j in l_p^{atoms}: value * prob^{1/p} per atom."""
    a = _as_vector(a)
    return system.amplitude * (system.signs @ a) * system.probs ** (1.0 / system.p.value)


# ---------------------------------------------------------------------------
# space descriptors


def _check_dim(space, x):
    x = _as_vector(x)
    if x.size != space.dim:
        raise DimensionError("vector length differs from space dimension", expected=space.dim, got=int(x.size))
    return x


@dataclass(frozen=True)
class Lp:
    dim: int
    p: Exponent

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "p", Exponent.of(self.p))

    def norm(self, x):
        return lp_norm(_check_dim(self, x), self.p)

    def norm_rows(self, X):
        return lp_norm_rows(X, self.p)

    def to_json(self):
        return {"kind": "lp", "dim": self.dim, "p": self.p.to_json()}


@dataclass(frozen=True)
class EMax:
    dim: int
    p_prime: Exponent
    v: float

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        _check_v(self.v)
        object.__setattr__(self, "p_prime", Exponent.of(self.p_prime))

    @property
    def flagged(self):
        """True when p' < 2, outside the range the construction uses."""
        return self.p_prime.value < 2

    def norm(self, x):
        x = _check_dim(self, x)
        return emax_norm(x, self.p_prime, self.v)

    def norm_rows(self, X):
        return np.maximum(lp_norm_rows(X, self.p_prime), self.v * lp_norm_rows(X, 2))

    def dual_norm(self, y, **kw):
        return emax_dual_norm(_check_dim(self, y), self.p_prime, self.v, **kw)

    def to_json(self):
        return {"kind": "emax", "dim": self.dim, "pPrime": self.p_prime.to_json(), "v": self.v}


@dataclass(frozen=True)
class FSpan:
    system: object

    @property
    def dim(self):
        return self.system.n

    @property
    def ambient_dim(self):
        return 3 ** self.system.n

    def norm(self, x):
        return fspan_norm(x, self.system)

    def norm_rows(self, X):
        return fspan_norm_rows(X, self.system)

    def to_json(self):
        return {"kind": "fspan", "system": self.system.to_json()}


@dataclass(frozen=True)
class BlockSum:
    outer: Exponent
    blocks: tuple

    def __post_init__(self):
        if len(self.blocks) < 1:
            raise ValueError("a block sum needs at least one block")
        object.__setattr__(self, "outer", Exponent.of(self.outer))
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def dim(self):
        return sum(b.dim for b in self.blocks)

    def split(self, x):
        x = _as_vector(x)
        if x.size != self.dim:
            raise DimensionError("vector length differs from space dimension", expected=self.dim, got=int(x.size))
        out, start = [], 0
        for b in self.blocks:
            out.append(x[start:start + b.dim])
            start += b.dim
        return out

    def norm(self, x):
        return lp_norm([b.norm(part) for b, part in zip(self.blocks, self.split(x))], self.outer)

    def norm_rows(self, X):
        X = np.asarray(X, dtype=float)
        cols, start = [], 0
        for b in self.blocks:
            cols.append(b.norm_rows(X[:, start:start + b.dim]))
            start += b.dim
        return lp_norm_rows(np.stack(cols, axis=1), self.outer)

    def to_json(self):
        return {"kind": "blocksum", "outer": self.outer.to_json(), "blocks": [b.to_json() for b in self.blocks]}


@dataclass(frozen=True)
class Vector:
    coords: tuple
    space: object

    def __post_init__(self):
        c = _as_vector(self.coords)
        if c.size != self.space.dim:
            raise DimensionError("vector length differs from space dimension", expected=self.space.dim, got=int(c.size))
        object.__setattr__(self, "coords", tuple(float(t) for t in c))

    @property
    def array(self):
        return np.array(self.coords)

    def norm(self):
        return self.space.norm(self.array)


def blocksum_norm(blocks: Sequence[Vector], outer) -> float:
    """Outer l_p norm of the block norms."""
    if len(blocks) == 0:
        raise DimensionError("block sum needs at least one block")
    return lp_norm([b.norm() for b in blocks], outer)


def space_from_json(obj):
    kind = obj.get("kind")
    if kind == "lp":
        return Lp(int(obj["dim"]), Exponent.of(obj["p"]))
    if kind == "emax":
        return EMax(int(obj["dim"]), Exponent.of(obj["pPrime"]), float(obj["v"]))
    if kind == "fspan":
        from .constructions import ThreeValuedSystem
        return FSpan(ThreeValuedSystem.from_json(obj["system"]))
    if kind == "blocksum":
        return BlockSum(Exponent.of(obj["outer"]), tuple(space_from_json(b) for b in obj["blocks"]))
    raise ValueError(f"unknown space kind {kind!r}")


def parse_vectors_csv(text: str):
    """One vector per non-empty line, comma separated."""
    rows = []
    for row in csv.reader(io.StringIO(text)):
        if not row or all(not c.strip() for c in row):
            continue
        rows.append(np.array([float(c) for c in row]))
    return rows


# ---------------------------------------------------------------------------
# complexification


def _golden_max(f, a, b, iters=60):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    best = max(fc, fd)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
        best = max(best, fc, fd)
    return best


def complex_vector_norm(x, y, space, grid_size=1024) -> NormEstimate:
    """sup over phi of ||x cos(phi) + y sin(phi)|| with two-sided bounds.

    The map phi -> ||x cos phi + y sin phi|| has period pi and Lipschitz
    constant at most the supremum V itself, so a grid of step h gives
    V <= gridmax / (1 - h/2).  V <= hypot(||x||, ||y||) holds as well.
    """
    x, y = _as_vector(x), _as_vector(y)
    if x.size != y.size or x.size != space.dim:
        raise DimensionError("real and imaginary parts must live in the same space",
                             expected=space.dim, got=[int(x.size), int(y.size)])
    h = math.pi / grid_size
    phis = np.arange(grid_size) * h
    X = np.outer(np.cos(phis), x) + np.outer(np.sin(phis), y)
    vals = space.norm_rows(X)
    k = int(np.argmax(vals))
    grid_max = float(vals[k])
    if grid_max == 0:
        return NormEstimate(0.0, 0.0, 0.0, "complexification-grid", 0, tuple(np.concatenate([x, y]).tolist()))
    nx, ny = space.norm(x), space.norm(y)
    # re-evaluate exactly at the best grid angle so the witness reproduces it
    phi0 = float(phis[k])
    lower = space.norm(math.cos(phi0) * x + math.sin(phi0) * y)
    refined = _golden_max(lambda t: space.norm(math.cos(t) * x + math.sin(t) * y), phi0 - h, phi0 + h)
    lower = max(lower, refined)
    upper = min(grid_max / (1.0 - h / 2.0), grid_max + (nx + ny) * h / 2.0, math.hypot(nx, ny))
    upper = max(upper, lower)
    return NormEstimate(lower, lower, upper, "complexification-grid", grid_size, tuple(np.concatenate([x, y]).tolist()))
