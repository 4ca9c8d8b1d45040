"""Explicit finite-dimensional objects: Hadamard matrices, three-valued
random systems, l_2 -> l_inf embeddings, formal identities and
complexified operator blocks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ConstructionError, PreconditionError
from .exponent import INF, Exponent
from .search import multistart_max, random_sphere
from .spaces import fspan_norm, fspan_norm_rows, lp_norm, lp_norm_rows

HADAMARD_MAX_LEVEL = 14
ATOM_CAP = 12


def hadamard(level: int) -> np.ndarray:
    """Sylvester matrix of order 2**(level-1), integer entries."""
    if not 1 <= level <= HADAMARD_MAX_LEVEL:
        raise CapacityError(f"level must lie in [1, {HADAMARD_MAX_LEVEL}]", level=level)
    H = np.ones((1, 1), dtype=np.int64)
    for _ in range(level - 1):
        H = np.block([[H, H], [H, -H]])
    return H


def scaled_hadamard(level: int, r) -> np.ndarray:
    """2**(-(level-1)/r') H_level."""
    r = Exponent.of(r)
    if not 1 <= r.value <= 2:
        raise ValueError("r must lie in [1, 2]")
    inv_rp = 0.0 if r.conjugate == INF else 1.0 / r.conjugate
    return 2.0 ** (-(level - 1) * inv_rp) * hadamard(level)


@dataclass(frozen=True)
class InverseMetrics:
    delta: float
    max_column_p_norm: float
    perturb_threshold: float
    delta_svd: float

    def to_json(self):
        return {"delta": self.delta, "maxColumnPNorm": self.max_column_p_norm,
                "perturbThreshold": self.perturb_threshold, "deltaSvd": self.delta_svd}


def hadamard_inverse_metrics(level: int, p) -> InverseMetrics:
    """Spectral norm and column norms of the inverse of the p-scaled matrix."""
    p = Exponent.of(p)
    inv_pp = 0.0 if p.conjugate == INF else 1.0 / p.conjugate
    m = level - 1
    delta = 2.0 ** (m * (inv_pp - 0.5))
    inverse = 2.0 ** (-m) * 2.0 ** (m * inv_pp) * hadamard(level)
    if inverse.shape[0] <= 2048:
        delta_svd = float(np.linalg.svd(inverse, compute_uv=False)[0])
    else:
        # the scaled matrix is a multiple of an orthogonal one
        x = np.random.default_rng(0).standard_normal(inverse.shape[0])
        delta_svd = float(np.linalg.norm(inverse @ x) / np.linalg.norm(x))
    if abs(delta_svd - delta) > 1e-10 * delta:
        raise ConstructionError("closed-form delta disagrees with SVD", delta=delta, svd=delta_svd)
    col = float(lp_norm_rows(inverse.T, p).max())
    if col > 1 + 1e-12:
        raise ConstructionError("column p-norm of the inverse exceeds 1", value=col)
    return InverseMetrics(delta, col, 1.0 / (2.0 * col), delta_svd)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ThreeValuedSystem:
    """Independent symmetric variables taking +-amplitude w.p. atom_prob/2 each."""

    n: int
    p: Exponent
    v: float
    amplitude: float
    atom_prob: float
    signs: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)

    @property
    def atoms(self):
        return [(tuple(int(s) for s in row), float(pr)) for row, pr in zip(self.signs, self.probs)]

    def to_json(self):
        return {"n": self.n, "p": self.p.to_json(), "v": self.v,
                "amplitude": self.amplitude, "atomProb": self.atom_prob}

    @classmethod
    def from_json(cls, obj):
        return three_valued_system(int(obj["n"]), obj["p"], float(obj["v"]))

    def basis_matrix(self):
        """Columns are the images of f_1..f_n in l_p over the atoms."""
        return self.amplitude * self.signs * self.probs[:, None] ** (1.0 / self.p.value)

    def subsystem(self, k):
        return three_valued_system(k, self.p, self.v, cap=max(ATOM_CAP, k))


def three_valued_system(n: int, p, v: float, cap: int = ATOM_CAP) -> ThreeValuedSystem:
    p = Exponent.of(p)
    if not 1 < p.value < 2:
        raise ValueError("p must lie in (1, 2)")
    if not 0 < v <= 1:
        raise ValueError("v must lie in (0, 1]")
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapacityError(f"atom enumeration capped at n = {cap}", n=n, cap=cap)
    amplitude = v ** (-2.0 / (2.0 - p.value))
    theta = v ** (2.0 * p.value / (2.0 - p.value))
    assert theta <= 1.0
    idx = np.arange(3 ** n)
    powers = 3 ** np.arange(n - 1, -1, -1)
    signs = ((idx[:, None] // powers) % 3 - 1).astype(np.int8)
    nonzero = np.count_nonzero(signs, axis=1)
    probs = np.power(theta / 2.0, nonzero) * np.power(1.0 - theta, n - nonzero)
    keep = probs > 0
    if not keep.all():
        signs, probs = signs[keep], probs[keep]
    return ThreeValuedSystem(n, p, float(v), float(amplitude), float(theta), signs, probs)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ThetaEmbedding:
    n: int
    k_n: int
    directions: np.ndarray
    verified_lower_constant: float
    sampled_minimum: float

    def apply(self, x):
        return self.directions @ np.asarray(x, dtype=float)

    def to_json(self):
        return {"n": self.n, "k_n": self.k_n, "directions": self.directions.tolist(),
                "verifiedLowerConstant": self.verified_lower_constant}


def _base_directions(n):
    if n == 1:
        return np.array([[1.0]])
    if n == 2:
        a = np.deg2rad([0.0, 60.0, 120.0])
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    if n == 3:
        g = (1 + math.sqrt(5)) / 2
        D = np.array([[0, 1, g], [0, 1, -g], [1, g, 0], [1, -g, 0], [g, 0, 1], [-g, 0, 1]], dtype=float)
    else:
        D = [np.eye(4)[i] for i in range(4)]
        for s in range(8):
            D.append(np.array([1, 1 - 2 * (s >> 2 & 1), 1 - 2 * (s >> 1 & 1), 1 - 2 * (s & 1)]) / 2.0)
        D = np.array(D, dtype=float)
    return D / np.linalg.norm(D, axis=1, keepdims=True)


_NET_STEP = {1: 1.0, 2: 1e-4, 3: 4e-3, 4: 2e-2}


def _covering_minimum(D, step):
    """Minimum of max_i |<x, u_i>| over a cube-surface grid, and its radius.

    Radial projection from outside the unit ball is 1-Lipschitz, so the
    normalized grid is a net of the sphere with the returned radius.
    """
    n = D.shape[1]
    if n == 1:
        return 1.0, 0.0
    ticks = np.linspace(-1.0, 1.0, int(round(2.0 / step)) + 1)
    h = ticks[1] - ticks[0]
    grids = np.meshgrid(*([ticks] * (n - 1)), indexing="ij")
    face = np.stack([g.ravel() for g in grids], axis=1)
    best = np.inf
    for i in range(n):
        P = np.insert(face, i, 1.0, axis=1)
        for chunk in np.array_split(P, max(1, len(P) // 200000)):
            U = chunk / np.linalg.norm(chunk, axis=1, keepdims=True)
            best = min(best, float(np.abs(U @ D.T).max(axis=1).min()))
    return best, h * math.sqrt(n - 1) / 2.0


def theta_embedding(n: int, target_constant: float = 2.0, seed: int = 0) -> ThetaEmbedding:
    """Map l_2^n into l_inf^k with ||x||_2 / target <= ||theta x||_inf <= ||x||_2."""
    if target_constant < 2:
        raise ValueError("target constant must be at least 2")
    if not 1 <= n <= 4:
        raise CapacityError("certified nets are available for n <= 4", n=n)
    D = _base_directions(n)
    grid_min, radius = _covering_minimum(D, _NET_STEP[n])
    certified = grid_min - radius

    def f(z):
        nz = np.linalg.norm(z)
        return -np.abs(D @ z).max() / nz if nz > 0 else -np.inf

    rng = np.random.default_rng(seed)
    starts = random_sphere(rng, 64, n)
    sampled = -multistart_max(f, starts, polish=8)[0]
    if certified < 1.0 / target_constant:
        raise ConstructionError("net does not certify the target constant", certified=certified)
    return ThetaEmbedding(n, D.shape[0], D, float(min(certified, sampled)), float(sampled))


# ---------------------------------------------------------------------------


def formal_identity(m: int) -> np.ndarray:
    return np.eye(m)


def complexify_operator(R, S) -> np.ndarray:
    """Real 2x2 block form [[R, -S], [S, R]] of R + iS."""
    R, S = np.asarray(R, dtype=float), np.asarray(S, dtype=float)
    if R.shape != S.shape:
        raise ValueError("R and S must have the same shape")
    return np.block([[R, -S], [S, R]])


def _ratio_starts(n, rng, count):
    starts = [np.eye(n)[0]]
    starts += [np.r_[np.ones(k), np.zeros(n - k)] for k in range(2, n + 1)]
    starts += list(np.abs(random_sphere(rng, count, n)))
    return np.array(starts)


def formal_identity_block_norm(system, restarts=24, seed=0) -> tuple:
    """sup ||a||_2 / ||sum a_j f_j||_p; returns (value, maximizer)."""
    n = system.n
    if n == 1:
        return 1.0, np.array([1.0])
    rng = np.random.default_rng(seed)

    def ratio(a):
        na = np.linalg.norm(a)
        return na / fspan_norm(a, system) if na > 0 else -np.inf

    def batch(A):
        return np.linalg.norm(A, axis=1) / fspan_norm_rows(A, system)

    return multistart_max(ratio, _ratio_starts(n, rng, restarts), polish=4, batch=batch)


@dataclass(frozen=True)
class BlockIdentityNorm:
    per_block_norms: tuple
    total_norm: float
    witnesses: tuple = ()

    def to_json(self):
        return {"perBlockNorms": list(self.per_block_norms), "totalNorm": self.total_norm}


def _exp_le(a: Exponent, b: Exponent):
    return a.value <= b.value


def block_formal_identity(systems, outer_domain, outer_codomain, restarts=24, seed=0) -> BlockIdentityNorm:
    """Norm of the formal identity from an outer-domain sum of F-spans to an
    outer-codomain sum of Euclidean blocks (the maximum of the block norms)."""
    od, oc = Exponent.of(outer_domain), Exponent.of(outer_codomain)
    if not _exp_le(od, oc):
        raise PreconditionError("outer domain exponent must not exceed outer codomain exponent",
                                domain=od.to_json(), codomain=oc.to_json())
    norms, wits = [], []
    for i, s in enumerate(systems):
        val, wit = formal_identity_block_norm(s, restarts=restarts, seed=seed + i)
        norms.append(float(val))
        wits.append(tuple(wit))
    return BlockIdentityNorm(tuple(norms), max(norms), tuple(wits))


def block_formal_identity_joint(systems, outer_domain, outer_codomain, restarts=48, seed=0) -> float:
    """Direct maximization over the joint coefficient space (oracle)."""
    od, oc = Exponent.of(outer_domain), Exponent.of(outer_codomain)
    sizes = [s.n for s in systems]
    cuts = np.cumsum([0] + sizes)
    total = cuts[-1]

    def ratio(z):
        num = lp_norm([np.linalg.norm(z[cuts[i]:cuts[i + 1]]) for i in range(len(systems))], oc)
        den = lp_norm([fspan_norm(z[cuts[i]:cuts[i + 1]], s) for i, s in enumerate(systems)], od)
        return num / den if den > 0 else -np.inf

    rng = np.random.default_rng(seed)
    starts = [np.eye(total)[0]]
    for i in range(len(systems)):
        z = np.zeros(total)
        z[cuts[i]:cuts[i + 1]] = 1.0
        starts.append(z)
    starts += list(np.abs(random_sphere(rng, restarts, total)))
    return multistart_max(ratio, np.array(starts), polish=6)[0]
