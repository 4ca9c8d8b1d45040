"""Inequality suites tying the constructions to quantitative estimates.

Constant-free inequalities are hard records; inequalities that carry an
unspecified constant are turned into implied constants by max-reduction,
after which the constant is substituted back so the records read as
checked inequalities.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .constructions import (formal_identity_block_norm, hadamard, hadamard_inverse_metrics,
                            scaled_hadamard, three_valued_system)
from .errors import PreconditionError
from .exponent import INF, Exponent
from .opnorm import op_norm_estimate, op_norm_exact, op_norm_upper
from .report import (InequalityRecord, VerificationReport, infer_implied_constant, out_of_range,
                     scale_rhs)
from .search import multistart_max, random_sphere
from .sequences import WeightSeq, block_profile, lambda_bruteforce_table, lower_fundamental_lambda_dp
from .spaces import Lp, complex_vector_norm, emax_dual_norm, fspan_norm

SUBSET_SUM = "subset-sum-lower"
DUAL_SANDWICH = "dual-sandwich-lower"
SUP_BOUNDED_L2 = "sup-bounded-l2"
SUP_BOUNDED_POWER = "sup-bounded-l2-power"
L2_DOMINATION = "l2-domination"


def _rngs(seed, count):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def parallel_map(fn, items, threads=1):
    """Ordered map; results never depend on the thread count."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt_exp(p: Exponent):
    return p.to_json()


# ---------------------------------------------------------------------------
# Hadamard family


def verify_hadamard_suite(max_level=10, r_list=(1.25, 1.5, 1.8), interpolation_levels=6, restarts=16,
                          seed=0, threads=1) -> VerificationReport:
    if not 1 <= max_level <= 10:
        raise ValueError("max_level must lie in [1, 10]")
    suite = "hadamard"
    rep = VerificationReport(suite, {"maxLevel": max_level, "r": list(r_list)}, seed=seed,
                             tolerances={"spectral": 1e-9, "identity": 0, "interpolation": 1e-6})
    for level in range(1, max_level + 1):
        H = hadamard(level)
        size = H.shape[0]
        defect = int(np.abs(H @ H - size * np.eye(size, dtype=np.int64)).max())
        rep.records.append(InequalityRecord(suite, {"check": "square", "level": level}, defect, 0))
    for level in range(1, max_level + 1):
        H = hadamard(level).astype(float)
        spectral = op_norm_exact(H, 2, 2)
        one_inf = op_norm_exact(H, 1, INF)
        target = 2.0 ** ((level - 1) / 2.0)
        err = abs(spectral - target)
        rec = InequalityRecord(suite, {"check": "exact-norms", "level": level, "spectral": spectral,
                                       "oneToInf": one_inf}, err, 0, tolerance=1e-9)
        if one_inf != 1.0:
            rec = InequalityRecord(suite, rec.params, err, 0, tolerance=1e-9, status="fail")
        rep.records.append(rec)

    jobs = [(level, r) for level in range(1, min(max_level, interpolation_levels) + 1) for r in r_list]

    def job(item):
        level, r = item
        r = Exponent.of(r)
        est = op_norm_estimate(hadamard(level).astype(float), r, r.conjugate, restarts=restarts, seed=seed)
        bound = 2.0 ** ((level - 1) / r.conjugate)
        return InequalityRecord(suite, {"check": "interpolation", "level": level, "r": r.value,
                                        "upper": est.upper, "method": est.method},
                                est.lower, bound, tolerance=1e-6 * bound, witness=est.witness)

    rep.records.extend(parallel_map(job, jobs, threads))
    return rep


def _certified_lower(A, p, q, restarts, seed):
    exact = op_norm_exact(A, p, q)
    if exact is not None:
        return exact
    return op_norm_estimate(A, p, q, restarts=restarts, seed=seed).lower


def _conditioned(rng, d, limit=1e4):
    while True:
        B = rng.standard_normal((d, d))
        if np.linalg.cond(B) <= limit:
            return B


def verify_prop52(level=4, p=1.5, r=2.0, q=INF, count=50, perturbations=20, seed=0, restarts=16,
                  threads=1) -> VerificationReport:
    """Any factorization U = AB of the scaled Hadamard matrix has
    ||A||_{r,q} ||B||_{p,r} >= 1/delta, and half that after perturbation."""
    p, r, q = Exponent.of(p), Exponent.of(r), Exponent.of(q)
    if not p.value < r.value < q.value:
        raise PreconditionError("need p < r < q")
    suite = "prop52"
    rep = VerificationReport(suite, {"level": level, "p": p.value, "r": _fmt_exp(r), "q": _fmt_exp(q),
                                     "count": count, "perturbations": perturbations}, seed=seed,
                             tolerances={"factorization": 1e-6, "equality": 1e-9, "deltaSvd": 1e-10})
    U = scaled_hadamard(level, p)
    d = U.shape[0]
    metrics = hadamard_inverse_metrics(level, p)
    bound = 1.0 / metrics.delta
    rep.records.append(InequalityRecord(suite, {"kind": "delta", "delta": metrics.delta,
                                                "deltaSvd": metrics.delta_svd},
                                        abs(metrics.delta - metrics.delta_svd), 0, tolerance=1e-10))
    rep.records.append(InequalityRecord(suite, {"kind": "column-norm", "maxColumnPNorm": metrics.max_column_p_norm},
                                        metrics.max_column_p_norm, 1.0, tolerance=1e-12))

    def product(A, B, s):
        return _certified_lower(A, r, q, restarts, s) * _certified_lower(B, p, r, restarts, s)

    I = np.eye(d)
    structured = [("A=U,B=I", U, I), ("A=I,B=U", I, U)]
    for i, (name, A, B) in enumerate(structured):
        rep.records.append(InequalityRecord(suite, {"kind": "factorization", "name": name}, bound,
                                            product(A, B, seed), tolerance=1e-6 * bound))
    eq = product(U, I, seed)
    rep.records.append(InequalityRecord(suite, {"kind": "equality", "name": "A=U,B=I", "product": eq},
                                        abs(eq - bound), 0, tolerance=1e-9))

    rngs = _rngs([seed, 52], count + perturbations)

    def random_factorization(i):
        B = _conditioned(rngs[i], d)
        A = np.linalg.solve(B.T, U.T).T
        return InequalityRecord(suite, {"kind": "factorization", "name": f"random-{i}",
                                        "condition": float(np.linalg.cond(B))},
                                bound, product(A, B, seed + i), tolerance=1e-6 * bound)

    rep.records.extend(parallel_map(random_factorization, range(count), threads))

    half = 0.5 * bound

    def perturbed(i):
        rng = rngs[count + i]
        D = rng.standard_normal((d, d))
        D *= metrics.perturb_threshold / op_norm_upper(D, p, q)[0]
        V = U + D
        B = _conditioned(rng, d)
        A = np.linalg.solve(B.T, V.T).T
        return InequalityRecord(suite, {"kind": "perturbation", "name": f"perturbed-{i}",
                                        "perturbNorm": op_norm_upper(D, p, q)[0]},
                                half, product(A, B, seed + count + i), tolerance=1e-6 * half)

    rep.records.extend(parallel_map(perturbed, range(perturbations), threads))
    return rep


# ---------------------------------------------------------------------------
# three-valued systems


def _coefficient_set(n, rng, count):
    fixed = [np.eye(n)[j] for j in range(n)]
    fixed += [np.r_[np.ones(k), np.zeros(n - k)] for k in range(2, n + 1)]
    fixed.append(np.array([(-1.0) ** j for j in range(n)]))
    return fixed + list(rng.standard_normal((count, n)))


def verify_eq4(n=4, p=1.5, v=0.5, samples=500, seed=0, threads=1) -> VerificationReport:
    """F-span norm against the dual max-norm on the same coefficients."""
    p = Exponent.of(p)
    suite = "eq4"
    system = three_valued_system(n, p, v)
    rep = VerificationReport(suite, {"n": n, "p": p.value, "v": v, "samples": samples}, seed=seed,
                             tolerances={"upper": "dual gap + 1e-9", "lower": "inferred"})
    coeffs = _coefficient_set(n, np.random.default_rng([seed, n]), samples)

    def job(a):
        f = fspan_norm(a, system)
        dual = emax_dual_norm(a, p.conjugate, v)
        upper = InequalityRecord(suite, {"kind": "upper", "gap": dual.gap, "dual": dual.value}, f, dual.value,
                                 tolerance=dual.gap + 1e-9, witness=tuple(a))
        lower = InequalityRecord(suite, {"kind": "lower"}, dual.dual_upper, f, hard=False, witness=tuple(a))
        return upper, lower

    pairs = parallel_map(job, coeffs, threads)
    uppers = [u for u, _ in pairs]
    lowers = [l for _, l in pairs]
    const = infer_implied_constant(lowers, DUAL_SANDWICH, p.value)
    rep.implied_constants.append(const)
    rep.records.extend(uppers)
    rep.records.extend(scale_rhs(l, const.value) for l in lowers)
    return rep


def subset_bound(k, p, v):
    return min(k ** (1.0 / p), math.sqrt(k) / v)


def verify_lemma_1iii(n=7, p=1.5, v=0.5, subsets=50, seed=0) -> VerificationReport:
    """Sums of k basis vectors against k^(1/p) and sqrt(k)/v."""
    p = Exponent.of(p)
    suite = "lemma1iii"
    system = three_valued_system(n, p, v)
    rep = VerificationReport(suite, {"n": n, "p": p.value, "v": v, "subsets": subsets}, seed=seed,
                             tolerances={"upper": 1e-9, "exchangeability": 0})
    profile = block_profile(system)
    rng = np.random.default_rng([seed, n])
    lowers = []
    for k in range(1, n + 1):
        norm = fspan_norm(np.ones(k), system.subsystem(k))
        bound = subset_bound(k, p.value, v)
        rep.records.append(InequalityRecord(suite, {"kind": "upper", "k": k, "norm": norm, "bound": bound},
                                            norm, bound, tolerance=1e-9))
        lowers.append(InequalityRecord(suite, {"kind": "lower", "k": k}, bound, norm, hard=False))
        for _ in range(subsets):
            A = np.sort(rng.choice(n, size=k, replace=False))
            a = np.zeros(n)
            a[A] = 1.0
            diff = abs(fspan_norm(a, system) - profile[k])
            rep.records.append(InequalityRecord(suite, {"kind": "exchangeability", "k": k,
                                                        "subset": A.tolist()}, diff, 0))
        rep.records.append(InequalityRecord(suite, {"kind": "subsystem", "k": k},
                                            abs(norm - profile[k]), 0, tolerance=1e-12 * norm))
    const = infer_implied_constant(lowers, SUBSET_SUM, p.value)
    rep.implied_constants.append(const)
    rep.records.extend(scale_rhs(l, const.value) for l in lowers)
    return rep


def half_root_floor(k: int) -> int:
    """floor(sqrt(k/2)) in exact integer arithmetic."""
    j = math.isqrt(k // 2)
    while 2 * (j + 1) ** 2 <= k:
        j += 1
    while 2 * j * j > k:
        j -= 1
    return j


def verify_lemma3_truncation(indices=None, p=1.5, block_count=6, k_max=40, subsets=0, seed=0,
                             bruteforce_cap=12) -> VerificationReport:
    """Lower fundamental function of a finite block sum against
    floor(sqrt(k/2)) / (v_j sqrt 2 K), with K inferred from the subset-sum suite."""
    if not 1 <= block_count <= 7:
        raise ValueError("block_count must lie in [1, 7]")
    p = Exponent.of(p)
    if indices is None:
        indices = list(range(1, 8))
    seq = indices if isinstance(indices, WeightSeq) else WeightSeq.from_indices(indices, p)
    suite = "lemma3"
    rep = VerificationReport(suite, {"indices": [a.exponent_of_three for a in seq.anchors[1:]], "p": p.value,
                                     "blockCount": block_count, "kMax": k_max}, seed=seed,
                             tolerances={"bound": 1e-12, "bruteforce": 0})
    weights = [seq.at(n) for n in range(1, block_count + 1)]
    systems = [three_valued_system(n, p, w) for n, w in zip(range(1, block_count + 1), weights)]
    consts = [verify_lemma_1iii(n, p, w, subsets=subsets, seed=seed).constant(SUBSET_SUM)
              for n, w in zip(range(1, block_count + 1), weights)]
    const = consts[0]
    for c in consts[1:]:
        const = const.merge(c)
    rep.implied_constants.append(const)
    total = sum(s.n for s in systems)
    for k in range(1, k_max + 1):
        j = half_root_floor(k)
        params = {"kind": "bound", "k": k, "j": j}
        if k > total or j > block_count:
            rep.records.append(out_of_range(suite, params))
            continue
        lam = lower_fundamental_lambda_dp(systems, p, k)
        bound = 0.0 if j == 0 else j / (seq.at(j) * const.value * math.sqrt(2.0))
        rep.records.append(InequalityRecord(suite, dict(params, **{"lambda": lam, "bound": bound}),
                                            bound, lam, tolerance=1e-12 * lam))
    prefix = []
    for s in systems:
        if sum(t.n for t in prefix) + s.n > bruteforce_cap:
            break
        prefix.append(s)
    table = lambda_bruteforce_table(prefix, p)
    for k in range(0, len(table)):
        dp = lower_fundamental_lambda_dp(prefix, p, k)
        rep.records.append(InequalityRecord(suite, {"kind": "bruteforce", "k": k, "blocks": len(prefix),
                                                    "dp": dp, "bruteforce": table[k]},
                                            0.0 if dp == table[k] else 1.0, 0))
    return rep


def _box_direction_value(u, system, sigma):
    """Largest multiple of |u| meeting both constraints: (scale, ||y||_2, ||y||_F)."""
    u = np.abs(u)
    f = fspan_norm(u, system)
    m = u.max()
    if f == 0:
        return 0.0, 0.0, 0.0
    t = min(1.0 / f, sigma / m)
    return t, t * np.linalg.norm(u), t * f


def verify_lemma5(n=4, p=1.5, q=3.0, v=None, sigma=0.5, restarts=16, seed=0) -> VerificationReport:
    """max ||y||_2 over ||y||_F <= 1, sup |y_j| <= sigma, against powers of sigma."""
    p, q = Exponent.of(p), Exponent.of(q)
    if not p.value < q.value < INF:
        raise PreconditionError("need p < q < inf")
    if not 0 < sigma <= 1:
        raise PreconditionError("sigma must lie in (0, 1]")
    e2 = 0.5 - 1.0 / p.conjugate
    if v is None:
        v = sigma ** e2
    if v > sigma ** e2 * (1 + 1e-12):
        raise PreconditionError("hypothesis v <= sigma^(1/2 - 1/p') violated", v=v, sigma=sigma,
                                limit=sigma ** e2)
    suite = "lemma5"
    system = three_valued_system(n, p, v)
    qv = q.value
    e1 = min(qv / 2 - p.value / 2, qv / 2 - qv / p.conjugate)
    rng = np.random.default_rng([seed, n])
    starts = [np.eye(n)[0]] + [np.r_[np.ones(k), np.zeros(n - k)] for k in range(2, n + 1)]
    starts = np.array(starts + list(np.abs(random_sphere(rng, restarts, n)))) if n > 1 else np.ones((1, 1))

    def l2(u):
        return _box_direction_value(u, system, sigma)[1]

    def power(u):
        _, y2, yf = _box_direction_value(u, system, sigma)
        return y2 ** qv / yf ** p.value if yf > 0 else -np.inf

    if n == 1:
        best2, arg2 = l2(np.ones(1)), np.ones(1)
        bestq, argq = power(np.ones(1)), np.ones(1)
    else:
        best2, arg2 = multistart_max(l2, starts, polish=4)
        bestq, argq = multistart_max(power, starts, polish=4)
    t2 = _box_direction_value(arg2, system, sigma)[0]
    tq = _box_direction_value(argq, system, sigma)[0]
    rep = VerificationReport(suite, {"n": n, "p": p.value, "q": qv, "v": v, "sigma": sigma,
                                     "restarts": restarts, "l2Exponent": e2, "powerExponent": e1}, seed=seed,
                             tolerances={"constants": "inferred"})
    r2 = InequalityRecord(suite, {"kind": "l2", "l2": best2}, best2, sigma ** e2, hard=False,
                          witness=tuple(t2 * np.abs(arg2)))
    rq = InequalityRecord(suite, {"kind": "power", "value": bestq}, bestq, sigma ** e1, hard=False,
                          witness=tuple(tq * np.abs(argq)))
    c2 = infer_implied_constant([r2], SUP_BOUNDED_L2, p.value)
    cq = infer_implied_constant([rq], SUP_BOUNDED_POWER, p.value)
    rep.implied_constants.extend([c2, cq])
    rep.records.extend([scale_rhs(r2, c2.value), scale_rhs(rq, cq.value)])
    return rep


# ---------------------------------------------------------------------------
# complexification


def _pair_norm_rows(X, Y, space, grid=64):
    phis = np.arange(grid) * (math.pi / grid)
    c, s = np.cos(phis), np.sin(phis)
    Z = c[None, :, None] * X[:, None, :] + s[None, :, None] * Y[:, None, :]
    vals = space.norm_rows(Z.reshape(-1, X.shape[1])).reshape(X.shape[0], grid)
    return vals.max(axis=1)


def complexified_norm(T, p, restarts=12, seed=0) -> float:
    """sup over real pairs of ||(Tx, Ty)||_C / ||(x, y)||_C on l_p^n."""
    T = np.asarray(T, dtype=float)
    m, n = T.shape
    dom, cod = Lp(n, p), Lp(m, p)
    rng = np.random.default_rng(seed)
    base = op_norm_estimate(T, p, p, seed=seed)
    wit = np.array(base.witness)

    def split(z):
        return z[:n], z[n:]

    def f(z):
        x, y = split(z)
        den = _pair_norm_rows(x[None], y[None], dom)[0]
        return _pair_norm_rows((T @ x)[None], (T @ y)[None], cod)[0] / den if den > 0 else -np.inf

    def batch(Z):
        X, Y = Z[:, :n], Z[:, n:]
        return _pair_norm_rows(X @ T.T, Y @ T.T, cod) / _pair_norm_rows(X, Y, dom)

    starts = [np.r_[wit, np.zeros(n)], np.r_[wit, 0.5 * rng.standard_normal(n)]]
    starts += list(random_sphere(rng, restarts, 2 * n))
    _, z = multistart_max(f, np.array(starts), polish=3, batch=batch)
    x, y = split(z)
    num = complex_vector_norm(T @ x, T @ y, cod).value
    den = complex_vector_norm(x, y, dom).value
    return num / den


def verify_complexification(spaces=(1.5, 2.0, 3.0), samples=1000, matrices=50, operator_spaces=(2.0, 1.5),
                            max_dim=6, op_dim=4, seed=0, threads=1) -> VerificationReport:
    suite = "complexify"
    rep = VerificationReport(suite, {"spaces": list(spaces), "samples": samples, "matrices": matrices,
                                     "operatorSpaces": list(operator_spaces), "maxDim": max_dim,
                                     "opDim": op_dim}, seed=seed,
                             tolerances={"sandwich": 1e-12, "operator": 2e-3})
    for si, p in enumerate(spaces):
        rng = np.random.default_rng([seed, si])
        for i in range(samples):
            dim = 1 + i % max_dim
            x, y = rng.standard_normal(dim), rng.standard_normal(dim)
            space = Lp(dim, p)
            est = complex_vector_norm(x, y, space)
            s = space.norm(x) + space.norm(y)
            params = {"space": p, "dim": dim, "index": i}
            rep.records.append(InequalityRecord(suite, dict(params, kind="sandwich-lower"), 0.5 * s, est.lower,
                                                tolerance=1e-12 * s))
            rep.records.append(InequalityRecord(suite, dict(params, kind="sandwich-upper"), est.upper, s,
                                                tolerance=1e-12 * s))

    jobs = [(oi, p, i) for oi, p in enumerate(operator_spaces) for i in range(matrices)]

    def job(item):
        oi, p, i = item
        rng = np.random.default_rng([seed, 100 + oi, i])
        T = rng.standard_normal((op_dim, op_dim))
        real = op_norm_estimate(T, p, p, seed=seed).value
        cplx = complexified_norm(T, p, seed=seed + i)
        return InequalityRecord(suite, {"kind": "operator", "space": p, "index": i, "real": real,
                                        "complexified": cplx},
                                abs(cplx - real) / real, 0, tolerance=2e-3)

    rep.records.extend(parallel_map(job, jobs, threads))
    return rep


# ---------------------------------------------------------------------------
# block formal identity and the domination constant


def verify_domination(n_values=(1, 2, 3, 4, 5), p=1.5, v=1.0, restarts=24, seed=0) -> VerificationReport:
    """Per-block norm of the identity from the F-span to l_2."""
    p = Exponent.of(p)
    suite = "domination"
    rep = VerificationReport(suite, {"n": list(n_values), "p": p.value, "v": v}, seed=seed)
    recs = []
    for n in n_values:
        val, wit = formal_identity_block_norm(three_valued_system(n, p, v), restarts=restarts, seed=seed + n)
        recs.append(InequalityRecord(suite, {"kind": "block", "n": n, "norm": val}, val, 1.0, hard=False,
                                     witness=tuple(wit)))
    const = infer_implied_constant(recs, L2_DOMINATION, p.value)
    rep.implied_constants.append(const)
    rep.records.extend(scale_rhs(r, const.value) for r in recs)
    return rep


def subset_sum_constant_spread(p=1.5, v=0.5, n_values=range(3, 8)) -> tuple:
    """(min, max) of the per-n subset-sum constant; a spread above 2 is worth a warning."""
    vals = [verify_lemma_1iii(n, p, v, subsets=0).constant(SUBSET_SUM).value for n in n_values]
    return min(vals), max(vals)


def subset_sum_spread_warnings(reports, n_values=range(3, 8), limit=2.0) -> list:
    """Warnings for (p, v) groups whose subset-sum constant varies by more than ``limit`` over n."""
    groups = {}
    for rep in reports:
        if rep.suite == "lemma1iii" and rep.params["n"] in n_values:
            key = (rep.params["p"], rep.params["v"])
            groups.setdefault(key, []).append(rep.constant(SUBSET_SUM).value)
    out = []
    for (p, v), vals in sorted(groups.items()):
        if max(vals) > limit * min(vals):
            out.append(f"subset-sum constant at p={p}, v={v} spans [{min(vals):.6g}, {max(vals):.6g}] over n")
    return out


# ---------------------------------------------------------------------------
# weight sequences and the chain


def verify_weights(indices=None, p=1.5, samples=100, seed=0) -> VerificationReport:
    """Monotonicity, range and the n^(-eta) floor at sampled log2 indices."""
    p = Exponent.of(p)
    seq = indices if isinstance(indices, WeightSeq) else WeightSeq.from_indices(indices or list(range(1, 8)), p)
    suite = "weights"
    rep = VerificationReport(suite, {"indices": [a.exponent_of_three for a in seq.anchors[1:]], "p": p.value,
                                     "samples": samples}, seed=seed,
                             tolerances={"monotone": "4e-16 relative", "floor": 1e-12})
    rng = np.random.default_rng(seed)
    top = seq.last_log2_index
    pts = np.expm1(rng.uniform(0.0, math.log1p(top), samples))
    pts = sorted(set(pts.tolist()) | {a.log2_index for a in seq.anchors})
    prev = None
    for L in pts:
        lw = seq.log2_at(L)
        w = 2.0 ** lw
        params = {"log2n": L, "value": w}
        rep.records.append(InequalityRecord(suite, dict(params, kind="range-low"), 0.0, w,
                                            status="pass" if w > 0 else "fail"))
        rep.records.append(InequalityRecord(suite, dict(params, kind="range-high"), w, 1.0))
        rep.records.append(InequalityRecord(suite, dict(params, kind="floor"), -seq.eta * L, lw, tolerance=1e-12))
        if prev is not None:
            rep.records.append(InequalityRecord(suite, dict(params, kind="monotone"), w, prev,
                                                tolerance=4e-16 * prev))
        prev = w
    return rep


def _covering_seq(chain, p, log2n):
    count = 1
    while True:
        seq = WeightSeq.from_chain(chain, p, count)
        if seq.last_log2_index >= log2n:
            return seq
        count += 1


def verify_condition12(r_small=0.1, r_large=0.9, p=1.5, c_values=(0.25, 0.5, 1.0), anchors=6,
                       seed=0) -> VerificationReport:
    """v from the larger chain set, w from the smaller one, sampled at the
    larger set's anchors; the ratio v_sqrt(cn) / w_n must strictly decrease."""
    from fractions import Fraction

    from .sequences import ChainSubset, condition12_ratio

    small, large = ChainSubset(Fraction(str(r_small))), ChainSubset(Fraction(str(r_large)))
    if not small.r < large.r:
        raise PreconditionError("need r_small < r_large")
    p = Exponent.of(p)
    v = WeightSeq.from_chain(large, p, anchors)
    grid = [a.log2_index for a in v.anchors[1:]]
    w = _covering_seq(small, p, grid[-1])
    suite = "condition12"
    rep = VerificationReport(suite, {"rSmall": str(small.r), "rLarge": str(large.r), "p": p.value,
                                     "c": list(c_values), "anchors": anchors,
                                     "vIndices": [a.exponent_of_three for a in v.anchors[1:]],
                                     "wIndices": [a.exponent_of_three for a in w.anchors[1:]]}, seed=seed,
                             tolerances={"strict": "rhs = previous * (1 - 1e-12)"})
    for c in c_values:
        ratios = condition12_ratio(v, w, c, grid)
        for i, (L, ratio) in enumerate(zip(grid, ratios)):
            params = {"c": c, "log2n": L, "ratio": ratio, "anchor": i + 1}
            if i == 0:
                rep.records.append(InequalityRecord(suite, dict(params, kind="start"), ratio, ratio, hard=False))
            else:
                rep.records.append(InequalityRecord(suite, dict(params, kind="decrease"), ratio,
                                                    ratios[i - 1] * (1 - 1e-12)))
    return rep


def verify_chain(pairs=((0.1, 0.5), (0.25, 0.75), (0.5, 0.9)), windows=(100, 1000, 10000),
                 seed=0) -> VerificationReport:
    """Nesting of chain sets on windows, and growth of their differences."""
    from fractions import Fraction

    from .sequences import ChainSubset

    suite = "chain"
    rep = VerificationReport(suite, {"pairs": [list(map(str, p)) for p in pairs], "windows": list(windows)},
                             seed=seed)
    for r1, r2 in pairs:
        a, b = ChainSubset(Fraction(str(r1))), ChainSubset(Fraction(str(r2)))
        big = max(windows)
        ma, mb = set(a.window(big)), set(b.window(big))
        prev = -1
        for T in windows:
            sa = {m for m in ma if m <= T}
            sb = {m for m in mb if m <= T}
            params = {"r1": str(a.r), "r2": str(b.r), "window": T}
            rep.records.append(InequalityRecord(suite, dict(params, kind="nesting"), len(sa - sb), 0))
            diff = len(sb - sa)
            rep.records.append(InequalityRecord(suite, dict(params, kind="growth", difference=diff), prev + 1, diff))
            prev = diff
    return rep
