"""Weight sequences indexed in log2, the rational chain of index sets, and
fundamental functions of three-valued systems and their block sums."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, DimensionError
from .exponent import INF, Exponent
from .spaces import fspan_norm

LN2 = math.log(2.0)
_MAX_EXPONENT_OF_THREE = 640  # 3**m must stay a finite double


# ---------------------------------------------------------------------------
# chain of index sets


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z: int) -> tuple:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def rational_code(x: Fraction) -> int:
    """Injective code of a nonnegative rational: Cantor pair of its reduced form."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("only nonnegative rationals are encoded")
    return cantor_pair(x.numerator, x.denominator)


def _is_decimal_denominator(b: int) -> bool:
    for prime in (2, 5):
        while b % prime == 0:
            b //= prime
    return b == 1


def decimal_truncation(s: Fraction, digits: int) -> Fraction:
    """The first ``digits`` decimal digits of s, as an exact rational."""
    scale = 10 ** digits
    return Fraction(math.floor(Fraction(s) * scale), scale)


@dataclass(frozen=True)
class ChainSubset:
    """Codes of the decimal truncations of all s in (0, r).

    These are exactly the terminating decimals in [0, r), so membership of
    an integer is decided by decoding it.
    """

    r: Fraction

    def __post_init__(self):
        r = Fraction(repr(self.r)) if isinstance(self.r, float) else Fraction(self.r)
        if not 0 < r < 1:
            raise ValueError("r must lie in (0, 1)")
        object.__setattr__(self, "r", r)

    def __contains__(self, m) -> bool:
        m = int(m)
        if m < 0:
            return False
        a, b = cantor_unpair(m)
        if b < 1 or math.gcd(a, b) != 1:
            return False
        return _is_decimal_denominator(b) and Fraction(a, b) < self.r

    def window(self, T: int) -> list:
        return [m for m in range(1, T + 1) if m in self]

    def first(self, count: int) -> list:
        out, m = [], 0
        while len(out) < count:
            m += 1
            if m in self:
                out.append(m)
        return out

    def to_json(self):
        return {"r": str(self.r)}


# ---------------------------------------------------------------------------
# weight sequences


@dataclass(frozen=True)
class Anchor:
    k: int
    exponent_of_three: int
    log2_value: float

    @property
    def log2_index(self) -> float:
        return float(3 ** self.exponent_of_three) if self.exponent_of_three >= 0 else 0.0

    def to_json(self):
        return {"k": self.k, "exponentOfThree": self.exponent_of_three, "log2Value": self.log2_value}


def _chord_weight(L, a, b):
    """(2^L - 2^a) / (2^b - 2^a) for a <= L <= b, without forming 2^L."""
    if L <= a:
        return 0.0
    if L >= b:
        return 1.0
    num = -math.expm1((a - L) * LN2)
    den = -math.expm1((a - b) * LN2)
    scale = L - b
    return math.exp(scale * LN2) * num / den if scale > -1075 else 0.0


@dataclass(frozen=True)
class WeightSeq:
    """w_1 = 1 and w at 2^(3^m_k) equal to 2^(-eta k), affine in the raw
    index between anchors, with w_0 = 1 and w_x = w_floor(x)."""

    p: Exponent
    anchors: tuple

    @property
    def eta(self) -> float:
        return 1.0 / self.p.value - 0.5

    @property
    def last_log2_index(self) -> float:
        return self.anchors[-1].log2_index

    @classmethod
    def from_indices(cls, indices: Sequence[int], p) -> "WeightSeq":
        p = Exponent.of(p)
        if not 1 < p.value < 2:
            raise ValueError("p must lie in (1, 2)")
        ms = [int(m) for m in indices]
        if not ms or any(b <= a for a, b in zip(ms, ms[1:])) or ms[0] < 1:
            raise ValueError("indices must be a nonempty increasing list of positive integers")
        if ms[-1] > _MAX_EXPONENT_OF_THREE:
            raise CapacityError("anchor beyond double range", exponent=ms[-1], cap=_MAX_EXPONENT_OF_THREE)
        eta = 1.0 / p.value - 0.5
        anchors = [Anchor(0, -1, 0.0)]
        anchors += [Anchor(k, m, -eta * k) for k, m in enumerate(ms, start=1)]
        return cls(p, tuple(anchors))

    @classmethod
    def from_chain(cls, chain: ChainSubset, p, count: int = 6) -> "WeightSeq":
        return cls.from_indices(chain.first(count), p)

    def _floor_log2(self, L):
        if L < 0:
            return None
        if L >= 52:
            return L
        x = 2.0 ** L
        n = round(x)
        if abs(x - n) > 1e-9 * x:
            n = math.floor(x)
        return math.log2(n) if n >= 1 else None

    def log2_at(self, log2n: float) -> float:
        """log2 of the value at index floor(2^log2n)."""
        L = self._floor_log2(float(log2n))
        if L is None:
            return 0.0
        if L > self.last_log2_index:
            raise DimensionError("index beyond the last anchor", log2n=log2n, last=self.last_log2_index)
        for lo, hi in zip(self.anchors, self.anchors[1:]):
            if L <= hi.log2_index:
                t = _chord_weight(L, lo.log2_index, hi.log2_index)
                y0, y1 = 2.0 ** lo.log2_value, 2.0 ** hi.log2_value
                return math.log2(y0 + (y1 - y0) * t)
        return self.anchors[-1].log2_value

    def at_log2(self, log2n: float) -> float:
        return 2.0 ** self.log2_at(log2n)

    def at(self, n: int) -> float:
        return 1.0 if n < 1 else self.at_log2(math.log2(n))

    def to_json(self):
        return {"p": self.p.to_json(), "eta": self.eta, "anchors": [a.to_json() for a in self.anchors[1:]]}

    @classmethod
    def from_json(cls, obj):
        return cls.from_indices([a["exponentOfThree"] for a in obj["anchors"]], obj["p"])


def weight_seq_w(M, p, log2n: float) -> float:
    """w at index 2^log2n for the index set M (a chain subset or a list)."""
    if log2n < 0:
        raise ValueError("log2n must be nonnegative")
    if isinstance(M, ChainSubset):
        count = 1
        while True:
            seq = WeightSeq.from_chain(M, p, count)
            if seq.last_log2_index >= log2n:
                return seq.at_log2(log2n)
            count += 1
    return WeightSeq.from_indices(M, p).at_log2(log2n)


def condition12_ratio(v: WeightSeq, w: WeightSeq, c: float, n_grid: Sequence[float]) -> list:
    """v at sqrt(c n) over w at n, for each log2 n in the grid."""
    if v.p.value != w.p.value:
        raise ValueError("both sequences must share p")
    if not 0 < c <= 1:
        raise ValueError("c must lie in (0, 1]")
    lc = math.log2(c)
    return [2.0 ** (v.log2_at((lc + L) / 2.0) - w.log2_at(L)) for L in n_grid]


# ---------------------------------------------------------------------------
# fundamental functions


def _indicator(n, k):
    a = np.zeros(n)
    a[:k] = 1.0
    return a


def fundamental_phi(system, k: int, bruteforce: bool = False) -> float:
    """Largest norm of a sum of at most k of the f_j."""
    if not 1 <= k <= system.n:
        raise DimensionError("k must lie in [1, n]", k=k, n=system.n)
    value = fspan_norm(np.ones(k), system.subsystem(k))
    if bruteforce:
        if system.n > 6:
            raise CapacityError("subset enumeration capped at n = 6", n=system.n)
        best = 0.0
        for size in range(1, k + 1):
            for A in itertools.combinations(range(system.n), size):
                a = np.zeros(system.n)
                a[list(A)] = 1.0
                best = max(best, fspan_norm(a, system))
        if abs(best - value) > 1e-12 * value:
            raise AssertionError(f"exchangeability violated: {best} vs {value}")
    return value


def block_profile(system) -> list:
    """Norms of sums of j of the f_j in the full system, j = 0..n."""
    return [0.0] + [fspan_norm(_indicator(system.n, j), system) for j in range(1, system.n + 1)]


def _power(x, r):
    return x if r == INF else x ** r


def _combine(total, term, r):
    return max(total, term) if r == INF else total + term


def _finish(total, r):
    return total if r == INF else total ** (1.0 / r)


def lower_fundamental_lambda_dp(systems, outer, k: int) -> float:
    """Smallest outer-sum norm of a sum of at least k basis vectors."""
    r = Exponent.of(outer).value
    size = sum(s.n for s in systems)
    if not 0 <= k <= size:
        raise DimensionError("k out of range", k=k, total=size)
    if k == 0:
        return 0.0
    best = {0: 0.0}
    for s in systems:
        g = [_power(x, r) for x in block_profile(s)]
        nxt = {}
        for used, partial in best.items():
            for j in range(s.n + 1):
                val = _combine(partial, g[j], r)
                if used + j not in nxt or val < nxt[used + j]:
                    nxt[used + j] = val
        best = nxt
    return _finish(min(v for t, v in best.items() if t >= k), r)


def lambda_bruteforce_table(systems, outer, cap: int = 12) -> list:
    """Exhaustive minimum over index subsets of size at least k, for every k."""
    r = Exponent.of(outer).value
    sizes = [s.n for s in systems]
    total = sum(sizes)
    if total > cap:
        raise CapacityError("subset enumeration capped", total=total, cap=cap)
    best = [math.inf] * (total + 1)
    for mask in range(1 << total):
        acc, offset = 0.0, 0
        for s in systems:
            a = np.array([(mask >> (offset + i)) & 1 for i in range(s.n)], dtype=float)
            acc = _combine(acc, _power(fspan_norm(a, s) if a.any() else 0.0, r), r)
            offset += s.n
        size = bin(mask).count("1")
        best[size] = min(best[size], acc)
    for k in range(total - 1, -1, -1):
        best[k] = min(best[k], best[k + 1])
    best[0] = 0.0
    return [_finish(b, r) for b in best]


def lambda_bruteforce(systems, outer, k: int, cap: int = 12) -> float:
    """Exhaustive minimum over index subsets of size at least k."""
    total = sum(s.n for s in systems)
    if not 0 <= k <= total:
        raise DimensionError("k out of range", k=k, total=total)
    return lambda_bruteforce_table(systems, outer, cap)[k]
