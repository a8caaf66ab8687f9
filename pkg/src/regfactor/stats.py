"""Streaming moments, variance predictions, CLT diagnostics and the
asymptotic count of dense regular graphs.

The accumulator keeps joint power sums as exact rationals (floats embed
exactly into Q), so merging accumulators is associative and commutative
to the bit.  Derived statistics are returned as floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.special import ndtr
from scipy.stats import chi2 as _chi2

from .errors import DegenerateDensity, InsufficientData, StarShape
from .graphs import (
    CanonicalShape,
    Graph,
    canonicalize,
    count_subgraphs,
    cycle_graph,
    is_connected,
    is_star,
    path_graph,
    aut_count,
)

MAX_TOTAL_DEGREE = 8


def _multi_indices(dim: int, max_deg: int) -> list[tuple[int, ...]]:
    out = []
    for alpha in product(range(max_deg + 1), repeat=dim):
        if 1 <= sum(alpha) <= max_deg:
            out.append(alpha)
    return out


class MomentAccumulator:
    """Mergeable joint power sums of a k-vector stream, exact."""

    def __init__(self, dim: int, max_degree: int = MAX_TOTAL_DEGREE):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        self.max_degree = max_degree
        self.count = 0
        self.sums: dict[tuple[int, ...], Fraction] = {
            a: Fraction(0) for a in _multi_indices(dim, max_degree)}

    def add(self, x) -> None:
        xs = [float(v) for v in x]
        if len(xs) != self.dim:
            raise ValueError("wrong dimension")
        self.count += 1
        pows = [[Fraction(1)] * (self.max_degree + 1) for _ in range(self.dim)]
        for i, v in enumerate(xs):
            f = Fraction(v)
            for k in range(1, self.max_degree + 1):
                pows[i][k] = pows[i][k - 1] * f
        for alpha, s in self.sums.items():
            term = Fraction(1)
            for i, a in enumerate(alpha):
                if a:
                    term *= pows[i][a]
            self.sums[alpha] = s + term

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if (other.dim, other.max_degree) != (self.dim, self.max_degree):
            raise ValueError("incompatible accumulators")
        out = MomentAccumulator(self.dim, self.max_degree)
        out.count = self.count + other.count
        for a in out.sums:
            out.sums[a] = self.sums[a] + other.sums[a]
        return out

    def _s(self, *alpha: int) -> Fraction:
        return self.sums[tuple(alpha)]

    def _unit(self, i: int, deg: int) -> tuple[int, ...]:
        a = [0] * self.dim
        a[i] = deg
        return tuple(a)

    def mean(self) -> np.ndarray:
        if self.count < 1:
            raise InsufficientData("no samples")
        return np.array([float(self.sums[self._unit(i, 1)] / self.count)
                         for i in range(self.dim)])

    def covariance(self) -> np.ndarray:
        """Unbiased covariance (n-1 divisor)."""
        n = self.count
        if n < 2:
            raise InsufficientData("covariance needs at least 2 samples")
        cov = np.zeros((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                a = [0] * self.dim
                a[i] += 1
                a[j] += 1
                sij = self.sums[tuple(a)]
                si = self.sums[self._unit(i, 1)]
                sj = self.sums[self._unit(j, 1)]
                cov[i, j] = float((sij - si * sj / n) / (n - 1))
        return cov

    def correlation(self) -> np.ndarray:
        cov = self.covariance()
        sd = np.sqrt(np.diag(cov))
        return cov / np.outer(sd, sd)

    def central_moment(self, i: int, deg: int) -> float:
        """deg-th central moment of coordinate i (population normalization)."""
        n = self.count
        if n < 2:
            raise InsufficientData("need at least 2 samples")
        mu = float(self.sums[self._unit(i, 1)] / n)
        total = 0.0
        for r in range(deg + 1):
            s_r = float(self.sums[self._unit(i, r)]) if r else float(n)
            total += math.comb(deg, r) * (-mu) ** (deg - r) * s_r
        return total / n

    def skewness(self, i: int = 0) -> float:
        m2 = self.central_moment(i, 2)
        return self.central_moment(i, 3) / m2**1.5

    def excess_kurtosis(self, i: int = 0) -> float:
        m2 = self.central_moment(i, 2)
        return self.central_moment(i, 4) / m2**2 - 3.0


def estimate_moments(samples, dim: int | None = None,
                     max_degree: int = MAX_TOTAL_DEGREE) -> MomentAccumulator:
    """Accumulate a finite stream of k-vectors (scalars promote to 1-vectors)."""
    acc: MomentAccumulator | None = None
    if dim is not None:
        acc = MomentAccumulator(dim, max_degree)
    for x in samples:
        row = [x] if np.isscalar(x) else list(x)
        if acc is None:
            acc = MomentAccumulator(len(row), max_degree)
        acc.add(row)
    if acc is None:
        raise InsufficientData("empty stream")
    return acc


# ---------------------------------------------------------------------------
# normality diagnostics


def ks_normal_distance(samples: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of empirically standardized samples to
    the standard normal."""
    x = np.asarray(samples, dtype=np.float64)
    n = len(x)
    if n < 2:
        raise InsufficientData("KS distance needs at least 2 samples")
    sd = x.std(ddof=1)
    if sd == 0:
        return 0.5
    z = np.sort((x - x.mean()) / sd)
    cdf = ndtr(z)
    hi = np.max(np.arange(1, n + 1) / n - cdf)
    lo = np.max(cdf - np.arange(0, n) / n)
    return float(max(hi, lo))


def _jackknife_skew_kurt(x: np.ndarray) -> tuple[float, float, float, float]:
    """(skewness, jackknife SE, excess kurtosis, jackknife SE)."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    s1, s2, s3, s4 = (np.sum(x**k) for k in (1, 2, 3, 4))

    def stats_from(s1v, s2v, s3v, s4v, cnt):
        mu = s1v / cnt
        m2 = s2v / cnt - mu**2
        m3 = s3v / cnt - 3 * mu * s2v / cnt + 2 * mu**3
        m4 = s4v / cnt - 4 * mu * s3v / cnt + 6 * mu**2 * s2v / cnt - 3 * mu**4
        return m3 / m2**1.5, m4 / m2**2 - 3.0

    skew, kurt = stats_from(s1, s2, s3, s4, n)
    sk_i, ku_i = stats_from(s1 - x, s2 - x**2, s3 - x**3, s4 - x**4, n - 1)
    se_sk = math.sqrt((n - 1) / n * np.sum((sk_i - sk_i.mean()) ** 2))
    se_ku = math.sqrt((n - 1) / n * np.sum((ku_i - ku_i.mean()) ** 2))
    return float(skew), se_sk, float(kurt), se_ku


@dataclass
class NormalityReport:
    count: int
    ks_distance: tuple[float, ...]
    skewness: tuple[float, ...]
    skewness_se: tuple[float, ...]
    ex_kurtosis: tuple[float, ...]
    ex_kurtosis_se: tuple[float, ...]
    correlation: np.ndarray


def normality_report(acc: MomentAccumulator, samples: np.ndarray,
                     min_samples: int = 500) -> NormalityReport:
    """Per-coordinate KS distance to the standard normal after empirical
    standardization, moment diagnostics with jackknife errors, and the
    pairwise correlation matrix."""
    x = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if x.shape[0] == 1 and acc.dim == 1:
        x = x.T
    if x.shape[0] < min_samples:
        raise InsufficientData(f"need at least {min_samples} samples")
    if x.shape[1] != acc.dim:
        raise ValueError("sample matrix does not match accumulator dimension")
    ks, sk, sk_se, ku, ku_se = [], [], [], [], []
    for i in range(acc.dim):
        col = x[:, i]
        ks.append(ks_normal_distance(col))
        if np.std(col) == 0:
            sk.append(0.0), sk_se.append(0.0), ku.append(0.0), ku_se.append(0.0)
            continue
        a, b, c, d = _jackknife_skew_kurt(col)
        sk.append(a), sk_se.append(b), ku.append(c), ku_se.append(d)
    corr = acc.correlation() if acc.dim > 1 else np.ones((1, 1))
    return NormalityReport(x.shape[0], tuple(ks), tuple(sk), tuple(sk_se),
                           tuple(ku), tuple(ku_se), corr)


# ---------------------------------------------------------------------------
# closed-form variance predictions


@dataclass
class VariancePrediction:
    shape: CanonicalShape
    regime: str                   # has-C3 | has-C4-no-C3 | no-C3-no-C4
    leading_value: float
    n: int
    d: int
    n_c3: int
    n_c4: int
    n_c5: int
    n_p4: int
    aut: int
    nedges: int
    nverts: int
    error_note: str = field(default="")


def predicted_variance(h: Graph, n: int, d: int) -> VariancePrediction:
    """Leading-order variance of the subgraph count X_h over G(n, d).

    Star shapes are rejected: their counts are deterministic.
    """
    if len(h.non_isolated()) < 2 or not is_connected(h):
        raise ValueError("shape must be connected with at least one edge")
    if is_star(h):
        raise StarShape("star counts equal n*C(d,s) deterministically")
    p = d / (n - 1)
    if not 0 < p < 1:
        raise DegenerateDensity(f"p={p}")
    shape = canonicalize(h)
    v = shape.nverts
    e = shape.nedges
    a = aut_count(h)
    n3 = count_subgraphs(h, cycle_graph(3))
    n4 = count_subgraphs(h, cycle_graph(4))
    n5 = count_subgraphs(h, cycle_graph(5))
    np4 = count_subgraphs(h, path_graph(4))

    if n3 > 0:
        regime = "has-C3"
        val = 6 * n3**2 * p ** (2 * e - 3) * (1 - p) ** 3 * n ** (2 * v - 3) / a**2
        note = f"leading term only; relative correction O(n^-1/6) at exponent {2*v-3}"
    elif n4 > 0:
        regime = "has-C4-no-C3"
        val = 8 * n4**2 * p ** (2 * e - 4) * (1 - p) ** 4 * n ** (2 * v - 4) / a**2
        note = f"leading term only; relative correction O(n^-1/6) at exponent {2*v-4}"
    else:
        regime = "no-C3-no-C4"
        if np4 == 0:
            raise StarShape("a non-star connected shape must contain a 4-vertex path")
        val = ((10 * p ** (2 * e - 5) * (1 - p) ** 5 * n5**2
                + 6 * p ** (2 * e - 3) * (1 - p) ** 3 * np4**2)
               * n ** (2 * v - 5) / a**2)
        note = f"leading term only; relative correction O(n^-1/6) at exponent {2*v-5}"
    return VariancePrediction(shape, regime, val, n, d, n3, n4, n5, np4,
                              a, e, v, note)


# ---------------------------------------------------------------------------
# asymptotic enumeration (log scale) and chi-square helper


def mw_count_estimate(n: int, d: int) -> float:
    """Natural log of the leading asymptotic count of d-regular graphs:
    sqrt(2) (2 pi lam^(d+1) (1-lam)^(n-d) n)^(-n/2)
    exp((-1 + 10 lam - 10 lam^2) / (12 lam (1-lam))), lam = d/(n-1)."""
    if not 1 <= d <= n - 2:
        raise DegenerateDensity("estimate needs 1 <= d <= n-2")
    lam = d / (n - 1)
    r = math.sqrt(lam / (1 - lam))  # radius of the underlying contour
    _ = r
    log_main = -(n / 2) * (math.log(2 * math.pi) + (d + 1) * math.log(lam)
                           + (n - d) * math.log(1 - lam) + math.log(n))
    correction = (-1 + 10 * lam - 10 * lam**2) / (12 * lam * (1 - lam))
    return 0.5 * math.log(2) + log_main + correction


def chi_square_uniform(counts, significance: float = 0.01) -> tuple[float, float, bool]:
    """Goodness-of-fit statistic of observed counts against the uniform
    law; returns (statistic, critical value, accept)."""
    obs = np.asarray(counts, dtype=np.float64)
    total = obs.sum()
    k = len(obs)
    exp = total / k
    stat = float(((obs - exp) ** 2 / exp).sum())
    crit = float(_chi2.ppf(1.0 - significance, k - 1))
    return stat, crit, stat <= crit


# ---------------------------------------------------------------------------
# fast small-cycle counts (used by the experiment drivers)


def triangle_count(g: Graph) -> int:
    a = g.adjacency_matrix(dtype=np.int64)
    return int(np.trace(a @ a @ a)) // 6


def four_cycle_count(g: Graph) -> int:
    a = g.adjacency_matrix(dtype=np.int64)
    tr4 = int(np.trace(np.linalg.matrix_power(a, 4)))
    degs = a.sum(axis=1)
    paths2 = int(sum(int(dv) * (int(dv) - 1) // 2 for dv in degs))
    m = g.num_edges
    return (tr4 - 4 * paths2 - 2 * m) // 8
