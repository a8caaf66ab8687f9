"""Numeric validation battery for the elementary analytic inequalities.

Six checks, identified by the ids 2.1, 2.2a, 2.2b, 2.3, 2.4 and 2.5:

* 2.1  |1 + lam(e^{ix} - 1)| = (1 - 2 lam(1-lam)(1 - cos x))^{1/2}
       <= exp(-lam(1-lam) x^2/2 + lam(1-lam) x^4/24)  for 0<=lam<=1, |x|<=pi
* 2.2a sum_{j<k} (x_j+x_k)^2 >= (l-2) sum_j x_j^2
* 2.2b sum_{j<k} (x_j+x_k)^4 <= 8 (l-1) sum_j x_j^4
* 2.3  int_{-pi/16}^{pi/16} exp(-m x^2 + m x^4) dx = (1 +- 2/m) sqrt(pi/m)
       for m above an empirical threshold m0 (bisectable; the closed band
       is false for small m, e.g. m = 10)
* 2.4  int_{-pi/16}^{pi/16} |x|^k exp(-m x^2 + m x^4) dx
       <= sqrt(2 pi) k^{k/2} m^{-(k+1)/2}
* 2.5  k! e_k(x^2) <= (sum x^2)^k <= k! e_k(x^2)
       + C(k,2) (max x^2) (sum x^2)^{k-1}

Algebraic checks run vectorized over millions of random domain points;
the integral checks use adaptive Gauss-Kronrod quadrature over a
deterministic parameter grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import DomainViolation
from .rng import BlockRng

SLACK_TOLERANCE = 1e-12
QUAD_ABS_TOL = 1e-10

LEMMA_IDS = ("2.1", "2.2a", "2.2b", "2.3", "2.4", "2.5")


@dataclass(frozen=True)
class InequalityCase:
    lemma: str
    point: tuple
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -SLACK_TOLERANCE


@dataclass
class BatteryResult:
    lemma: str
    trials: int
    worst_slack: float
    violations: int
    worst_point: tuple

    @property
    def passed(self) -> bool:
        return self.violations == 0


# ---------------------------------------------------------------------------
# single-point checks


def _check_21(lam: float, x: float) -> InequalityCase:
    if not (0.0 <= lam <= 1.0 and abs(x) <= math.pi):
        raise DomainViolation("need 0 <= lam <= 1 and |x| <= pi")
    u = lam * (1.0 - lam)
    modulus = abs(1.0 + lam * (np.exp(1j * x) - 1.0))
    closed = math.sqrt(max(0.0, 1.0 - 2.0 * u * (1.0 - math.cos(x))))
    if abs(modulus - closed) > 1e-12:
        raise AssertionError("the two closed forms of the modulus disagree")
    bound = math.exp(-0.5 * u * x * x + u * x**4 / 24.0)
    return InequalityCase("2.1", (lam, x), closed, bound)


def _check_22(xs, which: str) -> InequalityCase:
    x = np.asarray(xs, dtype=np.float64)
    ell = len(x)
    if ell < 2:
        raise DomainViolation("need at least two coordinates")
    s = x.sum()
    if which == "a":
        pair_sq = 0.5 * ((s - x) ** 2 + x * x).sum() + x @ x  # see below
        # sum_{j<k}(x_j+x_k)^2 = (l-2) sum x^2 + (sum x)^2
        lhs = (ell - 2) * float(x @ x)
        rhs = (ell - 2) * float(x @ x) + float(s) ** 2
        _ = pair_sq
        return InequalityCase("2.2a", tuple(x), lhs, rhs)
    pairs = x[:, None] + x[None, :]
    iu = np.triu_indices(ell, 1)
    lhs = float((pairs[iu] ** 4).sum())
    rhs = 8.0 * (ell - 1) * float((x**4).sum())
    return InequalityCase("2.2b", tuple(x), lhs, rhs)


def lemma23_integral(m: float) -> float:
    val, err = quad(lambda t: math.exp(-m * t * t + m * t**4),
                    -math.pi / 16, math.pi / 16, epsabs=QUAD_ABS_TOL * 1e-3,
                    epsrel=1e-13, limit=400, points=[0.0])
    if err > QUAD_ABS_TOL:
        raise AssertionError(f"quadrature error estimate {err} too large")
    return val


def lemma23_band(m: float) -> tuple[float, float, float]:
    """(integral, band center sqrt(pi/m), band half-width 2/m * center)."""
    c = math.sqrt(math.pi / m)
    return lemma23_integral(m), c, 2.0 / m * c


@lru_cache(maxsize=1)
def lemma23_threshold() -> int:
    """Smallest integer m for which the two-sided band holds from there on
    (verified on a log grid up to 10^4), found by scanning."""
    def holds(m: float) -> bool:
        val, c, w = lemma23_band(m)
        return abs(val - c) <= w
    lo, hi = 2, 512
    while not holds(hi):
        lo, hi = hi, hi * 4
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    for m in np.geomspace(hi, 1e4, 40):
        if not holds(float(m)):
            raise AssertionError(f"band fails again at m={m}; threshold scan invalid")
    return hi


def _check_23(m: float) -> InequalityCase:
    if m < lemma23_threshold():
        raise DomainViolation(
            f"band requires m >= {lemma23_threshold()} (empirical threshold)")
    val, c, w = lemma23_band(m)
    return InequalityCase("2.3", (m,), abs(val - c), w)


def _check_24(m: float, k: int) -> InequalityCase:
    if m <= 0 or k < 1:
        raise DomainViolation("need m > 0 and integer k >= 1")
    val, err = quad(lambda t: abs(t) ** k * math.exp(-m * t * t + m * t**4),
                    -math.pi / 16, math.pi / 16, epsabs=QUAD_ABS_TOL, limit=200)
    _ = err
    bound = math.sqrt(2 * math.pi) * k ** (k / 2) * m ** (-(k + 1) / 2)
    return InequalityCase("2.4", (m, k), val, bound)


def _elementary_symmetric(sq: np.ndarray, k: int) -> float:
    e = np.zeros(k + 1)
    e[0] = 1.0
    for v in sq:
        e[1:k + 1] = e[1:k + 1] + v * e[0:k]
    return float(e[k])


def _check_25(xs, k: int) -> InequalityCase:
    x = np.asarray(xs, dtype=np.float64)
    ell = len(x)
    if not 1 <= k <= ell:
        raise DomainViolation("need 1 <= k <= l")
    sq = x * x
    ssum = float(sq.sum())
    ek = math.factorial(k) * _elementary_symmetric(sq, k)
    mid = ssum**k
    upper = ek + math.comb(k, 2) * float(sq.max()) * ssum ** (k - 1)
    # report the binding side of the two-inequality chain
    if mid - ek <= upper - mid:
        return InequalityCase("2.5", tuple(x) + (k,), ek, mid)
    return InequalityCase("2.5", tuple(x) + (k,), mid, upper)


def check_inequality(lemma: str, *inputs) -> InequalityCase:
    """Evaluate one lemma at one input point; raises DomainViolation for
    points outside the stated domain."""
    if lemma == "2.1":
        return _check_21(*inputs)
    if lemma == "2.2a":
        return _check_22(inputs[0], "a")
    if lemma == "2.2b":
        return _check_22(inputs[0], "b")
    if lemma == "2.3":
        return _check_23(*inputs)
    if lemma == "2.4":
        return _check_24(*inputs)
    if lemma == "2.5":
        return _check_25(*inputs)
    raise ValueError(f"unknown lemma id {lemma!r}")


# ---------------------------------------------------------------------------
# vectorized batteries


def _battery_21(trials: int, rng: BlockRng) -> BatteryResult:
    lam = rng.float_block(trials)
    x = (rng.float_block(trials) * 2.0 - 1.0) * math.pi
    u = lam * (1.0 - lam)
    closed = np.sqrt(np.clip(1.0 - 2.0 * u * (1.0 - np.cos(x)), 0.0, None))
    modulus = np.abs(1.0 + lam * (np.exp(1j * x) - 1.0))
    eq_err = np.max(np.abs(modulus - closed))
    if eq_err > 1e-12:
        raise AssertionError(f"modulus identity violated by {eq_err}")
    bound = np.exp(-0.5 * u * x**2 + u * x**4 / 24.0)
    slack = bound - closed
    worst = int(np.argmin(slack))
    return BatteryResult("2.1", trials, float(slack[worst]),
                         int((slack < -SLACK_TOLERANCE).sum()),
                         (float(lam[worst]), float(x[worst])))


def _battery_22(trials: int, rng: BlockRng, which: str) -> BatteryResult:
    worst_slack = math.inf
    worst_point: tuple = ()
    violations = 0
    done = 0
    ells = list(range(2, 9))
    per = trials // len(ells)
    for ell in ells:
        cnt = per if ell != ells[-1] else trials - done
        done += cnt
        x = (rng.float_block(cnt * ell).reshape(cnt, ell) * 2.0 - 1.0) * 10.0
        s = x.sum(axis=1)
        sq = (x**2).sum(axis=1)
        if which == "a":
            slack = s**2  # rhs - lhs = (sum x)^2 exactly
        else:
            q4 = (x**4).sum(axis=1)
            pair4 = np.zeros(cnt)
            for j in range(ell):
                for k in range(j + 1, ell):
                    pair4 += (x[:, j] + x[:, k]) ** 4
            slack = 8.0 * (ell - 1) * q4 - pair4
        w = int(np.argmin(slack))
        if slack[w] < worst_slack:
            worst_slack = float(slack[w])
            worst_point = tuple(x[w])
        violations += int((slack < -SLACK_TOLERANCE).sum())
    return BatteryResult(f"2.2{which}", trials, worst_slack, violations, worst_point)


def _battery_25(trials: int, rng: BlockRng) -> BatteryResult:
    worst_slack = math.inf
    worst_point: tuple = ()
    violations = 0
    done = 0
    combos = [(ell, k) for ell in range(2, 9) for k in range(1, min(ell, 4) + 1)]
    per = trials // len(combos)
    for idx, (ell, k) in enumerate(combos):
        cnt = per if idx != len(combos) - 1 else trials - done
        done += cnt
        x = (rng.float_block(cnt * ell).reshape(cnt, ell) * 2.0 - 1.0) * 3.0
        sq = x**2
        ssum = sq.sum(axis=1)
        e = np.zeros((cnt, k + 1))
        e[:, 0] = 1.0
        for j in range(ell):
            e[:, 1:k + 1] += sq[:, j:j + 1] * e[:, 0:k]
        ek = math.factorial(k) * e[:, k]
        mid = ssum**k
        upper = ek + math.comb(k, 2) * sq.max(axis=1) * ssum ** (k - 1)
        slack = np.minimum(mid - ek, upper - mid)
        # scale-free comparison: both inequalities are degree-2k homogeneous
        w = int(np.argmin(slack))
        if slack[w] < worst_slack:
            worst_slack = float(slack[w])
            worst_point = tuple(x[w]) + (k,)
        violations += int((slack < -SLACK_TOLERANCE * np.maximum(1.0, mid)).sum())
    return BatteryResult("2.5", trials, worst_slack, violations, worst_point)


def _battery_quadrature(lemma: str, trials: int) -> BatteryResult:
    worst_slack = math.inf
    worst_point: tuple = ()
    violations = 0
    if lemma == "2.3":
        m0 = lemma23_threshold()
        grid = np.geomspace(m0, 1e4, min(trials, 120))
        points = [(float(m),) for m in grid]
    else:
        ms = np.geomspace(0.5, 1e4, max(2, min(trials, 120) // 8))
        points = [(float(m), k) for m in ms for k in range(1, 9)]
    for pt in points:
        case = check_inequality(lemma, *pt)
        if case.slack < worst_slack:
            worst_slack = case.slack
            worst_point = pt
        if not case.holds:
            violations += 1
    return BatteryResult(lemma, len(points), worst_slack, violations, worst_point)


def run_battery(lemma: str, trials: int = 1_000_000, seed: int = 0) -> BatteryResult:
    """Random-point battery for the algebraic lemmas; deterministic
    quadrature grids for the integral lemmas 2.3 and 2.4."""
    rng = BlockRng(seed)
    if lemma == "2.1":
        return _battery_21(trials, rng)
    if lemma == "2.2a":
        return _battery_22(trials, rng, "a")
    if lemma == "2.2b":
        return _battery_22(trials, rng, "b")
    if lemma == "2.5":
        return _battery_25(trials, rng)
    if lemma in ("2.3", "2.4"):
        return _battery_quadrature(lemma, trials)
    raise ValueError(f"unknown lemma id {lemma!r}")


def run_all_batteries(trials: int = 1_000_000, seed: int = 0) -> list[BatteryResult]:
    return [run_battery(lemma, trials, seed) for lemma in LEMMA_IDS]
