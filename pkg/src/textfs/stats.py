"""One-sided two-sample tests for comparing per-run metric samples.

Both tests answer "is sample a stochastically greater than sample b?". The
t-test is Welch's (unequal variances, Welch-Satterthwaite df). Mann-Whitney
uses midranks for ties, an exact p by enumerating rank assignments for small
tie-free samples (combined n <= 12), and otherwise the normal approximation
with tie-corrected variance and continuity correction.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, rankdata
from scipy.stats import t as t_dist

EXACT_LIMIT = 12


@dataclass
class TestResult:
    statistic: float
    p_value: float
    method: str
    alternative: str = "greater"


def t_sf(statistic: float, df: float) -> float:
    """One-sided upper tail of Student's t (regularized incomplete beta)."""
    return float(t_dist.sf(statistic, df))


def _check_sample(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError(f"sample {name} must hold at least 2 values")
    if not np.isfinite(arr).all():
        raise ValueError(f"sample {name} contains non-finite values")
    return arr


def t_test(a, b) -> TestResult:
    """Welch's t-test of H1: mean(a) > mean(b)."""
    x = _check_sample(a, "a")
    y = _check_sample(b, "b")
    var_x = x.var(ddof=1)
    var_y = y.var(ddof=1)
    diff = x.mean() - y.mean()
    if var_x == 0.0 and var_y == 0.0:
        # degenerate samples: undefined statistic, decide by mean ordering
        if diff == 0.0:
            return TestResult(0.0, 0.5, "t")
        stat = math.inf if diff > 0 else -math.inf
        return TestResult(stat, 0.0 if diff > 0 else 1.0, "t")
    se2_x = var_x / x.size
    se2_y = var_y / y.size
    stat = diff / math.sqrt(se2_x + se2_y)
    df = (se2_x + se2_y) ** 2 / (
        se2_x**2 / (x.size - 1) + se2_y**2 / (y.size - 1)
    )
    return TestResult(float(stat), t_sf(stat, df), "t")


def _exact_p_greater(u_obs: int, n_a: int, n_b: int) -> float:
    """P(U >= u_obs) by enumerating every split of the pooled ranks."""
    n = n_a + n_b
    offset = n_a * (n_a + 1) // 2
    hits = 0
    total = 0
    for combo in itertools.combinations(range(1, n + 1), n_a):
        total += 1
        if sum(combo) - offset >= u_obs:
            hits += 1
    return hits / total


def mann_whitney_u(a, b) -> TestResult:
    """Mann-Whitney U test of H1: a stochastically greater than b."""
    x = _check_sample(a, "a")
    y = _check_sample(b, "b")
    n_a, n_b = x.size, y.size
    pooled = np.concatenate([x, y])
    ranks = rankdata(pooled)  # midranks for ties
    u_a = float(ranks[:n_a].sum() - n_a * (n_a + 1) / 2)

    _, tie_counts = np.unique(pooled, return_counts=True)
    has_ties = bool((tie_counts > 1).any())
    if not has_ties and n_a + n_b <= EXACT_LIMIT:
        p = _exact_p_greater(int(round(u_a)), n_a, n_b)
        return TestResult(u_a, p, "mann-whitney")

    n = n_a + n_b
    mu = n_a * n_b / 2.0
    tie_term = float((tie_counts**3 - tie_counts).sum())
    sigma2 = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma2 <= 0.0:
        # every pooled value identical: no evidence either way
        return TestResult(u_a, 0.5, "mann-whitney")
    z = (u_a - mu - 0.5) / math.sqrt(sigma2)
    return TestResult(u_a, float(norm.sf(z)), "mann-whitney")
