"""Nonparametric comparison battery for benchmark scores.

Wilcoxon signed-rank on paired seed-level scores (exact null distribution
up to n = 25, normal approximation with tie and continuity corrections
beyond), Benjamini-Hochberg step-up FDR control, the Friedman test across
methods, Cohen's d, and the fraction of conditions where several methods
tie the best within one percentage point.

Only numpy and the stdlib are used; the chi-square tail is computed from
the regularized incomplete gamma function (series + continued fraction),
accurate to ~1e-10, so results are independent of any statistics
package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

__all__ = [
    "PairedSamples",
    "wilcoxon_signed_rank",
    "bh_correct",
    "friedman",
    "cohens_d",
    "within_1pp_fraction",
    "chi2_sf",
]

_EXACT_WILCOXON_MAX_N = 25


@dataclass(frozen=True)
class PairedSamples:
    """Two equal-length vectors of paired scores."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
            raise DomainError("paired samples must be equal-length 1-D vectors")
        if a.size < 1:
            raise DomainError("paired samples must be non-empty")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise NumericalError("paired samples contain non-finite values")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def _rank_with_ties(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with average ranks on ties."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_signed_rank_cdf(ranks: np.ndarray, w_obs: float) -> float:
    """P(W+ <= w_obs) over the 2^n equiprobable sign assignments.

    Ranks are doubled to integers (ties give half-integer ranks) and the
    distribution of the positive-rank sum is built by subset-sum
    counting.
    """
    doubled = np.rint(2.0 * ranks).astype(int)
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.size - r]
        counts = counts + shifted
    threshold = int(math.floor(2.0 * w_obs + 1e-9))
    return float(counts[: threshold + 1].sum() / 2.0 ** len(ranks))


def wilcoxon_signed_rank(s: PairedSamples) -> tuple[float, float]:
    """Two-sided Wilcoxon signed-rank test; returns (W, p).

    W is the smaller of the positive/negative rank sums. Zero
    differences are dropped before ranking; if every difference is zero
    the test is undefined and an error is raised. Exact p for n <= 25,
    normal approximation with tie and continuity corrections above.
    """
    diff = s.a - s.b
    diff = diff[diff != 0.0]
    n = diff.size
    if n == 0:
        raise NumericalError("Wilcoxon test undefined: all differences are zero")
    ranks = _rank_with_ties(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    w_minus = float(ranks[diff < 0].sum())
    w = min(w_plus, w_minus)
    if n <= _EXACT_WILCOXON_MAX_N:
        p = 2.0 * _exact_signed_rank_cdf(ranks, w)
    else:
        mean = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0
        _, tie_counts = np.unique(np.abs(diff), return_counts=True)
        var -= float(np.sum(tie_counts**3 - tie_counts)) / 48.0
        if var <= 0:
            raise NumericalError("Wilcoxon variance is zero after tie correction")
        z = (w - mean + 0.5) / math.sqrt(var)  # continuity-corrected lower tail
        p = 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0))
    return w, min(1.0, p)


def bh_correct(pvals, q: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Benjamini-Hochberg step-up; returns (reject mask, adjusted p-values).

    Rejects hypotheses 1..k in ascending p order for the largest k with
    p_(k) <= k q / m; adjusted p_(i) = min_{j >= i} m p_(j) / j, capped
    at 1.
    """
    p = np.asarray(pvals, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError("pvals must be a non-empty 1-D vector")
    if np.any((p < 0) | (p > 1)) or not np.all(np.isfinite(p)):
        raise DomainError("p-values must lie in [0, 1]")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must be in (0, 1), got {q}")
    m = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    thresholds = (np.arange(1, m + 1) * q) / m
    passing = np.nonzero(sorted_p <= thresholds)[0]
    reject = np.zeros(m, dtype=bool)
    if passing.size:
        reject[order[: passing[-1] + 1]] = True
    scaled = sorted_p * m / np.arange(1, m + 1)
    adjusted_sorted = np.minimum(1.0, np.minimum.accumulate(scaled[::-1])[::-1])
    adjusted = np.empty(m)
    adjusted[order] = adjusted_sorted
    return reject, adjusted


def friedman(scores: np.ndarray) -> tuple[float, float]:
    """Friedman rank test over an n_blocks x k score table; returns (chi2, p).

    Scores are ranked within blocks (average ranks on ties) and the
    statistic is 12n/(k(k+1)) * sum_j (Rbar_j - (k+1)/2)^2, referred to a
    chi-square distribution with k-1 degrees of freedom.
    """
    table = np.asarray(scores, dtype=float)
    if table.ndim != 2:
        raise DomainError(f"scores must be 2-D (blocks x treatments), got shape {table.shape}")
    n, k = table.shape
    if n < 2 or k < 2:
        raise DomainError(f"need >= 2 blocks and >= 2 treatments, got {n}x{k}")
    if not np.all(np.isfinite(table)):
        raise NumericalError("scores contain non-finite values")
    ranks = np.vstack([_rank_with_ties(row) for row in table])
    mean_ranks = ranks.mean(axis=0)
    chi2 = 12.0 * n / (k * (k + 1)) * float(np.sum((mean_ranks - (k + 1) / 2.0) ** 2))
    return chi2, chi2_sf(chi2, k - 1)


def cohens_d(a, b) -> float:
    """Effect size (mean(a) - mean(b)) / pooled std, n_a + n_b - 2 denominator."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise DomainError("cohens_d needs at least 2 samples per group")
    n_a, n_b = a.size, b.size
    pooled_var = ((n_a - 1) * a.var(ddof=1) + (n_b - 1) * b.var(ddof=1)) / (n_a + n_b - 2)
    if pooled_var == 0.0:
        raise NumericalError("cohens_d undefined: zero pooled standard deviation")
    return float((a.mean() - b.mean()) / math.sqrt(pooled_var))


def within_1pp_fraction(scores: np.ndarray) -> float:
    """Fraction of conditions where >= 2 methods are within 1 point of the best.

    ``scores`` is methods x conditions, in percentage points.
    """
    table = np.asarray(scores, dtype=float)
    if table.ndim != 2 or table.size == 0:
        raise DomainError("scores must be a non-empty 2-D methods x conditions table")
    best = table.max(axis=0)
    near = (table >= best - 1.0).sum(axis=0)
    return float(np.mean(near >= 2))


# ---------------------------------------------------------------------------
# chi-square tail via the regularized incomplete gamma function

_GAMMA_EPS = 1e-14
_GAMMA_MAX_ITER = 500


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized P(a, x) by its power series; for x < a + 1."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_GAMMA_MAX_ITER):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericalError("incomplete gamma series did not converge")


def _gamma_q_contfrac(a: float, x: float) -> float:
    """Upper regularized Q(a, x) by Lentz's continued fraction; for x >= a + 1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericalError("incomplete gamma continued fraction did not converge")


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if a <= 0:
        raise DomainError(f"gamma_q requires a > 0, got {a}")
    if x < 0:
        raise DomainError(f"gamma_q requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi2_sf(x: float, dof: int) -> float:
    """Chi-square survival function P(X >= x) with ``dof`` degrees of freedom."""
    if dof < 1:
        raise DomainError(f"dof must be >= 1, got {dof}")
    if x <= 0:
        return 1.0
    return gamma_q(dof / 2.0, x / 2.0)
