"""Pearson chi-squared test over two rating-count vectors.

The production p-value path is self-contained (regularized incomplete gamma
via its series / continued-fraction expansions) so the package has no runtime
dependency on a stats library; tests cross-check against scipy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateTestError

# Smallest positive subnormal float: the floor applied to the p-value so it
# stays inside (0, 1] even when the upper tail underflows.
_P_FLOOR = 5e-324

_MAX_ITER = 500
_EPS = 1e-15
_TINY = 1e-300


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    p_value: float
    dof: int


def _lower_series(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) by power series (x < s + 1)."""
    term = 1.0 / s
    total = term
    a = s
    for _ in range(_MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    log_p = math.log(total) + s * math.log(x) - x - math.lgamma(s)
    return math.exp(log_p)


def _upper_continued_fraction(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) by Lentz's method (x >= s + 1)."""
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    log_q = math.log(h) + s * math.log(x) - x - math.lgamma(s)
    return math.exp(log_q)


def gammainc_upper(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) for s > 0, x >= 0."""
    if s <= 0.0:
        raise ValueError("shape parameter must be positive")
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - _lower_series(s, x)
    return _upper_continued_fraction(s, x)


def chi_square_p_value(statistic: float, dof: int) -> float:
    """Upper-tail p for a chi-squared statistic, floored to stay positive."""
    if dof < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if statistic < 0.0:
        raise ValueError("statistic must be non-negative")
    p = gammainc_upper(dof / 2.0, statistic / 2.0)
    return max(min(p, 1.0), _P_FLOOR)


def chi_square_test(counts_a: Sequence[int], counts_b: Sequence[int]) -> ChiSquareResult:
    """Pearson chi-squared test of homogeneity on a 2 x k contingency table.

    counts_a and counts_b are per-category counts of equal length. Categories
    empty in both rows are dropped before the test (they carry no
    information and would produce zero expected counts). No continuity
    correction is applied. Raises DegenerateTestError when either row is all
    zero or fewer than two informative categories remain.
    """
    if len(counts_a) != len(counts_b):
        raise ValueError("count vectors must have the same length")
    if len(counts_a) < 2:
        raise ValueError("need at least two categories")
    for row in (counts_a, counts_b):
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError("counts must be non-negative integers")

    kept = [(a, b) for a, b in zip(counts_a, counts_b) if a + b > 0]
    if len(kept) < 2:
        raise DegenerateTestError("fewer than two informative categories")
    row_a = sum(a for a, _ in kept)
    row_b = sum(b for _, b in kept)
    if row_a == 0 or row_b == 0:
        raise DegenerateTestError("a group has no observations")
    grand = row_a + row_b

    statistic = 0.0
    for a, b in kept:
        col = a + b
        expected_a = row_a * col / grand
        expected_b = row_b * col / grand
        statistic += (a - expected_a) ** 2 / expected_a
        statistic += (b - expected_b) ** 2 / expected_b
    dof = len(kept) - 1
    return ChiSquareResult(statistic=statistic, p_value=chi_square_p_value(statistic, dof), dof=dof)
