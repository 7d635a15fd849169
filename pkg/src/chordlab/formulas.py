"""Closed-form expectations and limit laws for uniform chord diagrams.

Finite-n formulas are evaluated in exact rational arithmetic (Fraction), so
oracle comparisons are equality tests, not tolerance tests.  Limit laws are
plain floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import EvenArgumentError, OutOfRangeError

#: Exact rational values are plain stdlib fractions.
RationalValue = Fraction


def double_factorial(m: int) -> int:
    """(m)!! for odd m >= -1, with (-1)!! = 1 (empty product)."""
    if m < -1:
        raise OutOfRangeError(f"double factorial of {m} < -1")
    if m % 2 == 0:
        raise EvenArgumentError(f"double factorial called with even argument {m}")
    out = 1
    for v in range(1, m + 1, 2):
        out *= v
    return out


def num_diagrams(n: int) -> int:
    """(2n-1)!!, the number of chord diagrams with n chords."""
    if n < 0:
        raise OutOfRangeError(f"n={n} < 0")
    return double_factorial(2 * n - 1)


def catalan(r: int) -> int:
    if r < 0:
        raise OutOfRangeError(f"Catalan number of {r} < 0")
    return math.comb(2 * r, r) // (r + 1)


def mean_Xk(n: int, k: int) -> Fraction:
    """E[X_k] = k(k-1) / (2(2n-3)), conditioned on the endpoint-1 chord
    having length k (X_k counts chords inside the smaller block)."""
    if n < 2 or not 0 <= k <= n - 1:
        raise OutOfRangeError(f"mean_Xk needs n >= 2 and 0 <= k <= n-1, got ({n}, {k})")
    return Fraction(k * (k - 1), 2 * (2 * n - 3))


def var_Xk(n: int, k: int) -> Fraction:
    """Var[X_k] = k(k-1)[(2n-k)^2 - 10n + 5k + 6] / (2(2n-3)^2(2n-5))."""
    if n < 3 or not 0 <= k <= n - 1:
        raise OutOfRangeError(f"var_Xk needs n >= 3 and 0 <= k <= n-1, got ({n}, {k})")
    bracket = (2 * n - k) ** 2 - 10 * n + 5 * k + 6
    return Fraction(k * (k - 1) * bracket, 2 * (2 * n - 3) ** 2 * (2 * n - 5))


def var_Xk_bound(n: int, k: int) -> Fraction:
    """The companion upper bound k^2 (2n-k)^2 / n^3."""
    if n < 1 or not 0 <= k <= n - 1:
        raise OutOfRangeError(f"var_Xk_bound needs 0 <= k <= n-1, got ({n}, {k})")
    return Fraction(k**2 * (2 * n - k) ** 2, n**3)


def degree_cdf_limit(b: float) -> float:
    """Limit of P(deg(c_1) <= b n): 1 - sqrt(1 - 2b) on [0, 1/2]."""
    if not 0.0 <= b <= 0.5:
        raise OutOfRangeError(f"b={b} outside [0, 0.5]")
    return 1.0 - math.sqrt(1.0 - 2.0 * b)


def length_dist_c1(n: int, k: int) -> Fraction:
    """P(len(c_1) = k): 2/(2n-1) for k <= n-2 and 1/(2n-1) for k = n-1."""
    if n < 1 or not 0 <= k <= n - 1:
        raise OutOfRangeError(f"length_dist_c1 needs 0 <= k <= n-1, got ({n}, {k})")
    if k == n - 1:
        return Fraction(1, 2 * n - 1)
    return Fraction(2, 2 * n - 1)


def mean_Lj(n: int, j: int = 0) -> Fraction:
    """E[L_j] = 2n/(2n-1) for any fixed length class j <= n-2."""
    if n < 2 or not 0 <= j <= n - 2:
        raise OutOfRangeError(f"mean_Lj needs 0 <= j <= n-2, got ({n}, {j})")
    return Fraction(2 * n, 2 * n - 1)


def mean_Zk(n: int, k: int) -> Fraction:
    """E[Z_k] = k + k/(2n-1), the expected number of chords shorter than k."""
    if n < 1 or not 0 <= k <= n - 1:
        raise OutOfRangeError(f"mean_Zk needs 0 <= k <= n-1, got ({n}, {k})")
    return Fraction(2 * n * k, 2 * n - 1)


def second_factorial_Zk(n: int, k: int) -> Fraction:
    """E[Z_k (Z_k - 1)] = 2nk(2nk - 4k + 1) / ((2n-1)(2n-3))."""
    if n < 2 or not 0 <= k <= n - 1:
        raise OutOfRangeError(f"second_factorial_Zk needs 0 <= k <= n-1, got ({n}, {k})")
    return Fraction(2 * n * k * (2 * n * k - 4 * k + 1), (2 * n - 1) * (2 * n - 3))


def mean_block_sets(n: int, k: int) -> Fraction:
    """E[number of (length-2k block, k chords filling it) pairs].

    2n (2k-1)!! (2n-2k-1)!! / (2n-1)!!.  Counting is per starting position,
    which keeps the formula valid at the k = n boundary (every start sees
    the full circle); the validated oracle domain is still 2k < 2n.
    """
    if not 1 <= k <= n:
        raise OutOfRangeError(f"mean_block_sets needs 1 <= k <= n, got ({n}, {k})")
    # (2n-2k-1)!!/(2n-1)!! = 1 / prod_{i=0}^{k-1} (2n-1-2i)
    denom = 1
    for i in range(k):
        denom *= 2 * n - 1 - 2 * i
    return Fraction(2 * n * double_factorial(2 * k - 1), denom)


def mean_independent_sets(n: int, r: int) -> Fraction:
    """E[X_r] = C(2n, 2r) (2n-2r-1)!! / (2n-1)!! * Catalan(r)."""
    if not 1 <= r <= n:
        raise OutOfRangeError(f"mean_independent_sets needs 1 <= r <= n, got ({n}, {r})")
    # (2n-2r-1)!!/(2n-1)!! = 1 / prod_{i=0}^{r-1} (2n-1-2i)
    denom = 1
    for i in range(r):
        denom *= 2 * n - 1 - 2 * i
    return Fraction(math.comb(2 * n, 2 * r) * catalan(r), denom)


def poisson_pmf(lam: float, j: int) -> float:
    """e^-lam lam^j / j!"""
    if lam <= 0 or j < 0:
        raise OutOfRangeError(f"poisson_pmf needs lam > 0 and j >= 0, got ({lam}, {j})")
    return math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1))
