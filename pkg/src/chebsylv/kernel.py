"""Sieve tables and summatory functions: Lambda, mu, psi, T, pi.

Everything here is a desk-scale exact oracle: a single linear sieve up to
``limit`` with prefix sums, so that psi and pi queries are O(1) afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_SIEVE_CAP = 10**7


class CapacityError(ValueError):
    """Requested limit is zero or exceeds the configured memory cap."""


class OutOfRangeError(ValueError):
    """Query argument exceeds the sieve limit."""


@dataclass(frozen=True)
class SieveTables:
    """Arithmetic tables for 1..limit (index 0 is padding).

    lam[n] = Lambda(n) (ln p for prime powers p^k, else 0),
    moebius[n] = mu(n), psi_prefix[n] = psi(n), pi_prefix[n] = pi(n).
    """

    limit: int
    lam: np.ndarray
    moebius: np.ndarray
    is_prime: np.ndarray
    psi_prefix: np.ndarray
    pi_prefix: np.ndarray


def build_sieve(limit: int, cap: int = DEFAULT_SIEVE_CAP) -> SieveTables:
    """Sieve Lambda, mu, primality up to limit and attach prefix sums."""
    if limit < 1:
        raise CapacityError("sieve limit must be >= 1")
    if limit > cap:
        raise CapacityError(f"sieve limit {limit} exceeds cap {cap}")

    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[: min(2, limit + 1)] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.nonzero(is_prime)[0]

    lam = np.zeros(limit + 1, dtype=np.float64)
    moebius = np.ones(limit + 1, dtype=np.int8)
    if limit >= 1:
        moebius[0] = 0
    for p in primes:
        p = int(p)
        logp = math.log(p)
        pk = p
        while pk <= limit:
            lam[pk] = logp
            pk *= p
        moebius[p::p] = -moebius[p::p]
        if p * p <= limit:
            moebius[p * p :: p * p] = 0

    psi_prefix = np.cumsum(lam)
    pi_prefix = np.cumsum(is_prime.astype(np.int64))
    return SieveTables(
        limit=limit,
        lam=lam,
        moebius=moebius,
        is_prime=is_prime,
        psi_prefix=psi_prefix,
        pi_prefix=pi_prefix,
    )


def psi(x: float, tables: SieveTables) -> float:
    """Chebyshev psi(x) = sum of Lambda(n) over n <= x."""
    if x < 0:
        raise ValueError("psi requires x >= 0")
    n = math.floor(x)
    if n > tables.limit:
        raise OutOfRangeError(f"x={x} beyond sieve limit {tables.limit}")
    if n < 1:
        return 0.0
    return float(tables.psi_prefix[n])


def pi_count(x: float, tables: SieveTables) -> int:
    """Number of primes <= x."""
    n = math.floor(x)
    if n > tables.limit:
        raise OutOfRangeError(f"x={x} beyond sieve limit {tables.limit}")
    if n < 2:
        return 0
    return int(tables.pi_prefix[n])


def chebyshev_T(x: float) -> float:
    """T(x) = sum of ln n over n <= x = ln(floor(x)!)."""
    if x < 0:
        raise ValueError("T requires x >= 0")
    n = math.floor(x)
    if n < 2:
        return 0.0
    return math.fsum(math.log(k) for k in range(2, n + 1))


def log_prefix(limit: int) -> np.ndarray:
    """Prefix table t[n] = T(n) for n = 0..limit."""
    t = np.zeros(limit + 1, dtype=np.float64)
    if limit >= 2:
        t[1:] = np.cumsum(np.log(np.arange(1, limit + 1, dtype=np.float64)))
    return t


@dataclass(frozen=True)
class ConvolutionReport:
    limit: int
    max_dev_T: float
    max_dev_psi: float

    @property
    def passed(self) -> bool:
        return max(self.max_dev_T, self.max_dev_psi) <= 1e-6


def check_convolution_identities(
    limit: int, tables: SieveTables | None = None
) -> ConvolutionReport:
    """Check T(x) = sum_k psi(x/k) and psi(x) = sum_k mu(k) T(x/k) for x <= limit."""
    if tables is None or tables.limit < limit:
        tables = build_sieve(limit)
    t = log_prefix(limit)
    psi_p = tables.psi_prefix
    mu = tables.moebius.astype(np.float64)
    ks = np.arange(1, limit + 1)

    max_dev_t = 0.0
    max_dev_psi = 0.0
    for x in range(1, limit + 1):
        idx = x // ks[:x]
        dev_t = abs(t[x] - psi_p[idx].sum())
        dev_psi = abs(psi_p[x] - (mu[1 : x + 1] * t[idx]).sum())
        if dev_t > max_dev_t:
            max_dev_t = dev_t
        if dev_psi > max_dev_psi:
            max_dev_psi = dev_psi
    return ConvolutionReport(limit=limit, max_dev_T=max_dev_t, max_dev_psi=max_dev_psi)


def lcm_identity_check(x: int) -> bool:
    """True iff the product of p over prime powers p^m <= x equals lcm(1..x).

    Exact big-integer comparison; intended for small x (<= 60 or so).
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    prod = 1
    for p in range(2, x + 1):
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            pk = p
            while pk <= x:
                prod *= p
                pk *= p
    return prod == math.lcm(*range(1, x + 1))


@dataclass(frozen=True)
class PsiPiBracket:
    x: float
    alpha: float
    psi_value: float
    pi_ln_x: float
    upper: float
    holds: bool


def psi_pi_bracket(x: float, alpha: float, tables: SieveTables) -> PsiPiBracket:
    """Evaluate psi(x) <= pi(x) ln x <= psi(x)/alpha + x^alpha ln x."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    if x <= 1:
        raise ValueError("x must exceed 1")
    psi_v = psi(x, tables)
    mid = pi_count(x, tables) * math.log(x)
    upper = psi_v / alpha + x**alpha * math.log(x)
    return PsiPiBracket(
        x=x,
        alpha=alpha,
        psi_value=psi_v,
        pi_ln_x=mid,
        upper=upper,
        holds=psi_v <= mid + 1e-9 and mid <= upper + 1e-9,
    )
