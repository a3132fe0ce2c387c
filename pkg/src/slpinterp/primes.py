"""Algorithm parameters and the random primes drawn from (lambda, 2 lambda]."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from functools import lru_cache

import numpy as np

from .errors import InputError, InvariantError, ResourceLimitError

SIEVE_CAP = 1 << 32


@dataclass(frozen=True)
class ParamSet:
    """Derived sizes for one interpolation run.

    m: number of primes (images), lam: interval base, s: diversifier count,
    u: extension degree of the diversification field.
    """

    n: int
    D: int
    T: int
    q: int
    m: int
    lam: float
    s: int
    u: int

    @property
    def probes(self) -> int:
        """Number of black-box probes one run makes: m * n * (s + 1)."""
        return self.m * self.n * (self.s + 1)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["probes"] = self.probes
        return d


def _ceil_log2(x: int) -> int:
    """Smallest k with 2^k >= x (x >= 1)."""
    return (x - 1).bit_length()


def compute_params(n: int, D: int, T: int, q: int) -> ParamSet:
    if n < 1 or D < 2 or T < 1 or q < 2:
        raise InputError("need n >= 1, D >= 2, T >= 1, q >= 2")
    # ceil(2 log2 D) = smallest k with 2^k >= D^2
    m = max(6, _ceil_log2(D * D), math.ceil(25 / 8 * math.log(4 * T)))
    lam = max(21.0, 95 / 3 * (T - 1) * math.log(D), 80.0 * n, 10 / 3 * m * math.log(m))
    # ceil(log2 40 + 2 log2 m + 2 log2 n + 2 log2 T)
    s = _ceil_log2(40 * (m * n * T) ** 2)
    u, size = 1, q
    while size < 2 * n * D + 1:
        u += 1
        size *= q
    return ParamSet(n=n, D=D, T=T, q=q, m=m, lam=lam, s=s, u=u)


@lru_cache(maxsize=4096)
def _sieve_cached(lo: int, hi: int) -> tuple[int, ...]:
    """Primes in (lo, hi] by a segmented Eratosthenes sieve."""
    if hi <= lo or hi < 2:
        return ()
    root = math.isqrt(hi)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for i in range(2, math.isqrt(root) + 1):
        if small[i]:
            small[i * i :: i] = False
    seg = np.ones(hi - lo, dtype=bool)  # seg[k] <-> lo + 1 + k
    start_val = lo + 1
    for b in np.flatnonzero(small):
        b = int(b)
        first = max(b * b, (start_val + b - 1) // b * b)
        if first > hi:
            continue
        seg[first - start_val :: b] = False
    if start_val <= 1:
        seg[: 2 - start_val] = False
    return tuple(int(x) + start_val for x in np.flatnonzero(seg))


def sieve_interval(lam: float) -> list[int]:
    """All primes p with lam < p <= 2 lam, ascending."""
    if lam < 2:
        raise InputError("sieve_interval needs lambda >= 2")
    if lam > SIEVE_CAP:
        raise ResourceLimitError(f"lambda = {lam:g} exceeds the sieve cap 2^32")
    return list(_sieve_cached(math.floor(lam), math.floor(2 * lam)))


def draw_primes(params: ParamSet, rng: np.random.Generator) -> list[int]:
    """m distinct primes from (lambda, 2 lambda], uniformly without replacement."""
    pool = sieve_interval(params.lam)
    if len(pool) < params.m:
        raise InvariantError(
            f"only {len(pool)} primes in ({params.lam:g}, {2 * params.lam:g}], need {params.m}"
        )
    picks = rng.choice(len(pool), size=params.m, replace=False)
    return [pool[int(i)] for i in picks]
