"""Exact integer services: signed primality, small primes, congruences, CRT.

Primality is deterministic below ``DETERMINISTIC_LIMIT`` (Miller-Rabin with the
first twelve prime bases, which is exact far beyond 2**64) and probabilistic
above it with ``settings.mr_rounds`` random bases.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from functools import reduce

DETERMINISTIC_LIMIT = 2**64
DEFAULT_MR_ROUNDS = 40

# Exact for n < 3.3e24 (Sorenson & Webster), which covers DETERMINISTIC_LIMIT.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_LIMIT = 1 << 16


@dataclass
class PrimalitySettings:
    mr_rounds: int = DEFAULT_MR_ROUNDS
    deterministic_limit: int = DETERMINISTIC_LIMIT
    seed: int = 0x5EED


settings = PrimalitySettings()


def configure(mr_rounds: int | None = None, deterministic_limit: int | None = None) -> None:
    if mr_rounds is not None:
        if mr_rounds < 1:
            raise ValueError("mr_rounds must be positive")
        settings.mr_rounds = mr_rounds
    if deterministic_limit is not None:
        settings.deterministic_limit = deterministic_limit


def _sieve(n: int) -> bytearray:
    """Primality table for 0..n-1."""
    table = bytearray([1]) * max(n, 2)
    table[0] = table[1] = 0
    for p in range(2, math.isqrt(n - 1) + 1 if n > 1 else 0):
        if table[p]:
            table[p * p :: p] = bytes(len(range(p * p, n, p)))
    return table[:n] if n >= 2 else bytearray(n)


_SMALL_TABLE = _sieve(_SMALL_LIMIT)
_SMALL_PRIMES = [p for p in range(_SMALL_LIMIT) if _SMALL_TABLE[p]]


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primality(z: int, rounds: int | None = None) -> tuple[bool, bool]:
    """Return ``(is_prime, proven)`` for ``|z|``.

    ``proven`` is False only when the answer came from the probabilistic test,
    i.e. ``|z|`` is at least the deterministic limit and passed every round.
    """
    n = abs(z)
    if n < _SMALL_LIMIT:
        return bool(_SMALL_TABLE[n]), True
    for p in _SMALL_PRIMES[:60]:
        if n % p == 0:
            return False, True
    if n < settings.deterministic_limit and n < 3 * 10**24:
        return _miller_rabin(n, _MR_BASES), True
    if not _miller_rabin(n, _MR_BASES):
        return False, True
    rng = random.Random(settings.seed ^ n)
    k = rounds if rounds is not None else settings.mr_rounds
    bases = [rng.randrange(2, n - 1) for _ in range(k)]
    if not _miller_rabin(n, bases):
        return False, True
    return True, False


def is_prime_signed(z: int, rounds: int | None = None) -> bool:
    """True iff ``|z|`` is a prime (the primes and their negations)."""
    return primality(z, rounds)[0]


def is_composite_signed(z: int) -> bool:
    """True iff ``|z|`` has a nontrivial factorization (so 0 and the units are excluded)."""
    return abs(z) > 1 and not is_prime_signed(z)


def primes_below(n: int) -> list[int]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= _SMALL_LIMIT:
        return _SMALL_PRIMES[: bisect.bisect_left(_SMALL_PRIMES, n)]
    table = _sieve(n)
    return [i for i in range(n) if table[i]]


@dataclass(frozen=True, order=True)
class CongruenceClass:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} not reduced modulo {self.modulus}")

    @classmethod
    def of(cls, residue: int, modulus: int) -> "CongruenceClass":
        return cls(residue % modulus, modulus)

    def __contains__(self, x: int) -> bool:
        return (x - self.residue) % self.modulus == 0

    def members(self, start: int = 0):
        """Members >= start in increasing order (infinite generator)."""
        x = start + (self.residue - start) % self.modulus
        while True:
            yield x
            x += self.modulus

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


TRIVIAL_CLASS = CongruenceClass(0, 1)


def solve_linear_congruence(m: int, c: int, n: int) -> CongruenceClass | None:
    """Solutions of ``m*x + c ≡ 0 (mod n)`` as one class, or None."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = math.gcd(m, n)
    if c % g:
        return None
    n1 = n // g
    if n1 == 1:
        return TRIVIAL_CLASS
    x = (-c // g) * pow(m // g, -1, n1)
    return CongruenceClass.of(x, n1)


def _merge2(a: CongruenceClass, b: CongruenceClass) -> CongruenceClass | None:
    g = math.gcd(a.modulus, b.modulus)
    if (b.residue - a.residue) % g:
        return None
    lcm = a.modulus // g * b.modulus
    m1 = a.modulus // g
    if m1 == 1:
        return CongruenceClass.of(b.residue, lcm)
    t = (b.residue - a.residue) // g * pow(m1, -1, b.modulus // g) % (b.modulus // g)
    return CongruenceClass.of(a.residue + a.modulus * t, lcm)


def crt_merge(classes) -> CongruenceClass | None:
    """Intersection of congruence classes, or None if empty."""
    acc = TRIVIAL_CLASS
    for cls in classes:
        acc = _merge2(acc, cls)
        if acc is None:
            return None
    return acc


def lcm(*values: int) -> int:
    return reduce(math.lcm, values, 1)


def primorial(n: int) -> int:
    """Product of the primes <= n."""
    return math.prod(primes_below(n + 1))
