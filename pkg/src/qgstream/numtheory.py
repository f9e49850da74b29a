"""Modular arithmetic, primality and generator machinery over Z_p."""

from __future__ import annotations

import functools
import secrets
from dataclasses import dataclass
from typing import Optional, Sequence

import gmpy2

from .errors import CannotVerifyError, InvalidModulusError, NotInvertibleError

DEFAULT_MR_ROUNDS = 40

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233,
    239, 241, 251,
)


def default_rng():
    return secrets.SystemRandom()


def mod_pow(base: int, exp: int, p: int) -> int:
    """Return ``base**exp mod p`` (square-and-multiply)."""
    if p < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {p}")
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return int(gmpy2.powmod(base, exp, p))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mod_inv(x: int, p: int) -> int:
    """Return the inverse of x modulo p."""
    if p < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {p}")
    if x % p == 0:
        raise NotInvertibleError(f"{x} is not invertible mod {p}")
    try:
        return int(gmpy2.invert(x, p))
    except ZeroDivisionError:
        raise NotInvertibleError(f"{x} is not invertible mod {p}") from None


def is_probable_prime(n: int, rounds: int = DEFAULT_MR_ROUNDS, rng=None) -> bool:
    """Miller-Rabin test preceded by trial division by small primes.

    A composite passes with probability at most ``4**-rounds``.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    if rng is None:
        rng = default_rng()

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        x = int(gmpy2.powmod(rng.randrange(2, n - 1), d, n))
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def pl_prime(l: int) -> int:
    """Return 2**(8*l) + 3 (not necessarily prime)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return (1 << (8 * l)) + 3


def gen_pl_prime(l: int, rounds: int = DEFAULT_MR_ROUNDS, rng=None) -> Optional[int]:
    """Return p_l = 2**(8l) + 3 when it is (probably) prime, else None."""
    p = pl_prime(l)
    return p if is_probable_prime(p, rounds, rng) else None


def _check_factorization(p: int, factors: Sequence[int]) -> None:
    if not factors:
        raise CannotVerifyError("no factorization of p-1 supplied")
    rest = p - 1
    for q in set(factors):
        if q < 2 or rest % q != 0 or not is_probable_prime(q):
            raise CannotVerifyError(f"{q} is not a prime factor of p-1")
        while rest % q == 0:
            rest //= q
    if rest != 1:
        raise CannotVerifyError(f"factor list misses part {rest} of p-1")


def is_generator(alpha: int, p: int, factors: Sequence[int]) -> bool:
    """Check that alpha generates Z_p^* given all prime factors of p-1."""
    _check_factorization(p, factors)
    if not 1 <= alpha < p:
        return False
    return all(mod_pow(alpha, (p - 1) // q, p) != 1 for q in set(factors))


def find_generator(p: int, factors: Sequence[int], rng=None) -> int:
    """Draw random candidates until one generates Z_p^*."""
    _check_factorization(p, factors)
    if p == 2:
        return 1
    if rng is None:
        rng = default_rng()
    qs = set(factors)
    while True:
        alpha = rng.randrange(2, p)
        if all(mod_pow(alpha, (p - 1) // q, p) != 1 for q in qs):
            return alpha


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if mod_pow(a, (p - 1) // 2, p) == 1 else -1


def tonelli_shanks(a: int, p: int) -> Optional[tuple[int, int]]:
    """Return both square roots of a modulo the odd prime p, smaller first.

    Returns None when a is a quadratic non-residue; 0 gives (0, 0).
    """
    if p < 3 or p % 2 == 0 or not is_probable_prime(p):
        raise InvalidModulusError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return (0, 0)
    if legendre(a, p) != 1:
        return None

    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1

    m = s
    c = mod_pow(z, q, p)
    t = mod_pow(a, q, p)
    r = mod_pow(a, (q + 1) // 2, p)
    while t != 1:
        # least i with t^(2^i) == 1
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = mod_pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return tuple(sorted((r, p - r)))


@functools.lru_cache(maxsize=64)
def _known_prime(p: int) -> bool:
    return is_probable_prime(p)


@dataclass(frozen=True)
class PrimeParams:
    """Public group context: prime p, generator alpha, optional factors of p-1.

    When ``p_minus_1_factors`` is given the generator is checked on
    construction; without it alpha is accepted but reported unverified.
    """

    p: int
    alpha: int
    p_minus_1_factors: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.p < 3:
            raise InvalidModulusError(f"p must be an odd prime, got {self.p}")
        if not _known_prime(self.p):
            raise InvalidModulusError(f"{self.p} is not prime")
        if not 2 <= self.alpha <= self.p - 1:
            raise ValueError(f"alpha must be in [2, p-1], got {self.alpha}")
        if self.p_minus_1_factors is not None:
            object.__setattr__(self, "p_minus_1_factors", tuple(self.p_minus_1_factors))
            if not is_generator(self.alpha, self.p, self.p_minus_1_factors):
                raise CannotVerifyError(f"{self.alpha} does not generate Z_{self.p}^*")

    @property
    def generator_verified(self) -> bool:
        return self.p_minus_1_factors is not None

    @property
    def byte_length(self) -> int:
        return (self.p.bit_length() + 7) // 8

