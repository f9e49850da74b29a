"""Shipped parameter sets.

``test65537`` is the small Fermat-prime set used for golden vectors. Its
alpha = 13 is kept for those vectors even though 13 is a quadratic residue
mod 65537 (multiplicative order 2**13), so it is *not* a generator and the
set is marked unverified; ElGamal correctness does not depend on it. The
others are the primes 2**(8l)+3 for l in (98, 213, 251). Their p-1 cannot be
factored, so alpha = 2 ships unverified. 2 is still a quadratic non-residue
for every such p (p = 3 mod 8), which is checked here.
"""

from __future__ import annotations

import functools

from .errors import ParameterError
from .numtheory import PrimeParams, legendre, pl_prime

PARAM_SETS = {
    "test65537": 2,
    "p98": 98,
    "p213": 213,
    "p251": 251,
}


@functools.lru_cache(maxsize=None)
def get_params(name: str) -> PrimeParams:
    if name not in PARAM_SETS:
        raise ParameterError(f"unknown parameter set {name!r}; choose from {sorted(PARAM_SETS)}")
    if name == "test65537":
        return PrimeParams(65537, 13)
    p = pl_prime(PARAM_SETS[name])
    if legendre(2, p) != -1:
        raise ParameterError(f"2 cannot generate Z_p^* for {name}")
    return PrimeParams(p, 2)


def block_bytes(name: str) -> int:
    return PARAM_SETS[name]
