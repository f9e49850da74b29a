"""Session establishment: K and the initial leaders travel under ElGamal."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import elgamal
from .elgamal import ElGamalCiphertext, ElGamalKeyPair
from .errors import HandshakeError, ParameterError
from .numtheory import default_rng
from .quasigroup import QuasigroupZp
from .stream import MIN_SAFE_LEADERS, StreamState


@dataclass(frozen=True)
class SessionOffer:
    c_K: ElGamalCiphertext
    c_leaders: tuple[ElGamalCiphertext, ...]

    def __post_init__(self):
        object.__setattr__(self, "c_leaders", tuple(self.c_leaders))
        if not self.c_leaders:
            raise ParameterError("offer carries no leaders")

    @property
    def k(self) -> int:
        return len(self.c_leaders)


def make_offer(
    pub,
    k: int = MIN_SAFE_LEADERS,
    rng=None,
    *,
    unsafe_demo: bool = False,
    K: Optional[int] = None,
    leaders: Optional[Sequence[int]] = None,
    exponents: Optional[Sequence[int]] = None,
) -> tuple[SessionOffer, StreamState]:
    """Bob's side: pick K and k leaders in [1, p-2], encrypt each under a fresh exponent.

    ``K``, ``leaders`` and ``exponents`` (one per ciphertext, K first) pin
    the random draws so fixed vectors can be replayed.
    """
    if k < 1 or (k < MIN_SAFE_LEADERS and not unsafe_demo):
        raise ParameterError(f"k must be >= {MIN_SAFE_LEADERS} (got {k})")
    if rng is None:
        rng = default_rng()
    p, _, _ = elgamal._as_triplet(pub)
    if K is None:
        K = rng.randint(1, p - 2)
    if leaders is None:
        leaders = [rng.randint(1, p - 2) for _ in range(k)]
    if len(leaders) != k:
        raise ParameterError(f"expected {k} leaders, got {len(leaders)}")
    if exponents is not None and len(exponents) != k + 1:
        raise ParameterError(f"expected {k + 1} exponents, got {len(exponents)}")

    secrets_ = [K, *leaders]
    cts = [
        elgamal.encrypt(pub, v, rng, None if exponents is None else exponents[i])
        for i, v in enumerate(secrets_)
    ]
    state = StreamState(QuasigroupZp(p, K), list(leaders))
    return SessionOffer(cts[0], tuple(cts[1:])), state


def accept_offer(kp: ElGamalKeyPair, offer: SessionOffer, *, unsafe_demo: bool = False) -> StreamState:
    """Alice's side: decrypt and range-check K and the leaders."""
    if offer.k < MIN_SAFE_LEADERS and not unsafe_demo:
        raise HandshakeError(f"offer has k={offer.k} < {MIN_SAFE_LEADERS}")
    p = kp.params.p
    try:
        K = elgamal.decrypt(kp, offer.c_K)
        leaders = [elgamal.decrypt(kp, c) for c in offer.c_leaders]
    except ValueError as exc:
        raise HandshakeError(f"malformed offer: {exc}") from None
    if not 1 <= K <= p - 2:
        raise HandshakeError("decrypted K is out of range")
    for a in leaders:
        if not 1 <= a <= p - 1:
            raise HandshakeError("decrypted leader is out of range")
    return StreamState(QuasigroupZp(p, K), leaders)
