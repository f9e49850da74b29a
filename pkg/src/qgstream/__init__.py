"""Quasigroup stream cipher over Z_p^* with ElGamal session setup."""

from .codec import BlockCodecParams, decode_stream, encode_stream
from .elgamal import ElGamalCiphertext, ElGamalKeyPair, ElGamalPublicKey, keygen
from .errors import (
    AttackFailedError,
    CorruptBlockError,
    DegenerateInstanceError,
    DesyncError,
    DomainError,
    HandshakeError,
    ParameterError,
    ProtocolError,
    QGStreamError,
)
from .numtheory import PrimeParams
from .params import get_params
from .quasigroup import QuasigroupZp
from .session import SessionOffer, accept_offer, make_offer
from .stream import StreamState

__version__ = "0.1.0"

__all__ = [
    "AttackFailedError",
    "BlockCodecParams",
    "CorruptBlockError",
    "DegenerateInstanceError",
    "DesyncError",
    "DomainError",
    "ElGamalCiphertext",
    "ElGamalKeyPair",
    "ElGamalPublicKey",
    "HandshakeError",
    "ParameterError",
    "PrimeParams",
    "ProtocolError",
    "QGStreamError",
    "QuasigroupZp",
    "SessionOffer",
    "StreamState",
    "accept_offer",
    "decode_stream",
    "encode_stream",
    "get_params",
    "keygen",
    "make_offer",
]
