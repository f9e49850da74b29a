"""Textbook ElGamal over Z_p^*, used only to transport session secrets."""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import BinaryIO, Optional, Union

from .errors import ParameterError, QGStreamError
from .numtheory import PrimeParams, default_rng, mod_pow

KEY_MAGIC = b"QGEK"
KEY_VERSION = 1
_FLAG_PRIVATE = 0x01
_FLAG_VERIFIED = 0x02


class KeyFileError(QGStreamError):
    pass


@dataclass(frozen=True)
class ElGamalPublicKey:
    params: PrimeParams
    alpha_a: int

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def alpha(self) -> int:
        return self.params.alpha

    def triplet(self) -> tuple[int, int, int]:
        return (self.params.p, self.params.alpha, self.alpha_a)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for v in self.triplet():
            h.update(encode_int(v))
        return h.hexdigest()[:32]


@dataclass(frozen=True)
class ElGamalKeyPair:
    params: PrimeParams
    a: int
    alpha_a: int

    def __post_init__(self):
        p = self.params.p
        if not 1 <= self.a <= p - 2:
            raise ParameterError(f"private exponent must be in [1, p-2], got {self.a}")
        if self.alpha_a != mod_pow(self.params.alpha, self.a, p):
            raise ParameterError("alpha_a does not match alpha**a mod p")

    @property
    def public(self) -> ElGamalPublicKey:
        return ElGamalPublicKey(self.params, self.alpha_a)


@dataclass(frozen=True)
class ElGamalCiphertext:
    gamma: int
    delta: int

    def to_bytes(self, p: int) -> bytes:
        """Fixed-width encoding: two group elements of ceil(bits(p)/8) bytes each."""
        width = (p.bit_length() + 7) // 8
        return self.gamma.to_bytes(width, "big") + self.delta.to_bytes(width, "big")

    @classmethod
    def from_bytes(cls, data: bytes, p: int) -> "ElGamalCiphertext":
        width = (p.bit_length() + 7) // 8
        if len(data) != 2 * width:
            raise ValueError(f"expected {2 * width} bytes, got {len(data)}")
        return cls(int.from_bytes(data[:width], "big"), int.from_bytes(data[width:], "big"))


PublicKeyLike = Union[ElGamalPublicKey, ElGamalKeyPair, tuple]


def keygen(params: PrimeParams, rng=None, a: Optional[int] = None) -> ElGamalKeyPair:
    """Draw a uniform private exponent in [1, p-2] (or use ``a`` if given)."""
    if rng is None:
        rng = default_rng()
    if a is None:
        a = rng.randint(1, params.p - 2)
    return ElGamalKeyPair(params, a, mod_pow(params.alpha, a, params.p))


def _as_triplet(pub: PublicKeyLike) -> tuple[int, int, int]:
    if isinstance(pub, (ElGamalPublicKey, ElGamalKeyPair)):
        return (pub.params.p, pub.params.alpha, pub.alpha_a)
    return tuple(pub)


def encrypt(pub: PublicKeyLike, m: int, rng=None, e_override: Optional[int] = None) -> ElGamalCiphertext:
    p, alpha, alpha_a = _as_triplet(pub)
    if not 0 <= m <= p - 1:
        raise ValueError(f"message must be in [0, p-1], got {m}")
    if e_override is not None:
        if not 1 <= e_override <= p - 2:
            raise ValueError(f"exponent must be in [1, p-2], got {e_override}")
        e = e_override
    else:
        e = (rng or default_rng()).randint(1, p - 2)
    return ElGamalCiphertext(mod_pow(alpha, e, p), m * mod_pow(alpha_a, e, p) % p)


def decrypt(kp: ElGamalKeyPair, c: ElGamalCiphertext) -> int:
    p = kp.params.p
    if c.gamma % p == 0:
        raise ValueError("invalid ciphertext: gamma is 0 mod p")
    # gamma^(-a) == gamma^(p-1-a)
    return c.delta * mod_pow(c.gamma, p - 1 - kp.a, p) % p


# key files ---------------------------------------------------------------

def encode_int(v: int) -> bytes:
    """4-byte big-endian length followed by the minimal big-endian bytes of v."""
    if v < 0:
        raise ValueError("only unsigned integers are encoded")
    raw = v.to_bytes((v.bit_length() + 7) // 8, "big")
    return struct.pack(">I", len(raw)) + raw


def decode_int(buf: bytes, offset: int = 0) -> tuple[int, int]:
    """Return (value, new_offset)."""
    if offset + 4 > len(buf):
        raise ValueError("truncated integer length")
    (n,) = struct.unpack_from(">I", buf, offset)
    offset += 4
    if offset + n > len(buf):
        raise ValueError("truncated integer body")
    return int.from_bytes(buf[offset:offset + n], "big"), offset + n


def dump_key(key: Union[ElGamalPublicKey, ElGamalKeyPair]) -> bytes:
    private = isinstance(key, ElGamalKeyPair)
    flags = (_FLAG_PRIVATE if private else 0) | (_FLAG_VERIFIED if key.params.generator_verified else 0)
    out = bytearray(KEY_MAGIC)
    out += bytes([KEY_VERSION, flags])
    for v in (key.params.p, key.params.alpha, key.alpha_a):
        out += encode_int(v)
    if private:
        out += encode_int(key.a)
    if key.params.generator_verified:
        factors = key.params.p_minus_1_factors
        out += struct.pack(">H", len(factors))
        for q in factors:
            out += encode_int(q)
    return bytes(out)


def load_key(data: bytes) -> Union[ElGamalPublicKey, ElGamalKeyPair]:
    if data[:4] != KEY_MAGIC:
        raise KeyFileError("bad key file magic")
    if len(data) < 6 or data[4] != KEY_VERSION:
        raise KeyFileError("unsupported key file version")
    flags = data[5]
    try:
        p, off = decode_int(data, 6)
        alpha, off = decode_int(data, off)
        alpha_a, off = decode_int(data, off)
        a = None
        if flags & _FLAG_PRIVATE:
            a, off = decode_int(data, off)
        factors = None
        if flags & _FLAG_VERIFIED:
            (n,) = struct.unpack_from(">H", data, off)
            off += 2
            factors = []
            for _ in range(n):
                q, off = decode_int(data, off)
                factors.append(q)
    except (ValueError, struct.error) as exc:
        raise KeyFileError(f"malformed key file: {exc}") from None
    if off != len(data):
        raise KeyFileError("trailing bytes in key file")
    params = PrimeParams(p, alpha, tuple(factors) if factors is not None else None)
    if a is not None:
        kp = ElGamalKeyPair(params, a, alpha_a)
        return kp
    return ElGamalPublicKey(params, alpha_a)


def write_key(path_or_file: Union[str, BinaryIO], key) -> None:
    data = dump_key(key)
    if hasattr(path_or_file, "write"):
        path_or_file.write(data)
    else:
        with open(path_or_file, "wb") as fh:
            fh.write(data)


def read_key(path: str):
    with open(path, "rb") as fh:
        return load_key(fh.read())
