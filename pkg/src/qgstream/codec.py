"""Byte framing: l-byte plaintext blocks <-> integers in [1, p-1].

Each plaintext block B becomes the integer B + 1, so 0 never reaches the
cipher; a ciphertext block is serialized on l + 1 bytes. The final block is
padded with 0x80 then zeros, so n input bytes occupy ceil((n+1)/l) blocks.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

from .errors import CorruptBlockError, ParameterError

PAD_MARKER = 0x80
CIPHER_MAGIC = b"QGSD"
CIPHER_VERSION = 1
_HEADER = struct.Struct(">4sBHQ")


@dataclass(frozen=True)
class BlockCodecParams:
    l: int
    p: int

    def __post_init__(self):
        if self.l < 1:
            raise ParameterError("block size must be >= 1 byte")
        if (1 << (8 * self.l)) > self.p - 1:
            raise ParameterError(f"{self.l}-byte blocks do not fit below p-1")
        if (1 << (8 * (self.l + 1))) <= self.p:
            raise ParameterError(f"p does not fit in {self.l + 1} bytes")

    @classmethod
    def for_prime(cls, p: int) -> "BlockCodecParams":
        """Largest l with 2**(8l) <= p-1."""
        return cls((p - 1).bit_length() - 1 >> 3, p)

    @property
    def cipher_width(self) -> int:
        return self.l + 1


def encode_block(params: BlockCodecParams, data: bytes) -> int:
    if len(data) != params.l:
        raise ValueError(f"expected {params.l} bytes, got {len(data)}")
    return int.from_bytes(data, "big") + 1


def decode_block(params: BlockCodecParams, v: int, index=None) -> bytes:
    if not 1 <= v <= 1 << (8 * params.l):
        raise CorruptBlockError(f"decoded value {v} outside [1, 2^{8 * params.l}]", index)
    return (v - 1).to_bytes(params.l, "big")


def serialize_cipher_block(params: BlockCodecParams, c: int) -> bytes:
    if not 1 <= c <= params.p - 1:
        raise ValueError(f"cipher block {c} outside [1, p-1]")
    return c.to_bytes(params.cipher_width, "big")


def parse_cipher_block(params: BlockCodecParams, data: bytes, index=None) -> int:
    if len(data) != params.cipher_width:
        raise CorruptBlockError(f"expected {params.cipher_width} bytes, got {len(data)}", index)
    c = int.from_bytes(data, "big")
    if not 1 <= c <= params.p - 1:
        raise CorruptBlockError(f"cipher value {c} outside [1, p-1]", index)
    return c


def pad(params: BlockCodecParams, data: bytes) -> bytes:
    n = len(data) + 1
    total = -(-n // params.l) * params.l
    return data + bytes([PAD_MARKER]) + bytes(total - n)


def unpad(data: bytes, index=None) -> bytes:
    stripped = data.rstrip(b"\x00")
    if not stripped or stripped[-1] != PAD_MARKER:
        raise CorruptBlockError("malformed padding", index)
    return stripped[:-1]


def encode_stream(params: BlockCodecParams, data: bytes) -> list[int]:
    padded = pad(params, data)
    l = params.l
    return [encode_block(params, padded[i:i + l]) for i in range(0, len(padded), l)]


def decode_stream(params: BlockCodecParams, blocks: Iterable[int]) -> bytes:
    blocks = list(blocks)
    if not blocks:
        raise CorruptBlockError("empty block stream", 0)
    raw = b"".join(decode_block(params, v, i) for i, v in enumerate(blocks))
    # the 0x80 marker always falls inside the last block
    return unpad(raw, len(blocks) - 1)


class StreamEncoder:
    """Incremental :func:`encode_stream`: feed bytes, get full blocks, finish with the padded tail."""

    def __init__(self, params: BlockCodecParams):
        self.params = params
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[int]:
        self._buf += data
        l = self.params.l
        n = len(self._buf) // l * l
        out = [encode_block(self.params, bytes(self._buf[i:i + l])) for i in range(0, n, l)]
        del self._buf[:n]
        return out

    def finish(self) -> list[int]:
        tail = pad(self.params, bytes(self._buf))
        self._buf.clear()
        return [encode_block(self.params, tail[i:i + self.params.l]) for i in range(0, len(tail), self.params.l)]


class StreamDecoder:
    """Incremental :func:`decode_stream`; holds back the last block until :meth:`finish`."""

    def __init__(self, params: BlockCodecParams):
        self.params = params
        self._pending = None
        self.count = 0

    def feed(self, v: int) -> bytes:
        out = self._pending if self._pending is not None else b""
        self._pending = decode_block(self.params, v, self.count)
        self.count += 1
        return out

    def finish(self) -> bytes:
        if self._pending is None:
            raise CorruptBlockError("empty block stream", 0)
        return unpad(self._pending, self.count - 1)


# QGSD ciphertext files ----------------------------------------------------

def write_ciphertext(fh: BinaryIO, params: BlockCodecParams, blocks: list[int]) -> None:
    fh.write(_HEADER.pack(CIPHER_MAGIC, CIPHER_VERSION, params.l, len(blocks)))
    for c in blocks:
        fh.write(serialize_cipher_block(params, c))


def read_ciphertext_header(fh: BinaryIO) -> tuple[int, int]:
    """Return (l, block_count)."""
    head = fh.read(_HEADER.size)
    if len(head) != _HEADER.size:
        raise CorruptBlockError("truncated ciphertext header")
    magic, version, l, count = _HEADER.unpack(head)
    if magic != CIPHER_MAGIC:
        raise CorruptBlockError("bad ciphertext magic")
    if version != CIPHER_VERSION:
        raise CorruptBlockError(f"unsupported ciphertext version {version}")
    return l, count


def iter_ciphertext(fh: BinaryIO, params: BlockCodecParams, count: int) -> Iterator[int]:
    for i in range(count):
        yield parse_cipher_block(params, fh.read(params.cipher_width), i)
    if fh.read(1):
        raise CorruptBlockError("trailing bytes after last block", count)
