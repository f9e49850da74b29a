"""Frame codec and the two-party protocol over a reliable byte stream.

Frame layout: ``"QGSC" | version (1) | type (1) | payload_len (4, BE) | payload``.
A transport is anything with socket-style ``sendall(bytes)`` and
``recv(n) -> bytes`` (``b""`` at EOF); :class:`FileTransport` adapts pipes.
"""

from __future__ import annotations

import enum
import logging
import struct
from dataclasses import dataclass
from typing import BinaryIO, Optional, Union

from .codec import BlockCodecParams, StreamDecoder, StreamEncoder, parse_cipher_block, serialize_cipher_block
from .elgamal import ElGamalCiphertext, ElGamalKeyPair, ElGamalPublicKey, decode_int, encode_int
from .errors import (
    CorruptBlockError,
    DesyncError,
    HandshakeError,
    ProtocolError,
    QGStreamError,
)
from .numtheory import PrimeParams
from .session import SessionOffer, accept_offer, make_offer
from .stream import MIN_SAFE_LEADERS

log = logging.getLogger(__name__)

MAGIC = b"QGSC"
VERSION = 0x01
HEADER = struct.Struct(">4sBBI")
MAX_PAYLOAD = 1 << 24
READ_CHUNK = 1 << 16


class FrameType(enum.IntEnum):
    PUBKEY_REQ = 0x01
    PUBKEY = 0x02
    OFFER = 0x03
    DATA = 0x04
    CLOSE = 0x05
    ERROR = 0x7F


class ErrorCode(enum.IntEnum):
    PROTOCOL = 1
    HANDSHAKE = 2
    DESYNC = 3
    CORRUPT = 4


_ERROR_CLASSES = {
    ErrorCode.PROTOCOL: ProtocolError,
    ErrorCode.HANDSHAKE: HandshakeError,
    ErrorCode.DESYNC: DesyncError,
    ErrorCode.CORRUPT: CorruptBlockError,
}


@dataclass(frozen=True)
class Frame:
    type: FrameType
    payload: bytes = b""


def encode_frame(frame: Frame) -> bytes:
    if len(frame.payload) > MAX_PAYLOAD:
        raise ProtocolError(f"payload of {len(frame.payload)} bytes exceeds {MAX_PAYLOAD}")
    return HEADER.pack(MAGIC, VERSION, int(frame.type), len(frame.payload)) + frame.payload


def decode_frame(buf: Union[bytes, bytearray, memoryview]) -> tuple[Optional[Frame], int]:
    """Decode one frame from the front of ``buf``.

    Returns ``(frame, bytes_consumed)``, or ``(None, bytes_still_needed)``
    when the buffer holds only a prefix of a frame.
    """
    head = bytes(buf[:HEADER.size])
    if head[:4] != MAGIC[:len(head)]:
        raise ProtocolError(f"bad magic {head[:4]!r}")
    if len(head) > 4 and head[4] != VERSION:
        raise ProtocolError(f"unsupported version {head[4]}")
    if len(head) < HEADER.size:
        return None, HEADER.size - len(head)
    _, _, ftype, n = HEADER.unpack(head)
    try:
        ftype = FrameType(ftype)
    except ValueError:
        raise ProtocolError(f"unknown frame type 0x{ftype:02x}") from None
    if n > MAX_PAYLOAD:
        raise ProtocolError(f"payload length {n} exceeds {MAX_PAYLOAD}")
    total = HEADER.size + n
    if len(buf) < total:
        return None, total - len(buf)
    return Frame(ftype, bytes(buf[HEADER.size:total])), total


class FileTransport:
    """Socket-style adapter over a pair of binary file objects."""

    def __init__(self, rfile: BinaryIO, wfile: BinaryIO):
        self.rfile = rfile
        self.wfile = wfile

    def sendall(self, data: bytes) -> None:
        self.wfile.write(data)
        self.wfile.flush()

    def recv(self, n: int) -> bytes:
        read1 = getattr(self.rfile, "read1", None)
        return read1(n) if read1 is not None else self.rfile.read(n)


class FrameChannel:
    """Buffered frame reader/writer over a transport."""

    def __init__(self, transport):
        self.transport = transport
        self._buf = bytearray()

    def send(self, ftype: FrameType, payload: bytes = b"") -> None:
        self.transport.sendall(encode_frame(Frame(ftype, payload)))

    def recv(self) -> Frame:
        while True:
            frame, n = decode_frame(self._buf)
            if frame is not None:
                del self._buf[:n]
                return frame
            chunk = self.transport.recv(max(n, READ_CHUNK))
            if not chunk:
                raise ProtocolError("connection closed mid-session")
            self._buf += chunk

    def send_error(self, code: ErrorCode, message: str) -> None:
        try:
            self.send(FrameType.ERROR, bytes([code]) + message.encode("utf-8", "replace"))
        except OSError:
            pass


# payloads ---------------------------------------------------------------

def pubkey_payload(pub: ElGamalPublicKey) -> bytes:
    flags = 1 if pub.params.generator_verified else 0
    return b"".join(encode_int(v) for v in pub.triplet()) + bytes([flags])


def parse_pubkey_payload(payload: bytes) -> ElGamalPublicKey:
    try:
        p, off = decode_int(payload)
        alpha, off = decode_int(payload, off)
        alpha_a, off = decode_int(payload, off)
    except ValueError as exc:
        raise ProtocolError(f"malformed PUBKEY: {exc}") from None
    if off + 1 != len(payload):
        raise ProtocolError("malformed PUBKEY trailer")
    # verification needs the factorization, which is not sent; carry the key as unverified
    return ElGamalPublicKey(PrimeParams(p, alpha), alpha_a)


def offer_payload(offer: SessionOffer) -> bytes:
    out = bytearray(struct.pack(">H", offer.k))
    for c in (offer.c_K, *offer.c_leaders):
        out += encode_int(c.gamma) + encode_int(c.delta)
    return bytes(out)


def parse_offer_payload(payload: bytes) -> SessionOffer:
    try:
        (k,) = struct.unpack_from(">H", payload)
        off = 2
        cts = []
        for _ in range(k + 1):
            g, off = decode_int(payload, off)
            d, off = decode_int(payload, off)
            cts.append(ElGamalCiphertext(g, d))
    except (ValueError, struct.error) as exc:
        raise ProtocolError(f"malformed OFFER: {exc}") from None
    if off != len(payload):
        raise ProtocolError("trailing bytes in OFFER")
    if k == 0:
        raise ProtocolError("OFFER carries no leaders")
    return SessionOffer(cts[0], tuple(cts[1:]))


OFFER_FILE_MAGIC = b"QGSO"
OFFER_FILE_VERSION = 1


def dump_offer(offer: SessionOffer) -> bytes:
    return OFFER_FILE_MAGIC + bytes([OFFER_FILE_VERSION]) + offer_payload(offer)


def load_offer(data: bytes) -> SessionOffer:
    if data[:4] != OFFER_FILE_MAGIC or len(data) < 5 or data[4] != OFFER_FILE_VERSION:
        raise ProtocolError("not a session offer file")
    return parse_offer_payload(data[5:])


def data_payload(seq: int, block: bytes) -> bytes:
    return struct.pack(">Q", seq) + block


def parse_data_payload(payload: bytes, width: int) -> tuple[int, bytes]:
    if len(payload) != 8 + width:
        raise ProtocolError(f"DATA payload must be {8 + width} bytes, got {len(payload)}")
    return struct.unpack_from(">Q", payload)[0], payload[8:]


# protocol drivers ----------------------------------------------------------

@dataclass
class SessionSummary:
    role: str
    p_bits: int
    k: int
    blocks: int
    plaintext_bytes: int
    fingerprint: str


def _raise_remote(frame: Frame) -> None:
    code = frame.payload[0] if frame.payload else ErrorCode.PROTOCOL
    message = frame.payload[1:].decode("utf-8", "replace")
    try:
        cls = _ERROR_CLASSES[ErrorCode(code)]
    except ValueError:
        cls = ProtocolError
    raise cls(f"peer reported: {message}")


def _expect(chan: FrameChannel, want: FrameType) -> Frame:
    frame = chan.recv()
    if frame.type == FrameType.ERROR:
        _raise_remote(frame)
    if frame.type != want:
        chan.send_error(ErrorCode.PROTOCOL, f"expected {want.name}, got {frame.type.name}")
        raise ProtocolError(f"expected {want.name}, got {frame.type.name}")
    return frame


def _read_chunks(source, size: int = READ_CHUNK):
    if isinstance(source, (bytes, bytearray, memoryview)):
        view = memoryview(source)
        for i in range(0, len(view), size):
            yield bytes(view[i:i + size])
        return
    while True:
        chunk = source.read(size)
        if not chunk:
            return
        yield chunk


def run_initiator(
    transport,
    source,
    *,
    k: int = MIN_SAFE_LEADERS,
    rng=None,
    unsafe_demo: bool = False,
    expected_fingerprint: Optional[str] = None,
    offer_kwargs: Optional[dict] = None,
) -> SessionSummary:
    """Request the peer's key, send a session offer, then stream ``source`` as DATA frames."""
    chan = FrameChannel(transport)
    try:
        chan.send(FrameType.PUBKEY_REQ)
        pub = parse_pubkey_payload(_expect(chan, FrameType.PUBKEY).payload)
        if expected_fingerprint is not None and pub.fingerprint() != expected_fingerprint:
            chan.send_error(ErrorCode.HANDSHAKE, "public key fingerprint mismatch")
            raise HandshakeError("peer public key does not match the expected fingerprint")
        offer, state = make_offer(pub, k, rng, unsafe_demo=unsafe_demo, **(offer_kwargs or {}))
        chan.send(FrameType.OFFER, offer_payload(offer))

        codec = BlockCodecParams.for_prime(pub.p)
        encoder = StreamEncoder(codec)
        seq = 0
        nbytes = 0

        def send_blocks(values):
            nonlocal seq
            for v in values:
                c = state.encrypt_block(v)
                chan.send(FrameType.DATA, data_payload(seq, serialize_cipher_block(codec, c)))
                seq += 1

        for chunk in _read_chunks(source):
            nbytes += len(chunk)
            send_blocks(encoder.feed(chunk))
        send_blocks(encoder.finish())
        chan.send(FrameType.CLOSE)
        _expect(chan, FrameType.CLOSE)
    except OSError as exc:
        # the peer may have aborted with an ERROR frame before closing
        try:
            frame = chan.recv()
        except (OSError, QGStreamError):
            raise ProtocolError(f"connection lost: {exc}") from exc
        if frame.type == FrameType.ERROR:
            _raise_remote(frame)
        raise ProtocolError(f"connection lost: {exc}") from exc
    log.info("initiator sent %d blocks (%d bytes)", seq, nbytes)
    return SessionSummary("initiator", pub.p.bit_length(), state.k, seq, nbytes, pub.fingerprint())


def run_responder(transport, kp: ElGamalKeyPair, sink, *, unsafe_demo: bool = False) -> SessionSummary:
    """Serve the key, accept the offer, decrypt DATA frames into ``sink`` until CLOSE."""
    chan = FrameChannel(transport)
    _expect(chan, FrameType.PUBKEY_REQ)
    chan.send(FrameType.PUBKEY, pubkey_payload(kp.public))
    offer = parse_offer_payload(_expect(chan, FrameType.OFFER).payload)
    try:
        state = accept_offer(kp, offer, unsafe_demo=unsafe_demo)
    except HandshakeError as exc:
        chan.send_error(ErrorCode.HANDSHAKE, str(exc))
        raise

    codec = BlockCodecParams.for_prime(kp.params.p)
    decoder = StreamDecoder(codec)
    expected = 0
    nbytes = 0
    try:
        while True:
            frame = chan.recv()
            if frame.type == FrameType.DATA:
                seq, block = parse_data_payload(frame.payload, codec.cipher_width)
                if seq != expected:
                    raise DesyncError(f"expected block {expected}, got {seq}; leader states diverged")
                c = parse_cipher_block(codec, block, seq)
                out = decoder.feed(state.decrypt_block(c))
                expected += 1
            elif frame.type == FrameType.CLOSE:
                out = decoder.finish()
                sink.write(out)
                nbytes += len(out)
                break
            elif frame.type == FrameType.ERROR:
                _raise_remote(frame)
            else:
                raise ProtocolError(f"unexpected {frame.type.name} frame during data phase")
            if out:
                sink.write(out)
                nbytes += len(out)
    except DesyncError as exc:
        chan.send_error(ErrorCode.DESYNC, str(exc))
        raise
    except CorruptBlockError as exc:
        chan.send_error(ErrorCode.CORRUPT, str(exc))
        raise
    except ProtocolError as exc:
        chan.send_error(ErrorCode.PROTOCOL, str(exc))
        raise
    chan.send(FrameType.CLOSE)
    log.info("responder received %d blocks (%d bytes)", expected, nbytes)
    return SessionSummary("responder", kp.params.p.bit_length(), state.k, expected, nbytes, kp.public.fingerprint())
