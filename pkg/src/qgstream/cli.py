"""Command-line interface: ``qgstream {keygen,encrypt,decrypt,serve,connect,attack,bench}``.

Exit codes: 0 success, 2 usage/parameter error, 3 crypto or handshake
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import logging
import random
import socket
import sys

from . import attacks, elgamal, wire
from .bench import run_bench, stream_scaling
from .codec import BlockCodecParams, StreamDecoder, encode_stream, iter_ciphertext, read_ciphertext_header, write_ciphertext
from .elgamal import ElGamalKeyPair, ElGamalPublicKey, KeyFileError
from .errors import ParameterError, QGStreamError
from .numtheory import default_rng
from .params import PARAM_SETS, get_params
from .session import accept_offer, make_offer
from .stream import MIN_SAFE_LEADERS

log = logging.getLogger("qgstream")

EXIT_OK, EXIT_USAGE, EXIT_CRYPTO, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _rng(seed):
    return random.Random(seed) if seed is not None else default_rng()


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _hostport(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected host:port, got {text!r}")
    return host, int(port)


def _check_k(args) -> None:
    if args.k < 1 or (args.k < MIN_SAFE_LEADERS and not args.unsafe_demo):
        raise UsageError(f"--k must be >= {MIN_SAFE_LEADERS} (use --unsafe-demo for smaller values)")


def _load(path: str, private: bool):
    key = elgamal.read_key(path)
    if private and not isinstance(key, ElGamalKeyPair):
        raise UsageError(f"{path} is a public key; a private key is required")
    if not private and isinstance(key, ElGamalKeyPair):
        key = key.public
    return key


def _warn_unverified(params) -> None:
    if not params.generator_verified:
        print("warning: generator unverified (no factorization of p-1 available)", file=sys.stderr)


# subcommands ----------------------------------------------------------------

def cmd_keygen(args) -> int:
    params = get_params(args.params)
    kp = elgamal.keygen(params, _rng(args.seed), a=args.test_private_exponent)
    elgamal.write_key(args.out_pub, kp.public)
    elgamal.write_key(args.out_priv, kp)
    _warn_unverified(params)
    print(f"fingerprint {kp.public.fingerprint()}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    _check_k(args)
    pub: ElGamalPublicKey = _load(args.pub, private=False)
    overrides = {}
    if args.test_secrets:
        overrides["K"], *leaders = args.test_secrets
        overrides["leaders"] = leaders
    if args.test_exponents:
        overrides["exponents"] = args.test_exponents
    offer, state = make_offer(pub, args.k, _rng(args.seed), unsafe_demo=args.unsafe_demo, **overrides)
    codec = BlockCodecParams.for_prime(pub.p)
    with open(args.input, "rb") as fh:
        data = fh.read()
    blocks = state.encrypt_blocks(encode_stream(codec, data))
    with open(args.offer_out, "wb") as fh:
        fh.write(wire.dump_offer(offer))
    with open(args.out, "wb") as fh:
        write_ciphertext(fh, codec, blocks)
    log.info("encrypted %d bytes into %d blocks", len(data), len(blocks))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    kp: ElGamalKeyPair = _load(args.priv, private=True)
    with open(args.offer_in, "rb") as fh:
        offer = wire.load_offer(fh.read())
    state = accept_offer(kp, offer, unsafe_demo=args.unsafe_demo)
    codec = BlockCodecParams.for_prime(kp.params.p)
    out = io.BytesIO()
    with open(args.input, "rb") as fh:
        l, count = read_ciphertext_header(fh)
        if l != codec.l:
            raise ParameterError(f"ciphertext uses {l}-byte blocks, key expects {codec.l}")
        decoder = StreamDecoder(codec)
        for c in iter_ciphertext(fh, codec, count):
            out.write(decoder.feed(state.decrypt_block(c)))
        out.write(decoder.finish())
    with open(args.out, "wb") as fh:
        fh.write(out.getvalue())
    return EXIT_OK


def _stdio_transport():
    return wire.FileTransport(sys.stdin.buffer, sys.stdout.buffer)


def cmd_serve(args) -> int:
    kp: ElGamalKeyPair = _load(args.priv, private=True)
    sink_cm = open(args.out, "wb") if args.out else None
    sink = sink_cm or sys.stdout.buffer
    try:
        if args.stdio:
            if sink is sys.stdout.buffer:
                raise UsageError("--stdio needs --out for the plaintext")
            wire.run_responder(_stdio_transport(), kp, sink, unsafe_demo=args.unsafe_demo)
            return EXIT_OK
        if args.listen is None:
            raise UsageError("serve needs --listen host:port or --stdio")
        with socket.create_server(args.listen) as srv:
            print(f"listening on {srv.getsockname()[0]}:{srv.getsockname()[1]}", file=sys.stderr, flush=True)
            while True:
                conn, peer = srv.accept()
                with conn:
                    log.info("connection from %s", peer)
                    summary = wire.run_responder(conn, kp, sink, unsafe_demo=args.unsafe_demo)
                    sink.flush()
                    log.info("session done: %s", summary)
                if args.once:
                    return EXIT_OK
    finally:
        if sink_cm is not None:
            sink_cm.close()


def cmd_connect(args) -> int:
    _check_k(args)
    src_cm = open(args.input, "rb") if args.input else None
    source = src_cm or sys.stdin.buffer
    try:
        kwargs = dict(k=args.k, rng=_rng(args.seed), unsafe_demo=args.unsafe_demo,
                      expected_fingerprint=args.fingerprint)
        if args.stdio:
            if source is sys.stdin.buffer:
                raise UsageError("--stdio needs --in for the plaintext")
            summary = wire.run_initiator(_stdio_transport(), source, **kwargs)
        else:
            if args.peer is None:
                raise UsageError("connect needs --peer host:port or --stdio")
            with socket.create_connection(args.peer) as conn:
                summary = wire.run_initiator(conn, source, **kwargs)
        print(f"sent {summary.plaintext_bytes} bytes in {summary.blocks} blocks", file=sys.stderr)
    finally:
        if src_cm is not None:
            src_cm.close()
    return EXIT_OK


def cmd_attack(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    p = get_params(args.params).p
    trial = attacks.run_k1_trial if args.k1 else attacks.run_k2_trial
    ok = 0
    for i in range(args.trials):
        res = trial(p, args.seed + i)
        ok += res.success
        print(res.line(), flush=True)
    print(f"success {ok}/{args.trials}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.blocks < 1:
        raise UsageError("--blocks must be >= 1")
    params = get_params(args.params)
    res = run_bench(params, args.k, args.blocks, args.seed or 0)
    print(res.report())
    if args.compare_k is not None:
        ratio = stream_scaling(params, args.k, args.compare_k, args.blocks, args.seed or 0)
        print(f"stream_cost_ratio_k{args.compare_k}_over_k{args.k}={ratio:.3f}")
    return EXIT_OK


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qgstream", description="Quasigroup stream cipher over Z_p^*")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_k(sp):
        sp.add_argument("--k", type=int, default=MIN_SAFE_LEADERS, help="number of leaders")
        sp.add_argument("--unsafe-demo", action="store_true", help="allow k < 3")
        sp.add_argument("--seed", type=int)

    sp = sub.add_parser("keygen", help="generate an ElGamal key pair")
    sp.add_argument("--params", choices=sorted(PARAM_SETS), default="p98")
    sp.add_argument("--out-pub", required=True)
    sp.add_argument("--out-priv", required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--test-private-exponent", type=int, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("encrypt", help="encrypt a file to a public key")
    sp.add_argument("--pub", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--offer-out", required=True)
    add_k(sp)
    sp.add_argument("--test-secrets", type=_int_list, help=argparse.SUPPRESS)
    sp.add_argument("--test-exponents", type=_int_list, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("decrypt", help="decrypt a file with a private key")
    sp.add_argument("--priv", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--offer-in", required=True)
    sp.add_argument("--unsafe-demo", action="store_true")
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("serve", help="receive a stream (responder)")
    sp.add_argument("--listen", type=_hostport)
    sp.add_argument("--stdio", action="store_true", help="frames over stdin/stdout")
    sp.add_argument("--priv", required=True)
    sp.add_argument("--out", help="plaintext sink (default stdout)")
    sp.add_argument("--once", action="store_true", help="exit after one connection")
    sp.add_argument("--unsafe-demo", action="store_true")
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("connect", help="send a stream (initiator)")
    sp.add_argument("--peer", type=_hostport)
    sp.add_argument("--stdio", action="store_true", help="frames over stdin/stdout")
    sp.add_argument("--in", dest="input", help="plaintext source (default stdin)")
    sp.add_argument("--fingerprint", help="expected responder key fingerprint")
    add_k(sp)
    sp.set_defaults(func=cmd_connect)

    sp = sub.add_parser("attack", help="run the k=1 or simplified k=2 attack")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--k1", action="store_true")
    mode.add_argument("--k2", action="store_true")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--params", choices=sorted(PARAM_SETS), default="test65537")
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("bench", help="stream vs ElGamal per-block timing")
    sp.add_argument("--params", choices=sorted(PARAM_SETS), default="p98")
    sp.add_argument("--k", type=int, default=MIN_SAFE_LEADERS)
    sp.add_argument("--blocks", type=int, default=1000)
    sp.add_argument("--compare-k", type=int, help="also report stream cost at this k relative to --k")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"qgstream: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QGStreamError, KeyFileError) as exc:
        print(f"qgstream: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except OSError as exc:
        print(f"qgstream: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
