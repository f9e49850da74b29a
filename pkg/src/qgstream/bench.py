"""Per-block timing of the stream cipher against ElGamal at the same prime."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import elgamal
from .numtheory import PrimeParams
from .quasigroup import QuasigroupZp
from .stream import StreamState


@dataclass
class BenchResult:
    p_bits: int
    k: int
    blocks: int
    stream_per_block: float
    elgamal_per_block: float

    @property
    def ratio(self) -> float:
        return self.elgamal_per_block / self.stream_per_block

    def report(self) -> str:
        return (
            f"p_bits={self.p_bits}\nk={self.k}\nblocks={self.blocks}\n"
            f"stream_encrypt_us_per_block={self.stream_per_block * 1e6:.3f}\n"
            f"elgamal_encrypt_us_per_block={self.elgamal_per_block * 1e6:.3f}\n"
            f"ratio_elgamal_over_stream={self.ratio:.2f}"
        )


def time_stream(params: PrimeParams, k: int, blocks: int, rng, repeats: int = 3) -> float:
    """Best-of-``repeats`` mean seconds per encrypted block."""
    p = params.p
    msgs = [rng.randint(1, p - 1) for _ in range(blocks)]
    best = float("inf")
    for _ in range(repeats):
        state = StreamState(QuasigroupZp(p, rng.randint(1, p - 2)), [rng.randint(1, p - 2) for _ in range(k)])
        enc = state.encrypt_block
        t0 = time.perf_counter()
        for m in msgs:
            enc(m)
        best = min(best, time.perf_counter() - t0)
    return best / blocks


def time_elgamal(params: PrimeParams, blocks: int, rng, repeats: int = 1) -> float:
    p = params.p
    pub = elgamal.keygen(params, rng).public
    msgs = [rng.randint(1, p - 1) for _ in range(blocks)]
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for m in msgs:
            elgamal.encrypt(pub, m, rng)
        best = min(best, time.perf_counter() - t0)
    return best / blocks


def run_bench(params: PrimeParams, k: int = 3, blocks: int = 1000, seed: int = 0, repeats: int = 3) -> BenchResult:
    """Best-of-``repeats`` timings, stream and ElGamal runs interleaved to share machine noise."""
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    rng = random.Random(seed)
    stream = eg = float("inf")
    for _ in range(repeats):
        stream = min(stream, time_stream(params, k, blocks, rng, repeats=1))
        eg = min(eg, time_elgamal(params, blocks, rng))
    return BenchResult(params.p.bit_length(), k, blocks, stream, eg)


def stream_scaling(params: PrimeParams, k_small: int, k_large: int, blocks: int = 1000,
                   seed: int = 0, repeats: int = 5) -> float:
    """Per-block cost ratio large-k / small-k, interleaved best-of timings."""
    rng = random.Random(seed)
    lo = hi = float("inf")
    for _ in range(repeats):
        lo = min(lo, time_stream(params, k_small, blocks, rng, repeats=1))
        hi = min(hi, time_stream(params, k_large, blocks, rng, repeats=1))
    return hi / lo
