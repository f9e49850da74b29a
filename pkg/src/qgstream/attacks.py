"""Executable cryptanalysis of the cipher for small leader counts.

* :func:`attack_k1` breaks the real cipher with one leader from a two-block
  known-plaintext sample.
* :func:`simplified_encrypt` evaluates the mod-p-only model under the
  chosen plaintext p-2, and :func:`attack_k2_simplified` recovers K from it
  through a cubic in K.
* :func:`emit_k3_instance` produces numeric k=3 instances; nothing solves
  them here.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import AttackFailedError, DegenerateInstanceError, DomainError, ParameterError
from .numtheory import mod_inv
from .polyring import PolyZp, roots_mod_p
from .quasigroup import QuasigroupZp
from .stream import StreamState


@dataclass(frozen=True)
class KnownPlaintextSample:
    p: int
    m: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        object.__setattr__(self, "c", tuple(self.c))
        if len(self.m) != len(self.c) or len(self.m) < 2:
            raise ParameterError("need equally long plaintext/ciphertext of at least 2 blocks")
        if any(not 1 <= v <= self.p - 1 for v in self.m + self.c):
            raise DomainError("sample values must lie in [1, p-1]")


@dataclass(frozen=True)
class SimplifiedModelParams:
    p: int
    K: int
    leaders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "leaders", tuple(self.leaders))
        if not 1 <= self.K <= self.p - 2:
            raise ParameterError(f"K must be in [1, p-2], got {self.K}")
        if not self.leaders or any(not 1 <= a <= self.p - 1 for a in self.leaders):
            raise ParameterError("leaders must be non-empty and lie in [1, p-1]")


def make_sample(p: int, K: int, leaders: Sequence[int], plaintext: Sequence[int]) -> KnownPlaintextSample:
    """Encrypt ``plaintext`` with the real cipher and package the transcript."""
    state = StreamState(QuasigroupZp(p, K), list(leaders))
    return KnownPlaintextSample(p, tuple(plaintext), tuple(state.encrypt_blocks(plaintext)))


def _replays(sample: KnownPlaintextSample, K: int, a1: int) -> bool:
    try:
        state = StreamState(QuasigroupZp(sample.p, K), [a1])
    except (ParameterError, DomainError):
        return False
    return all(state.encrypt_block(m) == c for m, c in zip(sample.m, sample.c))


def attack_k1(sample: KnownPlaintextSample) -> tuple[int, int]:
    """Recover (K, a_1) for a one-leader cipher.

    After block 1 the leader is public: a' = 1 + c_1 mod (p-1). Block 2 gives
    1 + (K + m_2) mod (p-1) = a' / c_2 mod p, which is linear in K.
    """
    p = sample.p
    (m1, m2), (c1, c2) = sample.m[:2], sample.c[:2]
    a_next = 1 + c1 % (p - 1)
    denom = a_next * mod_inv(c2, p) % p
    K = (denom - 1 - m2) % (p - 1)
    if K == 0:
        raise AttackFailedError("sample is inconsistent with a one-leader cipher")
    qg = QuasigroupZp(p, K)
    a1 = c1 * mod_inv(qg.f(m1), p) % p
    if not _replays(sample, K, a1):
        raise AttackFailedError("recovered key does not reproduce the ciphertext")
    return K, a1


# simplified model ---------------------------------------------------------

def _div(num: int, den: int, p: int) -> int:
    if den % p == 0:
        raise DegenerateInstanceError("zero denominator in the simplified model")
    return num * mod_inv(den, p) % p


def simplified_encrypt(params: SimplifiedModelParams, n: int) -> list[int]:
    """Ciphertexts of the chosen plaintext (p-2, p-2, ...) in the mod-p-only model.

    The first step is exact (x * (p-2) = x / K); later steps use
    x * y = x / (1 + K + y) and the k-th leader becomes the plain sum of the
    block's intermediates, all mod p.
    """
    p, K = params.p, params.K
    leaders = list(params.leaders)
    out = []
    for _ in range(n):
        x = _div(leaders[0], K, p)
        inter = [x]
        for a in leaders[1:]:
            x = _div(a, 1 + K + x, p)
            inter.append(x)
        out.append(x)
        leaders = inter[:-1] + [sum(inter) % p]
    return out


def k2_cubic(c1: int, c2: int, c3: int, p: int) -> PolyZp:
    """c3 K^3 + (c3 - 2 c2 - c2 c3) K^2 + (c1 - c2 + c2^2) K + (c2 c3 - c1 c3)."""
    return PolyZp(p, (
        c2 * c3 - c1 * c3,
        c1 - c2 + c2 * c2,
        -2 * c2 + c3 - c2 * c3,
        c3,
    ))


def _k2_leaders(c1: int, c2: int, K: int, p: int) -> tuple[int, int]:
    # second equation solved for a_1, first for a_2
    a1 = _div((c1 - c2 - c2 * K) * K * K, c2 - K, p)
    a2 = c1 * (1 + _div(a1, K, p) + K) % p
    return a1, a2


def attack_k2_simplified(c1: int, c2: int, c3: int, p: int, rng=None) -> set[int]:
    """Candidate K values from three chosen-plaintext ciphertexts, each verified by replay."""
    cubic = k2_cubic(c1, c2, c3, p)
    if cubic.is_zero():
        raise AttackFailedError("cubic vanishes identically; instance is degenerate")
    verified = set()
    for K in roots_mod_p(cubic, rng):
        if not 1 <= K <= p - 2:
            continue
        try:
            a1, a2 = _k2_leaders(c1, c2, K, p)
            params = SimplifiedModelParams(p, K, (a1, a2))
            if simplified_encrypt(params, 3) == [c1, c2, c3]:
                verified.add(K)
        except (DegenerateInstanceError, ParameterError):
            continue
    if not verified:
        raise AttackFailedError("no root of the cubic reproduces the ciphertexts")
    return verified


@dataclass(frozen=True)
class K3Instance:
    params: SimplifiedModelParams
    c: tuple[int, int, int, int]
    A1: int
    A2: int


def emit_k3_instance(params: SimplifiedModelParams) -> K3Instance:
    """Numeric k=3 instance with the substitutions A1 = a1/K, A2 = a2/(1 + a1/K + K)."""
    if len(params.leaders) != 3:
        raise ParameterError(f"k3 instances need exactly 3 leaders, got {len(params.leaders)}")
    p, K = params.p, params.K
    a1, a2, _ = params.leaders
    c = tuple(simplified_encrypt(params, 4))
    A1 = _div(a1, K, p)
    A2 = _div(a2, 1 + A1 + K, p)
    return K3Instance(params, c, A1, A2)


def random_simplified_params(p: int, k: int, rng) -> SimplifiedModelParams:
    return SimplifiedModelParams(p, rng.randint(1, p - 2), tuple(rng.randint(1, p - 2) for _ in range(k)))


# trial harness ------------------------------------------------------------

@dataclass
class TrialResult:
    seed: int
    p_bits: int
    success: bool
    K: Optional[int]
    seconds: float
    true_K: int = field(default=0, repr=False)

    def line(self) -> str:
        k = "-" if self.K is None else str(self.K)
        return f"seed={self.seed} p_bits={self.p_bits} success={int(self.success)} K={k} time={self.seconds:.6f}"


def run_k1_trial(p: int, seed: int, blocks: int = 4) -> TrialResult:
    rng = random.Random(seed)
    K = rng.randint(1, p - 2)
    a1 = rng.randint(1, p - 2)
    sample = make_sample(p, K, [a1], [rng.randint(1, p - 1) for _ in range(blocks)])
    t0 = time.perf_counter()
    try:
        rK, ra1 = attack_k1(sample)
        ok = (rK, ra1) == (K, a1)
    except AttackFailedError:
        rK, ok = None, False
    return TrialResult(seed, p.bit_length(), ok, rK, time.perf_counter() - t0, K)


def run_k2_trial(p: int, seed: int) -> TrialResult:
    """One simplified-model k=2 trial; degenerate instances are resampled from the same seed."""
    rng = random.Random(seed)
    while True:
        params = random_simplified_params(p, 2, rng)
        try:
            c1, c2, c3 = simplified_encrypt(params, 3)
            break
        except DegenerateInstanceError:
            continue
    t0 = time.perf_counter()
    try:
        cands = attack_k2_simplified(c1, c2, c3, p, rng)
        ok = params.K in cands
        rK = params.K if ok else min(cands)
    except AttackFailedError:
        rK, ok = None, False
    return TrialResult(seed, p.bit_length(), ok, rK, time.perf_counter() - t0, params.K)
