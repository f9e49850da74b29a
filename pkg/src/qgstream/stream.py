"""Per-block stream cipher state machine with self-updating leaders."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ParameterError
from .quasigroup import QuasigroupZp

MIN_SAFE_LEADERS = 3


@dataclass
class StreamState:
    """Leaders (a_1..a_k) over a fixed quasigroup.

    Not thread-safe: one state belongs to one direction of one session.
    """

    qg: QuasigroupZp
    leaders: list[int]
    blocks_processed: int = 0

    def __post_init__(self):
        self.leaders = list(self.leaders)
        if not self.leaders:
            raise ParameterError("at least one leader is required")
        for a in self.leaders:
            if not 1 <= a <= self.qg.p - 1:
                raise DomainError(f"leader {a} outside [1, {self.qg.p - 1}]")

    @property
    def k(self) -> int:
        return len(self.leaders)

    @property
    def p(self) -> int:
        return self.qg.p

    def copy(self) -> "StreamState":
        return StreamState(self.qg, list(self.leaders), self.blocks_processed)

    def _check_block(self, x: int) -> None:
        if not 1 <= x <= self.qg.p - 1:
            raise DomainError(f"block value {x} outside [1, {self.qg.p - 1}]")

    def encrypt_block(self, m: int) -> int:
        self._check_block(m)
        star = self.qg._star
        inter = []
        x = m
        for a in self.leaders:
            x = star(a, x)
            inter.append(x)
        self.leaders = inter[:-1] + [1 + sum(inter) % (self.qg.p - 1)]
        self.blocks_processed += 1
        return x

    def decrypt_block(self, c: int) -> int:
        self._check_block(c)
        ldiv = self.qg._left_div
        # chain[i] holds c^(i+1); chain[k] = c
        k = len(self.leaders)
        chain = [0] * (k + 1)
        chain[k] = c
        for i in range(k - 1, -1, -1):
            chain[i] = ldiv(self.leaders[i], chain[i + 1])
        self.leaders = chain[1:k] + [1 + sum(chain[1:]) % (self.qg.p - 1)]
        self.blocks_processed += 1
        return chain[0]

    def encrypt_blocks(self, blocks):
        return [self.encrypt_block(m) for m in blocks]

    def decrypt_blocks(self, blocks):
        return [self.decrypt_block(c) for c in blocks]
