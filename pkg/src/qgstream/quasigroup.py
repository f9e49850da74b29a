"""The quasigroup of order p-1 on Z_p^* and its string transformations.

``i * j = i * f_K(j) mod p`` where ``f_K(j) = 1 / (1 + (K + j) mod (p-1))``.
No table is materialized except by :func:`build_small_table`, which exists
for exhaustive checks at small p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError
from .numtheory import mod_inv

SMALL_TABLE_MAX_P = 257


@dataclass(frozen=True)
class QuasigroupZp:
    p: int
    K: int

    def __post_init__(self):
        if self.p < 3:
            raise ParameterError(f"p must be an odd prime, got {self.p}")
        # K = p-1 would alias K = 0 under mod (p-1)
        if not 1 <= self.K <= self.p - 2:
            raise ParameterError(f"K must be in [1, p-2], got {self.K}")

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 1 <= x <= self.p - 1:
                raise DomainError(f"operand {x} outside [1, {self.p - 1}]")

    def f(self, j: int) -> int:
        """The permutation f_K of Z_p^*."""
        self._check(j)
        return mod_inv(1 + (self.K + j) % (self.p - 1), self.p)

    def star(self, i: int, j: int) -> int:
        self._check(i, j)
        return self._star(i, j)

    def left_div(self, i: int, j: int) -> int:
        """The unique x with ``i * x == j``."""
        self._check(i, j)
        return self._left_div(i, j)

    # unchecked versions for the stream hot path
    def _star(self, i: int, j: int) -> int:
        p = self.p
        return i * mod_inv(1 + (self.K + j) % (p - 1), p) % p

    def _left_div(self, i: int, j: int) -> int:
        p = self.p
        g = (i * mod_inv(j, p) % p - 1 - self.K) % (p - 1)
        return g if g else p - 1


@dataclass(frozen=True)
class SmallQuasigroupTable:
    """Full multiplication table built from a first row: table[i-1][j-1] = i * row[j-1] mod p."""

    p: int
    row: tuple[int, ...]
    table: np.ndarray

    def __call__(self, i: int, j: int) -> int:
        return int(self.table[i - 1, j - 1])

    def is_latin_square(self) -> bool:
        n = self.p - 1
        want = np.arange(1, n + 1)
        rows_ok = (np.sort(self.table, axis=1) == want).all()
        cols_ok = (np.sort(self.table, axis=0) == want[:, None]).all()
        return bool(rows_ok and cols_ok)


def build_small_table(p: int, row: Sequence[int]) -> SmallQuasigroupTable:
    if p > SMALL_TABLE_MAX_P:
        raise ParameterError(f"table construction is limited to p <= {SMALL_TABLE_MAX_P}")
    row = tuple(int(x) for x in row)
    if sorted(row) != list(range(1, p)):
        raise ParameterError("first row must be a permutation of 1..p-1")
    i = np.arange(1, p, dtype=np.int64)[:, None]
    table = i * np.asarray(row, dtype=np.int64)[None, :] % p
    table.setflags(write=False)
    return SmallQuasigroupTable(p, row, table)


def table_for(qg: QuasigroupZp) -> SmallQuasigroupTable:
    return build_small_table(qg.p, [qg.f(j) for j in range(1, qg.p)])


def _check_word(qg: QuasigroupZp, leader: int, word: Sequence[int]) -> None:
    qg._check(leader, *word)


def e_transform(qg: QuasigroupZp, leader: int, word: Sequence[int]) -> list[int]:
    """b_1 = a*w_1, b_{i+1} = b_i * w_{i+1}."""
    _check_word(qg, leader, word)
    out, b = [], leader
    for x in word:
        b = qg._star(b, x)
        out.append(b)
    return out


def d_transform(qg: QuasigroupZp, leader: int, word: Sequence[int]) -> list[int]:
    """Inverse of :func:`e_transform` with the same leader: c_1 = a\\w_1, c_{i+1} = w_i\\w_{i+1}."""
    _check_word(qg, leader, word)
    out, prev = [], leader
    for x in word:
        out.append(qg._left_div(prev, x))
        prev = x
    return out


def e_k_transform(qg: QuasigroupZp, leaders: Sequence[int], word: Sequence[int]) -> list[int]:
    """E_{a_1..a_k} = e_{a_1} o ... o e_{a_k}; e_{a_k} is applied first."""
    if not leaders:
        raise ParameterError("at least one leader is required")
    word = list(word)
    for a in reversed(leaders):
        word = e_transform(qg, a, word)
    return word


def d_k_transform(qg: QuasigroupZp, leaders: Sequence[int], word: Sequence[int]) -> list[int]:
    """D_{a_1..a_k} = d_{a_1} o ... o d_{a_k}.

    ``d_k_transform(qg, leaders[::-1], e_k_transform(qg, leaders, w)) == w``.
    """
    if not leaders:
        raise ParameterError("at least one leader is required")
    word = list(word)
    for a in reversed(leaders):
        word = d_transform(qg, a, word)
    return word
