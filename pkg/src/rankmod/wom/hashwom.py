"""Concatenated constant-weight WOM code from the affine GF(2^n) hash family.

A ``t1 x t2`` grid of n-bit blocks is written at once. Every column of the
grid shares one hash function, whose index is the side information; the
encoder searches the family for a hash under which each block of the column
has a constant-weight word below its state hashing to that block's message.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..errors import DimensionMismatch, NoEncoding, ParamError, ShapeMismatch
from ..limits import capacity_wom
from ..permlib import BinaryWord, floor_fraction
from .gf2n import IRREDUCIBLE, index_to_pair, mul


@dataclass(frozen=True)
class HashWomParams:
    n: int
    t1: int
    t2: int
    k: int
    l: int
    w_s: object
    w_x: object

    def __post_init__(self):
        if not 0 <= self.l <= self.k <= self.n:
            raise ParamError(f"need 0 <= l <= k <= n, got k={self.k} l={self.l} n={self.n}")
        if self.t1 < 1 or self.t2 < 1:
            raise ParamError("block counts must be positive")

    @property
    def t(self) -> int:
        return self.t1 * self.t2

    @property
    def out_bits(self) -> int:
        return self.k - self.l

    @property
    def block_messages(self) -> int:
        return 1 << self.out_bits

    @property
    def n_hashes(self) -> int:
        return 1 << (2 * self.n)

    @property
    def n_messages(self) -> int:
        return self.block_messages ** self.t

    @property
    def n_index(self) -> int:
        return self.n_hashes ** self.t2

    def rate(self) -> float:
        """Bits per cell net of the side information."""
        return (self.t1 * self.out_bits - 2 * self.n) / (self.n * self.t1)


@dataclass(frozen=True)
class AsymptoticHashParams:
    """Parameter recipe as a function of the rate back-off ``eps``.

    ``t2`` is astronomically large, so only its base-2 logarithm is kept; the
    rate does not depend on it.
    """

    eps: float
    c: float
    delta: float
    w_s: float
    w_x: float

    @property
    def n(self) -> int:
        return math.ceil(self.c / self.eps * math.log2(1 / self.eps))

    @property
    def k(self) -> int:
        return math.floor(self.n * (capacity_wom(self.w_s, self.w_x) - 2 * self.eps / 3))

    @property
    def t1(self) -> int:
        return math.floor((1 / self.eps) ** (self.c / 12) - 1)

    @property
    def log2_t2(self) -> float:
        return 4 * self.n / self.delta

    def rate(self) -> float:
        return (self.t1 * self.k - 2 * self.n) / (self.n * self.t1)


class HashWomCode:
    def __init__(self, params: HashWomParams):
        if params.n not in IRREDUCIBLE:
            raise ParamError(f"no field modulus for block length {params.n}")
        self.params = params
        p = params
        self.n = p.n
        self.t = p.t
        self.w_s = p.w_s
        self.w_x = p.w_x
        self.n_messages = p.n_messages
        self.n_index = p.n_index

    # grid interface

    def _eligible(self, s: BinaryWord) -> list[tuple[tuple[int, ...], int]]:
        p = self.params
        if len(s) != p.n or s.weight != floor_fraction(p.w_s, p.n):
            raise DimensionMismatch(
                f"state block {s} must have length {p.n} and weight {floor_fraction(p.w_s, p.n)}")
        support = [j for j, b in enumerate(s.bits) if b]
        out = []
        for combo in itertools.combinations(support, floor_fraction(p.w_x, p.n)):
            bits = [0] * p.n
            for j in combo:
                bits[j] = 1
            out.append((tuple(bits), int("".join(map(str, bits)), 2)))
        return out

    def _check_grid(self, grid, what):
        p = self.params
        if len(grid) != p.t1 or any(len(row) != p.t2 for row in grid):
            raise ShapeMismatch(f"{what} must be a {p.t1}x{p.t2} grid")

    def encode_grid(self, m, s):
        """Encode a ``t1 x t2`` message grid onto a grid of state blocks.

        Returns ``(x, m_a)``: the codeword grid and one hash index per column.
        The hash index is the smallest one that works; within a block the
        first eligible word in lexicographic order of supports is taken.
        """
        p = self.params
        self._check_grid(m, "message")
        self._check_grid(s, "state")
        shift = p.n - p.out_bits
        x_grid = [[None] * p.t2 for _ in range(p.t1)]
        m_a = []
        for j in range(p.t2):
            want = [m[i][j] - 1 for i in range(p.t1)]
            for i in range(p.t1):
                if not 0 <= want[i] < p.block_messages:
                    raise ParamError(f"block message {m[i][j]} outside [1, {p.block_messages}]")
            cands = [self._eligible(s[i][j]) for i in range(p.t1)]
            found = None
            for a in range(1 << p.n):
                ax = [[mul(a, v, p.n) for _, v in c] for c in cands]
                for b in range(1 << p.n):
                    picks = []
                    for i in range(p.t1):
                        hit = next((cands[i][k][0] for k, y in enumerate(ax[i])
                                    if (y ^ b) >> shift == want[i]), None)
                        if hit is None:
                            break
                        picks.append(hit)
                    else:
                        found = (a, b, picks)
                        break
                if found:
                    break
            if found is None:
                raise NoEncoding(f"no hash in the family encodes column {j + 1}",
                                 {"column": j + 1, "searched": p.n_hashes})
            a, b, picks = found
            m_a.append((a << p.n | b) + 1)
            for i in range(p.t1):
                x_grid[i][j] = BinaryWord(picks[i])
        return x_grid, m_a

    def decode_grid(self, x, m_a):
        p = self.params
        self._check_grid(x, "codeword")
        if len(m_a) != p.t2:
            raise ShapeMismatch(f"need {p.t2} hash indices, got {len(m_a)}")
        out = [[0] * p.t2 for _ in range(p.t1)]
        for j in range(p.t2):
            a, b = index_to_pair(m_a[j], p.n)
            for i in range(p.t1):
                v = int(str(x[i][j]), 2)
                out[i][j] = ((mul(a.value, v, p.n) ^ b.value) >> (p.n - p.out_bits)) + 1
        return out

    # flat interface used by the rewriting codes

    def _block(self, b: int) -> tuple[int, int]:
        return b % self.params.t1, b // self.params.t1

    def _split(self, word: BinaryWord) -> list[list[BinaryWord]]:
        p = self.params
        if len(word) != p.n * p.t:
            raise DimensionMismatch(f"word length {len(word)}, expected {p.n * p.t}")
        grid = [[None] * p.t2 for _ in range(p.t1)]
        for b in range(p.t):
            i, j = self._block(b)
            grid[i][j] = BinaryWord(word.bits[b * p.n:(b + 1) * p.n])
        return grid

    def _join(self, grid) -> BinaryWord:
        p = self.params
        bits = []
        for b in range(p.t):
            i, j = self._block(b)
            bits.extend(grid[i][j].bits)
        return BinaryWord(tuple(bits))

    def message_grid(self, m: int) -> list[list[int]]:
        p = self.params
        if not 1 <= m <= p.n_messages:
            raise ParamError(f"message {m} outside [1, {p.n_messages}]")
        v = m - 1
        grid = [[0] * p.t2 for _ in range(p.t1)]
        for b in range(p.t):
            i, j = self._block(b)
            v, d = divmod(v, p.block_messages)
            grid[i][j] = d + 1
        return grid

    def message_index(self, grid) -> int:
        p = self.params
        v = 0
        for b in reversed(range(p.t)):
            i, j = self._block(b)
            v = v * p.block_messages + grid[i][j] - 1
        return v + 1

    def encode(self, m: int, s: BinaryWord, key=0) -> tuple[BinaryWord, int]:
        x, m_a = self.encode_grid(self.message_grid(m), self._split(s))
        idx = 0
        for v in reversed(m_a):
            idx = idx * self.params.n_hashes + v - 1
        return self._join(x), idx + 1

    def decode(self, x: BinaryWord, m_a: int, key=0) -> int:
        p = self.params
        v = m_a - 1
        cols = []
        for _ in range(p.t2):
            v, d = divmod(v, p.n_hashes)
            cols.append(d + 1)
        return self.message_index(self.decode_grid(self._split(x), cols))
