"""Ball sizes, capacities and brute-force oracles certifying them."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .cellmod import cost_perms
from .errors import DomainError, InstanceTooLarge, NotAPartition, ParamError
from .permlib import (MsPermutation, MultisetSpec, count_perms, floor_fraction,
                      iter_perms)

ENUM_LIMIT = 10**6
TOL = 1e-12


def entropy(p: float) -> float:
    """Binary entropy in bits."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def ball_size(q: int, z: int, r: int) -> int:
    """Number of permutations of S_{q,z} reachable from any one at cost <= r."""
    if not 1 <= r <= q - 1 or z < 1:
        raise ParamError(f"need 1 <= r <= q-1 and z >= 1, got q={q} z={z} r={r}")
    size = math.comb((r + 1) * z, z) ** (q - r)
    for i in range(1, r + 1):
        size *= math.comb(i * z, z)
    return size


@lru_cache(maxsize=16)
def _all_perms(spec: MultisetSpec, limit: int) -> np.ndarray:
    total = count_perms(spec)
    if total > limit:
        raise InstanceTooLarge(f"{total} permutations exceed the enumeration limit {limit}")
    arr = np.array([p.inv for p in iter_perms(spec)], dtype=np.int16)
    arr.setflags(write=False)
    return arr


def _within(sigma: MsPermutation, r: int, limit: int) -> np.ndarray:
    perms = _all_perms(sigma.spec, limit)
    drops = (np.asarray(sigma.inv, dtype=np.int16) - perms).max(axis=1)
    return drops <= r


def ball_enumerate(sigma: MsPermutation, r: int, limit: int = ENUM_LIMIT) -> list[MsPermutation]:
    """Brute-force ball: every permutation within rewrite cost ``r`` of ``sigma``.

    Membership is decided by the rank-drop cost over the full list of
    permutations, never by the closed form.
    """
    perms = _all_perms(sigma.spec, limit)
    rows = perms[_within(sigma, r, limit)]
    return [MsPermutation(sigma.spec, tuple(int(v) for v in row)) for row in rows]


def ball_count(sigma: MsPermutation, r: int, limit: int = ENUM_LIMIT) -> int:
    """``len(ball_enumerate(sigma, r))`` without materialising the members."""
    return int(_within(sigma, r, limit).sum())


def ball_counts_all_centers(q: int, z: int, r: int, limit: int = ENUM_LIMIT) -> set[int]:
    """Brute-force ball sizes around every center of S_{q,z}."""
    spec = MultisetSpec.uniform(q, z)
    perms = _all_perms(spec, limit)
    sizes = set()
    for row in perms:
        sizes.add(int(((row - perms).max(axis=1) <= r).sum()))
    return sizes


def capacity_rm(r: int) -> float:
    if r < 1:
        raise DomainError(f"cost constraint must be positive, got {r}")
    return (r + 1) * entropy(1 / (r + 1))


def capacity_wom(w_s: float, w_x: float) -> float:
    if not 0 < w_x <= w_s <= 1:
        raise DomainError(f"need 0 < w_x <= w_s <= 1, got w_s={w_s} w_x={w_x}")
    ratio = min(1.0, float(w_x) / float(w_s))
    return float(w_s) * entropy(ratio)


def check_code_bound(K_R: int, q: int, z: int, r: int) -> bool:
    return K_R <= ball_size(q, z, r)


@dataclass(frozen=True)
class CapacityReport:
    q: int
    z: int
    r: int
    ball_size: int
    log_ball: float
    c_r: float
    c_w: float

    @property
    def rate_bound(self) -> float:
        return self.log_ball / (self.q * self.z)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ball_size"] = str(self.ball_size)
        d["rate_bound"] = self.rate_bound
        return d


def capacity_report(q: int, z: int, r: int) -> CapacityReport:
    size = ball_size(q, z, r)
    return CapacityReport(q, z, r, size, math.log2(size), capacity_rm(r),
                          capacity_wom((r + 1) / q, 1 / q))


def _as_word(cw, n: int) -> tuple[int, ...]:
    if isinstance(cw, str):
        return tuple(int(c) for c in cw)
    if not isinstance(cw, (set, frozenset)):
        cw = tuple(cw)
        if len(cw) == n and set(cw) <= {0, 1}:
            return cw
    cells = set(cw)
    return tuple(1 if j in cells else 0 for j in range(1, n + 1))


def strong_wom_oracle(n: int, K: int, w_s, w_x, code_table: Mapping[int, Iterable]) -> bool:
    """Exhaustively check a table-defined constant-weight strong WOM code.

    ``code_table`` maps each message in ``[K]`` to its codewords, given either
    as subsets of ``[n]`` (1-based) or as 0/1 sequences. Codeword sets must be
    disjoint, of weight ``floor(w_x n)``, and keyed by messages in ``[K]``;
    otherwise ``NotAPartition`` is raised. Words left out of the table simply
    decode to nothing. Returns True iff every (message, state) pair with a
    state of weight ``floor(w_s n)`` has a codeword below the state.
    """
    wx = floor_fraction(w_x, n)
    ws = floor_fraction(w_s, n)
    seen: dict[tuple[int, ...], int] = {}
    for m, words in code_table.items():
        if not 1 <= m <= K:
            raise NotAPartition(f"message {m} outside [1, {K}]")
        for cw in words:
            word = _as_word(cw, n)
            if len(word) != n or sum(word) != wx:
                raise NotAPartition(f"codeword {cw} of message {m} is not in J_{wx}({n})")
            if word in seen:
                raise NotAPartition(f"codeword {cw} assigned to messages {seen[word]} and {m}")
            seen[word] = m
    supports = {m: [frozenset(j for j, b in enumerate(w, 1) if b)
                    for w, mm in seen.items() if mm == m] for m in range(1, K + 1)}
    for state in itertools.combinations(range(1, n + 1), ws):
        state = frozenset(state)
        for m in range(1, K + 1):
            if not any(c <= state for c in supports[m]):
                return False
    return True
