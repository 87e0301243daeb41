"""Cell levels, demodulation, minimal-increase modulation and rewrite costs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (DimensionMismatch, IllegalState, PreconditionViolated,
                     RankOutOfRange, SpecMismatch)
from .permlib import MsPermutation, MultisetSpec

GAP = 1.0
# slack for float rounding in ``(a + 1) - a`` when checking gaps
GAP_TOL = 1e-9


@dataclass(frozen=True)
class CellState:
    levels: tuple[float, ...]

    def __post_init__(self):
        levels = tuple(float(v) for v in self.levels)
        for v in levels:
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"cell levels must be finite and non-negative, got {v}")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def zeros(cls, n: int) -> "CellState":
        return cls((0.0,) * n)

    @property
    def n(self) -> int:
        return len(self.levels)

    def __getitem__(self, j: int) -> float:
        return self.levels[j]

    def __str__(self) -> str:
        return ",".join(_fmt(v) for v in self.levels)


def _fmt(v: float) -> str:
    return str(int(v)) if v.is_integer() else repr(v)


def demodulate(x: CellState, q: int, z: int) -> MsPermutation | None:
    """Rank the cells by level, ``z`` per rank.

    Returns ``None`` for the illegal state, i.e. when two cells with equal
    level straddle a rank boundary.
    """
    n = x.n
    if n != q * z:
        raise DimensionMismatch(f"state has {n} cells, expected q*z={q * z}")
    order = sorted(range(n), key=lambda j: (x.levels[j], j))
    for i in range(1, q):
        if x.levels[order[z * i - 1]] == x.levels[order[z * i]]:
            return None
    inv = [0] * n
    for pos, j in enumerate(order):
        inv[j] = pos // z + 1
    return MsPermutation(MultisetSpec.uniform(q, z), tuple(inv))


def gamma(x: CellState, perm: MsPermutation, i: int) -> float:
    """Highest level among the cells of rank ``i``."""
    if i not in perm.spec.labels:
        raise RankOutOfRange(f"rank {i} outside {list(perm.spec.labels)}")
    return max(lv for lv, v in zip(x.levels, perm.inv) if v == i)


def rank_maxima(x: CellState, perm: MsPermutation) -> list[float]:
    """``[gamma(x, perm, i) for i in ranks]`` in a single pass."""
    top = [-math.inf] * perm.q
    first = perm.spec.first
    for lv, v in zip(x.levels, perm.inv):
        if lv > top[v - first]:
            top[v - first] = lv
    return top


def modulate(pi: MsPermutation, s: CellState) -> CellState:
    """Write ``pi`` on top of ``s`` raising levels as little as possible."""
    if s.n != pi.n:
        raise DimensionMismatch(f"state has {s.n} cells, permutation {pi.n}")
    x = list(s.levels)
    groups: list[list[int]] = [[] for _ in range(pi.q)]
    first = pi.spec.first
    for j, v in enumerate(pi.inv):
        groups[v - first].append(j)
    prev = None
    for cells in groups:
        if prev is not None:
            floor = prev + GAP
            for j in cells:
                if x[j] < floor:
                    x[j] = floor
        prev = max(x[j] for j in cells)
    return CellState(tuple(x))


def _top(x: CellState, perm: MsPermutation) -> float:
    top = perm.spec.first + perm.q - 1
    return max(lv for lv, v in zip(x.levels, perm.inv) if v == top)


def cost_states(s: CellState, pi: MsPermutation) -> float:
    """Increase of the top-rank maximum caused by writing ``pi`` over ``s``."""
    sigma = demodulate(s, pi.q, pi.n // pi.q)
    if sigma is None:
        raise IllegalState("current state does not demodulate to a permutation")
    return _cost(s, sigma, pi)


def _cost(s: CellState, sigma: MsPermutation, pi: MsPermutation) -> float:
    return _top(modulate(pi, s), pi) - _top(s, sigma)


def cost_perms(sigma: MsPermutation, pi: MsPermutation) -> int:
    """Largest rank drop of any cell going from ``sigma`` to ``pi``."""
    if sigma.spec != pi.spec:
        raise SpecMismatch("permutations belong to different multisets")
    return max(a - b for a, b in zip(sigma.inv, pi.inv))


@dataclass(frozen=True)
class CostBoundReport:
    lhs: float
    rhs: int
    tight: bool

    @property
    def holds(self) -> bool:
        if self.tight:
            return abs(self.lhs - self.rhs) <= GAP_TOL
        return self.lhs <= self.rhs + GAP_TOL


def cost_bound_check(s: CellState, pi: MsPermutation) -> CostBoundReport:
    """Compare the level-based cost with the rank-drop cost.

    Only defined for states whose consecutive rank maxima differ by at least
    one, as produced by :func:`modulate`. ``tight`` flags states whose top and
    bottom rank maxima are exactly ``q - 1`` apart, where both costs agree.
    """
    q = pi.q
    sigma = demodulate(s, q, pi.n // q)
    if sigma is None:
        raise IllegalState("current state does not demodulate to a permutation")
    g = rank_maxima(s, sigma)
    if any(b - a < GAP - GAP_TOL for a, b in zip(g, g[1:])):
        raise PreconditionViolated(f"rank maxima {g} have a gap below {GAP}")
    lhs = _cost(s, sigma, pi)
    rhs = cost_perms(sigma, pi)
    return CostBoundReport(lhs, rhs, abs(g[-1] - g[0] - (q - 1)) <= GAP_TOL)


def parse_states(lines: Iterable[str]) -> list[CellState]:
    """Parse the cell-state CSV format: one comma-separated row per state."""
    out = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(CellState(tuple(float(tok) for tok in line.split(","))))
    return out


def read_states(path: str | Path) -> list[CellState]:
    with open(path) as fh:
        return parse_states(fh)


def format_states(states: Sequence[CellState]) -> str:
    return "".join(f"{s}\n" for s in states)
