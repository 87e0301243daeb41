"""Rank-modulation rewriting codes assembled from WOM ingredient codes.

Every code here maps a message and the currently stored permutation ``sigma``
to a new permutation ``pi`` with ``cost_perms(sigma, pi) <= r``. The lowest
``q - r - 1`` ranks are filled one at a time by a constant-weight WOM code
whose state is the set of cells that may still take that rank; the top
``r + 1`` ranks hold an enumerative code over the remaining cells.

Message parts are ``(m_1, ..., m_{q-r-1}, m_top)`` with ``m_i`` in ``[K_W]``
and ``m_top`` in ``[K_M]``; the flat integer message packs them with
``m_1`` least significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (CodebookViolation, EncodeFailure, InvalidPermutation, ParamError,
                     RewriteFailure)
from .limits import capacity_rm
from .permlib import (BinaryWord, MsPermutation, MultisetSpec, count_perms, rank_perm,
                      rank_union, theta, theta_inv, unrank_perm)
from .wom.table import example_wom_decode, example_wom_encode


def a_min(K_a: int, r: int) -> int:
    """Smallest a >= 1 with |S_{r+1,a}| >= K_a."""
    if K_a < 1:
        raise ParamError("K_a must be positive")
    a = 1
    while count_perms(MultisetSpec.uniform(r + 1, a)) < K_a:
        a += 1
    return a


def _top_spec(q: int, r: int, z: int) -> MultisetSpec:
    return MultisetSpec.uniform(r + 1, z, first=q - r)


def _fill_top(inv: list[int], cells: Sequence[int], top: MsPermutation):
    """Write ``top`` on ``cells`` (1-based, taken in ascending order)."""
    for j, v in zip(sorted(cells), top.inv):
        inv[j - 1] = v


def _read_top(inv: Sequence[int], cells, spec: MultisetSpec) -> MsPermutation:
    return MsPermutation(spec, tuple(inv[j - 1] for j in sorted(cells)))


@dataclass(frozen=True)
class SchemeRate:
    rate: float
    capacity: float

    @property
    def capacity_gap(self) -> float:
        return self.capacity - self.rate


class RewriteCode:
    """Shared message packing and bookkeeping; subclasses set the layout."""

    q: int
    z: int
    r: int
    K_W: int
    K_M: int

    @property
    def n(self) -> int:
        return self.q * self.z

    @property
    def spec(self) -> MultisetSpec:
        return MultisetSpec.uniform(self.q, self.z)

    @property
    def n_parts(self) -> int:
        return self.q - self.r

    @property
    def n_messages(self) -> int:
        return self.K_W ** (self.q - self.r - 1) * self.K_M

    def split_message(self, m: int) -> tuple[int, ...]:
        if not 1 <= m <= self.n_messages:
            raise ParamError(f"message {m} outside [1, {self.n_messages}]")
        v = m - 1
        parts = []
        for _ in range(self.q - self.r - 1):
            v, d = divmod(v, self.K_W)
            parts.append(d + 1)
        parts.append(v + 1)
        return tuple(parts)

    def join_message(self, parts: Sequence[int]) -> int:
        self._check_parts(parts)
        v = parts[-1] - 1
        for p in reversed(parts[:-1]):
            v = v * self.K_W + p - 1
        return v + 1

    def _check_parts(self, parts: Sequence[int]):
        if len(parts) != self.n_parts:
            raise ParamError(f"expected {self.n_parts} message parts, got {len(parts)}")
        for p in parts[:-1]:
            if not 1 <= p <= self.K_W:
                raise ParamError(f"message part {p} outside [1, {self.K_W}]")
        if not 1 <= parts[-1] <= self.K_M:
            raise ParamError(f"top message part {parts[-1]} outside [1, {self.K_M}]")

    def _parts(self, m) -> tuple[int, ...]:
        if isinstance(m, int):
            return self.split_message(m)
        parts = tuple(int(p) for p in m)
        self._check_parts(parts)
        return parts

    def _check_sigma(self, sigma: MsPermutation):
        if sigma.spec != self.spec:
            raise CodebookViolation(f"state is not in S_{{{self.q},{self.z}}}")
        self.validate(sigma)

    def validate(self, perm: MsPermutation) -> None:
        if perm.spec != self.spec:
            raise CodebookViolation(f"permutation is not in S_{{{self.q},{self.z}}}")

    def in_codebook(self, perm: MsPermutation) -> bool:
        try:
            self.validate(perm)
        except (CodebookViolation, InvalidPermutation):
            return False
        return True

    def decode_int(self, pi: MsPermutation) -> int:
        return self.join_message(self.decode(pi))

    def initial_perm(self) -> MsPermutation:
        return unrank_perm(self.spec, 1)

    def scheme_rate(self) -> SchemeRate:
        return SchemeRate(math.log2(self.n_messages) / self.n, capacity_rm(self.r))

    @property
    def rate(self) -> float:
        return self.scheme_rate().rate


class ExampleRewriteCode(RewriteCode):
    """The 30-message code on 3 ranks of 2 cells with cost at most 1.

    Rank 1 holds the five-message table code written inside the cells of
    ranks 1-2 of the old permutation; ranks 2-3 enumerate the other cells.
    """

    q, z, r = 3, 2, 1
    K_W, K_M = 5, 6

    def encode(self, m, sigma: MsPermutation, key=0) -> MsPermutation:
        m1, m2 = self._parts(m)
        self._check_sigma(sigma)
        low = example_wom_encode(m1, rank_union(sigma, 1, 2))
        inv = [1 if j in low else 0 for j in range(1, 7)]
        rest = [j for j in range(1, 7) if j not in low]
        _fill_top(inv, rest, unrank_perm(_top_spec(3, 1, 2), m2))
        return MsPermutation(self.spec, tuple(inv))

    def decode(self, pi: MsPermutation, key=0) -> tuple[int, int]:
        self.validate(pi)
        m1 = example_wom_decode(pi.cells(1))
        rest = [j for j in range(1, 7) if pi.inv[j - 1] != 1]
        return m1, rank_perm(_read_top(pi.inv, rest, _top_spec(3, 1, 2)))


def _ingredient_key(key, i: int) -> int:
    return int(key) * 1024 + i


def _check_wom_output(x: BinaryWord, s: BinaryWord, weight: int, i: int):
    if not x.covered_by(s) or x.weight != weight:
        raise RewriteFailure(
            f"ingredient output for rank {i} has weight {x.weight} or leaves the state",
            {"rank": i, "weight": x.weight, "covered": x.covered_by(s)})


class StrongWomRewriteCode(RewriteCode):
    """Rewriting code over all of S_{q,z} from a constant-weight strong WOM code.

    ``wom`` needs ``n == q*z``, ``n_messages`` and ``encode(m, s, key)`` /
    ``decode(x, key)``. With ``r == q - 1`` no WOM round runs and ``wom`` may
    be None: every permutation is reachable and the code is uncoded storage.
    """

    def __init__(self, q: int, z: int, r: int, wom=None):
        if not 1 <= r <= q - 1:
            raise ParamError(f"need 1 <= r <= q-1, got r={r}, q={q}")
        self.q, self.z, self.r = q, z, r
        self.wom = wom
        if q - r - 1 > 0:
            if wom is None:
                raise ParamError("a WOM ingredient is needed when r < q-1")
            if wom.n != q * z:
                raise ParamError(f"ingredient length {wom.n}, need {q * z}")
        self.K_W = wom.n_messages if wom is not None else 1
        self.top_spec = _top_spec(q, r, z)
        self.K_M = count_perms(self.top_spec)

    def encode(self, m, sigma: MsPermutation, key=0) -> MsPermutation:
        parts = self._parts(m)
        self._check_sigma(sigma)
        inv = [0] * self.n
        used: set[int] = set()
        for i in range(1, self.q - self.r):
            s = theta(rank_union(sigma, 1, i + self.r) - used, self.n)
            try:
                x = self.wom.encode(parts[i - 1], s, _ingredient_key(key, i))
            except EncodeFailure as e:
                raise RewriteFailure(f"rank {i}: {e}", {"rank": i, **e.violations}) from e
            _check_wom_output(x, s, self.z, i)
            for j in theta_inv(x):
                inv[j - 1] = i
            used |= theta_inv(x)
        rest = [j for j in range(1, self.n + 1) if j not in used]
        _fill_top(inv, rest, unrank_perm(self.top_spec, parts[-1]))
        return MsPermutation(self.spec, tuple(inv))

    def decode(self, pi: MsPermutation, key=0) -> tuple[int, ...]:
        self.validate(pi)
        parts = [self.wom.decode(theta(pi.cells(i), self.n), _ingredient_key(key, i))
                 for i in range(1, self.q - self.r)]
        rest = [j for j, v in enumerate(pi.inv, 1) if v >= self.q - self.r]
        parts.append(rank_perm(_read_top(pi.inv, rest, self.top_spec)))
        return tuple(parts)


@dataclass(frozen=True)
class Segment:
    name: str
    start: int  # 0-based offset into the inverse vector
    spec: MultisetSpec

    @property
    def stop(self) -> int:
        return self.start + self.spec.n

    def take(self, inv: Sequence[int]) -> MsPermutation:
        return MsPermutation(self.spec, tuple(inv[self.start:self.stop]))


class WeakWomRewriteCode(RewriteCode):
    """Rewriting code from a constant-weight weak WOM code.

    The inverse vector is the concatenation of a main part (t blocks from
    S_{q,z_W}), one index part per WOM round (each from S_{r+1,a}, holding
    the side index ``m_a``), and a balancing part on ranks r+2..q that is
    copied unchanged, so every rank ends up with ``z = t*z_W + (q-r-1)*a``
    cells. Here the main part comes first.

    ``wom`` provides ``n`` (block length ``q*z_W``), ``n_messages``,
    ``n_index`` and ``encode(m, s, key) -> (x, m_a)`` / ``decode(x, m_a, key)``;
    a code over ``t`` blocks also exposes ``t`` and takes words of length
    ``t*n``.
    """

    main_first = True

    def __init__(self, q: int, z_w: int, r: int, wom):
        if not 1 <= r <= q - 2:
            raise ParamError(f"need 1 <= r <= q-2 for a WOM round, got r={r}, q={q}")
        self.q, self.z_w, self.r = q, z_w, r
        self.t = getattr(wom, "t", 1)
        if wom.n != q * z_w:
            raise ParamError(f"ingredient block length {wom.n}, need {q * z_w}")
        self.wom = wom
        self.K_W = wom.n_messages
        self.K_a = wom.n_index
        self.a = a_min(self.K_a, r)
        rounds = q - r - 1
        self.z = self.t * z_w + rounds * self.a
        self.top_spec = _top_spec(q, r, z_w)
        self.K_M = count_perms(self.top_spec)
        self.n_w = self.t * q * z_w
        block = MultisetSpec.uniform(q, z_w)
        mains = [(f"x{b + 1}", block) for b in range(self.t)]
        index = [(f"a{i}", MultisetSpec.uniform(r + 1, self.a)) for i in range(1, rounds + 1)]
        balance = [("b", MultisetSpec.uniform(q - r - 1, rounds * self.a, first=r + 2))]
        order = mains + index + balance if self.main_first else index + balance + mains
        self.segments: dict[str, Segment] = {}
        pos = 0
        for name, spec in order:
            self.segments[name] = Segment(name, pos, spec)
            pos += spec.n
        self.main_cells = sorted(j for b in range(self.t)
                                 for j in range(self.segments[f"x{b + 1}"].start,
                                                self.segments[f"x{b + 1}"].stop))

    def validate(self, perm: MsPermutation) -> None:
        super().validate(perm)
        for seg in self.segments.values():
            try:
                seg.take(perm.inv)
            except InvalidPermutation as e:
                raise CodebookViolation(f"segment {seg.name}: {e}") from None

    def _main(self, inv: Sequence[int]) -> list[int]:
        return [inv[j] for j in self.main_cells]

    def initial_perm(self) -> MsPermutation:
        inv = [0] * self.n
        for seg in self.segments.values():
            inv[seg.start:seg.stop] = unrank_perm(seg.spec, 1).inv
        return MsPermutation(self.spec, tuple(inv))

    def _place_top(self, main: list[int], free: list[int], m_top: int):
        """Fill the top r+1 ranks of the main part.

        The first block carries the enumerative code; further blocks take the
        lexicographically first arrangement so each block stays balanced.
        """
        per_block = self.q * self.z_w
        for b in range(self.t):
            cells = [j for j in free if b * per_block < j <= (b + 1) * per_block]
            idx = m_top if b == 0 else 1
            _fill_top(main, cells, unrank_perm(self.top_spec, idx))

    def encode(self, m, sigma: MsPermutation, key=0) -> MsPermutation:
        parts = self._parts(m)
        self._check_sigma(sigma)
        sigma_w = MsPermutation(MultisetSpec.uniform(self.q, self.t * self.z_w),
                                tuple(self._main(sigma.inv)))
        inv = list(sigma.inv)
        main = [0] * self.n_w
        used: set[int] = set()
        for i in range(1, self.q - self.r):
            s = theta(rank_union(sigma_w, 1, i + self.r) - used, self.n_w)
            try:
                x, m_a = self.wom.encode(parts[i - 1], s, _ingredient_key(key, i))
            except EncodeFailure as e:
                raise RewriteFailure(f"rank {i}: {e}", {"rank": i, **e.violations}) from e
            _check_wom_output(x, s, self.t * self.z_w, i)
            for j in theta_inv(x):
                main[j - 1] = i
            used |= theta_inv(x)
            seg = self.segments[f"a{i}"]
            inv[seg.start:seg.stop] = unrank_perm(seg.spec, m_a).inv
        free = [j for j in range(1, self.n_w + 1) if j not in used]
        self._place_top(main, free, parts[-1])
        for j, v in zip(self.main_cells, main):
            inv[j] = v
        return MsPermutation(self.spec, tuple(inv))

    def decode(self, pi: MsPermutation, key=0) -> tuple[int, ...]:
        self.validate(pi)
        main = self._main(pi.inv)
        parts = []
        for i in range(1, self.q - self.r):
            x = BinaryWord(tuple(int(v == i) for v in main))
            m_a = rank_perm(self.segments[f"a{i}"].take(pi.inv))
            parts.append(self.wom.decode(x, m_a, _ingredient_key(key, i)))
        first = [j for j in range(1, self.q * self.z_w + 1) if main[j - 1] >= self.q - self.r]
        parts.append(rank_perm(_read_top(main, first, self.top_spec)))
        return tuple(parts)


class ConcatWomRewriteCode(WeakWomRewriteCode):
    """Rewriting code from a constant-weight concatenated WOM code.

    Same control flow as :class:`WeakWomRewriteCode`; the main part spans the
    ingredient's ``t`` blocks and is placed after the index and balancing
    parts.
    """

    main_first = False
