"""Multiset permutations and enumerative codes.

Cells and ranks are 1-based throughout, matching the way codes are usually
written down: a permutation of the multiset ``{1^z, ..., q^z}`` is stored in
inverse form, ``inv[j-1]`` being the rank of cell ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import IndexOutOfRange, InvalidPermutation, WeightTooHigh

_EPS = 1e-9


def floor_fraction(w, n: int) -> int:
    """Return ``floor(w * n)`` robust to binary float noise (``2/3 * 6 == 4``)."""
    if isinstance(w, (int, Fraction)):
        return math.floor(Fraction(w) * n)
    return math.floor(float(w) * n + _EPS)


@dataclass(frozen=True)
class MultisetSpec:
    """The multiset ``{first^z_1, (first+1)^z_2, ...}``.

    ``first`` defaults to 1; codes that arrange only the top ranks use a
    higher starting label (for example ``{2, 2, 3, 3}``).
    """

    mult: tuple[int, ...]
    first: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mult", tuple(int(z) for z in self.mult))
        if not self.mult:
            raise ValueError("multiset needs at least one element")
        if any(z < 1 for z in self.mult):
            raise ValueError(f"multiplicities must be positive, got {self.mult}")

    @classmethod
    def uniform(cls, q: int, z: int, first: int = 1) -> "MultisetSpec":
        return cls((z,) * q, first)

    @classmethod
    def from_elements(cls, elements: Iterable[int]) -> "MultisetSpec":
        elements = sorted(elements)
        lo, hi = elements[0], elements[-1]
        counts = [0] * (hi - lo + 1)
        for e in elements:
            counts[e - lo] += 1
        return cls(tuple(counts), lo)

    @property
    def q(self) -> int:
        return len(self.mult)

    @property
    def n(self) -> int:
        return sum(self.mult)

    @property
    def labels(self) -> range:
        return range(self.first, self.first + self.q)

    def multiplicity(self, label: int) -> int:
        return self.mult[label - self.first]


@dataclass(frozen=True)
class MsPermutation:
    """A multiset permutation in inverse form (rank of each cell)."""

    spec: MultisetSpec
    inv: tuple[int, ...]

    def __post_init__(self):
        inv = tuple(map(int, self.inv))
        object.__setattr__(self, "inv", inv)
        spec = self.spec
        mult, first = spec.mult, spec.first
        if len(inv) != sum(mult):
            raise InvalidPermutation(
                f"length {len(inv)} does not match multiset cardinality {spec.n}")
        q = len(mult)
        counts = [0] * q
        for v in inv:
            k = v - first
            if not 0 <= k < q:
                raise InvalidPermutation(f"rank {v} outside {list(spec.labels)}")
            counts[k] += 1
        if tuple(counts) != mult:
            raise InvalidPermutation(
                f"rank multiplicities {tuple(counts)} differ from {self.spec.mult}")

    @classmethod
    def uniform(cls, inv: Sequence[int], q: int | None = None) -> "MsPermutation":
        """Build a member of S_{q,z} from its inverse vector, inferring z."""
        inv = tuple(inv)
        q = q if q is not None else max(inv)
        if len(inv) % q:
            raise InvalidPermutation(f"length {len(inv)} is not a multiple of q={q}")
        return cls(MultisetSpec.uniform(q, len(inv) // q), inv)

    @property
    def n(self) -> int:
        return len(self.inv)

    @property
    def q(self) -> int:
        return self.spec.q

    def cells(self, rank: int) -> frozenset[int]:
        """The set of cells (1-based) holding ``rank``."""
        return frozenset(j for j, v in enumerate(self.inv, 1) if v == rank)

    def sets(self) -> tuple[frozenset[int], ...]:
        return tuple(self.cells(i) for i in self.spec.labels)

    def __str__(self) -> str:
        return ",".join(map(str, self.inv))


@dataclass(frozen=True)
class BinaryWord:
    bits: tuple[int, ...]
    weight: int = field(init=False)

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "weight", sum(bits))

    @classmethod
    def from_str(cls, s: str) -> "BinaryWord":
        return cls(tuple(int(c) for c in s.strip()))

    @classmethod
    def zeros(cls, n: int) -> "BinaryWord":
        return cls((0,) * n)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __xor__(self, other: "BinaryWord") -> "BinaryWord":
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return BinaryWord(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def covered_by(self, other: "BinaryWord") -> bool:
        """True when ``self <= other`` componentwise."""
        return all(a <= b for a, b in zip(self.bits, other.bits))

    def support(self) -> frozenset[int]:
        return theta_inv(self)


def count_perms(spec: MultisetSpec) -> int:
    """Number of distinct permutations of the multiset (exact)."""
    total = math.factorial(spec.n)
    for z in spec.mult:
        total //= math.factorial(z)
    return total


def unrank_perm(spec: MultisetSpec, idx: int) -> MsPermutation:
    """Return the ``idx``-th (1-based) permutation in lexicographic order of ``inv``."""
    total = count_perms(spec)
    if not 1 <= idx <= total:
        raise IndexOutOfRange(f"index {idx} outside [1, {total}]")
    remaining = list(spec.mult)
    left = spec.n
    k = idx - 1
    out = []
    for _ in range(spec.n):
        # total counts completions of the current prefix
        for pos, c in enumerate(remaining):
            if not c:
                continue
            block = total * c // left
            if k < block:
                out.append(spec.first + pos)
                remaining[pos] -= 1
                total = block
                break
            k -= block
        left -= 1
    return MsPermutation(spec, tuple(out))


def rank_perm(perm: MsPermutation) -> int:
    """Inverse of :func:`unrank_perm`."""
    spec = perm.spec
    remaining = list(spec.mult)
    total = count_perms(spec)
    left = spec.n
    k = 0
    for v in perm.inv:
        pos = v - spec.first
        for smaller in range(pos):
            c = remaining[smaller]
            if c:
                k += total * c // left
        total = total * remaining[pos] // left
        remaining[pos] -= 1
        left -= 1
    return k + 1


def iter_perms(spec: MultisetSpec) -> Iterator[MsPermutation]:
    """All permutations in lexicographic order, without going through ranks."""
    remaining = list(spec.mult)
    prefix: list[int] = []

    def rec():
        if len(prefix) == spec.n:
            yield MsPermutation(spec, tuple(prefix))
            return
        for pos, c in enumerate(remaining):
            if c:
                remaining[pos] -= 1
                prefix.append(spec.first + pos)
                yield from rec()
                prefix.pop()
                remaining[pos] += 1

    yield from rec()


def theta(S: Iterable[int], n: int) -> BinaryWord:
    """Characteristic vector of a subset of ``[n]`` (1-based cells)."""
    S = set(S)
    if any(not 1 <= j <= n for j in S):
        raise ValueError(f"subset {sorted(S)} not contained in [1, {n}]")
    return BinaryWord(tuple(1 if j in S else 0 for j in range(1, n + 1)))


def theta_inv(w: BinaryWord) -> frozenset[int]:
    return frozenset(j for j, b in enumerate(w.bits, 1) if b)


def rank_union(perm: MsPermutation, i1: int, i2: int) -> frozenset[int]:
    """Cells whose rank lies in ``[i1, i2]``; empty when ``i1 > i2``."""
    if i1 > i2:
        return frozenset()
    return frozenset(j for j, v in enumerate(perm.inv, 1) if i1 <= v <= i2)


def bounded_count(n: int, delta) -> int:
    """Number of n-bit words of weight at most ``floor(delta * n)``."""
    return sum(math.comb(n, j) for j in range(floor_fraction(delta, n) + 1))


def unrank_bounded(n: int, delta, idx: int) -> BinaryWord:
    """Index -> word of weight <= floor(delta n); weight-major, then lexicographic."""
    wmax = floor_fraction(delta, n)
    k = idx - 1
    total = bounded_count(n, delta)
    if not 0 <= k < total:
        raise IndexOutOfRange(f"index {idx} outside [1, {total}]")
    w = 0
    while k >= math.comb(n, w):
        k -= math.comb(n, w)
        w += 1
    assert w <= wmax
    bits = []
    ones = w
    for pos in range(n):
        rest = n - pos - 1
        with_zero = math.comb(rest, ones)
        if k < with_zero:
            bits.append(0)
        else:
            k -= with_zero
            bits.append(1)
            ones -= 1
    return BinaryWord(tuple(bits))


def rank_bounded(w: BinaryWord, delta) -> int:
    n = len(w)
    wmax = floor_fraction(delta, n)
    if w.weight > wmax:
        raise WeightTooHigh(f"weight {w.weight} exceeds floor(delta*n)={wmax}")
    k = sum(math.comb(n, j) for j in range(w.weight))
    ones = w.weight
    for pos, b in enumerate(w.bits):
        if b:
            k += math.comb(n - pos - 1, ones)
            ones -= 1
    return k + 1
