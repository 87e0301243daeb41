"""Weak constant-weight WOM codes built from other WOM codes.

A weak code returns a pair ``(x, m_a)``: a constant-weight word below the
state plus an unconstrained side index that the rewriting code stores in
extra cells.
"""

from __future__ import annotations

from ..errors import DimensionMismatch, InnerEncodeFailure
from ..permlib import (BinaryWord, bounded_count, floor_fraction, rank_bounded,
                       unrank_bounded)


def _check_state(code, s: BinaryWord):
    if len(s) != code.n:
        raise DimensionMismatch(f"state has length {len(s)}, code length {code.n}")
    want = floor_fraction(code.w_s, code.n)
    if s.weight != want:
        raise DimensionMismatch(f"state weight {s.weight}, expected {want}")


class StrongAsWeak:
    """View a strong code as a weak one with a single side index."""

    n_index = 1

    def __init__(self, strong):
        self.strong = strong
        self.n = strong.n
        self.n_messages = strong.n_messages
        self.w_s = strong.w_s
        self.w_x = strong.w_x

    def encode(self, m: int, s: BinaryWord, key=0) -> tuple[BinaryWord, int]:
        return self.strong.encode(m, s, key), 1

    def decode(self, x: BinaryWord, m_a: int, key=0) -> int:
        return self.strong.decode(x, key)


def flip_word(x_c: BinaryWord, s: BinaryWord, target: int) -> BinaryWord:
    """Flip pattern bringing ``x_c`` to weight ``target`` while staying below ``s``.

    Flips go to the lowest eligible indices: zeros of ``x_c`` inside the state
    when the weight must grow, ones of ``x_c`` when it must shrink.
    """
    need = target - x_c.weight
    if need >= 0:
        eligible = [j for j, (sb, xb) in enumerate(zip(s.bits, x_c.bits)) if sb and not xb]
    else:
        eligible = [j for j, xb in enumerate(x_c.bits) if xb]
    need = abs(need)
    if len(eligible) < need:
        raise InnerEncodeFailure(f"only {len(eligible)} cells available for {need} flips",
                                 {"flips_needed": need, "eligible": len(eligible)})
    chosen = set(eligible[:need])
    return BinaryWord(tuple(1 if j in chosen else 0 for j in range(len(x_c))))


class ConstantWeightAdapter:
    """Turn a concentrated-weight WOM code into a constant-weight weak one.

    The inner code's codeword is corrected to weight ``floor(w_x n)`` by
    flipping a few bits; the flip pattern is stored as the side index through
    the bounded-weight enumeration.
    """

    def __init__(self, inner, delta=None):
        self.inner = inner
        self.n = inner.n
        self.w_s = inner.w_s
        self.w_x = inner.w_x
        self.delta = inner.delta if delta is None else delta
        self.n_messages = inner.n_messages
        self.n_index = bounded_count(self.n, self.delta)

    @property
    def target_weight(self) -> int:
        return floor_fraction(self.w_x, self.n)

    def encode(self, m: int, s: BinaryWord, key=0) -> tuple[BinaryWord, int]:
        _check_state(self, s)
        x_c = self.inner.encode(m, s, key)
        if not x_c.covered_by(s):
            raise InnerEncodeFailure("inner codeword is not below the state")
        a = flip_word(x_c, s, self.target_weight)
        if a.weight > floor_fraction(self.delta, self.n):
            raise InnerEncodeFailure(
                f"inner codeword weight {x_c.weight} is {a.weight} flips from the target",
                {"flips_needed": a.weight, "inner_weight": x_c.weight})
        return x_c ^ a, rank_bounded(a, self.delta)

    def decode(self, x: BinaryWord, m_a: int, key=0) -> int:
        a = unrank_bounded(self.n, self.delta, m_a)
        return self.inner.decode(x ^ a, key)
