"""A small deterministic concentrated-weight WOM code.

The message is the sum of the codeword's support indices modulo ``modulus``.
Codeword weight wanders inside the allowed band depending on the message and
state, which makes it a convenient stand-in for a randomized inner code when
exercising the weight-correcting adapter. Rate is low; this is a test vehicle,
not a capacity-approaching code.
"""

from __future__ import annotations

import itertools

from ..errors import InnerEncodeFailure
from ..permlib import BinaryWord, floor_fraction, theta, theta_inv


class ChecksumWomCode:
    def __init__(self, n: int, w_s, w_x, delta, modulus: int = 8):
        self.n = n
        self.w_s = w_s
        self.w_x = w_x
        self.delta = delta
        self.n_messages = modulus

    def _weights(self, m: int, support: tuple[int, ...], key) -> list[int]:
        target = floor_fraction(self.w_x, self.n)
        band = floor_fraction(self.delta, self.n)
        lo, hi = max(0, target - band), min(len(support), target + band)
        span = list(range(lo, hi + 1))
        start = (m + sum(support) + int(key)) % len(span)
        return span[start:] + span[:start]

    def encode(self, m: int, s: BinaryWord, key=0) -> BinaryWord:
        support = tuple(sorted(theta_inv(s)))
        want = (m - 1) % self.n_messages
        for w in self._weights(m, support, key):
            for combo in itertools.combinations(support, w):
                if sum(combo) % self.n_messages == want:
                    return theta(combo, self.n)
        raise InnerEncodeFailure(f"no codeword for message {m}", {"message": m})

    def decode(self, x: BinaryWord, key=0) -> int:
        return sum(theta_inv(x)) % self.n_messages + 1
