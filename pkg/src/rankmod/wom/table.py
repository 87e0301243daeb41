"""Table-driven constant-weight strong WOM codes."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from ..errors import EncodeFailure, NotAPartition
from ..permlib import BinaryWord, floor_fraction, theta, theta_inv

# five messages, each a perfect matching of the six cells
EXAMPLE_TABLE: dict[int, tuple[frozenset[int], ...]] = {
    1: (frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 6})),
    2: (frozenset({1, 3}), frozenset({2, 6}), frozenset({4, 5})),
    3: (frozenset({1, 4}), frozenset({2, 5}), frozenset({3, 6})),
    4: (frozenset({1, 5}), frozenset({2, 3}), frozenset({4, 6})),
    5: (frozenset({1, 6}), frozenset({2, 4}), frozenset({3, 5})),
}


class TableWomCode:
    """Strong WOM code given by an explicit message -> codeword-sets table.

    Encoding picks the lexicographically smallest table entry contained in the
    state support.
    """

    def __init__(self, n: int, table: Mapping[int, Sequence], w_s=None, w_x=None):
        self.n = n
        self.table = {int(m): tuple(sorted((frozenset(c) for c in sets), key=sorted))
                      for m, sets in table.items()}
        self.n_messages = len(self.table)
        if sorted(self.table) != list(range(1, self.n_messages + 1)):
            raise NotAPartition("messages must be 1..K")
        sizes = {len(c) for sets in self.table.values() for c in sets}
        if len(sizes) != 1:
            raise NotAPartition(f"codewords have mixed weights {sorted(sizes)}")
        self.weight = sizes.pop()
        self.w_x = Fraction(self.weight, n) if w_x is None else w_x
        self.w_s = Fraction(2 * self.weight, n) if w_s is None else w_s
        self._decode = {}
        for m, sets in self.table.items():
            for c in sets:
                if c in self._decode:
                    raise NotAPartition(f"codeword {sorted(c)} appears twice")
                self._decode[c] = m

    def encode_set(self, m: int, U) -> frozenset[int]:
        U = frozenset(U)
        for c in self.table[m]:
            if c <= U:
                return c
        raise EncodeFailure(f"no codeword of message {m} inside {sorted(U)}",
                            {"message": m, "state": sorted(U)})

    def decode_set(self, cells) -> int:
        try:
            return self._decode[frozenset(cells)]
        except KeyError:
            raise ValueError(f"{sorted(cells)} is not a codeword") from None

    def encode(self, m: int, s: BinaryWord, key=0) -> BinaryWord:
        return theta(self.encode_set(m, theta_inv(s)), self.n)

    def decode(self, x: BinaryWord, key=0) -> int:
        return self.decode_set(theta_inv(x))

    @property
    def state_weight(self) -> int:
        return floor_fraction(self.w_s, self.n)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "w_s": str(self.w_s), "w_x": str(self.w_x),
                           "table": {str(m): [sorted(c) for c in sets]
                                     for m, sets in self.table.items()}})

    @classmethod
    def from_json(cls, text: str) -> "TableWomCode":
        d = json.loads(text)
        return cls(d["n"], {int(m): v for m, v in d["table"].items()},
                   Fraction(d["w_s"]), Fraction(d["w_x"]))

    @classmethod
    def load(cls, path: str | Path) -> "TableWomCode":
        return cls.from_json(Path(path).read_text())


EXAMPLE_CODE = TableWomCode(6, EXAMPLE_TABLE, Fraction(2, 3), Fraction(1, 3))


def example_wom_encode(m: int, U) -> frozenset[int]:
    """Pick two cells of the four-cell set ``U`` that represent ``m`` in [5]."""
    if len(set(U)) != 4:
        raise ValueError(f"state must contain four cells, got {sorted(U)}")
    return EXAMPLE_CODE.encode_set(m, U)


def example_wom_decode(pair) -> int:
    return EXAMPLE_CODE.decode_set(pair)
