"""Arithmetic in GF(2^n) and the affine hash family over it.

Elements are n-bit integers; bit i is the coefficient of x^i. Bit vectors map
to field elements by reading them as big-endian integers, so the first bit of
a vector is the coefficient of x^(n-1).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeMismatch, ParamError

# degree -> irreducible modulus, including the x^n term
IRREDUCIBLE = {
    2: 0x7,        # x^2+x+1
    3: 0xB,        # x^3+x+1
    4: 0x13,       # x^4+x+1
    5: 0x25,       # x^5+x^2+1
    6: 0x43,       # x^6+x+1
    7: 0x83,       # x^7+x+1
    8: 0x11B,      # x^8+x^4+x^3+x+1 (AES)
    9: 0x211,      # x^9+x^4+1
    10: 0x409,     # x^10+x^3+1
    11: 0x805,     # x^11+x^2+1
    12: 0x1053,    # x^12+x^6+x^4+x+1
    13: 0x201B,    # x^13+x^4+x^3+x+1
    14: 0x4443,    # x^14+x^10+x^6+x+1
    15: 0x8003,    # x^15+x+1
    16: 0x1100B,   # x^16+x^12+x^3+x+1
}


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, mod: int) -> int:
    deg = mod.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= mod << (a.bit_length() - 1 - deg)
    return a


def mul(a: int, b: int, n: int) -> int:
    """Product in GF(2^n) with the tabulated modulus."""
    try:
        mod = IRREDUCIBLE[n]
    except KeyError:
        raise ParamError(f"no modulus tabulated for degree {n}") from None
    return poly_mod(clmul(a, b), mod)


@dataclass(frozen=True)
class Gf2nElement:
    value: int
    n: int

    def __post_init__(self):
        if self.n not in IRREDUCIBLE:
            raise ParamError(f"no modulus tabulated for degree {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"{self.value} is not an element of GF(2^{self.n})")

    @property
    def modulus(self) -> int:
        return IRREDUCIBLE[self.n]

    def _check(self, other):
        if other.n != self.n:
            raise DegreeMismatch(f"GF(2^{self.n}) vs GF(2^{other.n})")

    def __add__(self, other: "Gf2nElement") -> "Gf2nElement":
        self._check(other)
        return Gf2nElement(self.value ^ other.value, self.n)

    def __mul__(self, other: "Gf2nElement") -> "Gf2nElement":
        self._check(other)
        return Gf2nElement(mul(self.value, other.value, self.n), self.n)


def gf2n_mul(a: Gf2nElement, b: Gf2nElement) -> Gf2nElement:
    return a * b


def hash_eval(a: Gf2nElement, b: Gf2nElement, k: int, l: int, x: int) -> int:
    """Keep the leading ``k - l`` bits of ``a*x + b``, returned as an integer."""
    n = a.n
    if b.n != n:
        raise DegreeMismatch(f"GF(2^{a.n}) vs GF(2^{b.n})")
    if not 0 <= l <= k <= n:
        raise ParamError(f"need 0 <= l <= k <= n, got k={k} l={l} n={n}")
    y = mul(a.value, x, n) ^ b.value
    return y >> (n - (k - l))


def index_to_pair(m_a: int, n: int) -> tuple[Gf2nElement, Gf2nElement]:
    """Map a 1-based hash index in [2^(2n)] to its coefficient pair (a, b)."""
    if not 1 <= m_a <= 1 << (2 * n):
        raise ParamError(f"hash index {m_a} outside [1, 2^{2 * n}]")
    v = m_a - 1
    return Gf2nElement(v >> n, n), Gf2nElement(v & ((1 << n) - 1), n)


def pair_to_index(a: Gf2nElement, b: Gf2nElement) -> int:
    return (a.value << a.n | b.value) + 1
