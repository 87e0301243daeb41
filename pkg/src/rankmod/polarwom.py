"""Polar-code WOM codec built on lossy compression of (state, dither) pairs.

The encoder treats ``y_j = (s_j, g_j)`` as the output of a binary test channel
and compresses it with randomized successive cancellation (SC); the message
sits on the least reliable synthetic channels, and decoding is one polar
transform. Encoding succeeds only with high probability.

Bit conventions: index sets are 1-based, the transform is ``u G2^{(x)m}``
with no bit reversal, and log-likelihood ratios are ``ln W(y|0)/W(y|1)``.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, EncodeFailure, NotPowerOfTwo, ParamError
from .limits import capacity_wom
from .permlib import BinaryWord

LLR_CLAMP = 40.0


def _check_pow2(n: int):
    if n < 1 or n & (n - 1):
        raise NotPowerOfTwo(f"block length {n} is not a power of two")


def polar_transform(u):
    """Return ``u G2^{(x)log n}`` over GF(2); works on the last axis.

    Accepts a BinaryWord (and returns one) or an integer array of 0/1.
    """
    word = isinstance(u, BinaryWord)
    x = np.array(u.bits if word else u, dtype=np.uint8)
    n = x.shape[-1]
    _check_pow2(n)
    h = 1
    while h < n:
        # (a, b) -> (a ^ b, b) on every pair of adjacent h-blocks
        v = x.reshape(*x.shape[:-1], n // (2 * h), 2, h)
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return BinaryWord(tuple(int(b) for b in x)) if word else x


def test_channel_prob(s: int, g: int, v: int, w_s: float, w_x: float) -> float:
    """Transition probability W(s, g | v) of the test channel, with x = g xor v."""
    x = g ^ v
    return {(1, 0): w_s - w_x, (1, 1): w_x, (0, 0): 1 - w_s, (0, 1): 0.0}[(s, x)]


test_channel_prob.__test__ = False  # not a pytest test despite the name


def channel_llr(s, g, w_s: float, w_x: float) -> np.ndarray:
    """Per-cell LLRs of the test channel for outputs ``(s, g)``."""
    s = np.asarray(s, dtype=np.uint8)
    g = np.asarray(g, dtype=np.uint8)
    if w_x <= 0 or w_s - w_x <= 0:
        inner = LLR_CLAMP if w_x <= 0 else -LLR_CLAMP
    else:
        inner = float(np.clip(math.log((w_s - w_x) / w_x), -LLR_CLAMP, LLR_CLAMP))
    mag = np.where(s == 1, inner, LLR_CLAMP)
    return np.where(g == 0, mag, -mag)


def _f(a, b):
    return np.clip(np.logaddexp(0.0, a + b) - np.logaddexp(a, b), -LLR_CLAMP, LLR_CLAMP)


def _g(a, b, p):
    return np.clip(b + (1.0 - 2.0 * p) * a, -LLR_CLAMP, LLR_CLAMP)


def successive_cancellation(llr: np.ndarray, decide) -> np.ndarray:
    """Run SC over a batch of channel LLRs, shape ``(batch, n)``.

    ``decide(i, l)`` receives the 0-based index and the batch of synthetic
    channel LLRs at that index and returns the chosen bits. Returns ``u_hat``.
    """
    llr = np.atleast_2d(np.asarray(llr, dtype=float))
    _check_pow2(llr.shape[1])
    u = np.zeros(llr.shape, dtype=np.uint8)

    def rec(L, lo):
        n = L.shape[1]
        if n == 1:
            bit = np.asarray(decide(lo, L[:, 0]), dtype=np.uint8)
            u[:, lo] = bit
            return bit[:, None]
        h = n // 2
        xa = rec(_f(L[:, :h], L[:, h:]), lo)
        xb = rec(_g(L[:, :h], L[:, h:], xa), lo + h)
        return np.concatenate([xa ^ xb, xb], axis=1)

    rec(llr, 0)
    return u


def _sample_outputs(rng: np.random.Generator, trials: int, n: int, w_s: float, w_x: float):
    """Draw (u, s, g) with u uniform and (s, g) from the test channel."""
    r = rng.random((trials, n))
    s = (r < w_s).astype(np.uint8)
    x = (r < w_x).astype(np.uint8)
    v = rng.integers(0, 2, size=(trials, n), dtype=np.uint8)
    g = x ^ v
    return polar_transform(v), s, g


def bhattacharyya_estimates(n: int, w_s: float, w_x: float, trials: int, seed=0,
                            chunk: int = 4096, workers: int = 1) -> np.ndarray:
    """Monte-Carlo Bhattacharyya parameters of the n synthetic channels.

    Genie-aided SC: the true ``u`` is fed back, and each channel's estimate
    is the mean of ``sqrt(W(y|1-u)/W(y|u))``. Chunks get independent seed
    streams and are summed in chunk order, so the result does not depend on
    ``workers``.
    """
    _check_pow2(n)
    sizes = [min(chunk, trials - k) for k in range(0, trials, chunk)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(job):
        size, ss = job
        u, s, g = _sample_outputs(np.random.Generator(np.random.Philox(ss)), size, n, w_s, w_x)
        z = np.zeros(n)

        def genie(i, l):
            z[i] = np.exp(-(1.0 - 2.0 * u[:, i]) * l / 2.0).sum()
            return u[:, i]

        successive_cancellation(channel_llr(s, g, w_s, w_x), genie)
        return z

    jobs = list(zip(sizes, seeds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    return np.sum(parts, axis=0) / trials


def frozen_size(n: int, w_s: float, w_x: float, eps_c: float) -> int:
    rate = capacity_wom(w_s, w_x) - eps_c
    return max(0, math.floor(n * rate + 1e-9))


def select_frozen(z: np.ndarray, size: int) -> tuple[int, ...]:
    """The ``size`` least reliable channels (ties to the lower index), 1-based."""
    order = np.argsort(-np.asarray(z), kind="stable")
    return tuple(sorted(int(i) + 1 for i in order[:size]))


def build_frozen_set(n: int, w_s: float, w_x: float, eps_c: float, trials: int = 10_000,
                     seed=0, workers: int = 1) -> tuple[int, ...]:
    if trials < 1000:
        raise ParamError("frozen-set estimation needs at least 1000 trials")
    size = frozen_size(n, w_s, w_x, eps_c)
    if size == 0:
        return ()
    return select_frozen(bhattacharyya_estimates(n, w_s, w_x, trials, seed, workers=workers), size)


def _philox(*words: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(w) for w in words])))


@dataclass(frozen=True)
class Dither:
    """Uniform word shared by encoder and decoder, derived from (seed, address)."""

    g: BinaryWord

    @classmethod
    def derive(cls, n: int, seed: int, address: int = 0) -> "Dither":
        bits = _philox(0xD1, seed, address).integers(0, 2, size=n)
        return cls(BinaryWord(tuple(int(b) for b in bits)))

    @classmethod
    def zeros(cls, n: int) -> "Dither":
        return cls(BinaryWord.zeros(n))


class FrozenSetCache:
    """JSON file mapping a parameter fingerprint to a frozen index list."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    @staticmethod
    def key(params: dict) -> str:
        blob = json.dumps(params, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def _load(self) -> dict:
        if self.path.exists():
            return json.loads(self.path.read_text())
        return {}

    def get(self, params: dict):
        hit = self._load().get(self.key(params))
        return None if hit is None else tuple(hit["frozen"])

    def put(self, params: dict, frozen) -> None:
        data = self._load()
        data[self.key(params)] = {"params": params, "frozen": list(frozen)}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(data, indent=1, sort_keys=True))


class PolarWomCode:
    """Concentrated-weight WOM code from randomized SC compression.

    Follows the estimator pattern for its one learned quantity: ``fit``
    estimates the frozen set and stores it in ``frozen_``. Messages are
    integers in ``[1, 2^|F|]``; bit ``k`` (most significant first) of
    ``m - 1`` is written on the k-th frozen index.
    """

    def __init__(self, n: int, w_s: float, w_x: float, eps_c: float, delta: float = 0.05,
                 dither_seed: int = 0, attempts: int = 1, frozen=None):
        _check_pow2(n)
        if not 0 <= w_x <= w_s <= 1:
            raise ParamError("need 0 <= w_x <= w_s <= 1")
        self.n = n
        self.w_s = w_s
        self.w_x = w_x
        self.eps_c = eps_c
        self.delta = delta
        self.dither_seed = dither_seed
        self.attempts = attempts
        if frozen is not None:
            self._set_frozen(frozen)

    def get_params(self) -> dict:
        return {"n": self.n, "w_s": self.w_s, "w_x": self.w_x, "eps_c": self.eps_c,
                "delta": self.delta, "dither_seed": self.dither_seed,
                "attempts": self.attempts}

    def _set_frozen(self, frozen):
        frozen = tuple(sorted(int(i) for i in frozen))
        want = frozen_size(self.n, self.w_s, self.w_x, self.eps_c)
        if len(frozen) != want or len(set(frozen)) != want or \
                any(not 1 <= i <= self.n for i in frozen):
            raise ParamError(f"frozen set must hold {want} distinct indices in [1, {self.n}]")
        self.frozen_ = frozen
        self._frozen0 = np.array([i - 1 for i in frozen], dtype=np.int64)

    def fit(self, trials: int = 10_000, seed=0, cache: str | Path | None = None,
            workers: int = 1) -> "PolarWomCode":
        key = {"n": self.n, "w_s": self.w_s, "w_x": self.w_x, "eps_c": self.eps_c,
               "trials": trials, "seed": seed}
        store = FrozenSetCache(cache) if cache else None
        frozen = store.get(key) if store else None
        if frozen is None:
            frozen = build_frozen_set(self.n, self.w_s, self.w_x, self.eps_c, trials, seed,
                                      workers)
            if store:
                store.put(key, frozen)
        self._set_frozen(frozen)
        return self

    @property
    def n_messages(self) -> int:
        return 1 << len(self.frozen_)

    @property
    def rate(self) -> float:
        return len(self.frozen_) / self.n

    def message_bits(self, m: int) -> np.ndarray:
        k = len(self.frozen_)
        if not 1 <= m <= 1 << k:
            raise ParamError(f"message {m} outside [1, 2^{k}]")
        return np.array([(m - 1) >> (k - 1 - j) & 1 for j in range(k)], dtype=np.uint8)

    def message_int(self, bits) -> int:
        v = 0
        for b in bits:
            v = 2 * v + int(b)
        return v + 1

    def dither(self, key=0) -> Dither:
        return Dither.derive(self.n, self.dither_seed, int(key))

    def compress(self, bits, s: BinaryWord, g: Dither, uniforms) -> BinaryWord:
        """One SC pass; returns ``x`` without checking the WOM constraints.

        ``uniforms`` supplies the n draws in [0, 1); a non-frozen bit becomes 1
        when its draw falls below ``1 / (L + 1)``.
        """
        if len(s) != self.n or len(g.g) != self.n:
            raise DimensionMismatch(f"state and dither must have length {self.n}")
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != (len(self.frozen_),):
            raise DimensionMismatch(f"need {len(self.frozen_)} message bits, got {bits.shape}")
        fixed = dict(zip(self._frozen0.tolist(), bits.tolist()))
        uniforms = np.asarray(uniforms, dtype=float)

        def decide(i, l):
            if i in fixed:
                return np.array([fixed[i]])
            p_one = 1.0 / (np.exp(l) + 1.0)
            return (uniforms[i] < p_one).astype(np.uint8)

        llr = channel_llr(s.bits, g.g.bits, self.w_s, self.w_x)
        u = successive_cancellation(llr[None, :], decide)[0]
        x = polar_transform(u) ^ np.array(g.g.bits, dtype=np.uint8)
        return BinaryWord(tuple(int(b) for b in x))

    def violations(self, x: BinaryWord, s: BinaryWord) -> dict:
        out = {}
        above = sum(1 for xb, sb in zip(x.bits, s.bits) if xb and not sb)
        if above:
            out["cells_above_state"] = above
        if abs(x.weight / self.n - self.w_x) > self.delta + 1e-12:
            out["weight"] = x.weight
        return out

    def encode_bits(self, bits, s: BinaryWord, g: Dither, seed=0) -> BinaryWord:
        bad = {}
        for attempt in range(self.attempts):
            uniforms = _philox(0x5C, seed, attempt).random(self.n)
            x = self.compress(bits, s, g, uniforms)
            bad = self.violations(x, s)
            if not bad:
                return x
        raise EncodeFailure(f"polar encoder failed after {self.attempts} attempt(s): {bad}", bad)

    def decode_bits(self, x: BinaryWord, g: Dither) -> np.ndarray:
        if len(x) != self.n:
            raise DimensionMismatch(f"word length {len(x)}, expected {self.n}")
        v = np.array(x.bits, dtype=np.uint8) ^ np.array(g.g.bits, dtype=np.uint8)
        return polar_transform(v)[self._frozen0]

    def encode(self, m: int, s: BinaryWord, key=0, seed=None) -> BinaryWord:
        """Integer-message interface; ``key`` selects the dither (the cell address)."""
        seed = int(key) if seed is None else seed
        return self.encode_bits(self.message_bits(m), s, self.dither(key), seed)

    def decode(self, x: BinaryWord, key=0) -> int:
        return self.message_int(self.decode_bits(x, self.dither(key)))

    def to_dict(self) -> dict:
        return {**self.get_params(), "frozen": list(self.frozen_)}

    @classmethod
    def from_dict(cls, d: dict) -> "PolarWomCode":
        d = dict(d)
        frozen = d.pop("frozen")
        return cls(**d, frozen=frozen)


@dataclass(frozen=True)
class PolarParams:
    n: int
    w_s: float
    w_x: float
    eps_c: float
    delta: float = 0.05

    @property
    def frozen_size(self) -> int:
        return frozen_size(self.n, self.w_s, self.w_x, self.eps_c)

    def to_dict(self) -> dict:
        return asdict(self)
