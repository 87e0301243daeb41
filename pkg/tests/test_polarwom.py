import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankmod import polarwom as pw
from rankmod.errors import DimensionMismatch, EncodeFailure, NotPowerOfTwo, ParamError
from rankmod.limits import capacity_wom, entropy
from rankmod.permlib import BinaryWord

W_S, W_X = 2 / 3, 1 / 3


def kron_matrix(n):
    g2 = np.array([[1, 0], [1, 1]], dtype=np.int64)
    out = np.ones((1, 1), dtype=np.int64)
    while out.shape[0] < n:
        out = np.kron(out, g2)
    return out


# ---------------------------------------------------------------- transform


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16])
def test_transform_involution_exhaustive(n):
    words = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)
    out = pw.polar_transform(words.copy())
    assert np.array_equal(pw.polar_transform(out.copy()), words)
    assert len({w.tobytes() for w in out}) == 1 << n


def test_transform_n2():
    assert pw.polar_transform(BinaryWord((1, 0))) == BinaryWord((1, 0))
    assert pw.polar_transform(BinaryWord((0, 1))) == BinaryWord((1, 1))
    assert pw.polar_transform(BinaryWord((1, 1))) == BinaryWord((0, 1))


@given(st.lists(st.integers(0, 1), min_size=32, max_size=32))
def test_transform_matches_kron(bits):
    u = np.array(bits, dtype=np.uint8)
    assert np.array_equal(pw.polar_transform(u.copy()), (u @ kron_matrix(32)) % 2)


def test_transform_rejects_non_power_of_two():
    with pytest.raises(NotPowerOfTwo):
        pw.polar_transform(np.zeros(6, dtype=np.uint8))


# ---------------------------------------------------------------- test channel


@pytest.mark.parametrize("w_s,w_x", [(2 / 3, 1 / 3), (0.66, 0.33), (1.0, 0.5), (0.5, 0.1)])
def test_channel_normalized(w_s, w_x):
    for v in (0, 1):
        total = sum(pw.test_channel_prob(s, g, v, w_s, w_x) for s in (0, 1) for g in (0, 1))
        assert total == pytest.approx(1.0)


@pytest.mark.parametrize("w_s,w_x", [(2 / 3, 1 / 3), (0.66, 0.33), (0.5, 0.1)])
def test_channel_mutual_information(w_s, w_x):
    # I(V; S, G) with V uniform equals 1 - C_W: the rate left for the message
    info = 0.0
    for s, g in itertools.product((0, 1), repeat=2):
        py = sum(0.5 * pw.test_channel_prob(s, g, v, w_s, w_x) for v in (0, 1))
        for v in (0, 1):
            p = 0.5 * pw.test_channel_prob(s, g, v, w_s, w_x)
            if p > 0:
                info += p * math.log2(p / (0.5 * py))
    assert info == pytest.approx(1 - capacity_wom(w_s, w_x), abs=1e-12)
    assert capacity_wom(w_s, w_x) == pytest.approx(w_s * entropy(w_x / w_s))


def test_channel_llr_matches_probabilities():
    for s, g in itertools.product((0, 1), repeat=2):
        p0 = pw.test_channel_prob(s, g, 0, W_S, W_X)
        p1 = pw.test_channel_prob(s, g, 1, W_S, W_X)
        llr = float(pw.channel_llr([s], [g], W_S, W_X)[0])
        if p0 and p1:
            assert llr == pytest.approx(math.log(p0 / p1))
        else:
            assert llr == (pw.LLR_CLAMP if p0 else -pw.LLR_CLAMP)


# ---------------------------------------------------------------- frozen set


def test_frozen_n2():
    assert pw.frozen_size(2, W_S, W_X, 0.05) == 1
    assert pw.build_frozen_set(2, W_S, W_X, 0.05, trials=5000) == (1,)


def test_frozen_size_edges():
    assert pw.frozen_size(64, W_S, W_X, capacity_wom(W_S, W_X)) == 0
    assert pw.frozen_size(64, W_S, W_X, 0.0) == math.floor(64 * capacity_wom(W_S, W_X))


def test_select_frozen_ties_are_stable():
    z = np.array([0.5, 0.9, 0.5, 0.9, 0.1])
    assert pw.select_frozen(z, 3) == (1, 2, 4)


def test_bhattacharyya_range_and_ordering():
    z = pw.bhattacharyya_estimates(16, W_S, W_X, 4000, seed=1)
    assert z.shape == (16,) and np.all((z >= 0) & (z <= 1 + 1e-9))
    # the all-minus channel is the noisiest, the all-plus one the cleanest
    assert z[0] == z.max() and z[-1] == z.min()


def test_estimates_independent_of_workers():
    a = pw.bhattacharyya_estimates(32, W_S, W_X, 3000, seed=4, chunk=700)
    b = pw.bhattacharyya_estimates(32, W_S, W_X, 3000, seed=4, chunk=700, workers=3)
    assert np.array_equal(a, b)


def test_too_few_trials():
    with pytest.raises(ParamError):
        pw.build_frozen_set(16, W_S, W_X, 0.1, trials=10)


@pytest.mark.slow
def test_frozen_set_seed_stability():
    eps = 0.2 * capacity_wom(W_S, W_X)
    a = set(pw.build_frozen_set(256, W_S, W_X, eps, trials=100_000, seed=1))
    b = set(pw.build_frozen_set(256, W_S, W_X, eps, trials=100_000, seed=2))
    assert len(a & b) >= 0.9 * len(a)


def test_frozen_cache(tmp_path):
    path = tmp_path / "frozen.json"
    code = pw.PolarWomCode(64, W_S, W_X, 0.2).fit(2000, seed=3, cache=path)
    data = json.loads(path.read_text())
    (entry,) = data.values()
    assert entry["frozen"] == list(code.frozen_) and entry["params"]["seed"] == 3
    # a second fit reads the stored set instead of recomputing
    entry["frozen"] = sorted(range(64, 64 - len(code.frozen_), -1))
    path.write_text(json.dumps(data))
    again = pw.PolarWomCode(64, W_S, W_X, 0.2).fit(2000, seed=3, cache=path)
    assert again.frozen_ == tuple(entry["frozen"])


# ---------------------------------------------------------------- codec


def small_code(n=8, frozen=(1, 2, 3, 5)):
    return pw.PolarWomCode(n, W_S, W_X, capacity_wom(W_S, W_X) - len(frozen) / n - 1e-6,
                           delta=0.5, frozen=frozen)


def test_decode_golden_n8():
    code = small_code()
    g = pw.Dither(BinaryWord.from_str("01100101"))
    x = BinaryWord.from_str("11010010")
    v = np.array(x.bits) ^ np.array(g.g.bits)
    u = (v @ kron_matrix(8)) % 2
    assert list(code.decode_bits(x, g)) == [u[0], u[1], u[2], u[4]]
    assert list(code.decode_bits(x, g)) == [0, 1, 0, 1]


def test_compress_keeps_message_on_every_path():
    # with draws at 0 or 1 every non-frozen bit is forced to one branch, so
    # iterating over all draw patterns walks every SC path at n = 4
    code = small_code(4, (1, 2))
    for s in itertools.product((0, 1), repeat=4):
        for g in itertools.product((0, 1), repeat=4):
            for bits in itertools.product((0, 1), repeat=2):
                for draws in itertools.product((0.0, 1 - 1e-12), repeat=4):
                    d = pw.Dither(BinaryWord(g))
                    x = code.compress(bits, BinaryWord(s), d, draws)
                    assert tuple(code.decode_bits(x, d)) == bits


def test_message_bits_roundtrip():
    code = small_code()
    for m in range(1, code.n_messages + 1):
        assert code.message_int(code.message_bits(m)) == m
    assert list(code.message_bits(2)) == [0, 0, 0, 1]
    with pytest.raises(ParamError):
        code.message_bits(17)


def test_full_state_statistics():
    # with s all ones and w_x = 1/2 the codeword is nearly uniform noise;
    # the weight must still land near n/2
    code = pw.PolarWomCode(256, 1.0, 0.5, 0.5, delta=0.1).fit(2000, seed=0)
    s = BinaryWord.from_str("1" * 256)
    weights = []
    for key in range(40):
        m = 1 + key * 7919 % code.n_messages
        x = code.encode(m, s, key=key)
        weights.append(x.weight)
        assert code.decode(x, key=key) == m
    assert abs(np.mean(weights) - 128) < 8


def test_encode_roundtrip_and_constraints():
    code = pw.PolarWomCode(256, W_S, W_X, 0.2 * capacity_wom(W_S, W_X), delta=0.08,
                           attempts=4).fit(4000, seed=0)
    rng = np.random.default_rng(5)
    ok = 0
    for key in range(60):
        s = BinaryWord(tuple(int(b) for b in rng.random(256) < W_S))
        m = 1 + int.from_bytes(rng.bytes(32), "big") % code.n_messages
        try:
            x = code.encode(m, s, key=key)
        except EncodeFailure as e:
            assert e.violations
            continue
        ok += 1
        assert x.covered_by(s)
        assert abs(x.weight - 256 * W_X) <= 0.08 * 256
        assert code.decode(x, key=key) == m
    assert ok >= 48


def test_encode_failure_reports_violations():
    code = small_code(8, (1, 2, 3, 5))
    code.delta = 0.0
    with pytest.raises(EncodeFailure) as err:
        code.encode(1, BinaryWord.from_str("00000000"))
    assert "weight" in err.value.violations or "cells_above_state" in err.value.violations


def test_dimension_mismatch():
    code = small_code()
    with pytest.raises(DimensionMismatch):
        code.encode(1, BinaryWord.from_str("1111"))
    with pytest.raises(DimensionMismatch):
        code.decode(BinaryWord.from_str("1111"))


def test_serialization_roundtrip():
    code = small_code()
    again = pw.PolarWomCode.from_dict(json.loads(json.dumps(code.to_dict())))
    assert again.frozen_ == code.frozen_ and again.get_params() == code.get_params()


def test_dither_is_deterministic():
    a = pw.Dither.derive(64, 1, 7)
    assert a.g == pw.Dither.derive(64, 1, 7).g
    assert a.g != pw.Dither.derive(64, 1, 8).g
    assert pw.Dither.zeros(8).g.weight == 0
