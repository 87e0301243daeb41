import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankmod.cellmod import (CellState, cost_bound_check, cost_perms, cost_states, demodulate,
                             format_states, gamma, modulate, parse_states, rank_maxima)
from rankmod.errors import (DimensionMismatch, IllegalState, PreconditionViolated,
                            RankOutOfRange, SpecMismatch)
from rankmod.permlib import MsPermutation, MultisetSpec, iter_perms

S32 = list(iter_perms(MultisetSpec.uniform(3, 2)))


def perm(*inv):
    return MsPermutation.uniform(inv)


def sort_oracle(levels, q, z):
    """Rank by explicit pairwise counting rather than sorting."""
    n = len(levels)
    pos = [sum(1 for k in range(n) if (levels[k], k) < (levels[j], j)) for j in range(n)]
    for i in range(1, q):
        below = [levels[j] for j in range(n) if pos[j] == z * i - 1]
        above = [levels[j] for j in range(n) if pos[j] == z * i]
        if below == above:
            return None
    return tuple(p // z + 1 for p in pos)


def test_demod_examples():
    assert demodulate(CellState((1, 1.5, 0.3, 0.5, 2, 0.3)), 3, 2).inv == (2, 3, 1, 2, 3, 1)
    assert demodulate(CellState((0, 0, 0, 0)), 2, 2) is None
    # ranks by level: cells 2,3 lowest, then 5,1, then 4,6
    assert demodulate(CellState((5, 1, 2, 7, 3, 9)), 3, 2).inv == (2, 1, 1, 3, 2, 3)
    assert sort_oracle((5, 1, 2, 7, 3, 9), 3, 2) == (2, 1, 1, 3, 2, 3)


def test_demod_dimension():
    with pytest.raises(DimensionMismatch):
        demodulate(CellState((1, 2, 3)), 2, 2)


def test_within_rank_ties_are_legal():
    assert demodulate(CellState((1, 1, 2, 2)), 2, 2).inv == (1, 1, 2, 2)


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_demod_matches_oracle(q, z, data):
    levels = data.draw(st.lists(st.integers(0, 4), min_size=q * z, max_size=q * z))
    got = demodulate(CellState(levels), q, z)
    want = sort_oracle(levels, q, z)
    assert (got is None and want is None) or got.inv == want


def test_gamma_examples():
    x = CellState((2.7, 4, 5, 5, 6, 6))
    assert gamma(x, demodulate(x, 3, 2), 1) == 4
    y = CellState((1, 1.5, 0.3, 0.5, 2, 0.3))
    assert gamma(y, demodulate(y, 3, 2), 3) == 2
    single = CellState((3.5, 1.0))
    assert gamma(single, perm(2, 1), 2) == 3.5
    with pytest.raises(RankOutOfRange):
        gamma(x, demodulate(x, 3, 2), 4)


def test_modulate_examples():
    s = CellState((2.7, 4, 1.5, 2.5, 3.8, 0.5))
    assert modulate(perm(1, 1, 2, 2, 3, 3), s).levels == (2.7, 4, 5, 5, 6, 6)
    assert modulate(perm(1, 2), CellState.zeros(2)).levels == (0, 1)


def test_cost_examples():
    s = CellState((2.7, 4, 1.5, 2.5, 3.8, 0.5))
    assert cost_states(s, perm(1, 1, 2, 2, 3, 3)) == 2
    assert cost_perms(perm(1, 2, 1, 3, 2, 3), perm(2, 1, 3, 2, 1, 3)) == 1
    assert cost_perms(perm(3, 3, 2, 2, 1, 1), perm(1, 1, 2, 2, 3, 3)) == 2
    with pytest.raises(IllegalState):
        cost_states(CellState((0, 0, 0, 0, 0, 0)), perm(1, 1, 2, 2, 3, 3))
    with pytest.raises(SpecMismatch):
        cost_perms(perm(1, 2), perm(1, 1, 2, 2))


def test_cost_perms_zero_iff_equal():
    for a in S32:
        for b in S32:
            c = cost_perms(a, b)
            assert c >= 0
            assert (c == 0) == (a == b)


levels_s32 = st.lists(st.integers(0, 4), min_size=6, max_size=6)


@given(levels_s32, st.sampled_from(S32))
def test_modulate_properties(levels, pi):
    s = CellState(levels)
    x = modulate(pi, s)
    assert demodulate(x, 3, 2) == pi
    assert all(a >= b for a, b in zip(x.levels, s.levels))
    g = rank_maxima(x, pi)
    assert all(hi - lo >= 1 for lo, hi in zip(g, g[1:]))


@given(st.lists(st.floats(0, 100, allow_nan=False), min_size=6, max_size=6), st.sampled_from(S32))
def test_modulate_real_levels(levels, pi):
    x = modulate(pi, CellState(levels))
    assert demodulate(x, 3, 2) == pi


def test_modulate_idempotent_on_spaced_states():
    for pi in S32:
        x = modulate(pi, CellState((0.5, 2, 0, 1, 3, 7)))
        assert modulate(pi, x) == x
        assert cost_states(x, pi) == 0


def test_modulate_is_minimal():
    # every integer state on a small grid that demodulates to pi with unit
    # gaps and dominates s has a top level at least the modulated one
    grid = range(0, 6)
    for pi in [perm(1, 2, 3), perm(3, 1, 2), perm(2, 3, 1)]:
        for s in itertools.product(range(3), repeat=3):
            s = CellState(s)
            best = gamma(modulate(pi, s), pi, 3)
            for xp in itertools.product(grid, repeat=3):
                if any(a < b for a, b in zip(xp, s.levels)):
                    continue
                xp = CellState(xp)
                if demodulate(xp, 3, 1) != pi:
                    continue
                g = rank_maxima(xp, pi)
                if all(hi - lo >= 1 for lo, hi in zip(g, g[1:])):
                    assert g[-1] >= best


def test_cost_bound_examples():
    tight = CellState((0, 0, 1, 1, 2, 2))
    for pi in S32:
        rep = cost_bound_check(tight, pi)
        assert rep.tight and rep.lhs == rep.rhs
    loose = CellState((0, 0, 2, 2, 4, 4))
    reps = [cost_bound_check(loose, pi) for pi in S32]
    assert all(r.holds and not r.tight for r in reps)
    assert any(r.lhs < r.rhs for r in reps)
    same = cost_bound_check(loose, perm(1, 1, 2, 2, 3, 3))
    assert same.lhs == 0 == same.rhs
    with pytest.raises(PreconditionViolated):
        cost_bound_check(CellState((0, 0, 0.5, 0.5, 2, 2)), perm(1, 1, 2, 2, 3, 3))


@given(st.lists(st.floats(0, 20, allow_nan=False), min_size=6, max_size=6), st.sampled_from(S32),
       st.sampled_from(S32))
def test_cost_bound_on_modulated_real_states(levels, sigma, pi):
    # any state produced by modulation has unit gaps, so the check applies
    s = modulate(sigma, CellState(levels))
    rep = cost_bound_check(s, pi)
    assert rep.lhs <= rep.rhs + 1e-9
    if rep.tight:
        assert abs(rep.lhs - rep.rhs) < 1e-9


def test_state_file_roundtrip(tmp_path):
    text = "# header\n1,1.5,0.3\n\n2.7,4,5\n"
    states = parse_states(text.splitlines())
    assert [s.levels for s in states] == [(1, 1.5, 0.3), (2.7, 4, 5)]
    assert parse_states(format_states(states).splitlines()) == states


def test_state_rejects_negative():
    with pytest.raises(ValueError):
        CellState((1, -0.5))
