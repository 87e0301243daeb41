"""Rank-modulation rewriting codes for flash memories."""

from .cellmod import (CellState, cost_bound_check, cost_perms, cost_states, demodulate, gamma,
                      modulate)
from .errors import EncodeFailure, RankModError, RewriteFailure
from .limits import ball_size, capacity_rm, capacity_wom
from .permlib import (BinaryWord, MsPermutation, MultisetSpec, count_perms, rank_bounded,
                      rank_perm, rank_union, theta, theta_inv, unrank_bounded, unrank_perm)
from .polarwom import PolarWomCode, polar_transform
from .presets import build_scheme, get_preset
from .rmcodes import (ConcatWomRewriteCode, ExampleRewriteCode, StrongWomRewriteCode,
                      WeakWomRewriteCode, a_min)
from .sim import SimConfig, simulate

__version__ = "0.1.0"

__all__ = [
    "BinaryWord", "CellState", "ConcatWomRewriteCode", "EncodeFailure", "ExampleRewriteCode",
    "MsPermutation", "MultisetSpec", "PolarWomCode", "RankModError", "RewriteFailure",
    "SimConfig", "StrongWomRewriteCode", "WeakWomRewriteCode", "a_min", "ball_size",
    "build_scheme", "capacity_rm", "capacity_wom", "cost_bound_check", "cost_perms",
    "cost_states", "count_perms", "demodulate", "gamma", "get_preset", "modulate",
    "polar_transform", "rank_bounded", "rank_perm", "rank_union", "simulate", "theta",
    "theta_inv", "unrank_bounded", "unrank_perm",
]
