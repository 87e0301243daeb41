"""Flash-lifetime simulation: how many rewrites fit below a level ceiling.

A block starts erased (all levels 0), receives the scheme's initial
permutation, and is then rewritten with uniformly random messages. Every
write raises levels as little as possible; the block is full once a write
would push the top level above ``max_level``.
"""

from __future__ import annotations

import csv
import json
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cellmod import CellState, cost_states, gamma, modulate
from .errors import ConfigError, RewriteFailure
from .presets import build_scheme, get_preset

SCHEMA = 1


@dataclass(frozen=True)
class SimConfig:
    preset: dict
    max_level: float | None = None
    headroom: float | None = None  # alternative to max_level: ceiling = first top + headroom
    trials: int = 100
    seed: int = 0
    max_writes: int = 10_000
    max_failures: int = 100
    workers: int = 1

    def __post_init__(self):
        if (self.max_level is None) == (self.headroom is None):
            raise ConfigError("give exactly one of max_level and headroom")
        q = int(self.preset.get("q", 0))
        if self.max_level is not None and self.max_level < q - 1:
            raise ConfigError(f"max_level {self.max_level} is below q-1 = {q - 1}; "
                              "not even the first write fits")
        if self.headroom is not None and self.headroom < 0:
            raise ConfigError("headroom must be non-negative")
        if self.trials < 1:
            raise ConfigError("trials must be positive")


@dataclass
class TrialResult:
    writes: int
    first_top: float
    costs: list[float] = field(default_factory=list)
    failures: int = 0


@dataclass
class SimReport:
    preset: str
    q: int
    z: int
    r: int
    n_messages: int
    max_level_rule: str
    trials: list[TrialResult]

    @property
    def writes(self) -> list[int]:
        return [t.writes for t in self.trials]

    @property
    def cost_histogram(self) -> dict[str, int]:
        c = Counter(_fmt(v) for t in self.trials for v in t.costs)
        return dict(sorted(c.items(), key=lambda kv: float(kv[0])))

    @property
    def max_cost(self) -> float:
        return max((v for t in self.trials for v in t.costs), default=0.0)

    def to_dict(self) -> dict:
        w = self.writes
        bits = math.log2(self.n_messages)
        n = self.q * self.z
        return {
            "schema": SCHEMA,
            "preset": self.preset,
            "q": self.q, "z": self.z, "r": self.r,
            "n_messages": str(self.n_messages),
            "ceiling": self.max_level_rule,
            "trials": len(w),
            "writes": w,
            "writes_mean": float(np.mean(w)),
            "writes_min": min(w),
            "writes_max": max(w),
            # the initial write counts toward the data stored over the block's life
            "bits_per_cell": float(np.mean([(k + 1) * bits / n for k in w])),
            "cost_histogram": self.cost_histogram,
            "max_cost": self.max_cost,
            "encode_failures": sum(t.failures for t in self.trials),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def write_costs_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["trial", "write", "cost"])
            for i, t in enumerate(self.trials, 1):
                for k, c in enumerate(t.costs, 1):
                    out.writerow([i, k, _fmt(c)])


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _top(x: CellState, perm) -> float:
    return gamma(x, perm, perm.q)


def run_trial(scheme, seed_words, max_level=None, headroom=None, max_writes=10_000,
              max_failures=100) -> TrialResult:
    rng = random.Random(int.from_bytes(np.asarray(seed_words, dtype=np.uint32).tobytes(), "little"))
    sigma = scheme.initial_perm()
    x = modulate(sigma, CellState.zeros(scheme.n))
    first_top = _top(x, sigma)
    ceiling = first_top + headroom if max_level is None else max_level
    result = TrialResult(0, first_top)
    if first_top > ceiling:
        return result
    key = 0
    while result.writes < max_writes:
        key += 1
        m = rng.randint(1, scheme.n_messages)
        try:
            pi = scheme.encode(m, sigma, key=key)
        except RewriteFailure:
            result.failures += 1
            if result.failures >= max_failures:
                break
            continue
        if scheme.join_message(scheme.decode(pi, key=key)) != m:
            raise AssertionError(f"write {key} did not decode to its message")
        cost = cost_states(x, pi)
        x_new = modulate(pi, x)
        if _top(x_new, pi) > ceiling:
            break
        result.writes += 1
        result.costs.append(cost)
        x, sigma = x_new, pi
    return result


def _worker(args):
    preset, seed_words, cfg = args
    scheme = build_scheme(preset)
    return run_trial(scheme, seed_words, cfg.max_level, cfg.headroom, cfg.max_writes,
                     cfg.max_failures)


def simulate(cfg: SimConfig) -> SimReport:
    """Run ``cfg.trials`` independent block lifetimes; deterministic given the seed."""
    scheme = build_scheme(cfg.preset)
    seeds = [s.generate_state(4) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            trials = list(pool.map(_worker, [(cfg.preset, s, cfg) for s in seeds]))
    else:
        trials = [run_trial(scheme, s, cfg.max_level, cfg.headroom, cfg.max_writes,
                            cfg.max_failures) for s in seeds]
    rule = (f"first_top + {_fmt(cfg.headroom)}" if cfg.max_level is None
            else _fmt(cfg.max_level))
    return SimReport(cfg.preset.get("id", "custom"), scheme.q, scheme.z, scheme.r,
                     scheme.n_messages, rule, trials)


def simulate_preset(name: str, **kw) -> SimReport:
    return simulate(SimConfig(get_preset(name), **kw))
