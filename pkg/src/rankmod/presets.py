"""Named scheme presets and their JSON form.

A preset is a plain dict::

    {"id": ..., "construction": "example" | "strong" | "weak" | "concat",
     "q": ..., "z": ... (strong) or "z_w": ... (weak/concat), "r": ...,
     "ingredient": {"type": "table" | "checksum" | "polar" | "hash", ...}}

Weight fractions may be given as strings such as ``"2/3"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError
from .polarwom import PolarWomCode
from .rmcodes import (ConcatWomRewriteCode, ExampleRewriteCode, StrongWomRewriteCode,
                      WeakWomRewriteCode)
from .wom.adapter import ConstantWeightAdapter
from .wom.checksum import ChecksumWomCode
from .wom.hashwom import HashWomCode, HashWomParams
from .wom.table import EXAMPLE_CODE, EXAMPLE_TABLE, TableWomCode

PRESETS: dict[str, dict] = {
    "q3z2r1-example": {"construction": "example", "q": 3, "z": 2, "r": 1},
    "q3z2r1-table": {"construction": "strong", "q": 3, "z": 2, "r": 1,
                     "ingredient": {"type": "table"}},
    "q3z2-uncoded": {"construction": "strong", "q": 3, "z": 2, "r": 2},
    "q4zw6r1-checksum": {"construction": "weak", "q": 4, "z_w": 6, "r": 1,
                         "ingredient": {"type": "checksum", "delta": "1/8", "modulus": 8}},
    "q4zw16r1-polar": {"construction": "weak", "q": 4, "z_w": 16, "r": 1,
                       "ingredient": {"type": "polar", "rate_fraction": 0.5, "delta": 0.1,
                                      "trials": 4000, "seed": 0}},
    "q3zw2r1-hash": {"construction": "concat", "q": 3, "z_w": 2, "r": 1,
                     "ingredient": {"type": "hash", "t1": 1, "t2": 2, "k": 1, "l": 0}},
}


def _frac(v) -> Fraction:
    return Fraction(v)


def get_preset(name: str) -> dict:
    try:
        return {"id": name, **PRESETS[name]}
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None


def load_preset(path: str | Path) -> dict:
    d = json.loads(Path(path).read_text())
    d.setdefault("id", Path(path).stem)
    return d


def _ingredient(spec: dict, n: int, w_s: Fraction, w_x: Fraction, cache=None):
    kind = spec.get("type")
    if kind == "table":
        if "table" not in spec:
            if n != 6:
                raise ConfigError("the built-in table code has length 6")
            return EXAMPLE_CODE
        return TableWomCode(n, {int(k): v for k, v in spec["table"].items()}, w_s, w_x)
    if kind == "checksum":
        inner = ChecksumWomCode(n, w_s, w_x, _frac(spec["delta"]), int(spec.get("modulus", 8)))
        return ConstantWeightAdapter(inner)
    if kind == "polar":
        from .limits import capacity_wom
        cw = capacity_wom(float(w_s), float(w_x))
        eps = cw * (1 - float(spec.get("rate_fraction", 0.5)))
        code = PolarWomCode(n, float(w_s), float(w_x), eps, float(spec.get("delta", 0.1)),
                            dither_seed=int(spec.get("dither_seed", 0)),
                            attempts=int(spec.get("attempts", 4)))
        if "frozen" in spec:
            code._set_frozen(spec["frozen"])
        else:
            code.fit(int(spec.get("trials", 4000)), int(spec.get("seed", 0)), cache=cache)
        return ConstantWeightAdapter(code)
    if kind == "hash":
        p = HashWomParams(n, int(spec["t1"]), int(spec["t2"]), int(spec["k"]), int(spec["l"]),
                          w_s, w_x)
        return HashWomCode(p)
    raise ConfigError(f"unknown ingredient type {kind!r}")


def build_scheme(preset: dict, cache=None):
    """Assemble the rewriting code described by ``preset``."""
    try:
        kind = preset["construction"]
        q, r = int(preset["q"]), int(preset["r"])
        w_s, w_x = Fraction(r + 1, q), Fraction(1, q)
        if kind == "example":
            return ExampleRewriteCode()
        if kind == "strong":
            z = int(preset["z"])
            ing = preset.get("ingredient")
            wom = _ingredient(ing, q * z, w_s, w_x, cache) if ing else None
            return StrongWomRewriteCode(q, z, r, wom)
        if kind in ("weak", "concat"):
            z_w = int(preset["z_w"])
            wom = _ingredient(preset["ingredient"], q * z_w, w_s, w_x, cache)
            cls = WeakWomRewriteCode if kind == "weak" else ConcatWomRewriteCode
            return cls(q, z_w, r, wom)
    except KeyError as e:
        raise ConfigError(f"preset is missing field {e}") from None
    raise ConfigError(f"unknown construction {kind!r}")


__all__ = ["PRESETS", "EXAMPLE_TABLE", "build_scheme", "get_preset", "load_preset"]
