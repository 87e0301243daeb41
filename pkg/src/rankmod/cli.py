"""Command-line front end.

Exit status is 0 on success, 1 on a domain error (one-line diagnostic on
stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cellmod, limits
from .errors import RankModError
from .permlib import MsPermutation
from .presets import PRESETS, build_scheme, get_preset, load_preset
from .sim import SimConfig, simulate


def _perm(text: str, q: int | None = None) -> MsPermutation:
    text = Path(text).read_text().strip().splitlines()[0] if Path(text).is_file() else text
    return MsPermutation.uniform([int(v) for v in text.split(",")], q)


def _emit(args, payload: dict, text: str):
    print(json.dumps(payload, sort_keys=True) if args.json else text)


def _scheme(args):
    preset = load_preset(args.preset_file) if args.preset_file else get_preset(args.preset)
    return build_scheme(preset, cache=args.cache), preset


def cmd_demod(args):
    rows = []
    for x in cellmod.read_states(args.states):
        p = cellmod.demodulate(x, args.q, args.z)
        rows.append("F" if p is None else str(p))
    _emit(args, {"perms": rows}, "\n".join(rows))


def cmd_modulate(args):
    pi = _perm(args.perm)
    out = [cellmod.modulate(pi, s) for s in cellmod.read_states(args.states)]
    _emit(args, {"states": [list(x.levels) for x in out]}, cellmod.format_states(out).rstrip("\n"))


def cmd_cost(args):
    pi = _perm(args.perm)
    rows = []
    for s in cellmod.read_states(args.states):
        sigma = cellmod.demodulate(s, pi.q, pi.n // pi.q)
        if sigma is None:
            raise RankModError("state does not demodulate to a permutation")
        rows.append({"cost_states": cellmod.cost_states(s, pi),
                     "cost_perms": cellmod.cost_perms(sigma, pi)})
    _emit(args, {"costs": rows},
          "\n".join(f"{cellmod._fmt(r['cost_states'])} {r['cost_perms']}" for r in rows))


def cmd_ball(args):
    size = limits.ball_size(args.q, args.z, args.r)
    payload = {"q": args.q, "z": args.z, "r": args.r, "ball_size": str(size)}
    text = str(size)
    if args.verify:
        counts = limits.ball_counts_all_centers(args.q, args.z, args.r)
        enumerated = counts.pop() if len(counts) == 1 else None
        payload["enumerated"] = None if enumerated is None else str(enumerated)
        payload["match"] = enumerated == size
        text = f"{size} (closed form) == {enumerated} (enumerated)" if enumerated == size \
            else f"{size} (closed form) != {sorted(counts | {enumerated})} (enumerated)"
        if enumerated != size:
            _emit(args, payload, text)
            return 1
    _emit(args, payload, text)


def cmd_capacity(args):
    c_r = limits.capacity_rm(args.r)
    payload = {"r": args.r, "C_R": c_r}
    lines = [f"C_R = {c_r}"]
    if args.q is not None and args.z is not None:
        rep = limits.capacity_report(args.q, args.z, args.r)
        payload.update(rep.to_dict())
        lines += [f"ball size = {rep.ball_size}", f"rate bound = {rep.rate_bound:.6f}",
                  f"C_W = {rep.c_w:.6f}"]
    _emit(args, payload, "\n".join(lines))


def cmd_encode(args):
    scheme, preset = _scheme(args)
    sigma = _perm(args.state, scheme.q) if args.state else scheme.initial_perm()
    m = [int(v) for v in args.message.split(",")]
    pi = scheme.encode(m[0] if len(m) == 1 else m, sigma, key=args.key)
    _emit(args, {"preset": preset["id"], "perm": list(pi.inv),
                 "cost": (c := cellmod.cost_perms(sigma, pi))},
          str(pi) if not args.verbose else f"{pi}  (cost {c})")


def cmd_decode(args):
    scheme, preset = _scheme(args)
    pi = _perm(args.perm, scheme.q)
    parts = scheme.decode(pi, key=args.key)
    m = scheme.join_message(parts)
    _emit(args, {"preset": preset["id"], "message": str(m), "parts": [str(p) for p in parts]},
          f"{m}" if not args.verbose else f"{m}  parts={','.join(map(str, parts))}")


def cmd_oracle(args):
    if args.what == "wom":
        from .wom.table import EXAMPLE_CODE, TableWomCode
        code = TableWomCode.load(args.table) if args.table else EXAMPLE_CODE
        ok = limits.strong_wom_oracle(code.n, code.n_messages, code.w_s, code.w_x, code.table)
        _emit(args, {"valid": ok}, "valid" if ok else "invalid")
    elif args.what == "ball":
        size = limits.ball_size(args.q, args.z, args.r)
        counts = limits.ball_counts_all_centers(args.q, args.z, args.r)
        ok = counts == {size}
        _emit(args, {"valid": ok, "closed_form": str(size), "enumerated": sorted(map(str, counts))},
              "valid" if ok else f"invalid: {sorted(counts)} vs {size}")
    else:
        import random
        scheme, _ = _scheme(args)
        rng = random.Random(args.seed)
        sigma = scheme.initial_perm()
        worst, failures = 0, 0
        for k in range(1, args.trials + 1):
            m = rng.randint(1, scheme.n_messages)
            try:
                pi = scheme.encode(m, sigma, key=k)
            except RankModError:
                failures += 1
                continue
            if scheme.join_message(scheme.decode(pi, key=k)) != m:
                _emit(args, {"valid": False, "trial": k}, f"invalid: roundtrip failed at write {k}")
                return 1
            worst = max(worst, cellmod.cost_perms(sigma, pi))
            sigma = pi
        ok = worst <= scheme.r
        _emit(args, {"valid": ok, "max_cost": worst, "failures": failures},
              f"{'valid' if ok else 'invalid'}: max cost {worst}, {failures} encode failures")
    return None


def cmd_simulate(args):
    preset = load_preset(args.preset_file) if args.preset_file else get_preset(args.preset)
    cfg = SimConfig(preset, max_level=args.max_level, headroom=args.headroom,
                    trials=args.trials, seed=args.seed, max_writes=args.max_writes,
                    workers=args.workers)
    report = simulate(cfg)
    if args.costs_csv:
        report.write_costs_csv(args.costs_csv)
    text = report.to_json()
    if args.output:
        Path(args.output).write_text(text + "\n")
    if args.json:
        print(text)
    else:
        d = report.to_dict()
        print(f"{d['preset']}: writes mean {d['writes_mean']:.3f} "
              f"min {d['writes_min']} max {d['writes_max']}, max cost {_num(d['max_cost'])}, "
              f"{d['bits_per_cell']:.4f} bits/cell")


def _num(v):
    return cellmod._fmt(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="rankmod",
                                description="Rank-modulation rewriting codes for flash memory.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    def scheme_args(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--preset", default="q3z2r1-example", choices=sorted(PRESETS))
        g.add_argument("--preset-file")
        sp.add_argument("--cache", help="frozen-set cache file for polar ingredients")
        sp.add_argument("--key", type=int, default=0, help="write address / dither key")
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = add("demod", cmd_demod, "demodulate cell-state rows")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("states", help="CSV file of cell levels, one state per row")

    sp = add("modulate", cmd_modulate, "write a permutation over cell states")
    sp.add_argument("--perm", required=True, help="inverse-form CSV or a file holding it")
    sp.add_argument("states")

    sp = add("cost", cmd_cost, "rewrite cost of a permutation over cell states")
    sp.add_argument("--perm", required=True)
    sp.add_argument("states")

    sp = add("ball", cmd_ball, "size of the cost-r ball")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--verify", action="store_true", help="compare with brute-force enumeration")

    sp = add("capacity", cmd_capacity, "rewriting capacity for cost r")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--z", type=int)

    sp = add("encode", cmd_encode, "encode a message over a stored permutation")
    scheme_args(sp)
    sp.add_argument("--message", required=True, help="flat message or comma-separated parts")
    sp.add_argument("--state", help="current permutation (default: the initial one)")

    sp = add("decode", cmd_decode, "decode a stored permutation")
    scheme_args(sp)
    sp.add_argument("perm")

    sp = add("oracle", cmd_oracle, "run a brute-force verification")
    sp.add_argument("what", choices=["wom", "ball", "rewrite"])
    sp.add_argument("--table", help="JSON WOM table (default: the built-in 6-cell code)")
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--z", type=int, default=2)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--trials", type=int, default=200)
    scheme_args(sp)

    sp = add("simulate", cmd_simulate, "simulate rewrites until the level ceiling")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--preset", default="q3z2r1-example", choices=sorted(PRESETS))
    g.add_argument("--preset-file")
    ceil = sp.add_mutually_exclusive_group(required=True)
    ceil.add_argument("--max-level", type=float)
    ceil.add_argument("--headroom", type=float, help="ceiling relative to the first write")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-writes", type=int, default=10_000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", "-o")
    sp.add_argument("--costs-csv")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args) or 0
    except (RankModError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
