"""``superfec`` command line: bound, simulate, inject, ncg, presets.

Every flag can also come from an environment variable named
``SUPERFEC_<FLAG>`` (dashes become underscores, e.g. ``SUPERFEC_SEED=7``).
Command-line values win over the environment.

Exit codes: 0 success, 1 a directed injection left the block dirty,
2 configuration error, 3 numeric domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from superfec import channel, floor, product, sim
from superfec.channel import DomainError
from superfec.floor import NoCrossing
from superfec.product import DecodePolicy, ErrorPattern, LayoutError, OutOfRange, PatternDoesNotFit

EXIT_OK, EXIT_DIRTY, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3

BOUND_COLUMNS_HEAD = ["ebn0_db", "e_in", "mode"]
BOUND_COLUMNS_TAIL = ["total_q", "ncg_at_target"]

# Reference rows of the ncg table: (name, method).
NCG_TABLE = [
    ("rs-255-239", "analytic"),
    ("example-i", "floor-bound"),
    ("example-ib", "floor-bound"),
    ("example-ii", "floor-bound"),
    ("example-iib", "floor-bound"),
    ("sp-bch", "floor-bound"),
    ("sp-bch", "projection"),
]
SP_BCH_PROJECTED_EBN0 = 5.6


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def parse_grid(text: str | None) -> tuple[float, ...]:
    """``A:B:STEP`` (inclusive), a comma list, or a single value."""
    if text is None or text.strip() == "":
        return ()
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            a, b, step = parts
            if step <= 0 or b < a:
                raise ConfigError(f"grid {text!r}: need STEP > 0 and B >= A")
            n = int(math.floor((b - a) / step + 1e-9)) + 1
            return tuple(round(a + i * step, 12) for i in range(n))
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse grid {text!r}; use A:B:STEP or a comma list") from None


def _env(name: str, default=None):
    return os.environ.get("SUPERFEC_" + name.upper().replace("-", "_"), default)


def _common(p: argparse.ArgumentParser, out=True) -> None:
    p.add_argument("--preset", default=_env("preset"), help="built-in layout name")
    p.add_argument("--layout", default=_env("layout"), metavar="FILE", help="JSON layout file")
    p.add_argument("--iters", type=int, default=_env("iters"), help="maximum decoding iterations")
    p.add_argument("--revert", choices=["on", "off"], default=_env("revert"), help="dynamic reverting")
    p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    if out:
        p.add_argument("--out", default=_env("out"), metavar="FILE", help="CSV output (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superfec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="analytic error-floor bound over a grid")
    _common(b)
    b.add_argument("--ebn0", default=_env("ebn0"), metavar="A:B:STEP")
    b.add_argument("--ein", default=_env("ein"), metavar="LIST")
    b.add_argument("--target-ber", type=float, default=_env("target_ber"))
    b.add_argument("--terms", type=int, default=int(_env("terms", floor.DEFAULT_TRUNCATION)),
                   help="keep this many leading error weights in generic sums; 0 keeps all")

    s = sub.add_parser("simulate", help="Monte-Carlo sweep")
    _common(s)
    s.add_argument("--ebn0", default=_env("ebn0"), metavar="A:B:STEP")
    s.add_argument("--ein", default=_env("ein"), metavar="LIST")
    s.add_argument("--workers", type=int, default=int(_env("workers", 1)))
    s.add_argument("--min-errors", type=int, default=int(_env("min_errors", 100)))
    s.add_argument("--max-blocks", type=int, default=int(_env("max_blocks", 100_000)))
    s.add_argument("--max-seconds", type=float, default=_env("max_seconds"))
    s.add_argument("--random-info", action="store_true", default=bool(_env("random_info")))
    s.add_argument("--target-ber", type=float, default=_env("target_ber"), help="accepted for symmetry; unused")

    i = sub.add_parser("inject", help="decode one block with a directed error pattern")
    _common(i, out=False)
    i.add_argument("--dead", default=_env("dead"), metavar="RxC", help="dead pattern shape, e.g. 4x4")
    i.add_argument("--errors", type=int, default=_env("errors"), help="errors per crosspoint segment")
    i.add_argument("--burst-len", type=int, default=_env("burst_len"))
    i.add_argument("--offset", type=int, default=_env("offset"), help="burst start in transmission order")
    i.add_argument("--sweep-offsets", action="store_true", help="try every start within one matrix row")
    i.add_argument("--verbose", action="store_true")

    n = sub.add_parser("ncg", help="net coding gain table")
    n.add_argument("--preset", default=_env("preset"))
    n.add_argument("--target-ber", type=float, default=float(_env("target_ber", 1e-15)))
    n.add_argument("--out", default=_env("out"))

    p = sub.add_parser("presets", help="list built-in layouts")
    p.add_argument("--json", action="store_true")
    return ap


def _layout(args) -> product.ProductLayout:
    if args.preset and args.layout:
        raise ConfigError("give --preset or --layout, not both")
    if args.layout:
        return product.load_layout(args.layout)
    if not args.preset:
        raise ConfigError("one of --preset or --layout is required")
    return product.build_preset(args.preset)


def _policy(args, layout_name: str | None) -> DecodePolicy:
    base = sim.policy_for(layout_name) if layout_name in product.PRESETS else DecodePolicy()
    iters = int(args.iters) if args.iters is not None else base.max_iterations
    revert = base.reverting if args.revert is None else args.revert == "on"
    return DecodePolicy(max_iterations=iters, reverting=revert, solver=base.solver)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _bound_evaluators(layout: product.ProductLayout, terms: int | None):
    """{pattern name: (printed fn, derived fn)} for the layout."""
    name = layout.name
    if name in floor.PRESET_FORMULAS:
        patterns = list(floor.PRESET_FORMULAS[name].patterns)

        def make(mode):
            return lambda e: floor.q_preset(name, e, mode)
        return patterns, {"printed": make("printed"), "derived": make("derived")}
    # Generic: geometry-derived patterns, same value under both modes.
    if layout.kind == product.Kind.TRUE:
        rs, cs = layout.row_groups[0].spec, layout.col_groups[0].spec
        r, c = cs.t + 1, rs.t + 1
        label = f"q{r}{c}"

        def fn(e):
            q = floor.q_square(layout.height, layout.width, r, c, e)
            return floor.BoundResult(e, {label: floor.Contribution(math.nan, q)}, q, math.log(q) if q > 0 else -math.inf)
        return [label], {"printed": fn, "derived": fn}
    pats = floor.layout_patterns(layout)

    def fn(e):
        contrib = {k: floor.Contribution(math.nan, floor.iter_patterns([p], e, terms)[p.name]) for k, p in pats.items()}
        q = sum(c.q for c in contrib.values())
        return floor.BoundResult(e, contrib, q, math.log(q) if q > 0 else -math.inf)
    return list(pats), {"printed": fn, "derived": fn}


def cmd_bound(args) -> int:
    layout = _layout(args)
    ebn0 = parse_grid(args.ebn0)
    eins = parse_grid(args.ein)
    if ebn0 and eins:
        raise ConfigError("give --ebn0 or --ein, not both")
    points = [(x, channel.ebn0_to_ber(x, layout.rate)) for x in ebn0] or [(math.nan, e) for e in eins]
    patterns, evaluators = _bound_evaluators(layout, args.terms or None)
    target = float(args.target_ber) if args.target_ber is not None else None

    ncg = {}
    if target is not None:
        for mode, fn in evaluators.items():
            try:
                ncg[mode] = floor.floor_to_ncg(layout.rate, target, lambda e, fn=fn: fn(e).total_q)
            except NoCrossing:
                ncg[mode] = None
            if ncg[mode] is not None:
                print(
                    f"{layout.name} [{mode}] bound reaches {target:g} at e_in={ncg[mode].e_in:.4e} "
                    f"(Eb/N0 {ncg[mode].ebn0_db:.3f} dB): NCG <= {ncg[mode].ncg_db:.3f} dB",
                    file=sys.stderr if args.out in (None, "-") else sys.stdout,
                )

    columns = BOUND_COLUMNS_HEAD + [f"q_{p}" for p in patterns] + BOUND_COLUMNS_TAIL
    rows = []
    for x, e in points:
        for mode, fn in evaluators.items():
            res = fn(e)
            n = ncg.get(mode)
            rows.append(
                [sim._fmt(x), sim._fmt(e), mode]
                + [sim._fmt(res.contributions[p].q) for p in patterns]
                + [sim._fmt(res.total_q), "" if n is None else sim._fmt(n.ncg_db)]
            )
    meta = {"command": "bound", "layout": layout.name, "rate": layout.rate, "target_ber": target,
            "points": len(points)}
    sim.write_csv(args.out, columns, rows, meta)
    return EXIT_OK


def cmd_simulate(args) -> int:
    layout = _layout(args)
    cfg = sim.SimConfig(
        preset=layout.name if not args.layout else None,
        layout_path=args.layout,
        policy=_policy(args, layout.name),
        ebn0_db=parse_grid(args.ebn0),
        e_in=parse_grid(args.ein),
        min_block_errors=args.min_errors,
        max_blocks=args.max_blocks,
        wall_clock_cap=float(args.max_seconds) if args.max_seconds is not None else None,
        seed=args.seed,
        workers=args.workers,
        out=args.out,
        random_info=args.random_info,
    )
    records = sim.run_sweep(cfg, progress=lambda m: print(m, file=sys.stderr, flush=True))
    truncated = any(r.truncated for r in records)
    meta = {
        "command": "simulate",
        "config": cfg.echo(),
        "layout": layout.name,
        "rate": layout.rate,
        "wall_seconds": [r.wall_seconds for r in records],
    }
    sim.write_csv(args.out, sim.SIM_COLUMNS, [r.row() for r in records], meta, truncated)
    return EXIT_OK


def _fresh_block(layout, seed):
    rng = channel.RngStream(seed, 1 << 20).generator(0)
    info = rng.integers(0, 2, layout.info_bits, dtype=np.uint8)
    return product.encode_block(layout, info)


def cmd_inject(args) -> int:
    layout = _layout(args)
    policy = _policy(args, layout.name)
    sent = _fresh_block(layout, args.seed)
    if (args.dead is None) == (args.burst_len is None):
        raise ConfigError("give exactly one of --dead or --burst-len")

    if args.dead is not None:
        pattern = ErrorPattern.parse(args.dead, args.errors)
        noisy = product.inject_dead_pattern(layout, sent, pattern, rng_seed=args.seed)
        n_err = int((noisy.bits != sent.bits).sum())
        decoded, trace = product.decode_block(layout, noisy, policy)
        for line in trace.summary():
            print(line)
        status = "Clean" if trace.clean else "Dirty"
        print(f"{layout.name} dead {args.dead}: injected {n_err} errors -> {status}")
        return EXIT_OK if trace.clean else EXIT_DIRTY

    length = int(args.burst_len)
    if args.sweep_offsets:
        offsets = range(layout.width) if args.offset is None else range(args.offset, args.offset + layout.width)
    else:
        offsets = [args.offset]
    dirty = []
    for off in offsets:
        noisy = product.inject_burst(layout, sent, off, length, rng_seed=args.seed)
        decoded, trace = product.decode_block(layout, noisy, policy)
        if args.verbose or len(offsets) == 1:
            for line in trace.summary():
                print(line)
        if not trace.clean:
            dirty.append(off)
    n = len(offsets)
    print(f"{layout.name} burst {length}: {n - len(dirty)}/{n} offsets Clean")
    if dirty:
        print("dirty offsets: " + " ".join(str(o) for o in dirty[:50]) + (" ..." if len(dirty) > 50 else ""))
    return EXIT_OK if not dirty else EXIT_DIRTY


def ncg_table(target: float, only: str | None = None) -> list[list[str]]:
    if not 0 < target < 0.5:
        raise DomainError(f"target BER must be in (0, 0.5), got {target}")
    rows = []
    for name, method in NCG_TABLE:
        if only is not None and name != only:
            continue
        if name == "rs-255-239":
            res = floor.rs_ncg(target)
            rows.append([name, method, sim._fmt(239 / 255), sim._fmt(res.e_in), sim._fmt(res.ebn0_db), sim._fmt(res.ncg_db)])
            continue
        layout = product.build_preset(name)
        if method == "projection":
            e = channel.ebn0_to_ber(SP_BCH_PROJECTED_EBN0, layout.rate)
            rows.append([name, method, sim._fmt(layout.rate), sim._fmt(e), sim._fmt(SP_BCH_PROJECTED_EBN0),
                         sim._fmt(channel.ncg(target, e, layout.rate))])
            continue
        res = floor.preset_ncg(name, target, layout.rate)
        rows.append([name, method, sim._fmt(layout.rate), sim._fmt(res.e_in), sim._fmt(res.ebn0_db), sim._fmt(res.ncg_db)])
    return rows


def cmd_ncg(args) -> int:
    only = None
    if args.preset:
        only = "rs-255-239" if args.preset.lower() in ("rs-255-239", "rs") else product.canonical_preset_name(args.preset)
    rows = ncg_table(float(args.target_ber), only)
    columns = ["code", "method", "rate", "e_in", "ebn0_db", "ncg_db"]
    if args.out:
        sim.write_csv(args.out, columns, rows, {"command": "ncg", "target_ber": args.target_ber})
    else:
        print(f"{'code':<12} {'method':<12} {'rate':>8} {'e_in':>11} {'Eb/N0':>8} {'NCG dB':>7}")
        for r in rows:
            print(f"{r[0]:<12} {r[1]:<12} {float(r[2]):8.5f} {float(r[3]):11.4e} {float(r[4]):8.3f} {float(r[5]):7.3f}")
    return EXIT_OK


def cmd_presets(args) -> int:
    out = []
    for name in product.PRESETS:
        lay = product.build_preset(name)
        out.append({
            "name": name,
            "kind": lay.kind.value,
            "matrix": f"{lay.height}x{lay.width}",
            "rows": [f"{s.describe()} x{c}" for s, c in lay.row_specs],
            "cols": [f"{s.describe()} x{c}" for s, c in lay.col_specs],
            "N": lay.total_bits,
            "K": lay.info_bits,
            "redundancy_pct": round(100 * lay.redundancy, 3),
            "bound": name in floor.PRESET_FORMULAS,
        })
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        for d in out:
            print(f"{d['name']:<12} {d['kind']:<7} {d['matrix']:>9}  N={d['N']:<7} K={d['K']:<7} "
                  f"overhead {d['redundancy_pct']:.2f}%")
    return EXIT_OK


COMMANDS = {
    "bound": cmd_bound,
    "simulate": cmd_simulate,
    "inject": cmd_inject,
    "ncg": cmd_ncg,
    "presets": cmd_presets,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (DomainError, NoCrossing) as exc:
        print(f"superfec: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigError, LayoutError, PatternDoesNotFit, OutOfRange, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"superfec: error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
