"""Deterministic Monte-Carlo sweeps over a product layout.

Blocks are processed in fixed-size batches.  Block ``i`` of grid point ``p``
draws all of its randomness from ``RngStream(seed, stream=p).generator(i)``,
and batches are folded into the running totals strictly in batch order.
The stop rule is only checked at batch boundaries, so the emitted numbers
do not depend on how many workers computed the batches.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from superfec import channel, product
from superfec.product import DecodePolicy, ProductLayout

__all__ = [
    "BATCH_SIZE",
    "PRESET_POLICIES",
    "SIM_COLUMNS",
    "SimConfig",
    "SimRecord",
    "policy_for",
    "run_point",
    "run_sweep",
    "simulate_block",
    "wilson",
    "write_csv",
]

BATCH_SIZE = 16

# Iteration budget and reverting per preset; anything else falls back to
# DecodePolicy's defaults.
PRESET_POLICIES = {
    "sp-bch": DecodePolicy(max_iterations=7, reverting=True),
}

SIM_COLUMNS = [
    "ebn0_db", "e_in", "blocks_run", "raw_bit_errors_in", "residual_bit_errors_out",
    "block_failures", "mean_iterations", "ber_out", "ber_lo", "ber_hi", "fer", "fer_lo", "fer_hi",
]


def policy_for(preset: str | None) -> DecodePolicy:
    if preset is None:
        return DecodePolicy()
    key = product.canonical_preset_name(preset)
    return PRESET_POLICIES.get(key, DecodePolicy())


def wilson(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval; (0, 1) when nothing was observed."""
    if trials == 0:
        return 0.0, 1.0
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass
class SimConfig:
    """One Monte-Carlo sweep.

    Exactly one of ``preset`` / ``layout_path`` names the code.  The grid is
    either ``ebn0_db`` values (converted with the layout's rate) or raw
    ``e_in`` values.
    """

    preset: str | None = None
    layout_path: str | None = None
    policy: DecodePolicy = field(default_factory=DecodePolicy)
    ebn0_db: tuple[float, ...] = ()
    e_in: tuple[float, ...] = ()
    min_block_errors: int = 100
    max_blocks: int = 100_000
    wall_clock_cap: float | None = None
    seed: int = 0
    workers: int = 1
    out: str | None = None
    random_info: bool = False
    batch_size: int = BATCH_SIZE

    def __post_init__(self) -> None:
        if (self.preset is None) == (self.layout_path is None):
            raise ValueError("give exactly one of preset or layout_path")
        if self.ebn0_db and self.e_in:
            raise ValueError("give either an Eb/N0 grid or an e_in list, not both")
        if self.min_block_errors < 1 and self.max_blocks < 1:
            raise ValueError("stop rules need min_block_errors >= 1 or max_blocks >= 1")
        if self.workers < 1 or self.batch_size < 1:
            raise ValueError("workers and batch_size must be >= 1")
        for e in self.e_in:
            if not 0 <= e < 0.5:
                raise channel.DomainError(f"e_in must be in [0, 0.5), got {e}")

    def layout(self) -> ProductLayout:
        if self.preset is not None:
            return product.build_preset(self.preset)
        return product.load_layout(self.layout_path)

    def points(self, rate: float) -> list[tuple[float, float]]:
        """(ebn0_db, e_in) pairs; ebn0 is NaN for raw e_in points."""
        if self.ebn0_db:
            return [(float(x), channel.ebn0_to_ber(x, rate)) for x in self.ebn0_db]
        return [(math.nan, float(e)) for e in self.e_in]

    def echo(self) -> dict:
        d = asdict(self)
        d["policy"] = asdict(self.policy)
        d["policy"]["solver"] = None if self.policy.solver is None else str(self.policy.solver.value)
        return d


@dataclass
class SimRecord:
    ebn0_db: float
    e_in: float
    blocks_run: int
    raw_bit_errors_in: int
    residual_bit_errors_out: int
    block_failures: int
    mean_iterations: float
    ber_out: float
    ber_lo: float
    ber_hi: float
    fer: float
    fer_lo: float
    fer_hi: float
    wall_seconds: float = 0.0
    truncated: bool = False

    def row(self) -> list[str]:
        vals = [getattr(self, c) for c in SIM_COLUMNS]
        return [_fmt(v) for v in vals]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and math.isnan(v):
        return ""
    return repr(float(v))


# ---------------------------------------------------------------------------
# per-block work
# ---------------------------------------------------------------------------

_LAYOUT_CACHE: dict[tuple, ProductLayout] = {}


def _layout_for(key: tuple) -> ProductLayout:
    if key not in _LAYOUT_CACHE:
        kind, name = key
        _LAYOUT_CACHE[key] = product.build_preset(name) if kind == "preset" else product.load_layout(name)
    return _LAYOUT_CACHE[key]


def simulate_block(layout: ProductLayout, e_in: float, rng: np.random.Generator, policy: DecodePolicy,
                   random_info: bool = False) -> tuple[int, int, bool, int]:
    """Corrupt and decode one block.

    Returns (raw flips, residual info-bit errors, block failed, iterations).
    All-zero data is used unless ``random_info``; every component decoder
    depends only on the error pattern, so the two are equivalent.
    """
    if random_info:
        info = rng.integers(0, 2, layout.info_bits, dtype=np.uint8)
        sent = product.encode_block(layout, info)
    else:
        sent = product.BitBlock(np.zeros((layout.height, layout.width), dtype=np.uint8), layout)
    noisy, flips = channel.flip_bits(sent.bits, e_in, rng)
    if flips == 0:
        return 0, 0, False, 0
    decoded, trace = product.decode_block(layout, product.BitBlock(noisy, layout), policy)
    diff = decoded.bits != sent.bits
    info_err = int(diff.reshape(-1)[layout.info_cells].sum())
    return flips, info_err, bool(diff.any()), trace.iterations_used


def _run_batch(args) -> tuple[int, int, int, int, int]:
    key, e_in, seed, stream, start, count, policy, random_info = args
    layout = _layout_for(key)
    rs = channel.RngStream(seed, stream)
    flips = errs = fails = iters = 0
    for i in range(start, start + count):
        f, e, bad, it = simulate_block(layout, e_in, rs.generator(i), policy, random_info)
        flips += f
        errs += e
        fails += bad
        iters += it
    return count, flips, errs, fails, iters


def run_point(config: SimConfig, ebn0_db: float, e_in: float, stream: int,
              pool: ProcessPoolExecutor | None = None,
              progress: Callable[[str], None] | None = None) -> SimRecord:
    layout = config.layout()
    key = ("preset", config.preset) if config.preset is not None else ("file", config.layout_path)
    t0 = time.monotonic()
    if e_in == 0:
        rec = _record(ebn0_db, e_in, layout, 1, 0, 0, 0, 0)
        rec.wall_seconds = time.monotonic() - t0
        return rec

    blocks = flips = errs = fails = iters = 0
    next_batch = 0
    truncated = False
    cap = config.max_blocks if config.max_blocks >= 1 else None
    fan = config.workers if pool is not None else 1

    def done() -> bool:
        if config.min_block_errors >= 1 and fails >= config.min_block_errors:
            return True
        return cap is not None and blocks >= cap

    while not done():
        # Dispatch a round of batches; fold them in order and stop at the
        # first boundary where the rule is met.
        jobs = []
        for _ in range(fan):
            start = next_batch * config.batch_size
            count = config.batch_size if cap is None else min(config.batch_size, cap - start)
            if count <= 0:
                break
            jobs.append((key, e_in, config.seed, stream, start, count, config.policy, config.random_info))
            next_batch += 1
        if not jobs:
            break
        results = list(pool.map(_run_batch, jobs)) if pool is not None else [_run_batch(j) for j in jobs]
        for n, f, e, b, it in results:
            if done():
                break
            blocks += n
            flips += f
            errs += e
            fails += b
            iters += it
        if progress is not None:
            progress(f"e_in={e_in:.4g} blocks={blocks} failures={fails}")
        if config.wall_clock_cap is not None and time.monotonic() - t0 > config.wall_clock_cap:
            truncated = not done()
            break
    rec = _record(ebn0_db, e_in, layout, blocks, flips, errs, fails, iters)
    rec.wall_seconds = time.monotonic() - t0
    rec.truncated = truncated
    return rec


def _record(ebn0_db, e_in, layout, blocks, flips, errs, fails, iters) -> SimRecord:
    bits = blocks * layout.info_bits
    ber_lo, ber_hi = wilson(errs, bits)
    fer_lo, fer_hi = wilson(fails, blocks)
    return SimRecord(
        ebn0_db=ebn0_db,
        e_in=e_in,
        blocks_run=blocks,
        raw_bit_errors_in=flips,
        residual_bit_errors_out=errs,
        block_failures=fails,
        mean_iterations=iters / blocks if blocks else 0.0,
        ber_out=errs / bits if bits else 0.0,
        ber_lo=ber_lo,
        ber_hi=ber_hi,
        fer=fails / blocks if blocks else 0.0,
        fer_lo=fer_lo,
        fer_hi=fer_hi,
    )


def run_sweep(config: SimConfig, progress: Callable[[str], None] | None = None) -> list[SimRecord]:
    """Run every grid point; on Ctrl-C return the finished points plus a truncated marker."""
    layout = config.layout()
    points = config.points(layout.rate)
    records: list[SimRecord] = []
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for stream, (ebn0, e) in enumerate(points):
            records.append(run_point(config, ebn0, e, stream, pool, progress))
    except KeyboardInterrupt:
        if records:
            records[-1].truncated = True
        else:
            records.append(_record(math.nan, math.nan, layout, 0, 0, 0, 0, 0))
            records[-1].truncated = True
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return records


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def csv_text(columns: Sequence[str], rows: Iterable[Sequence[str]], truncated: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(r)
    if truncated:
        buf.write("# truncated\n")
    return buf.getvalue()


def git_revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"], capture_output=True, text=True, timeout=5,
            cwd=Path(__file__).resolve().parent,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"


def write_csv(path: str | os.PathLike | None, columns: Sequence[str], rows: Iterable[Sequence[str]],
              meta: dict, truncated: bool = False) -> str:
    """Write CSV (or return it when ``path`` is None) and a ``.meta.json`` sidecar."""
    text = csv_text(columns, rows, truncated)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return text
    Path(path).write_text(text)
    meta = dict(meta)
    meta.setdefault("written_at", time.strftime("%Y-%m-%dT%H:%M:%S%z"))
    meta.setdefault("git_revision", git_revision())
    meta["truncated"] = truncated
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, default=str) + "\n")
    return text
