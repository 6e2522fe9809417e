"""Product and pseudo-product BCH codes with iterative two-phase decoding.

A :class:`ProductLayout` places every transmitted bit in a cell of a
``height x width`` matrix and lists, for each row code and each column
code, the cells of its codeword in codeword order.  Two geometries are
supported:

true product
    Row code ``r`` is matrix row ``r`` (for the ``k_col`` information rows);
    column code ``j`` is the whole matrix column ``j``, so column parity
    also protects the row-parity columns.
pseudo product
    One matrix column per column code.  Row codewords are laid
    consecutively, row-major, over the top ``k_col`` rows and may wrap
    across matrix rows.  Column parity sits below the data, one column per
    code; ragged bottoms leave unused cells.

Cells are addressed by their row-major linear index.  Transmission order is
row-major over used cells unless the layout says otherwise.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from superfec import bch
from superfec.bch import BchSpec, Solver, Status

__all__ = [
    "BitBlock",
    "CodeGroup",
    "DecodePolicy",
    "DecodeTrace",
    "ErrorPattern",
    "Kind",
    "LayoutError",
    "OutOfRange",
    "PRESETS",
    "PatternDoesNotFit",
    "PhaseRecord",
    "ProductLayout",
    "build_preset",
    "canonical_preset_name",
    "decode_block",
    "encode_block",
    "export_layout",
    "inject_burst",
    "inject_dead_pattern",
    "is_clean",
    "layout_from_dict",
    "load_layout",
    "pseudo_product",
    "revert_step",
    "true_product",
]


class LayoutError(ValueError):
    pass


class PatternDoesNotFit(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class Kind(str, enum.Enum):
    PSEUDO = "pseudo"
    TRUE = "true"


@dataclass(frozen=True, eq=False)
class CodeGroup:
    """``count`` component codes sharing one spec; ``cells`` is (count, n)."""

    spec: BchSpec
    cells: np.ndarray
    first_id: int

    @property
    def count(self) -> int:
        return self.cells.shape[0]


@dataclass(eq=False)
class ProductLayout:
    name: str
    kind: Kind
    height: int
    width: int
    row_groups: list[CodeGroup]
    col_groups: list[CodeGroup]
    used: np.ndarray
    info_cells: np.ndarray
    order: str = "row-major"

    @property
    def row_specs(self) -> list[tuple[BchSpec, int]]:
        return [(g.spec, g.count) for g in self.row_groups]

    @property
    def col_specs(self) -> list[tuple[BchSpec, int]]:
        return [(g.spec, g.count) for g in self.col_groups]

    @property
    def n_row_codes(self) -> int:
        return sum(g.count for g in self.row_groups)

    @property
    def n_col_codes(self) -> int:
        return sum(g.count for g in self.col_groups)

    @property
    def total_bits(self) -> int:
        return int(self.used.sum())

    @property
    def info_bits(self) -> int:
        return int(self.info_cells.size)

    @property
    def rate(self) -> float:
        return self.info_bits / self.total_bits

    @property
    def redundancy(self) -> float:
        """Parity overhead relative to the payload, (N - K) / K."""
        return (self.total_bits - self.info_bits) / self.info_bits

    @cached_property
    def tx_order(self) -> np.ndarray:
        """Linear cell indices in transmission order."""
        if self.order == "row-major":
            return np.flatnonzero(self.used.ravel())
        if self.order == "column-major":
            return np.flatnonzero(self.used.T.ravel()) % self.height * self.width + (
                np.flatnonzero(self.used.T.ravel()) // self.height
            )
        raise LayoutError(f"unknown transmission order {self.order!r}")

    def groups(self, axis: str) -> list[CodeGroup]:
        return self.row_groups if axis == "row" else self.col_groups

    def code_cells(self, code_id: int) -> np.ndarray:
        for g in self.row_groups + self.col_groups:
            if g.first_id <= code_id < g.first_id + g.count:
                return g.cells[code_id - g.first_id]
        raise KeyError(code_id)

    def code_axis(self, code_id: int) -> str:
        return "row" if code_id < self.n_row_codes else "col"

    @cached_property
    def row_of_cell(self) -> np.ndarray:
        return self._owner(self.row_groups)

    @cached_property
    def col_of_cell(self) -> np.ndarray:
        return self._owner(self.col_groups)

    def _owner(self, groups: list[CodeGroup]) -> np.ndarray:
        out = np.full(self.height * self.width, -1, dtype=np.int64)
        for g in groups:
            ids = g.first_id + np.arange(g.count)
            out[g.cells] = ids[:, None]
        return out

    def membership(self, cell: int) -> tuple[int | None, int | None]:
        r = int(self.row_of_cell[cell])
        c = int(self.col_of_cell[cell])
        return (r if r >= 0 else None, c if c >= 0 else None)

    def intersection_sizes(self) -> np.ndarray:
        """(n_row_codes, n_col_codes) count of shared cells."""
        rows = self.row_of_cell
        cols = self.col_of_cell
        both = (rows >= 0) & (cols >= 0)
        out = np.zeros((self.n_row_codes, self.n_col_codes), dtype=np.int64)
        np.add.at(out, (rows[both], cols[both] - self.n_row_codes), 1)
        return out

    def __repr__(self) -> str:
        return (
            f"ProductLayout({self.name!r}, {self.kind.value}, {self.height}x{self.width}, "
            f"N={self.total_bits}, K={self.info_bits})"
        )


@dataclass
class BitBlock:
    bits: np.ndarray
    layout: ProductLayout

    def __post_init__(self) -> None:
        if self.bits.shape != (self.layout.height, self.layout.width):
            raise bch.LengthMismatch(
                f"block {self.bits.shape} does not match layout "
                f"{self.layout.height}x{self.layout.width}"
            )

    def copy(self) -> "BitBlock":
        return BitBlock(self.bits.copy(), self.layout)

    @property
    def flat(self) -> np.ndarray:
        return self.bits.reshape(-1)

    def info(self) -> np.ndarray:
        return self.flat[self.layout.info_cells]

    def transmitted(self) -> np.ndarray:
        return self.flat[self.layout.tx_order]


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

def true_product(row_spec: BchSpec, col_spec: BchSpec, name: str = "true-product",
                 order: str = "row-major") -> ProductLayout:
    width, height = row_spec.n, col_spec.n
    n_rows = col_spec.k
    row_cells = np.arange(n_rows)[:, None] * width + np.arange(width)[None, :]
    col_cells = np.arange(height)[None, :] * width + np.arange(width)[:, None]
    info = row_cells[:, : row_spec.k].ravel()
    return ProductLayout(
        name=name,
        kind=Kind.TRUE,
        height=height,
        width=width,
        row_groups=[CodeGroup(row_spec, row_cells, 0)],
        col_groups=[CodeGroup(col_spec, col_cells, n_rows)],
        used=np.ones((height, width), dtype=bool),
        info_cells=info,
        order=order,
    )


def pseudo_product(row_specs: Iterable[tuple[BchSpec, int]], col_specs: Iterable[tuple[BchSpec, int]],
                   name: str = "pseudo-product", order: str = "row-major") -> ProductLayout:
    row_specs = list(row_specs)
    col_specs = list(col_specs)
    width = sum(c for _, c in col_specs)
    data_heights = {s.k for s, _ in col_specs}
    if len(data_heights) != 1:
        raise LayoutError("pseudo-product column codes must share k (the data height)")
    h0 = data_heights.pop()
    row_total = sum(s.n * c for s, c in row_specs)
    if row_total != h0 * width:
        raise LayoutError(
            f"row codewords cover {row_total} bits but the data region is {h0}x{width}"
        )
    height = h0 + max(s.n - s.k for s, _ in col_specs)
    used = np.zeros((height, width), dtype=bool)
    used[:h0] = True

    row_groups = []
    info = []
    offset = 0
    code_id = 0
    for spec, count in row_specs:
        cells = offset + np.arange(count)[:, None] * spec.n + np.arange(spec.n)[None, :]
        row_groups.append(CodeGroup(spec, cells, code_id))
        info.append(cells[:, : spec.k].ravel())
        offset += count * spec.n
        code_id += count

    col_groups = []
    j0 = 0
    for spec, count in col_specs:
        j = j0 + np.arange(count)[:, None]
        depth = np.arange(spec.n)[None, :]
        cells = depth * width + j
        used[h0:spec.n, j0 : j0 + count] = True
        col_groups.append(CodeGroup(spec, cells, code_id))
        code_id += count
        j0 += count

    return ProductLayout(
        name=name,
        kind=Kind.PSEUDO,
        height=height,
        width=width,
        row_groups=row_groups,
        col_groups=col_groups,
        used=used,
        info_cells=np.concatenate(info),
        order=order,
    )


def _preset_example_i():
    return pseudo_product(
        [(bch.bch_spec(3908, 3824, 7), 32)],
        [(bch.bch_spec(2031, 1954, 7), 64)],
        name="example-i",
    )


def _preset_example_ib():
    return pseudo_product(
        [(bch.bch_spec(3908, 3824, 7), 32)],
        [(bch.bch_spec(2042, 1954, 8), 52), (bch.bch_spec(2031, 1954, 7), 12)],
        name="example-ib",
    )


def _preset_example_ii():
    return pseudo_product(
        [(bch.bch_spec(3860, 3824, 3), 32)],
        [(bch.bch_spec(2040, 1930, 10), 64)],
        name="example-ii",
    )


def _preset_example_iib():
    return pseudo_product(
        [(bch.bch_spec(3860, 3824, 3), 64)],
        [(bch.bch_spec(2040, 1930, 10), 128)],
        name="example-iib",
    )


def _preset_sp_bch():
    return true_product(
        bch.bch_spec(987, 956, 3, extension_bits=1),
        bch.bch_spec(992, 960, 3, extension_bits=2),
        name="sp-bch",
    )


def _preset_toy():
    spec = bch.bch_spec(15, 7, 2)
    return true_product(spec, spec, name="toy-15-7")


PRESETS = {
    "example-i": _preset_example_i,
    "example-ib": _preset_example_ib,
    "example-ii": _preset_example_ii,
    "example-iib": _preset_example_iib,
    "sp-bch": _preset_sp_bch,
    "toy-15-7": _preset_toy,
}

_ALIASES = {
    "examplecodei": "example-i",
    "examplecodeib": "example-ib",
    "examplecodeii": "example-ii",
    "examplecodeiib": "example-iib",
    "spbch": "sp-bch",
}

_PRESET_CACHE: dict[str, ProductLayout] = {}


def canonical_preset_name(name: str) -> str:
    key = name.lower().replace("_", "-")
    key = _ALIASES.get(key.replace("-", ""), key)
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return key


def build_preset(name: str) -> ProductLayout:
    """One of the built-in layouts; instances are cached and must not be mutated."""
    key = canonical_preset_name(name)
    if key not in _PRESET_CACHE:
        _PRESET_CACHE[key] = PRESETS[key]()
    return _PRESET_CACHE[key]


# ---------------------------------------------------------------------------
# layout files
# ---------------------------------------------------------------------------

def export_layout(layout: ProductLayout) -> dict:
    def specs(groups):
        return [dict(g.spec.describe(), multiplicity=g.count) for g in groups]

    return {
        "name": layout.name,
        "kind": layout.kind.value,
        "rows": specs(layout.row_groups),
        "cols": specs(layout.col_groups),
        "matrix": {"height": layout.height, "width": layout.width},
        "transmission_order": layout.order,
    }


def layout_from_dict(desc: dict) -> ProductLayout:
    try:
        kind = Kind(desc["kind"])
        name = desc.get("name", "custom")
        order = desc.get("transmission_order", "row-major")

        def specs(key):
            out = []
            for entry in desc[key]:
                spec = bch.make_spec(
                    entry["m"], entry["t"], entry.get("k"), entry.get("shorten", 0),
                    entry.get("extension", 0),
                )
                out.append((spec, int(entry.get("multiplicity", 1))))
            return out

        rows, cols = specs("rows"), specs("cols")
    except (KeyError, TypeError, ValueError) as exc:
        raise LayoutError(f"bad layout description: {exc}") from exc

    if kind is Kind.TRUE:
        if len(rows) != 1 or len(cols) != 1:
            raise LayoutError("a true product has exactly one row spec and one column spec")
        layout = true_product(rows[0][0], cols[0][0], name=name, order=order)
        if rows[0][1] != layout.n_row_codes or cols[0][1] != layout.n_col_codes:
            raise LayoutError(
                f"true product needs {layout.n_row_codes} row codes and "
                f"{layout.n_col_codes} column codes"
            )
    else:
        layout = pseudo_product(rows, cols, name=name, order=order)
    if order not in ("row-major", "column-major"):
        raise LayoutError(f"unknown transmission order {order!r}")
    matrix = desc.get("matrix")
    if matrix and (matrix.get("height"), matrix.get("width")) != (layout.height, layout.width):
        raise LayoutError(
            f"matrix {matrix} disagrees with derived {layout.height}x{layout.width}"
        )
    return layout


def load_layout(path: str | Path) -> ProductLayout:
    text = Path(path).read_text()
    try:
        desc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LayoutError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return layout_from_dict(desc)


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def encode_block(layout: ProductLayout, info) -> BitBlock:
    """Rows first from the information bits, then columns over the full width."""
    info = np.asarray(info, dtype=np.uint8).ravel()
    if info.size != layout.info_bits:
        raise bch.LengthMismatch(f"expected {layout.info_bits} info bits, got {info.size}")
    flat = np.zeros(layout.height * layout.width, dtype=np.uint8)
    pos = 0
    for g in layout.row_groups:
        chunk = info[pos : pos + g.count * g.spec.k].reshape(g.count, g.spec.k)
        pos += chunk.size
        flat[g.cells] = bch.encode_many(g.spec, chunk)
    for g in layout.col_groups:
        data = flat[g.cells[:, : g.spec.k]]
        flat[g.cells] = bch.encode_many(g.spec, data)
    return BitBlock(flat.reshape(layout.height, layout.width), layout)


def is_clean(layout: ProductLayout, block: BitBlock | np.ndarray) -> bool:
    flat = block.flat if isinstance(block, BitBlock) else np.asarray(block).reshape(-1)
    for g in layout.row_groups + layout.col_groups:
        if not bch.is_codeword_many(g.spec, flat[g.cells]).all():
            return False
    return True


# ---------------------------------------------------------------------------
# iterative decoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecodePolicy:
    """``max_iterations`` full iterations, each a row phase then a column phase."""

    max_iterations: int = 4
    reverting: bool = False
    revert_scope: str = "all-marked"
    solver: Solver | None = None

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.revert_scope != "all-marked":
            raise ValueError(f"unsupported revert scope {self.revert_scope!r}")


@dataclass
class PhaseRecord:
    iteration: int
    phase: str
    code_ids: np.ndarray
    statuses: np.ndarray
    corrections: dict[int, np.ndarray] = dc_field(default_factory=dict)
    reverted: dict[int, np.ndarray] = dc_field(default_factory=dict)

    @property
    def n_corrected(self) -> int:
        return sum(c.size for c in self.corrections.values())

    @property
    def n_reverted(self) -> int:
        return sum(c.size for c in self.reverted.values())

    @property
    def n_failed(self) -> int:
        return int(np.sum(self.statuses == Status.UNCORRECTABLE))


@dataclass
class DecodeTrace:
    layout: ProductLayout
    provenance: np.ndarray
    phases: list[PhaseRecord] = dc_field(default_factory=list)
    iterations_used: int = 0
    final_status: str = "dirty"

    @property
    def clean(self) -> bool:
        return self.final_status == "clean"

    @property
    def current_phase(self) -> int:
        """Sequence number of the phase being (or last) run."""
        return len(self.phases)

    def summary(self) -> list[str]:
        lines = []
        for p in self.phases:
            lines.append(
                f"iter {p.iteration} {p.phase:>3}: decoded {p.code_ids.size} codes, "
                f"failed {p.n_failed}, flipped {p.n_corrected}, reverted {p.n_reverted}"
            )
        lines.append(f"final: {self.final_status} after {self.iterations_used} iteration(s)")
        return lines


def revert_step(trace: DecodeTrace, failing_code_id: int, phase: str) -> np.ndarray:
    """Cells of ``failing_code_id`` flipped by the immediately preceding phase.

    ``phase`` is the phase in which the code was found undecodable; the
    preceding phase is the opposite one.  Returns an empty array for the
    very first phase.
    """
    if trace.layout.code_axis(failing_code_id) != phase:
        raise ValueError(f"code {failing_code_id} is not a {phase} code")
    prev = trace.current_phase - 1
    if prev < 0:
        return np.zeros(0, dtype=np.int64)
    cells = trace.layout.code_cells(failing_code_id)
    return cells[trace.provenance[cells] == prev]


def decode_block(layout: ProductLayout, received: BitBlock, policy: DecodePolicy = DecodePolicy()
                 ) -> tuple[BitBlock, DecodeTrace]:
    if received.bits.shape != (layout.height, layout.width):
        raise bch.LengthMismatch("block does not match layout")
    flat = received.bits.reshape(-1).copy()
    prov = np.full(flat.size, -1, dtype=np.int32)
    trace = DecodeTrace(layout, prov)
    n_rows = layout.n_row_codes
    marked = np.zeros(n_rows + layout.n_col_codes, dtype=bool)
    dirty = np.ones_like(marked)
    failing = np.zeros_like(marked)

    if is_clean(layout, flat):
        trace.final_status = "clean"
        return BitBlock(flat.reshape(layout.height, layout.width), layout), trace

    # True when the opposite phase ended with every one of its codes valid.
    other_ok = False
    for iteration in range(1, policy.max_iterations + 1):
        trace.iterations_used = iteration
        touched = False
        for axis in ("row", "col"):
            seq = trace.current_phase
            record, phase_ok = _run_phase(
                layout, flat, prov, marked, dirty, failing, axis, seq, iteration, policy
            )
            trace.phases.append(record)
            touched |= bool(record.corrections or record.reverted)
            # This phase's codes are valid; the opposite ones still are
            # unless this phase flipped something.
            if phase_ok and other_ok and not record.corrections:
                trace.final_status = "clean"
                if axis == "row":
                    trace.iterations_used = iteration - 1
                return BitBlock(flat.reshape(layout.height, layout.width), layout), trace
            other_ok = phase_ok
        if not touched:
            break

    if is_clean(layout, flat):
        trace.final_status = "clean"
    return BitBlock(flat.reshape(layout.height, layout.width), layout), trace


def _run_phase(layout, flat, prov, marked, dirty, failing, axis, seq, iteration, policy):
    # Only codes whose bits changed since their last decode (``dirty``) or
    # that were marked by a revert are looked at again; an untouched code
    # would reproduce its previous outcome, and has nothing to revert.
    ids_all, stat_all = [], []
    record = PhaseRecord(iteration, axis, np.zeros(0, np.int64), np.zeros(0, np.int8))
    opposite = layout.col_of_cell if axis == "row" else layout.row_of_cell
    for g in layout.groups(axis):
        span = slice(g.first_id, g.first_id + g.count)
        cand = np.flatnonzero(dirty[span] | marked[span])
        if cand.size == 0:
            continue
        cand_ids = g.first_id + cand
        dirty[cand_ids] = False
        failing[cand_ids] = False
        cand_cells = g.cells if cand.size == g.count else g.cells[cand]
        words = flat[cand_cells]
        need = ~bch.is_codeword_many(g.spec, words) | marked[cand_ids]
        marked[cand_ids] = False
        sel = np.flatnonzero(need)
        if sel.size == 0:
            continue
        local = cand[sel]
        res = bch.decode_many(g.spec, words[sel], policy.solver)
        ids = g.first_id + local
        ids_all.append(ids)
        stat_all.append(res.status)
        fixed = np.flatnonzero(res.status == Status.CORRECTED)
        if fixed.size:
            mask = res.flips[fixed]
            cells = g.cells[local[fixed]][mask]
            flat[cells] ^= 1
            prov[cells] = seq
            hit = opposite[cells]
            dirty[hit[hit >= 0]] = True
            parts = np.split(cells, np.cumsum(mask.sum(axis=1))[:-1])
            record.corrections.update(zip(ids[fixed].tolist(), parts))
        bad = np.flatnonzero(res.status == Status.UNCORRECTABLE)
        failing[ids[bad]] = True
        if policy.reverting and seq > 0 and bad.size:
            block = cand_cells[sel[bad]]
            mask = prov[block] == seq - 1
            counts = mask.sum(axis=1)
            undo = block[mask]
            if undo.size:
                flat[undo] ^= 1
                prov[undo] = -1
                hit = opposite[undo]
                hit = hit[hit >= 0]
                marked[hit] = True
                dirty[hit] = True
                keep = counts > 0
                dirty[ids[bad[keep]]] = True
                parts = np.split(undo, np.cumsum(counts[keep])[:-1])
                record.reverted.update(zip(ids[bad[keep]].tolist(), parts))
    if ids_all:
        record.code_ids = np.concatenate(ids_all)
        record.statuses = np.concatenate(stat_all)
    n_rows = layout.n_row_codes
    span = slice(0, n_rows) if axis == "row" else slice(n_rows, n_rows + layout.n_col_codes)
    return record, not failing[span].any()


# ---------------------------------------------------------------------------
# directed error injection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorPattern:
    """``rows`` x ``cols`` grid of row/column code intersections.

    ``errors`` bits are flipped inside every intersection; ``None`` means one
    bit per crosspoint for a true product and ``t + 1`` of the weaker code
    for a pseudo product.
    """

    rows: int = 1
    cols: int = 1
    errors: int | None = None

    @classmethod
    def parse(cls, text: str, errors: int | None = None) -> "ErrorPattern":
        r, _, c = text.lower().partition("x")
        return cls(int(r), int(c), errors)


def inject_dead_pattern(layout: ProductLayout, block: BitBlock, pattern: ErrorPattern, rng_seed=None,
                        row_ids=None, col_ids=None) -> BitBlock:
    """Flip a dead-pattern-shaped error at uniformly chosen intersections."""
    rng = np.random.default_rng(rng_seed)
    if pattern.rows > layout.n_row_codes or pattern.cols > layout.n_col_codes:
        raise PatternDoesNotFit(
            f"{pattern.rows}x{pattern.cols} pattern on {layout.n_row_codes} rows x "
            f"{layout.n_col_codes} columns"
        )
    if row_ids is None:
        row_ids = rng.choice(layout.n_row_codes, pattern.rows, replace=False)
    if col_ids is None:
        col_ids = layout.n_row_codes + rng.choice(layout.n_col_codes, pattern.cols, replace=False)
    out = block.copy()
    flat = out.flat
    for r in np.atleast_1d(row_ids):
        rcells = layout.code_cells(int(r))
        for c in np.atleast_1d(col_ids):
            ccells = layout.code_cells(int(c))
            shared = np.intersect1d(rcells, ccells)
            errors = pattern.errors
            if errors is None:
                if layout.kind is Kind.TRUE:
                    errors = 1
                else:
                    t_r = _spec_of(layout, int(r)).t
                    t_c = _spec_of(layout, int(c)).t
                    errors = min(t_r, t_c) + 1
            if errors > shared.size:
                raise PatternDoesNotFit(
                    f"{errors} errors do not fit a {shared.size}-bit intersection"
                )
            flat[rng.choice(shared, errors, replace=False)] ^= 1
    return out


def _spec_of(layout: ProductLayout, code_id: int) -> BchSpec:
    for g in layout.row_groups + layout.col_groups:
        if g.first_id <= code_id < g.first_id + g.count:
            return g.spec
    raise KeyError(code_id)


def inject_burst(layout: ProductLayout, block: BitBlock, start_bit: int | None, length: int,
                 rng_seed=None) -> BitBlock:
    """Flip every bit of ``[start, start + length)`` in transmission order.

    ``start_bit=None`` draws the offset uniformly from ``rng_seed``.
    """
    total = layout.total_bits
    if start_bit is None:
        rng = np.random.default_rng(rng_seed)
        start_bit = int(rng.integers(0, max(1, total - length + 1)))
    if length < 0 or start_bit < 0 or start_bit + length > total:
        raise OutOfRange(f"burst [{start_bit}, {start_bit + length}) outside 0..{total}")
    out = block.copy()
    out.flat[layout.tx_order[start_bit : start_bit + length]] ^= 1
    return out
