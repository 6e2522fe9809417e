import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superfec import bch, product
from superfec.product import (
    DecodePolicy,
    DecodeTrace,
    ErrorPattern,
    Kind,
    LayoutError,
    OutOfRange,
    PatternDoesNotFit,
)


def random_block(layout, seed=0):
    rng = np.random.default_rng(seed)
    return product.encode_block(layout, rng.integers(0, 2, layout.info_bits, dtype=np.uint8))


@pytest.mark.parametrize(
    "name,shape,N,K,red",
    [
        ("example-i", (2031, 64), 129984, 122368, 0.0622),
        ("example-ib", (2042, 64), 130556, 122368, 0.0669),
        ("example-ii", (2040, 64), 130560, 122368, 0.0670),
        ("example-iib", (2040, 128), 261120, 244736, 0.0670),
        ("sp-bch", (992, 987), 979104, 917760, 0.0668),
    ],
)
def test_preset_geometry(name, shape, N, K, red):
    lay = product.build_preset(name)
    assert (lay.height, lay.width) == shape
    assert lay.total_bits == N and lay.info_bits == K
    assert lay.redundancy == pytest.approx(red, abs=5e-4)
    assert lay.redundancy == (N - K) / K


def test_example_i_intersections():
    lay = product.build_preset("example-i")
    sizes = lay.intersection_sizes()
    assert sizes.shape == (32, 64)
    values, counts = np.unique(sizes, return_counts=True)
    assert dict(zip(values.tolist(), counts.tolist())) == {61: 1920, 62: 128}
    assert (sizes.sum(axis=0) == 1954).all()
    assert (sizes.sum(axis=1) == 3908).all()  # whole row codewords sit in the column data


def test_example_ii_intersections():
    sizes = product.build_preset("example-ii").intersection_sizes()
    assert set(np.unique(sizes).tolist()) <= {59, 60, 61}
    assert (sizes.sum(axis=0) == 1930).all()


def test_true_product_membership():
    lay = product.build_preset("sp-bch")
    rows, cols = lay.row_of_cell, lay.col_of_cell
    assert (cols >= 0).all()
    assert (rows[: 960 * 987] >= 0).all() and (rows[960 * 987 :] == -1).all()
    assert lay.membership(0) == (0, 960)
    assert lay.membership(991 * 987 + 986) == (None, 960 + 986)


@pytest.mark.parametrize("name", ["toy-15-7", "example-i", "example-ib", "example-ii", "sp-bch"])
def test_encoded_blocks_are_clean(name):
    lay = product.build_preset(name)
    blk = random_block(lay, 1)
    assert product.is_clean(lay, blk)
    assert (blk.info() == blk.flat[lay.info_cells]).all()
    assert blk.transmitted().size == lay.total_bits
    out, trace = product.decode_block(lay, blk)
    assert trace.clean and trace.iterations_used == 0
    assert (out.bits == blk.bits).all()


def test_true_product_parity_rows_are_row_codewords():
    lay = product.build_preset("sp-bch")
    blk = random_block(lay, 2)
    spec = lay.row_groups[0].spec
    bottom = blk.bits[960:, :]
    assert bch.is_codeword_many(spec, bottom).all()


def test_layout_roundtrip(tmp_path):
    for name in ("example-ib", "sp-bch"):
        lay = product.build_preset(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(product.export_layout(lay), indent=2))
        back = product.load_layout(path)
        assert (back.height, back.width, back.total_bits, back.info_bits) == (
            lay.height, lay.width, lay.total_bits, lay.info_bits)
        assert (back.info_cells == lay.info_cells).all()


def test_layout_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "kind": "pseudo",\n  "rows": [\n}')
    with pytest.raises(LayoutError, match="line 4"):
        product.load_layout(bad)
    desc = product.export_layout(product.build_preset("example-i"))
    desc["cols"][0]["multiplicity"] = 63
    with pytest.raises(LayoutError):
        product.layout_from_dict(desc)
    desc = product.export_layout(product.build_preset("sp-bch"))
    desc["matrix"]["height"] = 991
    with pytest.raises(LayoutError):
        product.layout_from_dict(desc)
    with pytest.raises(LayoutError):
        product.layout_from_dict({"kind": "nonsense", "rows": [], "cols": []})


def test_column_major_order_is_a_permutation():
    lay = product.build_preset("example-ib")
    desc = product.export_layout(lay)
    desc["transmission_order"] = "column-major"
    cm = product.layout_from_dict(desc)
    assert sorted(cm.tx_order.tolist()) == sorted(lay.tx_order.tolist())
    # consecutive transmitted bits run down a column
    assert cm.tx_order[1] - cm.tx_order[0] == cm.width


def test_unknown_preset():
    with pytest.raises(KeyError):
        product.build_preset("nope")
    assert product.build_preset("SpBch") is product.build_preset("sp-bch")


def test_policy_validation():
    with pytest.raises(ValueError):
        DecodePolicy(max_iterations=0)
    with pytest.raises(ValueError):
        DecodePolicy(revert_scope="own")


TOY = product.build_preset("toy-15-7")


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 224), max_size=5, unique=True), st.booleans())
def test_toy_corrects_any_five_errors(cells, reverting):
    blk = random_block(TOY, 3)
    rx = blk.copy()
    rx.flat[cells] ^= 1
    out, trace = product.decode_block(TOY, rx, DecodePolicy(4, reverting))
    assert trace.clean
    assert (out.bits == blk.bits).all()


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_rows_within_t_clean_in_one_iteration(data):
    lay = product.build_preset("example-i")
    blk = random_block(lay, 4)
    rx = blk.copy()
    for g in lay.row_groups:
        for r in range(0, g.count, 7):
            w = data.draw(st.integers(0, g.spec.t))
            pos = data.draw(st.lists(st.integers(0, g.spec.n - 1), min_size=w, max_size=w, unique=True))
            rx.flat[g.cells[r, pos]] ^= 1
    out, trace = product.decode_block(lay, rx)
    assert trace.clean and trace.iterations_used <= 1
    assert (out.bits == blk.bits).all()


@pytest.mark.parametrize("reverting", [False, True])
def test_dead_patterns_survive(reverting):
    sp = product.build_preset("sp-bch")
    rx = product.inject_dead_pattern(sp, random_block(sp, 5), ErrorPattern(4, 4), rng_seed=1)
    out, trace = product.decode_block(sp, rx, DecodePolicy(20, reverting))
    assert not trace.clean
    assert int((out.bits != rx.bits).sum()) == 0

    ex = product.build_preset("example-i")
    blk = random_block(ex, 6)
    rx = product.inject_dead_pattern(ex, blk, ErrorPattern(1, 1, 8), rng_seed=2)
    assert int((rx.bits != blk.bits).sum()) == 8
    _, trace = product.decode_block(ex, rx, DecodePolicy(20, reverting))
    assert not trace.clean
    rx = product.inject_dead_pattern(ex, blk, ErrorPattern(1, 1, 7), rng_seed=2)
    out, trace = product.decode_block(ex, rx, DecodePolicy(20, reverting))
    assert trace.clean and (out.bits == blk.bits).all()


def test_dead_pattern_fit_checks():
    ex = product.build_preset("example-i")
    blk = random_block(ex, 7)
    with pytest.raises(PatternDoesNotFit):
        product.inject_dead_pattern(ex, blk, ErrorPattern(33, 1))
    with pytest.raises(PatternDoesNotFit):
        product.inject_dead_pattern(ex, blk, ErrorPattern(1, 1, 70))
    assert ErrorPattern.parse("4x4") == ErrorPattern(4, 4, None)


def test_default_errors_per_crosspoint():
    ex = product.build_preset("example-ii")
    blk = random_block(ex, 8)
    rx = product.inject_dead_pattern(ex, blk, ErrorPattern(2, 1), rng_seed=0)
    assert int((rx.bits != blk.bits).sum()) == 2 * 4  # min(t_row, t_col) + 1 per crosspoint


@pytest.mark.parametrize("start", [0, 493, 986, 979104 - 2961])
def test_bursts_within_column_capacity_decode(start):
    sp = product.build_preset("sp-bch")
    blk = random_block(sp, 9)
    rx = product.inject_burst(sp, blk, start, 2961)
    assert int((rx.bits != blk.bits).sum()) == 2961
    out, trace = product.decode_block(sp, rx, DecodePolicy(7, False))
    assert trace.clean and (out.bits == blk.bits).all()


def test_burst_range_checks():
    sp = product.build_preset("toy-15-7")
    blk = random_block(sp)
    with pytest.raises(OutOfRange):
        product.inject_burst(sp, blk, 200, 30)
    with pytest.raises(OutOfRange):
        product.inject_burst(sp, blk, -1, 3)
    rx = product.inject_burst(sp, blk, None, 5, rng_seed=3)
    assert int((rx.bits != blk.bits).sum()) == 5


def test_revert_step_uses_previous_phase_provenance():
    lay = TOY
    trace = DecodeTrace(lay, np.full(lay.height * lay.width, -1, dtype=np.int32))
    assert product.revert_step(trace, 0, "row").size == 0
    trace.phases.append(product.PhaseRecord(1, "row", np.zeros(0, np.int64), np.zeros(0, np.int8)))
    trace.phases.append(product.PhaseRecord(1, "col", np.zeros(0, np.int64), np.zeros(0, np.int8)))
    row0 = lay.code_cells(0)
    trace.provenance[row0[[1, 4]]] = 1   # flipped by the column phase
    trace.provenance[row0[6]] = 0        # older
    got = product.revert_step(trace, 0, "row")
    assert sorted(got.tolist()) == sorted(row0[[1, 4]].tolist())
    with pytest.raises(ValueError):
        product.revert_step(trace, 0, "col")


def test_reverting_undoes_a_miscorrection():
    # Twelve random errors on the toy code: some rows and columns
    # miscorrect and the next phase sees the extra flips.  Whatever
    # happens, every reverted cell must have been flipped by the phase
    # right before the one that reverted it.
    rng = np.random.default_rng(0)
    seen_revert = False
    for trial in range(200):
        blk = random_block(TOY, trial)
        rx = blk.copy()
        cells = rng.choice(TOY.height * TOY.width, 12, replace=False)
        rx.flat[cells] ^= 1
        _, trace = product.decode_block(TOY, rx, DecodePolicy(6, True))
        flipped_in = {}
        for seq, rec in enumerate(trace.phases):
            for cid, cs in rec.corrections.items():
                for c in cs.tolist():
                    flipped_in[c] = seq
            for cid, cs in rec.reverted.items():
                seen_revert = True
                assert all(flipped_in.get(c) == seq - 1 for c in cs.tolist())
    assert seen_revert


def test_trace_summary_and_counts():
    ex = product.build_preset("example-i")
    blk = random_block(ex, 10)
    rx = blk.copy()
    rx.flat[ex.row_groups[0].cells[0, :3]] ^= 1
    _, trace = product.decode_block(ex, rx)
    lines = trace.summary()
    assert lines[0].startswith("iter 1 row: decoded 1 codes")
    assert trace.phases[0].n_corrected == 3
    assert lines[-1] == "final: clean after 1 iteration(s)"


def test_kind_flags():
    assert product.build_preset("sp-bch").kind is Kind.TRUE
    assert product.build_preset("example-i").kind is Kind.PSEUDO
