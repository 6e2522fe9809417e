"""Floor bounds against simulation on a toy true product, BCH(15,7)^2.

With t=2 rows and columns a single crosspoint never kills a row, so the
Type-11 bound is zero here.  The smallest dead pattern is a fully wrong
3x3 square, and the simulated BER sits above that bound.  The layout is
also written to JSON and read back, the format ``--layout`` accepts.
"""

import json
import tempfile
from pathlib import Path

from superfec import floor, product, sim
from superfec.product import DecodePolicy


def main():
    toy = product.build_preset("toy-15-7")
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "toy.json"
        path.write_text(json.dumps(product.export_layout(toy), indent=2))
        toy = product.load_layout(path)
    print(repr(toy))

    e_grid = (0.01, 0.02, 0.03, 0.04)
    cfg = sim.SimConfig(preset="toy-15-7", policy=DecodePolicy(10, False), e_in=e_grid,
                        min_block_errors=200, max_blocks=20_000, seed=3)
    recs = sim.run_sweep(cfg)
    q11 = floor.layout_patterns(toy, include_21=False)["q11"]
    print("    e_in    sim BER [95% CI]                  Type-11   3x3 square bound")
    for r in recs:
        sq = floor.q_square(toy.height, toy.width, 3, 3, r.e_in)
        t11 = floor.q11_generic(q11, r.e_in, terms=None)
        print(f"  {r.e_in:6.3f}  {r.ber_out:.2e} [{r.ber_lo:.2e}, {r.ber_hi:.2e}]   {t11:7.1e}   {sq:.2e}")


if __name__ == "__main__":
    main()
