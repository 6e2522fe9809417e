"""Error-floor bounds and the net coding gain they imply.

Prints the NCG table for every preset at an output BER of 1e-15, then the
SP-BCH Type-44 bound over a range of Eb/N0.
"""

import numpy as np

from superfec import channel, floor, product
from superfec.cli import ncg_table

TARGET = 1e-15


def main():
    print(f"NCG at output BER {TARGET:g}")
    for row in ncg_table(TARGET):
        print("  " + "  ".join(f"{c:>14}" for c in row))

    sp = product.build_preset("sp-bch")
    print(f"\n{sp!r}, rate {sp.rate:.4f}")
    print("  Eb/N0 [dB]      e_in        q44 (printed)   q44 (info-bit normalized)")
    for ebn0 in np.arange(5.0, 7.01, 0.25):
        e = channel.ebn0_to_ber(ebn0, sp.rate)
        lit = floor.q_preset("sp-bch", e, "printed", cross_check=True)
        der = floor.q_preset("sp-bch", e, "derived")
        print(f"  {ebn0:10.2f}  {e:10.4e}  {lit.total_q:14.3e}   {der.total_q:14.3e}")

    # The same Type-11 machinery works on any layout read off its intersections.
    ex = product.build_preset("example-ii")
    pats = floor.layout_patterns(ex)
    e = floor.preset_ncg("example-ii", TARGET, ex.rate).e_in
    print(f"\nExample Code-II at its crossing e_in = {e:.4e}:")
    print(f"  printed Type-11 + Type-21 sum   {floor.q_preset('example-ii', e).total_q:.3e}")
    q11 = floor.q11_generic(pats["q11"], e, terms=None)
    q21 = floor.q21_generic(pats["q21"], e, terms=None)
    print(f"  generic q11 + q21 from the layout   {q11 + q21:.3e} (q11 {q11:.3e}, q21 {q21:.3e})")


if __name__ == "__main__":
    main()
