"""Solid bursts in SP-BCH.

Bursts up to three full row widths (2961 bits) spread at most three
errors into every column code, which the t=3 columns always correct.
One bit more and some column sees four.
"""

import numpy as np

from superfec import product
from superfec.product import DecodePolicy


def main():
    sp = product.build_preset("sp-bch")
    sent = product.encode_block(sp, np.random.default_rng(1).integers(0, 2, sp.info_bits, dtype=np.uint8))
    policy = DecodePolicy(10, False)
    offsets = np.random.default_rng(2).choice(sp.width, 8, replace=False)
    for length in (2961, 2962, 3500):
        clean = 0
        for off in offsets:
            rx = product.inject_burst(sp, sent, int(off), length)
            out, trace = product.decode_block(sp, rx, policy)
            clean += trace.clean and bool((out.bits == sent.bits).all())
        print(f"burst length {length}: {clean}/{offsets.size} sampled offsets decode Clean")


if __name__ == "__main__":
    main()
