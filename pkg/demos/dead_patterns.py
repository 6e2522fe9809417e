"""Dead patterns are fixed points of iterative decoding.

A 4x4 square of single errors in SP-BCH and an 8-bit cluster in one
row/column intersection of Example Code-I survive any number of
iterations, with or without reverting.  Seven bits in the same
intersection are corrected by the column code.
"""

import numpy as np

from superfec import product
from superfec.product import DecodePolicy, ErrorPattern


def run(layout, pattern, policy, seed=0):
    rng = np.random.default_rng(seed)
    sent = product.encode_block(layout, rng.integers(0, 2, layout.info_bits, dtype=np.uint8))
    rx = product.inject_dead_pattern(layout, sent, pattern, rng_seed=seed)
    out, trace = product.decode_block(layout, rx, policy)
    residual = int((out.bits != sent.bits).sum())
    return trace, residual


def main():
    cases = [
        ("sp-bch", ErrorPattern(4, 4)),
        ("example-i", ErrorPattern(1, 1, 8)),
        ("example-i", ErrorPattern(1, 1, 7)),
    ]
    for name, pat in cases:
        layout = product.build_preset(name)
        print(f"\n{name}: {pat.rows}x{pat.cols} pattern, {pat.errors or 'default'} error(s) per intersection")
        for policy in (DecodePolicy(20, False), DecodePolicy(20, True)):
            trace, residual = run(layout, pat, policy)
            tag = "revert" if policy.reverting else "plain "
            print(f"  {tag} 20 iters -> {trace.final_status}, {residual} residual bit errors")
        for line in trace.summary()[:4]:
            print("    " + line)


if __name__ == "__main__":
    main()
