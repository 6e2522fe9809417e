"""Plain against reverting decoding of SP-BCH in the waterfall.

Both arms see exactly the same noise (same seed, same stream), so the
comparison is paired.  A few hundred blocks per point keeps this quick;
the acceptance test runs the same comparison to 200 failures per arm.
"""

from superfec import sim
from superfec.product import DecodePolicy

E_IN = (4.5e-3, 4.6e-3, 4.7e-3)
BLOCKS = 200


def main():
    arms = {"plain, 10 iters": DecodePolicy(10, False), "revert, 7 iters": DecodePolicy(7, True)}
    print(f"{'e_in':>8}  " + "  ".join(f"{k:>26}" for k in arms))
    results = {}
    for label, policy in arms.items():
        cfg = sim.SimConfig(preset="sp-bch", policy=policy, e_in=E_IN,
                            min_block_errors=10**9, max_blocks=BLOCKS, seed=7)
        results[label] = sim.run_sweep(cfg)
    for i, e in enumerate(E_IN):
        cells = []
        for label in arms:
            r = results[label][i]
            cells.append(f"FER {r.fer:.3f} [{r.fer_lo:.3f}, {r.fer_hi:.3f}]")
        print(f"{e:8.2e}  " + "  ".join(f"{c:>26}" for c in cells))


if __name__ == "__main__":
    main()
