"""Product and pseudo-product BCH codes: encoding, iterative decoding, error floors."""

from superfec import bch, channel, floor, galois, product

__version__ = "0.1.0"

__all__ = ["bch", "channel", "floor", "galois", "product", "__version__"]
