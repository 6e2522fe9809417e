"""Hard-decision BPSK over AWGN.

The decoder sees a binary symmetric channel with crossover probability
``e_in = Q(sqrt(2 R Eb/N0))``.  Noise is applied as independent Bernoulli
flips at that probability, which is equivalent to thresholding Gaussian
samples and much cheaper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc
from scipy.stats import norm

__all__ = [
    "ChannelPoint",
    "DomainError",
    "RngStream",
    "ber_to_ebn0",
    "ebn0_to_ber",
    "flip_bits",
    "ncg",
    "q_factor",
]


class DomainError(ValueError):
    """A probability or rate outside the region where the formula applies."""


def ebn0_to_ber(ebn0_db, rate: float = 1.0):
    """Raw hard-decision bit error probability at ``ebn0_db`` and code rate."""
    if not 0 < rate <= 1:
        raise DomainError(f"rate must be in (0, 1], got {rate}")
    snr = rate * np.power(10.0, np.asarray(ebn0_db, dtype=float) / 10.0)
    out = 0.5 * erfc(np.sqrt(snr))
    return float(out) if np.ndim(out) == 0 else out


def q_factor(p: float) -> float:
    """Inverse Gaussian tail: the ``x`` with ``Q(x) = p``."""
    if not 0 < p < 0.5:
        raise DomainError(f"probability must be in (0, 0.5), got {p}")
    return float(norm.isf(p))


def ber_to_ebn0(e_in: float, rate: float = 1.0) -> float:
    """Inverse of :func:`ebn0_to_ber`, in dB."""
    if not 0 < rate <= 1:
        raise DomainError(f"rate must be in (0, 1], got {rate}")
    q = q_factor(e_in)
    return 10.0 * math.log10(q * q / (2.0 * rate))


def ncg(target_ber: float, tolerable_e_in: float, rate: float) -> float:
    """Net coding gain in dB (Q-factor convention of G.975.1)."""
    if not 0 < rate <= 1:
        raise DomainError(f"rate must be in (0, 1], got {rate}")
    return (
        20.0 * math.log10(q_factor(target_ber))
        - 20.0 * math.log10(q_factor(tolerable_e_in))
        + 10.0 * math.log10(rate)
    )


@dataclass(frozen=True)
class ChannelPoint:
    ebn0_db: float
    rate: float
    e_in: float

    @classmethod
    def at(cls, ebn0_db: float, rate: float) -> "ChannelPoint":
        return cls(ebn0_db, rate, ebn0_to_ber(ebn0_db, rate))


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream keyed by ``(seed, stream)``.

    ``generator(i)`` returns an independent Philox generator for block
    ``i``; the same triple always produces the same numbers no matter which
    worker asks for it.
    """

    seed: int
    stream: int = 0

    def generator(self, index: int = 0) -> np.random.Generator:
        key = self.seed & ((1 << 128) - 1)
        counter = [0, 0, index & 0xFFFFFFFFFFFFFFFF, self.stream & 0xFFFFFFFFFFFFFFFF]
        return np.random.Generator(np.random.Philox(key=key, counter=counter))


def flip_bits(bits: np.ndarray, e_in: float, rng: np.random.Generator | RngStream) -> tuple[np.ndarray, int]:
    """Flip each bit independently with probability ``e_in``.

    Returns the corrupted copy and the number of flips.
    """
    if not 0 <= e_in < 0.5:
        raise DomainError(f"e_in must be in [0, 0.5), got {e_in}")
    if isinstance(rng, RngStream):
        rng = rng.generator()
    bits = np.asarray(bits)
    if e_in == 0:
        return bits.copy(), 0
    # A binomial count followed by a uniform subset of that size has the same
    # law as independent flips, and costs O(flips) instead of O(bits).
    n = int(rng.binomial(bits.size, e_in))
    pos = rng.choice(bits.size, n, replace=False, shuffle=False)
    out = bits.copy()
    out.reshape(-1)[pos] ^= 1
    return out, n
