"""Shortened and parity-extended binary BCH component codes.

Codeword layout (length ``n``)::

    [ info (k) | cyclic parity (n0 - k) | extension parity (0..2) ]

The first ``n0 = n - extension_bits`` bits form a shortened cyclic
codeword.  Index ``i`` in that part is the coefficient of
``x**(n0 - 1 - i)``, so the information bits sit at the high-degree end and
the ``shorten_by`` suppressed positions are the degrees ``n0 .. 2^m - 2``.

Extension bit 1 is even parity over the cyclic part; extension bit 2 is
even parity over the odd-indexed bits of the cyclic part.

Decoding is bounded-distance: at most ``t`` errors (extension bits
included) are corrected, anything else is reported uncorrectable and the
word is left untouched.  Two locator solvers are provided:

``Solver.BM``
    Inversionless Berlekamp-Massey followed by a Chien search.
``Solver.DIRECT``
    Closed-form Peterson solution for ``t <= 3`` with table-based
    quadratic/cubic root extraction; no search over positions.

Both run vectorised over a batch of words and are followed by the same
syndrome re-check, so they return identical results on every input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from superfec.galois import GaloisField, field, poly_degree, poly_lcm

__all__ = [
    "BatchDecode",
    "BchSpec",
    "DecodeOutcome",
    "InconsistentParameters",
    "LengthMismatch",
    "Solver",
    "Status",
    "bch_spec",
    "decode",
    "decode_many",
    "encode",
    "encode_many",
    "is_codeword_many",
    "make_spec",
    "syndromes",
]


class InconsistentParameters(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class Status(enum.IntEnum):
    UNCHANGED = 0
    CORRECTED = 1
    UNCORRECTABLE = 2


class Solver(str, enum.Enum):
    BM = "bm"
    DIRECT = "direct"


@dataclass(frozen=True, eq=False)
class BchSpec:
    """Parameters of one component code; build with :func:`make_spec`."""

    field: GaloisField
    t: int
    k: int
    shorten_by: int
    extension_bits: int
    generator: int

    @property
    def native_length(self) -> int:
        return self.field.order

    @property
    def n_cyclic(self) -> int:
        return self.field.order - self.shorten_by

    @property
    def n(self) -> int:
        return self.n_cyclic + self.extension_bits

    @property
    def parity_bits(self) -> int:
        """Cyclic parity bits, ``deg(generator)``."""
        return self.n_cyclic - self.k

    @property
    def default_solver(self) -> Solver:
        return Solver.DIRECT if self.t <= 3 else Solver.BM

    def __repr__(self) -> str:
        ext = f", ext={self.extension_bits}" if self.extension_bits else ""
        return f"BCH({self.n}, {self.k}, t={self.t}{ext}; m={self.field.m})"

    def describe(self) -> dict:
        return {
            "m": self.field.m,
            "t": self.t,
            "k": self.k,
            "shorten": self.shorten_by,
            "extension": self.extension_bits,
        }

    # -- encoder tables ---------------------------------------------------

    @cached_property
    def parity_matrix(self) -> np.ndarray:
        """(k, n0 - k) binary matrix P with cyclic parity = info @ P mod 2."""
        r = self.parity_bits
        g = self.generator
        top = 1 << r
        rem = g ^ top  # x^r mod g
        rows = np.zeros((self.k, r), dtype=np.uint8)
        nbytes = (r + 7) // 8
        # Info index i multiplies x^(r + k - 1 - i); walk degrees upward.
        for deg_off in range(self.k):
            # Parity index p holds degree r - 1 - p, i.e. big-endian bits.
            bits = np.unpackbits(
                np.frombuffer(rem.to_bytes(nbytes, "big"), dtype=np.uint8)
            )[-r:]
            rows[self.k - 1 - deg_off] = bits
            rem <<= 1
            if rem & top:
                rem ^= g
        rows.setflags(write=False)
        return rows

    @cached_property
    def parity_matrix_f32(self) -> np.ndarray:
        return self.parity_matrix.astype(np.float32)

    # -- decoder tables ---------------------------------------------------

    @cached_property
    def degrees(self) -> np.ndarray:
        """Polynomial degree of each cyclic-part index."""
        return np.arange(self.n_cyclic - 1, -1, -1, dtype=np.int64)

    @cached_property
    def check_matrix(self) -> np.ndarray:
        """(n0, t*m) float32 matrix: bits of alpha^(j*deg) for odd j <= 2t-1."""
        gf = self.field
        m = gf.m
        cols = []
        for j in range(1, 2 * self.t, 2):
            vals = gf.exp[(j * self.degrees) % gf.order]
            cols.append((vals[:, None] >> np.arange(m)) & 1)
        h = np.concatenate(cols, axis=1).astype(np.float32)
        h.setflags(write=False)
        return h

    @cached_property
    def odd_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_cyclic, dtype=np.float32)
        mask[1::2] = 1
        return mask


@dataclass(frozen=True)
class DecodeOutcome:
    status: Status
    corrected_positions: tuple[int, ...] = ()
    syndrome_zero: bool = True


@dataclass
class BatchDecode:
    """Result of :func:`decode_many`; row ``b`` belongs to input word ``b``."""

    corrected: np.ndarray
    flips: np.ndarray
    status: np.ndarray
    syndrome_zero: np.ndarray = dc_field(repr=False)

    def outcome(self, b: int) -> DecodeOutcome:
        return DecodeOutcome(
            Status(int(self.status[b])),
            tuple(np.flatnonzero(self.flips[b]).tolist()),
            bool(self.syndrome_zero[b]),
        )


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def make_spec(
    m: int,
    t: int,
    k: int | None = None,
    shorten_by: int = 0,
    extension_bits: int = 0,
    primitive_poly: int | None = None,
) -> BchSpec:
    """Build a (shortened, extended) narrow-sense binary BCH code.

    The generator is the lcm of the minimal polynomials of alpha^1..alpha^2t.
    If ``k`` is given it must match ``2^m - 1 - shorten_by - deg(g)``.
    """
    if t < 1:
        raise InconsistentParameters("t must be >= 1")
    if extension_bits not in (0, 1, 2):
        raise InconsistentParameters("extension_bits must be 0, 1 or 2")
    gf = field(m, primitive_poly)
    g = 1
    for i in range(1, 2 * t + 1):
        g = poly_lcm(g, gf.minimal_polynomial(gf.alpha(i)))
    r = poly_degree(g)
    k_native = gf.order - r
    k_actual = k_native - shorten_by
    if shorten_by < 0 or k_actual < 1:
        raise InconsistentParameters(
            f"cannot shorten BCH({gf.order}, {k_native}) by {shorten_by}"
        )
    if k is not None and k != k_actual:
        raise InconsistentParameters(
            f"k={k} but generator degree {r} gives k={k_actual} "
            f"for m={m}, t={t}, shorten_by={shorten_by}"
        )
    return BchSpec(gf, t, k_actual, shorten_by, extension_bits, g)


def bch_spec(n: int, k: int, t: int, extension_bits: int = 0, m: int | None = None) -> BchSpec:
    """Build a code from its transmitted ``(n, k, t)`` description.

    ``m`` defaults to the smallest degree whose native length covers
    ``n - extension_bits``.
    """
    n0 = n - extension_bits
    if m is None:
        m = max(4, int(n0).bit_length())
    shorten = (1 << m) - 1 - n0
    if shorten < 0:
        raise InconsistentParameters(f"n={n} does not fit GF(2^{m})")
    return make_spec(m, t, k, shorten, extension_bits)


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def _extension(spec: BchSpec, cyclic: np.ndarray) -> np.ndarray:
    """Extension parity bits for a (B, n0) batch -> (B, extension_bits) uint8."""
    cols = []
    if spec.extension_bits >= 1:
        cols.append(np.bitwise_xor.reduce(cyclic, axis=1))
    if spec.extension_bits >= 2:
        cols.append(np.bitwise_xor.reduce(cyclic[:, 1::2], axis=1))
    if not cols:
        return np.zeros((cyclic.shape[0], 0), dtype=np.uint8)
    return np.stack(cols, axis=1).astype(np.uint8)


def encode_many(spec: BchSpec, info: np.ndarray) -> np.ndarray:
    """Systematically encode a (B, k) batch into (B, n) codewords."""
    info = np.asarray(info, dtype=np.uint8)
    if info.ndim != 2 or info.shape[1] != spec.k:
        raise LengthMismatch(f"expected (B, {spec.k}) info bits, got {info.shape}")
    parity = (info.astype(np.float32) @ spec.parity_matrix_f32) % 2
    cyclic = np.concatenate([info, parity.astype(np.uint8)], axis=1)
    return np.concatenate([cyclic, _extension(spec, cyclic)], axis=1)


def encode(spec: BchSpec, info) -> np.ndarray:
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (spec.k,):
        raise LengthMismatch(f"expected {spec.k} info bits, got {info.shape}")
    return encode_many(spec, info[None, :])[0]


# ---------------------------------------------------------------------------
# syndromes
# ---------------------------------------------------------------------------

def _pack(bits: np.ndarray, t: int, m: int) -> np.ndarray:
    return (bits.reshape(bits.shape[0], t, m).astype(np.int64) << np.arange(m)).sum(axis=2)


def syndromes(spec: BchSpec, words: np.ndarray) -> np.ndarray:
    """Odd syndromes S1, S3, ..., S(2t-1) of the cyclic part: (B, t) ints."""
    cyc = np.asarray(words)[:, : spec.n_cyclic]
    bits = (cyc.astype(np.float32) @ spec.check_matrix) % 2
    return _pack(bits, spec.t, spec.field.m)


def _ext_mismatch(spec: BchSpec, words: np.ndarray, cyclic: np.ndarray) -> np.ndarray:
    """(B, extension_bits) bool: received extension bit disagrees with ``cyclic``."""
    n0 = spec.n_cyclic
    return (words[:, n0:] ^ _extension(spec, cyclic)).astype(bool)


def is_codeword_many(spec: BchSpec, words: np.ndarray) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint8)
    ok = ~np.any(syndromes(spec, words) != 0, axis=1)
    if spec.extension_bits:
        ok &= ~np.any(_ext_mismatch(spec, words, words[:, : spec.n_cyclic]), axis=1)
    return ok


def _full_syndromes(gf: GaloisField, odd: np.ndarray, t: int) -> np.ndarray:
    """S1..S2t from the odd ones using S(2j) = S(j)^2."""
    full = np.zeros((odd.shape[0], 2 * t), dtype=np.int64)
    for j in range(1, 2 * t + 1):
        if j % 2:
            full[:, j - 1] = odd[:, j // 2]
        else:
            s = full[:, j // 2 - 1]
            full[:, j - 1] = gf.vmul(s, s)
    return full


# ---------------------------------------------------------------------------
# locator solvers; both return (B, t) error degrees padded with -1 and a
# per-row "found" flag.  Degrees are unchecked against the shortened range.
# ---------------------------------------------------------------------------

def _solve_bm(spec: BchSpec, odd: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gf = spec.field
    t = spec.t
    s = _full_syndromes(gf, odd, t)
    nb = s.shape[0]
    width = 2 * t + 2
    c = np.zeros((nb, width), dtype=np.int64)
    c[:, 0] = 1
    bs = np.zeros((nb, width), dtype=np.int64)
    bs[:, 1] = 1  # x^m B(x) with B = 1, m = 1
    length = np.zeros(nb, dtype=np.int64)
    b = np.ones(nb, dtype=np.int64)

    def shift(p):
        out = np.zeros_like(p)
        out[:, 1:] = p[:, :-1]
        return out

    # Binary BCH: discrepancies at odd steps vanish, so only even steps run.
    for step in range(0, 2 * t, 2):
        d = np.zeros(nb, dtype=np.int64)
        for i in range(min(step, width - 1) + 1):
            d ^= gf.vmul(c[:, i], s[:, step - i])
        new_c = gf.vmul(b[:, None], c) ^ gf.vmul(d[:, None], bs)
        grow = (d != 0) & (2 * length <= step)
        bs = shift(np.where(grow[:, None], shift(c), shift(bs)))
        length = np.where(grow, step + 1 - length, length)
        b = np.where(grow, d, b)
        c = new_c

    found = np.zeros(nb, dtype=bool)
    degs = np.full((nb, t), -1, dtype=np.int64)
    cand = np.flatnonzero((length <= t) & (length > 0))
    if cand.size:
        lam = c[cand, : t + 1]
        ln = length[cand]
        ok = lam[np.arange(cand.size), ln] != 0
        roots = _chien(gf, lam, spec.n_cyclic)
        count = roots.sum(axis=1)
        ok &= count == ln
        for row in np.flatnonzero(ok):
            r = np.flatnonzero(roots[row])
            degs[cand[row], : r.size] = r
        found[cand[ok]] = True
    return degs, found


_CHIEN_CHUNK = 1 << 22


def _chien(gf: GaloisField, lam: np.ndarray, n0: int) -> np.ndarray:
    """(B, n0) bool: locator vanishes at alpha^-d for degree d."""
    nb, w = lam.shape
    d = np.arange(n0, dtype=np.int64)
    loglam = gf.log[lam]
    nz = lam != 0
    out = np.empty((nb, n0), dtype=bool)
    rows = max(1, _CHIEN_CHUNK // max(1, n0 * w))
    for lo in range(0, nb, rows):
        hi = min(nb, lo + rows)
        acc = np.zeros((hi - lo, n0), dtype=np.int64)
        for i in range(w):
            e = (loglam[lo:hi, i : i + 1] - i * d[None, :]) % gf.order
            acc ^= np.where(nz[lo:hi, i : i + 1], gf.exp[e], 0)
        out[lo:hi] = acc == 0
    return out


def _solve_direct(spec: BchSpec, odd: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gf = spec.field
    t = spec.t
    if t > 3:
        raise ValueError("the direct solver handles t <= 3 only")
    nb = odd.shape[0]
    s1 = odd[:, 0]
    s3 = odd[:, 1] if t >= 2 else np.zeros(nb, dtype=np.int64)
    s5 = odd[:, 2] if t >= 3 else np.zeros(nb, dtype=np.int64)
    roots = np.full((nb, 3), -1, dtype=np.int64)  # field elements X_i
    found = np.zeros(nb, dtype=bool)

    s1_3 = gf.vpow(s1, 3)
    if t == 1:
        single = s1 != 0
    elif t == 2:
        single = (s1 != 0) & (s3 == s1_3)
    else:
        single = (s1 != 0) & (s3 == s1_3) & (s5 == gf.vpow(s1, 5))
    roots[single, 0] = s1[single]
    found |= single

    if t >= 2:
        if t == 2:
            two = (s1 != 0) & ~single
            a = s1
            bq = gf.vdiv(s3 ^ s1_3, s1)
        else:
            dd = s1_3 ^ s3
            rest = dd != 0
            sig2 = gf.vdiv(gf.vmul(gf.vmul(s1, s1), s3) ^ s5, dd)
            sig3 = dd ^ gf.vmul(s1, sig2)
            two = rest & (sig3 == 0)
            three = rest & (sig3 != 0)
            a = s1
            bq = sig2
        # X^2 + a X + b with a, b != 0: X = a*y, y^2 + y = b / a^2.
        quad = two & (a != 0) & (bq != 0)
        c = gf.vdiv(bq, gf.vmul(a, a))
        y0 = gf.quadratic_table[np.where(quad, c, 0)]
        quad &= y0 >= 0
        roots[quad, 0] = gf.vmul(a[quad], y0[quad])
        roots[quad, 1] = gf.vmul(a[quad], y0[quad] ^ 1)
        found |= quad

        if t == 3:
            # X^3 + a X^2 + b X + c; X = Y + a gives Y^3 + p Y + q.
            idx = np.flatnonzero(three)
            a3, b3, c3 = s1[idx], sig2[idx], sig3[idx]
            p = gf.vmul(a3, a3) ^ b3
            q = gf.vmul(a3, b3) ^ c3
            sq = gf.vsqrt(p)
            # p != 0: Y = s V with s^2 = p, V^3 + V = q / s^3.
            arg = np.where(p != 0, gf.vdiv(q, gf.vpow(sq, 3)), q)
            croots, ccount = gf.cubic_table
            qroots, qcount = gf.cube_root_table
            vr = np.where((p != 0)[:, None], croots[arg], qroots[arg])
            vc = np.where(p != 0, ccount[arg], qcount[arg])
            scale = np.where(p != 0, sq, 1)
            ok = vc == 3
            xs = gf.vmul(scale[:, None], vr) ^ a3[:, None]
            ok &= np.all(xs != 0, axis=1)
            roots[idx[ok]] = xs[ok]
            found[idx[ok]] = True

    degs = np.where(roots > 0, gf.log[np.maximum(roots, 0)], -1)
    return degs[:, :t], found


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

def decode_many(spec: BchSpec, words, solver: Solver | str | None = None) -> BatchDecode:
    """Bounded-distance decode a (B, n) batch."""
    words = np.asarray(words, dtype=np.uint8)
    if words.ndim != 2 or words.shape[1] != spec.n:
        raise LengthMismatch(f"expected (B, {spec.n}) words, got {words.shape}")
    solver = Solver(solver) if solver is not None else spec.default_solver
    if solver is Solver.DIRECT and spec.t > 3:
        raise ValueError("the direct solver requires t <= 3")
    nb = words.shape[0]
    n0 = spec.n_cyclic
    cyc = words[:, :n0]
    odd = syndromes(spec, words)
    nonzero = np.any(odd != 0, axis=1)

    flips = np.zeros((nb, spec.n), dtype=bool)
    failed = np.zeros(nb, dtype=bool)
    idx = np.flatnonzero(nonzero)
    if idx.size:
        solve = _solve_direct if solver is Solver.DIRECT else _solve_bm
        degs, found = solve(spec, odd[idx])
        in_range = np.all((degs < n0), axis=1)
        found &= in_range
        rows, cols = np.nonzero((degs >= 0) & found[:, None])
        flips[idx[rows], n0 - 1 - degs[rows, cols]] = True
        # Re-check: the flip pattern must reproduce the syndromes exactly.
        sub = flips[idx, :n0]
        echo = _pack((sub.astype(np.float32) @ spec.check_matrix) % 2, spec.t, spec.field.m)
        found &= np.all(echo == odd[idx], axis=1)
        flips[idx[~found]] = False
        failed[idx[~found]] = True

    ext_mis = np.zeros((nb, spec.extension_bits), dtype=bool)
    syn_zero = ~nonzero
    if spec.extension_bits:
        ext_mis = _ext_mismatch(spec, words, cyc ^ flips[:, :n0])
        syn_zero &= ~np.any(_ext_mismatch(spec, words, cyc), axis=1)
        total = flips[:, :n0].sum(axis=1) + ext_mis.sum(axis=1)
        guard = ~failed & (total > spec.t)
        failed |= guard
        flips[failed] = False
        ok = ~failed
        flips[ok, n0:] = ext_mis[ok]

    status = np.where(
        failed,
        Status.UNCORRECTABLE,
        np.where(flips.any(axis=1), Status.CORRECTED, Status.UNCHANGED),
    ).astype(np.int8)
    corrected = words ^ flips.astype(np.uint8)
    return BatchDecode(corrected, flips, status, syn_zero)


def decode(spec: BchSpec, received, solver: Solver | str | None = None) -> tuple[DecodeOutcome, np.ndarray]:
    received = np.asarray(received, dtype=np.uint8)
    if received.shape != (spec.n,):
        raise LengthMismatch(f"expected {spec.n} bits, got {received.shape}")
    res = decode_many(spec, received[None, :], solver)
    return res.outcome(0), res.corrected[0]
