"""GF(2) polynomials and table-driven GF(2^m) arithmetic.

Polynomials over GF(2) are plain Python ints: bit ``i`` holds the
coefficient of ``x**i``.  Field elements are ints in ``[0, 2**m)`` read the
same way, reduced modulo the field's primitive polynomial.

The scalar API (:meth:`GaloisField.mul`, :meth:`GaloisField.inv`, ...) is
what the BCH code builder uses; the ``vmul``/``vpow`` family works on numpy
integer arrays and is what the batched decoders run on.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

__all__ = [
    "DEFAULT_PRIMITIVE_POLYS",
    "GaloisField",
    "NonPrimitivePolynomial",
    "build_field",
    "field",
    "poly_degree",
    "poly_mul",
    "poly_mod",
    "poly_divmod",
    "poly_lcm",
    "poly_gcd",
    "poly_from_exponents",
    "poly_to_str",
]

# x^m + ... + 1, one conventional primitive polynomial per degree.
DEFAULT_PRIMITIVE_POLYS = {
    4: 0b10011,  # x^4+x+1
    5: 0b100101,  # x^5+x^2+1
    6: 0b1000011,  # x^6+x+1
    7: 0b10001001,  # x^7+x^3+1
    8: 0b100011101,  # x^8+x^4+x^3+x^2+1
    9: 0b1000010001,  # x^9+x^4+1
    10: 0b10000001001,  # x^10+x^3+1
    11: 0b100000000101,  # x^11+x^2+1
    12: 0b1000001010011,  # x^12+x^6+x^4+x+1
}


class NonPrimitivePolynomial(ValueError):
    """The supplied modulus does not make ``x`` a generator of GF(2^m)*."""


# ---------------------------------------------------------------------------
# GF(2)[x]
# ---------------------------------------------------------------------------

def poly_degree(p: int) -> int:
    """Degree of ``p``; -1 for the zero polynomial."""
    return p.bit_length() - 1


def poly_from_exponents(*exponents: int) -> int:
    out = 0
    for e in exponents:
        out ^= 1 << e
    return out


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = poly_degree(b)
    q = 0
    while a and poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_lcm(a: int, b: int) -> int:
    return poly_divmod(poly_mul(a, b), poly_gcd(a, b))[0]


def poly_to_str(p: int) -> str:
    if p == 0:
        return "0"
    terms = []
    for e in range(poly_degree(p), -1, -1):
        if (p >> e) & 1:
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return "+".join(terms)


# ---------------------------------------------------------------------------
# GF(2^m)
# ---------------------------------------------------------------------------

class GaloisField:
    """GF(2^m) with log/antilog tables.

    Parameters
    ----------
    m : int
        Extension degree, 4..12.
    primitive_poly : int, optional
        Modulus as a bit vector.  Defaults to
        ``DEFAULT_PRIMITIVE_POLYS[m]``.

    Notes
    -----
    ``exp`` has length ``2 * order`` so that ``exp[log[a] + log[b]]`` never
    needs a modulo.  ``log[0]`` is set to 0 and must be masked by callers.
    """

    def __init__(self, m: int, primitive_poly: int | None = None) -> None:
        if not 4 <= m <= 12:
            raise ValueError(f"extension degree must be in 4..12, got {m}")
        if primitive_poly is None:
            primitive_poly = DEFAULT_PRIMITIVE_POLYS[m]
        if poly_degree(primitive_poly) != m:
            raise ValueError(
                f"primitive polynomial {poly_to_str(primitive_poly)} "
                f"does not have degree {m}"
            )
        self.m = m
        self.primitive_poly = primitive_poly
        self.size = 1 << m
        self.order = self.size - 1

        exp = np.zeros(2 * self.order, dtype=np.int64)
        log = np.zeros(self.size, dtype=np.int64)
        seen = np.zeros(self.size, dtype=bool)
        a = 1
        for i in range(self.order):
            if seen[a]:
                raise NonPrimitivePolynomial(
                    f"{poly_to_str(primitive_poly)}: x has order {i} < {self.order}"
                )
            seen[a] = True
            exp[i] = a
            log[a] = i
            a <<= 1
            if a & self.size:
                a ^= primitive_poly
        if a != 1:
            # Cannot happen once all 2^m - 1 powers are distinct, kept as a guard.
            raise NonPrimitivePolynomial(poly_to_str(primitive_poly))
        exp[self.order:] = exp[: self.order]
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp = exp
        self.log = log

    def __repr__(self) -> str:
        return f"GaloisField(m={self.m}, poly={poly_to_str(self.primitive_poly)})"

    # -- scalar arithmetic ------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^m)")
        return int(self.exp[(self.order - self.log[a]) % self.order])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self.exp[(self.log[a] * e) % self.order])

    def alpha(self, e: int = 1) -> int:
        """The primitive element raised to ``e``."""
        return int(self.exp[e % self.order])

    def eval_poly2(self, p: int, x: int) -> int:
        """Evaluate a GF(2)-coefficient polynomial at a field element (Horner)."""
        acc = 0
        for e in range(poly_degree(p), -1, -1):
            acc = self.mul(acc, x) ^ ((p >> e) & 1)
        return acc

    def conjugates(self, a: int) -> list[int]:
        """The cyclotomic coset of ``a``: a, a^2, a^4, ... until it repeats."""
        out = [a]
        b = self.mul(a, a)
        while b != a:
            out.append(b)
            b = self.mul(b, b)
        return out

    def minimal_polynomial(self, a: int) -> int:
        """Monic GF(2) polynomial of least degree with ``a`` as a root."""
        if a == 0:
            raise ValueError("minimal polynomial of 0 is x; not used for BCH")
        # Product of (x + c) over the conjugacy class, computed with
        # field-valued coefficients; the result lands in GF(2).
        coeffs = [1]
        for c in self.conjugates(a):
            nxt = [0] * (len(coeffs) + 1)
            for i, v in enumerate(coeffs):
                nxt[i + 1] ^= v
                nxt[i] ^= self.mul(v, c)
            coeffs = nxt
        out = 0
        for i, v in enumerate(coeffs):
            if v not in (0, 1):
                raise ArithmeticError("minimal polynomial has non-binary coefficient")
            out |= v << i
        return out

    def trace(self, a: int) -> int:
        """Absolute trace to GF(2)."""
        acc = 0
        b = a
        for _ in range(self.m):
            acc ^= b
            b = self.mul(b, b)
        return acc

    # -- vectorised arithmetic --------------------------------------------

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse; zero maps to zero (callers mask it)."""
        a = np.asarray(a)
        return np.where(a == 0, 0, self.exp[(self.order - self.log[a]) % self.order])

    def vdiv(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.vmul(a, self.vinv(b))

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a)
        out = self.exp[(self.log[a] * e) % self.order]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vsqrt(self, a: np.ndarray) -> np.ndarray:
        """Square root; every element of GF(2^m) has exactly one."""
        a = np.asarray(a)
        la = self.log[a]
        half = np.where(la % 2 == 0, la // 2, (la + self.order) // 2)
        return np.where(a == 0, 0, self.exp[half])

    # -- root tables for the closed-form small-t decoder ------------------

    @cached_property
    def quadratic_table(self) -> np.ndarray:
        """``y`` with ``y^2 + y = c``, indexed by ``c``; -1 when unsolvable.

        Of the two roots ``y`` and ``y + 1`` the even one is stored.
        Solvable exactly when ``trace(c) == 0``.
        """
        y = np.arange(self.size)
        c = self.vmul(y, y) ^ y
        table = np.full(self.size, -1, dtype=np.int64)
        even = (y & 1) == 0
        table[c[even]] = y[even]
        table.setflags(write=False)
        return table

    @cached_property
    def cubic_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Roots of ``v^3 + v = c`` indexed by ``c``: (roots[size, 3], count[size])."""
        return self._root_table(lambda v: self.vmul(self.vmul(v, v), v) ^ v)

    @cached_property
    def cube_root_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Roots of ``v^3 = c`` indexed by ``c``: (roots[size, 3], count[size])."""
        return self._root_table(lambda v: self.vmul(self.vmul(v, v), v))

    def _root_table(self, f) -> tuple[np.ndarray, np.ndarray]:
        v = np.arange(self.size)
        c = f(v)
        roots = np.full((self.size, 3), -1, dtype=np.int64)
        count = np.zeros(self.size, dtype=np.int64)
        for vi, ci in zip(v.tolist(), c.tolist()):
            roots[ci, count[ci]] = vi
            count[ci] += 1
        roots.setflags(write=False)
        count.setflags(write=False)
        return roots, count


_FIELD_CACHE: dict[tuple[int, int], GaloisField] = {}


def build_field(m: int, primitive_poly: int | None = None) -> GaloisField:
    """Construct GF(2^m), validating that the modulus is primitive."""
    return GaloisField(m, primitive_poly)


def field(m: int, primitive_poly: int | None = None) -> GaloisField:
    """Shared immutable instance of GF(2^m) (cached per modulus)."""
    if primitive_poly is None:
        primitive_poly = DEFAULT_PRIMITIVE_POLYS[m]
    key = (m, primitive_poly)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = GaloisField(m, primitive_poly)
    return _FIELD_CACHE[key]
