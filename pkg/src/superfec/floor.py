"""Analytic error-floor bounds for product and pseudo-product codes.

Every bound here is a sum of monomials ``coef * e^a * (1 - e)^b`` divided by
a bit count, where ``coef`` is an exact integer (products of binomials,
multiplicities and error-count weights).  A bound is built once as a list of
such terms and then evaluated two ways:

* in the log domain (``log coef + a log e + b log1p(-e)``, exponentiated
  against the largest term and added with ``math.fsum``), which is fast and
  does not underflow for values far below 1e-30;
* exactly, with :class:`fractions.Fraction`, as a cross-check.

Only the dead patterns that dominate at low BER are enumerated; their
contributions are simply added, since two such patterns in one block are
far less likely than one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Sequence

from superfec import channel
from superfec.channel import DomainError

__all__ = [
    "BoundQuery",
    "BoundResult",
    "Contribution",
    "DEFAULT_TRUNCATION",
    "DeadPattern",
    "NcgResult",
    "NoCrossing",
    "P11",
    "PRESET_FORMULAS",
    "PatternCase",
    "analytic_bdd_ber",
    "bdd_block_failure",
    "binom_tail",
    "evaluate_terms",
    "evaluate_terms_exact",
    "find_crossing",
    "floor_to_ncg",
    "iter_patterns",
    "log_evaluate_terms",
    "layout_patterns",
    "p11_example_code_i",
    "formula_patterns",
    "pattern_probability",
    "preset_ncg",
    "preset_terms",
    "rs_ncg",
    "q11_generic",
    "q21_generic",
    "q_preset",
    "q_square",
]

Term = tuple[int, int, int]  # (coef, power of e, power of 1 - e)

DEFAULT_TRUNCATION = 3


class NoCrossing(ValueError):
    """The bound never reaches the target BER for e_in in (0, 0.5)."""


# ---------------------------------------------------------------------------
# term evaluation
# ---------------------------------------------------------------------------

def _check_e(e_in: float) -> None:
    if not 0 <= e_in < 0.5:
        raise DomainError(f"e_in must be in [0, 0.5), got {e_in}")


def _log_terms(terms: Sequence[Term], e_in: float) -> list[float]:
    if e_in == 0:
        return [math.log(c) for c, a, _ in terms if a == 0 and c > 0]
    le = math.log(e_in)
    l1e = math.log1p(-e_in)
    return [math.log(c) + a * le + b * l1e for c, a, b in terms if c > 0]


def log_evaluate_terms(terms: Sequence[Term], e_in: float, divisor: int = 1) -> float:
    """Natural log of the bound; ``-inf`` for an empty or zero sum."""
    _check_e(e_in)
    logs = _log_terms(terms, e_in)
    if not logs:
        return -math.inf
    top = max(logs)
    return top + math.log(math.fsum(math.exp(x - top) for x in logs)) - math.log(divisor)


def evaluate_terms(terms: Sequence[Term], e_in: float, divisor: int = 1) -> float:
    return math.exp(log_evaluate_terms(terms, e_in, divisor))


def evaluate_terms_exact(terms: Sequence[Term], e_in, divisor: int = 1) -> Fraction:
    e = Fraction(e_in)
    one_minus = 1 - e
    total = Fraction(0)
    for c, a, b in terms:
        total += c * e**a * one_minus**b
    return total / divisor


def _cross_check(terms: Sequence[Term], e_in: float, divisor: int, value: float, rtol: float = 1e-6) -> bool:
    exact = evaluate_terms_exact(terms, e_in, divisor)
    if exact == 0:
        return value == 0
    return abs(Fraction(value) - exact) <= rtol * exact


# ---------------------------------------------------------------------------
# binomial tails
# ---------------------------------------------------------------------------

def _window(lo: int, hi: int, terms: int | None) -> range:
    if terms is not None:
        hi = min(hi, lo + terms - 1)
    return range(lo, hi + 1)


def binom_tail_terms(n: int, threshold: int, terms: int | None = None) -> list[Term]:
    return [(comb(n, i), i, n - i) for i in _window(threshold, n, terms)]


def binom_tail(n: int, threshold: int, e_in: float, terms: int | None = None) -> float:
    """P(at least ``threshold`` of ``n`` bits are wrong).

    ``terms`` keeps only the first ``terms`` summands ``i = threshold,
    threshold + 1, ...``, which gives a lower bound on the tail.
    """
    if threshold > n:
        raise ValueError(f"threshold {threshold} exceeds segment length {n}")
    return evaluate_terms(binom_tail_terms(n, max(threshold, 0), terms), e_in)


# ---------------------------------------------------------------------------
# dead-pattern descriptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatternCase:
    """One geometric case of a dead pattern.

    ``C`` (and ``D`` for two-row patterns) are the bits a column code shares
    with each involved row code, ``U`` the column code's parity bits.
    ``t_col`` is the column code's correction capability, ``t_row`` and
    ``t_row_d`` those of the row codes owning ``C`` and ``D``.
    """

    multiplicity: int
    C: int
    U: int
    t_col: int
    t_row: int
    D: int = 0
    t_row_d: int = 0
    V: int = 0

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        if self.C < 1 or min(self.U, self.D, self.V) < 0:
            raise ValueError("segment sizes must be non-negative and C >= 1")
        if min(self.t_col, self.t_row, self.t_row_d) < 0:
            raise ValueError("thresholds must be non-negative")


@dataclass(frozen=True)
class DeadPattern:
    rows_involved: int
    cols_involved: int
    cases: tuple[PatternCase, ...]
    n_in: int
    name: str = ""

    def __post_init__(self) -> None:
        if self.n_in < 1:
            raise ValueError("n_in must be >= 1")
        if self.rows_involved == 2 and any(c.D < 1 for c in self.cases):
            raise ValueError("two-row patterns need a D segment")


@dataclass(frozen=True)
class BoundQuery:
    e_in: float
    truncation_terms: int | None = DEFAULT_TRUNCATION

    def __post_init__(self) -> None:
        if not 0 < self.e_in < 0.5:
            raise DomainError(f"e_in must be in (0, 0.5), got {self.e_in}")


# ---------------------------------------------------------------------------
# generic Type-11 / Type-21 evaluators
# ---------------------------------------------------------------------------

def _truncate(poly: dict[int, int], terms: int | None) -> dict[int, int]:
    if terms is None or not poly:
        return poly
    lo = min(poly)
    return {a: c for a, c in poly.items() if a < lo + terms}


@lru_cache(maxsize=256)
def _q11_poly(case: PatternCase, weighted: bool) -> dict[int, int]:
    # j errors in C (> t_row), k in U, j + k > t_col; weighted by j.
    poly: dict[int, int] = {}
    for j in range(case.t_row + 1, case.C + 1):
        cj = comb(case.C, j) * (j if weighted else 1)
        for k in range(max(0, case.t_col + 1 - j), case.U + 1):
            poly[j + k] = poly.get(j + k, 0) + cj * comb(case.U, k)
    return poly


@lru_cache(maxsize=256)
def _q21_poly(case: PatternCase, weighted: bool) -> dict[int, int]:
    # j in C (> t_row), k in D (> t_row_d), l in U, j + k + l > t_col;
    # weighted by j + k.  Convolve C and D first, then U.
    pair: dict[int, int] = {}
    for j in range(case.t_row + 1, case.C + 1):
        cj = comb(case.C, j)
        for k in range(case.t_row_d + 1, case.D + 1):
            w = (j + k) if weighted else 1
            pair[j + k] = pair.get(j + k, 0) + cj * comb(case.D, k) * w
    poly: dict[int, int] = {}
    for s, c in pair.items():
        for l in range(max(0, case.t_col + 1 - s), case.U + 1):
            poly[s + l] = poly.get(s + l, 0) + c * comb(case.U, l)
    return poly


def _pattern_terms(pattern: DeadPattern, terms: int | None, weighted: bool) -> list[Term]:
    out: list[Term] = []
    for case in pattern.cases:
        if pattern.rows_involved == 1:
            poly = _q11_poly(case, weighted)
            size = case.C + case.U
        else:
            poly = _q21_poly(case, weighted)
            size = case.C + case.D + case.U
        for a, c in sorted(_truncate(poly, terms).items()):
            out.append((case.multiplicity * c, a, size - a))
    return out


def _query(e_in, terms):
    if isinstance(e_in, BoundQuery):
        return e_in.e_in, e_in.truncation_terms
    return e_in, terms


def q11_generic(pattern: DeadPattern, e_in: float | BoundQuery, terms: int | None = DEFAULT_TRUNCATION) -> float:
    """BER from Type-11 patterns (one row code, one column code).

    ``terms`` keeps the ``terms`` lowest total error counts ``j + k``
    (``None`` sums everything).  A :class:`BoundQuery` may be passed in
    place of ``e_in`` and then supplies the truncation too.
    """
    e_in, terms = _query(e_in, terms)
    if pattern.rows_involved != 1 or pattern.cols_involved != 1:
        raise ValueError("q11_generic needs a 1x1 pattern")
    return evaluate_terms(_pattern_terms(pattern, terms, True), e_in, pattern.n_in)


def q21_generic(pattern: DeadPattern, e_in: float | BoundQuery, terms: int | None = DEFAULT_TRUNCATION) -> float:
    """BER from Type-21 patterns (two row codes, one column code)."""
    e_in, terms = _query(e_in, terms)
    if pattern.rows_involved != 2 or pattern.cols_involved != 1:
        raise ValueError("q21_generic needs a 2x1 pattern")
    return evaluate_terms(_pattern_terms(pattern, terms, True), e_in, pattern.n_in)


def pattern_probability(pattern: DeadPattern, e_in: float, terms: int | None = DEFAULT_TRUNCATION) -> float:
    """Summed block probability of the pattern's events (no bit weighting)."""
    return evaluate_terms(_pattern_terms(pattern, terms, False), e_in)


def q_square_terms(n_rows: int, n_cols: int, r: int, c: int, per_bit: bool = False) -> list[Term]:
    if per_bit:
        return [(comb(n_rows - 1, r - 1) * comb(n_cols - 1, c - 1), r * c, 0)]
    return [(comb(n_rows, r) * comb(n_cols, c) * r * c, r * c, 0)]


def q_square(n_rows: int, n_cols: int, r: int, c: int, e_in: float, n_in: int | None = None) -> float:
    """BER from ``r x c`` crosspoint patterns in a true product.

    With ``n_in`` this is ``C(n_rows, r) C(n_cols, c) e^(rc) rc / n_in``.
    Without it, the per-bit form ``C(n_rows-1, r-1) C(n_cols-1, c-1) e^(rc)``:
    the chance that a given bit sits in a fully wrong ``r x c`` square.
    """
    if n_in is None:
        return evaluate_terms(q_square_terms(n_rows, n_cols, r, c, per_bit=True), e_in)
    return evaluate_terms(q_square_terms(n_rows, n_cols, r, c), e_in, n_in)


# ---------------------------------------------------------------------------
# the worked examples as printed
# ---------------------------------------------------------------------------

def _code_i_q11_terms(weighted: bool = True) -> list[Term]:
    w = (lambda x: x) if weighted else (lambda x: 1)
    return [
        (64 * 32 * comb(61, 8) * w(8), 8, 53),
        (64 * 32 * comb(61, 9) * w(9), 9, 52),
    ]


def _code_ib_q11_terms(weighted: bool = True) -> list[Term]:
    w = (lambda x: x) if weighted else (lambda x: 1)
    return [
        (52 * 32 * comb(61, 8) * comb(88, 1) * w(8), 9, 53),
        (12 * 32 * comb(61, 8) * w(8), 8, 53),
        (64 * 32 * comb(61, 9) * w(9), 9, 52),
    ]


def _segment_q11_terms(n_cols: int, n_rows: int, seg: int, weighted: bool = True) -> list[Term]:
    # The printed lower limits are garbled; they are rebuilt from the Type-11
    # condition (row t=3, column t=10): i > 10 alone, or 3 < i <= 10 with
    # at least 11 - i errors among the 110 column parity bits.
    m = n_cols * n_rows
    w = (lambda x: x) if weighted else (lambda x: 1)
    out = [(m * comb(seg, i) * w(i), i, seg - i) for i in range(11, seg + 1)]
    for i in range(4, 11):
        for j in range(11 - i, 111):
            out.append((m * comb(seg, i) * comb(110, j) * w(i), i + j, 110 + seg - i - j))
    return out


def _segment_q21_terms(n_cols: int, n_rows: int, seg: int, weighted: bool = True) -> list[Term]:
    m = n_cols * comb(n_rows, 2)
    w = (lambda x: x) if weighted else (lambda x: 1)
    pairs = comb(seg, 5) * comb(seg, 6) + comb(seg, 4) * comb(seg, 7)
    return [
        (m * 2 * pairs * w(11), 11, 2 * seg - 11),
        (m * comb(seg, 4) ** 2 * comb(110, 3) * w(8), 11, 2 * seg - 8),
    ]


def _sp_bch_q44_terms(weighted: bool = True) -> list[Term]:
    return [(comb(992, 4) * comb(987, 4) * (16 if weighted else 1), 16, 0)]


@dataclass(frozen=True)
class _Formula:
    layout: str
    printed_divisor: int
    derived_divisor: int
    patterns: dict[str, Callable[[bool], list[Term]]]


PRESET_FORMULAS: dict[str, _Formula] = {
    "example-i": _Formula("example-i", 2031 * 64, 122368, {"q11": _code_i_q11_terms}),
    "example-ib": _Formula("example-ib", 130560, 122368, {"q11": _code_ib_q11_terms}),
    "example-ii": _Formula(
        "example-ii", 122368, 122368,
        {"q11": lambda w=True: _segment_q11_terms(64, 32, 60, w),
         "q21": lambda w=True: _segment_q21_terms(64, 32, 60, w)},
    ),
    "example-iib": _Formula(
        "example-iib", 130560 * 2, 122368 * 2,
        {"q11": lambda w=True: _segment_q11_terms(128, 64, 30, w),
         "q21": lambda w=True: _segment_q21_terms(128, 64, 30, w)},
    ),
    "sp-bch": _Formula("sp-bch", 970220, 960 * 956, {"q44": _sp_bch_q44_terms}),
}


@lru_cache(maxsize=64)
def _cached_terms(preset: str, pattern: str, weighted: bool) -> tuple[Term, ...]:
    return tuple(PRESET_FORMULAS[preset].patterns[pattern](weighted))


@dataclass(frozen=True)
class Contribution:
    p: float
    q: float


@dataclass
class BoundResult:
    e_in: float
    contributions: dict[str, Contribution]
    total_q: float
    log_total_q: float
    cross_checked: bool | None = None
    divisor: int = 1
    mode: str = "printed"
    extra: dict = field(default_factory=dict)


def _preset_key(preset: str) -> str:
    key = preset.lower().replace("_", "-")
    aliases = {
        "code-i": "example-i", "codei": "example-i", "code-i-eq5": "example-i", "codei-eq5": "example-i",
        "code-ib": "example-ib", "codeib": "example-ib", "code-ib-eq6": "example-ib", "codeib-eq6": "example-ib",
        "code-ii": "example-ii", "codeii": "example-ii", "code-ii-eq9-10": "example-ii", "codeii-eq9-10": "example-ii",
        "code-iib": "example-iib", "codeiib": "example-iib", "code-iib-eq11-12": "example-iib", "codeiib-eq11-12": "example-iib",
        "spbch": "sp-bch", "spbch-eq13": "sp-bch", "sp-bch-eq13": "sp-bch",
    }
    key = aliases.get(key, key)
    if key not in PRESET_FORMULAS:
        raise KeyError(f"no bound formula for {preset!r}; choose from {sorted(PRESET_FORMULAS)}")
    return key


def q_preset(preset: str, e_in: float, mode: str = "printed", cross_check: bool = False) -> BoundResult:
    """Evaluate a worked example's bound formulas at ``e_in``.

    ``mode="printed"`` divides by the printed constants; ``mode="derived"``
    divides by the layout's own information-bit count.
    """
    key = _preset_key(preset)
    formula = PRESET_FORMULAS[key]
    if mode == "printed":
        divisor = formula.printed_divisor
    elif mode == "derived":
        divisor = formula.derived_divisor
    else:
        raise ValueError(f"mode must be 'printed' or 'derived', got {mode!r}")
    _check_e(e_in)
    contributions = {}
    logs = []
    ok = True
    for name in formula.patterns:
        qt = _cached_terms(key, name, True)
        pt = _cached_terms(key, name, False)
        lq = log_evaluate_terms(qt, e_in, divisor)
        logs.append(lq)
        contributions[name] = Contribution(p=evaluate_terms(pt, e_in), q=math.exp(lq))
        if cross_check:
            ok &= _cross_check(qt, e_in, divisor, contributions[name].q)
    finite = [x for x in logs if x > -math.inf]
    if finite:
        top = max(finite)
        log_total = top + math.log(math.fsum(math.exp(x - top) for x in finite))
    else:
        log_total = -math.inf
    total = math.exp(log_total)
    if cross_check:
        exact = sum(
            (evaluate_terms_exact(_cached_terms(key, name, True), e_in, divisor) for name in formula.patterns),
            Fraction(0),
        )
        ok &= (exact == 0 and total == 0) or abs(Fraction(total) - exact) <= Fraction(1, 10**6) * exact
    return BoundResult(e_in, contributions, total, log_total, ok if cross_check else None, divisor, mode)


def preset_terms(preset: str, mode: str = "printed") -> tuple[list[Term], int]:
    """All weighted terms of a preset's bound and its divisor."""
    key = _preset_key(preset)
    formula = PRESET_FORMULAS[key]
    divisor = formula.printed_divisor if mode == "printed" else formula.derived_divisor
    terms: list[Term] = []
    for name in formula.patterns:
        terms.extend(_cached_terms(key, name, True))
    return terms, divisor


# ---------------------------------------------------------------------------
# Example Code-I block-level probabilities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class P11:
    exact: float
    tilde: float
    hat: float
    e_s: float
    e_s_hat: float


def p11_example_code_i(e_in: float) -> P11:
    """Probability that some row/column intersection of Example Code-I holds 8+ errors.

    ``exact``: all 4*32 62-bit and 60*32 61-bit intersections.
    ``tilde``: ``2048 e_s - C(2048, 2) e_s^2``, a lower bound on ``exact``.
    ``hat``: ``2048 * e_s_hat`` with the tail cut after ``i = 9``.
    """
    if not 0 <= e_in < 1e-2:
        raise DomainError(f"the truncated form assumes e_in < 1e-2, got {e_in}")
    if e_in == 0:
        return P11(0.0, 0.0, 0.0, 0.0, 0.0)
    t62 = binom_tail(62, 8, e_in)
    t61 = binom_tail(61, 8, e_in)
    exact = -math.expm1(128 * math.log1p(-t62) + 1920 * math.log1p(-t61))
    e_s = t61
    e_s_hat = binom_tail(61, 8, e_in, terms=2)
    tilde = 2048 * e_s - comb(2048, 2) * e_s * e_s
    return P11(exact, tilde, 2048 * e_s_hat, e_s, e_s_hat)


# ---------------------------------------------------------------------------
# patterns built from geometry
# ---------------------------------------------------------------------------

def formula_patterns(preset: str, n_in: int | None = None) -> dict[str, DeadPattern]:
    """The simplified geometry the worked examples assume (uniform segments)."""
    key = _preset_key(preset)
    if key == "example-i":
        n = n_in or 2031 * 64
        return {"q11": DeadPattern(1, 1, (PatternCase(64 * 32, 61, 0, 7, 7),), n, "type-11")}
    if key in ("example-ii", "example-iib"):
        cols, rows, seg = (64, 32, 60) if key == "example-ii" else (128, 64, 30)
        n = n_in or PRESET_FORMULAS[key].printed_divisor
        return {
            "q11": DeadPattern(1, 1, (PatternCase(cols * rows, seg, 110, 10, 3),), n, "type-11"),
            "q21": DeadPattern(
                2, 1, (PatternCase(cols * comb(rows, 2), seg, 110, 10, 3, D=seg, t_row_d=3),), n, "type-21"
            ),
        }
    raise KeyError(f"no generic pattern set for {preset!r}")


def layout_patterns(layout, include_21: bool = True) -> dict[str, DeadPattern]:
    """Type-11 (and Type-21) cases read off a pseudo-product layout's intersections."""
    sizes = layout.intersection_sizes()
    row_t = []
    for g in layout.row_groups:
        row_t += [g.spec.t] * g.count
    col_info = []
    for g in layout.col_groups:
        col_info += [(g.spec.t, g.spec.n - g.spec.k)] * g.count
    c11: dict[tuple, int] = {}
    c21: dict[tuple, int] = {}
    for j, (t_c, u) in enumerate(col_info):
        col = sizes[:, j]
        rows = [(int(col[r]), row_t[r]) for r in range(len(row_t)) if col[r] > 0]
        for size, t_r in rows:
            key = (size, u, t_c, t_r)
            c11[key] = c11.get(key, 0) + 1
        if include_21:
            for a in range(len(rows)):
                for b in range(a + 1, len(rows)):
                    (s1, t1), (s2, t2) = sorted((rows[a], rows[b]))
                    key = (s1, u, t_c, t1, s2, t2)
                    c21[key] = c21.get(key, 0) + 1
    n_in = layout.info_bits
    out = {
        "q11": DeadPattern(
            1, 1, tuple(PatternCase(m, s, u, tc, tr) for (s, u, tc, tr), m in sorted(c11.items())), n_in, "type-11"
        )
    }
    if include_21 and c21:
        out["q21"] = DeadPattern(
            2, 1,
            tuple(PatternCase(m, s1, u, tc, t1, D=s2, t_row_d=t2) for (s1, u, tc, t1, s2, t2), m in sorted(c21.items())),
            n_in, "type-21",
        )
    return out


# ---------------------------------------------------------------------------
# standalone bounded-distance codes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _bdd_terms(n: int, t: int) -> tuple[Term, ...]:
    # (i + t) / n output symbol errors per block when i > t symbols are hit:
    # the i received errors plus up to t from a miscorrection.  Scaled by n
    # so coefficients stay integral; callers divide by n.
    return tuple((comb(n, i) * (i + t), i, n - i) for i in range(t + 1, n + 1))


def analytic_bdd_ber(n_symbols: int, t: int, symbol_bits: int, e_in: float) -> float:
    """Post-decoding BER of a standalone bounded-distance code.

    A symbol is wrong with probability ``s = 1 - (1 - e)^b``; given that it
    is wrong it carries ``b e / s`` bit errors on average, i.e. a fraction
    ``e / s`` of its bits.
    """
    if t >= n_symbols:
        raise ValueError("t must be smaller than n")
    _check_e(e_in)
    if e_in == 0:
        return 0.0
    s = -math.expm1(symbol_bits * math.log1p(-e_in))
    return evaluate_terms(_bdd_terms(n_symbols, t), s, n_symbols) * (e_in / s)


def bdd_block_failure(n_symbols: int, t: int, symbol_bits: int, e_in: float) -> float:
    """Probability that more than ``t`` symbols are in error."""
    _check_e(e_in)
    if e_in == 0:
        return 0.0
    s = -math.expm1(symbol_bits * math.log1p(-e_in))
    return binom_tail(n_symbols, t + 1, s)


# ---------------------------------------------------------------------------
# NCG from a bound curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NcgResult:
    ncg_db: float
    e_in: float
    ebn0_db: float
    rate: float
    target_ber: float


def _qdb(e: float) -> float:
    return 20.0 * math.log10(channel.q_factor(e))


def find_crossing(curve: Callable[[float], float], target_ber: float, tol_db: float = 1e-4,
                  e_min: float = 1e-30, e_max: float = 0.49) -> float:
    """Largest-Q (smallest) ``e_in`` where ``curve`` reaches ``target_ber``.

    Bisection on the Q-factor in dB until the bracket is under ``tol_db``.
    """
    # Coarse log grid to find the first upward crossing, then bisect.
    grid = [10 ** (math.log10(e_min) + i * (math.log10(e_max) - math.log10(e_min)) / 400) for i in range(401)]
    prev = None
    for e in grid:
        if curve(e) >= target_ber:
            if prev is None:
                raise NoCrossing(f"bound already exceeds {target_ber} at e_in={e}")
            lo_e, hi_e = prev, e
            break
        prev = e
    else:
        raise NoCrossing(f"bound never reaches {target_ber} for e_in < {e_max}")
    # lo_e is below the target, hi_e above; Q decreases as e grows.
    q_hi, q_lo = _qdb(lo_e), _qdb(hi_e)
    while q_hi - q_lo > tol_db:
        mid = 0.5 * (q_hi + q_lo)
        e_mid = float(_q_from_db(mid))
        if curve(e_mid) >= target_ber:
            q_lo = mid
        else:
            q_hi = mid
    return float(_q_from_db(0.5 * (q_hi + q_lo)))


def _q_from_db(qdb: float) -> float:
    from scipy.stats import norm

    return norm.sf(10 ** (qdb / 20.0))


def floor_to_ncg(layout_rate: float, target_ber: float, floor_curve: Callable[[float], float],
                 tol_db: float = 1e-4) -> NcgResult:
    """Upper bound on NCG implied by an error-floor curve."""
    if not 0 < target_ber < 0.5:
        raise DomainError(f"target BER must be in (0, 0.5), got {target_ber}")
    e_star = find_crossing(floor_curve, target_ber, tol_db)
    return NcgResult(
        channel.ncg(target_ber, e_star, layout_rate),
        e_star,
        channel.ber_to_ebn0(e_star, layout_rate),
        layout_rate,
        target_ber,
    )


def preset_ncg(preset: str, target_ber: float, rate: float, mode: str = "printed") -> NcgResult:
    terms, divisor = preset_terms(preset, mode)
    return floor_to_ncg(rate, target_ber, lambda e: evaluate_terms(terms, e, divisor))


def rs_ncg(target_ber: float, n: int = 255, k: int = 239, t: int = 8, symbol_bits: int = 8) -> NcgResult:
    return floor_to_ncg(k / n, target_ber, lambda e: analytic_bdd_ber(n, t, symbol_bits, e))


def iter_patterns(patterns: Iterable[DeadPattern], e_in: float,
                  terms: int | None = DEFAULT_TRUNCATION) -> dict[str, float]:
    out = {}
    for p in patterns:
        fn = q11_generic if p.rows_involved == 1 else q21_generic
        out[p.name] = fn(p, e_in, terms)
    return out
