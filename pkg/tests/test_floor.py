import itertools
import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superfec import bch, channel, floor, product
from superfec.channel import DomainError
from superfec.floor import BoundQuery, DeadPattern, NoCrossing, PatternCase

import oracles


def rel(a, b):
    if isinstance(b, Fraction):
        return float(abs(Fraction(a) - b) / abs(b))
    return abs(float(a) - float(b)) / abs(float(b))


def log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


# -- binomial tails -----------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.integers(1, 90), st.data(), st.floats(1e-6, 0.3))
def test_binom_tail_matches_exact(n, data, e):
    lo = data.draw(st.integers(0, n))
    ref = oracles.tail_exact(n, lo, e)
    # Compare in the log domain so values below the double range count too.
    got = floor.log_evaluate_terms(floor.binom_tail_terms(n, lo), e)
    assert abs(got - log_fraction(ref)) < 1e-10
    if float(ref) > 1e-300:
        assert rel(floor.binom_tail(n, lo, e), ref) < 1e-10


@settings(max_examples=100, deadline=None)
@given(st.integers(5, 90), st.integers(1, 6), st.floats(1e-6, 0.3))
def test_truncation_is_a_lower_bound(n, terms, e):
    lo = n // 4
    assert floor.binom_tail(n, lo, e, terms) <= floor.binom_tail(n, lo, e) * (1 + 1e-12)
    ref = oracles.tail_exact(n, lo, e, hi=min(n, lo + terms - 1))
    assert rel(floor.binom_tail(n, lo, e, terms), ref) < 1e-10


def test_binom_tail_edges():
    assert floor.binom_tail(61, 8, 0.0) == 0
    assert floor.binom_tail(61, 0, 0.0) == 1
    assert floor.binom_tail(61, 0, 0.2) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(ValueError):
        floor.binom_tail(5, 6, 0.1)
    with pytest.raises(DomainError):
        floor.binom_tail(5, 2, 0.5)


def test_tiny_values_do_not_underflow():
    lv = floor.log_evaluate_terms(floor.binom_tail_terms(61, 60), 1e-6)
    assert lv == pytest.approx(log_fraction(oracles.tail_exact(61, 60, 1e-6)), abs=1e-10)
    assert lv < math.log(1e-300)
    q = floor.q_preset("sp-bch", 1e-3).total_q
    ref = oracles.sp_bch_exact(1e-3)
    assert q > 0 and rel(q, ref) < 1e-12
    assert q < 1e-30


# -- Example Code-I block probabilities --------------------------------------

def test_e_s_bound_holds_where_claimed():
    # e_s < 2e-11 up to e_in ~ 3.07e-3 and is far above it at 1e-2.
    assert floor.binom_tail(61, 8, 3.0e-3) < 2e-11
    assert oracles.tail_exact(61, 8, 3.0e-3) < Fraction(2, 10**11)
    assert floor.binom_tail(61, 8, 9.9e-3) > 1e-7


@pytest.mark.parametrize("e", [1e-3, 3e-3, 9.9e-3])
def test_p11_ordering(e):
    p = floor.p11_example_code_i(e)
    assert p.e_s * 2048 < 1
    assert p.exact >= p.tilde >= p.hat
    ref = oracles.p11_exact_decimal(e)
    assert rel(p.exact, ref) < 1e-9
    assert rel(p.e_s_hat, oracles.tail_exact(61, 8, e, hi=9)) < 1e-10


def test_p11_hat_bound_at_claimed_point():
    p = floor.p11_example_code_i(3.0e-3)
    assert p.hat < 2048 * 2e-11


def test_p11_domain():
    assert floor.p11_example_code_i(0.0) == floor.P11(0.0, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        floor.p11_example_code_i(1e-2)


# -- generic evaluators vs brute force ---------------------------------------

def _enumerate(segments, dead, weight, e):
    sizes = [s for s in segments]
    total = Fraction(0)
    e = Fraction(e)
    for bits in itertools.product([0, 1], repeat=sum(sizes)):
        counts, pos = [], 0
        for s in sizes:
            counts.append(sum(bits[pos : pos + s]))
            pos += s
        w = sum(bits)
        if dead(*counts):
            total += weight(*counts) * e**w * (1 - e) ** (len(bits) - w)
    return total


def test_q11_tiny_instance_enumeration():
    pat = DeadPattern(1, 1, (PatternCase(1, 4, 2, t_col=1, t_row=1),), n_in=6)
    ref = _enumerate([4, 2], lambda j, k: j > 1 and j + k > 1, lambda j, k: j, 0.1) / 6
    assert rel(floor.q11_generic(pat, 0.1, terms=None), ref) < 1e-12
    assert floor.q11_generic(pat, 0.0) == 0


def test_q21_tiny_instance_enumeration():
    pat = DeadPattern(2, 1, (PatternCase(1, 3, 2, t_col=2, t_row=1, D=3, t_row_d=1),), n_in=8)
    ref = _enumerate([3, 3, 2], lambda j, k, l: j > 1 and k > 1 and j + k + l > 2,
                     lambda j, k, l: j + k, 0.1) / 8
    assert rel(floor.q21_generic(pat, 0.1, terms=None), ref) < 1e-12
    assert floor.q21_generic(pat, 0.0) == 0


def test_generic_reproduces_two_term_example_code_i():
    pat = floor.formula_patterns("example-i")["q11"]
    for e in (1e-3, 2e-3):
        assert rel(floor.q11_generic(pat, e, terms=2), oracles.code_i_exact(e)) < 1e-12
        assert rel(floor.q11_generic(pat, BoundQuery(e, 2)), oracles.code_i_exact(e)) < 1e-12


@pytest.mark.parametrize("preset,exact", [("example-ii", oracles.type11_exact), ("example-iib", oracles.type11_exact)])
def test_generic_type11_equals_literal_sum(preset, exact):
    pats = floor.formula_patterns(preset)
    for e in (1e-3, 2e-3):
        key = floor._preset_key(preset)
        lit = floor.evaluate_terms(floor._cached_terms(key, "q11", True), e, pats["q11"].n_in)
        assert rel(floor.q11_generic(pats["q11"], e, terms=None), lit) < 1e-12


def test_printed_type21_terms_appear_in_generic_sum():
    # The printed Type-21 sum keeps the (5,6), (4,7) and (4,4)+3 parity
    # configurations of weight 11; each coefficient must match the generic
    # enumeration's count for that configuration.
    case = floor.formula_patterns("example-ii")["q21"].cases[0]
    poly = floor._q21_poly(case, True)
    lit = floor._cached_terms("example-ii", "q21", True)
    assert sum(c for c, a, _ in lit) <= case.multiplicity * poly[11]
    per_pair = 2 * (comb(60, 5) * comb(60, 6) + comb(60, 4) * comb(60, 7)) * 11
    assert lit[0][0] == case.multiplicity * per_pair
    assert lit[1][0] == case.multiplicity * comb(60, 4) ** 2 * comb(110, 3) * 8


def test_truncation_never_exceeds_full_sum():
    for name, pats in [("example-ii", floor.formula_patterns("example-ii"))]:
        for e in (1e-3, 5e-3, 2e-2):
            for p in pats.values():
                fn = floor.q11_generic if p.rows_involved == 1 else floor.q21_generic
                for terms in (1, 2, 3, 10):
                    assert fn(p, e, terms) <= fn(p, e, None) * (1 + 1e-12)


def test_layout_geometry_close_to_simplified_geometry():
    lay = product.build_preset("example-i")
    geo = floor.layout_patterns(lay, include_21=False)["q11"]
    simple = floor.formula_patterns("example-i", n_in=lay.info_bits)["q11"]
    assert sum(c.multiplicity for c in geo.cases) == 2048
    e = 2e-3
    assert rel(floor.q11_generic(geo, e, 2), floor.q11_generic(simple, e, 2)) < 0.05


def test_pattern_validation():
    with pytest.raises(ValueError):
        PatternCase(0, 4, 2, 1, 1)
    with pytest.raises(ValueError):
        PatternCase(1, 0, 2, 1, 1)
    with pytest.raises(ValueError):
        DeadPattern(2, 1, (PatternCase(1, 4, 2, 1, 1),), 10)
    with pytest.raises(DomainError):
        BoundQuery(0.5)
    with pytest.raises(ValueError):
        floor.q21_generic(floor.formula_patterns("example-i")["q11"], 1e-3)


# -- literal formulas ----------------------------------------------------------

EXACT = {
    "example-i": oracles.code_i_exact,
    "example-ib": oracles.code_ib_exact,
    "example-ii": oracles.code_ii_exact,
    "example-iib": oracles.code_iib_exact,
    "sp-bch": oracles.sp_bch_exact,
}


@pytest.mark.parametrize("preset", sorted(EXACT))
@pytest.mark.parametrize("e", [1e-4, 1.2e-3, 4.5e-3])
def test_literal_formulas_match_oracle(preset, e):
    res = floor.q_preset(preset, e, cross_check=True)
    assert res.cross_checked
    assert rel(res.total_q, EXACT[preset](e)) < 1e-9
    assert res.total_q == pytest.approx(sum(c.q for c in res.contributions.values()), rel=1e-12)


@pytest.mark.parametrize("preset", sorted(EXACT))
def test_presets_vanish_at_zero(preset):
    assert floor.q_preset(preset, 0.0).total_q == 0


@pytest.mark.parametrize("preset", sorted(EXACT))
def test_bounds_increase_with_e_in(preset):
    # Checked wherever the bound is still a meaningful probability.
    es = np.linspace(1e-4, 0.0999, 300)
    vals = [floor.q_preset(preset, e).total_q for e in es]
    vals = np.array([v for v in vals if v < 0.5])
    assert np.all(np.diff(vals) > 0)


def test_derived_denominators():
    e = 2e-3
    for name in ("example-i", "example-ib", "sp-bch"):
        p = floor.q_preset(name, e, "printed")
        d = floor.q_preset(name, e, "derived")
        f = floor.PRESET_FORMULAS[name]
        assert d.total_q == pytest.approx(p.total_q * f.printed_divisor / f.derived_divisor, rel=1e-12)
    assert floor.PRESET_FORMULAS["sp-bch"].derived_divisor == product.build_preset("sp-bch").info_bits
    with pytest.raises(ValueError):
        floor.q_preset("sp-bch", e, "other")
    with pytest.raises(KeyError):
        floor.q_preset("toy-15-7", e)


def test_q_square_matches_sp_bch_shape():
    e = 4e-3
    full = floor.q_square(992, 987, 4, 4, e, n_in=970220)
    assert rel(full, floor.q_preset("sp-bch", e).total_q) < 1e-12
    per_bit = floor.q_square(992, 987, 4, 4, e)
    assert rel(per_bit, full * 970220 / (992 * 987)) < 1e-12


# -- bounded-distance baseline -------------------------------------------------

def test_bdd_ber_matches_exact():
    for e in (1e-4, 3e-3):
        assert rel(floor.analytic_bdd_ber(255, 8, 8, e), oracles.bdd_ber_exact(255, 8, 8, e)) < 1e-9
    assert floor.analytic_bdd_ber(255, 8, 8, 0.0) == 0
    with pytest.raises(ValueError):
        floor.analytic_bdd_ber(8, 8, 8, 1e-3)


def test_bdd_failure_matches_decoder_monte_carlo():
    spec = bch.make_spec(4, 3)
    p = floor.bdd_block_failure(15, 3, 1, 0.05)
    trials = 1_000_000
    rng = np.random.default_rng(2024)
    fails = 0
    for _ in range(trials // 100_000):
        words = (rng.random((100_000, 15)) < 0.05).astype(np.uint8)
        res = bch.decode_many(spec, words)
        fails += int(res.corrected.any(axis=1).sum())
    sigma = math.sqrt(trials * p * (1 - p))
    assert abs(fails - trials * p) < 3 * sigma


# -- NCG from curves -------------------------------------------------------------

def test_identity_curve_gives_zero_ncg():
    res = floor.floor_to_ncg(1.0, 1e-15, lambda e: e)
    assert abs(res.ncg_db) < 1e-4
    assert res.e_in == pytest.approx(1e-15, rel=1e-3)


def test_no_crossing():
    with pytest.raises(NoCrossing):
        floor.floor_to_ncg(0.9, 1e-15, lambda e: 0.0)
    with pytest.raises(NoCrossing):
        floor.floor_to_ncg(0.9, 1e-15, lambda e: 1.0)
    with pytest.raises(DomainError):
        floor.floor_to_ncg(0.9, 0.5, lambda e: e)


def test_crossing_precision():
    lay = product.build_preset("example-i")
    res = floor.preset_ncg("example-i", 1e-15, lay.rate)
    q = floor.q_preset("example-i", res.e_in).total_q
    assert q == pytest.approx(1e-15, rel=2e-3)
    assert res.ncg_db == pytest.approx(channel.ncg(1e-15, res.e_in, lay.rate), abs=1e-12)


@pytest.mark.parametrize("alias,name", [
    ("CodeI_eq5", "example-i"), ("CodeIB_eq6", "example-ib"), ("CodeII_eq9_10", "example-ii"),
    ("CodeIIb_eq11_12", "example-iib"), ("SpBch_eq13", "sp-bch"),
])
def test_formula_aliases(alias, name):
    assert floor.q_preset(alias, 2e-3).total_q == floor.q_preset(name, 2e-3).total_q
