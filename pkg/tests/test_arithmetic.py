import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coiso.arithmetic import (
    DecimalAlpha,
    LiouvilleSeries,
    QuadraticIrrational,
    Rational,
    alpha_from_json,
    classify,
    continued_fraction,
    convergents,
    distance_to_integers,
    is_resonant,
    linear_form,
    liouville_constant,
    rotation_multiplier,
    small_divisor,
)
from coiso.errors import ArgumentError, PrecisionError


def test_rational_normalised():
    assert Rational(4, 6) == Rational(2, 3)
    with pytest.raises(ArgumentError):
        Rational(1, 0)


def test_quadratic_rejects_square():
    with pytest.raises(ArgumentError):
        QuadraticIrrational(1, 4, 2)


def test_cf_examples(golden):
    assert continued_fraction(Rational(22, 7), 10) == [3, 7]
    assert continued_fraction(QuadraticIrrational(1, 5, 2), 12) == [1] * 12
    assert continued_fraction(golden, 6) == [0] + [1] * 5
    assert continued_fraction(QuadraticIrrational(0, 2, 1), 6) == [1, 2, 2, 2, 2, 2]


def test_cf_liouville_growth(liouville):
    cf = continued_fraction(liouville, 4)
    assert cf[:2] == [0, 9]
    big = continued_fraction(LiouvilleSeries(10, 4), 8)
    assert max(big) > 10**10


def test_cf_decimal_precision_error():
    with pytest.raises(PrecisionError) as info:
        continued_fraction(DecimalAlpha("0.618"), 20)
    assert info.value.required_digits and info.value.required_digits > 3


def test_convergents(golden, liouville):
    assert [c.q for c in convergents(golden, 6)][1:] == [1, 2, 3, 5, 8]
    last = convergents(Rational(2, 3), 10)[-1]
    assert (last.p, last.q) == (2, 3)
    # the partial sums from the second on are convergents; 1/10 is beaten by 1/9
    convs = {(c.p, c.q) for c in convergents(LiouvilleSeries(10, 4), 8)}
    lv = LiouvilleSeries(10, 4)
    for n in (2, 3):
        s = lv.partial_sum(n)
        assert (s.numerator, s.denominator) in convs
    assert (1, 9) in convs and (1, 10) not in convs


def test_convergents_alternate_and_bound():
    alpha = QuadraticIrrational(0, 7, 3)
    lo, hi = alpha.bounds(3)
    mid = (lo + hi) / 2
    convs = convergents(alpha, 15)
    for a, b in zip(convs, convs[1:]):
        assert (a.value - mid) * (b.value - mid) < 0
        assert abs(mid - a.value) < Fraction(1, a.q * b.q)


def test_liouville_partial_sums():
    assert liouville_constant(10, 3).partial_sum(3) == Fraction(110001, 10**6)
    assert liouville_constant(10, 1).partial_sum(1) == Fraction(1, 10)
    assert liouville_constant(2, 3).partial_sum(3) == Fraction(49, 64)
    lv = liouville_constant(10, 4)
    lo, hi = lv.bounds(0)
    for n in (1, 2, 3):
        assert hi - lv.partial_sum(n) < Fraction(1, 10 ** (math.factorial(n + 1) - 1))


def test_small_divisor_examples(liouville):
    assert small_divisor(Rational(1, 2), 2) == 0.0
    assert small_divisor(Rational(1, 2), 1) == pytest.approx(2.0)
    assert small_divisor(Rational(3, 10), 5) == pytest.approx(2.0)
    assert small_divisor(liouville, 100) <= 2 * math.pi * 100 * 10.0 ** (-6 + 1)
    with pytest.raises(ArgumentError):
        small_divisor(liouville, 0)


def test_small_divisor_matches_mpmath(golden):
    phi = (mpmath.sqrt(5) - 1) / 2
    for n in (1, 7, 144, 10**6 + 3):
        ref = abs(1 - mpmath.expjpi(2 * n * phi))
        assert small_divisor(golden, n) == pytest.approx(float(ref), rel=1e-3)


def test_liouville_divisor_from_exact_tail(liouville):
    # 10^6 alpha = 110001 + 10^6 * (10^-24 + ...): divisor ~ 2 pi 10^-18
    assert small_divisor(liouville, 10**6) == pytest.approx(2 * math.pi * 1e-18, rel=1e-3)
    assert rotation_multiplier(liouville, 10**24) != 0


def test_precision_refusal():
    with pytest.raises(PrecisionError):
        small_divisor(DecimalAlpha("0.6180339887"), 10**12)


def test_resonance_and_linear_form(two_thirds, golden):
    assert is_resonant(two_thirds, 3) and is_resonant(two_thirds, -6)
    assert not is_resonant(two_thirds, 2) and not is_resonant(golden, 3)
    assert linear_form(two_thirds, -2, 3) == 0.0
    assert linear_form(golden, 1, 1) == pytest.approx((math.sqrt(5) + 1) / 2)


def test_classify_examples(golden):
    assert classify(Rational(22, 7)).tag == "Rational"
    c = classify(golden, depth=20)
    assert c.tag == "Diophantine" and abs(c.k_est - 2) <= 0.2
    assert str(c).startswith("Diophantine k≈2")
    for n in (3, 4, 5):
        assert classify(liouville_constant(10, n)).tag == "LiouvilleLike"


@pytest.mark.parametrize("abc", [(-1, 5, 2), (1, 5, 2), (0, 2, 1), (3, 7, 5), (-2, 13, 3)])
def test_quadratics_are_diophantine(abc):
    c = classify(QuadraticIrrational(*abc), depth=16)
    assert c.tag == "Diophantine" and c.k_est <= 2.5


def test_decimal_classification_is_flagged():
    c = classify(DecimalAlpha("0.61803398874989484820458683436563811772030917980576"), depth=12)
    assert c.tag == "Diophantine"
    assert "heuristic" in c.note


def test_json_roundtrip(golden, liouville):
    for a in (golden, liouville, Rational(2, 3), DecimalAlpha("0.25")):
        assert alpha_from_json(a.to_json()) == a
    with pytest.raises(ArgumentError):
        alpha_from_json({"kind": "nope"})


@settings(max_examples=60, deadline=None)
@given(p=st.integers(-50, 50), q=st.integers(1, 60), n=st.integers(1, 10**4))
def test_rational_divisor_is_exact(p, q, n):
    alpha = Rational(p, q)
    d = distance_to_integers(alpha, n)
    assert d == abs(Fraction(n * p, q) - round(Fraction(n * p, q)))
