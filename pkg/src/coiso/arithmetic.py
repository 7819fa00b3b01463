"""Exact arithmetic for the rotation slope alpha.

Every ``AlphaSpec`` can produce nested rational enclosures ``lo <= alpha <= hi``
(``bounds(level)``), which is all the continued-fraction and small-divisor code
relies on.  Quantities derived from them are certified rather than rounded:
if an enclosure is too wide, the computation refines it or raises
``PrecisionError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd, isqrt

import mpmath

from .errors import ArgumentError, PrecisionError

RELATIVE_TOL = 1e-4
_MAX_LEVEL = 12


class AlphaSpec:
    kind: str = ""
    exact = True

    def bounds(self, level: int) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    @property
    def max_level(self) -> int:
        return _MAX_LEVEL

    def to_json(self) -> dict:
        raise NotImplementedError

    def __float__(self) -> float:
        lo, hi = self.bounds(2)
        return float((lo + hi) / 2)

    def mp_value(self, dps: int = 50):
        level = 0
        with mpmath.workdps(dps + 10):
            while True:
                lo, hi = self.bounds(level)
                if lo == hi or hi - lo < Fraction(1, 10 ** (dps + 5)) or level >= self.max_level:
                    mid = (lo + hi) / 2
                    return mpmath.mpf(mid.numerator) / mid.denominator
                level += 1


@dataclass(frozen=True)
class Rational(AlphaSpec):
    p: int
    q: int = 1
    kind = "rational"

    def __post_init__(self):
        if self.q == 0:
            raise ArgumentError("rational alpha needs a nonzero denominator")
        g = gcd(self.p, self.q) or 1
        sign = -1 if self.q < 0 else 1
        object.__setattr__(self, "p", sign * self.p // g)
        object.__setattr__(self, "q", sign * self.q // g)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def bounds(self, level):
        return self.value, self.value

    def to_json(self):
        return {"kind": "rational", "p": self.p, "q": self.q}


@dataclass(frozen=True)
class QuadraticIrrational(AlphaSpec):
    """The number ``(a + sqrt(b)) / c`` with ``b`` a positive non-square."""

    a: int
    b: int
    c: int
    kind = "quadratic"

    def __post_init__(self):
        if self.b <= 0 or isqrt(self.b) ** 2 == self.b:
            raise ArgumentError(f"b={self.b} must be a positive non-square")
        if self.c == 0:
            raise ArgumentError("c must be nonzero")

    def bounds(self, level):
        digits = 20 * 2**level
        scale = 10**digits
        s = isqrt(self.b * scale * scale)
        lo = Fraction(self.a * scale + s, scale * self.c)
        hi = Fraction(self.a * scale + s + 1, scale * self.c)
        return (lo, hi) if lo <= hi else (hi, lo)

    def to_json(self):
        return {"kind": "quadratic", "a": self.a, "b": self.b, "c": self.c}


@dataclass(frozen=True)
class LiouvilleSeries(AlphaSpec):
    """``sum_{m>=1} base^(-m!)``; ``terms`` partial sums are kept exactly."""

    base: int
    terms: int
    partial_sums: tuple = field(init=False, repr=False, compare=False)
    kind = "liouville"

    def __post_init__(self):
        if self.base < 2 or self.terms < 1:
            raise ArgumentError("liouville series needs base >= 2 and terms >= 1")
        sums, acc = [], Fraction(0)
        for m in range(1, self.terms + 1):
            acc += Fraction(1, self.base ** factorial(m))
            sums.append(acc)
        object.__setattr__(self, "partial_sums", tuple(sums))

    def partial_sum(self, n: int) -> Fraction:
        if n <= self.terms:
            return self.partial_sums[n - 1]
        return sum((Fraction(1, self.base ** factorial(m)) for m in range(1, n + 1)), Fraction(0))

    def tail(self, n: int, extra: int = 2) -> Fraction:
        """``sum_{n < m <= n + extra} base^(-m!)``, relative error below base^-(n+1)!n."""
        return sum(
            (Fraction(1, self.base ** factorial(m)) for m in range(n + 1, n + extra + 1)),
            Fraction(0),
        )

    @property
    def max_level(self) -> int:
        return 6

    def bounds(self, level):
        n = max(self.terms, 2) + level
        s = self.partial_sum(n)
        return s, s + 2 * Fraction(1, self.base ** factorial(n + 1))

    def to_json(self):
        return {"kind": "liouville", "base": self.base, "terms": self.terms}


@dataclass(frozen=True)
class DecimalAlpha(AlphaSpec):
    """A decimal approximation; every stated digit is taken as correct to +-1 ulp."""

    digits: str
    kind = "decimal"
    exact = False

    def __post_init__(self):
        d = Decimal(self.digits)
        if not d.is_finite():
            raise ArgumentError(f"not a finite decimal: {self.digits!r}")

    @property
    def precision(self) -> int:
        exp = Decimal(self.digits).as_tuple().exponent
        return max(0, -exp)

    @property
    def max_level(self) -> int:
        return 0

    def bounds(self, level):
        v = Fraction(Decimal(self.digits))
        ulp = Fraction(1, 10**self.precision)
        return v - ulp, v + ulp

    def to_json(self):
        return {"kind": "decimal", "digits": self.digits}


def alpha_from_json(obj: dict) -> AlphaSpec:
    kind = obj.get("kind")
    if kind == "rational":
        return Rational(int(obj["p"]), int(obj["q"]))
    if kind == "quadratic":
        return QuadraticIrrational(int(obj["a"]), int(obj["b"]), int(obj["c"]))
    if kind == "liouville":
        return LiouvilleSeries(int(obj["base"]), int(obj["terms"]))
    if kind == "decimal":
        return DecimalAlpha(str(obj["digits"]))
    raise ArgumentError(f"unknown alpha kind {kind!r}")


def liouville_constant(base: int = 10, terms: int = 3) -> LiouvilleSeries:
    return LiouvilleSeries(base, terms)


# -- continued fractions -----------------------------------------------------


def _cf_of_fraction(x: Fraction, limit: int) -> list[int]:
    out = []
    num, den = x.numerator, x.denominator
    while den and len(out) < limit:
        a = num // den
        out.append(a)
        num, den = den, num - a * den
    return out


def _cf_quadratic(alpha: QuadraticIrrational, depth: int) -> list[int]:
    c = alpha.c
    P, D, Q = alpha.a * abs(c), alpha.b * c * c, c * abs(c)
    s = isqrt(D)
    out = []
    for _ in range(depth):
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return out


def _digits_needed(depth: int) -> int:
    # q_n grows at least like Fibonacci numbers; need ~2 log10 q_depth digits.
    return int(2 * depth * math.log10((1 + 5**0.5) / 2)) + 4


def continued_fraction(alpha: AlphaSpec, depth: int) -> list[int]:
    """Partial quotients ``a_0, a_1, ...`` (at most ``depth``; fewer iff rational)."""
    if depth < 1:
        raise ArgumentError("depth must be >= 1")
    if isinstance(alpha, Rational):
        return _cf_of_fraction(alpha.value, depth)
    if isinstance(alpha, QuadraticIrrational):
        return _cf_quadratic(alpha, depth)
    for level in range(alpha.max_level + 1):
        lo, hi = alpha.bounds(level)
        a, b = _cf_of_fraction(lo, depth + 1), _cf_of_fraction(hi, depth + 1)
        common = 0
        while common < min(len(a), len(b)) and a[common] == b[common]:
            common += 1
        certified = max(common - 1, 0)
        if certified >= depth:
            return a[:depth]
    raise PrecisionError(
        f"{alpha!r} certifies only {certified} partial quotients, {depth} requested; "
        f"about {_digits_needed(depth + 1)} correct digits are needed",
        required_digits=_digits_needed(depth + 1),
    )


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def convergents(alpha: AlphaSpec, depth: int) -> list[Convergent]:
    quotients = continued_fraction(alpha, depth)
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    for n, a in enumerate(quotients):
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(p1, q1, n))
    return out


# -- small divisors ---------------------------------------------------------


def _certified_linear(alpha: AlphaSpec, p: int, q: int, rel: float):
    """Enclosure of ``p + q*alpha`` refined until its relative width is below ``rel``.

    Returns a Fraction (exact zero possible) or raises ``PrecisionError``.
    """
    for level in range(alpha.max_level + 1):
        lo, hi = alpha.bounds(level)
        a, b = p + q * lo, p + q * hi
        if a == b:
            return a
        lo_v, hi_v = min(a, b), max(a, b)
        if lo_v > 0 or hi_v < 0:
            mag = min(abs(lo_v), abs(hi_v))
            if hi_v - lo_v <= rel * mag:
                return (lo_v + hi_v) / 2
    raise PrecisionError(
        f"cannot resolve {p} + {q}*alpha to relative {rel:g} with {alpha!r}",
        required_digits=len(str(abs(q))) + 8,
    )


@lru_cache(maxsize=200_000)
def linear_form(alpha: AlphaSpec, p: int, q: int) -> float:
    """``p + q*alpha`` as a float with certified relative accuracy (0.0 only if exact)."""
    if q == 0:
        return float(p)
    return float(_certified_linear(alpha, p, q, 1e-9))


def signed_offset(alpha: AlphaSpec, n: int) -> Fraction:
    """``n*alpha - round(n*alpha)`` resolved to relative 1e-4 (exact for rationals)."""
    for level in range(alpha.max_level + 1):
        lo, hi = alpha.bounds(level)
        a, b = n * lo, n * hi
        k = round((a + b) / 2)
        if a == b:
            return a - k
        da, db = a - k, b - k
        if abs(da) >= Fraction(1, 2) or abs(db) >= Fraction(1, 2) or da * db <= 0:
            continue
        if abs(db - da) <= Fraction(RELATIVE_TOL) * min(abs(da), abs(db)):
            return (da + db) / 2
    needed = len(str(abs(n))) + 8
    raise PrecisionError(
        f"n*alpha for n={n} is not resolved by {alpha!r}; about {needed} digits are needed",
        required_digits=needed,
    )


def distance_to_integers(alpha: AlphaSpec, n: int) -> Fraction:
    """``dist(n*alpha, Z)`` as a Fraction resolved to relative 1e-4."""
    return abs(signed_offset(alpha, n))


def _fraction_to_mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def small_divisor(alpha: AlphaSpec, n: int) -> float:
    """``|1 - exp(2 pi i n alpha)| = 2 |sin(pi dist(n alpha, Z))|``."""
    if n == 0:
        raise ArgumentError("the small divisor is undefined at n = 0")
    d = distance_to_integers(alpha, n)
    if d == 0:
        return 0.0
    with mpmath.workdps(30):
        return float(2 * mpmath.sin(mpmath.pi * _fraction_to_mpf(d)))


def rotation_multiplier(alpha: AlphaSpec, n: int) -> complex:
    """``1 - exp(2 pi i n alpha)``, the Fourier symbol of ``G -> G - G(. + alpha)``."""
    if n == 0:
        return 0j
    s = signed_offset(alpha, n)
    if s == 0:
        return 0j
    with mpmath.workdps(30):
        return complex(1 - mpmath.expjpi(2 * _fraction_to_mpf(s)))


def is_resonant(alpha: AlphaSpec, n: int) -> bool:
    """Whether ``n*alpha`` is an integer (only possible for rational alpha)."""
    return isinstance(alpha, Rational) and n % alpha.q == 0


# -- classification -----------------------------------------------------------


@dataclass
class Classification:
    tag: str  # "Rational" | "Diophantine" | "LiouvilleLike"
    k_est: float | None = None
    evidence: list = field(default_factory=list)
    note: str = ""

    def to_json(self):
        return {
            "tag": self.tag,
            "k_est": self.k_est,
            "evidence": [[str(q), e] for q, e in self.evidence],
            "note": self.note,
        }

    def __str__(self):
        if self.tag == "Diophantine":
            return f"Diophantine k≈{self.k_est:.2f}"
        return self.tag


def _approximation_exponent(alpha: AlphaSpec, conv: Convergent) -> float | None:
    if conv.q < 2:
        return None
    try:
        err = _certified_linear(alpha, -conv.p, conv.q, 1e-3)
    except PrecisionError:
        return None
    if err == 0:
        return None
    err = abs(err) / conv.q
    with mpmath.workdps(30):
        return float(-mpmath.log(_fraction_to_mpf(err)) / mpmath.log(conv.q))


def classify(alpha: AlphaSpec, depth: int = 20, k_max: float = 10.0) -> Classification:
    """Rational / Diophantine / Liouville-like verdict from convergent exponents.

    The exponent ``e_n = -log|alpha - p_n/q_n| / log q_n`` is fitted on the
    convergents; ``k_est`` is the maximum over the second half (a limsup
    estimate), floored at 2.
    """
    if depth < 3:
        raise ArgumentError("classify needs depth >= 3")
    if isinstance(alpha, Rational):
        return Classification("Rational", evidence=[(alpha.q, math.inf)])
    if isinstance(alpha, LiouvilleSeries):
        # partial sums satisfy |alpha - S_n| ~ base^-(n+1)!, so e_n = n + 1 + o(1)
        ln_b = math.log(alpha.base)
        evidence = []
        for n in range(1, min(depth, 6) + 1):
            rel_tail = float(alpha.base) ** (factorial(n + 1) - factorial(n + 2))
            e = n + 1 - math.log1p(rel_tail) / (factorial(n) * ln_b)
            evidence.append((alpha.base ** factorial(n), e))
        return Classification(
            "LiouvilleLike",
            evidence=evidence,
            note="structural: partial sums give e_n = n + 1, unbounded",
        )
    convs = convergents(alpha, depth)
    evidence = []
    for c in convs:
        e = _approximation_exponent(alpha, c)
        if e is not None:
            evidence.append((c.q, e))
    if len(evidence) < 2:
        raise PrecisionError(
            f"too few resolvable convergents for {alpha!r}",
            required_digits=_digits_needed(depth),
        )
    tail = [e for _, e in evidence[len(evidence) // 2 :]]
    k_est = max(2.0, max(tail))
    note = "" if alpha.exact else "finite-precision heuristic: Liouville-ness is undecidable from finitely many digits"
    if k_est > k_max:
        return Classification("LiouvilleLike", k_est=k_est, evidence=evidence, note=note)
    return Classification("Diophantine", k_est=k_est, evidence=evidence, note=note)
