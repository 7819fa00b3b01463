"""Sparse Fourier series in (theta1, theta2, theta3) with radial coefficient profiles.

A series is a finite map ``(p, q, m) -> c(r)`` meaning
``sum c_{p,q,m}(r) exp(2 pi i (p theta1 + q theta2 + m theta3))``; indices are
Python ints of any size and each coefficient is a complex array sampled on a
shared ``RadialGrid``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import ArgumentError, GridMismatchError, ResourceError

TWO_PI = 2.0 * np.pi
DEFAULT_TERM_BUDGET = 200_000
NON_DECAY_THRESHOLD = 1e-3
NON_DECAY_MAX_RATE = 1.0

Index = tuple[int, int, int]


@dataclass(frozen=True)
class RadialGrid:
    r_min: float = 0.05
    r_max: float = 0.70
    n: int = 128

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ArgumentError("radial grid needs 0 < r_min < r_max")
        if self.n < 8:
            raise ArgumentError("radial grid needs at least 8 nodes")

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = np.linspace(self.r_min, self.r_max, self.n)
        nodes.flags.writeable = False
        return nodes

    def derivative(self, values: np.ndarray) -> np.ndarray:
        """Second-order finite differences in r (exact on quadratics)."""
        return np.gradient(values, self.nodes, axis=-1, edge_order=2)

    def interpolate(self, values: np.ndarray, r: float) -> complex:
        if not self.r_min <= r <= self.r_max:
            raise ArgumentError(f"r={r} outside [{self.r_min}, {self.r_max}]")
        nodes = self.nodes
        return complex(np.interp(r, nodes, values.real) + 1j * np.interp(r, nodes, values.imag))

    def to_json(self):
        return {"r_min": self.r_min, "r_max": self.r_max, "n": self.n}


DEFAULT_GRID = RadialGrid()


# -- closed-form radial profiles ---------------------------------------------


def _psi(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _dpsi(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos]) / x[pos] ** 2
    return out


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    a, b = _psi(x), _psi(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def smooth_step_derivative(x):
    x = np.asarray(x, dtype=float)
    a, b = _psi(x), _psi(1.0 - x)
    da, db = _dpsi(x), -_dpsi(1.0 - x)
    return (da * (a + b) - a * (da + db)) / (a + b) ** 2


CUTOFF_CENTER = 1.0 / (2.0 * np.sqrt(2.0))
CUTOFF_EPSILON = 0.05
BUMP_SUPPORT = (0.1, 0.6)
BUMP_LINEAR = (0.25, 0.45)


def bump(r):
    """rho: zero outside [0.1, 0.6], equal to r on [0.25, 0.45]."""
    r = np.asarray(r, dtype=float)
    (a, b), (c, d) = BUMP_SUPPORT, BUMP_LINEAR
    return r * smooth_step((r - a) / (c - a)) * smooth_step((b - r) / (b - d))


def cutoff(r, epsilon: float = CUTOFF_EPSILON):
    """tau: 0 below 1/(2 sqrt 2) - epsilon, 1 above 1/(2 sqrt 2) + epsilon."""
    r = np.asarray(r, dtype=float)
    return smooth_step((r - (CUTOFF_CENTER - epsilon)) / (2.0 * epsilon))


def cutoff_derivative(r, epsilon: float = CUTOFF_EPSILON):
    r = np.asarray(r, dtype=float)
    return smooth_step_derivative((r - (CUTOFF_CENTER - epsilon)) / (2.0 * epsilon)) / (2.0 * epsilon)


@dataclass(frozen=True)
class RadialProfile:
    """Samples on a grid plus an optional closed-form tag.

    Tags: ``zero``, ``constant``, ``linear_r``, ``bump``, ``cutoff``.
    """

    grid: RadialGrid
    samples: np.ndarray = field(compare=False)
    tag: str | None = None

    @classmethod
    def from_tag(cls, tag: str, grid: RadialGrid = DEFAULT_GRID, value: float = 1.0):
        r = grid.nodes
        table = {
            "zero": np.zeros_like(r),
            "constant": np.full_like(r, value),
            "linear_r": r.copy(),
            "bump": bump(r),
            "cutoff": cutoff(r),
        }
        if tag not in table:
            raise ArgumentError(f"unknown profile tag {tag!r}")
        return cls(grid, table[tag], tag)

    def derivative(self) -> "RadialProfile":
        r = self.grid.nodes
        exact = {
            "zero": np.zeros_like(r),
            "constant": np.zeros_like(r),
            "linear_r": np.ones_like(r),
            "cutoff": cutoff_derivative(r),
        }
        if self.tag in exact:
            tag = "zero" if self.tag in ("zero", "constant") else None
            if self.tag == "linear_r":
                return RadialProfile(self.grid, exact[self.tag], "constant")
            return RadialProfile(self.grid, exact[self.tag], tag)
        return RadialProfile(self.grid, self.grid.derivative(self.samples))


# -- the series --------------------------------------------------------------


def _as_profile(value, grid: RadialGrid) -> np.ndarray:
    if isinstance(value, RadialProfile):
        if value.grid != grid:
            raise GridMismatchError("profile grid differs from series grid")
        value = value.samples
    arr = np.asarray(value, dtype=complex)
    if arr.ndim == 0:
        arr = np.full(grid.n, complex(arr))
    if arr.shape != (grid.n,):
        raise GridMismatchError(f"profile of shape {arr.shape} on a grid of {grid.n} nodes")
    return arr


def _exp2pi(k: int, theta: float) -> complex:
    # exact reduction of k*theta mod 1 so huge indices keep full accuracy
    phase = (k * Fraction(theta)) % 1
    return complex(np.exp(1j * TWO_PI * float(phase)))


class SparseFourierSeries:
    __slots__ = ("grid", "terms", "max_terms")

    def __init__(
        self,
        terms: Mapping[Index, np.ndarray] | None = None,
        grid: RadialGrid = DEFAULT_GRID,
        max_terms: int = DEFAULT_TERM_BUDGET,
    ):
        self.grid = grid
        self.max_terms = max_terms
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != 3:
                raise ArgumentError(f"index {idx} must have three entries")
            arr = _as_profile(c, grid)
            if arr.any():
                clean[idx] = arr
        self.terms = clean

    @classmethod
    def _trusted(cls, terms: dict, grid: RadialGrid, max_terms: int = DEFAULT_TERM_BUDGET):
        """Internal constructor for already-validated index tuples and arrays."""
        obj = cls.__new__(cls)
        obj.grid = grid
        obj.max_terms = max_terms
        obj.terms = {k: v for k, v in terms.items() if v.any()}
        return obj

    # constructors
    @classmethod
    def zero(cls, grid: RadialGrid = DEFAULT_GRID):
        return cls({}, grid)

    @classmethod
    def constant(cls, value, grid: RadialGrid = DEFAULT_GRID):
        return cls({(0, 0, 0): value}, grid)

    @classmethod
    def mode(cls, idx: Index, profile=1.0, grid: RadialGrid = DEFAULT_GRID):
        return cls({idx: _as_profile(profile, grid)}, grid)

    @classmethod
    def cos_mode(cls, idx: Index, profile=1.0, grid: RadialGrid = DEFAULT_GRID):
        """``profile(r) * cos(2 pi (p theta1 + q theta2 + m theta3))``."""
        c = 0.5 * _as_profile(profile, grid)
        neg = tuple(-i for i in idx)
        return cls({idx: c, neg: c}, grid) if idx != neg else cls({idx: 2 * c}, grid)

    @classmethod
    def sin_mode(cls, idx: Index, profile=1.0, grid: RadialGrid = DEFAULT_GRID):
        c = _as_profile(profile, grid) / 2j
        neg = tuple(-i for i in idx)
        return cls({idx: c, neg: -c}, grid)

    @classmethod
    def radial(cls, profile, grid: RadialGrid = DEFAULT_GRID):
        return cls({(0, 0, 0): _as_profile(profile, grid)}, grid)

    # basic protocol
    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self):
        return f"SparseFourierSeries({len(self.terms)} terms)"

    def _like(self, terms):
        return SparseFourierSeries._trusted(terms, self.grid, self.max_terms)

    def _check_grid(self, other: "SparseFourierSeries"):
        if other.grid != self.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")

    def coefficient(self, idx: Index) -> np.ndarray:
        return self.terms.get(tuple(idx), np.zeros(self.grid.n, dtype=complex))

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = SparseFourierSeries.constant(other, self.grid)
        self._check_grid(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out[idx] + c if idx in out else c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        """Multiply by a scalar or by a radial array."""
        if np.isscalar(factor):
            if factor == 0:
                return self._like({})
            return self._like({k: v * factor for k, v in self.terms.items()})
        arr = _as_profile(factor, self.grid)
        return self._like({k: v * arr for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SparseFourierSeries):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, factor):
        return self.scale(1.0 / factor)

    def norm(self) -> float:
        if not self.terms:
            return 0.0
        return float(max(np.max(np.abs(v)) for v in self.terms.values()))

    def conj_reflect(self) -> "SparseFourierSeries":
        """The series of the complex-conjugate function."""
        return self._like({tuple(-i for i in k): np.conj(v) for k, v in self.terms.items()})

    def is_real(self, tol: float = 1e-12) -> bool:
        return (self - self.conj_reflect()).norm() <= tol * max(1.0, self.norm())

    def pruned(self, tol: float) -> "SparseFourierSeries":
        return self._like({k: v for k, v in self.terms.items() if np.max(np.abs(v)) > tol})

    def derivative(self, axis) -> "SparseFourierSeries":
        return derivative(self, axis)

    def average_00(self) -> "SparseFourierSeries":
        return average_00(self)

    def evaluate(self, r, theta1=0.0, theta2=0.0, theta3=0.0) -> complex:
        return evaluate(self, (r, theta1, theta2, theta3))

    def restrict(self, predicate) -> "SparseFourierSeries":
        return self._like({k: v for k, v in self.terms.items() if predicate(k)})

    def map_coefficients(self, fn) -> "SparseFourierSeries":
        """Apply ``fn(index, array) -> array`` to each term."""
        return self._like({k: fn(k, v) for k, v in self.terms.items()})

    # serialisation
    def to_json(self) -> dict:
        r = self.grid.nodes
        rows = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            j = int(np.argmax(np.abs(c)))
            amp = c[j]
            ratio = c / amp
            row = {"idx": list(idx), "re": float(amp.real), "im": float(amp.imag)}
            if np.allclose(ratio.imag, 0.0, atol=1e-14):
                ratio = ratio.real
                if np.allclose(ratio, 1.0, rtol=0, atol=1e-14):
                    row["profile"] = "constant"
                elif np.allclose(ratio * r[j], r, rtol=0, atol=1e-14):
                    row["profile"] = "linear_r"
                    row["re"], row["im"] = float((amp / r[j]).real), float((amp / r[j]).imag)
                else:
                    row["profile"] = {"samples": ratio.tolist()}
            else:
                row["re"], row["im"] = 1.0, 0.0
                row["profile"] = {"samples": c.real.tolist(), "samples_imag": c.imag.tolist()}
            rows.append(row)
        return {"grid": self.grid.to_json(), "terms": rows}

    @classmethod
    def from_json(cls, obj: Mapping, grid: RadialGrid | None = None) -> "SparseFourierSeries":
        if grid is None:
            grid = RadialGrid(**obj["grid"]) if "grid" in obj else DEFAULT_GRID
        r = grid.nodes
        terms = {}
        for row in obj.get("terms", []):
            amp = complex(row.get("re", 1.0), row.get("im", 0.0))
            prof = row.get("profile", "constant")
            if prof == "constant":
                samples = np.ones_like(r)
            elif prof == "linear_r":
                samples = r
            elif isinstance(prof, str):
                samples = RadialProfile.from_tag(prof, grid).samples
            else:
                samples = np.asarray(prof["samples"], dtype=complex)
                if "samples_imag" in prof:
                    samples = samples + 1j * np.asarray(prof["samples_imag"])
            idx = tuple(int(i) for i in row["idx"])
            terms[idx] = terms.get(idx, 0) + amp * _as_profile(samples, grid)
        return cls(terms, grid)


def add(a: SparseFourierSeries, b) -> SparseFourierSeries:
    return a + b


def scale(a: SparseFourierSeries, factor) -> SparseFourierSeries:
    return a.scale(factor)


def multiply(a: SparseFourierSeries, b: SparseFourierSeries, max_terms: int | None = None):
    """Convolution of indices with pointwise products of the radial profiles."""
    a._check_grid(b)
    budget = max_terms if max_terms is not None else min(a.max_terms, b.max_terms)
    if not a.terms or not b.terms:
        return a._like({})
    if len(a.terms) > len(b.terms):
        a, b = b, a
    b_keys = list(b.terms)
    b_vals = np.array([b.terms[k] for k in b_keys])
    out: dict = {}
    for ka, va in a.terms.items():
        prods = b_vals * va
        for kb, row in zip(b_keys, prods):
            key = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
            if key in out:
                out[key] = out[key] + row
            else:
                out[key] = row
                if len(out) > budget:
                    raise ResourceError(f"product exceeds the term budget of {budget}")
    return SparseFourierSeries._trusted(out, a.grid, a.max_terms)


_AXES = {"theta1": 0, "theta2": 1, "theta3": 2, 0: 0, 1: 1, 2: 2}


def derivative(series: SparseFourierSeries, axis) -> SparseFourierSeries:
    """d/dtheta_k multiplies each term by 2 pi i (its index); ``axis='r'`` differentiates profiles."""
    if axis == "r":
        return series._like({k: series.grid.derivative(v) for k, v in series.terms.items()})
    if axis not in _AXES:
        raise ArgumentError(f"unknown axis {axis!r}")
    ax = _AXES[axis]
    return series._like({k: v * (TWO_PI * 1j * k[ax]) for k, v in series.terms.items()})


def average_00(series: SparseFourierSeries) -> SparseFourierSeries:
    """Keep the terms with ``p = q = 0`` (still functions of r and theta3)."""
    return series.restrict(lambda k: k[0] == 0 and k[1] == 0)


def evaluate(series: SparseFourierSeries, point) -> complex:
    r, t1, t2, t3 = point
    total = 0j
    for (p, q, m), c in series.terms.items():
        phase = _exp2pi(p, t1) * _exp2pi(q, t2) * _exp2pi(m, t3)
        total += series.grid.interpolate(c, r) * phase
    return total


@dataclass
class DecayReport:
    k_hat: float
    lambda_hat: float
    verdict: str  # rapid-decay | polynomial | non-decaying | inconclusive
    indices: list = field(default_factory=list)
    amplitudes: list = field(default_factory=list)
    residuals: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "abs_c"])
        for n, a in zip(self.indices, self.amplitudes):
            w.writerow([n, repr(a)])
        return buf.getvalue()


def mode_amplitudes(series: SparseFourierSeries, axis="max") -> dict[int, float]:
    """Largest |c| (over r and the other indices) for each |n| along ``axis``."""
    amps: dict[int, float] = {}
    for k, v in series.terms.items():
        n = max(abs(i) for i in k) if axis == "max" else abs(k[_AXES[axis]])
        if n == 0:
            continue
        a = float(np.max(np.abs(v)))
        amps[n] = max(amps.get(n, 0.0), a)
    return amps


def decay_fit(series: SparseFourierSeries, axis="max", min_span: float = 10.0) -> DecayReport:
    """Least-squares fit of ``log|c_n| = log(lambda) - k log|n|``.

    The verdict needs at least two indices spanning a factor ``min_span``;
    otherwise it is ``inconclusive``.  ``non-decaying`` means the amplitudes in
    the upper half of the tested range all stay above 1e-3 and the fitted rate
    ``k`` stays below ``NON_DECAY_MAX_RATE`` (no decay even like ``1/n``).
    """
    amps = mode_amplitudes(series, axis)
    ns = sorted(n for n, a in amps.items() if a > 0)
    if len(ns) < 2:
        return DecayReport(math.nan, math.nan, "inconclusive", ns, [amps[n] for n in ns])
    a = np.array([amps[n] for n in ns])
    logn = np.array([math.log(n) for n in ns])
    loga = np.log(a)
    slope, intercept = np.polyfit(logn, loga, 1)
    k_hat, lam = float(-slope), float(math.exp(intercept))
    residuals = (loga - (intercept + slope * logn)).tolist()
    report = DecayReport(k_hat, lam, "inconclusive", ns, a.tolist(), residuals)
    if ns[-1] < min_span * ns[0]:
        return report
    tail = a[len(a) // 2 :]
    if np.all(tail >= NON_DECAY_THRESHOLD) and k_hat < NON_DECAY_MAX_RATE:
        report.verdict = "non-decaying"
    elif k_hat >= 2.0 or tail[-1] < 1e-12 * a.max():
        report.verdict = "rapid-decay"
    else:
        report.verdict = "polynomial"
    return report


def decay_csv(series: SparseFourierSeries, axis="max") -> str:
    """CSV rows ``(|n|, |c_n|)`` for decay plots."""
    return decay_fit(series, axis).to_csv()
