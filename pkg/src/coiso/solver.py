"""Homological equations by Fourier division, and the obstruction witnesses.

Two equations are solved mode by mode:

* the circle equation ``F = G - G o R_alpha`` (``R_alpha`` is rotation by ``alpha``),
  whose symbol on mode ``n`` is ``1 - exp(2 pi i n alpha)``;
* the leaf equation ``X_H h = phi``, whose symbol on mode ``(p, q, m)`` is
  ``2 pi i (p + alpha q)``.

A solve either returns a solution or one of three obstruction verdicts.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fourier as fs
from .arithmetic import (
    AlphaSpec,
    LiouvilleSeries,
    Rational,
    is_resonant,
    linear_form,
    rotation_multiplier,
)
from .errors import ArgumentError, CoisoError
from .foliation import FoliatedForm, d_F1, x_h
from .fourier import DEFAULT_GRID, TWO_PI, DecayReport, RadialGrid, SparseFourierSeries

SOLVED = "Solved"
ZERO_MODE = "ObstructedZeroMode"
RESONANCE = "ObstructedResonance"
DIVERGENT = "DivergentSmallDivisor"
LIOUVILLE_FLOOR = 1.0 / (2.0 * math.pi) - 1e-6


@dataclass
class SolveReport:
    status: str
    solution: object = None  # SparseFourierSeries, or a FoliatedForm for top-degree solves
    residual: SparseFourierSeries | None = None  # the offending zero mode
    resonant: list = field(default_factory=list)
    certificate: list = field(default_factory=list)  # rows (n, |F_n|, |G_n|, divisor)
    min_divisor: float = math.inf
    decay: DecayReport | None = None
    roundtrip_residual: float = 0.0
    innermost_amplitude: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status == SOLVED

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "min_divisor": None if math.isinf(self.min_divisor) else self.min_divisor,
            "resonant": [list(r) if isinstance(r, tuple) else r for r in self.resonant],
            "certificate": [
                {"n": str(n), "abs_F": a, "abs_G": b, "divisor": d} for n, a, b, d in self.certificate
            ],
            "roundtrip_residual": self.roundtrip_residual,
        }
        if self.decay is not None:
            out["decay"] = {
                "k_hat": None if math.isnan(self.decay.k_hat) else self.decay.k_hat,
                "lambda_hat": None if math.isnan(self.decay.lambda_hat) else self.decay.lambda_hat,
                "verdict": self.decay.verdict,
            }
        if self.residual is not None:
            out["zero_mode_norm"] = self.residual.norm()
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "abs_F", "abs_G", "divisor"])
        for row in self.certificate:
            w.writerow([str(row[0])] + [repr(x) for x in row[1:]])
        return buf.getvalue()


def _amp(v: np.ndarray) -> float:
    return float(np.max(np.abs(v)))


def _zero_mode_tol(series: SparseFourierSeries, tol: float, magnitude: float = 0.0) -> float:
    """Zero-mode threshold, relative to the series or to the data it was computed from."""
    return tol * max(1.0, series.norm(), magnitude)


def solve_rotation(
    F: SparseFourierSeries, alpha: AlphaSpec, tol: float = 1e-10, magnitude: float = 0.0
) -> SolveReport:
    """Solve ``F = G - G o R_alpha`` for ``F`` a function of ``(r, theta1)``.

    ``magnitude`` is the size of the data ``F`` was reduced from; cancellation
    there leaves rounding of order ``eps * magnitude`` on the zero mode.
    """
    for k in F.terms:
        if k[1] or k[2]:
            raise ArgumentError(f"solve_rotation expects (r, theta1) data, got mode {k}")
    zero = F.coefficient((0, 0, 0))
    if _amp(zero) > _zero_mode_tol(F, tol, magnitude):
        return SolveReport(ZERO_MODE, residual=SparseFourierSeries.radial(zero, F.grid))
    modes = sorted((k[0] for k in F.terms if k[0] != 0), key=lambda n: (abs(n), n))
    if isinstance(alpha, Rational):
        resonant = [n for n in modes if is_resonant(alpha, n)]
        if resonant:
            return SolveReport(RESONANCE, resonant=resonant)
    terms, rows, min_div = {}, [], math.inf
    for n in modes:
        mult = rotation_multiplier(alpha, n)
        Fn = F.terms[(n, 0, 0)]
        Gn = Fn / mult
        terms[(n, 0, 0)] = Gn
        min_div = min(min_div, abs(mult))
        rows.append((n, _amp(Fn), _amp(Gn), abs(mult)))
    G = SparseFourierSeries(terms, F.grid)
    decay = fs.decay_fit(G, axis=0)
    if decay.verdict == "non-decaying":
        cert = [row for row in rows if row[2] >= fs.NON_DECAY_THRESHOLD]
        return SolveReport(DIVERGENT, solution=G, certificate=cert, min_divisor=min_div, decay=decay)
    check = G - _rotate(G, alpha) - (F - F.average_00())
    return SolveReport(
        SOLVED, solution=G, certificate=rows, min_divisor=min_div, decay=decay,
        roundtrip_residual=check.norm(),
    )


def _rotate(G: SparseFourierSeries, alpha: AlphaSpec) -> SparseFourierSeries:
    """``G o R_alpha``: mode ``n`` picks up ``exp(2 pi i n alpha)``."""
    return G.map_coefficients(lambda k, v: v * (1.0 - rotation_multiplier(alpha, k[0])))


def _exactly_resonant(alpha: AlphaSpec, p: int, q: int) -> bool:
    return isinstance(alpha, Rational) and p * alpha.q + alpha.p * q == 0


def solve_XH(phi: SparseFourierSeries, alpha: AlphaSpec, tol: float = 1e-10) -> SolveReport:
    """Solve ``X_H h = phi``; the (0,0,m) modes of ``h`` are fixed to zero."""
    zero = phi.average_00()
    if zero.norm() > _zero_mode_tol(phi, tol):
        return SolveReport(ZERO_MODE, residual=zero)
    keys = [k for k in phi.terms if k[0] or k[1]]
    resonant = sorted({(k[0], k[1]) for k in keys if _exactly_resonant(alpha, k[0], k[1])})
    if resonant:
        return SolveReport(RESONANCE, resonant=resonant)
    terms, rows, min_div = {}, [], math.inf
    for k in keys:
        lf = linear_form(alpha, k[0], k[1])
        terms[k] = phi.terms[k] / (TWO_PI * 1j * lf)
        min_div = min(min_div, abs(lf))
        rows.append((k, _amp(phi.terms[k]), _amp(terms[k]), abs(lf)))
    h = SparseFourierSeries(terms, phi.grid)
    decay = fs.decay_fit(h, axis="max")
    inner = max((abs(v[0]) for v in h.terms.values()), default=0.0)
    if decay.verdict == "non-decaying":
        cert = [row for row in rows if row[2] >= fs.NON_DECAY_THRESHOLD]
        return SolveReport(DIVERGENT, solution=h, certificate=cert, min_divisor=min_div, decay=decay)
    residual = (x_h(h, alpha) - (phi - zero)).norm()
    return SolveReport(
        SOLVED, solution=h, certificate=rows, min_divisor=min_div, decay=decay,
        roundtrip_residual=residual, innermost_amplitude=float(inner),
    )


def solve_top_degree(c: SparseFourierSeries, alpha: AlphaSpec, tol: float = 1e-10) -> SolveReport:
    """Find a 1-form ``S`` with ``d_F1(S) = c``.

    Modes with ``(p, q) != (0, 0)`` go through ``solve_XH`` into the second
    component; the ``(0, 0, m != 0)`` modes are absorbed by ``-X_3`` acting on
    the first component.  A nonzero ``(0, 0, 0)`` mode is the obstruction.
    """
    zero = c.coefficient((0, 0, 0))
    if _amp(zero) > _zero_mode_tol(c, tol):
        return SolveReport(ZERO_MODE, residual=SparseFourierSeries.radial(zero, c.grid))
    axis_part = c.average_00()
    report = solve_XH(c - axis_part, alpha, tol)
    if not report.solved:
        return report
    s1 = axis_part.map_coefficients(
        lambda k, v: -v / (TWO_PI * 1j * k[2]) if k[2] else np.zeros_like(v)
    )
    form = FoliatedForm.one_form(s1, report.solution)
    report.solution = form
    report.roundtrip_residual = (d_F1(form, alpha).c - (c - SparseFourierSeries.radial(zero, c.grid))).norm()
    return report


# -- witnesses --------------------------------------------------------------


@dataclass
class Witness:
    gamma: FoliatedForm
    tag: str  # RationalWitness | LiouvilleWitness
    params: dict
    circle_function: SparseFourierSeries | None = None  # F(theta1) for the Liouville witness


def _bump(grid: RadialGrid) -> np.ndarray:
    return fs.bump(grid.nodes)


def _assert_closed(gamma: FoliatedForm, alpha: AlphaSpec):
    residual = d_F1(gamma, alpha).norm()
    if residual > 1e-12:
        raise CoisoError(f"witness is not closed (residual {residual:.2e})")


def witness_rational(p: int, q: int, grid: RadialGrid = DEFAULT_GRID) -> Witness:
    """``f = rho(r) sin(2 pi q theta1)``, ``g = rho(r)``."""
    if q <= 0 or math.gcd(p, q) != 1:
        raise ArgumentError("witness_rational needs q > 0 and gcd(p, q) = 1")
    rho = _bump(grid)
    f = SparseFourierSeries.sin_mode((q, 0, 0), rho, grid)
    g = SparseFourierSeries.radial(rho, grid)
    gamma = FoliatedForm.one_form(f, g)
    _assert_closed(gamma, Rational(p, q))
    return Witness(gamma, "RationalWitness", {"p": p, "q": q})


def liouville_coefficients(alpha: LiouvilleSeries, n_max: int) -> list[tuple[int, Fraction]]:
    """``(q_n, p_n - q_n alpha)`` for ``n = 1..n_max`` with ``p_n / q_n`` the partial sums."""
    out = []
    for n in range(1, n_max + 1):
        s = alpha.partial_sum(n)
        q_n = alpha.base ** math.factorial(n)
        # p_n - q_n alpha = -q_n (alpha - S_n); the two next terms fix it to ~base^-(n+2)!
        out.append((q_n, -q_n * alpha.tail(n)))
        assert s.denominator == q_n
    return out


def witness_liouville(alpha: LiouvilleSeries, n_max: int, grid: RadialGrid = DEFAULT_GRID) -> Witness:
    """``f = rho(r) F(theta1)``, ``g = rho(r) r`` with ``F_{+-q_n} = p_n - q_n alpha``."""
    if not isinstance(alpha, LiouvilleSeries):
        raise ArgumentError("witness_liouville needs a Liouville series")
    if n_max < 2:
        raise ArgumentError("witness_liouville needs n_max >= 2")
    if n_max > alpha.max_level:
        raise ArgumentError(f"n_max={n_max} exceeds the certified depth {alpha.max_level}")
    coeffs = liouville_coefficients(alpha, n_max)
    F_terms = {}
    for q_n, c in coeffs:
        F_terms[(q_n, 0, 0)] = float(c)
        F_terms[(-q_n, 0, 0)] = float(c)
    F = SparseFourierSeries(F_terms, grid)
    decay = fs.decay_fit(F, axis=0)
    if decay.verdict != "rapid-decay":
        raise CoisoError(f"Liouville witness F fails the smoothness check: {decay.verdict}")
    rho = _bump(grid)
    gamma = FoliatedForm.one_form(F.scale(rho), SparseFourierSeries.radial(rho * grid.nodes, grid))
    _assert_closed(gamma, alpha)
    params = {"n_max": n_max, "q": [str(q) for q, _ in coeffs], "F": [float(c) for _, c in coeffs]}
    return Witness(gamma, "LiouvilleWitness", params, circle_function=F)
