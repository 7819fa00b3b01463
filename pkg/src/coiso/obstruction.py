"""First obstruction (Kuranishi class) and order-by-order Maurer-Cartan continuation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arithmetic import AlphaSpec
from .errors import ArgumentError, NotClosedError
from .foliation import (
    Connection,
    FoliatedForm,
    d_F,
    gauge_normalize,
    is_closed,
    l2,
    l_k_reduced,
    y_alpha_family,
)
from .haefliger import HaefligerClass, RegularCover, regular_cover_reduce
from .linfty import FormalSolution, mc_residual, obstruction_rhs
from .solver import SolveReport, Witness, solve_rotation, solve_top_degree


@dataclass
class FirstObstruction:
    bracket: FoliatedForm
    reduced: HaefligerClass
    report: SolveReport


def first_obstruction(
    gamma: Witness | FoliatedForm,
    alpha: AlphaSpec,
    conn: Connection | None = None,
    cover: RegularCover | None = None,
    tol: float = 1e-10,
) -> FirstObstruction:
    """``l2(G, G)``, its leaf integral, and the rotation solve deciding the class."""
    if isinstance(gamma, Witness):
        gamma = gamma.gamma
    conn = conn or Connection.flat(alpha, gamma.grid)
    if not is_closed(gamma, alpha, tol):
        raise NotClosedError("the first obstruction needs a d_F-closed form")
    bracket = l2(gamma, gamma, conn)
    cls = regular_cover_reduce(bracket, alpha, cover)
    report = solve_rotation(cls.representative, alpha, tol, cls.magnitude)
    cls.verdict = report
    return FirstObstruction(bracket, cls, report)


@dataclass
class Continuation:
    solution: FormalSolution | None
    failed_order: int | None = None
    report: SolveReport | None = None
    gauges: list = field(default_factory=list)
    residuals: list = field(default_factory=list)  # max-norm per order 1..K

    @property
    def succeeded(self) -> bool:
        return self.failed_order is None


def mc_continue(
    gamma1: FoliatedForm,
    alpha: AlphaSpec,
    conn: Connection | None = None,
    K: int = 4,
    tol: float = 1e-10,
    cover: RegularCover | None = None,
) -> Continuation:
    """Extend ``G_1`` to ``G_t = sum_{i<=K} G_i t^i`` solving Maurer-Cartan to order ``K``.

    Order 2 first checks the Kuranishi class of ``G_1`` on the leaf space; every
    order then solves ``d_F G_i = -rhs_i`` and gauge-normalizes ``G_i``.
    """
    if K < 2:
        raise ArgumentError("continuation needs K >= 2")
    conn = conn or Connection.flat(alpha, gamma1.grid)
    if not is_closed(gamma1, alpha, tol):
        raise NotClosedError("G_1 must be d_F-closed")
    first = first_obstruction(gamma1, alpha, conn, cover, tol)
    if not first.report.solved:
        return Continuation(None, 2, first.report)
    family = y_alpha_family(alpha, conn, max_arity=K)
    g1, h1 = gauge_normalize(gamma1, alpha, tol)
    coeffs, gauges = [g1], [h1]
    for i in range(2, K + 1):
        rhs = obstruction_rhs(family, coeffs, i)
        report = solve_top_degree(-rhs.c, alpha, tol)
        if not report.solved:
            return Continuation(FormalSolution(coeffs), i, report, gauges)
        gi, hi = gauge_normalize(report.solution, alpha, tol, check_closed=False)
        coeffs.append(gi)
        gauges.append(hi)
    solution = FormalSolution(coeffs)
    residuals = [mc_residual(family, coeffs, i).norm() for i in range(1, K + 1)]
    return Continuation(solution, None, None, gauges, residuals)


def mc_series_residuals(
    coeffs: list[FoliatedForm], alpha: AlphaSpec, conn: Connection, samples: int = 32
) -> list[float]:
    """Order-by-order residuals of ``sum_k 1/k! l_k(G_t, ..., G_t)`` by contour sampling.

    ``G_t`` is evaluated at the ``samples``-th roots of unity, the equal-argument
    operators are applied, and a discrete Fourier transform in ``t`` recovers
    the coefficients of ``t^1 .. t^K``.  Exact when ``samples > K^2``.
    """
    K = len(coeffs)
    if samples <= K * K:
        raise ArgumentError(f"need more than {K * K} samples to avoid aliasing")
    ts = np.exp(2j * math.pi * np.arange(samples) / samples)
    values = []
    for t in ts:
        gt = coeffs[0] * complex(t)
        for i, c in enumerate(coeffs[1:], start=2):
            gt = gt + c * complex(t**i)
        total = d_F(gt, alpha) + l2(gt, gt, conn) * 0.5
        if not conn.is_flat:
            for k in range(3, K + 1):
                total = total + l_k_reduced(gt, k, conn) * (1.0 / math.factorial(k))
        values.append(total)
    out = []
    for i in range(1, K + 1):
        weights = ts ** (-i) / samples
        acc = values[0] * complex(weights[0])
        for v, w in zip(values[1:], weights[1:]):
            acc = acc + v * complex(w)
        out.append(acc.norm())
    return out
