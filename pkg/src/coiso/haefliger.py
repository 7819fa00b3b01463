"""Leaf-space model: integration over leaves onto a transverse disk.

The transversal is the disk ``theta2 = 0`` with coordinates ``(r, theta1)``.
Top-degree foliated forms are integrated along the leaves (over ``theta2`` and
``theta3``, each with measure ``dtheta / 2 pi`` on the unit-period circle), chart by
chart through a partition of unity on the ``theta2`` circle, and the chart
pieces are recombined.  The composite holonomy is rotation by ``alpha`` on
``theta1``, so membership in the coboundary span ``{G - G o R_alpha}`` is decided
by ``solver.solve_rotation``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fourier as fs
from .arithmetic import AlphaSpec
from .errors import ArgumentError
from .foliation import FoliatedForm
from .fourier import SparseFourierSeries
from .solver import SolveReport, solve_rotation

FFT_SAMPLES = 512


def _window(theta: np.ndarray, a: float, b: float) -> np.ndarray:
    """Smooth bump, positive exactly on the periodic interval ``(a, b)``."""
    x = ((theta - a) % 1.0) / (b - a)
    inside = x < 1.0
    out = np.zeros_like(theta)
    out[inside] = fs.smooth_step(3 * x[inside]) * fs.smooth_step(3 * (1 - x[inside]))
    return out


@dataclass(frozen=True)
class RegularCover:
    """Arcs on the ``theta2`` circle (period 1) with a partition of unity.

    ``charts`` holds ``(start, end)`` pairs; widths must stay below the full
    circle so each plaque meets a plaque of another chart at most once.
    """

    charts: tuple = ((-0.05, 1 / 3 + 0.05), (1 / 3 - 0.05, 2 / 3 + 0.05), (2 / 3 - 0.05, 1.05))
    weights_fft: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for a, b in self.charts:
            if not 0 < b - a < 1:
                raise ArgumentError(f"chart ({a}, {b}) must be a proper arc")
        theta = np.arange(FFT_SAMPLES) / FFT_SAMPLES
        raw = np.array([_window(theta, a, b) for a, b in self.charts])
        total = raw.sum(axis=0)
        if np.any(total <= 0):
            raise ArgumentError("charts do not cover the circle")
        weights = raw / total
        object.__setattr__(self, "weights_fft", np.fft.fft(weights, axis=1) / FFT_SAMPLES)

    @classmethod
    def three_chart(cls, overlap: float = 0.05):
        return cls(((-overlap, 1 / 3 + overlap), (1 / 3 - overlap, 2 / 3 + overlap), (2 / 3 - overlap, 1 + overlap)))

    @classmethod
    def random(cls, rng: np.random.Generator, n: int = 3):
        """A cover with ``n`` arcs whose cut points are drawn from ``rng``."""
        cuts = np.sort(rng.uniform(0, 1, n))
        gaps = np.diff(np.concatenate([cuts, cuts[:1] + 1]))
        overlap = min(0.05, 0.25 * gaps.min())
        charts = tuple((float(cuts[i] - overlap), float(cuts[i] + gaps[i] + overlap)) for i in range(n))
        return cls(charts)

    def weight_coefficient(self, chart: int, q: int) -> complex:
        """Fourier coefficient ``hat(w_chart)(q)``; zero beyond the sampling band."""
        if abs(q) >= FFT_SAMPLES // 2:
            return 0j
        return complex(self.weights_fft[chart, q % FFT_SAMPLES])

    def weights(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        raw = np.array([_window(theta, a, b) for a, b in self.charts])
        return raw / raw.sum(axis=0)


@dataclass
class HaefligerClass:
    representative: SparseFourierSeries
    alpha: AlphaSpec
    verdict: SolveReport | None = None
    magnitude: float = 0.0  # max-norm of the integrated form, the scale of its rounding

    def __sub__(self, other: "HaefligerClass") -> "HaefligerClass":
        mag = max(self.magnitude, other.magnitude)
        return HaefligerClass(self.representative - other.representative, self.alpha, magnitude=mag)

    def __add__(self, other: "HaefligerClass") -> "HaefligerClass":
        mag = max(self.magnitude, other.magnitude)
        return HaefligerClass(self.representative + other.representative, self.alpha, magnitude=mag)

    def scale(self, factor) -> "HaefligerClass":
        mag = self.magnitude * float(np.max(np.abs(factor)))
        return HaefligerClass(self.representative.scale(factor), self.alpha, magnitude=mag)

    def to_json(self) -> dict:
        out = {"representative": self.representative.to_json(), "alpha": self.alpha.to_json()}
        if self.verdict is not None:
            out["verdict"] = self.verdict.status
        return out


def _chart_piece(c: SparseFourierSeries, cover: RegularCover, chart: int) -> SparseFourierSeries:
    """Leaf integral of ``w_chart(theta2) * c`` over ``theta2`` and ``theta3``."""
    out: dict = {}
    for (p, q, m), v in c.terms.items():
        if m:
            continue
        w = cover.weight_coefficient(chart, -q)
        if w == 0:
            continue
        key = (p, 0, 0)
        out[key] = out[key] + w * v if key in out else w * v
    return SparseFourierSeries(out, c.grid)


def pairwise_elimination(F1: SparseFourierSeries, F2: SparseFourierSeries):
    """Move chart-2 data onto chart 1 across a single plaque match.

    With ``G1 = F1`` and ``G2 = 0`` the pair ``(F1, F2)`` is cohomologous to
    ``F1 + F2`` placed on chart 1.  Returns the merged function and ``(G1, G2)``.
    """
    return F1 + F2, (F1, SparseFourierSeries.zero(F1.grid))


def regular_cover_reduce(
    twoform: FoliatedForm,
    alpha: AlphaSpec,
    cover: RegularCover | None = None,
    tol: float = 1e-13,
) -> HaefligerClass:
    """Integrate a top-degree foliated form over the leaves onto the ``(r, theta1)`` disk."""
    twoform._need(2)
    cover = cover or RegularCover()
    c = twoform.c
    pieces = [_chart_piece(c, cover, j) for j in range(len(cover.charts))]
    merged = pieces[0]
    for piece in pieces[1:]:
        merged, _ = pairwise_elimination(merged, piece)
    # the partition of unity sums to one; drop the rounding left on q != 0 modes
    merged = merged.pruned(tol * max(1.0, c.norm()))
    return HaefligerClass(merged, alpha, magnitude=c.norm())


@dataclass
class CoboundaryVerdict:
    in_span: bool
    solution: SparseFourierSeries | None
    report: SolveReport

    @property
    def label(self) -> str:
        return "InSpan" if self.in_span else "NotInSpan"


def coboundary_test(cls: HaefligerClass, tol: float = 1e-10) -> CoboundaryVerdict:
    """Is the representative of the form ``G - G o R_alpha``?"""
    report = solve_rotation(cls.representative, cls.alpha, tol, cls.magnitude)
    cls.verdict = report
    return CoboundaryVerdict(report.solved, report.solution if report.solved else None, report)


def f_trivial_check(components, leaf_dim: int = 2, tol: float = 1e-12) -> bool:
    """Whether a form vanishes as soon as ``leaf_dim`` of its slots are leaf vectors.

    ``components`` maps slot patterns such as ``"FF"``, ``"FN"``, ``"NN"`` (``F`` a
    leaf vector, ``N`` a normal vector) to component data (series, arrays or
    scalars).  A ``FoliatedForm`` of degree 2 is read as its ``"FF"`` component.
    """
    if isinstance(components, FoliatedForm):
        if components.degree < leaf_dim:
            return True
        components = {"F" * components.degree: components.c}
    for slots, value in components.items():
        if set(slots) - {"F", "N"}:
            raise ArgumentError(f"slot pattern {slots!r} may only use F and N")
        if slots.count("F") < leaf_dim:
            continue
        size = value.norm() if hasattr(value, "norm") else float(np.max(np.abs(value)))
        if size > tol:
            return False
    return True
