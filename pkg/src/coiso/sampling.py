"""Seeded random series and forms for probes, tests and the CLI."""

from __future__ import annotations

import numpy as np

from .arithmetic import AlphaSpec
from .foliation import FoliatedForm, basis, d_F0
from .fourier import DEFAULT_GRID, RadialGrid, SparseFourierSeries


def random_profile(rng: np.random.Generator, grid: RadialGrid = DEFAULT_GRID) -> np.ndarray:
    """A random quadratic in ``r`` with O(1) coefficients."""
    r = grid.nodes
    c = rng.normal(size=3)
    return c[0] + c[1] * r + c[2] * r**2


def random_series(
    rng: np.random.Generator,
    pairs: int = 4,
    max_index: int = 3,
    grid: RadialGrid = DEFAULT_GRID,
    axes: tuple = (True, True, True),
    include_mean: bool = False,
) -> SparseFourierSeries:
    """A real series with ``pairs`` conjugate pairs of modes (and optionally a mean term)."""
    terms: dict = {}
    while len(terms) < 2 * pairs:
        k = tuple(int(rng.integers(-max_index, max_index + 1)) if on else 0 for on in axes)
        if k == (0, 0, 0) or k in terms:
            continue
        amp = complex(rng.normal(), rng.normal())
        prof = amp * random_profile(rng, grid)
        terms[k] = prof
        terms[tuple(-i for i in k)] = np.conj(prof)
    if include_mean:
        terms[(0, 0, 0)] = random_profile(rng, grid).astype(complex)
    return SparseFourierSeries(terms, grid)


def random_form(rng: np.random.Generator, degree: int, grid: RadialGrid = DEFAULT_GRID, pairs: int = 3):
    return FoliatedForm(degree, [random_series(rng, pairs, 2, grid, include_mean=True) for _ in basis(degree)], grid)


def random_closed_one_form(
    rng: np.random.Generator, alpha: AlphaSpec, grid: RadialGrid = DEFAULT_GRID, pairs: int = 6
) -> FoliatedForm:
    """``d_F0(h) + (a(r), b(r, theta3))``: exact part plus a cohomology representative.

    Each component carries at most ``2 * pairs + 3`` modes.
    """
    h = random_series(rng, pairs, 3, grid)
    a = SparseFourierSeries.radial(random_profile(rng, grid), grid)
    b = random_series(rng, 1, 2, grid, axes=(False, False, True), include_mean=True)
    exact = d_F0(FoliatedForm.function(h), alpha)
    return exact + FoliatedForm.one_form(a, b)
