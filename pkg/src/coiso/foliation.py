"""Foliated forms on the coisotropic torus bundle and its L-infinity operators.

Forms are written in the coframe dual to the leaf frame ``(X_H, X_3)`` with
``X_H = d/dtheta1 + alpha d/dtheta2`` and ``X_3 = d/dtheta3``.  A degree-``d``
form stores ``binom(2, d)`` component series, ordered by the basis monomials
in ``basis(d)``.  The transverse chart is ``(r, theta1)`` with bivector
``P = (1/r) d_r ^ d_theta1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import fourier as fs
from .arithmetic import AlphaSpec, linear_form
from .errors import ArgumentError, NotClosedError, SolveError
from .fourier import DEFAULT_GRID, TWO_PI, RadialGrid, SparseFourierSeries
from .linfty import OperatorFamily

ROUNDOFF = 1e-13

_BASIS = {0: [()], 1: [(0,), (1,)], 2: [(0, 1)]}


def basis(degree: int) -> list:
    """Basis monomials of the given degree; every degree above 2 is the zero space."""
    if degree < 0:
        raise ArgumentError(f"negative form degree {degree}")
    return _BASIS.get(degree, [])


def _slot(degree: int, mono: tuple) -> int:
    return basis(degree).index(mono)


_NAMES = {0: ["h"], 1: ["f", "g"], 2: ["c"]}


def _wedge_basis(a: tuple, b: tuple):
    """``e_a ^ e_b = sign * e_c``; returns ``(0, None)`` on repeated generators."""
    if set(a) & set(b):
        return 0, None
    merged = a + b
    inversions = sum(1 for i, j in itertools.combinations(range(len(merged)), 2) if merged[i] > merged[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(merged))


class FoliatedForm:
    """An element of the foliated complex; duck-types the ``linfty`` element interface."""

    __slots__ = ("degree", "components", "grid")

    def __init__(self, degree: int, components, grid: RadialGrid | None = None):
        components = tuple(components)
        if len(components) != len(basis(degree)):
            raise ArgumentError(f"degree {degree} needs {len(basis(degree))} components")
        if grid is None:
            grid = components[0].grid if components else DEFAULT_GRID
        for c in components:
            if c.grid != grid:
                raise ArgumentError("components live on different radial grids")
        self.degree = degree
        self.components = components
        self.grid = grid

    @classmethod
    def zero(cls, degree: int, grid: RadialGrid = DEFAULT_GRID):
        return cls(degree, [SparseFourierSeries.zero(grid) for _ in basis(degree)], grid)

    @classmethod
    def function(cls, h: SparseFourierSeries):
        return cls(0, [h], h.grid)

    @classmethod
    def one_form(cls, f: SparseFourierSeries, g: SparseFourierSeries):
        return cls(1, [f, g], f.grid)

    @classmethod
    def two_form(cls, c: SparseFourierSeries):
        return cls(2, [c], c.grid)

    # named component access
    @property
    def h(self):
        self._need(0)
        return self.components[0]

    @property
    def f(self):
        self._need(1)
        return self.components[0]

    @property
    def g(self):
        self._need(1)
        return self.components[1]

    @property
    def c(self):
        self._need(2)
        return self.components[0]

    def _need(self, degree):
        if self.degree != degree:
            raise ArgumentError(f"expected a degree-{degree} form, got degree {self.degree}")

    def _map(self, fn):
        return FoliatedForm(self.degree, [fn(c) for c in self.components], self.grid)

    def __add__(self, other: "FoliatedForm"):
        if other.degree != self.degree:
            raise ArgumentError(f"cannot add forms of degrees {self.degree} and {other.degree}")
        return FoliatedForm(self.degree, [a + b for a, b in zip(self.components, other.components)], self.grid)

    def __neg__(self):
        return self._map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, factor):
        return self._map(lambda c: c.scale(factor))

    __rmul__ = __mul__

    def norm(self) -> float:
        return max((c.norm() for c in self.components), default=0.0)

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(c.is_real(tol) for c in self.components)

    def __repr__(self):
        sizes = ", ".join(str(len(c)) for c in self.components)
        return f"FoliatedForm(degree={self.degree}, terms=[{sizes}])"

    def to_json(self) -> dict:
        names = _NAMES.get(self.degree, [])
        out = {"degree": self.degree}
        for name, comp in zip(names, self.components):
            out[name] = comp.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FoliatedForm":
        degree = int(obj["degree"])
        names = _NAMES.get(degree, [])
        comps = [SparseFourierSeries.from_json(obj[n]) for n in names]
        grid = comps[0].grid if comps else DEFAULT_GRID
        return cls(degree, comps, grid)


def wedge(a: FoliatedForm, b: FoliatedForm) -> FoliatedForm:
    """Exterior product in the leaf coframe (component products are series products)."""
    degree = a.degree + b.degree
    out = [SparseFourierSeries.zero(a.grid) for _ in basis(degree)]
    for ia, ma in enumerate(basis(a.degree)):
        for ib, mb in enumerate(basis(b.degree)):
            sign, mono = _wedge_basis(ma, mb)
            if sign == 0:
                continue
            slot = _slot(degree, mono)
            out[slot] = out[slot] + (a.components[ia] * b.components[ib]).scale(sign)
    return FoliatedForm(degree, out, a.grid)


# -- the leaf frame ---------------------------------------------------------


def x_h(series: SparseFourierSeries, alpha: AlphaSpec) -> SparseFourierSeries:
    """``X_H = d/dtheta1 + alpha d/dtheta2``: mode ``(p, q, m)`` gains ``2 pi i (p + alpha q)``."""
    return series.map_coefficients(lambda k, v: v * (TWO_PI * 1j * linear_form(alpha, k[0], k[1])))


def x_3(series: SparseFourierSeries) -> SparseFourierSeries:
    return fs.derivative(series, "theta3")


def d_F0(form: FoliatedForm, alpha: AlphaSpec) -> FoliatedForm:
    h = form.h
    return FoliatedForm.one_form(x_h(h, alpha), x_3(h))


def d_F1(form: FoliatedForm, alpha: AlphaSpec) -> FoliatedForm:
    return FoliatedForm.two_form(x_h(form.g, alpha) - x_3(form.f))


def d_F(form: FoliatedForm, alpha: AlphaSpec) -> FoliatedForm:
    """The foliated differential on every degree (zero from degree 2 on)."""
    if form.degree == 0:
        return d_F0(form, alpha)
    if form.degree == 1:
        return d_F1(form, alpha)
    return FoliatedForm.zero(form.degree + 1, form.grid)


# -- connection, curvature, bracket ----------------------------------------


@dataclass(frozen=True)
class Connection:
    """Transverse distribution spanned by ``d/dr`` and ``d/dtheta1 - tau(r) X_H``.

    ``tau = 0`` is the flat connection.  The coefficient ``R^1_2 = -tau`` depends
    on ``r`` only, so the correction term of the covariant derivative that
    differentiates ``R`` along the leaf coordinates vanishes.
    """

    alpha: AlphaSpec | None
    grid: RadialGrid = DEFAULT_GRID
    tau: np.ndarray = field(default=None, compare=False, repr=False)
    tau_prime: np.ndarray = field(default=None, compare=False, repr=False)
    kind: str = "flat"
    epsilon: float = fs.CUTOFF_EPSILON

    @classmethod
    def flat(cls, alpha: AlphaSpec | None = None, grid: RadialGrid = DEFAULT_GRID):
        z = np.zeros(grid.n)
        return cls(alpha, grid, z, z, "flat")

    @classmethod
    def cutoff(cls, alpha: AlphaSpec, grid: RadialGrid = DEFAULT_GRID, epsilon: float = fs.CUTOFF_EPSILON):
        r = grid.nodes
        return cls(alpha, grid, fs.cutoff(r, epsilon), fs.cutoff_derivative(r, epsilon), "tau", epsilon)

    @property
    def is_flat(self) -> bool:
        return not np.any(self.tau)

    def connection_coefficient(self) -> np.ndarray:
        """``R^1_2`` on chart 1."""
        return -self.tau

    def leaf_derivative_of_coefficients(self) -> float:
        """Size of the derivatives of ``R`` along the leaf coordinates (always zero)."""
        return 0.0

    @staticmethod
    def chart2_radius(r1, alpha: AlphaSpec):
        """``r2`` from ``r1`` on the level set ``r1^2 + alpha r2^2 = 1/2``."""
        return np.sqrt((0.5 - np.asarray(r1, dtype=float) ** 2) / float(alpha))

    @staticmethod
    def chart1_radius(r2, alpha: AlphaSpec):
        return np.sqrt(0.5 - float(alpha) * np.asarray(r2, dtype=float) ** 2)

    def chart2_xh_coefficient(self, r2):
        """Coefficient of ``X_H`` when the transverse field is written ``alpha d/dtheta2 + c X_H``.

        Equals ``tau(r1(r2)) - 1`` up to the overall sign of the field.
        """
        if self.alpha is None:
            raise ArgumentError("chart 2 needs alpha")
        r1 = self.chart1_radius(r2, self.alpha)
        tau = fs.cutoff(r1, self.epsilon) if self.kind == "tau" else np.zeros_like(r1)
        return tau - 1.0

    def nabla_r(self, s: SparseFourierSeries) -> SparseFourierSeries:
        return fs.derivative(s, "r")

    def nabla_theta(self, s: SparseFourierSeries) -> SparseFourierSeries:
        out = fs.derivative(s, "theta1")
        if self.is_flat:
            return out
        if self.alpha is None:
            raise ArgumentError("a non-flat connection needs alpha")
        return out - x_h(s, self.alpha).scale(self.tau)

    def inverse_radius(self) -> np.ndarray:
        return 1.0 / self.grid.nodes


@dataclass(frozen=True)
class Curvature:
    f112: np.ndarray  # F^1_{12} = -tau'
    raised: np.ndarray  # (1/r) tau'

    def support(self, grid: RadialGrid, tol: float = 0.0) -> np.ndarray:
        return grid.nodes[np.abs(self.f112) > tol]


def curvature(conn: Connection) -> Curvature:
    return Curvature(-conn.tau_prime, conn.tau_prime / conn.grid.nodes)


def bracket_P(a: SparseFourierSeries, b: SparseFourierSeries, conn: Connection) -> SparseFourierSeries:
    """``{a, b}_P = (1/r)(nabla_r a nabla_theta b - nabla_theta a nabla_r b)``."""
    lhs = conn.nabla_r(a) * conn.nabla_theta(b)
    rhs = conn.nabla_theta(a) * conn.nabla_r(b)
    return (lhs - rhs).scale(conn.inverse_radius())


def _nabla_form(form: FoliatedForm, op) -> FoliatedForm:
    return form._map(op)


def l1(form: FoliatedForm, alpha: AlphaSpec) -> FoliatedForm:
    return d_F(form, alpha)


def l2(a: FoliatedForm, b: FoliatedForm, conn: Connection) -> FoliatedForm:
    """``1/2 (1/r)(nabla_r a ^ nabla_theta b - nabla_theta a ^ nabla_r b)`` for any degrees.

    On two 1-forms the coefficient is ``1/2({f1, g2}_P + {f2, g1}_P)``, which is
    symmetric and gives ``{f, g}_P`` on the diagonal.
    """
    ra, ta = _nabla_form(a, conn.nabla_r), _nabla_form(a, conn.nabla_theta)
    rb, tb = _nabla_form(b, conn.nabla_r), _nabla_form(b, conn.nabla_theta)
    out = wedge(ra, tb) - wedge(ta, rb)
    return out * (0.5 * conn.inverse_radius())


def _twist_factor(form: FoliatedForm, conn: Connection) -> SparseFourierSeries:
    """``(1/r) tau'(r) f``: the contraction of the raised curvature with ``form``."""
    return form.f.scale(curvature(conn).raised)


def l_k_reduced(gamma: FoliatedForm, k: int, conn: Connection) -> FoliatedForm:
    """``l_k(G, ..., G) = ((1/r) tau' f)^(k-2) l_2(G, G)`` for ``k >= 3``."""
    if k < 3:
        raise ArgumentError("higher operators start at k = 3")
    gamma._need(1)
    if conn.is_flat:
        return FoliatedForm.zero(2, gamma.grid)
    c = _twist_factor(gamma, conn)
    coeff = l2(gamma, gamma, conn).c
    for _ in range(k - 2):
        coeff = coeff * c
    return FoliatedForm.two_form(coeff)


def l_k(*args: FoliatedForm, conn: Connection) -> FoliatedForm:
    """Polarized ``l_k`` on 1-forms: the symmetrized sum over permutations.

    ``(1/k!) sum_sigma prod_{m=2}^{k-1} c_{sigma(m)} l_2(G_sigma(1), G_sigma(k))``
    with ``c_j = (1/r) tau' f_j``.  The Koszul sign of a permutation of odd
    elements cancels its signature, so every term enters with ``+1``.
    """
    k = len(args)
    if k < 3:
        raise ArgumentError("higher operators start at k = 3")
    for a in args:
        a._need(1)
    grid = args[0].grid
    if conn.is_flat:
        return FoliatedForm.zero(2, grid)
    factors = [_twist_factor(a, conn) for a in args]
    total = SparseFourierSeries.zero(grid)
    for sigma in itertools.permutations(range(k)):
        term = l2(args[sigma[0]], args[sigma[-1]], conn).c
        for m in sigma[1:-1]:
            term = term * factors[m]
        total = total + term
    return FoliatedForm.two_form(total.scale(1.0 / math.factorial(k)))


def y_alpha_family(alpha: AlphaSpec, conn: Connection, max_arity: int = 6) -> OperatorFamily:
    """The operators ``l_1 = d_F``, ``l_2`` and ``l_k`` (3 <= k <= max_arity)."""
    grid = conn.grid
    ops = {1: lambda a: d_F(a, alpha), 2: lambda a, b: l2(a, b, conn)}
    if not conn.is_flat:
        for k in range(3, max_arity + 1):
            ops[k] = lambda *args: l_k(*args, conn=conn)
    return OperatorFamily(ops, zero=lambda d: FoliatedForm.zero(d, grid))


def is_closed(form: FoliatedForm, alpha: AlphaSpec, tol: float = 1e-10) -> bool:
    return d_F(form, alpha).norm() <= tol * max(1.0, form.norm())


def gauge_normalize(gamma: FoliatedForm, alpha: AlphaSpec, tol: float = 1e-10, check_closed: bool = True):
    """Remove the oscillating part of ``f`` by an exact form.

    Solves ``X_H h = f - f_00`` and returns ``(gamma - d_F0(h), h)``, whose first
    component is ``average_00(f)``.  ``check_closed=False`` allows the higher
    Maurer-Cartan coefficients, which are not closed; the shift by an exact form
    leaves ``d_F(gamma)`` unchanged.
    """
    from .solver import solve_XH

    gamma._need(1)
    if check_closed and not is_closed(gamma, alpha, tol):
        raise NotClosedError(f"d_F(gamma) has norm {d_F1(gamma, alpha).norm():.3e}")
    phi = gamma.f - gamma.f.average_00()
    report = solve_XH(phi, alpha, tol)
    if not report.solved:
        raise SolveError(f"gauge fixing failed: {report.status}", report)
    h = FoliatedForm.function(report.solution)
    out = gamma - d_F0(h, alpha)
    # closedness makes the non-(0,0) part of g cancel; drop what rounding leaves behind
    floor = ROUNDOFF * max(1.0, gamma.norm())
    return out._map(lambda c: c.pruned(floor)), h
