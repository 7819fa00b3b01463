"""Deformations of a coisotropic torus bundle: arithmetic of the rotation number,
sparse Fourier analysis on the leaves, the L-infinity operators of the foliated
complex, and the obstruction and continuation pipelines."""

from .arithmetic import (
    DecimalAlpha,
    LiouvilleSeries,
    QuadraticIrrational,
    Rational,
    classify,
    continued_fraction,
    convergents,
    liouville_constant,
    small_divisor,
)
from .errors import CoisoError
from .foliation import Connection, FoliatedForm, d_F0, d_F1, gauge_normalize, l2, l_k
from .fourier import RadialGrid, SparseFourierSeries
from .haefliger import RegularCover, coboundary_test, regular_cover_reduce
from .obstruction import first_obstruction, mc_continue
from .solver import solve_rotation, solve_XH, witness_liouville, witness_rational

__all__ = [
    "CoisoError",
    "Connection",
    "DecimalAlpha",
    "FoliatedForm",
    "LiouvilleSeries",
    "QuadraticIrrational",
    "RadialGrid",
    "Rational",
    "RegularCover",
    "SparseFourierSeries",
    "classify",
    "coboundary_test",
    "continued_fraction",
    "convergents",
    "d_F0",
    "d_F1",
    "first_obstruction",
    "gauge_normalize",
    "l2",
    "l_k",
    "liouville_constant",
    "mc_continue",
    "regular_cover_reduce",
    "small_divisor",
    "solve_XH",
    "solve_rotation",
    "witness_liouville",
    "witness_rational",
]
