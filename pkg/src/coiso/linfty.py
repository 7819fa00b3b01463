"""Graded-algebra combinatorics and the order-by-order Maurer-Cartan recursion.

Elements are handled through duck typing only: they must support ``+``,
multiplication by a scalar, ``.norm()`` and a ``.degree`` attribute.  Permutations
are 0-based tuples ``images`` with ``images[i] = sigma(i)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

from .errors import ArgumentError

Permutation = tuple[int, ...]
Operator = Callable[..., object]


def _check_perm(perm: Sequence[int], degrees: Sequence[int]) -> None:
    if len(perm) != len(degrees):
        raise ArgumentError(
            f"permutation of length {len(perm)} applied to {len(degrees)} degrees"
        )
    if sorted(perm) != list(range(len(perm))):
        raise ArgumentError(f"{tuple(perm)} is not a permutation of 0..{len(perm) - 1}")


def permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(perm)), 2) if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of ``perm`` acting on homogeneous elements of the given degrees.

    Counts the interchanges of two odd-degree elements needed to reorder
    ``v_0 ... v_{k-1}`` into ``v_{perm(0)} ... v_{perm(k-1)}``.
    """
    _check_perm(perm, degrees)
    swaps = 0
    for a, b in itertools.combinations(range(len(perm)), 2):
        if perm[a] > perm[b] and degrees[perm[a]] % 2 and degrees[perm[b]] % 2:
            swaps += 1
    return -1 if swaps % 2 else 1


def antisymmetric_koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    return permutation_sign(perm) * koszul_sign(perm, degrees)


def unshuffles(j: int, k_minus_1: int) -> list[Permutation]:
    """All (j, k-1)-unshuffles of ``j + k - 1`` elements.

    The images are increasing on the first ``j`` slots and on the remaining
    ``k - 1`` slots; there are ``binomial(j + k - 1, j)`` of them.
    """
    if j < 1 or k_minus_1 < 0:
        raise ArgumentError(f"invalid unshuffle arities ({j}, {k_minus_1})")
    n = j + k_minus_1
    result = []
    for head in itertools.combinations(range(n), j):
        tail = tuple(i for i in range(n) if i not in head)
        result.append(head + tail)
    return result


def compose_operators(mu: Operator, k: int, nu: Operator, j: int, nu_degree: int) -> Operator:
    """Return ``mu o nu`` of arity ``j + k - 1``.

    ``mu`` has arity ``k``, ``nu`` arity ``j`` and (operator) degree ``nu_degree``.
    The composite is the unshuffle sum with sign ``(-1)^deg(nu) chi(sigma)``.
    """
    outer_sign = -1 if nu_degree % 2 else 1
    perms = unshuffles(j, k - 1)

    def composite(*args):
        if len(args) != j + k - 1:
            raise ArgumentError(f"composite expects {j + k - 1} arguments, got {len(args)}")
        degrees = [a.degree for a in args]
        total = None
        for sigma in perms:
            sign = outer_sign * antisymmetric_koszul_sign(sigma, degrees)
            inner = nu(*(args[s] for s in sigma[:j]))
            term = mu(inner, *(args[s] for s in sigma[j:])) * sign
            total = term if total is None else total + term
        return total

    return composite


@dataclass(frozen=True)
class OperatorFamily:
    """Arity-indexed operators ``k -> l_k``; missing arities are zero.

    Operator ``l_k`` carries degree ``2 - k``.  Only flat families (no ``l_0``)
    are supported.
    """

    ops: dict[int, Operator]
    zero: Callable[[int], object] = field(repr=False, default=None)

    def __post_init__(self):
        if 0 in self.ops:
            raise ArgumentError("weak (l_0 != 0) families are not supported")

    @staticmethod
    def degree(k: int) -> int:
        return 2 - k

    def get(self, k: int) -> Operator | None:
        return self.ops.get(k)


def coherence_operator(family: OperatorFamily, n: int) -> Operator:
    """``sum_{i+j=n} l_i o l_j`` as an operator of arity ``n - 1``."""
    pieces = []
    for i in range(1, n):
        j = n - i
        li, lj = family.get(i), family.get(j)
        if li is None or lj is None:
            continue
        pieces.append(compose_operators(li, i, lj, j, family.degree(j)))

    def total(*args):
        out = None
        for p in pieces:
            v = p(*args)
            out = v if out is None else out + v
        return out

    return total


def check_coherence(family: OperatorFamily, n: int, probes) -> float:
    """Largest norm of ``sum_{i+j=n} l_i o l_j`` over the probe tuples."""
    op = coherence_operator(family, n)
    worst = 0.0
    for probe in probes:
        if len(probe) != n - 1:
            raise ArgumentError(f"relation {n} needs probes of arity {n - 1}, got {len(probe)}")
        value = op(*probe)
        if value is not None:
            worst = max(worst, float(value.norm()))
    return worst


def compositions(total: int, parts: int, largest: int):
    """Ordered tuples of ``parts`` integers in ``[1, largest]`` summing to ``total``."""
    if parts == 1:
        if 1 <= total <= largest:
            yield (total,)
        return
    for first in range(1, min(largest, total - parts + 1) + 1):
        for rest in compositions(total - first, parts - 1, largest):
            yield (first,) + rest


@dataclass
class FormalSolution:
    """Coefficients ``Gamma_1 .. Gamma_K`` of ``Gamma_t = sum Gamma_i t^i``."""

    coefficients: list

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int):
        return self.coefficients[i - 1]


def obstruction_rhs(family: OperatorFamily, prefix: Sequence, i: int):
    """Right-hand side of the order-``i`` Maurer-Cartan equation.

    With ``l_1 = d`` the equation at order ``i`` reads ``-d Gamma_i = rhs``, where
    ``rhs = sum_{k>=2} 1/k! sum l_k(Gamma_{j_1}, ..., Gamma_{j_k})`` over ordered
    tuples with ``j_1 + ... + j_k = i``.  ``prefix[0]`` is ``Gamma_1``.
    """
    if i < 2:
        raise ArgumentError("obstructions start at order 2")
    if len(prefix) < i - 1:
        raise ArgumentError(f"order {i} needs Gamma_1..Gamma_{i - 1}, got {len(prefix)}")
    total = None
    for k in range(2, i + 1):
        lk = family.get(k)
        if lk is None:
            continue
        coeff = 1.0 / math.factorial(k)
        for combo in compositions(i, k, i - 1):
            term = lk(*(prefix[j - 1] for j in combo)) * coeff
            total = term if total is None else total + term
    if total is None and family.zero is not None:
        total = family.zero(2)
    return total


def mc_residual(family: OperatorFamily, solution: Sequence, i: int):
    """Order-``i`` coefficient of ``sum_k 1/k! l_k(Gamma_t, ..., Gamma_t)``."""
    terms = [solution[i - 1]] if i <= len(solution) else []
    out = family.get(1)(terms[0]) if terms else None
    rhs = obstruction_rhs(family, solution, i) if i >= 2 else None
    parts = [p for p in (out, rhs) if p is not None]
    return reduce(lambda a, b: a + b, parts) if parts else None
